#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedsub/attacks.hpp"
#include "fedsub/continuous_greedy.hpp"
#include "fedsub/ground_set.hpp"
#include "fedsub/matroid.hpp"
#include "fedsub/multilinear.hpp"
#include "fedsub/objective.hpp"
#include "fedsub/rng.hpp"
#include "fedsub/robust_agg.hpp"

namespace fedsub {

enum class Aggregator { mean, geometric_median, robustfsm, robustfsm_sim, robustfsm_div };

inline std::string to_string(Aggregator a) {
    switch (a) {
        case Aggregator::mean: return "mean";
        case Aggregator::geometric_median: return "geometric_median";
        case Aggregator::robustfsm: return "robustfsm";
        case Aggregator::robustfsm_sim: return "robustfsm_sim";
        case Aggregator::robustfsm_div: return "robustfsm_div";
    }
    throw std::logic_error("unknown aggregator");
}

inline Aggregator parse_aggregator(const std::string& s) {
    if (s == "mean") return Aggregator::mean;
    if (s == "geometric_median") return Aggregator::geometric_median;
    if (s == "robustfsm") return Aggregator::robustfsm;
    if (s == "robustfsm_sim") return Aggregator::robustfsm_sim;
    if (s == "robustfsm_div") return Aggregator::robustfsm_div;
    throw std::invalid_argument("unknown aggregator: " + s);
}

struct ParticipationPolicy {
    enum class Mode { full, partial };

    Mode mode = Mode::full;
    int k = 0;  // participants per round in partial mode

    static ParticipationPolicy full() { return {}; }
    static ParticipationPolicy partial(int k) {
        if (k < 1) throw std::invalid_argument("ParticipationPolicy: k must be >= 1");
        return ParticipationPolicy{Mode::partial, k};
    }
};

/// A simulated client: private objective, honesty flag, and attack spec.
/// Per-round RNG streams are derived from (run seed, id, round), so client
/// evaluation order never affects results.
template <SetObjective F>
struct ClientState {
    int id = 0;
    F objective;
    AttackSpec attack;  // kind == none means honest

    bool honest() const { return attack.kind == AttackKind::none; }
};

struct FedConfig {
    GreedyConfig greedy;
    ParticipationPolicy participation = ParticipationPolicy::full();
    Aggregator aggregator = Aggregator::mean;
    double coreset_q = kDefaultCoresetFraction;
};

/// Everything observed in one aggregation round.
struct RoundRecord {
    int round = 0;
    std::vector<int> participants;
    std::vector<GradientVector> uploads;      // aligned with participants
    std::vector<FractionalPoint> candidates;  // one entry, or {sim, div} for robustfsm
    std::vector<int> coreset_sim;             // client ids, robustfsm aggregators only
    std::vector<int> coreset_div;
    std::vector<std::int8_t> votes;  // robustfsm only: per client, 0 = sim, 1 = div
    int committed = -1;              // robustfsm only: index into candidates
    FractionalPoint x_after;
};

template <SetObjective F>
struct FedRunResult {
    FractionalPoint x;
    ElementSubset solution;
    std::vector<RoundRecord> rounds;
};

/// Coordinate-wise arithmetic mean of a nonempty gradient list.
inline GradientVector mean_aggregate(const std::vector<GradientVector>& gradients) {
    if (gradients.empty()) throw std::invalid_argument("mean_aggregate: empty gradient list");
    GradientVector out(gradients.front().size(), 0.0);
    for (const GradientVector& g : gradients) {
        if (g.size() != out.size()) throw std::invalid_argument("mean_aggregate: length mismatch");
        for (std::size_t e = 0; e < out.size(); ++e) out[e] += g[e];
    }
    for (double& v : out) v /= static_cast<double>(gradients.size());
    return out;
}

/// Merge this round's fresh gradients into the per-client cache and return
/// the pooled view: fresh uploads for participants, the last submitted
/// gradient for everyone else (zero for clients never yet sampled).
inline std::vector<GradientVector> stale_gradient_pool(const std::vector<int>& participants,
                                                       const std::vector<GradientVector>& fresh,
                                                       std::vector<GradientVector>& cache) {
    if (participants.size() != fresh.size()) {
        throw std::invalid_argument("stale_gradient_pool: participants/gradients mismatch");
    }
    for (std::size_t i = 0; i < participants.size(); ++i) {
        cache.at(static_cast<std::size_t>(participants[i])) = fresh[i];
    }
    return cache;
}

/// Per-run adversary bookkeeping: frozen target sets per client. A target
/// freezes the first time the broadcast solution is informative (not all
/// coordinates equal); until then it is recomputed transiently.
class AdversaryContext {
public:
    ElementSubset resolve_target(const AttackSpec& spec, int client_id,
                                 const FractionalPoint& x_prev, const MatroidConstraint& c) {
        if (spec.target_policy == TargetPolicy::explicit_set) {
            return ElementSubset(spec.explicit_targets);
        }
        if (spec.refresh == TargetRefresh::per_round) {
            return choose_target_set(spec.target_policy, x_prev, c);
        }
        if (auto it = frozen_.find(client_id); it != frozen_.end()) return it->second;
        ElementSubset target = choose_target_set(spec.target_policy, x_prev, c);
        if (informative(x_prev)) frozen_.emplace(client_id, target);
        return target;
    }

private:
    static bool informative(const FractionalPoint& x) {
        if (x.size() == 0) return false;
        const double first = x[0];
        for (std::size_t i = 1; i < x.size(); ++i) {
            if (std::abs(x[i] - first) > 1e-15) return true;
        }
        return false;
    }

    std::map<int, ElementSubset> frozen_;
};

/// One client step: the honest path runs a continuous-greedy oracle step
/// (gradient estimate + linear maximization) at the broadcast solution;
/// malicious clients produce their attack gradient instead. Either way the
/// upload is polytope-valid.
template <SetObjective F>
GradientVector client_local_step(const ClientState<F>& client, const FractionalPoint& x_global,
                                 const GreedyConfig& cfg, const MatroidConstraint& c,
                                 AdversaryContext& adversary, Rng& rng) {
    switch (client.attack.kind) {
        case AttackKind::none: {
            const GradientEstimate grad =
                multilinear_gradient(client.objective, x_global, cfg.n_samples, rng);
            return linear_maximization_oracle(grad.grad, c);
        }
        case AttackKind::random:
            return random_attack(c, rng);
        case AttackKind::reverse:
            return reverse_attack(x_global, c);
        case AttackKind::include:
            return include_attack(
                x_global, adversary.resolve_target(client.attack, client.id, x_global, c), c);
        case AttackKind::exclude:
            return exclude_attack(
                client.objective, x_global,
                adversary.resolve_target(client.attack, client.id, x_global, c), c, cfg.n_samples,
                rng);
    }
    throw std::logic_error("unknown attack kind");
}

namespace detail {

template <SetObjective F>
std::vector<std::int8_t> poll_candidate_votes(const std::vector<ClientState<F>>& clients,
                                              const CandidatePair& pair,
                                              const MatroidConstraint& c) {
    std::vector<std::int8_t> votes(clients.size(), 0);
    for (std::size_t i = 0; i < clients.size(); ++i) {
        votes[i] = client_select_candidate(clients[i].objective, pair, c) == CandidateChoice::div
                       ? std::int8_t{1}
                       : std::int8_t{0};
    }
    return votes;
}

}  // namespace detail

/// Run the federated protocol for cfg.greedy.rounds aggregation rounds.
///
/// Each round: select participants, broadcast the current solution (the
/// candidate pair for the dual-coreset aggregator), collect one local step
/// from every participant, reject any upload failing the polytope validity
/// check, aggregate, and update the global solution with clamping.
///
/// The dual-coreset aggregator keeps two persistent solution chains, one
/// per coreset objective. Clients pick which chain to improve with their
/// own objective (ties toward the similar chain), and a client majority
/// vote selects the chain reported as the round's solution and, after the
/// last round, the final one.
template <SetObjective F>
FedRunResult<F> run_fedcg(const std::vector<ClientState<F>>& clients,
                          const MatroidConstraint& c, const FedConfig& cfg,
                          std::uint64_t run_seed) {
    if (clients.empty()) throw std::invalid_argument("run_fedcg: need at least one client");
    cfg.greedy.validate();
    const int n = static_cast<int>(clients.size());
    if (cfg.participation.mode == ParticipationPolicy::Mode::partial && cfg.participation.k > n) {
        throw std::invalid_argument("run_fedcg: participation k exceeds client count");
    }
    const std::size_t universe = clients.front().objective.universe_size();
    for (const auto& client : clients) {
        if (client.objective.universe_size() != universe) {
            throw std::invalid_argument("run_fedcg: clients disagree on universe size");
        }
        client.attack.validate(static_cast<int>(universe));
    }

    FedRunResult<F> out;
    FractionalPoint x(universe);
    CandidatePair pair{x, x};
    std::vector<GradientVector> cache(clients.size(), GradientVector(universe, 0.0));
    AdversaryContext adversary;
    const bool dual = cfg.aggregator == Aggregator::robustfsm;

    for (int t = 1; t <= cfg.greedy.rounds; ++t) {
        RoundRecord rec;
        rec.round = t;

        if (cfg.participation.mode == ParticipationPolicy::Mode::full) {
            rec.participants.resize(clients.size());
            for (int i = 0; i < n; ++i) rec.participants[static_cast<std::size_t>(i)] = i;
        } else {
            Rng part_rng(derive_seed(run_seed, {stream::participation,
                                                static_cast<std::uint64_t>(t)}));
            rec.participants = part_rng.sample_without_replacement(n, cfg.participation.k);
        }

        rec.uploads.reserve(rec.participants.size());
        for (int id : rec.participants) {
            const ClientState<F>& client = clients[static_cast<std::size_t>(id)];
            const FractionalPoint& base =
                dual ? (client_select_candidate(client.objective, pair, c) == CandidateChoice::div
                            ? pair.div
                            : pair.sim)
                     : x;
            Rng step_rng(derive_seed(run_seed, {stream::client_step,
                                                static_cast<std::uint64_t>(client.id),
                                                static_cast<std::uint64_t>(t)}));
            GradientVector w = client_local_step(client, base, cfg.greedy, c, adversary, step_rng);
            if (!polytope_contains(w, c, kPolytopeTol)) {
                throw std::runtime_error("run_fedcg: client " + std::to_string(client.id) +
                                         " uploaded a gradient outside the polytope");
            }
            rec.uploads.push_back(std::move(w));
        }

        switch (cfg.aggregator) {
            case Aggregator::mean: {
                x = detail::apply_update(x, mean_aggregate(rec.uploads), cfg.greedy.eta);
                rec.candidates = {x};
                break;
            }
            case Aggregator::geometric_median: {
                x = detail::apply_update(x, geometric_median(rec.uploads), cfg.greedy.eta);
                rec.candidates = {x};
                break;
            }
            case Aggregator::robustfsm_sim:
            case Aggregator::robustfsm_div: {
                const auto pool = stale_gradient_pool(rec.participants, rec.uploads, cache);
                const bool similar = cfg.aggregator == Aggregator::robustfsm_sim;
                auto ids = coreset(pool, cfg.coreset_q,
                                   similar ? CoresetObjective::max_similar
                                           : CoresetObjective::max_diverse,
                                   c.rank);
                x = detail::apply_update(x, detail::mean_of(pool, ids), cfg.greedy.eta);
                (similar ? rec.coreset_sim : rec.coreset_div) = std::move(ids);
                rec.candidates = {x};
                break;
            }
            case Aggregator::robustfsm: {
                const auto pool = stale_gradient_pool(rec.participants, rec.uploads, cache);
                // Each candidate is a persistent chain advanced by its own
                // coreset mean; a one-step detour from a shared base would
                // never let the clean aggregation compound.
                rec.coreset_sim = coreset(pool, cfg.coreset_q, CoresetObjective::max_similar,
                                          c.rank);
                rec.coreset_div = coreset(pool, cfg.coreset_q, CoresetObjective::max_diverse,
                                          c.rank);
                pair.sim = detail::apply_update(pair.sim, detail::mean_of(pool, rec.coreset_sim),
                                                cfg.greedy.eta);
                pair.div = detail::apply_update(pair.div, detail::mean_of(pool, rec.coreset_div),
                                                cfg.greedy.eta);
                rec.votes = detail::poll_candidate_votes(clients, pair, c);
                int div_votes = 0;
                for (std::int8_t v : rec.votes) div_votes += v;
                rec.committed = (2 * div_votes > n) ? 1 : 0;
                x = rec.committed == 1 ? pair.div : pair.sim;
                rec.candidates = {pair.sim, pair.div};
                break;
            }
        }

        rec.x_after = x;
        out.rounds.push_back(std::move(rec));
    }

    out.x = x;
    out.solution = round_to_subset(x, c);
    return out;
}

}  // namespace fedsub
