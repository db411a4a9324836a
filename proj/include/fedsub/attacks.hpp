#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedsub/ground_set.hpp"
#include "fedsub/matroid.hpp"
#include "fedsub/multilinear.hpp"
#include "fedsub/objective.hpp"
#include "fedsub/rng.hpp"

namespace fedsub {

enum class AttackKind { none, random, reverse, include, exclude };

/// How a targeted attack picks its element set E0 from the global solution.
enum class TargetPolicy { worst_r, top_r, explicit_set };

/// Whether E0 tracks the global solution every round or locks on once the
/// solution first becomes informative (non-constant). A locked target lets
/// the adversary concentrate on a fixed victim set instead of chasing the
/// rotating bottom of the ranking.
enum class TargetRefresh { frozen, per_round };

struct AttackSpec {
    AttackKind kind = AttackKind::none;
    TargetPolicy target_policy = TargetPolicy::worst_r;
    std::vector<ElementId> explicit_targets;
    TargetRefresh refresh = TargetRefresh::frozen;

    void validate(int universe_size) const {
        if (target_policy == TargetPolicy::explicit_set) {
            if (explicit_targets.empty()) {
                throw std::invalid_argument("AttackSpec: explicit target set must be nonempty");
            }
            for (ElementId e : explicit_targets) {
                if (e < 0 || e >= universe_size) {
                    throw std::invalid_argument("AttackSpec: explicit target out of range");
                }
            }
        }
    }
};

inline std::string to_string(AttackKind k) {
    switch (k) {
        case AttackKind::none: return "none";
        case AttackKind::random: return "random";
        case AttackKind::reverse: return "reverse";
        case AttackKind::include: return "include";
        case AttackKind::exclude: return "exclude";
    }
    throw std::logic_error("unknown attack kind");
}

inline AttackKind parse_attack_kind(const std::string& s) {
    if (s == "none") return AttackKind::none;
    if (s == "random") return AttackKind::random;
    if (s == "reverse") return AttackKind::reverse;
    if (s == "include") return AttackKind::include;
    if (s == "exclude") return AttackKind::exclude;
    throw std::invalid_argument("unknown attack kind: " + s);
}

/// Pick E0 from the current global solution: its rank worst-ranked or
/// top-ranked coordinates (ties toward the lower index), or a fixed set.
inline ElementSubset choose_target_set(TargetPolicy policy, const FractionalPoint& x_prev,
                                       const MatroidConstraint& c,
                                       const std::vector<ElementId>& explicit_targets = {}) {
    switch (policy) {
        case TargetPolicy::top_r:
            return round_to_subset(x_prev, c);
        case TargetPolicy::worst_r: {
            std::vector<double> negated(x_prev.size());
            for (std::size_t i = 0; i < x_prev.size(); ++i) negated[i] = -x_prev[i];
            std::vector<ElementId> members;
            for (int i : detail::top_k_indices(negated, c.rank)) members.push_back(i);
            return ElementSubset(std::move(members));
        }
        case TargetPolicy::explicit_set:
            if (explicit_targets.empty()) {
                throw std::invalid_argument("choose_target_set: empty explicit target set");
            }
            return ElementSubset(explicit_targets);
    }
    throw std::logic_error("unknown target policy");
}

/// Untargeted noise: a uniformly random basis vertex of the polytope
/// (indicator of a random rank-subset). Staying on the vertex set keeps
/// the fake upload indistinguishable in shape from honest uploads, which
/// are themselves sparse 0/1 oracle outputs.
inline GradientVector random_attack(const MatroidConstraint& c, Rng& rng) {
    GradientVector w(static_cast<std::size_t>(c.universe_size), 0.0);
    for (int i : rng.sample_without_replacement(c.universe_size, c.rank)) {
        w[static_cast<std::size_t>(i)] = 1.0;
    }
    return w;
}

/// Preference reversal: the basis vertex minimizing <x_prev, w>, i.e. the
/// indicator of the rank lowest-ranked coordinates of the global solution.
inline GradientVector reverse_attack(const FractionalPoint& x_prev, const MatroidConstraint& c) {
    return linear_minimization_over_bases(x_prev.coords(), c);
}

/// Targeted promotion of E0. Closed form per element e in E0:
///   w[e] = min(1, rank/|E0|) + mean(x_prev on E0) - x_prev[e],
/// which equalizes x_prev + w across E0; zero outside E0. The raw value is
/// clamped into [0,1] and the E0 block rescaled if its sum exceeds the
/// rank, so the upload always passes the server validity check.
inline GradientVector include_attack(const FractionalPoint& x_prev, const ElementSubset& e0,
                                     const MatroidConstraint& c) {
    if (e0.empty()) throw std::invalid_argument("include_attack: empty target set");
    const double m = static_cast<double>(e0.size());
    double mean_on_e0 = 0.0;
    for (ElementId e : e0) mean_on_e0 += x_prev[static_cast<std::size_t>(e)];
    mean_on_e0 /= m;
    const double level = std::min(1.0, static_cast<double>(c.rank) / m) + mean_on_e0;

    GradientVector w(x_prev.size(), 0.0);
    double sum = 0.0;
    for (ElementId e : e0) {
        const double raw = level - x_prev[static_cast<std::size_t>(e)];
        const double clamped = std::clamp(raw, 0.0, 1.0);
        w[static_cast<std::size_t>(e)] = clamped;
        sum += clamped;
    }
    if (sum > static_cast<double>(c.rank)) {
        const double scale = static_cast<double>(c.rank) / sum;
        for (ElementId e : e0) w[static_cast<std::size_t>(e)] *= scale;
    }
    return w;
}

/// Targeted suppression of E0: run the honest local step with the
/// attacker's own objective, then zero the E0 coordinates. Zeroing only
/// decreases the vector, so validity is preserved.
template <SetObjective F>
GradientVector exclude_attack(const F& client_fn, const FractionalPoint& x_prev,
                              const ElementSubset& e0, const MatroidConstraint& c,
                              int n_samples, Rng& rng) {
    if (e0.empty()) throw std::invalid_argument("exclude_attack: empty target set");
    const GradientEstimate grad = multilinear_gradient(client_fn, x_prev, n_samples, rng);
    GradientVector w = linear_maximization_oracle(grad.grad, c);
    for (ElementId e : e0) w[static_cast<std::size_t>(e)] = 0.0;
    return w;
}

}  // namespace fedsub
