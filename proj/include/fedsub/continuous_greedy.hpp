#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fedsub/ground_set.hpp"
#include "fedsub/matroid.hpp"
#include "fedsub/multilinear.hpp"
#include "fedsub/objective.hpp"
#include "fedsub/rng.hpp"

namespace fedsub {

/// Parameters of a continuous-greedy run. Defaults mirror the federated
/// experiments: eta = 0.01, 100 rounds, 10 gradient samples.
struct GreedyConfig {
    double eta = 0.01;
    int rounds = 100;
    int n_samples = 10;

    void validate() const {
        if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("GreedyConfig: eta in (0,1)");
        if (rounds < 0) throw std::invalid_argument("GreedyConfig: rounds must be >= 0");
        if (n_samples < 1) throw std::invalid_argument("GreedyConfig: n_samples must be >= 1");
    }
};

struct StepResult {
    FractionalPoint x;
    GradientVector w;
};

/// One Frank-Wolfe style ascent step on the multilinear extension:
/// w = LMO(grad F(x)), x' = clamp(x + eta * w). Clamping (rather than a
/// stop-on-exit rule) keeps x a valid fractional point for any schedule.
template <SetObjective F>
StepResult continuous_greedy_step(const F& f, const FractionalPoint& x, const GreedyConfig& cfg,
                                  const MatroidConstraint& c, Rng& rng) {
    const GradientEstimate grad = multilinear_gradient(f, x, cfg.n_samples, rng);
    GradientVector w = linear_maximization_oracle(grad.grad, c);
    std::vector<double> next = x.coords();
    for (std::size_t e = 0; e < next.size(); ++e) next[e] += cfg.eta * w[e];
    return StepResult{FractionalPoint::clamped(std::move(next)), std::move(w)};
}

struct ContinuousGreedyResult {
    FractionalPoint x;
    ElementSubset solution;
    std::vector<double> value_trace;  // sampled F(x) after each step
};

/// Run T steps of continuous greedy from x = 0 and round the result to the
/// top-rank subset. stream_id selects the per-step RNG streams so that a
/// federated client and a standalone run can share identical draws.
template <SetObjective F>
ContinuousGreedyResult run_continuous_greedy(const F& f, const GreedyConfig& cfg,
                                             const MatroidConstraint& c, std::uint64_t base_seed,
                                             std::uint64_t stream_id = 0) {
    cfg.validate();
    ContinuousGreedyResult out;
    out.x = FractionalPoint(f.universe_size());
    out.value_trace.reserve(static_cast<std::size_t>(cfg.rounds));
    for (int t = 1; t <= cfg.rounds; ++t) {
        Rng step_rng(derive_seed(base_seed, {stream::client_step, stream_id,
                                             static_cast<std::uint64_t>(t)}));
        StepResult step = continuous_greedy_step(f, out.x, cfg, c, step_rng);
        out.x = std::move(step.x);
        Rng trace_rng(derive_seed(base_seed, {stream::trace, stream_id,
                                              static_cast<std::uint64_t>(t)}));
        out.value_trace.push_back(multilinear_value(f, out.x, cfg.n_samples, trace_rng));
    }
    out.solution = round_to_subset(out.x, c);
    return out;
}

}  // namespace fedsub
