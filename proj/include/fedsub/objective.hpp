#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "fedsub/distance.hpp"
#include "fedsub/ground_set.hpp"

namespace fedsub {

/// A monotone set objective over a fixed universe. value() takes a dense
/// 0/1 membership mask; the mask form is what the sampling estimators use
/// in their inner loops.
template <typename F>
concept SetObjective = requires(const F& f, std::span<const std::uint8_t> mask) {
    { f.universe_size() } -> std::convertible_to<std::size_t>;
    { f.value(mask) } -> std::convertible_to<double>;
};

/// Optional fast path for the sampled multilinear gradient: add this
/// sample's per-coordinate differences f(S u {e}) - f(S \ {e}) into accum.
/// Must agree with the generic mask-toggling evaluation.
template <typename F>
concept HasSampleGradientKernel = requires(const F& f, std::span<const std::uint8_t> mask,
                                           std::span<double> accum) {
    { f.add_sample_gradient(mask, accum) };
};

template <SetObjective F>
double objective_value(const F& f, const ElementSubset& s) {
    const auto mask = s.to_mask(f.universe_size());
    return f.value(std::span<const std::uint8_t>(mask));
}

/// Additive set function f(S) = sum of per-element weights. Exactly
/// solvable, which makes it the reference case in tests.
class ModularObjective {
public:
    explicit ModularObjective(std::vector<double> weights) : weights_(std::move(weights)) {}

    std::size_t universe_size() const { return weights_.size(); }

    double value(std::span<const std::uint8_t> mask) const {
        double total = 0.0;
        for (std::size_t e = 0; e < weights_.size(); ++e) {
            if (mask[e]) total += weights_[e];
        }
        return total;
    }

    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> weights_;
};

/// Facility location objective over a private demand set:
///   f(S) = sum over demand points of max over s in S of (1 - d(p, s)),
/// with f(empty) = 0. Similarities are precomputed into a demand x ground
/// matrix at construction since f is evaluated thousands of times per run.
class FacilityLocationObjective {
public:
    FacilityLocationObjective(const std::vector<std::vector<double>>& demand,
                              const GroundSet& ground, DistanceMetric metric,
                              double diameter = 0.0)
        : n_demand_(demand.size()), n_ground_(ground.size()) {
        if (demand.empty()) {
            throw std::invalid_argument("FacilityLocationObjective: empty demand set");
        }
        sim_.resize(n_demand_ * n_ground_);
        for (std::size_t p = 0; p < n_demand_; ++p) {
            for (std::size_t e = 0; e < n_ground_; ++e) {
                const double d = normalized_distance(
                    demand[p], ground.feature(static_cast<ElementId>(e)), metric, diameter);
                sim_[p * n_ground_ + e] = 1.0 - d;
            }
        }
    }

    std::size_t universe_size() const { return n_ground_; }
    std::size_t demand_size() const { return n_demand_; }

    double similarity(std::size_t demand_idx, ElementId e) const {
        return sim_[demand_idx * n_ground_ + static_cast<std::size_t>(e)];
    }

    double value(std::span<const std::uint8_t> mask) const {
        double total = 0.0;
        for (std::size_t p = 0; p < n_demand_; ++p) {
            const double* row = sim_.data() + p * n_ground_;
            double best = 0.0;
            for (std::size_t e = 0; e < n_ground_; ++e) {
                if (mask[e] && row[e] > best) best = row[e];
            }
            total += best;
        }
        return total;
    }

    /// Sample-gradient kernel: one pass over the similarity matrix using
    /// the per-demand best and runner-up members of S.
    void add_sample_gradient(std::span<const std::uint8_t> mask, std::span<double> accum) const {
        for (std::size_t p = 0; p < n_demand_; ++p) {
            const double* row = sim_.data() + p * n_ground_;
            // best and second-best similarity among members of S
            double best = 0.0, second = 0.0;
            std::size_t best_e = n_ground_;
            for (std::size_t e = 0; e < n_ground_; ++e) {
                if (!mask[e]) continue;
                if (best_e == n_ground_ || row[e] > best) {
                    second = (best_e == n_ground_) ? 0.0 : best;
                    best = row[e];
                    best_e = e;
                } else if (row[e] > second) {
                    second = row[e];
                }
            }
            for (std::size_t e = 0; e < n_ground_; ++e) {
                if (mask[e]) {
                    // f(S u {e}) = f(S); dropping e matters only for the argmax
                    if (e == best_e) accum[e] += best - second;
                } else {
                    const double gain = row[e] - best;
                    if (gain > 0.0) accum[e] += gain;
                }
            }
        }
    }

private:
    std::size_t n_demand_ = 0;
    std::size_t n_ground_ = 0;
    std::vector<double> sim_;  // row-major demand x ground
};

static_assert(SetObjective<ModularObjective>);
static_assert(SetObjective<FacilityLocationObjective>);
static_assert(HasSampleGradientKernel<FacilityLocationObjective>);
static_assert(!HasSampleGradientKernel<ModularObjective>);

}  // namespace fedsub
