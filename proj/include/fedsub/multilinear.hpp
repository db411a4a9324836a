#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "fedsub/ground_set.hpp"
#include "fedsub/objective.hpp"
#include "fedsub/rng.hpp"

namespace fedsub {

struct GradientEstimate {
    std::vector<double> grad;
    int sample_count = 0;
};

namespace detail {

/// Draw S ~ x by independent coordinate inclusion, consuming exactly one
/// uniform per coordinate in index order. The fixed consumption pattern is
/// part of the reproducibility contract.
inline void sample_mask(const FractionalPoint& x, Rng& rng, std::vector<std::uint8_t>& mask) {
    mask.resize(x.size());
    for (std::size_t e = 0; e < x.size(); ++e) {
        mask[e] = rng.uniform01() < x[e] ? 1 : 0;
    }
}

}  // namespace detail

/// Monte-Carlo estimate of the multilinear extension F(x) = E[f(S)] with
/// S ~ x. Exact whenever x is a 0/1 vector (the sample distribution is
/// degenerate).
template <SetObjective F>
double multilinear_value(const F& f, const FractionalPoint& x, int n_samples, Rng& rng) {
    if (x.size() != f.universe_size()) {
        throw std::invalid_argument("multilinear_value: dimension mismatch");
    }
    if (n_samples < 1) throw std::invalid_argument("multilinear_value: n_samples must be >= 1");
    std::vector<std::uint8_t> mask;
    double total = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        detail::sample_mask(x, rng, mask);
        total += f.value(std::span<const std::uint8_t>(mask));
    }
    return total / n_samples;
}

/// Sampled gradient of the multilinear extension:
///   dF/dx[e] = E[f(S u {e}) - f(S \ {e})],
/// estimated with n_samples subset draws shared across all coordinates.
/// Objectives exposing a sample-gradient kernel get a single-pass inner
/// loop; otherwise each coordinate is evaluated by toggling the mask.
template <SetObjective F>
GradientEstimate multilinear_gradient(const F& f, const FractionalPoint& x, int n_samples,
                                      Rng& rng) {
    const std::size_t n = f.universe_size();
    if (x.size() != n) throw std::invalid_argument("multilinear_gradient: dimension mismatch");
    if (n_samples < 1) throw std::invalid_argument("multilinear_gradient: n_samples must be >= 1");

    GradientEstimate est;
    est.grad.assign(n, 0.0);
    est.sample_count = n_samples;

    std::vector<std::uint8_t> mask;
    for (int k = 0; k < n_samples; ++k) {
        detail::sample_mask(x, rng, mask);
        if constexpr (HasSampleGradientKernel<F>) {
            f.add_sample_gradient(std::span<const std::uint8_t>(mask),
                                  std::span<double>(est.grad));
        } else {
            const double base = f.value(std::span<const std::uint8_t>(mask));
            for (std::size_t e = 0; e < n; ++e) {
                mask[e] ^= 1;
                const double flipped = f.value(std::span<const std::uint8_t>(mask));
                mask[e] ^= 1;
                // mask[e] set: base = f(S u {e}), flipped = f(S \ {e})
                est.grad[e] += mask[e] ? base - flipped : flipped - base;
            }
        }
    }
    for (double& g : est.grad) g /= n_samples;
    return est;
}

}  // namespace fedsub
