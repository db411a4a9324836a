#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "fedsub/ground_set.hpp"
#include "fedsub/matroid.hpp"
#include "fedsub/multilinear.hpp"
#include "fedsub/objective.hpp"
#include "fedsub/rng.hpp"

namespace fedsub {

inline constexpr double kDefaultCoresetFraction = 2.0 / 3.0;
inline constexpr double kSupportEps = 1e-12;

/// Hamming distance between gradient supports. Gradients are binarized by
/// support first (|v| > eps) since targeted attacks may upload fractional
/// vectors while the distance semantics assume sparse binary uploads.
inline int gradient_hamming(std::span<const double> a, std::span<const double> b,
                            double support_eps = kSupportEps) {
    if (a.size() != b.size()) throw std::invalid_argument("gradient_hamming: length mismatch");
    int count = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool sa = std::abs(a[i]) > support_eps;
        const bool sb = std::abs(b[i]) > support_eps;
        if (sa != sb) ++count;
    }
    return count;
}

/// Similarity coefficient c_ij defined by Hamming(w_i, w_j) = 2r(1 - c_ij).
/// Equal supports give 1; disjoint rank-size supports give 0; can go
/// negative for supports wider than the rank.
inline double similarity_coefficient(std::span<const double> a, std::span<const double> b, int r) {
    if (r < 1) throw std::invalid_argument("similarity_coefficient: rank must be >= 1");
    return 1.0 - static_cast<double>(gradient_hamming(a, b)) / (2.0 * r);
}

enum class CoresetObjective { max_similar, max_diverse };

namespace detail {

inline std::size_t coreset_target_size(std::size_t n, double q) {
    // round half-up of q*n
    return static_cast<std::size_t>(std::llround(q * static_cast<double>(n)));
}

}  // namespace detail

/// Greedy coreset extraction over a pool of client gradients: seed with the
/// pair optimizing the pairwise objective, then repeatedly add the client
/// maximizing the summed objective against the current set, until
/// round(q*n) members are chosen. Ties always resolve toward the lower
/// client index, so the result is independent of any external ordering.
inline std::vector<int> coreset(const std::vector<GradientVector>& pool, double q,
                                CoresetObjective objective, int r) {
    const std::size_t n = pool.size();
    if (n < 2) throw std::invalid_argument("coreset: need at least two gradients");
    if (!(q > 0.5 && q < 1.0)) throw std::invalid_argument("coreset: q must be in (0.5, 1)");
    const std::size_t target = detail::coreset_target_size(n, q);
    if (target < 1) throw std::invalid_argument("coreset: target size must be >= 1");

    // pairwise score, higher = more attractive for this objective
    std::vector<double> score(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const int h = gradient_hamming(pool[i], pool[j]);
            const double s = objective == CoresetObjective::max_similar
                                 ? 1.0 - static_cast<double>(h) / (2.0 * r)
                                 : static_cast<double>(h);
            score[i * n + j] = s;
            score[j * n + i] = s;
        }
    }

    std::vector<std::uint8_t> in_set(n, 0);
    std::vector<double> sum_to_set(n, 0.0);
    std::vector<int> members;
    members.reserve(target);

    auto add = [&](std::size_t k) {
        in_set[k] = 1;
        members.push_back(static_cast<int>(k));
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_set[i]) sum_to_set[i] += score[i * n + k];
        }
    };

    if (target == 1) {
        // Degenerate request: keep the single client best aligned with the
        // objective against everyone else.
        std::size_t best = 0;
        double best_total = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            double total = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) total += score[i * n + j];
            }
            if (total > best_total) {
                best_total = total;
                best = i;
            }
        }
        return {static_cast<int>(best)};
    }

    // seed: best pair, ties toward the lexicographically smaller (i, j)
    std::size_t seed_i = 0, seed_j = 1;
    double best_pair = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (score[i * n + j] > best_pair) {
                best_pair = score[i * n + j];
                seed_i = i;
                seed_j = j;
            }
        }
    }
    add(seed_i);
    add(seed_j);

    while (members.size() < target) {
        std::size_t best = n;
        double best_sum = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_set[i] && sum_to_set[i] > best_sum) {
                best_sum = sum_to_set[i];
                best = i;
            }
        }
        add(best);
    }
    std::sort(members.begin(), members.end());
    return members;
}

struct CandidatePair {
    FractionalPoint sim;
    FractionalPoint div;
};

struct RobustAggregateResult {
    CandidatePair candidates;
    std::vector<int> coreset_sim;
    std::vector<int> coreset_div;
};

namespace detail {

inline FractionalPoint apply_update(const FractionalPoint& x_prev, const GradientVector& w,
                                    double eta) {
    std::vector<double> next = x_prev.coords();
    for (std::size_t e = 0; e < next.size(); ++e) next[e] += eta * w[e];
    return FractionalPoint::clamped(std::move(next));
}

inline GradientVector mean_of(const std::vector<GradientVector>& pool,
                              const std::vector<int>& ids) {
    GradientVector out(pool.front().size(), 0.0);
    for (int id : ids) {
        const GradientVector& g = pool[static_cast<std::size_t>(id)];
        for (std::size_t e = 0; e < out.size(); ++e) out[e] += g[e];
    }
    for (double& v : out) v /= static_cast<double>(ids.size());
    return out;
}

}  // namespace detail

/// Dual-candidate robust aggregation: extract the max-similar and
/// max-diverse coresets from the gradient pool, average each, and apply
/// both updates to x_prev. Which candidate survives is decided by the
/// clients, not here.
inline RobustAggregateResult robust_aggregate(const std::vector<GradientVector>& pool,
                                              const FractionalPoint& x_prev, double eta,
                                              const MatroidConstraint& c,
                                              double q = kDefaultCoresetFraction) {
    if (pool.empty()) throw std::invalid_argument("robust_aggregate: empty pool");
    RobustAggregateResult out;
    out.coreset_sim = coreset(pool, q, CoresetObjective::max_similar, c.rank);
    out.coreset_div = coreset(pool, q, CoresetObjective::max_diverse, c.rank);
    out.candidates.sim = detail::apply_update(x_prev, detail::mean_of(pool, out.coreset_sim), eta);
    out.candidates.div = detail::apply_update(x_prev, detail::mean_of(pool, out.coreset_div), eta);
    return out;
}

enum class CandidateChoice { sim, div };

/// Client-side pick between the two aggregation candidates: whichever the
/// client's own objective values more, ties toward the similar candidate.
/// The fast path compares the rounded solutions; the slow path compares
/// sampled multilinear values (sim evaluated first, then div).
template <SetObjective F>
CandidateChoice client_select_candidate(const F& f, const CandidatePair& pair,
                                        const MatroidConstraint& c, bool fast = true,
                                        int n_samples = 10, Rng* rng = nullptr) {
    double value_sim = 0.0, value_div = 0.0;
    if (fast) {
        value_sim = objective_value(f, round_to_subset(pair.sim, c));
        value_div = objective_value(f, round_to_subset(pair.div, c));
    } else {
        if (rng == nullptr) {
            throw std::invalid_argument("client_select_candidate: slow path needs an RNG");
        }
        value_sim = multilinear_value(f, pair.sim, n_samples, *rng);
        value_div = multilinear_value(f, pair.div, n_samples, *rng);
    }
    return value_div > value_sim ? CandidateChoice::div : CandidateChoice::sim;
}

/// Geometric median by Weiszfeld iteration, initialized at the mean.
/// If an iterate lands on an input point (within 1e-12) that point is
/// returned, sidestepping the nondifferentiability. Stops when the step
/// norm drops below tol or after max_iter iterations.
inline std::vector<double> geometric_median(const std::vector<std::vector<double>>& points,
                                            double tol = 1e-9, int max_iter = 1000) {
    if (points.empty()) throw std::invalid_argument("geometric_median: no points");
    if (!(tol > 0.0)) throw std::invalid_argument("geometric_median: tol must be positive");
    const std::size_t dim = points.front().size();
    for (const auto& p : points) {
        if (p.size() != dim) throw std::invalid_argument("geometric_median: dimension mismatch");
    }

    std::vector<double> y(dim, 0.0);
    for (const auto& p : points) {
        for (std::size_t d = 0; d < dim; ++d) y[d] += p[d];
    }
    for (double& v : y) v /= static_cast<double>(points.size());

    std::vector<double> next(dim);
    for (int it = 0; it < max_iter; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        double weight_total = 0.0;
        for (const auto& p : points) {
            double sq = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = p[d] - y[d];
                sq += diff * diff;
            }
            const double dist = std::sqrt(sq);
            if (dist <= 1e-12) return p;  // anchor point
            const double inv = 1.0 / dist;
            weight_total += inv;
            for (std::size_t d = 0; d < dim; ++d) next[d] += p[d] * inv;
        }
        double step_sq = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            next[d] /= weight_total;
            const double diff = next[d] - y[d];
            step_sq += diff * diff;
        }
        y.swap(next);
        if (std::sqrt(step_sq) < tol) break;
    }
    return y;
}

}  // namespace fedsub
