#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "fedsub/ground_set.hpp"

namespace fedsub {

/// Cardinality (uniform matroid) constraint |S| <= rank over a universe of
/// universe_size elements. The kind tag leaves room for other matroid
/// classes without changing call sites.
struct MatroidConstraint {
    enum class Kind { uniform };

    Kind kind = Kind::uniform;
    int rank = 0;
    int universe_size = 0;

    static MatroidConstraint uniform(int rank, int universe_size) {
        if (rank < 1 || universe_size < 1 || rank > universe_size) {
            throw std::invalid_argument("MatroidConstraint: need 1 <= rank <= universe_size");
        }
        return MatroidConstraint{Kind::uniform, rank, universe_size};
    }
};

inline constexpr double kPolytopeTol = 1e-9;

/// Membership test for the uniform matroid polytope
///   { w in [0,1]^n : sum w <= rank }.
/// This box-plus-sum check is the server-side validity condition on
/// uploaded gradients.
inline bool polytope_contains(std::span<const double> w, const MatroidConstraint& c,
                              double tol = kPolytopeTol) {
    if (w.size() != static_cast<std::size_t>(c.universe_size)) {
        throw std::invalid_argument("polytope_contains: length mismatch");
    }
    double sum = 0.0;
    for (double v : w) {
        if (v < -tol || v > 1.0 + tol) return false;
        sum += v;
    }
    return sum <= static_cast<double>(c.rank) + tol;
}

namespace detail {

/// Indices of the k largest values; ties resolved toward the lower index.
inline std::vector<int> top_k_indices(std::span<const double> values, int k) {
    std::vector<int> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return values[static_cast<std::size_t>(a)] >
                                                values[static_cast<std::size_t>(b)]; });
    idx.resize(static_cast<std::size_t>(std::min<std::size_t>(idx.size(),
                                                              static_cast<std::size_t>(k))));
    return idx;
}

}  // namespace detail

/// argmax over the polytope of <w, g>: the 0/1 indicator of the (up to)
/// rank largest strictly positive coordinates of g. Coordinates with
/// g <= 0 are dropped since they cannot improve the inner product.
/// The output is a polytope vertex with at most rank nonzeros.
inline GradientVector linear_maximization_oracle(std::span<const double> g,
                                                 const MatroidConstraint& c) {
    if (g.size() != static_cast<std::size_t>(c.universe_size)) {
        throw std::invalid_argument("linear_maximization_oracle: length mismatch");
    }
    GradientVector w(g.size(), 0.0);
    for (int i : detail::top_k_indices(g, c.rank)) {
        if (g[static_cast<std::size_t>(i)] > 0.0) w[static_cast<std::size_t>(i)] = 1.0;
    }
    return w;
}

/// argmin over the exactly-rank-ones basis vertices of <w, g> for g >= 0:
/// the indicator of the rank smallest coordinates, ties toward the lower
/// index. Restricting to bases keeps the result a nontrivial vertex (the
/// unconstrained minimizer over the polytope would be the zero vector).
inline GradientVector linear_minimization_over_bases(std::span<const double> g,
                                                     const MatroidConstraint& c) {
    if (g.size() != static_cast<std::size_t>(c.universe_size)) {
        throw std::invalid_argument("linear_minimization_over_bases: length mismatch");
    }
    std::vector<double> negated(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) negated[i] = -g[i];
    GradientVector w(g.size(), 0.0);
    for (int i : detail::top_k_indices(negated, c.rank)) {
        w[static_cast<std::size_t>(i)] = 1.0;
    }
    return w;
}

/// Round a fractional point to the feasible subset with its rank largest
/// coordinates (ties toward the lower index).
inline ElementSubset round_to_subset(const FractionalPoint& x, const MatroidConstraint& c) {
    if (x.size() != static_cast<std::size_t>(c.universe_size)) {
        throw std::invalid_argument("round_to_subset: length mismatch");
    }
    std::vector<ElementId> members;
    for (int i : detail::top_k_indices(x.coords(), c.rank)) members.push_back(i);
    return ElementSubset(std::move(members));
}

}  // namespace fedsub
