#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fedsub/ground_set.hpp"
#include "fedsub/matroid.hpp"
#include "fedsub/objective.hpp"

namespace fedsub {

/// f(S u {e}) - f(S). Requires e not already in S.
template <SetObjective F>
double marginal_gain(const F& f, const ElementSubset& s, ElementId e) {
    if (s.contains(e)) throw std::invalid_argument("marginal_gain: element already in set");
    auto mask = s.to_mask(f.universe_size());
    const double before = f.value(std::span<const std::uint8_t>(mask));
    mask.at(static_cast<std::size_t>(e)) = 1;
    const double after = f.value(std::span<const std::uint8_t>(mask));
    return after - before;
}

/// Standard forward greedy: start from the empty set and repeatedly add
/// the feasible element with the largest marginal gain (ties toward the
/// lower id), stopping at the rank or when no element has positive gain.
template <SetObjective F>
ElementSubset discrete_greedy(const F& f, const MatroidConstraint& c) {
    const std::size_t n = f.universe_size();
    if (n != static_cast<std::size_t>(c.universe_size)) {
        throw std::invalid_argument("discrete_greedy: universe mismatch");
    }
    std::vector<std::uint8_t> mask(n, 0);
    std::vector<ElementId> chosen;
    double current = f.value(std::span<const std::uint8_t>(mask));
    for (int step = 0; step < c.rank; ++step) {
        int best_e = -1;
        double best_gain = 0.0;
        for (std::size_t e = 0; e < n; ++e) {
            if (mask[e]) continue;
            mask[e] = 1;
            const double gain = f.value(std::span<const std::uint8_t>(mask)) - current;
            mask[e] = 0;
            if (gain > best_gain + 1e-12) {
                best_gain = gain;
                best_e = static_cast<int>(e);
            }
        }
        if (best_e < 0) break;
        mask[static_cast<std::size_t>(best_e)] = 1;
        chosen.push_back(best_e);
        current += best_gain;
    }
    return ElementSubset(std::move(chosen));
}

/// Exhaustive maximizer over all feasible subsets; the test oracle for the
/// greedy routines. Guarded to small universes. Ties are broken toward the
/// lexicographically smaller member list.
template <SetObjective F>
std::pair<ElementSubset, double> brute_force_opt(const F& f, const MatroidConstraint& c,
                                                 int max_universe = 20) {
    const std::size_t n = f.universe_size();
    if (n != static_cast<std::size_t>(c.universe_size)) {
        throw std::invalid_argument("brute_force_opt: universe mismatch");
    }
    if (n > static_cast<std::size_t>(max_universe)) {
        throw std::invalid_argument("brute_force_opt: ground set too large for enumeration");
    }
    std::vector<std::uint8_t> mask(n, 0);
    std::vector<ElementId> best_members;
    double best_value = f.value(std::span<const std::uint8_t>(mask));  // empty set
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t bits = 1; bits < limit; ++bits) {
        if (std::popcount(bits) > c.rank) continue;
        std::vector<ElementId> members;
        for (std::size_t e = 0; e < n; ++e) {
            mask[e] = (bits >> e) & 1u;
            if (mask[e]) members.push_back(static_cast<ElementId>(e));
        }
        const double v = f.value(std::span<const std::uint8_t>(mask));
        if (v > best_value || (v == best_value && members < best_members)) {
            best_value = v;
            best_members = std::move(members);
        }
    }
    return {ElementSubset(std::move(best_members)), best_value};
}

}  // namespace fedsub
