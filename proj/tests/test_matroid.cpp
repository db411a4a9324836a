#include <doctest.h>

#include <cmath>
#include <vector>

#include "fedsub/matroid.hpp"
#include "fedsub/rng.hpp"
#include "oracles.hpp"

using namespace fedsub;

TEST_CASE("matroid constraint validation") {
    CHECK_THROWS_AS(MatroidConstraint::uniform(0, 5), std::invalid_argument);
    CHECK_THROWS_AS(MatroidConstraint::uniform(6, 5), std::invalid_argument);
    const auto c = MatroidConstraint::uniform(2, 5);
    CHECK(c.rank == 2);
    CHECK(c.universe_size == 5);
}

TEST_CASE("polytope membership") {
    const auto c = MatroidConstraint::uniform(2, 4);
    CHECK(polytope_contains(std::vector<double>{0, 0, 0, 0}, c));
    CHECK(polytope_contains(std::vector<double>{1, 0, 1, 0}, c));
    CHECK_FALSE(polytope_contains(std::vector<double>{1, 1, 1, 1}, c));
    CHECK_FALSE(polytope_contains(std::vector<double>{1.5, 0, 0, 0}, c));
    CHECK_FALSE(polytope_contains(std::vector<double>{-0.5, 0, 0, 0}, c));
    // tolerance boundary
    CHECK(polytope_contains(std::vector<double>{1.0 + 1e-10, 1.0, 0, 0}, c, 1e-9));
    CHECK_THROWS_AS(polytope_contains(std::vector<double>{0, 0}, c), std::invalid_argument);
}

TEST_CASE("linear maximization oracle picks top positive coordinates") {
    const auto c = MatroidConstraint::uniform(2, 3);
    CHECK(linear_maximization_oracle(std::vector<double>{3, 1, 2}, c) ==
          GradientVector{1, 0, 1});
    CHECK(linear_maximization_oracle(std::vector<double>{-1, -2, -3}, c) ==
          GradientVector{0, 0, 0});
    // only one positive coordinate: fewer than rank ones
    CHECK(linear_maximization_oracle(std::vector<double>{-1, 5, -3}, c) ==
          GradientVector{0, 1, 0});
    const auto full = MatroidConstraint::uniform(3, 3);
    CHECK(linear_maximization_oracle(std::vector<double>{1, 1, 1}, full) ==
          GradientVector{1, 1, 1});
}

TEST_CASE("linear minimization over bases picks bottom coordinates") {
    const auto c = MatroidConstraint::uniform(2, 3);
    CHECK(linear_minimization_over_bases(std::vector<double>{3, 1, 2}, c) ==
          GradientVector{0, 1, 1});
    // constant vector: tie-break toward the lowest indices
    CHECK(linear_minimization_over_bases(std::vector<double>{1, 1, 1}, c) ==
          GradientVector{1, 1, 0});
    const auto full = MatroidConstraint::uniform(3, 3);
    CHECK(linear_minimization_over_bases(std::vector<double>{9, 1, 5}, full) ==
          GradientVector{1, 1, 1});
}

TEST_CASE("round_to_subset picks top coordinates with index tie-break") {
    const auto c = MatroidConstraint::uniform(2, 3);
    CHECK(round_to_subset(FractionalPoint::checked({0.9, 0.1, 0.5}), c) ==
          ElementSubset({0, 2}));
    CHECK(round_to_subset(FractionalPoint::checked({0.5, 0.5, 0.5}), c) ==
          ElementSubset({0, 1}));
    CHECK(round_to_subset(FractionalPoint::checked({0, 1, 1}), c) == ElementSubset({1, 2}));
}

TEST_CASE("oracle outputs are polytope members with zero tolerance") {
    Rng rng(5);
    const auto c = MatroidConstraint::uniform(3, 9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> g(9);
        for (double& v : g) v = rng.uniform(-1.0, 1.0);
        CHECK(polytope_contains(linear_maximization_oracle(g, c), c, 0.0));
        for (double& v : g) v = std::abs(v);
        CHECK(polytope_contains(linear_minimization_over_bases(g, c), c, 0.0));
    }
}

TEST_CASE("LMO is optimal against every enumerated vertex") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 8;
        const int r = 1 + static_cast<int>(rng.uniform_index(4));
        const auto c = MatroidConstraint::uniform(r, n);
        std::vector<double> g(n);
        for (double& v : g) v = rng.uniform(-1.0, 1.0);
        const GradientVector w = linear_maximization_oracle(g, c);
        double best = 0.0;
        for (std::size_t e = 0; e < g.size(); ++e) best += w[e] * g[e];
        for (const auto& v : oracles::polytope_vertices(n, r)) {
            double dot = 0.0;
            for (std::size_t e = 0; e < g.size(); ++e) dot += v[e] * g[e];
            CHECK(best >= dot - 1e-12);
        }
    }
}

TEST_CASE("round_to_subset maximizes coordinate mass over all rank-subsets") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 9;
        const int r = 1 + static_cast<int>(rng.uniform_index(4));
        const auto c = MatroidConstraint::uniform(r, n);
        std::vector<double> coords(n);
        for (double& v : coords) v = rng.uniform01();
        const FractionalPoint x = FractionalPoint::checked(coords);
        const ElementSubset chosen = round_to_subset(x, c);
        double chosen_mass = 0.0;
        for (ElementId e : chosen) chosen_mass += x[static_cast<std::size_t>(e)];
        for (const auto& subset : oracles::k_subsets(n, r)) {
            double mass = 0.0;
            for (int e : subset) mass += x[static_cast<std::size_t>(e)];
            CHECK(chosen_mass >= mass - 1e-12);
        }
    }
}
