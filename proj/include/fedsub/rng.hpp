#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fedsub {

namespace detail {

// splitmix64 finalizer (Steele, Lea & Flood). Used both as the generator
// core and as the mixing function for seed derivation, so that every
// stream in a run is a pure function of (root seed, stream labels).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Derive a child seed from a parent seed and a list of stream labels.
/// Deterministic and platform-independent; order of labels matters.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> labels) {
    std::uint64_t s = detail::mix64(seed ^ 0x6a09e667f3bcc909ULL);
    for (std::uint64_t label : labels) {
        s = detail::mix64(s ^ detail::mix64(label));
    }
    return s;
}

// Stream labels used across the library. Every RNG consumer owns a stream
// derived from the run seed and these tags, which keeps runs reproducible
// regardless of evaluation order.
namespace stream {
inline constexpr std::uint64_t dataset = 1;
inline constexpr std::uint64_t partition = 2;
inline constexpr std::uint64_t client_step = 3;
inline constexpr std::uint64_t participation = 4;
inline constexpr std::uint64_t trace = 5;
inline constexpr std::uint64_t adversary = 6;
inline constexpr std::uint64_t min_ref = 7;
inline constexpr std::uint64_t run = 8;
}  // namespace stream

/// Small deterministic PRNG (splitmix64 core). Not cryptographic; meant
/// for reproducible Monte Carlo sampling where the exact stream is part
/// of the artifact's contract.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + uniform01() * (hi - lo);
    }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
        // Multiply-shift rejection-free mapping; bias is negligible for
        // the n used here (bounded by client and element counts).
        return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal via Box-Muller; second value of each pair is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Gamma(alpha, 1) via Marsaglia-Tsang squeeze; alpha > 0.
    double gamma(double alpha) {
        if (!(alpha > 0.0)) throw std::invalid_argument("gamma: alpha must be positive");
        if (alpha < 1.0) {
            double u = uniform01();
            if (u < 1e-300) u = 1e-300;
            return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
        }
        const double d = alpha - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// k distinct indices out of [0, n), returned sorted ascending.
    std::vector<int> sample_without_replacement(int n, int k) {
        if (k < 0 || k > n) throw std::invalid_argument("sample_without_replacement: k out of range");
        std::vector<int> idx(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
        for (int i = 0; i < k; ++i) {
            const std::size_t j = static_cast<std::size_t>(i) +
                                  uniform_index(static_cast<std::size_t>(n - i));
            std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
        }
        idx.resize(static_cast<std::size_t>(k));
        std::sort(idx.begin(), idx.end());
        return idx;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_index(i)]);
        }
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fedsub
