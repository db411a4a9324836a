#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace fedsub {

enum class DistanceMetric { cosine, scaled_euclidean };

inline std::string to_string(DistanceMetric m) {
    switch (m) {
        case DistanceMetric::cosine: return "cosine";
        case DistanceMetric::scaled_euclidean: return "scaled-euclidean";
    }
    throw std::logic_error("unknown metric");
}

inline DistanceMetric parse_metric(const std::string& s) {
    if (s == "cosine") return DistanceMetric::cosine;
    if (s == "scaled-euclidean" || s == "scaled_euclidean") return DistanceMetric::scaled_euclidean;
    throw std::invalid_argument("unknown distance metric: " + s);
}

/// [0,1]-normalized distance between two feature vectors.
///
/// cosine: (1 - cos_sim) / 2, clamped into [0,1]. Zero vectors are an error.
/// scaled-euclidean: ||a-b|| / diameter, where diameter is a dataset-level
/// constant (max pairwise distance) supplied by the caller.
inline double normalized_distance(std::span<const double> a, std::span<const double> b,
                                  DistanceMetric metric, double diameter = 0.0) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("normalized_distance: dimension mismatch");
    }
    switch (metric) {
        case DistanceMetric::cosine: {
            double dot = 0.0, na = 0.0, nb = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                dot += a[i] * b[i];
                na += a[i] * a[i];
                nb += b[i] * b[i];
            }
            if (na == 0.0 || nb == 0.0) {
                throw std::domain_error("normalized_distance: zero vector under cosine metric");
            }
            const double cos_sim = dot / (std::sqrt(na) * std::sqrt(nb));
            return std::clamp((1.0 - cos_sim) / 2.0, 0.0, 1.0);
        }
        case DistanceMetric::scaled_euclidean: {
            if (!(diameter > 0.0)) {
                throw std::invalid_argument("normalized_distance: diameter must be positive");
            }
            double sq = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = a[i] - b[i];
                sq += d * d;
            }
            return std::clamp(std::sqrt(sq) / diameter, 0.0, 1.0);
        }
    }
    throw std::logic_error("unknown metric");
}

}  // namespace fedsub
