#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedsub/ground_set.hpp"
#include "fedsub/rng.hpp"

namespace fedsub {

/// Relative category frequencies for the synthetic generator.
struct CategoryWeights {
    enum class Kind { uniform, zipf, explicit_weights };

    Kind kind = Kind::uniform;
    double zipf_exponent = 1.0;
    std::vector<double> weights;  // explicit_weights only

    std::vector<double> resolve(int n_categories) const {
        std::vector<double> w(static_cast<std::size_t>(n_categories), 1.0);
        switch (kind) {
            case Kind::uniform:
                break;
            case Kind::zipf:
                for (int k = 0; k < n_categories; ++k) {
                    w[static_cast<std::size_t>(k)] =
                        1.0 / std::pow(static_cast<double>(k + 1), zipf_exponent);
                }
                break;
            case Kind::explicit_weights:
                if (static_cast<int>(weights.size()) != n_categories) {
                    throw std::invalid_argument("CategoryWeights: need one weight per category");
                }
                w = weights;
                break;
        }
        double total = 0.0;
        for (double v : w) {
            if (v < 0.0) throw std::invalid_argument("CategoryWeights: negative weight");
            total += v;
        }
        if (total <= 0.0) throw std::invalid_argument("CategoryWeights: all weights zero");
        for (double& v : w) v /= total;
        return w;
    }
};

struct SyntheticParams {
    int n_data = 900;        // size of the full collection D
    int n_ground = 60;       // elements sampled from D into the ground set
    int feature_dim = 16;
    int n_categories = 9;
    CategoryWeights category_weights;
    // Category proportions of the ground set; unset means "same as the
    // demand weights". Decoupling them (e.g. uniform ground slots under
    // skewed demand) makes element choice consequential: a random subset
    // then often misses the heavy categories.
    std::optional<CategoryWeights> ground_weights;
    double cluster_spread = 0.1;  // Gaussian sigma around each category mean

    void validate() const {
        if (n_categories < 2) throw std::invalid_argument("SyntheticParams: need >= 2 categories");
        if (feature_dim < n_categories) {
            throw std::invalid_argument(
                "SyntheticParams: feature_dim must be >= n_categories (unit-separated means)");
        }
        if (n_ground < 1 || n_data < n_ground) {
            throw std::invalid_argument("SyntheticParams: need n_data >= n_ground >= 1");
        }
        if (!(cluster_spread > 0.0)) {
            throw std::invalid_argument("SyntheticParams: cluster_spread must be positive");
        }
    }
};

struct SyntheticDataset {
    GroundSet ground;
    std::vector<int> ground_category;             // category of each ground element
    std::vector<std::vector<double>> data;        // the full collection D
    std::vector<int> data_category;
    double diameter = 0.0;                        // max pairwise distance over D
};

namespace detail {

/// Largest-remainder apportionment of total items to proportions.
inline std::vector<int> apportion(const std::vector<double>& proportions, int total) {
    const std::size_t n = proportions.size();
    std::vector<int> counts(n, 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    remainders.reserve(n);
    int assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double exact = proportions[i] * total;
        counts[i] = static_cast<int>(std::floor(exact));
        assigned += counts[i];
        remainders.emplace_back(-(exact - std::floor(exact)), i);  // descending remainder
    }
    std::sort(remainders.begin(), remainders.end());
    for (int k = 0; k < total - assigned; ++k) {
        counts[remainders[static_cast<std::size_t>(k) % n].second] += 1;
    }
    return counts;
}

}  // namespace detail

/// Deterministic synthetic collection: one Gaussian cluster per category
/// with unit-separated (orthonormal basis) means, category sizes assigned
/// by largest-remainder apportionment of the weights, and a ground set
/// drawn from D with the same per-category proportions.
inline SyntheticDataset generate_synthetic_dataset(const SyntheticParams& params,
                                                   std::uint64_t seed) {
    params.validate();
    const std::vector<double> weights = params.category_weights.resolve(params.n_categories);
    Rng rng(derive_seed(seed, {stream::dataset}));

    SyntheticDataset out;
    const std::vector<int> data_counts = detail::apportion(weights, params.n_data);
    out.data.reserve(static_cast<std::size_t>(params.n_data));
    for (int cat = 0; cat < params.n_categories; ++cat) {
        for (int k = 0; k < data_counts[static_cast<std::size_t>(cat)]; ++k) {
            std::vector<double> p(static_cast<std::size_t>(params.feature_dim), 0.0);
            p[static_cast<std::size_t>(cat)] = 1.0;
            for (double& v : p) v += params.cluster_spread * rng.normal();
            out.data.push_back(std::move(p));
            out.data_category.push_back(cat);
        }
    }

    // ground set: per-category counts apportioned with the ground weights,
    // elements drawn without replacement inside each category
    const std::vector<int> ground_counts = detail::apportion(
        params.ground_weights ? params.ground_weights->resolve(params.n_categories) : weights,
        params.n_ground);
    std::vector<std::vector<double>> ground_features;
    ground_features.reserve(static_cast<std::size_t>(params.n_ground));
    std::size_t offset = 0;
    for (int cat = 0; cat < params.n_categories; ++cat) {
        const int avail = data_counts[static_cast<std::size_t>(cat)];
        const int want = ground_counts[static_cast<std::size_t>(cat)];
        if (want > avail) {
            throw std::invalid_argument("generate_synthetic_dataset: category " +
                                        std::to_string(cat) +
                                        " has fewer data points than ground slots");
        }
        for (int i : rng.sample_without_replacement(avail, want)) {
            ground_features.push_back(out.data[offset + static_cast<std::size_t>(i)]);
            out.ground_category.push_back(cat);
        }
        offset += static_cast<std::size_t>(avail);
    }
    out.ground = GroundSet(std::move(ground_features));

    double max_sq = 0.0;
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        for (std::size_t j = i + 1; j < out.data.size(); ++j) {
            double sq = 0.0;
            for (std::size_t d = 0; d < out.data[i].size(); ++d) {
                const double diff = out.data[i][d] - out.data[j][d];
                sq += diff * diff;
            }
            max_sq = std::max(max_sq, sq);
        }
    }
    out.diameter = std::sqrt(max_sq);
    return out;
}

/// Partition item indices into n_clients disjoint nonempty shards, non-iid
/// by a per-category Dirichlet(alpha) split across clients. Items inside a
/// category are shuffled before slicing; empty clients are fixed up by
/// stealing one item from the currently largest client.
inline std::vector<std::vector<int>> dirichlet_partition(const std::vector<int>& item_category,
                                                         int n_categories, int n_clients,
                                                         double alpha, Rng& rng) {
    if (!(alpha > 0.0)) throw std::invalid_argument("dirichlet_partition: alpha must be positive");
    if (n_clients < 1) throw std::invalid_argument("dirichlet_partition: need >= 1 client");
    if (static_cast<int>(item_category.size()) < n_clients) {
        throw std::invalid_argument("dirichlet_partition: fewer items than clients");
    }

    std::vector<std::vector<int>> shards(static_cast<std::size_t>(n_clients));
    for (int cat = 0; cat < n_categories; ++cat) {
        std::vector<int> items;
        for (std::size_t i = 0; i < item_category.size(); ++i) {
            if (item_category[i] == cat) items.push_back(static_cast<int>(i));
        }
        if (items.empty()) continue;
        rng.shuffle(items);

        std::vector<double> proportions(static_cast<std::size_t>(n_clients));
        double total = 0.0;
        for (double& p : proportions) {
            p = rng.gamma(alpha);
            total += p;
        }
        for (double& p : proportions) p /= total;

        const std::vector<int> counts =
            detail::apportion(proportions, static_cast<int>(items.size()));
        std::size_t pos = 0;
        for (int client = 0; client < n_clients; ++client) {
            for (int k = 0; k < counts[static_cast<std::size_t>(client)]; ++k) {
                shards[static_cast<std::size_t>(client)].push_back(items[pos++]);
            }
        }
    }

    // fix-up: no client may end up empty
    for (std::size_t client = 0; client < shards.size(); ++client) {
        if (!shards[client].empty()) continue;
        std::size_t donor = 0;
        for (std::size_t j = 1; j < shards.size(); ++j) {
            if (shards[j].size() > shards[donor].size()) donor = j;
        }
        if (shards[donor].size() < 2) {
            throw std::runtime_error("dirichlet_partition: cannot make every client nonempty");
        }
        shards[client].push_back(shards[donor].back());
        shards[donor].pop_back();
    }
    for (auto& shard : shards) std::sort(shard.begin(), shard.end());
    return shards;
}

}  // namespace fedsub
