#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace fedsub {

using ElementId = int;

/// The universe of selectable elements. Each element has a dense index in
/// [0, size) and a feature vector of common dimension.
class GroundSet {
public:
    GroundSet() = default;

    explicit GroundSet(std::vector<std::vector<double>> features)
        : features_(std::move(features)) {
        if (features_.empty()) throw std::invalid_argument("GroundSet: empty element list");
        dim_ = features_.front().size();
        if (dim_ == 0) throw std::invalid_argument("GroundSet: zero feature dimension");
        for (const auto& f : features_) {
            if (f.size() != dim_) {
                throw std::invalid_argument("GroundSet: inconsistent feature dimensions");
            }
        }
    }

    std::size_t size() const { return features_.size(); }
    std::size_t dim() const { return dim_; }

    std::span<const double> feature(ElementId e) const {
        return features_.at(static_cast<std::size_t>(e));
    }

private:
    std::vector<std::vector<double>> features_;
    std::size_t dim_ = 0;
};

/// A subset of element ids, kept sorted and duplicate-free.
class ElementSubset {
public:
    ElementSubset() = default;

    explicit ElementSubset(std::vector<ElementId> members) : members_(std::move(members)) {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
        if (!members_.empty() && members_.front() < 0) {
            throw std::invalid_argument("ElementSubset: negative element id");
        }
    }

    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

    bool contains(ElementId e) const {
        return std::binary_search(members_.begin(), members_.end(), e);
    }

    ElementSubset with(ElementId e) const {
        std::vector<ElementId> m = members_;
        m.push_back(e);
        return ElementSubset(std::move(m));
    }

    const std::vector<ElementId>& members() const { return members_; }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    /// Dense 0/1 membership mask over a universe of n elements.
    std::vector<std::uint8_t> to_mask(std::size_t n) const {
        std::vector<std::uint8_t> mask(n, 0);
        for (ElementId e : members_) mask.at(static_cast<std::size_t>(e)) = 1;
        return mask;
    }

    bool operator==(const ElementSubset& other) const = default;

private:
    std::vector<ElementId> members_;
};

/// Relaxed solution vector x in [0,1]^n. Construction enforces the box
/// invariant; arithmetic that may leave the box goes through clamped().
class FractionalPoint {
public:
    FractionalPoint() = default;

    explicit FractionalPoint(std::size_t n) : coords_(n, 0.0) {}

    /// Wrap a raw vector, clamping each coordinate into [0,1].
    static FractionalPoint clamped(std::vector<double> raw) {
        for (double& v : raw) v = std::clamp(v, 0.0, 1.0);
        FractionalPoint p;
        p.coords_ = std::move(raw);
        return p;
    }

    /// Wrap a raw vector that must already lie in the box.
    static FractionalPoint checked(std::vector<double> raw, double tol = 1e-12) {
        for (double v : raw) {
            if (!(v >= -tol && v <= 1.0 + tol)) {
                throw std::invalid_argument("FractionalPoint: coordinate outside [0,1]");
            }
        }
        return clamped(std::move(raw));
    }

    std::size_t size() const { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<double>& coords() const { return coords_; }

    bool operator==(const FractionalPoint& other) const = default;

private:
    std::vector<double> coords_;
};

/// A projected gradient as uploaded by a client: dense vector of length
/// |E|. Polytope validity is checked by the server, not by the type.
using GradientVector = std::vector<double>;

}  // namespace fedsub
