#pragma once

#include "graev/ground_space.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace graev {

/// Element of the free Boolean group B_a(X): a finite subset of X \ {e}.
/// The support is kept strictly increasing, so equality is structural.
class GroupElement {
public:
    /// The zero element (identified with e).
    GroupElement() = default;

    /// Throws StructuralError unless `support` is strictly increasing and free of 0.
    static GroupElement from_support(std::vector<PointIndex> support);

    /// Any order, any multiplicity; see sum_points.
    static GroupElement from_points(std::span<const PointIndex> points);
    static GroupElement from_points(std::initializer_list<PointIndex> points) {
        return from_points(std::span<const PointIndex>(points.begin(), points.size()));
    }

    /// Inverse of to_mask: bit i-1 stands for point i.
    static GroupElement from_mask(std::uint64_t mask);

    std::span<const PointIndex> support() const noexcept { return support_; }
    std::size_t size() const noexcept { return support_.size(); }
    bool is_zero() const noexcept { return support_.empty(); }
    bool contains(PointIndex x) const noexcept;

    /// Largest index in the support, or 0 for the zero element.
    PointIndex max_index() const noexcept { return support_.empty() ? 0 : support_.back(); }

    /// Bit i-1 set for each support point i; requires max_index() <= 64.
    std::uint64_t to_mask() const;

    GroupElement& operator+=(const GroupElement& other);
    friend GroupElement operator+(GroupElement lhs, const GroupElement& rhs) {
        lhs += rhs;
        return lhs;
    }

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
    friend auto operator<=>(const GroupElement&, const GroupElement&) = default;

private:
    std::vector<PointIndex> support_;
};

/// Symmetric difference of supports.
GroupElement add(const GroupElement& g, const GroupElement& h);

/// |support(g)|: the length of the shortest word x_1 + ... + x_k for g.
inline std::size_t word_length(const GroupElement& g) noexcept { return g.size(); }

/// g in B_n(X), i.e. |support(g)| <= n.
inline bool in_Bn(const GroupElement& g, std::size_t n) noexcept { return g.size() <= n; }

/// x_1 + ... + x_k: repeated indices cancel pairwise and e contributes nothing.
GroupElement sum_points(std::span<const PointIndex> points);

/// Range-checked form; throws IndexError.
GroupElement sum_points(std::span<const PointIndex> points, const GroundSpace& space);

struct PointPair {
    PointIndex first = 0;
    PointIndex second = 0;

    /// (min, max) ordering.
    PointPair sorted() const noexcept {
        return first <= second ? *this : PointPair{second, first};
    }

    friend bool operator==(const PointPair&, const PointPair&) = default;
    friend auto operator<=>(const PointPair&, const PointPair&) = default;
};

/// h = (x_1 + y_1) + ... + (x_n + y_n). Entries may repeat and may be e.
struct Representation {
    std::vector<PointPair> pairs;
};

struct EvaluatedRepresentation {
    GroupElement element;
    double weight = 0.0;
};

/// The represented element and sum of rho(x_i, y_i); throws IndexError.
EvaluatedRepresentation evaluate_representation(const Representation& rep,
                                                const GroundSpace& space);

/// Every element supported on points 1..count-1 (the whole of B_a(X) for a
/// space of `count` points), in mask order. Requires count <= 26.
std::vector<GroupElement> all_elements(std::size_t count);

} // namespace graev
