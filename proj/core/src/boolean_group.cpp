#include "graev/boolean_group.hpp"

#include "graev/errors.hpp"

#include <algorithm>
#include <bit>
#include <iterator>

namespace graev {

GroupElement GroupElement::from_support(std::vector<PointIndex> support) {
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i] == kBasePoint) {
            throw StructuralError("group element support must not contain e (index 0)");
        }
        if (i > 0 && support[i] <= support[i - 1]) {
            throw StructuralError("group element support must be strictly increasing");
        }
    }
    GroupElement g;
    g.support_ = std::move(support);
    return g;
}

GroupElement GroupElement::from_points(std::span<const PointIndex> points) {
    std::vector<PointIndex> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    GroupElement g;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        if (sorted[i] != kBasePoint && (j - i) % 2 == 1) g.support_.push_back(sorted[i]);
        i = j;
    }
    return g;
}

GroupElement GroupElement::from_mask(std::uint64_t mask) {
    GroupElement g;
    g.support_.reserve(static_cast<std::size_t>(std::popcount(mask)));
    while (mask != 0) {
        const int bit = std::countr_zero(mask);
        g.support_.push_back(static_cast<PointIndex>(bit + 1));
        mask &= mask - 1;
    }
    return g;
}

bool GroupElement::contains(PointIndex x) const noexcept {
    return std::binary_search(support_.begin(), support_.end(), x);
}

std::uint64_t GroupElement::to_mask() const {
    std::uint64_t mask = 0;
    for (PointIndex x : support_) {
        if (x > 64) throw CapacityError("bitmask form supports point indices up to 64");
        mask |= std::uint64_t{1} << (x - 1);
    }
    return mask;
}

GroupElement& GroupElement::operator+=(const GroupElement& other) {
    std::vector<PointIndex> out;
    out.reserve(support_.size() + other.support_.size());
    std::set_symmetric_difference(support_.begin(), support_.end(), other.support_.begin(),
                                  other.support_.end(), std::back_inserter(out));
    support_ = std::move(out);
    return *this;
}

GroupElement add(const GroupElement& g, const GroupElement& h) { return g + h; }

GroupElement sum_points(std::span<const PointIndex> points) {
    return GroupElement::from_points(points);
}

GroupElement sum_points(std::span<const PointIndex> points, const GroundSpace& space) {
    for (PointIndex x : points) space.check_index(x);
    return GroupElement::from_points(points);
}

EvaluatedRepresentation evaluate_representation(const Representation& rep,
                                                const GroundSpace& space) {
    std::vector<PointIndex> letters;
    letters.reserve(rep.pairs.size() * 2);
    double weight = 0.0;
    for (const auto& [x, y] : rep.pairs) {
        weight += space.distance(x, y);
        letters.push_back(x);
        letters.push_back(y);
    }
    return {GroupElement::from_points(letters), weight};
}

std::vector<GroupElement> all_elements(std::size_t count) {
    if (count == 0) return {};
    if (count > 26) throw CapacityError("element enumeration limited to 26 points");
    const std::uint64_t states = std::uint64_t{1} << (count - 1);
    std::vector<GroupElement> out;
    out.reserve(states);
    for (std::uint64_t m = 0; m < states; ++m) out.push_back(GroupElement::from_mask(m));
    return out;
}

} // namespace graev
