#pragma once

#include "graev/boolean_group.hpp"
#include "graev/ground_space.hpp"

#include <initializer_list>

namespace fixture {

// e = 0, a = 1, b = 2, c = 4 on the real line.
inline graev::GroundSpace line() {
    return graev::GroundSpace::from_coords({{0.0}, {1.0}, {2.0}, {4.0}}, {"e", "a", "b", "c"});
}

inline graev::GroupElement el(std::initializer_list<graev::PointIndex> points) {
    return graev::GroupElement::from_points(points);
}

inline constexpr graev::PointIndex e = 0, a = 1, b = 2, c = 3;

} // namespace fixture
