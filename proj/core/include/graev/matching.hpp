#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace graev {

/// Perfect matching over local vertices 0..m-1.
struct PerfectMatching {
    /// Sorted pairs (i < j), listed by increasing first vertex.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    double weight = 0.0;
};

/// Largest vertex count accepted by min_weight_perfect_matching.
inline constexpr std::size_t kMaxMatchingVertices = 26;

/// Exact minimum-weight perfect matching by bitmask dynamic programming,
/// O(2^m * m) time and 2^m doubles of scratch. `weights` is the row-major
/// symmetric m x m table; m must be even. Among optimal matchings the one
/// whose sorted pair list is lexicographically smallest is returned.
PerfectMatching min_weight_perfect_matching(std::span<const double> weights, std::size_t m);

} // namespace graev
