#include "graev/matching.hpp"

#include "graev/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <string>

namespace graev {

PerfectMatching min_weight_perfect_matching(std::span<const double> weights, std::size_t m) {
    if (m % 2 != 0) throw PreconditionError("perfect matching needs an even vertex count");
    if (m > kMaxMatchingVertices) {
        throw CapacityError("matching over " + std::to_string(m) + " vertices exceeds the limit of " +
                            std::to_string(kMaxMatchingVertices));
    }
    if (weights.size() != m * m) throw PreconditionError("weight table must be m x m");
    PerfectMatching result;
    if (m == 0) return result;

    const auto w = [&](std::size_t i, std::size_t j) { return weights[i * m + j]; };
    const std::uint32_t full = (std::uint32_t{1} << m) - 1;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // best[mask]: cheapest perfect matching of the vertices in mask, pairing
    // the lowest vertex first. Odd masks stay infinite.
    std::vector<double> best(std::size_t{full} + 1, kInf);
    best[0] = 0.0;
    for (std::uint32_t mask = 3; mask <= full; ++mask) {
        if (std::popcount(mask) % 2 != 0) continue;
        const int i = std::countr_zero(mask);
        const std::uint32_t rest = mask & (mask - 1);
        double value = kInf;
        for (std::uint32_t r = rest; r != 0; r &= r - 1) {
            const int j = std::countr_zero(r);
            const double c = w(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +
                             best[rest & ~(std::uint32_t{1} << j)];
            value = std::min(value, c);
        }
        best[mask] = value;
    }

    // Walk down choosing the smallest partner that attains the optimum; this
    // yields the lexicographically smallest sorted pair list.
    std::uint32_t mask = full;
    while (mask != 0) {
        const int i = std::countr_zero(mask);
        const std::uint32_t rest = mask & (mask - 1);
        const double target = best[mask];
        const double slack = 1e-12 * std::max(1.0, target);
        int chosen = -1;
        for (std::uint32_t r = rest; r != 0; r &= r - 1) {
            const int j = std::countr_zero(r);
            const double c = w(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +
                             best[rest & ~(std::uint32_t{1} << j)];
            if (c <= target + slack) {
                chosen = j;
                break;
            }
        }
        result.pairs.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(chosen));
        result.weight += w(static_cast<std::size_t>(i), static_cast<std::size_t>(chosen));
        mask = rest & ~(std::uint32_t{1} << chosen);
    }
    return result;
}

} // namespace graev
