#pragma once

#include "graev/boolean_group.hpp"
#include "graev/ground_space.hpp"

#include <cstddef>
#include <vector>

namespace graev {

inline constexpr std::size_t kDefaultMatchingLimit = 20;

/// Support-size limit for graev_norm: GRAEV_MATCH_LIMIT when set to a
/// positive integer, otherwise kDefaultMatchingLimit.
std::size_t matching_limit();

/// Perfect pairing of support(h), with e adjoined when |support| is odd.
struct Matching {
    /// Each pair sorted; the list sorted ascending. e appears only as (0, x).
    std::vector<PointPair> pairs;
    double weight = 0.0;
};

/// N_rho(h) together with a matching attaining it.
struct NormResult {
    double value = 0.0;
    Matching witness;
};

/// Graev prenorm N_rho(h): the minimum of sum rho(x_i, y_i) over all
/// representations h = sum (x_i + y_i), computed as a minimum-weight perfect
/// matching of the support (plus e when odd). Throws AxiomError when the
/// space is not a pseudometric (the matching reduction relies on the
/// triangle inequality) and CapacityError above `limit`.
NormResult graev_norm(const GroupElement& h, const GroundSpace& space,
                      std::size_t limit = matching_limit());

/// rho-hat(g, h) = N_rho(g + h).
double graev_dist(const GroupElement& g, const GroupElement& h, const GroundSpace& space,
                  std::size_t limit = matching_limit());

/// Cancels a representation down to one whose letters are pairwise distinct
/// without adding new letters or increasing the weight: degenerate pairs
/// (x, x) are dropped and two pairs sharing a letter z, (z, t) and (z, t'),
/// are merged into (t, t'). Throws AxiomError on a non-pseudometric space.
Representation reduce_representation(const Representation& rep, const GroundSpace& space);

/// Minimum weight over every representation of h with at most `max_pairs`
/// pairs drawn from X x X (e and repeated letters allowed). Computed as an
/// exact shortest-path recursion over group elements and independent of the
/// matching reduction. Throws CapacityError when |X| > 26 or the work bound
/// 2^(|X|-1) * |X|^2 * max_pairs exceeds 2e9. Returns +inf when h has no
/// representation within the budget.
double oracle_norm(const GroupElement& h, const GroundSpace& space, std::size_t max_pairs);

/// Full table of oracle values for every element, indexed by mask.
std::vector<double> oracle_table(const GroundSpace& space, std::size_t max_pairs);

/// Pair budget that makes oracle_norm exact: ceil((n + 1) / 2).
inline std::size_t reduced_pair_count(std::size_t support_size) noexcept {
    return (support_size + 2) / 2;
}

} // namespace graev
