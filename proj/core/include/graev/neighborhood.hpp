#pragma once

#include "graev/boolean_group.hpp"
#include "graev/ground_space.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace graev {

/// The family W_n = {x + y : d_n(x, y) < 1} built from a pseudometric sequence.
class WdSystem {
public:
    explicit WdSystem(PseudometricSequence seq) : seq_(std::move(seq)) {}

    const PseudometricSequence& sequence() const noexcept { return seq_; }
    std::size_t points() const noexcept { return seq_.points(); }

    /// x + y belongs to W_n.
    bool admits(std::size_t n, PointIndex x, PointIndex y) const noexcept {
        return seq_(n, x, y) < 1.0;
    }

private:
    PseudometricSequence seq_;
};

/// One summand of a W_D witness: x + y taken from W_index.
struct WdAssignment {
    PointPair pair;
    std::size_t index = 0;

    friend bool operator==(const WdAssignment&, const WdAssignment&) = default;
};

/// Certifies g in W_1 + ... + W_N (N = largest index used). Indices are
/// pairwise distinct; unused W_n contribute e.
struct WdWitness {
    std::vector<WdAssignment> entries;

    std::size_t max_index() const noexcept;
};

struct WitnessCheck {
    bool ok = true;
    std::string reason;
};

/// Independent validation: distinct positive indices, d_n(x, y) < 1 for each
/// entry, and the pairs sum to g.
WitnessCheck check_witness(const WdWitness& witness, const GroupElement& g,
                           const WdSystem& system);

/// Additional check for witnesses built from a ball: each dyadic bucket
/// [2^j, 2^(j+1)) holds fewer than 2^j indices.
WitnessCheck check_bucket_capacity(const WdWitness& witness);

enum class WdVerdict { certified, refuted, unknown };

const char* to_string(WdVerdict verdict) noexcept;

struct WdMembership {
    WdVerdict verdict = WdVerdict::unknown;
    std::size_t n_max = 0;
    /// Present iff certified.
    std::optional<WdWitness> witness;
};

struct WdSearchLimits {
    /// Largest space handled by the exact reachability search.
    std::size_t max_points = 24;
    /// Bound on states * generators * levels for the exact search.
    double max_work = 4e8;
};

/// Decides g in W_1 + ... + W_{n_max}.
///
/// On spaces within `limits` the answer is exact: the reachable sets
/// S_k = S_{k-1} + (W_k u {e}) are computed over all group elements, so
/// `refuted` means no representation with pairs assigned to distinct indices
/// <= n_max exists and `certified` carries a witness. Outside the limits the
/// sound certifier below is tried and `unknown` is returned when it fails.
WdMembership wd_membership(const GroupElement& g, const WdSystem& system, const GroundSpace& space,
                           std::size_t n_max, const WdSearchLimits& limits = {});

/// Sound but incomplete: for each n <= n_max, takes the optimal matching of
/// g under d_n and tries to assign its pairs to distinct admissible indices
/// (bipartite matching). Never refutes.
std::optional<WdWitness> certify_by_assignment(const GroupElement& g, const WdSystem& system,
                                               std::size_t n_max);

/// Dyadic bucket of one matched pair in wd_witness_from_ball.
struct BucketedPair {
    PointPair pair;
    double weight = 0.0;
    /// 2^-(k+1) <= weight < 2^-k for weight > 0.
    int k = 0;
    std::size_t index = 0;
};

struct BallWitness {
    WdWitness witness;
    std::vector<BucketedPair> pairs;
    /// Sum of 2^-k over pairs; always < 1.
    double dyadic_sum = 0.0;
};

/// Builds a W_D witness for g from the optimal matching of g in
/// rho = combine_sup(D): pair i gets k_i with 2^-(k_i+1) <= rho_i < 2^-k_i,
/// pairs with k_i = j take the indices 2^j + 1, ..., 2^j + r. Requires
/// N_rho(g) < 1/2; throws PreconditionError otherwise.
BallWitness wd_witness_from_ball(const GroupElement& g, const WdSystem& system,
                                 const GroundSpace& combined);

/// g lies in the open ball {N_rho < r}.
bool ball_membership(const GroupElement& g, const GroundSpace& space, double radius);

} // namespace graev
