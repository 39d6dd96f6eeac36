#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace graev {

using PointIndex = std::uint32_t;

/// The distinguished point e. It is also the zero of the group.
inline constexpr PointIndex kBasePoint = 0;

/// Absolute tolerance for axiom checks and numeric equality.
inline constexpr double kTolerance = 1e-9;

enum class SpaceKind { matrix, euclidean };

struct AxiomViolation {
    enum class Rule { nonzero_diagonal, asymmetry, triangle };

    Rule rule;
    /// (i, i, i) for diagonal, (i, j, j) for asymmetry, (i, j, k) with
    /// d(i,k) > d(i,j) + d(j,k) for triangle.
    std::array<PointIndex, 3> indices;
    /// Amount by which the axiom fails.
    double excess;

    std::string describe() const;
};

const char* to_string(AxiomViolation::Rule rule) noexcept;

struct ValidationReport {
    std::vector<AxiomViolation> violations;

    bool ok() const noexcept { return violations.empty(); }
};

/// Finite pseudometric space (X, rho) with e at index 0. Immutable.
///
/// Matrix spaces store the raw table as given; `distance` reads the upper
/// triangle so it is symmetric and zero on the diagonal even when the raw
/// table is off by rounding. Euclidean spaces compute |x - y| on demand.
class GroundSpace {
public:
    /// Throws StructuralError on a non-square, empty, negative or non-finite table.
    static GroundSpace from_matrix(std::vector<std::vector<double>> dist,
                                   std::vector<std::string> labels = {});

    /// Throws StructuralError on empty input, ragged or non-finite coordinates.
    static GroundSpace from_coords(std::vector<std::vector<double>> coords,
                                   std::vector<std::string> labels = {});

    SpaceKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return size_; }
    std::size_t dimension() const noexcept { return dim_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Checked access; throws IndexError.
    double distance(PointIndex i, PointIndex j) const;

    /// Unchecked access.
    double operator()(PointIndex i, PointIndex j) const noexcept {
        if (i == j) return 0.0;
        if (i > j) std::swap(i, j);
        return kind_ == SpaceKind::matrix ? table_[static_cast<std::size_t>(i) * size_ + j]
                                          : euclid(i, j);
    }

    /// Raw table entry (matrix kind) as supplied, before symmetrization.
    double raw(PointIndex i, PointIndex j) const noexcept;

    /// Coordinates of point i (euclidean kind only).
    std::span<const double> coords(PointIndex i) const;

    /// Result of validate_space, computed once at construction for matrix
    /// spaces. Euclidean spaces are pseudometric by construction.
    bool is_pseudometric() const noexcept { return pseudometric_; }

    /// Throws AxiomError with the first violation when not a pseudometric.
    void require_pseudometric() const;

    void check_index(PointIndex i) const;

    /// Euclidean only: a new space with the extra points appended.
    GroundSpace with_points(std::span<const std::vector<double>> extra,
                            std::span<const std::string> extra_labels = {}) const;

    /// Copy of the distance table (symmetrized reads).
    std::vector<std::vector<double>> to_matrix() const;

private:
    GroundSpace() = default;

    double euclid(PointIndex i, PointIndex j) const noexcept;

    SpaceKind kind_ = SpaceKind::matrix;
    std::size_t size_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> table_;  // row-major size_ x size_ (matrix)
    std::vector<double> coords_; // size_ x dim_ (euclidean)
    std::vector<std::string> labels_;
    bool pseudometric_ = false;
};

/// Lists every axiom violation with witnessing indices; empty iff valid.
ValidationReport validate_space(const GroundSpace& space, double tol = kTolerance);

/// Free-function form of GroundSpace::distance.
inline double distance(const GroundSpace& space, PointIndex i, PointIndex j) {
    return space.distance(i, j);
}

/// How d_n is defined for n beyond the explicit list of length L.
struct TailRule {
    enum class Kind { repeat_last, scale, zero };

    Kind kind = Kind::repeat_last;
    /// Ratio r for Kind::scale: d_n = r^(n-L) d_L.
    double ratio = 1.0;

    static TailRule repeat_last() noexcept { return {Kind::repeat_last, 1.0}; }
    static TailRule scale(double r) noexcept { return {Kind::scale, r}; }
    static TailRule zero() noexcept { return {Kind::zero, 0.0}; }
};

/// d_1, d_2, ... over one point set: L explicit matrices plus a tail rule.
class PseudometricSequence {
public:
    /// Each metric must be a matrix pseudometric over the same number of
    /// points; throws StructuralError or AxiomError otherwise.
    PseudometricSequence(std::vector<GroundSpace> metrics, TailRule tail);

    /// d_n = scales[n-1] * rho for a base space rho.
    static PseudometricSequence scaled(const GroundSpace& base, std::span<const double> scales,
                                       TailRule tail);

    std::size_t points() const noexcept { return points_; }
    std::size_t explicit_length() const noexcept { return metrics_.size(); }
    const TailRule& tail() const noexcept { return tail_; }
    const GroundSpace& metric(std::size_t n) const { return metrics_.at(n - 1); }

    /// d_n(i, j), n >= 1.
    double operator()(std::size_t n, PointIndex i, PointIndex j) const noexcept;

    /// d_1(i,j) + ... + d_count(i,j).
    double partial_sum(std::uint64_t count, PointIndex i, PointIndex j) const noexcept;

    /// p_n = d_1 + ... + d_{2^(n+1)}.
    double p(std::size_t n, PointIndex i, PointIndex j) const noexcept;

private:
    std::vector<GroundSpace> metrics_;
    TailRule tail_;
    std::size_t points_ = 0;
};

/// rho(x,y) = sup_{n>=1} 2^-n min(1, p_n(x,y)), a pseudometric with
/// {rho < 2^-n} contained in {p_n < 1} for every n.
GroundSpace combine_sup(const PseudometricSequence& seq);

/// The same formula evaluated for one pair.
double combined_distance(const PseudometricSequence& seq, PointIndex i, PointIndex j);

} // namespace graev
