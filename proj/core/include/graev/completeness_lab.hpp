#pragma once

#include "graev/boolean_group.hpp"
#include "graev/ground_space.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace graev::lab {

inline constexpr double kDefaultTolerance = 1e-6;
/// Separation is declared when a liminf estimate exceeds this multiple of tol.
inline constexpr double kSeparationFactor = 10.0;

/// Axis-aligned box; with `open` set the boundary is excluded.
struct Box {
    std::vector<double> lower;
    std::vector<double> upper;
    bool open = true;

    bool contains(std::span<const double> x) const noexcept;
};

/// Finite stand-in for a Cauchy filter: terms g_1, g_2, ... over one space.
struct ElementSequence {
    GroundSpace space;
    std::vector<GroupElement> terms;
    /// Points [0, fixed_points) are fixed ground points; later ones are
    /// trajectory points added by the generator.
    std::size_t fixed_points = 1;
    /// Where limit points may live (euclidean). Empty means all of R^d.
    std::optional<Box> domain;
    std::string generator;
    std::uint64_t seed = 0;
};

struct ModulusSample {
    std::size_t from = 0;
    /// sup over i, j >= from of rho-hat(g_i, g_j).
    double sup = 0.0;
};

struct CauchyCheck {
    bool cauchy = false;
    std::size_t tail_start = 0;
    double tail_diameter = 0.0;
    std::vector<ModulusSample> modulus;
    /// Pair of tail terms realizing the diameter when not Cauchy.
    std::optional<std::pair<std::size_t, std::size_t>> witness;
};

/// Cauchy iff the trailing half has rho-hat diameter below tol.
/// Throws PreconditionError with fewer than 2 terms.
CauchyCheck check_cauchy(const ElementSequence& seq, double tol = kDefaultTolerance);

enum class Verdict { converged, escaped_to_lower_rank, not_cauchy, no_limit_in_ground, inconclusive };

const char* to_string(Verdict v) noexcept;
std::optional<Verdict> verdict_from_string(std::string_view name) noexcept;

struct ClusterReport {
    enum class Fate { vanishes_at_base, cancels, realized, unrealizable };

    /// Points of the reference (last) term in this cluster; e is listed for
    /// the cluster around the base point.
    std::vector<PointIndex> reference;
    Fate fate = Fate::realized;
    std::size_t tail_points = 0;
    /// Largest distance from an assigned tail point to the cluster's reference.
    double radius = 0.0;
    /// Tail-average coordinates (euclidean, odd clusters).
    std::vector<double> limit_coords;
    std::optional<PointIndex> limit_index;
    /// Number of tail terms whose count in this cluster has the wrong parity.
    std::size_t parity_breaks = 0;
};

const char* to_string(ClusterReport::Fate fate) noexcept;

/// Per-k reading of the convergence/separation dichotomy.
struct DichotomyEntry {
    std::size_t k = 0;
    /// The limit lies in B_k and the tail is within tol of it.
    bool converges_in_bk = false;
    double limit_distance = 0.0;
    /// min over the tail of dist_to_Bk(term, k).
    double liminf_dist_to_bk = 0.0;
    /// liminf_dist_to_bk > kSeparationFactor * tol.
    bool separated = false;

    bool exactly_one() const noexcept { return converges_in_bk != separated; }
};

struct CauchyReport {
    /// Input space plus any limit points registered by the analyzer.
    GroundSpace space;
    Verdict verdict = Verdict::inconclusive;
    CauchyCheck cauchy{};
    GroupElement limit{};
    /// Smallest word length among tail terms.
    std::size_t stable_support = 0;
    double cluster_radius = 0.0;
    std::vector<ClusterReport> clusters{};
    /// max over tail terms of rho-hat(term, limit).
    double tail_limit_distance = 0.0;
    /// Tail support points outside every cluster.
    std::size_t stray_points = 0;
    /// Lower estimate of liminf rho-hat(g_m, h) over fixed elements h
    /// (reported for no_limit_in_ground).
    std::optional<double> fixed_distance_liminf{};
    /// Filled on spaces small enough for exact dist_to_Bk.
    std::vector<DichotomyEntry> dichotomy{};
    std::string diagnostic{};
};

/// Clusters the tail around the last term, cancels clusters that merge or
/// collapse onto e, and realizes the remaining cluster limits in the ground
/// space. Terms must lie in B_n; throws PreconditionError otherwise.
CauchyReport analyze_cauchy(const ElementSequence& seq, std::size_t n,
                            double tol = kDefaultTolerance);

/// Exact rho-hat distance from g to B_k(X) by enumerating supports of size
/// <= k. Throws CapacityError unless |X| <= 12 and k <= 4.
double dist_to_Bk(const GroupElement& g, std::size_t k, const GroundSpace& space);

enum class Scenario { converging_clusters, merging_clusters, drift_to_boundary, constant, adversarial_noise };
enum class Ground { plane, interval, finite };

const char* to_string(Scenario s) noexcept;
const char* to_string(Ground g) noexcept;
std::optional<Scenario> scenario_from_string(std::string_view name) noexcept;
std::optional<Ground> ground_from_string(std::string_view name) noexcept;

/// Plane and interval are euclidean; finite is a 10-point matrix space with
/// zero-distance alias classes. The interval is the open (0, 1) with e = 1/2.
struct ScenarioSpec {
    Scenario scenario = Scenario::converging_clusters;
    Ground ground = Ground::plane;
    std::size_t n = 2;
    std::size_t terms = 48;
    std::size_t count = 1;
};

/// Scenario/ground combinations generate_sequences accepts.
bool supported(Scenario s, Ground g) noexcept;

struct LabeledSequence {
    std::string id;
    ScenarioSpec spec;
    ElementSequence sequence;
    Verdict expected = Verdict::converged;
    /// Designed limit points (euclidean grounds).
    std::vector<std::vector<double>> expected_limit_coords;
    /// Designed limit element (finite ground), in sequence.space indexing.
    GroupElement expected_limit;
};

/// Deterministic in (spec, seed). Throws PreconditionError for unsupported
/// combinations and n outside [1, 4].
std::vector<LabeledSequence> generate_sequences(const ScenarioSpec& spec, std::uint64_t seed);

/// Verdict equals the label and, when a limit exists, the analyzer's limit
/// matches the designed one within tol.
bool matches_label(const LabeledSequence& labeled, const CauchyReport& report,
                   double tol = kDefaultTolerance);

} // namespace graev::lab
