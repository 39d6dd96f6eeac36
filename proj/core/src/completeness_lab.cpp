#include "graev/completeness_lab.hpp"

#include "graev/errors.hpp"
#include "graev/graev_metric.hpp"
#include "graev/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

namespace graev::lab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool Box::contains(std::span<const double> x) const noexcept {
    if (x.size() != lower.size() || x.size() != upper.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (open ? !(lower[k] < x[k] && x[k] < upper[k]) : !(lower[k] <= x[k] && x[k] <= upper[k])) {
            return false;
        }
    }
    return true;
}

const char* to_string(Verdict v) noexcept {
    switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::escaped_to_lower_rank: return "escaped-to-lower-rank";
    case Verdict::not_cauchy: return "not-cauchy";
    case Verdict::no_limit_in_ground: return "no-limit-in-ground";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::optional<Verdict> verdict_from_string(std::string_view name) noexcept {
    for (auto v : {Verdict::converged, Verdict::escaped_to_lower_rank, Verdict::not_cauchy,
                   Verdict::no_limit_in_ground, Verdict::inconclusive}) {
        if (name == to_string(v)) return v;
    }
    return std::nullopt;
}

const char* to_string(ClusterReport::Fate fate) noexcept {
    switch (fate) {
    case ClusterReport::Fate::vanishes_at_base: return "vanishes-at-e";
    case ClusterReport::Fate::cancels: return "cancels";
    case ClusterReport::Fate::realized: return "realized";
    case ClusterReport::Fate::unrealizable: return "unrealizable";
    }
    return "realized";
}

const char* to_string(Scenario s) noexcept {
    switch (s) {
    case Scenario::converging_clusters: return "converging-clusters";
    case Scenario::merging_clusters: return "merging-clusters";
    case Scenario::drift_to_boundary: return "drift-to-boundary";
    case Scenario::constant: return "constant";
    case Scenario::adversarial_noise: return "adversarial-noise";
    }
    return "constant";
}

const char* to_string(Ground g) noexcept {
    switch (g) {
    case Ground::plane: return "plane";
    case Ground::interval: return "interval";
    case Ground::finite: return "finite";
    }
    return "plane";
}

std::optional<Scenario> scenario_from_string(std::string_view name) noexcept {
    for (auto s : {Scenario::converging_clusters, Scenario::merging_clusters,
                   Scenario::drift_to_boundary, Scenario::constant, Scenario::adversarial_noise}) {
        if (name == to_string(s)) return s;
    }
    return std::nullopt;
}

std::optional<Ground> ground_from_string(std::string_view name) noexcept {
    for (auto g : {Ground::plane, Ground::interval, Ground::finite}) {
        if (name == to_string(g)) return g;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Cauchy check

CauchyCheck check_cauchy(const ElementSequence& seq, double tol) {
    const std::size_t count = seq.terms.size();
    if (count < 2) throw PreconditionError("a Cauchy check needs at least 2 terms");

    // suffix[m] = sup over i, j >= m of rho-hat(g_i, g_j).
    std::vector<double> suffix(count, 0.0);
    std::vector<std::pair<std::size_t, std::size_t>> arg(count, {count - 1, count - 1});
    for (std::size_t m = count - 1; m-- > 0;) {
        suffix[m] = suffix[m + 1];
        arg[m] = arg[m + 1];
        for (std::size_t j = m + 1; j < count; ++j) {
            const double d = graev_dist(seq.terms[m], seq.terms[j], seq.space);
            if (d > suffix[m]) {
                suffix[m] = d;
                arg[m] = {m, j};
            }
        }
    }

    CauchyCheck out;
    out.tail_start = std::min(count / 2, count - 2);
    out.tail_diameter = suffix[out.tail_start];
    out.cauchy = out.tail_diameter < tol;
    if (!out.cauchy) out.witness = arg[out.tail_start];

    std::set<std::size_t> samples{0, out.tail_start, count - 2};
    for (std::size_t m = 1; m < count - 1; m *= 2) samples.insert(m);
    for (std::size_t m : samples) out.modulus.push_back({m, suffix[m]});
    return out;
}

// ---------------------------------------------------------------------------
// Distance to B_k

double dist_to_Bk(const GroupElement& g, std::size_t k, const GroundSpace& space) {
    if (space.size() > 12 || k > 4) {
        throw CapacityError("dist_to_Bk enumerates supports; needs |X| <= 12 and k <= 4");
    }
    if (g.size() <= k) return 0.0;
    const auto n = static_cast<PointIndex>(space.size());
    double best = graev_norm(g, space).value;
    std::vector<PointIndex> pick;
    // Depth-first over increasing index tuples of length 1..k.
    auto visit = [&](auto&& self, PointIndex from) -> void {
        if (pick.size() == k) return;
        for (PointIndex x = from; x < n; ++x) {
            pick.push_back(x);
            best = std::min(best, graev_dist(g, GroupElement::from_support(pick), space));
            self(self, x + 1);
            pick.pop_back();
        }
    };
    visit(visit, 1);
    return best;
}

// ---------------------------------------------------------------------------
// Analyzer

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a), b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

double norm2(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

bool inside_with_margin(const Box& box, std::span<const double> x, double margin) {
    Box shrunk = box;
    for (std::size_t k = 0; k < shrunk.lower.size(); ++k) {
        shrunk.lower[k] += margin;
        shrunk.upper[k] -= margin;
    }
    return shrunk.contains(x);
}

// Every support of size 1..max_size drawn from `points` (sorted, no e).
std::vector<GroupElement> subsets_up_to(const std::vector<PointIndex>& points, std::size_t max_size) {
    std::vector<GroupElement> out{GroupElement{}};
    std::vector<PointIndex> pick;
    auto visit = [&](auto&& self, std::size_t from) -> void {
        if (pick.size() == max_size) return;
        for (std::size_t i = from; i < points.size(); ++i) {
            pick.push_back(points[i]);
            out.push_back(GroupElement::from_support(pick));
            self(self, i + 1);
            pick.pop_back();
        }
    };
    visit(visit, 0);
    return out;
}

} // namespace

CauchyReport analyze_cauchy(const ElementSequence& seq, std::size_t n, double tol) {
    if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
    for (const auto& g : seq.terms) {
        if (!in_Bn(g, n)) {
            throw PreconditionError("term of word length " + std::to_string(g.size()) +
                                    " is not in B_" + std::to_string(n));
        }
        if (!g.is_zero()) seq.space.check_index(g.max_index());
    }

    CauchyReport report{.space = seq.space};
    report.cauchy = check_cauchy(seq, tol);
    if (!report.cauchy.cauchy) {
        report.verdict = Verdict::not_cauchy;
        const auto [i, j] = *report.cauchy.witness;
        report.diagnostic = "terms " + std::to_string(i) + " and " + std::to_string(j) +
                            " are " + std::to_string(report.cauchy.tail_diameter) + " apart";
        return report;
    }

    const GroundSpace& space = seq.space;
    const std::size_t tail_start = report.cauchy.tail_start;
    const std::size_t count = seq.terms.size();
    report.stable_support = std::numeric_limits<std::size_t>::max();
    for (std::size_t m = tail_start; m < count; ++m) {
        report.stable_support = std::min(report.stable_support, seq.terms[m].size());
    }

    // Reference points: e plus the last term's support, grouped when closer than tol.
    std::vector<PointIndex> refs{kBasePoint};
    for (PointIndex x : seq.terms.back().support()) refs.push_back(x);
    UnionFind uf(refs.size());
    for (std::size_t a = 0; a < refs.size(); ++a) {
        for (std::size_t b = a + 1; b < refs.size(); ++b) {
            if (space(refs[a], refs[b]) < tol) uf.unite(a, b);
        }
    }
    std::vector<std::size_t> group_of(refs.size());
    std::vector<std::size_t> roots;
    for (std::size_t a = 0; a < refs.size(); ++a) {
        const std::size_t r = uf.find(a);
        auto it = std::find(roots.begin(), roots.end(), r);
        if (it == roots.end()) {
            roots.push_back(r);
            group_of[a] = roots.size() - 1;
        } else {
            group_of[a] = static_cast<std::size_t>(it - roots.begin());
        }
    }
    const std::size_t groups = roots.size(); // group 0 holds e

    // Cluster radius: a third of the smallest gap between distinct groups.
    double gap = kInf;
    for (std::size_t a = 0; a < refs.size(); ++a) {
        for (std::size_t b = a + 1; b < refs.size(); ++b) {
            if (group_of[a] != group_of[b]) gap = std::min(gap, space(refs[a], refs[b]));
        }
    }
    const double eps = gap / 3.0;
    report.cluster_radius = eps;

    report.clusters.resize(groups);
    std::vector<std::size_t> ref_count(groups, 0);
    for (std::size_t a = 0; a < refs.size(); ++a) {
        report.clusters[group_of[a]].reference.push_back(refs[a]);
        if (refs[a] != kBasePoint) ++ref_count[group_of[a]];
    }

    // Assign tail points to the nearest reference point within eps.
    std::vector<std::vector<PointIndex>> assigned(groups);
    for (std::size_t m = tail_start; m < count; ++m) {
        std::vector<std::size_t> hits(groups, 0);
        for (PointIndex p : seq.terms[m].support()) {
            double nearest = kInf;
            std::size_t which = 0;
            for (std::size_t a = 0; a < refs.size(); ++a) {
                const double d = space(p, refs[a]);
                if (d < nearest) nearest = d, which = a;
            }
            if (!(nearest <= eps)) {
                ++report.stray_points;
                continue;
            }
            const std::size_t grp = group_of[which];
            assigned[grp].push_back(p);
            ++hits[grp];
            auto& cl = report.clusters[grp];
            cl.radius = std::max(cl.radius, nearest);
            ++cl.tail_points;
        }
        for (std::size_t grp = 1; grp < groups; ++grp) {
            if (hits[grp] % 2 != ref_count[grp] % 2) ++report.clusters[grp].parity_breaks;
        }
    }

    // Realize the limit of every odd cluster.
    std::vector<std::vector<double>> new_points;
    std::vector<PointIndex> limit_points;
    bool unrealizable = false;
    const std::size_t base_size = space.size();
    report.clusters[0].fate = ClusterReport::Fate::vanishes_at_base;
    for (std::size_t grp = 1; grp < groups; ++grp) {
        auto& cl = report.clusters[grp];
        if (ref_count[grp] % 2 == 0) {
            cl.fate = ClusterReport::Fate::cancels;
            continue;
        }
        if (space.kind() == SpaceKind::euclidean) {
            std::vector<double> mean(space.dimension(), 0.0);
            for (PointIndex p : assigned[grp]) {
                const auto c = space.coords(p);
                for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += c[k];
            }
            for (auto& v : mean) v /= static_cast<double>(assigned[grp].size());
            cl.limit_coords = mean;
            // A limit within tol of the boundary cannot be told apart from one on it.
            if (seq.domain && !inside_with_margin(*seq.domain, mean, tol)) {
                cl.fate = ClusterReport::Fate::unrealizable;
                unrealizable = true;
                continue;
            }
            double scale = 1.0;
            for (double v : mean) scale = std::max(scale, std::abs(v));
            std::optional<PointIndex> existing;
            for (PointIndex x = 1; x < base_size && !existing; ++x) {
                if (norm2(space.coords(x), mean) <= 1e-12 * scale) existing = x;
            }
            for (std::size_t k = 0; k < new_points.size() && !existing; ++k) {
                if (norm2(new_points[k], mean) <= 1e-12 * scale) {
                    existing = static_cast<PointIndex>(base_size + k);
                }
            }
            if (!existing) {
                existing = static_cast<PointIndex>(base_size + new_points.size());
                new_points.push_back(mean);
            }
            cl.limit_index = existing;
            cl.fate = ClusterReport::Fate::realized;
            limit_points.push_back(*existing);
        } else {
            std::optional<PointIndex> found;
            for (PointIndex x = 1; x < base_size && !found; ++x) {
                double worst = 0.0;
                for (PointIndex p : assigned[grp]) worst = std::max(worst, space(x, p));
                if (worst < tol) found = x;
            }
            if (!found) {
                cl.fate = ClusterReport::Fate::unrealizable;
                unrealizable = true;
                continue;
            }
            cl.limit_index = found;
            cl.fate = ClusterReport::Fate::realized;
            limit_points.push_back(*found);
        }
    }
    if (!new_points.empty()) {
        std::vector<std::string> labels;
        for (std::size_t k = 0; k < new_points.size(); ++k) {
            labels.push_back("lim" + std::to_string(base_size + k));
        }
        report.space = space.with_points(new_points, labels);
    }

    if (unrealizable) {
        report.verdict = Verdict::no_limit_in_ground;
        report.diagnostic = "a cluster is Cauchy but its limit is not a ground point";

        // Probe fixed elements near the missing limits: e, the two fixed points
        // nearest each odd cluster, and the realizable limits.
        std::set<PointIndex> probe_points(limit_points.begin(), limit_points.end());
        const auto fixed = static_cast<PointIndex>(std::min(seq.fixed_points, base_size));
        for (std::size_t grp = 1; grp < groups; ++grp) {
            const auto& cl = report.clusters[grp];
            if (cl.fate != ClusterReport::Fate::realized &&
                cl.fate != ClusterReport::Fate::unrealizable) {
                continue;
            }
            std::vector<std::pair<double, PointIndex>> near;
            for (PointIndex x = 1; x < fixed; ++x) {
                const double d = space.kind() == SpaceKind::euclidean && !cl.limit_coords.empty()
                                     ? norm2(space.coords(x), cl.limit_coords)
                                     : space(x, cl.reference.front());
                near.emplace_back(d, x);
            }
            std::sort(near.begin(), near.end());
            for (std::size_t i = 0; i < near.size() && i < 2; ++i) probe_points.insert(near[i].second);
        }
        const std::vector<PointIndex> candidates(probe_points.begin(), probe_points.end());
        const std::size_t late = count - std::max<std::size_t>(1, count / 4);
        double liminf = kInf;
        for (const auto& h : subsets_up_to(candidates, n)) {
            for (std::size_t m = late; m < count; ++m) {
                liminf = std::min(liminf, graev_dist(seq.terms[m], h, report.space));
            }
        }
        report.fixed_distance_liminf = liminf;
        return report;
    }

    report.limit = GroupElement::from_points(limit_points);
    for (std::size_t m = tail_start; m < count; ++m) {
        report.tail_limit_distance =
            std::max(report.tail_limit_distance, graev_dist(seq.terms[m], report.limit, report.space));
    }
    if (!(report.tail_limit_distance < tol)) {
        report.verdict = Verdict::inconclusive;
        report.diagnostic = "tail stays " + std::to_string(report.tail_limit_distance) +
                            " from the clustered limit";
    } else {
        report.verdict = report.limit.size() < report.stable_support ? Verdict::escaped_to_lower_rank
                                                                     : Verdict::converged;
    }

    if (report.space.size() <= 12 && n <= 5) {
        for (std::size_t k = 0; k < n; ++k) {
            DichotomyEntry entry;
            entry.k = k;
            entry.limit_distance = report.tail_limit_distance;
            entry.converges_in_bk = report.verdict != Verdict::inconclusive &&
                                    report.limit.size() <= k && report.tail_limit_distance < tol;
            double liminf = kInf;
            for (std::size_t m = tail_start; m < count; ++m) {
                liminf = std::min(liminf, dist_to_Bk(seq.terms[m], k, report.space));
            }
            entry.liminf_dist_to_bk = liminf;
            entry.separated = liminf > kSeparationFactor * tol;
            report.dichotomy.push_back(entry);
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Scenario generation

bool supported(Scenario s, Ground g) noexcept {
    switch (g) {
    case Ground::plane:
    case Ground::finite: return s != Scenario::drift_to_boundary;
    case Ground::interval:
        return s == Scenario::converging_clusters || s == Scenario::constant ||
               s == Scenario::drift_to_boundary;
    }
    return false;
}

namespace {

using Point = std::vector<double>;

double dist(const Point& a, const Point& b) { return norm2(a, b); }

// Builds the sequence's ground space incrementally.
struct EuclideanBuilder {
    std::vector<Point> points;
    std::vector<std::string> labels;

    PointIndex add(Point p, std::string label = {}) {
        labels.push_back(label.empty() ? "x" + std::to_string(points.size()) : std::move(label));
        points.push_back(std::move(p));
        return static_cast<PointIndex>(points.size() - 1);
    }
};

Point unit_direction(CounterRng& rng, std::size_t dim) {
    if (dim == 1) return {rng.chance(0.5) ? 1.0 : -1.0};
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return {std::cos(angle), std::sin(angle)};
}

Point offset(const Point& base, const Point& dir, double amount) {
    Point p = base;
    for (std::size_t k = 0; k < p.size(); ++k) p[k] += dir[k] * amount;
    return p;
}

// Points with pairwise and e-distance at least `sep`, drawn by rejection.
std::vector<Point> spread_points(CounterRng& rng, std::size_t count, const Point& e,
                                 const std::vector<std::pair<double, double>>& boxes, double sep) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<Point> out;
        bool ok = true;
        for (std::size_t i = 0; i < count && ok; ++i) {
            Point p;
            for (const auto& [lo, hi] : boxes) p.push_back(rng.uniform(lo, hi));
            ok = dist(p, e) >= sep;
            for (const auto& q : out) ok = ok && dist(p, q) >= sep;
            out.push_back(std::move(p));
        }
        if (ok) return out;
    }
    throw std::logic_error("could not place separated target points");
}

struct EuclideanGround {
    EuclideanBuilder builder;
    Point e;
    std::vector<std::pair<double, double>> target_box;
    double separation = 1.0;
    double jitter = 1.0; // scale of the geometric offsets
    std::optional<Box> domain;
};

EuclideanGround make_euclidean_ground(Ground g) {
    EuclideanGround out;
    if (g == Ground::plane) {
        out.e = {0.0, 0.0};
        out.builder.add(out.e, "e");
        out.target_box = {{-4.0, 4.0}, {-4.0, 4.0}};
        out.separation = 1.0;
        out.jitter = 1.0;
    } else {
        out.e = {0.5};
        out.builder.add(out.e, "e");
        for (int k = 1; k < 16; ++k) {
            if (k == 8) continue;
            out.builder.add({k / 16.0}, "a" + std::to_string(k) + "/16");
        }
        out.target_box = {{0.2, 0.8}};
        out.separation = 0.08;
        out.jitter = 0.05;
        out.domain = Box{{0.0}, {1.0}, true};
    }
    return out;
}

LabeledSequence euclidean_sequence(const ScenarioSpec& spec, CounterRng& rng) {
    EuclideanGround ground = make_euclidean_ground(spec.ground);
    auto& b = ground.builder;
    const std::size_t fixed = b.points.size();
    const std::size_t dim = ground.e.size();
    const std::size_t n = spec.n;
    const std::size_t T = spec.terms;

    LabeledSequence out{.id = {},
                        .spec = spec,
                        .sequence = {GroundSpace::from_coords({ground.e}), {}, fixed, ground.domain,
                                     to_string(spec.scenario), 0},
                        .expected = Verdict::converged,
                        .expected_limit_coords = {},
                        .expected_limit = {}};

    struct Track {
        enum class Kind { converge, merge, collapse, drift_low, drift_high } kind;
        Point target;
    };
    std::vector<Track> tracks;
    std::size_t transient_room = 0;

    switch (spec.scenario) {
    case Scenario::converging_clusters:
    case Scenario::constant: {
        for (auto& t : spread_points(rng, n, ground.e, ground.target_box, ground.separation)) {
            tracks.push_back({Track::Kind::converge, t});
            out.expected_limit_coords.push_back(t);
        }
        break;
    }
    case Scenario::adversarial_noise: {
        const std::size_t k = n <= 2 ? n : n - rng.below(3);
        transient_room = n - k;
        for (auto& t : spread_points(rng, k, ground.e, ground.target_box, ground.separation)) {
            tracks.push_back({Track::Kind::converge, t});
            out.expected_limit_coords.push_back(t);
        }
        break;
    }
    case Scenario::merging_clusters: {
        out.expected = Verdict::escaped_to_lower_rank;
        if (n == 1) {
            tracks.push_back({Track::Kind::collapse, ground.e});
            break;
        }
        auto targets = spread_points(rng, n - 1, ground.e, ground.target_box, ground.separation);
        tracks.push_back({Track::Kind::merge, targets[0]});
        const bool collapse = n >= 3 && rng.chance(0.5);
        for (std::size_t i = 1; i < targets.size(); ++i) {
            if (collapse && i == 1) {
                tracks.push_back({Track::Kind::collapse, ground.e});
                continue;
            }
            tracks.push_back({Track::Kind::converge, targets[i]});
            out.expected_limit_coords.push_back(targets[i]);
        }
        break;
    }
    case Scenario::drift_to_boundary: {
        out.expected = Verdict::no_limit_in_ground;
        const std::size_t drifting = n >= 2 && rng.chance(0.5) ? 2 : 1;
        const bool low_first = rng.chance(0.5);
        tracks.push_back({low_first ? Track::Kind::drift_low : Track::Kind::drift_high, {}});
        if (drifting == 2) {
            tracks.push_back({low_first ? Track::Kind::drift_high : Track::Kind::drift_low, {}});
        }
        for (auto& t : spread_points(rng, n - drifting, ground.e, {{0.25, 0.75}}, 0.08)) {
            tracks.push_back({Track::Kind::converge, t});
        }
        break;
    }
    }

    std::vector<PointIndex> constant_support;
    if (spec.scenario == Scenario::constant) {
        for (const auto& t : tracks) constant_support.push_back(b.add(t.target));
    }

    std::vector<GroupElement> terms;
    terms.reserve(T);
    for (std::size_t m = 1; m <= T; ++m) {
        const double step = std::ldexp(1.0, -static_cast<int>(m));
        std::vector<PointIndex> support;
        if (spec.scenario == Scenario::constant) {
            support = constant_support;
        } else if (spec.scenario == Scenario::adversarial_noise && m <= T / 4) {
            const std::size_t size = rng.below(n + 1);
            for (std::size_t i = 0; i < size; ++i) {
                Point p;
                for (std::size_t k = 0; k < dim; ++k) p.push_back(rng.uniform(-6.0, 6.0));
                support.push_back(b.add(std::move(p)));
            }
        } else {
            for (const auto& t : tracks) {
                const Point dir = unit_direction(rng, dim);
                const double r = ground.jitter * rng.uniform(0.25, 1.0);
                switch (t.kind) {
                case Track::Kind::converge:
                    support.push_back(b.add(offset(t.target, dir, step * r)));
                    break;
                case Track::Kind::collapse:
                    support.push_back(b.add(offset(ground.e, dir, step * r)));
                    break;
                case Track::Kind::merge:
                    support.push_back(b.add(offset(t.target, dir, step * r)));
                    support.push_back(b.add(offset(t.target, dir, -step * r)));
                    break;
                case Track::Kind::drift_low:
                    support.push_back(b.add({step * rng.uniform(0.2, 0.4)}));
                    break;
                case Track::Kind::drift_high:
                    support.push_back(b.add({1.0 - step * rng.uniform(0.2, 0.4)}));
                    break;
                }
            }
            if (transient_room >= 2 && rng.chance(0.5)) {
                std::vector<Point> avoid = out.expected_limit_coords;
                Point q;
                for (int attempt = 0; attempt < 1000; ++attempt) {
                    q.clear();
                    for (std::size_t k = 0; k < dim; ++k) q.push_back(rng.uniform(-6.0, 6.0));
                    bool far = dist(q, ground.e) >= 1.0;
                    for (const auto& a : avoid) far = far && dist(q, a) >= 1.0;
                    if (far) break;
                }
                const Point dir = unit_direction(rng, dim);
                support.push_back(b.add(q));
                support.push_back(b.add(offset(q, dir, step * rng.uniform(0.25, 1.0))));
            }
        }
        terms.push_back(sum_points(support));
    }

    out.sequence.space = GroundSpace::from_coords(b.points, b.labels);
    out.sequence.terms = std::move(terms);
    return out;
}

LabeledSequence finite_sequence(const ScenarioSpec& spec, CounterRng& rng) {
    constexpr std::size_t kPoints = 10;
    const std::size_t n = spec.n;
    const std::size_t T = spec.terms;

    // Alias classes: class 0 holds e and one alias; classes 1..C partition the rest,
    // class 1 always has at least two members.
    const std::size_t classes = 4 + rng.below(3);
    std::vector<std::size_t> class_of(kPoints, 0);
    class_of[1] = 0;
    std::vector<std::size_t> order;
    for (std::size_t c = 1; c <= classes; ++c) order.push_back(c);
    order.push_back(1);
    while (order.size() < kPoints - 2) order.push_back(1 + rng.below(classes));
    for (std::size_t i = order.size(); i-- > 1;) std::swap(order[i], order[rng.below(i + 1)]);
    for (std::size_t i = 0; i < order.size(); ++i) class_of[i + 2] = order[i];

    // Class metric: quarter-integer weights in [1, 4], closed under shortest paths.
    const std::size_t C = classes + 1;
    std::vector<std::vector<double>> cd(C, std::vector<double>(C, 0.0));
    for (std::size_t a = 0; a < C; ++a) {
        for (std::size_t b2 = a + 1; b2 < C; ++b2) {
            cd[a][b2] = cd[b2][a] = 1.0 + 0.25 * static_cast<double>(rng.below(13));
        }
    }
    for (std::size_t k = 0; k < C; ++k) {
        for (std::size_t a = 0; a < C; ++a) {
            for (std::size_t b2 = 0; b2 < C; ++b2) cd[a][b2] = std::min(cd[a][b2], cd[a][k] + cd[k][b2]);
        }
    }
    std::vector<std::vector<double>> table(kPoints, std::vector<double>(kPoints, 0.0));
    for (std::size_t i = 0; i < kPoints; ++i) {
        for (std::size_t j = 0; j < kPoints; ++j) table[i][j] = cd[class_of[i]][class_of[j]];
    }
    std::vector<std::vector<PointIndex>> members(C);
    for (std::size_t i = 1; i < kPoints; ++i) members[class_of[i]].push_back(static_cast<PointIndex>(i));

    LabeledSequence out{.id = {},
                        .spec = spec,
                        .sequence = {GroundSpace::from_matrix(table), {}, kPoints, std::nullopt,
                                     to_string(spec.scenario), 0},
                        .expected = Verdict::converged,
                        .expected_limit_coords = {},
                        .expected_limit = {}};

    auto pick_classes = [&](std::size_t count, std::size_t skip) {
        std::vector<std::size_t> pool;
        for (std::size_t c = 1; c < C; ++c) {
            if (c != skip) pool.push_back(c);
        }
        for (std::size_t i = 0; i < pool.size(); ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
        pool.resize(std::min(count, pool.size()));
        return pool;
    };
    auto alias = [&](std::size_t c) { return members[c][rng.below(members[c].size())]; };

    std::vector<std::size_t> targets;
    bool merge = false;
    bool collapse = false;
    std::size_t transient_room = 0;
    switch (spec.scenario) {
    case Scenario::converging_clusters:
    case Scenario::constant: targets = pick_classes(n, 0); break;
    case Scenario::adversarial_noise: {
        const std::size_t k = n <= 2 ? n : n - rng.below(3);
        targets = pick_classes(k, 0);
        transient_room = n - targets.size();
        break;
    }
    case Scenario::merging_clusters:
        out.expected = Verdict::escaped_to_lower_rank;
        if (n == 1) {
            collapse = true;
        } else {
            merge = true;
            collapse = n >= 3 && rng.chance(0.5);
            targets = pick_classes(n - 2 - (collapse ? 1 : 0), 1);
        }
        break;
    case Scenario::drift_to_boundary:
        throw PreconditionError("drift-to-boundary needs the interval ground");
    }

    std::vector<PointIndex> limit_support;
    for (std::size_t c : targets) limit_support.push_back(members[c].front());
    out.expected_limit = GroupElement::from_points(limit_support);

    std::vector<PointIndex> fixed_choice;
    for (std::size_t c : targets) fixed_choice.push_back(alias(c));

    for (std::size_t m = 1; m <= T; ++m) {
        std::vector<PointIndex> support;
        if (spec.scenario == Scenario::constant) {
            support = fixed_choice;
        } else if (spec.scenario == Scenario::adversarial_noise && m <= T / 4) {
            const std::size_t size = rng.below(n + 1);
            std::set<PointIndex> picked;
            while (picked.size() < size) picked.insert(static_cast<PointIndex>(1 + rng.below(kPoints - 1)));
            support.assign(picked.begin(), picked.end());
        } else {
            for (std::size_t c : targets) support.push_back(alias(c));
            if (merge) {
                const auto& cls = members[1];
                const std::size_t a = rng.below(cls.size());
                const std::size_t b2 = (a + 1 + rng.below(cls.size() - 1)) % cls.size();
                support.push_back(cls[a]);
                support.push_back(cls[b2]);
            }
            if (collapse) support.push_back(members[0].front());
            if (transient_room >= 2 && rng.chance(0.5)) {
                std::size_t c = 0;
                for (std::size_t tries = 0; tries < 32; ++tries) {
                    const std::size_t cand = 1 + rng.below(C - 1);
                    if (members[cand].size() >= 2 &&
                        std::find(targets.begin(), targets.end(), cand) == targets.end()) {
                        c = cand;
                        break;
                    }
                }
                if (c != 0) {
                    support.push_back(members[c][0]);
                    support.push_back(members[c][1]);
                }
            }
        }
        out.sequence.terms.push_back(sum_points(support));
    }
    return out;
}

} // namespace

std::vector<LabeledSequence> generate_sequences(const ScenarioSpec& spec, std::uint64_t seed) {
    if (spec.n < 1 || spec.n > 4) throw PreconditionError("scenario word length n must be in [1, 4]");
    if (spec.terms < 8) throw PreconditionError("scenarios need at least 8 terms");
    if (spec.terms > 52) throw PreconditionError("at most 52 terms (offsets 2^-m must stay representable)");
    if (!supported(spec.scenario, spec.ground)) {
        throw PreconditionError(std::string(to_string(spec.scenario)) + " is not available on the " +
                                to_string(spec.ground) + " ground");
    }
    std::vector<LabeledSequence> out;
    out.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const std::string id = std::string(to_string(spec.scenario)) + "/" + to_string(spec.ground) +
                               "/n" + std::to_string(spec.n) + "/" + std::to_string(i);
        CounterRng rng(seed, CounterRng::stream_id(id, 0));
        auto labeled = spec.ground == Ground::finite ? finite_sequence(spec, rng)
                                                     : euclidean_sequence(spec, rng);
        labeled.id = id;
        labeled.sequence.seed = seed;
        out.push_back(std::move(labeled));
    }
    return out;
}

bool matches_label(const LabeledSequence& labeled, const CauchyReport& report, double tol) {
    if (report.verdict != labeled.expected) return false;
    if (report.verdict != Verdict::converged && report.verdict != Verdict::escaped_to_lower_rank) {
        return true;
    }
    if (report.space.kind() == SpaceKind::matrix) {
        return graev_dist(report.limit, labeled.expected_limit, report.space) < tol;
    }
    const auto support = report.limit.support();
    if (support.size() != labeled.expected_limit_coords.size()) return false;
    std::vector<bool> used(support.size(), false);
    for (const auto& want : labeled.expected_limit_coords) {
        bool found = false;
        for (std::size_t i = 0; i < support.size() && !found; ++i) {
            if (used[i]) continue;
            const auto got = report.space.coords(support[i]);
            if (norm2(got, want) < tol) used[i] = found = true;
        }
        if (!found) return false;
    }
    return true;
}

} // namespace graev::lab
