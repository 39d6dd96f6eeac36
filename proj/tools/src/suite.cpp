#include "graev/suite.hpp"

#include "graev/boolean_group.hpp"
#include "graev/completeness_lab.hpp"
#include "graev/errors.hpp"
#include "graev/graev_metric.hpp"
#include "graev/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#ifndef GRAEV_VERSION
#define GRAEV_VERSION "unknown"
#endif

namespace graev::suite {

namespace {

constexpr double kNormTol = 1e-9;

std::size_t scaled(std::size_t full, const Options& o, std::size_t floor = 1) {
    return o.quick ? std::max(floor, full / 10) : full;
}

GroupElement random_element(CounterRng& rng, std::size_t points) {
    if (points < 2) return {};
    const std::uint64_t states = std::uint64_t{1} << (points - 1);
    return GroupElement::from_mask(rng.below(states));
}

GroupElement random_nonzero(CounterRng& rng, std::size_t points) {
    const std::uint64_t states = std::uint64_t{1} << (points - 1);
    return GroupElement::from_mask(1 + rng.below(states - 1));
}

void closure(std::vector<std::vector<double>>& d) {
    // Repeat until stable so that every rounded two-step sum is respected.
    for (bool changed = true; changed;) {
        changed = false;
        const std::size_t n = d.size();
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    const double via = d[i][k] + d[k][j];
                    if (via < d[i][j]) {
                        d[i][j] = via;
                        changed = true;
                    }
                }
            }
        }
    }
}

// Matching witness checked from scratch: pairs partition the support, with e
// used exactly when the support is odd, and the weights add up.
bool witness_ok(const GroupElement& h, const NormResult& r, const GroundSpace& space) {
    std::multiset<PointIndex> letters;
    double weight = 0.0;
    for (const auto& p : r.witness.pairs) {
        letters.insert(p.first);
        letters.insert(p.second);
        weight += space(p.first, p.second);
    }
    std::multiset<PointIndex> expected(h.support().begin(), h.support().end());
    if (h.size() % 2 == 1) expected.insert(kBasePoint);
    if (letters != expected) return false;
    return std::abs(weight - r.value) <= 1e-12 * std::max(1.0, weight) && r.value == r.witness.weight;
}

// Case counts per (scenario, n) combination, spreading `total` evenly.
std::vector<std::size_t> spread(std::size_t total, std::size_t combos) {
    std::vector<std::size_t> out(combos, total / combos);
    for (std::size_t i = 0; i < total % combos; ++i) ++out[i];
    return out;
}

io::Json verdict_counts(const std::map<std::string, std::size_t>& counts) {
    io::Json j = io::Json::object();
    for (const auto& [k, v] : counts) j[k] = v;
    return j;
}

CriterionResult oracle_equivalence(const Options& o) {
    const std::size_t cases = scaled(1000, o);
    std::size_t elements = 0;
    std::size_t mismatches = 0;
    double max_err = 0.0;
    for (std::size_t i = 0; i < cases; ++i) {
        const GroundSpace space = corpus_space(o.seed, i);
        std::map<std::size_t, std::vector<double>> tables;
        for (const auto& g : all_elements(space.size())) {
            const std::size_t budget = (g.size() + 2) / 2 + 2;
            auto it = tables.find(budget);
            if (it == tables.end()) it = tables.emplace(budget, oracle_table(space, budget)).first;
            const double oracle = it->second[g.to_mask()];
            const double err = std::abs(graev_norm(g, space).value - oracle);
            ++elements;
            if (!(err <= kNormTol)) ++mismatches;
            if (std::isfinite(err)) max_err = std::max(max_err, err);
        }
    }
    return {1, "oracle-equivalence", mismatches == 0,
            {{"spaces", cases}, {"elements", elements}, {"mismatches", mismatches}, {"max_abs_err", max_err}}};
}

CriterionResult extension_invariance(const Options& o) {
    const std::size_t cases = scaled(1000, o);
    std::size_t singleton_checks = 0;
    std::size_t singleton_mismatches = 0;
    for (std::size_t i = 0; i < cases; ++i) {
        const GroundSpace space = corpus_space(o.seed, i);
        for (PointIndex x = 0; x < space.size(); ++x) {
            for (PointIndex y = 0; y < space.size(); ++y) {
                const double d = graev_dist(GroupElement::from_points({x}), GroupElement::from_points({y}), space);
                ++singleton_checks;
                if (d != space(x, y)) ++singleton_mismatches;
            }
        }
    }
    const std::size_t triples = scaled(10000, o);
    CounterRng rng(o.seed, CounterRng::stream_id("invariance", 0));
    double max_err = 0.0;
    for (std::size_t t = 0; t < triples; ++t) {
        const GroundSpace space = corpus_space(o.seed, rng.below(cases));
        const auto g = random_element(rng, space.size());
        const auto h = random_element(rng, space.size());
        const auto f = random_element(rng, space.size());
        max_err = std::max(max_err, std::abs(graev_dist(g + f, h + f, space) - graev_dist(g, h, space)));
    }
    return {2, "extension-invariance", singleton_mismatches == 0 && max_err == 0.0,
            {{"singleton_checks", singleton_checks},
             {"singleton_mismatches", singleton_mismatches},
             {"triples", triples},
             {"max_invariance_err", max_err}}};
}

CriterionResult prenorm_axioms(const Options& o) {
    const std::size_t cases = scaled(10000, o);
    const std::size_t corpus = scaled(1000, o);
    CounterRng rng(o.seed, CounterRng::stream_id("prenorm", 0));
    std::size_t subadditivity = 0;
    std::size_t bad_witness = 0;
    std::size_t nonzero_zero = 0;
    for (std::size_t t = 0; t < cases; ++t) {
        const GroundSpace space = corpus_space(o.seed, rng.below(corpus));
        const auto g = random_element(rng, space.size());
        const auto h = random_element(rng, space.size());
        const auto ng = graev_norm(g, space);
        const auto nh = graev_norm(h, space);
        const auto ngh = graev_norm(g + h, space);
        if (!(ngh.value <= ng.value + nh.value + kNormTol)) ++subadditivity;
        if (!witness_ok(g, ng, space) || !witness_ok(h, nh, space) || !witness_ok(g + h, ngh, space)) {
            ++bad_witness;
        }
        if (graev_norm(GroupElement{}, space).value != 0.0) ++nonzero_zero;
    }
    return {3, "prenorm-axioms", subadditivity + bad_witness + nonzero_zero == 0,
            {{"pairs", cases},
             {"subadditivity_violations", subadditivity},
             {"witness_violations", bad_witness},
             {"zero_norm_violations", nonzero_zero}}};
}

CriterionResult maximality(const Options& o) {
    const std::size_t cases = scaled(1000, o);
    const std::size_t corpus = scaled(1000, o);
    CounterRng rng(o.seed, CounterRng::stream_id("maximality", 0));
    std::size_t below_norm = 0;
    std::size_t reduce_increase = 0;
    std::size_t reduce_other = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < cases; ++t) {
        const GroundSpace space = corpus_space(o.seed, rng.below(corpus));
        Representation rep;
        const std::size_t pairs = 1 + rng.below(6);
        for (std::size_t p = 0; p < pairs; ++p) {
            rep.pairs.push_back({static_cast<PointIndex>(rng.below(space.size())),
                                 static_cast<PointIndex>(rng.below(space.size()))});
        }
        const auto eval = evaluate_representation(rep, space);
        const double norm = graev_norm(eval.element, space).value;
        min_slack = std::min(min_slack, eval.weight - norm);
        if (eval.weight < norm - kNormTol) ++below_norm;

        const auto reduced = evaluate_representation(reduce_representation(rep, space), space);
        if (reduced.weight > eval.weight + kNormTol) ++reduce_increase;
        if (reduced.element != eval.element || reduced.weight < norm - kNormTol) ++reduce_other;
    }
    return {4, "maximality", below_norm + reduce_increase + reduce_other == 0,
            {{"representations", cases},
             {"weight_below_norm", below_norm},
             {"reduce_increased_weight", reduce_increase},
             {"reduce_changed_element", reduce_other},
             {"min_weight_minus_norm", min_slack}}};
}

PseudometricSequence random_sequence(CounterRng& rng, std::size_t points, std::size_t length,
                                     TailRule tail, double lo_exp, double hi_exp) {
    std::vector<GroundSpace> metrics;
    for (std::size_t n = 0; n < length; ++n) {
        const GroundSpace base = random_pseudometric(rng, points, rng.chance(0.5));
        const double scale[] = {std::exp2(-rng.uniform(lo_exp, hi_exp))};
        metrics.push_back(PseudometricSequence::scaled(base, scale, TailRule::repeat_last()).metric(1));
    }
    return PseudometricSequence(std::move(metrics), tail);
}

CriterionResult ball_inclusion(const Options& o) {
    const std::size_t cases = scaled(500, o);
    std::size_t in_ball = 0;
    std::size_t elements = 0;
    std::size_t failures = 0;
    std::size_t capacity = 0;
    std::string first_failure;
    for (std::size_t i = 0; i < cases; ++i) {
        CounterRng rng(o.seed, CounterRng::stream_id("ball-inclusion", i));
        const std::size_t points = 2 + rng.below(7);
        const std::size_t length = 1 + rng.below(6);
        const auto seq = random_sequence(rng, points, length, TailRule::repeat_last(), 0.0, 10.0);
        const GroundSpace combined = combine_sup(seq);
        const WdSystem system(seq);
        for (const auto& g : all_elements(points)) {
            ++elements;
            if (!(graev_norm(g, combined).value < 0.5)) continue;
            ++in_ball;
            try {
                const auto ball = wd_witness_from_ball(g, system, combined);
                const auto check = check_witness(ball.witness, g, system);
                const auto buckets = check_bucket_capacity(ball.witness);
                if (!check.ok || !buckets.ok) {
                    ++failures;
                    if (first_failure.empty()) first_failure = check.ok ? buckets.reason : check.reason;
                }
            } catch (const CapacityError&) {
                ++capacity;
            } catch (const Error& e) {
                ++failures;
                if (first_failure.empty()) first_failure = e.what();
            }
        }
    }
    io::Json details{{"sequences", cases},
                     {"elements", elements},
                     {"in_ball", in_ball},
                     {"failures", failures},
                     {"capacity_skips", capacity}};
    if (!first_failure.empty()) details["first_failure"] = first_failure;
    return {5, "ball-inclusion", failures == 0 && capacity == 0 && in_ball > 0, details};
}

CriterionResult refutation_soundness(const Options& o) {
    // Every nonzero pair distance is at least 1, so each W_n is trivial.
    const std::size_t spaces = scaled(50, o);
    std::size_t constant_elements = 0;
    std::size_t constant_wrong = 0;
    for (std::size_t i = 0; i < spaces; ++i) {
        CounterRng rng(o.seed, CounterRng::stream_id("constant-distance", i));
        const std::size_t points = 2 + rng.below(6);
        std::vector<GroundSpace> metrics;
        const std::size_t length = 1 + rng.below(3);
        for (std::size_t n = 0; n < length; ++n) {
            std::vector<std::vector<double>> d(points, std::vector<double>(points, 0.0));
            for (std::size_t a = 0; a < points; ++a) {
                for (std::size_t b = a + 1; b < points; ++b) d[a][b] = d[b][a] = rng.uniform(1.0, 2.0);
            }
            metrics.push_back(GroundSpace::from_matrix(std::move(d)));
        }
        const PseudometricSequence seq(metrics, TailRule::repeat_last());
        const WdSystem system(seq);
        for (const auto& g : all_elements(points)) {
            if (g.is_zero()) continue;
            ++constant_elements;
            if (wd_membership(g, system, seq.metric(1), 6).verdict != WdVerdict::refuted) ++constant_wrong;
        }
    }

    const std::size_t cases = scaled(200, o);
    std::size_t certified = 0, refuted = 0, unknown = 0;
    std::size_t contradictions = 0, invalid = 0, absorption = 0;
    for (std::size_t i = 0; i < cases; ++i) {
        CounterRng rng(o.seed, CounterRng::stream_id("wd-random", i));
        const std::size_t points = 2 + rng.below(6);
        const std::size_t length = 1 + rng.below(4);
        const TailRule tails[] = {TailRule::repeat_last(), TailRule::zero(), TailRule::scale(0.5)};
        const TailRule tail = tails[rng.below(3)];
        const auto seq = random_sequence(rng, points, length, tail, -1.5, 2.0);
        const WdSystem system(seq);
        const auto g = random_nonzero(rng, points);
        const std::size_t n_max = 1 + rng.below(8);

        const auto exact = wd_membership(g, system, seq.metric(1), n_max);
        const auto sound = certify_by_assignment(g, system, n_max);
        switch (exact.verdict) {
        case WdVerdict::certified: ++certified; break;
        case WdVerdict::refuted: ++refuted; break;
        case WdVerdict::unknown: ++unknown; break;
        }
        if (sound && exact.verdict == WdVerdict::refuted) ++contradictions;
        if (sound && !check_witness(*sound, g, system).ok) ++invalid;
        if (exact.verdict == WdVerdict::certified) {
            if (!check_witness(*exact.witness, g, system).ok || exact.witness->max_index() > n_max) ++invalid;
            const std::size_t larger = n_max + 1 + rng.below(4);
            if (wd_membership(g, system, seq.metric(1), larger).verdict != WdVerdict::certified) ++absorption;
        }
    }
    const bool passed = constant_wrong == 0 && contradictions == 0 && invalid == 0 && absorption == 0 &&
                        unknown == 0;
    return {6, "refutation-soundness", passed,
            {{"constant_spaces", spaces},
             {"constant_elements", constant_elements},
             {"constant_not_refuted", constant_wrong},
             {"random_cases", cases},
             {"certified", certified},
             {"refuted", refuted},
             {"unknown", unknown},
             {"contradictions", contradictions},
             {"invalid_witnesses", invalid},
             {"absorption_failures", absorption}}};
}

using lab::Scenario;
using lab::Verdict;

struct LabRun {
    lab::LabeledSequence labeled;
    lab::CauchyReport report;
};

std::vector<LabRun> run_lab(lab::Ground ground, const std::vector<Scenario>& scenarios,
                            std::size_t total, std::uint64_t seed) {
    const auto counts = spread(total, scenarios.size() * 4);
    std::vector<LabRun> out;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) continue;
        lab::ScenarioSpec spec;
        spec.scenario = scenarios[c % scenarios.size()];
        spec.ground = ground;
        spec.n = 1 + c / scenarios.size();
        spec.count = counts[c];
        for (auto& labeled : lab::generate_sequences(spec, seed)) {
            auto report = lab::analyze_cauchy(labeled.sequence, spec.n);
            out.push_back({std::move(labeled), std::move(report)});
        }
    }
    return out;
}

CriterionResult completeness(const Options& o) {
    const auto runs = run_lab(lab::Ground::plane,
                              {Scenario::converging_clusters, Scenario::merging_clusters,
                               Scenario::constant, Scenario::adversarial_noise},
                              scaled(100, o, 16), o.seed);
    std::map<std::string, std::size_t> verdicts;
    std::size_t bad_verdict = 0, too_long = 0, far_tail = 0, label_mismatch = 0;
    double worst_tail = 0.0;
    for (const auto& r : runs) {
        ++verdicts[lab::to_string(r.report.verdict)];
        const bool ok = r.report.verdict == Verdict::converged ||
                        r.report.verdict == Verdict::escaped_to_lower_rank;
        if (!ok) {
            ++bad_verdict;
            continue;
        }
        if (r.report.limit.size() > r.labeled.spec.n) ++too_long;
        worst_tail = std::max(worst_tail, r.report.tail_limit_distance);
        if (!(r.report.tail_limit_distance < lab::kDefaultTolerance)) ++far_tail;
        if (!lab::matches_label(r.labeled, r.report)) ++label_mismatch;
    }
    return {7, "completeness", bad_verdict + too_long + far_tail + label_mismatch == 0,
            {{"scenarios", runs.size()},
             {"verdicts", verdict_counts(verdicts)},
             {"limit_longer_than_n", too_long},
             {"tail_not_within_tol", far_tail},
             {"max_tail_limit_distance", worst_tail},
             {"label_mismatches", label_mismatch}}};
}

CriterionResult incompleteness(const Options& o) {
    const auto runs = run_lab(lab::Ground::interval, {Scenario::drift_to_boundary}, scaled(20, o, 4), o.seed);
    std::map<std::string, std::size_t> verdicts;
    std::size_t wrong = 0, not_separated = 0;
    double min_liminf = std::numeric_limits<double>::infinity();
    for (const auto& r : runs) {
        ++verdicts[lab::to_string(r.report.verdict)];
        if (r.report.verdict != Verdict::no_limit_in_ground) {
            ++wrong;
            continue;
        }
        const double liminf = r.report.fixed_distance_liminf.value_or(0.0);
        min_liminf = std::min(min_liminf, liminf);
        if (!(liminf > lab::kSeparationFactor * lab::kDefaultTolerance)) ++not_separated;
    }
    io::Json details{{"scenarios", runs.size()},
                     {"verdicts", verdict_counts(verdicts)},
                     {"not_separated", not_separated}};
    details["min_fixed_distance_liminf"] = std::isfinite(min_liminf) ? io::Json(min_liminf) : io::Json();
    return {8, "incompleteness", wrong + not_separated == 0 && !runs.empty(), details};
}

CriterionResult dichotomy(const Options& o) {
    const auto runs = run_lab(lab::Ground::finite,
                              {Scenario::converging_clusters, Scenario::merging_clusters,
                               Scenario::constant, Scenario::adversarial_noise},
                              scaled(100, o, 16), o.seed);
    std::map<std::string, std::size_t> verdicts;
    std::size_t entries = 0, violations = 0, unanalyzed = 0;
    for (const auto& r : runs) {
        ++verdicts[lab::to_string(r.report.verdict)];
        if (r.report.dichotomy.size() != r.labeled.spec.n) {
            ++unanalyzed;
            continue;
        }
        for (const auto& e : r.report.dichotomy) {
            ++entries;
            if (!e.exactly_one()) ++violations;
        }
    }
    return {9, "dichotomy", violations + unanalyzed == 0,
            {{"sequences", runs.size()},
             {"verdicts", verdict_counts(verdicts)},
             {"entries", entries},
             {"violations", violations},
             {"without_dichotomy", unanalyzed}}};
}

} // namespace

GroundSpace random_pseudometric(CounterRng& rng, std::size_t points, bool quarter) {
    std::vector<std::vector<double>> d(points, std::vector<double>(points, 0.0));
    for (std::size_t i = 0; i < points; ++i) {
        for (std::size_t j = i + 1; j < points; ++j) {
            double w = 0.0;
            if (quarter) {
                w = 0.25 * static_cast<double>(rng.below(17));
            } else if (!rng.chance(0.1)) {
                w = rng.uniform(0.0, 5.0);
            }
            d[i][j] = d[j][i] = w;
        }
    }
    closure(d);
    return GroundSpace::from_matrix(std::move(d));
}

GroundSpace corpus_space(std::uint64_t seed, std::size_t index) {
    CounterRng rng(seed, CounterRng::stream_id("corpus", index));
    return random_pseudometric(rng, 2 + rng.below(6), index % 2 == 0);
}

CriterionResult run_criterion(int id, const Options& options) {
    switch (id) {
    case 1: return oracle_equivalence(options);
    case 2: return extension_invariance(options);
    case 3: return prenorm_axioms(options);
    case 4: return maximality(options);
    case 5: return ball_inclusion(options);
    case 6: return refutation_soundness(options);
    case 7: return completeness(options);
    case 8: return incompleteness(options);
    case 9: return dichotomy(options);
    default: throw std::out_of_range("no criterion " + std::to_string(id));
    }
}

bool Report::passed() const noexcept {
    return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed; });
}

io::Json Report::to_json(const Options& options) const {
    io::Json list = io::Json::array();
    for (const auto& c : criteria) {
        list.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"details", c.details}});
    }
    return {{"suite", "graev-acceptance"},
            {"version", GRAEV_VERSION},
            {"seed", options.seed},
            {"rng", std::string(CounterRng::name)},
            {"quick", options.quick},
            {"criteria", std::move(list)},
            {"passed", passed()}};
}

Report run_suite(const Options& options, const std::function<void(const CriterionResult&)>& progress) {
    Report report;
    for (int id = 1; id <= kCriteria; ++id) {
        report.criteria.push_back(run_criterion(id, options));
        if (progress) progress(report.criteria.back());
    }
    return report;
}

} // namespace graev::suite
