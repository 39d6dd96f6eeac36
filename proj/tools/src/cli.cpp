#include "graev/cli.hpp"

#include "graev/completeness_lab.hpp"
#include "graev/errors.hpp"
#include "graev/graev_metric.hpp"
#include "graev/io.hpp"
#include "graev/neighborhood.hpp"
#include "graev/rng.hpp"
#include "graev/suite.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace graev::cli {

namespace {

using io::Json;

struct Config {
    std::string space;
    std::string metrics;
    std::string element;
    std::string g;
    std::string h;
    std::string out;
    std::uint64_t seed = 1;
    std::size_t max_support = 6;
    std::size_t trials = 1000;
    std::size_t n_max = 8;
    double radius = 1.0;
    double tol = lab::kDefaultTolerance;
    std::string scenario = "all";
    std::string ground;
    std::size_t n = 0;
    std::size_t count = 1;
    std::size_t terms = 48;
    bool quick = false;
};

void emit(const Json& j, const Config& cfg, std::ostream& out) {
    if (cfg.out.empty()) {
        out << j.dump(2) << '\n';
    } else {
        io::write_json_file(cfg.out, j);
    }
}

int validate_metric(const Config& cfg, std::ostream& out, std::ostream& err) {
    const auto space = io::load_space(cfg.space);
    const auto report = validate_space(space);
    emit(io::to_json(report), cfg, out);
    if (report.ok()) return kExitOk;
    err << "not a pseudometric: " << report.violations.front().describe() << '\n';
    return kExitRefuted;
}

int norm(const Config& cfg, std::ostream& out) {
    const auto space = io::load_space(cfg.space);
    emit(io::to_json(graev_norm(io::parse_element(cfg.element, space), space)), cfg, out);
    return kExitOk;
}

int dist(const Config& cfg, std::ostream& out) {
    const auto space = io::load_space(cfg.space);
    const auto g = io::parse_element(cfg.g, space);
    const auto h = io::parse_element(cfg.h, space);
    const auto r = graev_norm(g + h, space);
    emit({{"value", r.value}, {"sum", io::element_to_json(g + h)}, {"witness", io::to_json(r)["witness"]}},
         cfg, out);
    return kExitOk;
}

int oracle_check(const Config& cfg, std::ostream& out) {
    const auto space = io::load_space(cfg.space);
    space.require_pseudometric();
    const std::size_t others = space.size() - 1;
    const std::size_t max_support = std::min(cfg.max_support, others);

    CounterRng rng(cfg.seed, CounterRng::stream_id("oracle-check", 0));
    std::map<std::size_t, std::vector<double>> tables;
    std::vector<PointIndex> pool(others);
    std::iota(pool.begin(), pool.end(), PointIndex{1});
    Json mismatches = Json::array();
    double max_err = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const std::size_t size = rng.below(max_support + 1);
        for (std::size_t i = 0; i < size; ++i) std::swap(pool[i], pool[i + rng.below(others - i)]);
        std::vector<PointIndex> pick(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
        const auto g = GroupElement::from_points(pick);
        const std::size_t budget = reduced_pair_count(size) + 2;
        auto it = tables.find(budget);
        if (it == tables.end()) it = tables.emplace(budget, oracle_table(space, budget)).first;
        const double oracle = it->second[g.to_mask()];
        const double value = graev_norm(g, space).value;
        const double err = std::abs(value - oracle);
        if (std::isfinite(err)) max_err = std::max(max_err, err);
        if (!(err <= 1e-9)) {
            mismatches.push_back({{"element", io::element_to_json(g)}, {"norm", value}, {"oracle", oracle}});
        }
    }
    const bool ok = mismatches.empty();
    emit({{"trials", cfg.trials}, {"seed", cfg.seed}, {"mismatches", std::move(mismatches)}, {"max_abs_err", max_err}},
         cfg, out);
    return ok ? kExitOk : kExitRefuted;
}

int wd_check(const Config& cfg, std::ostream& out) {
    const auto space = io::load_space(cfg.space);
    const WdSystem system(io::load_sequence(cfg.metrics, space));
    const auto g = io::parse_element(cfg.element, space);
    emit(io::to_json(wd_membership(g, system, space, cfg.n_max)), cfg, out);
    return kExitOk;
}

int wd_witness(const Config& cfg, std::ostream& out) {
    const auto space = io::load_space(cfg.space);
    const auto seq = io::load_sequence(cfg.metrics, space);
    const auto g = io::parse_element(cfg.element, space);
    const auto combined = combine_sup(seq);
    const auto ball = wd_witness_from_ball(g, WdSystem(seq), combined);
    Json j = io::to_json(ball);
    j["norm"] = graev_norm(g, combined).value;
    emit(j, cfg, out);
    return kExitOk;
}

int ball(const Config& cfg, std::ostream& out) {
    const auto space = io::load_space(cfg.space);
    const auto g = io::parse_element(cfg.element, space);
    const bool member = ball_membership(g, space, cfg.radius);
    emit({{"member", member}, {"norm", graev_norm(g, space).value}, {"radius", cfg.radius}}, cfg, out);
    return kExitOk;
}

int cauchy_lab(const Config& cfg, std::ostream& out, std::ostream& err) {
    std::vector<lab::ScenarioSpec> specs;
    std::vector<lab::Scenario> scenarios;
    if (cfg.scenario == "all") {
        scenarios = {lab::Scenario::converging_clusters, lab::Scenario::merging_clusters,
                     lab::Scenario::drift_to_boundary, lab::Scenario::constant,
                     lab::Scenario::adversarial_noise};
    } else if (auto s = lab::scenario_from_string(cfg.scenario)) {
        scenarios = {*s};
    } else {
        throw StructuralError("unknown scenario \"" + cfg.scenario + "\"");
    }
    std::vector<lab::Ground> grounds;
    if (cfg.ground.empty()) {
        grounds = {lab::Ground::plane, lab::Ground::interval, lab::Ground::finite};
    } else if (auto g = lab::ground_from_string(cfg.ground)) {
        grounds = {*g};
    } else {
        throw StructuralError("unknown ground \"" + cfg.ground + "\"");
    }
    for (auto s : scenarios) {
        for (auto g : grounds) {
            if (!lab::supported(s, g)) continue;
            for (std::size_t n = 1; n <= 4; ++n) {
                if (cfg.n != 0 && n != cfg.n) continue;
                specs.push_back({s, g, n, cfg.terms, cfg.count});
            }
        }
    }
    if (specs.empty()) throw PreconditionError("no supported scenario/ground combination selected");

    std::vector<std::pair<std::string, Json>> entries;
    std::size_t mismatches = 0;
    for (const auto& spec : specs) {
        for (const auto& labeled : lab::generate_sequences(spec, cfg.seed)) {
            const auto report = lab::analyze_cauchy(labeled.sequence, spec.n, cfg.tol);
            const bool matches = lab::matches_label(labeled, report, cfg.tol);
            if (!matches) {
                ++mismatches;
                err << labeled.id << ": expected " << lab::to_string(labeled.expected) << ", got "
                    << lab::to_string(report.verdict) << '\n';
            }
            Json entry{{"id", labeled.id},
                       {"scenario", lab::to_string(spec.scenario)},
                       {"ground", lab::to_string(spec.ground)},
                       {"n", spec.n},
                       {"terms", labeled.sequence.terms.size()},
                       {"label", lab::to_string(labeled.expected)},
                       {"matches", matches}};
            entry.update(io::to_json(report));
            entries.emplace_back(labeled.id, std::move(entry));
        }
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Json list = Json::array();
    for (auto& [id, e] : entries) list.push_back(std::move(e));

    emit({{"note", "Cauchy sequences stand in for Cauchy filters; only sequence completeness is tested"},
          {"seed", cfg.seed},
          {"rng", std::string(CounterRng::name)},
          {"tolerance", cfg.tol},
          {"scenarios", std::move(list)},
          {"mismatches", mismatches}},
         cfg, out);
    return mismatches == 0 ? kExitOk : kExitRefuted;
}

int suite(const Config& cfg, std::ostream& out, std::ostream& err) {
    const suite::Options options{cfg.seed, cfg.quick};
    const auto report = suite::run_suite(options, [&](const suite::CriterionResult& r) {
        err << (r.passed ? "PASS " : "FAIL ") << r.id << ' ' << r.name << '\n';
    });
    emit(report.to_json(options), cfg, out);
    return report.passed() ? kExitOk : kExitRefuted;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"Graev norms, W_D neighborhoods and completeness experiments on free Boolean groups", "graev"};
    app.require_subcommand(1);

    auto space_opt = [&](CLI::App* sub) { sub->add_option("--space", cfg.space, "ground space JSON")->required(); };
    auto out_opt = [&](CLI::App* sub) { sub->add_option("--out", cfg.out, "write JSON here instead of stdout"); };
    auto element_opt = [&](CLI::App* sub) {
        sub->add_option("--element", cfg.element, "comma-separated point indices")->required();
    };

    auto* validate = app.add_subcommand("validate-metric", "check the pseudometric axioms");
    space_opt(validate);
    out_opt(validate);

    auto* norm_cmd = app.add_subcommand("norm", "Graev prenorm with an optimal matching");
    space_opt(norm_cmd);
    element_opt(norm_cmd);
    out_opt(norm_cmd);

    auto* dist_cmd = app.add_subcommand("dist", "Graev distance between two elements");
    space_opt(dist_cmd);
    dist_cmd->set_help_flag("--help", "Print this help message and exit");
    dist_cmd->add_option("--g", cfg.g, "first element")->required();
    dist_cmd->add_option("--h", cfg.h, "second element")->required();
    out_opt(dist_cmd);

    auto* oracle = app.add_subcommand("oracle-check", "compare the matching norm with representation enumeration");
    space_opt(oracle);
    oracle->add_option("--max-support", cfg.max_support, "largest sampled support")->capture_default_str();
    oracle->add_option("--trials", cfg.trials, "number of sampled elements")->capture_default_str();
    oracle->add_option("--seed", cfg.seed)->capture_default_str();
    out_opt(oracle);

    auto* wd = app.add_subcommand("wd-check", "decide membership in W_1 + ... + W_nmax");
    space_opt(wd);
    wd->add_option("--metrics", cfg.metrics, "pseudometric sequence JSON")->required();
    element_opt(wd);
    wd->add_option("--nmax", cfg.n_max, "largest neighborhood index")->capture_default_str()->check(CLI::PositiveNumber);
    out_opt(wd);

    auto* wdw = app.add_subcommand("wd-witness", "dyadic W_D witness for an element of the 1/2-ball");
    space_opt(wdw);
    wdw->add_option("--metrics", cfg.metrics, "pseudometric sequence JSON")->required();
    element_opt(wdw);
    out_opt(wdw);

    auto* ball_cmd = app.add_subcommand("ball", "membership in the open norm ball");
    space_opt(ball_cmd);
    element_opt(ball_cmd);
    ball_cmd->add_option("--radius", cfg.radius)->required()->check(CLI::PositiveNumber);
    out_opt(ball_cmd);

    auto* lab_cmd = app.add_subcommand("cauchy-lab", "generate and analyze labeled Cauchy sequences");
    lab_cmd->add_option("--scenario", cfg.scenario, "scenario name or all")->capture_default_str();
    lab_cmd->add_option("--ground", cfg.ground, "plane, interval or finite (default: every supported)");
    lab_cmd->add_option("--n", cfg.n, "word length bound (default: 1 to 4)")->check(CLI::Range(1, 4));
    lab_cmd->add_option("--count", cfg.count, "sequences per combination")->capture_default_str();
    lab_cmd->add_option("--terms", cfg.terms, "terms per sequence")->capture_default_str();
    lab_cmd->add_option("--tol", cfg.tol, "convergence tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    lab_cmd->add_option("--seed", cfg.seed)->capture_default_str();
    out_opt(lab_cmd);

    auto* suite_cmd = app.add_subcommand("suite", "run the acceptance properties");
    suite_cmd->add_option("--seed", cfg.seed)->capture_default_str();
    suite_cmd->add_flag("--quick", cfg.quick, "one tenth of the pinned case counts");
    out_opt(suite_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*validate) return validate_metric(cfg, out, err);
        if (*norm_cmd) return norm(cfg, out);
        if (*dist_cmd) return dist(cfg, out);
        if (*oracle) return oracle_check(cfg, out);
        if (*wd) return wd_check(cfg, out);
        if (*wdw) return wd_witness(cfg, out);
        if (*ball_cmd) return ball(cfg, out);
        if (*lab_cmd) return cauchy_lab(cfg, out, err);
        if (*suite_cmd) return suite(cfg, out, err);
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IndexError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitRefuted;
    }
    return kExitUsage;
}

} // namespace graev::cli
