#include "graev/io.hpp"

#include "graev/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace graev::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw StructuralError(what); }

const Json& member(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

double number(const Json& j, const char* what) {
    if (!j.is_number()) bad(std::string(what) + " must be a number");
    return j.get<double>();
}

std::vector<std::vector<double>> table(const Json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array of rows");
    std::vector<std::vector<double>> out;
    for (const auto& row : j) {
        if (!row.is_array()) bad(std::string(what) + " rows must be arrays");
        auto& r = out.emplace_back();
        for (const auto& v : row) r.push_back(number(v, what));
    }
    return out;
}

Json pair_json(const PointPair& p) { return Json::array({p.first, p.second}); }

// JSON has no infinity; unbounded values are written as null.
Json real(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

} // namespace

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        bad(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& value) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << value.dump(2) << '\n';
}

GroundSpace space_from_json(const Json& j) {
    if (!j.is_object()) bad("space must be a JSON object");
    const auto& kind = member(j, "kind");
    if (!kind.is_string()) bad("\"kind\" must be a string");

    std::vector<std::string> labels;
    if (j.contains("labels")) {
        if (!j["labels"].is_array()) bad("\"labels\" must be an array");
        for (const auto& l : j["labels"]) {
            if (!l.is_string()) bad("labels must be strings");
            labels.push_back(l.get<std::string>());
        }
        if (labels.empty() || labels.front() != "e") bad("index 0 must be the base point labeled \"e\"");
    }

    const auto k = kind.get<std::string>();
    if (k == "matrix") return GroundSpace::from_matrix(table(member(j, "dist"), "dist"), labels);
    if (k == "euclidean") return GroundSpace::from_coords(table(member(j, "coords"), "coords"), labels);
    bad("unknown space kind \"" + k + "\"");
}

Json space_to_json(const GroundSpace& space) {
    Json j;
    j["kind"] = space.kind() == SpaceKind::matrix ? "matrix" : "euclidean";
    j["labels"] = space.labels();
    if (space.kind() == SpaceKind::matrix) {
        Json rows = Json::array();
        for (PointIndex i = 0; i < space.size(); ++i) {
            Json row = Json::array();
            for (PointIndex k = 0; k < space.size(); ++k) row.push_back(space.raw(i, k));
            rows.push_back(std::move(row));
        }
        j["dist"] = std::move(rows);
    } else {
        Json rows = Json::array();
        for (PointIndex i = 0; i < space.size(); ++i) {
            const auto c = space.coords(i);
            rows.push_back(std::vector<double>(c.begin(), c.end()));
        }
        j["coords"] = std::move(rows);
    }
    return j;
}

GroundSpace load_space(const std::filesystem::path& path) {
    return space_from_json(read_json_file(path));
}

PseudometricSequence sequence_from_json(const Json& j, const GroundSpace& ground) {
    const auto& metrics = member(j, "metrics");
    if (!metrics.is_array() || metrics.empty()) bad("\"metrics\" must be a non-empty array");

    std::vector<GroundSpace> list;
    for (const auto& m : metrics) {
        if (m.is_object() && m.contains("dist")) {
            list.push_back(GroundSpace::from_matrix(table(m["dist"], "dist"), ground.labels()));
        } else if (m.is_object() && m.contains("ground_scale")) {
            const double c = number(m["ground_scale"], "ground_scale");
            const double scales[] = {c};
            list.push_back(PseudometricSequence::scaled(ground, scales, TailRule::repeat_last()).metric(1));
        } else {
            bad("each metric needs \"dist\" or \"ground_scale\"");
        }
    }

    TailRule tail = TailRule::repeat_last();
    if (j.contains("tail")) {
        const auto& t = j["tail"];
        if (t == "repeat-last") {
            tail = TailRule::repeat_last();
        } else if (t == "zero") {
            tail = TailRule::zero();
        } else if (t.is_object() && t.value("rule", "") == "scale") {
            const double r = number(member(t, "ratio"), "ratio");
            if (!std::isfinite(r) || r < 0.0) bad("scale ratio must be finite and non-negative");
            tail = TailRule::scale(r);
        } else {
            bad("unknown tail rule " + t.dump());
        }
    }
    return PseudometricSequence(std::move(list), tail);
}

Json sequence_to_json(const PseudometricSequence& seq) {
    Json metrics = Json::array();
    for (std::size_t n = 1; n <= seq.explicit_length(); ++n) {
        metrics.push_back({{"dist", space_to_json(seq.metric(n))["dist"]}});
    }
    Json tail;
    switch (seq.tail().kind) {
    case TailRule::Kind::repeat_last: tail = "repeat-last"; break;
    case TailRule::Kind::zero: tail = "zero"; break;
    case TailRule::Kind::scale: tail = {{"rule", "scale"}, {"ratio", seq.tail().ratio}}; break;
    }
    return {{"metrics", std::move(metrics)}, {"tail", std::move(tail)}};
}

PseudometricSequence load_sequence(const std::filesystem::path& path, const GroundSpace& ground) {
    return sequence_from_json(read_json_file(path), ground);
}

GroupElement parse_element(std::string_view text, const GroundSpace& space) {
    std::vector<PointIndex> points;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view token = text.substr(pos, end - pos);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        PointIndex value = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
            bad("bad point index \"" + std::string(token) + "\" in element \"" + std::string(text) + "\"");
        }
        points.push_back(value);
        pos = end + 1;
    }
    return sum_points(points, space);
}

GroupElement element_from_json(const Json& j) {
    if (!j.is_array()) bad("group element must be an array of point indices");
    std::vector<PointIndex> support;
    for (const auto& v : j) {
        if (!v.is_number_unsigned()) bad("point indices must be non-negative integers");
        support.push_back(v.get<PointIndex>());
    }
    return GroupElement::from_support(std::move(support));
}

Json element_to_json(const GroupElement& g) {
    Json out = Json::array();
    for (PointIndex x : g.support()) out.push_back(x);
    return out;
}

Json to_json(const ValidationReport& report) {
    Json violations = Json::array();
    for (const auto& v : report.violations) {
        violations.push_back({{"rule", to_string(v.rule)},
                              {"indices", v.indices},
                              {"excess", v.excess},
                              {"message", v.describe()}});
    }
    return {{"valid", report.ok()}, {"violations", std::move(violations)}};
}

Json to_json(const NormResult& norm) {
    Json pairs = Json::array();
    for (const auto& p : norm.witness.pairs) pairs.push_back(pair_json(p));
    return {{"value", norm.value}, {"witness", std::move(pairs)}};
}

Json to_json(const WdWitness& witness) {
    Json out = Json::array();
    for (const auto& a : witness.entries) {
        out.push_back({{"pair", pair_json(a.pair)}, {"index", a.index}});
    }
    return out;
}

Json to_json(const WdMembership& membership) {
    Json j{{"verdict", to_string(membership.verdict)}, {"n_max", membership.n_max}};
    if (membership.witness) j["witness"] = to_json(*membership.witness);
    return j;
}

Json to_json(const BallWitness& ball) {
    Json pairs = Json::array();
    for (const auto& bp : ball.pairs) {
        pairs.push_back({{"pair", pair_json(bp.pair)},
                         {"weight", bp.weight},
                         {"k", bp.k},
                         {"index", bp.index}});
    }
    return {{"witness", to_json(ball.witness)},
            {"buckets", std::move(pairs)},
            {"dyadic_sum", ball.dyadic_sum}};
}

Json to_json(const lab::CauchyReport& report) {
    Json modulus = Json::array();
    for (const auto& m : report.cauchy.modulus) modulus.push_back({{"from", m.from}, {"sup", m.sup}});
    Json clusters = Json::array();
    for (const auto& c : report.clusters) {
        Json cj{{"reference", c.reference},
                {"fate", lab::to_string(c.fate)},
                {"tail_points", c.tail_points},
                {"radius", c.radius},
                {"parity_breaks", c.parity_breaks}};
        if (!c.limit_coords.empty()) cj["limit_coords"] = c.limit_coords;
        if (c.limit_index) cj["limit_index"] = *c.limit_index;
        clusters.push_back(std::move(cj));
    }

    Json j{{"verdict", lab::to_string(report.verdict)},
           {"cauchy", report.cauchy.cauchy},
           {"tail_start", report.cauchy.tail_start},
           {"tail_diameter", report.cauchy.tail_diameter},
           {"modulus", std::move(modulus)}};
    if (report.cauchy.witness) {
        j["witness"] = {report.cauchy.witness->first, report.cauchy.witness->second};
    }
    if (report.verdict == lab::Verdict::not_cauchy) {
        j["diagnostic"] = report.diagnostic;
        return j;
    }
    j["stable_support"] = report.stable_support;
    j["cluster_radius"] = real(report.cluster_radius);
    j["clusters"] = std::move(clusters);
    j["stray_points"] = report.stray_points;
    if (report.verdict == lab::Verdict::no_limit_in_ground) {
        j["fixed_distance_liminf"] = real(report.fixed_distance_liminf.value_or(0.0));
    } else {
        Json limit{{"support", element_to_json(report.limit)}};
        if (report.space.kind() == SpaceKind::euclidean) {
            Json coords = Json::array();
            for (PointIndex x : report.limit.support()) {
                const auto c = report.space.coords(x);
                coords.push_back(std::vector<double>(c.begin(), c.end()));
            }
            limit["coords"] = std::move(coords);
        }
        j["limit"] = std::move(limit);
        j["tail_limit_distance"] = report.tail_limit_distance;
    }
    if (!report.dichotomy.empty()) {
        Json d = Json::array();
        for (const auto& e : report.dichotomy) {
            d.push_back({{"k", e.k},
                         {"converges_in_bk", e.converges_in_bk},
                         {"liminf_dist_to_bk", real(e.liminf_dist_to_bk)},
                         {"separated", e.separated}});
        }
        j["dichotomy"] = std::move(d);
    }
    if (!report.diagnostic.empty()) j["diagnostic"] = report.diagnostic;
    return j;
}

} // namespace graev::io
