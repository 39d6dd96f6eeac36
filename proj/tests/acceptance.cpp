// Acceptance run: one PASS/FAIL line per numbered criterion with its time
// budget. Criterion 10 runs the command line tool twice and compares bytes.
//
//   graev_acceptance <path-to-graev> [seed]

#include "graev/suite.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string summary(const graev::io::Json& details) {
    std::string out;
    for (const auto& [key, value] : details.items()) {
        if (value.is_structured()) continue;
        if (!out.empty()) out += ' ';
        out += key + '=' + value.dump();
    }
    return out;
}

void line(bool passed, int id, const std::string& name, double secs, double budget, const std::string& info) {
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs/%gs", secs, budget);
    std::cout << (passed ? "PASS" : "FAIL") << "  criterion " << id << "  " << name << "  [" << timing << "]  "
              << info << std::endl;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: graev_acceptance <path-to-graev> [seed]\n";
        return 2;
    }
    const std::string tool = argv[1];
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;
    const double budgets[] = {60, 10, 10, 10, 60, 30, 60, 10, 30};

    const graev::suite::Options options{seed, false};
    bool all = true;
    double suite_seconds = 0.0;
    for (int id = 1; id <= graev::suite::kCriteria; ++id) {
        const auto start = Clock::now();
        const auto r = graev::suite::run_criterion(id, options);
        const double secs = seconds_since(start);
        suite_seconds += secs;
        const double budget = budgets[id - 1];
        const bool passed = r.passed && secs <= budget;
        all = all && passed;
        line(passed, id, r.name, secs, budget, summary(r.details) + (secs > budget ? " (over budget)" : ""));
    }

    // Two separate processes with the same seed must write identical bytes.
    const auto dir = std::filesystem::temp_directory_path() / ("graev-acceptance-" + std::to_string(seed));
    std::filesystem::create_directories(dir);
    const auto first = dir / "run1.json";
    const auto second = dir / "run2.json";
    const auto start = Clock::now();
    int codes = 0;
    for (const auto& out : {first, second}) {
        const std::string cmd = "\"" + tool + "\" suite --seed " + std::to_string(seed) + " --out \"" + out.string() +
                                "\" 2>/dev/null";
        codes |= std::system(cmd.c_str());
    }
    const double secs = seconds_since(start);
    const std::string a = slurp(first);
    const std::string b = slurp(second);
    const double budget = 2.0 * 300.0;
    const bool identical = codes == 0 && !a.empty() && a == b;
    const bool passed = identical && secs <= budget && suite_seconds <= 300.0;
    all = all && passed;
    std::ostringstream info;
    info << "bytes=" << a.size() << " identical=" << (identical ? "true" : "false") << " exit_codes=" << codes
         << " full_suite_seconds=" << suite_seconds;
    line(passed, 10, "determinism", secs, budget, info.str());
    std::filesystem::remove_all(dir);

    std::cout << (all ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << std::endl;
    return all ? 0 : 1;
}
