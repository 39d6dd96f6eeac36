#pragma once

#include "graev/ground_space.hpp"
#include "graev/io.hpp"
#include "graev/rng.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

// Randomized acceptance properties, one per numbered criterion.
namespace graev::suite {

/// Random symmetric table closed under shortest paths. With `quarter` set the
/// weights are multiples of 1/4 in [0, 4] (ties and exact sums); otherwise
/// uniform in [0, 5) with occasional zeros.
GroundSpace random_pseudometric(CounterRng& rng, std::size_t points, bool quarter);

/// Space `index` of the oracle corpus: 2 to 7 points, every other one on the
/// quarter grid.
GroundSpace corpus_space(std::uint64_t seed, std::size_t index);

struct Options {
    std::uint64_t seed = 1;
    /// Scales every pinned count down by 10 for smoke runs.
    bool quick = false;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    /// Counts and error measures; never timings.
    io::Json details;
};

/// Criteria 1 to 9. Criterion 10 (byte-identical reruns) is checked by
/// comparing two suite outputs.
inline constexpr int kCriteria = 9;

CriterionResult run_criterion(int id, const Options& options);

struct Report {
    std::vector<CriterionResult> criteria;

    bool passed() const noexcept;
    io::Json to_json(const Options& options) const;
};

/// Runs every criterion in id order; `progress` sees each result as it lands.
Report run_suite(const Options& options,
                 const std::function<void(const CriterionResult&)>& progress = {});

} // namespace graev::suite
