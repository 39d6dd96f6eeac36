#include "graev/graev_metric.hpp"

#include "graev/errors.hpp"
#include "graev/matching.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <string_view>

namespace graev {

std::size_t matching_limit() {
    const char* env = std::getenv("GRAEV_MATCH_LIMIT");
    if (env == nullptr) return kDefaultMatchingLimit;
    const std::string_view text(env);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) {
        return kDefaultMatchingLimit;
    }
    return value;
}

NormResult graev_norm(const GroupElement& h, const GroundSpace& space, std::size_t limit) {
    space.require_pseudometric();
    const auto support = h.support();
    if (support.size() > limit) {
        throw CapacityError("support of size " + std::to_string(support.size()) +
                            " exceeds the matching limit " + std::to_string(limit));
    }
    if (!support.empty()) space.check_index(support.back());

    std::vector<PointIndex> vertices;
    vertices.reserve(support.size() + 1);
    if (support.size() % 2 == 1) vertices.push_back(kBasePoint);
    vertices.insert(vertices.end(), support.begin(), support.end());

    const std::size_t m = vertices.size();
    std::vector<double> weights(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            weights[i * m + j] = weights[j * m + i] = space(vertices[i], vertices[j]);
        }
    }
    const PerfectMatching pm = min_weight_perfect_matching(weights, m);

    NormResult result;
    result.witness.pairs.reserve(pm.pairs.size());
    for (const auto& [i, j] : pm.pairs) result.witness.pairs.push_back({vertices[i], vertices[j]});
    result.witness.weight = pm.weight;
    result.value = pm.weight;
    return result;
}

double graev_dist(const GroupElement& g, const GroupElement& h, const GroundSpace& space,
                  std::size_t limit) {
    return graev_norm(g + h, space, limit).value;
}

Representation reduce_representation(const Representation& rep, const GroundSpace& space) {
    space.require_pseudometric();
    std::vector<PointPair> pairs;
    pairs.reserve(rep.pairs.size());
    for (const auto& p : rep.pairs) {
        space.check_index(p.first);
        space.check_index(p.second);
        if (p.first != p.second) pairs.push_back(p);
    }

    // Merge the first two pairs that share a letter until none do. Each merge
    // removes at least one pair, so this terminates.
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < pairs.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < pairs.size() && !merged; ++j) {
                const PointPair a = pairs[i];
                const PointPair b = pairs[j];
                PointIndex ta = 0;
                PointIndex tb = 0;
                if (a.first == b.first) {
                    ta = a.second, tb = b.second;
                } else if (a.first == b.second) {
                    ta = a.second, tb = b.first;
                } else if (a.second == b.first) {
                    ta = a.first, tb = b.second;
                } else if (a.second == b.second) {
                    ta = a.first, tb = b.first;
                } else {
                    continue;
                }
                pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(j));
                if (ta == tb) {
                    pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(i));
                } else {
                    pairs[i] = {ta, tb};
                }
                merged = true;
            }
        }
    }
    return {std::move(pairs)};
}

namespace {

constexpr double kOracleWorkBound = 2e9;

void check_oracle_capacity(const GroundSpace& space, std::size_t max_pairs) {
    const std::size_t n = space.size();
    if (n > 26) throw CapacityError("oracle_norm enumerates group elements; at most 26 points");
    const double work = std::ldexp(1.0, static_cast<int>(n) - 1) * static_cast<double>(n * n) *
                        static_cast<double>(max_pairs);
    if (work > kOracleWorkBound) {
        throw CapacityError("oracle_norm work bound exceeded (" + std::to_string(work) + " > 2e9)");
    }
}

} // namespace

std::vector<double> oracle_table(const GroundSpace& space, std::size_t max_pairs) {
    check_oracle_capacity(space, max_pairs);
    const auto n = static_cast<PointIndex>(space.size());
    const std::size_t states = std::size_t{1} << (n - 1);
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // Generators x + y with their weights; bit x-1 stands for point x and
    // e has no bit. Ordered pairs are redundant because rho is read
    // symmetrically, and (x, x) only contributes the zero step.
    struct Step {
        std::uint64_t mask;
        double weight;
    };
    std::vector<Step> steps;
    for (PointIndex x = 0; x < n; ++x) {
        for (PointIndex y = x + 1; y < n; ++y) {
            const std::uint64_t mx = x == kBasePoint ? 0 : std::uint64_t{1} << (x - 1);
            const std::uint64_t my = std::uint64_t{1} << (y - 1);
            steps.push_back({mx ^ my, space(x, y)});
        }
    }

    // best_j[h] = min(best_{j-1}[h], min over steps of best_{j-1}[h ^ s] + w(s)):
    // the cheapest representation with at most j pairs.
    std::vector<double> best(states, kInf);
    best[0] = 0.0;
    std::vector<double> next(states);
    for (std::size_t round = 0; round < max_pairs; ++round) {
        next = best;
        for (std::size_t h = 0; h < states; ++h) {
            if (best[h] == kInf) continue;
            for (const auto& s : steps) {
                const std::size_t to = h ^ s.mask;
                next[to] = std::min(next[to], best[h] + s.weight);
            }
        }
        if (next == best) break;
        best.swap(next);
    }
    return best;
}

double oracle_norm(const GroupElement& h, const GroundSpace& space, std::size_t max_pairs) {
    if (!h.is_zero()) space.check_index(h.max_index());
    if (h.is_zero()) return 0.0;
    return oracle_table(space, max_pairs)[h.to_mask()];
}

} // namespace graev
