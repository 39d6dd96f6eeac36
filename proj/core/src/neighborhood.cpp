#include "graev/neighborhood.hpp"

#include "graev/errors.hpp"
#include "graev/graev_metric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>

namespace graev {

std::size_t WdWitness::max_index() const noexcept {
    std::size_t m = 0;
    for (const auto& a : entries) m = std::max(m, a.index);
    return m;
}

const char* to_string(WdVerdict verdict) noexcept {
    switch (verdict) {
    case WdVerdict::certified: return "certified";
    case WdVerdict::refuted: return "refuted";
    case WdVerdict::unknown: return "unknown";
    }
    return "unknown";
}

WitnessCheck check_witness(const WdWitness& witness, const GroupElement& g,
                           const WdSystem& system) {
    std::set<std::size_t> seen;
    std::vector<PointIndex> letters;
    for (const auto& [pair, index] : witness.entries) {
        if (index == 0) return {false, "witness index must be positive"};
        if (!seen.insert(index).second) {
            return {false, "index " + std::to_string(index) + " used twice"};
        }
        if (pair.first >= system.points() || pair.second >= system.points()) {
            return {false, "witness pair outside the ground space"};
        }
        const double d = system.sequence()(index, pair.first, pair.second);
        if (!(d < 1.0)) {
            return {false, "d_" + std::to_string(index) + "(" + std::to_string(pair.first) + "," +
                               std::to_string(pair.second) + ") = " + std::to_string(d) +
                               " is not below 1"};
        }
        letters.push_back(pair.first);
        letters.push_back(pair.second);
    }
    if (sum_points(letters) != g) return {false, "witness pairs do not sum to the element"};
    return {};
}

WitnessCheck check_bucket_capacity(const WdWitness& witness) {
    std::map<int, std::size_t> per_bucket;
    for (const auto& a : witness.entries) {
        if (a.index == 0) return {false, "witness index must be positive"};
        ++per_bucket[std::bit_width(a.index) - 1];
    }
    for (const auto& [j, count] : per_bucket) {
        if (j >= 63 || count >= (std::size_t{1} << j)) {
            return {false, "bucket " + std::to_string(j) + " holds " + std::to_string(count) +
                               " indices, needs fewer than 2^" + std::to_string(j)};
        }
    }
    return {};
}

namespace {

struct Generator {
    std::uint64_t mask;
    PointPair pair;
};

// Admissible non-trivial x + y in W_n, in (x, y) lexicographic order with
// duplicate masks removed.
std::vector<Generator> generators(const WdSystem& system, std::size_t n) {
    const auto count = static_cast<PointIndex>(system.points());
    std::vector<Generator> out;
    for (PointIndex x = 0; x < count; ++x) {
        for (PointIndex y = x + 1; y < count; ++y) {
            if (!system.admits(n, x, y)) continue;
            const std::uint64_t mx = x == kBasePoint ? 0 : std::uint64_t{1} << (x - 1);
            out.push_back({mx ^ (std::uint64_t{1} << (y - 1)), {x, y}});
        }
    }
    return out;
}

// Kuhn's augmenting paths: pairs on the left, indices on the right.
bool augment(std::size_t left, const std::vector<std::vector<std::size_t>>& adj,
             std::vector<std::size_t>& owner, std::vector<char>& visited) {
    constexpr auto kFree = static_cast<std::size_t>(-1);
    for (std::size_t slot : adj[left]) {
        if (visited[slot]) continue;
        visited[slot] = 1;
        if (owner[slot] == kFree || augment(owner[slot], adj, owner, visited)) {
            owner[slot] = left;
            return true;
        }
    }
    return false;
}

std::optional<WdWitness> assign_pairs(const std::vector<PointPair>& pairs, const WdSystem& system,
                                      const std::vector<std::size_t>& indices) {
    constexpr auto kFree = static_cast<std::size_t>(-1);
    std::vector<std::vector<std::size_t>> adj(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        for (std::size_t s = 0; s < indices.size(); ++s) {
            if (system.admits(indices[s], pairs[p].first, pairs[p].second)) adj[p].push_back(s);
        }
    }
    std::vector<std::size_t> owner(indices.size(), kFree);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        std::vector<char> visited(indices.size(), 0);
        if (!augment(p, adj, owner, visited)) return std::nullopt;
    }
    WdWitness witness;
    for (std::size_t s = 0; s < indices.size(); ++s) {
        if (owner[s] != kFree) witness.entries.push_back({pairs[owner[s]], indices[s]});
    }
    return witness;
}

} // namespace

std::optional<WdWitness> certify_by_assignment(const GroupElement& g, const WdSystem& system,
                                               std::size_t n_max) {
    if (g.is_zero()) return WdWitness{};
    const auto& seq = system.sequence();
    const std::size_t len = seq.explicit_length();
    const std::size_t pairs_needed = reduced_pair_count(g.size());

    // Indices beyond L are interchangeable for repeat-last and zero tails,
    // and monotone in the ratio for scale tails, so a window suffices.
    std::set<std::size_t> candidate;
    const std::size_t head = std::min(n_max, len + pairs_needed);
    for (std::size_t n = 1; n <= head; ++n) candidate.insert(n);
    if (seq.tail().kind == TailRule::Kind::scale && seq.tail().ratio < 1.0) {
        for (std::size_t k = 0; k < pairs_needed && k < n_max; ++k) candidate.insert(n_max - k);
    }
    const std::vector<std::size_t> indices(candidate.begin(), candidate.end());

    std::set<std::vector<PointPair>> tried;
    for (std::size_t n = 1; n <= std::min(n_max, len); ++n) {
        const auto& metric = seq.metric(n);
        if (g.max_index() >= metric.size()) throw IndexError("element outside the ground space");
        auto matching = graev_norm(g, metric, std::max(g.size(), matching_limit())).witness.pairs;
        if (!tried.insert(matching).second) continue;
        if (auto w = assign_pairs(matching, system, indices)) return w;
    }
    return std::nullopt;
}

WdMembership wd_membership(const GroupElement& g, const WdSystem& system, const GroundSpace& space,
                           std::size_t n_max, const WdSearchLimits& limits) {
    if (n_max == 0) throw PreconditionError("n_max must be at least 1");
    if (space.size() != system.points()) {
        throw PreconditionError("pseudometric sequence and ground space differ in size");
    }
    if (!g.is_zero()) space.check_index(g.max_index());

    WdMembership out;
    out.n_max = n_max;
    if (g.is_zero()) {
        out.verdict = WdVerdict::certified;
        out.witness = WdWitness{};
        return out;
    }

    const std::size_t points = space.size();
    const auto& seq = system.sequence();
    const std::size_t len = seq.explicit_length();
    const bool eventually_constant = seq.tail().kind != TailRule::Kind::scale ||
                                     seq.tail().ratio == 1.0;
    const double states = std::ldexp(1.0, static_cast<int>(points) - 1);
    const double levels = eventually_constant
                              ? std::min(static_cast<double>(n_max), static_cast<double>(len) + states + 1.0)
                              : static_cast<double>(n_max);
    const double work = states * static_cast<double>(points * (points - 1) / 2 + 1) * levels;

    if (points > limits.max_points || work > limits.max_work) {
        if (auto w = certify_by_assignment(g, system, n_max)) {
            out.verdict = WdVerdict::certified;
            out.witness = std::move(w);
        }
        return out;
    }

    const std::size_t state_count = std::size_t{1} << (points - 1);
    const std::uint64_t target = g.to_mask();

    // reach[k][h]: h in W_1 + ... + W_k.
    std::vector<std::vector<char>> reach;
    reach.emplace_back(state_count, 0);
    reach[0][0] = 1;
    std::vector<std::vector<Generator>> level_generators{{}};
    std::size_t found_at = 0;
    for (std::size_t k = 1; k <= n_max; ++k) {
        auto gens = generators(system, k);
        std::vector<char> next = reach.back();
        const auto& prev = reach.back();
        for (std::size_t h = 0; h < state_count; ++h) {
            if (!prev[h]) continue;
            for (const auto& gen : gens) next[h ^ gen.mask] = 1;
        }
        const bool unchanged = next == prev;
        reach.push_back(std::move(next));
        level_generators.push_back(std::move(gens));
        if (reach.back()[target]) {
            found_at = k;
            break;
        }
        if (unchanged && eventually_constant && k > len) break;
    }

    if (found_at == 0) {
        out.verdict = WdVerdict::refuted;
        return out;
    }

    WdWitness witness;
    std::uint64_t t = target;
    for (std::size_t k = found_at; k >= 1; --k) {
        if (reach[k - 1][t]) continue;
        for (const auto& gen : level_generators[k]) {
            if (reach[k - 1][t ^ gen.mask]) {
                witness.entries.push_back({gen.pair, k});
                t ^= gen.mask;
                break;
            }
        }
    }
    std::reverse(witness.entries.begin(), witness.entries.end());
    out.verdict = WdVerdict::certified;
    out.witness = std::move(witness);
    return out;
}

BallWitness wd_witness_from_ball(const GroupElement& g, const WdSystem& system,
                                 const GroundSpace& combined) {
    if (combined.size() != system.points()) {
        throw PreconditionError("combined pseudometric and sequence differ in size");
    }
    const NormResult norm = graev_norm(g, combined);
    if (!(norm.value < 0.5)) {
        throw PreconditionError("element is not in the ball N_rho < 1/2 (norm " +
                                std::to_string(norm.value) + ")");
    }

    BallWitness out;
    out.pairs.reserve(norm.witness.pairs.size());
    double dyadic = 0.0;
    for (const auto& pair : norm.witness.pairs) {
        BucketedPair bp;
        bp.pair = pair;
        bp.weight = combined(pair.first, pair.second);
        if (bp.weight > 0.0) {
            int exponent = 0;
            std::frexp(bp.weight, &exponent); // weight in [2^(e-1), 2^e)
            bp.k = -exponent;
            dyadic += std::ldexp(1.0, -bp.k);
        }
        out.pairs.push_back(bp);
    }
    for (auto& bp : out.pairs) {
        if (bp.weight > 0.0) continue;
        int k = 1;
        while (!(dyadic + std::ldexp(1.0, -k) < 1.0)) ++k;
        bp.k = k;
        dyadic += std::ldexp(1.0, -k);
    }
    out.dyadic_sum = dyadic;
    if (!(dyadic < 1.0)) throw std::logic_error("dyadic sum reached 1");

    std::map<int, std::size_t> used;
    for (auto& bp : out.pairs) {
        if (bp.k < 1) throw std::logic_error("pair weight not below 1/2");
        if (bp.k > 60) throw CapacityError("pair weight too small for a 64-bit witness index");
        const std::size_t r = ++used[bp.k];
        if (r >= (std::size_t{1} << bp.k)) throw std::logic_error("bucket capacity exceeded");
        bp.index = (std::size_t{1} << bp.k) + r;
        out.witness.entries.push_back({bp.pair, bp.index});
    }

    if (auto check = check_witness(out.witness, g, system); !check.ok) {
        throw PreconditionError("combined pseudometric does not control the sequence: " +
                                check.reason);
    }
    return out;
}

bool ball_membership(const GroupElement& g, const GroundSpace& space, double radius) {
    if (!(radius > 0.0)) throw PreconditionError("ball radius must be positive");
    return graev_norm(g, space).value < radius;
}

} // namespace graev
