#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace graev {

/// Counter-based generator: the n-th draw of stream s under seed k is
/// splitmix64(key(k, s) + (n + 1) * golden). Streams are independent of
/// draw order elsewhere, so randomized suites reproduce from one seed.
class CounterRng {
public:
    static constexpr std::string_view name = "splitmix64-counter";

    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix(seed ^ mix(stream + kGolden))) {}

    /// Derives a stream id from a label and a case number.
    static std::uint64_t stream_id(std::string_view label, std::uint64_t index) noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        return mix(h ^ mix(index));
    }

    std::uint64_t next() noexcept { return mix(key_ + (++counter_) * kGolden); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n); n must be positive.
    std::size_t below(std::size_t n) noexcept {
        __extension__ using Wide = unsigned __int128;
        const auto wide = static_cast<Wide>(next()) * n;
        return static_cast<std::size_t>(wide >> 64);
    }

    bool chance(double p) noexcept { return uniform() < p; }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace graev
