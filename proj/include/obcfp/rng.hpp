#pragma once

// Counter-derived random streams.
//
// Every random draw in a simulation comes from a stream keyed by
// (seed, purpose, a, b), typically (seed, purpose, step, agent id). Streams
// are independent of evaluation order, so any phase that fans out across
// agents produces the same numbers whether it runs serially or in parallel.

#include <cstdint>
#include <limits>

namespace obcfp {

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

enum class Stream : std::uint64_t {
    Init = 1,
    Network = 2,
    Expectation = 3,
    Drive = 4,
    Cascade = 5,
    Order = 6,
};

/// SplitMix64 engine. Satisfies UniformRandomBitGenerator.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit constexpr Rng(std::uint64_t state = 0) noexcept : state_(state) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    constexpr result_type operator()() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    /// Uniform on [0, 1).
    double uniform01() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Uniform on the open interval (0, 1).
    double uniform_open01() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform on (lo, hi); lo < hi.
    double uniform_open(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform_open01();
    }

    /// Uniform integer on [0, n), n > 0. Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n) noexcept {
        __extension__ using u128 = unsigned __int128;
        u128 m = static_cast<u128>((*this)()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t t = (0 - n) % n;
            while (low < t) {
                m = static_cast<u128>((*this)()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::uint64_t state_;
};

/// Independent stream for (seed, purpose, a, b).
constexpr Rng substream(std::uint64_t seed, Stream purpose, std::uint64_t a = 0,
                        std::uint64_t b = 0) noexcept {
    std::uint64_t h = mix64(seed + 0x632BE59BD9B4E019ULL);
    h = mix64(h ^ static_cast<std::uint64_t>(purpose));
    h = mix64(h ^ (a + 0x9E3779B97F4A7C15ULL));
    h = mix64(h ^ (b + 0xD1B54A32D192ED03ULL));
    return Rng{h};
}

}  // namespace obcfp
