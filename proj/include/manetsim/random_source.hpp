#pragma once

#include <array>
#include <cstdint>

namespace manetsim {

/// Seeded pseudo-random source shared by every module of one run.
///
/// The recurrence is pinned so that a seed produces the same draw sequence on
/// every platform and standard library:
///
///   * state: four 64-bit words, initialised by running SplitMix64 from `seed`
///     (s[i] = splitmix64_next(), i = 0..3);
///   * step:  xoshiro256** (Blackman and Vigna, 2018);
///   * uniform_int(lo, hi): one step x, result lo + floor(x * (hi - lo + 1) / 2^64);
///   * uniform_real(lo, hi): one step x, result lo + (x >> 11) * 2^-53 * (hi - lo).
///
/// Every draw consumes exactly one generator step, so event traces stay
/// reproducible regardless of the values drawn.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    /// Raw 64-bit output; advances the stream by one step.
    std::uint64_t next() noexcept;

    /// Integer in [lo, hi] inclusive. Throws std::logic_error when lo > hi.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// Real in [lo, hi). Throws std::logic_error when lo > hi.
    double uniform_real(double lo, double hi);

    std::uint64_t draws() const noexcept { return draws_; }

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_{};
    std::uint64_t draws_ = 0;
};

}  // namespace manetsim
