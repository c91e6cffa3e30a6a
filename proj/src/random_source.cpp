#include "manetsim/random_source.hpp"

#include <stdexcept>

namespace manetsim {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) noexcept
{
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
{
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed)
{
    std::uint64_t sm = seed;
    for (auto& word : state_) {
        word = splitmix64(sm);
    }
}

std::uint64_t RandomSource::next() noexcept
{
    ++draws_;
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

std::int64_t RandomSource::uniform_int(std::int64_t lo, std::int64_t hi)
{
    if (lo > hi) {
        throw std::logic_error("uniform_int: lo > hi");
    }
    __extension__ using u128 = unsigned __int128;
    const auto span = static_cast<u128>(static_cast<std::uint64_t>(hi - lo)) + 1;
    const auto scaled = (static_cast<u128>(next()) * span) >> 64;
    return lo + static_cast<std::int64_t>(scaled);
}

double RandomSource::uniform_real(double lo, double hi)
{
    if (lo > hi) {
        throw std::logic_error("uniform_real: lo > hi");
    }
    const double unit = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + unit * (hi - lo);
}

}  // namespace manetsim
