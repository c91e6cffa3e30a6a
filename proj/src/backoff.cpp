#include "manetsim/backoff.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace manetsim {

std::string_view to_string(BackoffPolicy policy)
{
    switch (policy) {
    case BackoffPolicy::BEB: return "beb";
    case BackoffPolicy::ModifiedBEB: return "mbeb";
    case BackoffPolicy::MILD: return "mild";
    case BackoffPolicy::EIED: return "eied";
    case BackoffPolicy::DIDD: return "didd";
    case BackoffPolicy::Log: return "log";
    }
    return "?";
}

std::optional<BackoffPolicy> parse_policy(std::string_view name)
{
    for (auto p : kAllPolicies) {
        if (to_string(p) == name) {
            return p;
        }
    }
    return std::nullopt;
}

std::string_view BackoffParams::violation() const
{
    if (cw_min < 1) return "cw_min must be >= 1";
    if (cw_max < cw_min) return "cw_max must be >= cw_min";
    if (!(r_increase > 1.0)) return "r_increase must be > 1";
    if (!(r_decrease > 1.0)) return "r_decrease must be > 1";
    if (!(b > 1.0 && b < 2.0)) return "b must lie in (1, 2)";
    if (mild_step < 1) return "mild_step must be >= 1";
    return {};
}

namespace {

int round_half_up(double x)
{
    return static_cast<int>(std::floor(x + 0.5));
}

int clamp_cw(double cw, const BackoffParams& p)
{
    // clamp in floating point first so huge products cannot overflow int
    const double bounded = std::clamp(cw, static_cast<double>(p.cw_min), static_cast<double>(p.cw_max));
    return std::clamp(round_half_up(bounded), p.cw_min, p.cw_max);
}

// ceil(log2(cw)) for cw >= 1; at least 1 so the window still grows from cw = 1
int log_increment(int cw)
{
    const int inc = static_cast<int>(std::bit_width(static_cast<unsigned>(cw - 1)));
    return std::max(inc, 1);
}

}  // namespace

ContentionState on_collision(ContentionState s)
{
    const auto& p = s.params;
    const double cw = s.cw;
    switch (s.policy) {
    case BackoffPolicy::BEB:
    case BackoffPolicy::DIDD:
        s.cw = clamp_cw(2.0 * cw, p);
        break;
    case BackoffPolicy::ModifiedBEB:
        s.cw = clamp_cw(p.b * cw, p);
        break;
    case BackoffPolicy::MILD:
        s.cw = clamp_cw(1.5 * cw, p);
        break;
    case BackoffPolicy::EIED:
        s.cw = clamp_cw(p.r_increase * cw, p);
        break;
    case BackoffPolicy::Log:
        s.cw = clamp_cw(cw + log_increment(s.cw), p);
        break;
    }
    return s;
}

ContentionState on_success(ContentionState s)
{
    const auto& p = s.params;
    switch (s.policy) {
    case BackoffPolicy::BEB:
    case BackoffPolicy::ModifiedBEB:
    case BackoffPolicy::Log:
        s.cw = p.cw_min;
        break;
    case BackoffPolicy::MILD:
        s.cw = clamp_cw(static_cast<double>(s.cw - p.mild_step), p);
        break;
    case BackoffPolicy::EIED:
        s.cw = clamp_cw(s.cw / p.r_decrease, p);
        break;
    case BackoffPolicy::DIDD:
        s.cw = clamp_cw(s.cw / 2.0, p);
        break;
    }
    return s;
}

int draw_backoff(const ContentionState& state, RandomSource& rng)
{
    return static_cast<int>(rng.uniform_int(0, state.cw - 1));
}

}  // namespace manetsim
