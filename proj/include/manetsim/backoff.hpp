#pragma once

#include "manetsim/random_source.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace manetsim {

enum class BackoffPolicy {
    BEB,
    ModifiedBEB,
    MILD,
    EIED,
    DIDD,
    Log,
};

inline constexpr std::array<BackoffPolicy, 6> kAllPolicies{
    BackoffPolicy::BEB, BackoffPolicy::ModifiedBEB, BackoffPolicy::MILD,
    BackoffPolicy::EIED, BackoffPolicy::DIDD, BackoffPolicy::Log,
};

/// Short names used in scenario files, the CLI and CSV output:
/// beb, mbeb, mild, eied, didd, log.
std::string_view to_string(BackoffPolicy policy);
std::optional<BackoffPolicy> parse_policy(std::string_view name);

/// Contention-window bounds and per-policy factors. Windows are in slots.
struct BackoffParams {
    int cw_min = 32;
    int cw_max = 1024;
    double r_increase = 2.0;                  // EIED growth factor
    double r_decrease = 1.0905077326652577;   // EIED shrink factor, 2^(1/8)
    double b = 1.5;                           // Modified BEB growth base
    int mild_step = 1;                        // MILD linear decrement

    /// Empty string when valid, otherwise the first violated constraint.
    std::string_view violation() const;
};

struct ContentionState {
    BackoffPolicy policy = BackoffPolicy::BEB;
    int cw = 32;
    BackoffParams params{};

    static ContentionState initial(BackoffPolicy policy, const BackoffParams& params)
    {
        return ContentionState{policy, params.cw_min, params};
    }
};

// Updates round half up to the nearest integer, then clamp to [cw_min, cw_max].

/// Window growth after a failed transmission.
ContentionState on_collision(ContentionState state);

/// Window shrink (or reset) after an acknowledged transmission.
ContentionState on_success(ContentionState state);

/// Backoff slot count, uniform in [0, cw - 1]. Consumes one draw.
int draw_backoff(const ContentionState& state, RandomSource& rng);

}  // namespace manetsim
