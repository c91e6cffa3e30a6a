#pragma once

#include "manetsim/backoff.hpp"
#include "manetsim/errors.hpp"
#include "manetsim/mac_dcf.hpp"
#include "manetsim/mobility.hpp"
#include "manetsim/phy_channel.hpp"
#include "manetsim/routing_aodv.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace manetsim {

enum class SweepAxis { Speed, Range };

std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_axis(std::string_view name);

/// Complete configuration of one run. Defaults:
/// 50 nodes in 1000 x 1000 m, 1800 s, CBR 512 B at 4 pkt/s over [1000 s, 1800 s),
/// 25 disjoint source/destination pairs, CW 32..1024, 2 Mbps.
struct Scenario {
    std::size_t node_count = 50;
    Vec2 terrain{1000.0, 1000.0};
    SimTime sim_end{1'800'000'000};
    TrafficPattern traffic{};
    std::size_t sdp_count = 25;
    bool disjoint_sdps = true;

    BackoffPolicy algorithm = BackoffPolicy::BEB;
    BackoffParams backoff{};
    double avg_speed = 10.0;  // m/s
    RadioConfig radio{};
    MacTiming mac{};
    AodvConfig aodv{};

    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

    /// Throws ConfigError naming the first invariant that does not hold.
    void validate() const;
};

/// Sweep over one axis for a set of algorithms.
struct SweepSpec {
    SweepAxis axis = SweepAxis::Speed;
    std::vector<double> values{5, 10, 15, 20, 25, 30};
    std::vector<BackoffPolicy> algorithms{kAllPolicies.begin(), kAllPolicies.end()};

    static std::vector<double> default_values(SweepAxis axis);
    void validate() const;
};

/// Scenario plus the sweep it was configured for.
struct ExperimentConfig {
    Scenario scenario;
    SweepSpec sweep;
};

/// Ordered key/value pairs as read from a `key = value` file.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Parses `key = value` lines; `#` starts a comment. Throws ConfigError on
/// malformed lines.
ConfigEntries parse_config_text(std::string_view text);

/// Applies entries on top of `base`. Unknown keys and bad values throw ConfigError.
/// When `axis` changes without `values`, the sweep values reset to that axis' defaults.
void apply_config(ExperimentConfig& config, const ConfigEntries& entries);

/// Defaults, then the file at `path` (if non-empty), then `overrides`; validated.
ExperimentConfig load_experiment(const std::filesystem::path& path, const ConfigEntries& overrides = {});

/// Every recognised configuration key, for help text and tests.
std::vector<std::string> config_keys();

/// The scenario for one grid point of a sweep.
Scenario scenario_at(const Scenario& base, SweepAxis axis, double value, BackoffPolicy algorithm);

}  // namespace manetsim
