#include "manetsim/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace manetsim {

std::string_view to_string(SweepAxis axis)
{
    return axis == SweepAxis::Speed ? "speed" : "range";
}

std::optional<SweepAxis> parse_axis(std::string_view name)
{
    if (name == "speed") return SweepAxis::Speed;
    if (name == "range") return SweepAxis::Range;
    return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected)
{
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) + ": expected " +
                      std::string(expected));
}

std::int64_t parse_int(std::string_view key, std::string_view v)
{
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        bad_value(key, v, "an integer");
    }
    return out;
}

std::int64_t parse_nonneg(std::string_view key, std::string_view v)
{
    const auto x = parse_int(key, v);
    if (x < 0) {
        bad_value(key, v, "a non-negative integer");
    }
    return x;
}

double parse_real(std::string_view key, std::string_view v)
{
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        bad_value(key, v, "a finite number");
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view v)
{
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_value(key, v, "true or false");
}

std::vector<std::string_view> split_list(std::string_view v)
{
    std::vector<std::string_view> out;
    while (!v.empty()) {
        const auto comma = v.find(',');
        out.push_back(trim(v.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        v.remove_prefix(comma + 1);
    }
    return out;
}

BackoffPolicy parse_policy_value(std::string_view key, std::string_view v)
{
    if (auto p = parse_policy(v)) {
        return *p;
    }
    bad_value(key, v, "one of beb, mbeb, mild, eied, didd, log");
}

SimTime parse_seconds(std::string_view key, std::string_view v)
{
    const double s = parse_real(key, v);
    if (s < 0.0) {
        bad_value(key, v, "a non-negative duration in seconds");
    }
    return seconds_to_time(s);
}

Duration parse_micros(std::string_view key, std::string_view v)
{
    return Duration{parse_nonneg(key, v)};
}

using Setter = std::function<void(ExperimentConfig&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters()
{
    static const std::map<std::string, Setter, std::less<>> table = {
        {"node_count", [](auto& c, auto k, auto v) { c.scenario.node_count = static_cast<std::size_t>(parse_nonneg(k, v)); }},
        {"terrain_x", [](auto& c, auto k, auto v) { c.scenario.terrain.x = parse_real(k, v); }},
        {"terrain_y", [](auto& c, auto k, auto v) { c.scenario.terrain.y = parse_real(k, v); }},
        {"sim_end_s", [](auto& c, auto k, auto v) { c.scenario.sim_end = parse_seconds(k, v); }},
        {"traffic_start_s", [](auto& c, auto k, auto v) { c.scenario.traffic.start = parse_seconds(k, v); }},
        {"traffic_end_s", [](auto& c, auto k, auto v) { c.scenario.traffic.end = parse_seconds(k, v); }},
        {"packet_bytes", [](auto& c, auto k, auto v) { c.scenario.traffic.packet_bytes = static_cast<int>(parse_int(k, v)); }},
        {"cbr_interval_us", [](auto& c, auto k, auto v) { c.scenario.traffic.interval = parse_micros(k, v); }},
        {"sdp_count", [](auto& c, auto k, auto v) { c.scenario.sdp_count = static_cast<std::size_t>(parse_nonneg(k, v)); }},
        {"disjoint_sdps", [](auto& c, auto k, auto v) { c.scenario.disjoint_sdps = parse_bool(k, v); }},
        {"algorithm", [](auto& c, auto k, auto v) { c.scenario.algorithm = parse_policy_value(k, v); }},
        {"cw_min", [](auto& c, auto k, auto v) { c.scenario.backoff.cw_min = static_cast<int>(parse_int(k, v)); }},
        {"cw_max", [](auto& c, auto k, auto v) { c.scenario.backoff.cw_max = static_cast<int>(parse_int(k, v)); }},
        {"r_increase", [](auto& c, auto k, auto v) { c.scenario.backoff.r_increase = parse_real(k, v); }},
        {"r_decrease", [](auto& c, auto k, auto v) { c.scenario.backoff.r_decrease = parse_real(k, v); }},
        {"mbeb_base", [](auto& c, auto k, auto v) { c.scenario.backoff.b = parse_real(k, v); }},
        {"mild_step", [](auto& c, auto k, auto v) { c.scenario.backoff.mild_step = static_cast<int>(parse_int(k, v)); }},
        {"avg_speed", [](auto& c, auto k, auto v) { c.scenario.avg_speed = parse_real(k, v); }},
        {"tx_range", [](auto& c, auto k, auto v) { c.scenario.radio.tx_range = parse_real(k, v); }},
        {"carrier_sense_multiplier", [](auto& c, auto k, auto v) { c.scenario.radio.carrier_sense_multiplier = parse_real(k, v); }},
        {"data_rate_bps", [](auto& c, auto k, auto v) { c.scenario.radio.data_rate_bps = parse_int(k, v); }},
        {"phy_overhead_us", [](auto& c, auto k, auto v) { c.scenario.radio.phy_overhead = parse_micros(k, v); }},
        {"slot_us", [](auto& c, auto k, auto v) { c.scenario.mac.slot = parse_micros(k, v); }},
        {"sifs_us", [](auto& c, auto k, auto v) { c.scenario.mac.sifs = parse_micros(k, v); }},
        {"difs_us", [](auto& c, auto k, auto v) { c.scenario.mac.difs = parse_micros(k, v); }},
        {"retry_limit", [](auto& c, auto k, auto v) { c.scenario.mac.retry_limit = static_cast<int>(parse_int(k, v)); }},
        {"queue_capacity", [](auto& c, auto k, auto v) { c.scenario.mac.queue_capacity = static_cast<std::size_t>(parse_nonneg(k, v)); }},
        {"mac_overhead_bytes", [](auto& c, auto k, auto v) { c.scenario.mac.mac_overhead_bytes = static_cast<int>(parse_int(k, v)); }},
        {"ack_bytes", [](auto& c, auto k, auto v) { c.scenario.mac.ack_bytes = static_cast<int>(parse_int(k, v)); }},
        {"rts_cts", [](auto&, auto k, auto v) {
             if (parse_bool(k, v)) {
                 throw ConfigError("rts_cts = true is not supported (basic access only)");
             }
         }},
        {"route_timeout_s", [](auto& c, auto k, auto v) { c.scenario.aodv.active_route_timeout = parse_seconds(k, v); }},
        {"rreq_retries", [](auto& c, auto k, auto v) { c.scenario.aodv.rreq_retries = static_cast<int>(parse_int(k, v)); }},
        {"rreq_retry_interval_s", [](auto& c, auto k, auto v) { c.scenario.aodv.rreq_retry_interval = parse_seconds(k, v); }},
        {"discovery_buffer", [](auto& c, auto k, auto v) { c.scenario.aodv.buffer_capacity = static_cast<std::size_t>(parse_nonneg(k, v)); }},
        {"rreq_bytes", [](auto& c, auto k, auto v) { c.scenario.aodv.rreq_bytes = static_cast<int>(parse_int(k, v)); }},
        {"rrep_bytes", [](auto& c, auto k, auto v) { c.scenario.aodv.rrep_bytes = static_cast<int>(parse_int(k, v)); }},
        {"ttl", [](auto& c, auto k, auto v) { c.scenario.aodv.ttl = static_cast<int>(parse_int(k, v)); }},
        {"seeds", [](auto& c, auto k, auto v) {
             c.scenario.seeds.clear();
             for (auto item : split_list(v)) {
                 c.scenario.seeds.push_back(static_cast<std::uint64_t>(parse_nonneg(k, item)));
             }
         }},
        {"axis", [](auto& c, auto k, auto v) {
             auto axis = parse_axis(v);
             if (!axis) {
                 bad_value(k, v, "speed or range");
             }
             c.sweep.axis = *axis;
         }},
        {"values", [](auto& c, auto k, auto v) {
             c.sweep.values.clear();
             for (auto item : split_list(v)) {
                 c.sweep.values.push_back(parse_real(k, item));
             }
         }},
        {"algorithms", [](auto& c, auto k, auto v) {
             c.sweep.algorithms.clear();
             for (auto item : split_list(v)) {
                 c.sweep.algorithms.push_back(parse_policy_value(k, item));
             }
         }},
    };
    return table;
}

}  // namespace

void Scenario::validate() const
{
    auto fail = [](std::string_view what) { throw ConfigError(std::string(what)); };
    if (node_count < 2) fail("node_count must be >= 2");
    if (!(terrain.x > 0.0 && terrain.y > 0.0)) fail("terrain_x and terrain_y must be > 0");
    if (sim_end.count() <= 0) fail("sim_end_s must be > 0");
    if (traffic.packet_bytes <= 0) fail("packet_bytes must be > 0");
    if (traffic.interval.count() <= 0) fail("cbr_interval_us must be > 0");
    if (traffic.start > traffic.end) fail("traffic_start_s must not exceed traffic_end_s");
    if (traffic.end > sim_end) fail("traffic_end_s must not exceed sim_end_s");
    if (!(avg_speed >= 1.0)) fail("avg_speed must be >= 1 m/s (speeds are drawn from [1, 2*avg_speed-1])");
    if (seeds.empty()) fail("seeds must list at least one seed");
    if (disjoint_sdps && 2 * sdp_count > node_count) {
        fail("sdp_count " + std::to_string(sdp_count) + " too large for disjoint endpoints over " +
             std::to_string(node_count) + " nodes");
    }
    if (!disjoint_sdps && sdp_count > node_count * (node_count - 1)) fail("sdp_count exceeds distinct pairs");
    for (std::string_view v : {backoff.violation(), radio.violation(), mac.violation(), aodv.violation()}) {
        if (!v.empty()) fail(v);
    }
}

std::vector<double> SweepSpec::default_values(SweepAxis axis)
{
    if (axis == SweepAxis::Speed) {
        return {5, 10, 15, 20, 25, 30};
    }
    return {50, 100, 150, 200, 250, 300};
}

void SweepSpec::validate() const
{
    if (values.empty()) throw ConfigError("sweep needs at least one axis value");
    if (algorithms.empty()) throw ConfigError("sweep needs at least one algorithm");
    for (double v : values) {
        if (!(v > 0.0)) throw ConfigError("axis values must be > 0");
    }
}

ConfigEntries parse_config_text(std::string_view text)
{
    ConfigEntries out;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        }
        out.emplace_back(std::string(key), std::string(value));
    }
    return out;
}

void apply_config(ExperimentConfig& config, const ConfigEntries& entries)
{
    const SweepAxis axis_before = config.sweep.axis;
    bool values_set = false;
    for (const auto& [key, value] : entries) {
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError("unknown configuration key '" + key + "'");
        }
        it->second(config, key, value);
        values_set = values_set || key == "values";
    }
    if (config.sweep.axis != axis_before && !values_set) {
        config.sweep.values = SweepSpec::default_values(config.sweep.axis);
    }
}

ExperimentConfig load_experiment(const std::filesystem::path& path, const ConfigEntries& overrides)
{
    ExperimentConfig config;
    if (!path.empty()) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw ConfigError("cannot read configuration file " + path.string());
        }
        std::ostringstream text;
        text << in.rdbuf();
        apply_config(config, parse_config_text(text.str()));
    }
    apply_config(config, overrides);
    config.scenario.validate();
    config.sweep.validate();
    return config;
}

std::vector<std::string> config_keys()
{
    std::vector<std::string> keys;
    for (const auto& [k, _] : setters()) {
        keys.push_back(k);
    }
    return keys;
}

Scenario scenario_at(const Scenario& base, SweepAxis axis, double value, BackoffPolicy algorithm)
{
    Scenario s = base;
    s.algorithm = algorithm;
    if (axis == SweepAxis::Speed) {
        s.avg_speed = value;
    } else {
        s.radio.tx_range = value;
    }
    return s;
}

}  // namespace manetsim
