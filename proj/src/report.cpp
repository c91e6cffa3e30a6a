#include "manetsim/report.hpp"

#include "manetsim/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace manetsim {

namespace {

std::string fixed6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string opt_fixed6(const std::optional<double>& v)
{
    return v ? fixed6(*v) : std::string{};
}

void append_row(std::string& out, std::initializer_list<std::string> fields)
{
    bool first = true;
    for (const auto& f : fields) {
        if (!first) {
            out += ',';
        }
        out += f;
        first = false;
    }
    out += '\n';
}

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) {
            return out;
        }
        start = comma + 1;
    }
}

template <typename T>
T parse_number(std::string_view field, int line_no)
{
    T v{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ConfigError("csv line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
    }
    return v;
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << content;
}

}  // namespace

std::string format_raw_csv(std::span<const RunRow> runs)
{
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : runs) {
        const auto& m = r.result.metrics;
        const auto generated = m.total_generated();
        const auto delivered = m.total_received();
        const std::string run_pdr =
            generated > 0 ? fixed6(static_cast<double>(delivered) / static_cast<double>(generated)) : std::string{};
        append_row(out, {std::string(to_string(r.algorithm)), std::string(to_string(r.axis)), fixed6(r.axis_value),
                         std::to_string(r.sdps), std::to_string(r.seed), run_pdr,
                         opt_fixed6(m.mean_destination_delay_us()), std::to_string(generated),
                         std::to_string(delivered), std::to_string(m.dropped_queue), std::to_string(m.dropped_mac),
                         std::to_string(m.dropped_no_route)});
    }
    return out;
}

std::string format_aggregate_csv(std::span<const ReportRow> rows)
{
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
        append_row(out, {std::string(to_string(r.algorithm)), std::string(to_string(r.axis)), fixed6(r.axis_value),
                         std::to_string(r.sdps), "avg", fixed6(r.pdr), opt_fixed6(r.avg_delay_us),
                         std::to_string(r.generated), std::to_string(r.delivered), std::to_string(r.dropped_queue),
                         std::to_string(r.dropped_mac), std::to_string(r.dropped_no_route)});
    }
    return out;
}

std::string format_routing_csv(std::span<const RunRow> runs)
{
    std::string out(kRoutingCsvHeader);
    out += '\n';
    for (const auto& r : runs) {
        const auto& c = r.result.routing;
        append_row(out, {std::string(to_string(r.algorithm)), std::string(to_string(r.axis)), fixed6(r.axis_value),
                         std::to_string(r.sdps), std::to_string(r.seed), std::to_string(c.rreq_originated),
                         std::to_string(c.rreq_forwarded), std::to_string(c.rrep_sent),
                         std::to_string(c.discoveries_started), std::to_string(c.discoveries_failed),
                         std::to_string(c.routes_invalidated), std::to_string(r.result.mac.attempts),
                         std::to_string(r.result.mac.ack_timeouts)});
    }
    return out;
}

std::vector<ReportRow> read_report_csv(std::string_view text)
{
    struct Group {
        ReportRow row;
        double delay_sum = 0.0;
        std::size_t delay_runs = 0;
    };
    std::vector<ReportRow> averaged;
    std::vector<Group> groups;
    std::map<std::string, std::size_t> group_index;

    int line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (!header_seen) {
            if (line != kCsvHeader) {
                throw ConfigError("csv header does not match the expected schema");
            }
            header_seen = true;
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 12) {
            throw ConfigError("csv line " + std::to_string(line_no) + ": expected 12 fields");
        }
        ReportRow row;
        const auto algorithm = parse_policy(f[0]);
        const auto axis = parse_axis(f[1]);
        if (!algorithm || !axis) {
            throw ConfigError("csv line " + std::to_string(line_no) + ": unknown algorithm or axis");
        }
        row.algorithm = *algorithm;
        row.axis = *axis;
        row.axis_value = parse_number<double>(f[2], line_no);
        row.sdps = parse_number<std::size_t>(f[3], line_no);
        if (!f[6].empty()) {
            row.avg_delay_us = parse_number<double>(f[6], line_no);
        }
        row.generated = parse_number<std::uint64_t>(f[7], line_no);
        row.delivered = parse_number<std::uint64_t>(f[8], line_no);
        row.dropped_queue = parse_number<std::uint64_t>(f[9], line_no);
        row.dropped_mac = parse_number<std::uint64_t>(f[10], line_no);
        row.dropped_no_route = parse_number<std::uint64_t>(f[11], line_no);

        if (f[4] == "avg") {
            row.pdr = f[5].empty() ? 0.0 : parse_number<double>(f[5], line_no);
            row.runs = 1;
            averaged.push_back(row);
            continue;
        }
        std::string key(f[0]);
        key.append(",").append(f[1]).append(",").append(f[2]).append(",").append(f[3]);
        auto [it, fresh] = group_index.try_emplace(key, groups.size());
        if (fresh) {
            groups.push_back(Group{row, 0.0, 0});
            groups.back().row.runs = 0;
            groups.back().row.avg_delay_us.reset();
            groups.back().row.generated = groups.back().row.delivered = 0;
            groups.back().row.dropped_queue = groups.back().row.dropped_mac = groups.back().row.dropped_no_route = 0;
        }
        auto& g = groups[it->second];
        ++g.row.runs;
        g.row.generated += row.generated;
        g.row.delivered += row.delivered;
        g.row.dropped_queue += row.dropped_queue;
        g.row.dropped_mac += row.dropped_mac;
        g.row.dropped_no_route += row.dropped_no_route;
        if (row.avg_delay_us) {
            g.delay_sum += *row.avg_delay_us;
            ++g.delay_runs;
        }
    }
    if (!header_seen) {
        throw ConfigError("csv input is empty");
    }
    if (!averaged.empty()) {
        return averaged;
    }
    std::vector<ReportRow> out;
    for (auto& g : groups) {
        g.row.pdr = g.row.generated > 0
                        ? static_cast<double>(g.row.delivered) / static_cast<double>(g.row.generated)
                        : 0.0;
        if (g.delay_runs > 0) {
            g.row.avg_delay_us = g.delay_sum / static_cast<double>(g.delay_runs);
        }
        out.push_back(g.row);
    }
    return out;
}

std::string_view to_string(Metric m)
{
    return m == Metric::Pdr ? "pdr" : "avg_delay";
}

bool SummaryEntry::is_best(BackoffPolicy p) const
{
    for (std::size_t i = 0; i < algorithms.size(); ++i) {
        if (algorithms[i] == p) return best[i];
    }
    return false;
}

bool SummaryEntry::is_worst(BackoffPolicy p) const
{
    for (std::size_t i = 0; i < algorithms.size(); ++i) {
        if (algorithms[i] == p) return worst[i];
    }
    return false;
}

std::vector<SummaryEntry> summarize_best_worst(std::span<const ReportRow> rows, double tie_tolerance)
{
    // grid points in first-appearance order
    std::vector<std::tuple<SweepAxis, double, std::size_t>> points;
    for (const auto& r : rows) {
        const auto key = std::make_tuple(r.axis, r.axis_value, r.sdps);
        if (std::find(points.begin(), points.end(), key) == points.end()) {
            points.push_back(key);
        }
    }

    std::vector<SummaryEntry> out;
    for (Metric metric : {Metric::Pdr, Metric::AvgDelay}) {
        for (const auto& [axis, value, sdps] : points) {
            SummaryEntry e{metric, axis, value, sdps, {}, {}, {}};
            std::vector<double> scores;
            for (const auto& r : rows) {
                if (r.axis != axis || r.axis_value != value || r.sdps != sdps) {
                    continue;
                }
                if (metric == Metric::AvgDelay && !r.avg_delay_us) {
                    continue;
                }
                e.algorithms.push_back(r.algorithm);
                scores.push_back(metric == Metric::Pdr ? r.pdr : *r.avg_delay_us);
            }
            if (e.algorithms.empty()) {
                continue;
            }
            const bool higher_better = metric == Metric::Pdr;
            const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
            const double best = higher_better ? *hi : *lo;
            const double worst = higher_better ? *lo : *hi;
            for (double s : scores) {
                e.best.push_back(std::abs(s - best) <= tie_tolerance * std::abs(best));
                e.worst.push_back(std::abs(s - worst) <= tie_tolerance * std::abs(worst));
            }
            out.push_back(std::move(e));
        }
    }
    return out;
}

std::string format_summary(std::span<const SummaryEntry> entries)
{
    std::vector<BackoffPolicy> columns;
    for (auto p : kAllPolicies) {
        for (const auto& e : entries) {
            if (std::find(e.algorithms.begin(), e.algorithms.end(), p) != e.algorithms.end()) {
                columns.push_back(p);
                break;
            }
        }
    }

    char buf[128];
    std::string out = "# B = best, W = worst; values within 1% of the best/worst share the mark\n";
    std::snprintf(buf, sizeof buf, "%-10s %-6s %12s %5s", "metric", "axis", "axis_value", "sdps");
    out += buf;
    for (auto p : columns) {
        std::snprintf(buf, sizeof buf, " %5s", std::string(to_string(p)).c_str());
        out += buf;
    }
    out += '\n';
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof buf, "%-10s %-6s %12.6f %5zu", std::string(to_string(e.metric)).c_str(),
                      std::string(to_string(e.axis)).c_str(), e.axis_value, e.sdps);
        out += buf;
        for (auto p : columns) {
            std::string cell;
            if (std::find(e.algorithms.begin(), e.algorithms.end(), p) == e.algorithms.end()) {
                cell = "-";
            } else {
                cell = std::string(e.is_best(p) ? "B" : "") + (e.is_worst(p) ? "W" : "");
                if (cell.empty()) {
                    cell = ".";
                }
            }
            std::snprintf(buf, sizeof buf, " %5s", cell.c_str());
            out += buf;
        }
        out += '\n';
    }
    return out;
}

void write_outputs(const std::filesystem::path& dir, const SweepResult& result)
{
    std::filesystem::create_directories(dir);
    write_file(dir / "raw.csv", format_raw_csv(result.runs));
    write_file(dir / "aggregate.csv", format_aggregate_csv(result.aggregate));
    write_file(dir / "routing.csv", format_routing_csv(result.runs));
    const auto summary = summarize_best_worst(result.aggregate);
    write_file(dir / "summary.txt", format_summary(summary));
}

}  // namespace manetsim
