#pragma once

#include "manetsim/sweep.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace manetsim {

inline constexpr std::string_view kCsvHeader =
    "algorithm,axis,axis_value,sdps,seed,pdr,avg_delay_us,generated,delivered,dropped_queue,dropped_mac,"
    "dropped_no_route";

inline constexpr std::string_view kRoutingCsvHeader =
    "algorithm,axis,axis_value,sdps,seed,rreq_originated,rreq_forwarded,rrep_sent,discoveries_started,"
    "discoveries_failed,routes_invalidated,mac_attempts,mac_ack_timeouts";

/// Per-run rows. Reals use fixed notation with 6 decimals; an undefined
/// delay is an empty field. LF line endings.
std::string format_raw_csv(std::span<const RunRow> runs);

/// Seed-aggregated rows, `seed` column = avg.
std::string format_aggregate_csv(std::span<const ReportRow> rows);

/// Route-discovery and MAC counters per run.
std::string format_routing_csv(std::span<const RunRow> runs);

/// Reads report rows from raw or aggregate CSV text. `avg` rows are taken
/// as-is; if there are none, per-seed rows are aggregated (PDR as the ratio of
/// summed counts, delay as the mean of per-run delays). Throws ConfigError on
/// a malformed file.
std::vector<ReportRow> read_report_csv(std::string_view text);

enum class Metric { Pdr, AvgDelay };
std::string_view to_string(Metric m);

/// Best/worst marks for one metric at one grid point.
struct SummaryEntry {
    Metric metric = Metric::Pdr;
    SweepAxis axis = SweepAxis::Speed;
    double axis_value = 0.0;
    std::size_t sdps = 0;
    std::vector<BackoffPolicy> algorithms;
    std::vector<bool> best;
    std::vector<bool> worst;

    bool is_best(BackoffPolicy p) const;
    bool is_worst(BackoffPolicy p) const;
};

/// Marks the best and worst algorithm per metric and grid point. Higher PDR
/// and lower delay are better. Values within `tie_tolerance` (relative) of the
/// best or worst value share the mark. Rows with no delay are left out of the
/// delay ranking.
std::vector<SummaryEntry> summarize_best_worst(std::span<const ReportRow> rows, double tie_tolerance = 0.01);

/// Plain-text B/W table, one line per metric and grid point.
std::string format_summary(std::span<const SummaryEntry> entries);

/// Writes raw.csv, aggregate.csv, routing.csv and summary.txt into `dir`.
void write_outputs(const std::filesystem::path& dir, const SweepResult& result);

}  // namespace manetsim
