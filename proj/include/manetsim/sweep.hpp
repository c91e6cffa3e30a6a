#pragma once

#include "manetsim/backoff.hpp"
#include "manetsim/scenario.hpp"
#include "manetsim/simulation.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace manetsim {

/// One simulated (algorithm, axis value, seed) grid point.
struct RunRow {
    BackoffPolicy algorithm = BackoffPolicy::BEB;
    SweepAxis axis = SweepAxis::Speed;
    double axis_value = 0.0;
    std::size_t sdps = 0;
    std::uint64_t seed = 0;
    RunResult result;
};

/// Seed-aggregated metrics for one (algorithm, axis value).
struct ReportRow {
    BackoffPolicy algorithm = BackoffPolicy::BEB;
    SweepAxis axis = SweepAxis::Speed;
    double axis_value = 0.0;
    std::size_t sdps = 0;
    double pdr = 0.0;
    std::optional<double> avg_delay_us;
    std::size_t runs = 0;
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped_queue = 0;
    std::uint64_t dropped_mac = 0;
    std::uint64_t dropped_no_route = 0;
};

struct SweepResult {
    std::vector<RunRow> runs;         // algorithm-major, then axis value, then seed
    std::vector<ReportRow> aggregate; // algorithm-major, then axis value
};

enum class Execution { Serial, Parallel };

struct GridPoint {
    BackoffPolicy algorithm;
    double axis_value;
    std::uint64_t seed;
};

/// Grid in output order: for each algorithm, for each axis value, for each seed.
std::vector<GridPoint> sweep_grid(const SweepSpec& spec, const Scenario& base);

/// Runs every grid point and aggregates per (algorithm, axis value).
///
/// Serial is the reference executor. Parallel distributes grid points over
/// OpenMP threads (`threads` <= 0 means the OpenMP default); runs share no
/// mutable state, and rows are stored by grid index, so both executors return
/// identical results. The first run that throws aborts the sweep by rethrowing.
SweepResult run_sweep(const SweepSpec& spec, const Scenario& base, Execution exec = Execution::Parallel,
                      int threads = 0);

/// Aggregates the runs of one grid point via the metrics module.
ReportRow aggregate_runs(std::span<const RunRow> runs);

}  // namespace manetsim
