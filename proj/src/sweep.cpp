#include "manetsim/sweep.hpp"

#include <exception>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace manetsim {

std::vector<GridPoint> sweep_grid(const SweepSpec& spec, const Scenario& base)
{
    std::vector<GridPoint> grid;
    grid.reserve(spec.algorithms.size() * spec.values.size() * base.seeds.size());
    for (auto algorithm : spec.algorithms) {
        for (double value : spec.values) {
            for (auto seed : base.seeds) {
                grid.push_back(GridPoint{algorithm, value, seed});
            }
        }
    }
    return grid;
}

ReportRow aggregate_runs(std::span<const RunRow> runs)
{
    ReportRow row;
    if (runs.empty()) {
        return row;
    }
    row.algorithm = runs.front().algorithm;
    row.axis = runs.front().axis;
    row.axis_value = runs.front().axis_value;
    row.sdps = runs.front().sdps;
    row.runs = runs.size();

    std::vector<RunMetrics> metrics;
    metrics.reserve(runs.size());
    for (const auto& r : runs) {
        const auto& m = r.result.metrics;
        metrics.push_back(m);
        row.generated += m.total_generated();
        row.delivered += m.total_received();
        row.dropped_queue += m.dropped_queue;
        row.dropped_mac += m.dropped_mac;
        row.dropped_no_route += m.dropped_no_route;
    }
    row.pdr = row.generated > 0 ? pdr(metrics) : 0.0;
    row.avg_delay_us = avg_end_to_end_delay(metrics);
    return row;
}

namespace {

RunRow run_point(const SweepSpec& spec, const Scenario& base, const GridPoint& p)
{
    const Scenario s = scenario_at(base, spec.axis, p.axis_value, p.algorithm);
    return RunRow{p.algorithm, spec.axis, p.axis_value, s.sdp_count, p.seed, run_once(s, p.seed)};
}

void run_serial(const SweepSpec& spec, const Scenario& base, std::span<const GridPoint> grid,
                std::vector<RunRow>& rows)
{
    for (std::size_t i = 0; i < grid.size(); ++i) {
        rows[i] = run_point(spec, base, grid[i]);
    }
}

void run_parallel(const SweepSpec& spec, const Scenario& base, std::span<const GridPoint> grid,
                  std::vector<RunRow>& rows, int threads)
{
    std::vector<std::exception_ptr> errors(grid.size());
    const auto n = static_cast<std::int64_t>(grid.size());
#if defined(_OPENMP)
    const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            rows[static_cast<std::size_t>(i)] = run_point(spec, base, grid[static_cast<std::size_t>(i)]);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    (void)threads;
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const Scenario& base, Execution exec, int threads)
{
    spec.validate();
    base.validate();
    for (double value : spec.values) {
        scenario_at(base, spec.axis, value, base.algorithm).validate();
    }
    const auto grid = sweep_grid(spec, base);
    SweepResult out;
    out.runs.resize(grid.size());
    if (exec == Execution::Serial) {
        run_serial(spec, base, grid, out.runs);
    } else {
        run_parallel(spec, base, grid, out.runs, threads);
    }

    const std::size_t per_point = base.seeds.size();
    for (std::size_t i = 0; i < out.runs.size(); i += per_point) {
        out.aggregate.push_back(aggregate_runs(std::span<const RunRow>(out.runs).subspan(i, per_point)));
    }
    return out;
}

}  // namespace manetsim
