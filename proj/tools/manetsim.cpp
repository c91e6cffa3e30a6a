// Command-line front end: run sweeps, summarize CSV output, run the slot model.
#include "manetsim/errors.hpp"
#include "manetsim/micro.hpp"
#include "manetsim/report.hpp"
#include "manetsim/scenario.hpp"
#include "manetsim/sweep.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) {
            out += ',';
        }
        out += s;
    }
    return out;
}

struct RunArgs {
    std::string config;
    std::vector<std::string> algorithms;
    std::string axis;
    std::vector<std::string> values;
    std::vector<std::string> seeds;
    std::vector<std::string> set;
    std::string out = "results";
    bool serial = false;
    int threads = 0;
};

int do_run(const RunArgs& a)
{
    using namespace manetsim;
    ConfigEntries overrides;
    for (const auto& kv : a.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--set expects key=value, got '" + kv + "'");
        }
        overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!a.algorithms.empty()) overrides.emplace_back("algorithms", join(a.algorithms));
    if (!a.axis.empty()) overrides.emplace_back("axis", a.axis);
    if (!a.values.empty()) overrides.emplace_back("values", join(a.values));
    if (!a.seeds.empty()) overrides.emplace_back("seeds", join(a.seeds));

    const auto cfg = load_experiment(a.config, overrides);
    const auto result =
        run_sweep(cfg.sweep, cfg.scenario, a.serial ? Execution::Serial : Execution::Parallel, a.threads);
    write_outputs(a.out, result);
    std::fputs(format_summary(summarize_best_worst(result.aggregate)).c_str(), stdout);
    std::printf("%zu runs written to %s\n", result.runs.size(), a.out.c_str());
    return 0;
}

int do_summarize(const std::string& in)
{
    std::ifstream file(in, std::ios::binary);
    if (!file) {
        throw manetsim::ConfigError("cannot read " + in);
    }
    std::ostringstream text;
    text << file.rdbuf();
    const auto rows = manetsim::read_report_csv(text.str());
    std::fputs(manetsim::format_summary(manetsim::summarize_best_worst(rows)).c_str(), stdout);
    return 0;
}

struct MicroArgs {
    std::string policy = "beb";
    int stations = 2;
    std::uint64_t slots = 1'000'000;
    std::uint64_t seed = 1;
    int cw_min = 32;
    int cw_max = 1024;
};

int do_micro(const MicroArgs& a)
{
    using namespace manetsim;
    MicroConfig cfg;
    const auto policy = parse_policy(a.policy);
    if (!policy) {
        throw ConfigError("unknown policy '" + a.policy + "'");
    }
    cfg.policy = *policy;
    cfg.station_count = a.stations;
    cfg.horizon_slots = a.slots;
    cfg.seed = a.seed;
    cfg.params.cw_min = a.cw_min;
    cfg.params.cw_max = a.cw_max;
    const auto r = run_micro(cfg);
    std::printf("slots %llu idle %llu success %llu collision %llu collision_fraction %.6f\n",
                static_cast<unsigned long long>(r.slots()), static_cast<unsigned long long>(r.idle_slots),
                static_cast<unsigned long long>(r.success_slots), static_cast<unsigned long long>(r.collision_slots),
                r.collision_fraction());
    for (std::size_t i = 0; i < r.successes.size(); ++i) {
        std::printf("station %zu successes %llu collisions %llu\n", i,
                    static_cast<unsigned long long>(r.successes[i]),
                    static_cast<unsigned long long>(r.collisions[i]));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"MANET backoff comparison simulator"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run a sweep and write raw.csv, aggregate.csv, routing.csv, summary.txt");
    run_cmd->add_option("--config", run.config, "key = value scenario file");
    run_cmd->add_option("--algorithm", run.algorithms, "backoff policy (repeatable): beb mbeb mild eied didd log");
    run_cmd->add_option("--axis", run.axis, "sweep axis: speed or range");
    run_cmd->add_option("--values", run.values, "axis values")->delimiter(',');
    run_cmd->add_option("--seeds", run.seeds, "seed list")->delimiter(',');
    run_cmd->add_option("--set", run.set, "override any config key (key=value, repeatable)");
    run_cmd->add_option("--out", run.out, "output directory");
    run_cmd->add_flag("--serial", run.serial, "use the serial reference executor");
    run_cmd->add_option("--threads", run.threads, "OpenMP threads (0 = default)");

    std::string summarize_in;
    auto* sum_cmd = app.add_subcommand("summarize", "Print the best/worst table for a raw or aggregate CSV");
    sum_cmd->add_option("--in", summarize_in, "CSV file")->required();

    MicroArgs micro;
    auto* micro_cmd = app.add_subcommand("micro", "Run the slot-synchronous contention model");
    micro_cmd->add_option("--policy", micro.policy, "backoff policy");
    micro_cmd->add_option("--stations", micro.stations, "1, 2 or 3");
    micro_cmd->add_option("--slots", micro.slots, "horizon in slots");
    micro_cmd->add_option("--seed", micro.seed, "seed");
    micro_cmd->add_option("--cw-min", micro.cw_min, "minimum contention window");
    micro_cmd->add_option("--cw-max", micro.cw_max, "maximum contention window");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd) return do_run(run);
        if (*sum_cmd) return do_summarize(summarize_in);
        if (*micro_cmd) return do_micro(micro);
    } catch (const manetsim::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal fault: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
