#pragma once

#include "manetsim/mac_dcf.hpp"
#include "manetsim/metrics.hpp"
#include "manetsim/mobility.hpp"
#include "manetsim/phy_channel.hpp"
#include "manetsim/routing_aodv.hpp"
#include "manetsim/scenario.hpp"
#include "manetsim/sim_kernel.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace manetsim {

struct RunResult {
    RunMetrics metrics;
    RoutingCounters routing;
    MacCounters mac;
    std::uint64_t events = 0;
    std::uint64_t trace_digest = 0;
};

/// One independent run: kernel, mobility, channel and a MAC + router per node.
///
/// Construction draws from the run's RandomSource in this order: random
/// waypoint state (see Mobility), then the source/destination pairs.
class Simulation {
public:
    struct Options {
        bool random_mobility = true;  // false: every node starts static at (0, 0)
        bool cbr_traffic = true;      // false: no sessions; inject with send()
    };

    Simulation(const Scenario& scenario, std::uint64_t seed);
    Simulation(const Scenario& scenario, std::uint64_t seed, Options options);

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// Runs to the scenario's end time and closes the packet ledger.
    RunResult run();

    /// Injects a data packet at `source` now, as a CBR emission would.
    PacketId send(NodeId source, NodeId destination, int bytes = 512);

    /// Data packets still held by some node (queued at a MAC or buffered by routing).
    std::uint64_t count_in_flight() const;

    Kernel& kernel() noexcept { return kernel_; }
    Mobility& mobility() noexcept { return mobility_; }
    Channel& channel() noexcept { return *channel_; }
    DcfMac& mac(NodeId node) { return *macs_.at(node); }
    AodvRouter& router(NodeId node) { return *routers_.at(node); }
    const RunMetrics& metrics() const noexcept { return metrics_; }
    PacketLedger& ledger() noexcept { return ledger_; }
    const Scenario& scenario() const noexcept { return scenario_; }
    std::vector<CbrSession> sessions() const;

    RoutingCounters routing_totals() const;
    MacCounters mac_totals() const;

private:
    Scenario scenario_;
    Kernel kernel_;
    RunMetrics metrics_;
    PacketLedger ledger_;
    Mobility mobility_;
    std::unique_ptr<Channel> channel_;
    std::vector<std::unique_ptr<DcfMac>> macs_;
    std::vector<std::unique_ptr<AodvRouter>> routers_;
    std::unique_ptr<CbrTraffic> traffic_;
    bool finished_ = false;
};

/// Convenience: build, run and return the result for (scenario, seed).
RunResult run_once(const Scenario& scenario, std::uint64_t seed);

}  // namespace manetsim
