#pragma once

#include "manetsim/packet.hpp"
#include "manetsim/sim_kernel.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace manetsim {

/// Per-run counters. Vectors are indexed by node id.
struct RunMetrics {
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> generated;     // per source
    std::vector<std::uint64_t> received;      // per destination
    std::vector<std::uint64_t> delay_sum_us;  // per destination
    std::vector<std::uint64_t> delay_count;   // per destination
    std::uint64_t dropped_queue = 0;
    std::uint64_t dropped_mac = 0;
    std::uint64_t dropped_no_route = 0;
    std::uint64_t in_flight_at_end = 0;

    RunMetrics() = default;
    RunMetrics(std::size_t node_count, std::uint64_t run_seed);

    std::uint64_t total_generated() const;
    std::uint64_t total_received() const;
    std::uint64_t total_dropped() const { return dropped_queue + dropped_mac + dropped_no_route; }

    /// generated == received + drops + in_flight_at_end
    bool ledger_closes() const;

    /// Mean over destinations with at least one delivery of the per-destination
    /// mean delay, in microseconds. Empty when nothing was delivered.
    std::optional<double> mean_destination_delay_us() const;
};

/// Raised for metric inputs that make a ratio undefined (nothing generated).
class MetricsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Packet delivery ratio over m runs: sum of received / sum of generated.
double pdr(std::span<const RunMetrics> runs);

/// Average end-to-end delay over m runs (us): the mean across runs of each
/// run's mean-over-destinations of per-destination mean delay. Runs with no
/// delivery at all are left out; empty when no run delivered anything.
std::optional<double> avg_end_to_end_delay(std::span<const RunMetrics> runs);

enum class DropReason { Queue, Mac, NoRoute };

/// Tracks which node is responsible for each live data packet so that every
/// generated packet ends in exactly one terminal state.
///
/// A packet moves to the next hop the moment that hop receives it intact. A
/// sender that later exhausts its retries (the ACK was lost) no longer holds
/// it, so the drop is not counted twice.
class PacketLedger {
public:
    explicit PacketLedger(RunMetrics& metrics) : metrics_(metrics) {}

    PacketId create(NodeId source);
    bool holds(PacketId id, NodeId node) const { return id < holder_.size() && holder_[id] == node; }
    /// Returns false when `from` did not hold the packet (a stale copy).
    bool hand_over(PacketId id, NodeId from, NodeId to);
    void delivered(PacketId id, NodeId destination, Duration delay);
    /// Counts the drop only when `at` holds the packet. Returns whether it counted.
    bool drop(PacketId id, NodeId at, DropReason reason);

    std::uint64_t live() const noexcept { return live_; }

private:
    RunMetrics& metrics_;
    std::vector<NodeId> holder_;
    std::uint64_t live_ = 0;
};

}  // namespace manetsim
