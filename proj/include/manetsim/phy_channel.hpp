#pragma once

#include "manetsim/packet.hpp"
#include "manetsim/sim_kernel.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string_view>
#include <vector>

namespace manetsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

double distance(Vec2 a, Vec2 b);

/// Unit-disk radio: reception is binary at `tx_range`.
struct RadioConfig {
    double tx_range = 250.0;                  // m
    double carrier_sense_multiplier = 1.0;    // sensing range = multiplier * tx_range
    std::int64_t data_rate_bps = 2'000'000;
    Duration phy_overhead{192};               // long-preamble DSSS PLCP

    double carrier_sense_range() const { return tx_range * carrier_sense_multiplier; }
    std::string_view violation() const;
};

/// On-air duration of a frame of `frame_bytes` (MAC header included).
/// Throws std::invalid_argument for frame_bytes <= 0.
Duration airtime(int frame_bytes, const RadioConfig& cfg);

/// Closed-ball test: true iff |a - b| <= r.
bool in_range(Vec2 a, Vec2 b, double r);

/// Callbacks from the medium into a node's MAC.
class ChannelClient {
public:
    virtual ~ChannelClient() = default;
    virtual void on_medium_busy() = 0;
    virtual void on_medium_idle() = 0;
    virtual void on_frame_received(const Frame& frame) = 0;
    virtual void on_transmission_end(const Frame& frame) = 0;
};

using TxId = std::uint64_t;

struct PhyStats {
    std::uint64_t tx_started = 0;
    std::uint64_t tx_started_while_busy = 0;  // non-ACK frames only
    std::uint64_t rx_delivered = 0;
    std::uint64_t rx_corrupted = 0;
};

struct ReceptionOutcome {
    TxId tx = 0;
    NodeId sender = kNoNode;
    NodeId receiver = kNoNode;
    FrameKind kind = FrameKind::Data;
    bool delivered = false;
    SimTime at{0};
};

/// Shared medium. Positions are sampled once, at transmission start.
///
/// A reception is corrupted when any other transmission audible at the
/// receiver (within tx_range) overlaps it in time, or when the receiver
/// transmits during it. There is no capture: every overlapping frame is lost.
/// Intervals are half-open, so a frame ending at t does not collide with one
/// starting at t.
class Channel {
public:
    using PositionFn = std::function<Vec2(NodeId)>;

    Channel(Kernel& kernel, RadioConfig cfg, std::size_t node_count, PositionFn position);

    void attach(NodeId node, ChannelClient* client);

    /// Starts a transmission of `air_bytes` bytes. Throws SimulationFault when
    /// the sender is already on air.
    TxId begin_transmission(NodeId sender, Frame frame, int air_bytes);

    /// Carrier sense: the node is on air, or a transmission that started strictly
    /// before `t` and ends after `t` comes from within sensing range.
    bool medium_busy(NodeId node, SimTime t) const;

    bool transmitting(NodeId node) const { return transmitting_.at(node); }
    int audible_count(NodeId node) const { return audible_.at(node); }
    const PhyStats& stats(NodeId node) const { return stats_.at(node); }
    const RadioConfig& config() const noexcept { return cfg_; }
    std::size_t node_count() const noexcept { return clients_.size(); }

    /// Observer for every reception outcome (tests and tracing).
    void set_outcome_observer(std::function<void(const ReceptionOutcome&)> fn)
    {
        observer_ = std::move(fn);
    }

private:
    struct Transmission {
        NodeId sender;
        Frame frame;
        SimTime start;
        SimTime end;
        Vec2 origin;
        std::vector<NodeId> receivers;
        std::vector<char> corrupted;  // parallel to receivers
        std::vector<NodeId> sensed_by;
    };

    void end_transmission(TxId id);
    void corrupt(TxId id, NodeId receiver);

    Kernel& kernel_;
    RadioConfig cfg_;
    PositionFn position_;
    std::vector<ChannelClient*> clients_;
    std::vector<char> transmitting_;
    std::vector<int> audible_;
    std::vector<std::vector<TxId>> receiving_;
    std::vector<PhyStats> stats_;
    std::map<TxId, Transmission> active_;
    TxId next_id_ = 1;
    std::function<void(const ReceptionOutcome&)> observer_;
};

}  // namespace manetsim
