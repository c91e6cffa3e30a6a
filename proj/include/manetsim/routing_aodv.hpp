#pragma once

#include "manetsim/mac_dcf.hpp"
#include "manetsim/metrics.hpp"
#include "manetsim/packet.hpp"
#include "manetsim/sim_kernel.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <utility>

namespace manetsim {

struct AodvConfig {
    Duration active_route_timeout{3'000'000};
    int rreq_retries = 2;
    Duration rreq_retry_interval{1'000'000};
    std::size_t buffer_capacity = 64;
    int rreq_bytes = 24;
    int rrep_bytes = 20;
    int ttl = 64;

    std::string_view violation() const;
};

struct RouteEntry {
    NodeId destination = kNoNode;
    NodeId next_hop = kNoNode;
    int hop_count = 1;
    SimTime expires_at{0};
};

struct RoutingCounters {
    std::uint64_t rreq_originated = 0;   // first attempts and retries
    std::uint64_t rreq_forwarded = 0;
    std::uint64_t rreq_duplicates = 0;
    std::uint64_t rrep_sent = 0;
    std::uint64_t rrep_forwarded = 0;
    std::uint64_t rrep_dropped = 0;
    std::uint64_t discoveries_started = 0;
    std::uint64_t discoveries_failed = 0;
    std::uint64_t routes_invalidated = 0;
    std::uint64_t routes_expired = 0;
    std::uint64_t control_dropped = 0;   // control frames refused by a full MAC queue
    std::uint64_t ttl_expired = 0;
};

enum class RouteDecision { Forwarded, Buffered, DroppedNoRoute, DroppedQueue };
enum class RreqAction { Rebroadcast, ReplyAsDestination, Ignore };

std::string_view to_string(RouteDecision d);
std::string_view to_string(RreqAction a);

/// Minimal on-demand distance-vector routing for one node.
///
/// Only the destination answers a route request; there are no sequence
/// numbers, no intermediate replies and no RERR propagation. A MAC link
/// failure invalidates the routes through that neighbour locally, and the
/// frames queued toward it go back through route discovery.
class AodvRouter final : public MacUpper {
public:
    AodvRouter(NodeId id, Kernel& kernel, DcfMac& mac, AodvConfig cfg, PacketLedger& ledger);

    AodvRouter(const AodvRouter&) = delete;
    AodvRouter& operator=(const AodvRouter&) = delete;

    /// Entry point for locally generated data.
    RouteDecision originate(DataPacket packet);

    RouteDecision route_or_discover(DataPacket packet);
    RreqAction handle_rreq(const RouteRequest& rreq, NodeId from);
    void handle_rrep(const RouteReply& rrep, NodeId from);
    int on_link_failure(NodeId next_hop);
    int expire_routes(SimTime now);

    /// Live route toward `destination` at the current time, if any.
    std::optional<RouteEntry> route_to(NodeId destination) const;
    void install_route(NodeId destination, NodeId next_hop, int hop_count);

    NodeId id() const noexcept { return id_; }
    std::size_t buffered() const noexcept { return buffer_.size(); }
    const std::deque<DataPacket>& buffer() const noexcept { return buffer_; }
    bool discovering(NodeId destination) const { return discoveries_.count(destination) != 0; }
    const RoutingCounters& counters() const noexcept { return counters_; }
    const AodvConfig& config() const noexcept { return cfg_; }

    /// Called with every packet delivered here as its final destination.
    void set_delivery_observer(std::function<void(const DataPacket&)> fn) { delivery_observer_ = std::move(fn); }

    void on_mac_receive(const Frame& frame) override;
    void on_mac_tx_success(const Frame& frame) override;
    void on_mac_tx_failed(const Frame& frame) override;

private:
    struct Discovery {
        int attempts = 0;
        EventHandle timer{};
    };

    RouteEntry* live_route(NodeId destination);
    void start_discovery(NodeId destination);
    void send_rreq(NodeId destination);
    void on_rreq_timer(NodeId destination);
    void flush(NodeId destination);
    void receive_data(DataPacket packet, NodeId from);
    bool send_control(Frame frame);

    NodeId id_;
    Kernel& kernel_;
    DcfMac& mac_;
    AodvConfig cfg_;
    PacketLedger& ledger_;

    std::map<NodeId, RouteEntry> routes_;
    std::set<std::pair<NodeId, std::uint64_t>> seen_rreq_;
    std::deque<DataPacket> buffer_;
    std::map<NodeId, Discovery> discoveries_;
    std::uint64_t next_rreq_id_ = 0;
    RoutingCounters counters_;
    std::function<void(const DataPacket&)> delivery_observer_;
};

}  // namespace manetsim
