#pragma once

#include "manetsim/packet.hpp"
#include "manetsim/phy_channel.hpp"
#include "manetsim/sim_kernel.hpp"

#include <functional>
#include <vector>

namespace manetsim {

/// One straight-line movement. A stationary node has from == to.
struct WaypointLeg {
    Vec2 from;
    Vec2 to;
    double speed = 0.0;  // m/s
    SimTime depart_at{0};
    SimTime arrive_at{0};
};

struct Waypoint {
    SimTime at{0};
    Vec2 position;
};

/// Uniform speed interval whose mean is `avg_speed`: [1, 2 * avg_speed - 1] m/s.
struct SpeedRange {
    double min = 1.0;
    double max = 1.0;
};
SpeedRange speed_range_for_average(double avg_speed);

/// Node trajectories: random waypoint with zero pause, or scripted paths.
///
/// Random-waypoint draw order (all from the run's RandomSource):
///   1. for each node in id order: x, y of the initial position;
///   2. for each node in id order: x, y of the first destination, then speed;
///   3. at every arrival event: x, y of the next destination, then speed.
class Mobility {
public:
    Mobility(std::size_t node_count, Vec2 terrain);

    std::size_t node_count() const noexcept { return legs_.size(); }
    Vec2 terrain() const noexcept { return terrain_; }

    void set_static(NodeId node, Vec2 position);

    /// Piecewise-linear path through `points` (ascending times). The node sits
    /// at the first point before it and at the last point after it.
    void set_path(NodeId node, const std::vector<Waypoint>& points);

    /// Places every node uniformly in the terrain and starts its first leg at t = 0.
    void start_random_waypoint(Kernel& kernel, SpeedRange speeds);

    Vec2 position_at(NodeId node, SimTime t) const;
    const std::vector<WaypointLeg>& legs(NodeId node) const { return legs_.at(node); }

private:
    void begin_leg(Kernel& kernel, NodeId node, Vec2 from, SimTime depart);
    Vec2 random_point(RandomSource& rng) const;

    Vec2 terrain_;
    SpeedRange speeds_{};
    std::vector<std::vector<WaypointLeg>> legs_;
};

/// One constant-bit-rate flow.
struct CbrSession {
    NodeId source = kNoNode;
    NodeId destination = kNoNode;
    int packet_bytes = 512;
    Duration interval{250'000};
    SimTime start{1'000'000'000};
    SimTime end{1'800'000'000};
    std::uint64_t next_seq = 0;
};

struct TrafficPattern {
    int packet_bytes = 512;
    Duration interval{250'000};
    SimTime start{1'000'000'000};
    SimTime end{1'800'000'000};
};

/// Picks `sdp_count` source/destination pairs. With `disjoint`, all
/// 2 * sdp_count endpoints are distinct nodes (a prefix of a Fisher-Yates
/// shuffle: sources first, then destinations). Otherwise pairs are drawn
/// until `sdp_count` distinct ordered pairs exist. Throws ConfigError when
/// the request cannot be met.
std::vector<CbrSession> build_sdp_set(RandomSource& rng, std::size_t node_count, std::size_t sdp_count,
                                      bool disjoint, const TrafficPattern& pattern);

/// Packets a session emits: one at start, then every interval while time < end.
std::uint64_t packets_per_session(const TrafficPattern& pattern);

/// Drives the sessions' emission events.
class CbrTraffic {
public:
    using EmitFn = std::function<void(CbrSession& session)>;

    CbrTraffic(Kernel& kernel, std::vector<CbrSession> sessions, EmitFn emit);

    void start();
    const std::vector<CbrSession>& sessions() const noexcept { return sessions_; }
    std::uint64_t emitted() const noexcept { return emitted_; }

private:
    void emit(std::size_t index);

    Kernel& kernel_;
    std::vector<CbrSession> sessions_;
    EmitFn emit_fn_;
    std::uint64_t emitted_ = 0;
};

}  // namespace manetsim
