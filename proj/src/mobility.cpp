#include "manetsim/mobility.hpp"

#include "manetsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace manetsim {

SpeedRange speed_range_for_average(double avg_speed)
{
    return SpeedRange{1.0, 2.0 * avg_speed - 1.0};
}

Mobility::Mobility(std::size_t node_count, Vec2 terrain) : terrain_(terrain), legs_(node_count)
{
    for (auto& l : legs_) {
        l.push_back(WaypointLeg{});
    }
}

void Mobility::set_static(NodeId node, Vec2 position)
{
    legs_.at(node).assign(1, WaypointLeg{position, position, 0.0, SimTime{0}, SimTime{0}});
}

void Mobility::set_path(NodeId node, const std::vector<Waypoint>& points)
{
    auto& legs = legs_.at(node);
    legs.clear();
    if (points.empty()) {
        legs.push_back(WaypointLeg{});
        return;
    }
    legs.push_back(WaypointLeg{points.front().position, points.front().position, 0.0, SimTime{0}, points.front().at});
    for (std::size_t i = 1; i < points.size(); ++i) {
        const auto& a = points[i - 1];
        const auto& b = points[i];
        const double secs = to_seconds(b.at - a.at);
        const double speed = secs > 0.0 ? distance(a.position, b.position) / secs : 0.0;
        legs.push_back(WaypointLeg{a.position, b.position, speed, a.at, b.at});
    }
}

Vec2 Mobility::random_point(RandomSource& rng) const
{
    const double x = rng.uniform_real(0.0, terrain_.x);
    const double y = rng.uniform_real(0.0, terrain_.y);
    return Vec2{x, y};
}

void Mobility::start_random_waypoint(Kernel& kernel, SpeedRange speeds)
{
    speeds_ = speeds;
    auto& rng = kernel.rng();
    std::vector<Vec2> initial;
    initial.reserve(legs_.size());
    for (std::size_t n = 0; n < legs_.size(); ++n) {
        initial.push_back(random_point(rng));
    }
    for (NodeId n = 0; n < legs_.size(); ++n) {
        legs_[n].clear();
        begin_leg(kernel, n, initial[n], kernel.now());
    }
}

void Mobility::begin_leg(Kernel& kernel, NodeId node, Vec2 from, SimTime depart)
{
    auto& rng = kernel.rng();
    const Vec2 to = random_point(rng);
    const double speed = rng.uniform_real(speeds_.min, speeds_.max);
    const double micros = std::ceil(distance(from, to) / speed * 1e6);
    const SimTime arrive = depart + Duration{std::max<std::int64_t>(1, static_cast<std::int64_t>(micros))};
    legs_[node].push_back(WaypointLeg{from, to, speed, depart, arrive});
    kernel.schedule(arrive, EventKind::WaypointArrival, [this, &kernel, node, to, arrive] {
        begin_leg(kernel, node, to, arrive);
    });
}

Vec2 Mobility::position_at(NodeId node, SimTime t) const
{
    const auto& legs = legs_.at(node);
    // last leg departing at or before t
    auto it = std::upper_bound(legs.begin(), legs.end(), t,
                               [](SimTime value, const WaypointLeg& leg) { return value < leg.depart_at; });
    if (it == legs.begin()) {
        return legs.front().from;
    }
    const WaypointLeg& leg = *std::prev(it);
    if (t >= leg.arrive_at) {
        return leg.to;
    }
    const double frac = static_cast<double>((t - leg.depart_at).count()) /
                        static_cast<double>((leg.arrive_at - leg.depart_at).count());
    return Vec2{leg.from.x + (leg.to.x - leg.from.x) * frac, leg.from.y + (leg.to.y - leg.from.y) * frac};
}

std::vector<CbrSession> build_sdp_set(RandomSource& rng, std::size_t node_count, std::size_t sdp_count,
                                      bool disjoint, const TrafficPattern& pattern)
{
    auto session = [&pattern](NodeId s, NodeId d) {
        return CbrSession{s, d, pattern.packet_bytes, pattern.interval, pattern.start, pattern.end, 0};
    };
    std::vector<CbrSession> out;
    if (sdp_count == 0) {
        return out;
    }
    if (disjoint) {
        if (2 * sdp_count > node_count) {
            throw ConfigError("sdp_count " + std::to_string(sdp_count) + " needs " + std::to_string(2 * sdp_count) +
                              " distinct endpoints but only " + std::to_string(node_count) + " nodes exist");
        }
        std::vector<NodeId> ids(node_count);
        for (NodeId i = 0; i < node_count; ++i) {
            ids[i] = i;
        }
        for (std::size_t i = 0; i < 2 * sdp_count; ++i) {
            const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i),
                                                                    static_cast<std::int64_t>(node_count - 1)));
            std::swap(ids[i], ids[j]);
        }
        for (std::size_t i = 0; i < sdp_count; ++i) {
            out.push_back(session(ids[i], ids[sdp_count + i]));
        }
        return out;
    }
    if (node_count < 2 || sdp_count > node_count * (node_count - 1)) {
        throw ConfigError("sdp_count " + std::to_string(sdp_count) + " exceeds the distinct ordered pairs of " +
                          std::to_string(node_count) + " nodes");
    }
    std::set<std::pair<NodeId, NodeId>> used;
    const auto hi = static_cast<std::int64_t>(node_count - 1);
    while (out.size() < sdp_count) {
        const auto s = static_cast<NodeId>(rng.uniform_int(0, hi));
        const auto d = static_cast<NodeId>(rng.uniform_int(0, hi));
        if (s == d || !used.emplace(s, d).second) {
            continue;
        }
        out.push_back(session(s, d));
    }
    return out;
}

std::uint64_t packets_per_session(const TrafficPattern& pattern)
{
    if (pattern.end <= pattern.start) {
        return 0;
    }
    const auto span = (pattern.end - pattern.start).count();
    const auto step = pattern.interval.count();
    return static_cast<std::uint64_t>((span + step - 1) / step);
}

CbrTraffic::CbrTraffic(Kernel& kernel, std::vector<CbrSession> sessions, EmitFn emit)
    : kernel_(kernel), sessions_(std::move(sessions)), emit_fn_(std::move(emit))
{
}

void CbrTraffic::start()
{
    for (std::size_t i = 0; i < sessions_.size(); ++i) {
        const SimTime at = std::max(sessions_[i].start, kernel_.now());
        kernel_.schedule(at, EventKind::CbrEmit, [this, i] { emit(i); });
    }
}

void CbrTraffic::emit(std::size_t index)
{
    CbrSession& s = sessions_[index];
    const SimTime now = kernel_.now();
    if (now < s.start || now >= s.end) {
        return;
    }
    emit_fn_(s);
    ++s.next_seq;
    ++emitted_;
    if (now + s.interval < s.end) {
        kernel_.schedule(now + s.interval, EventKind::CbrEmit, [this, index] { emit(index); });
    }
}

}  // namespace manetsim
