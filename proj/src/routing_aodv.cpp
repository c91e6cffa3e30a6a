#include "manetsim/routing_aodv.hpp"

#include <algorithm>

namespace manetsim {

std::string_view AodvConfig::violation() const
{
    if (active_route_timeout.count() <= 0) return "route_timeout_s must be > 0";
    if (rreq_retries < 0) return "rreq_retries must be >= 0";
    if (rreq_retry_interval.count() <= 0) return "rreq_retry_interval_s must be > 0";
    if (buffer_capacity == 0) return "discovery_buffer must be > 0";
    if (rreq_bytes <= 0 || rrep_bytes <= 0) return "control packet sizes must be > 0";
    if (ttl < 1) return "ttl must be >= 1";
    return {};
}

std::string_view to_string(RouteDecision d)
{
    switch (d) {
    case RouteDecision::Forwarded: return "Forwarded";
    case RouteDecision::Buffered: return "Buffered";
    case RouteDecision::DroppedNoRoute: return "DroppedNoRoute";
    case RouteDecision::DroppedQueue: return "DroppedQueue";
    }
    return "?";
}

std::string_view to_string(RreqAction a)
{
    switch (a) {
    case RreqAction::Rebroadcast: return "Rebroadcast";
    case RreqAction::ReplyAsDestination: return "ReplyAsDestination";
    case RreqAction::Ignore: return "Ignore";
    }
    return "?";
}

AodvRouter::AodvRouter(NodeId id, Kernel& kernel, DcfMac& mac, AodvConfig cfg, PacketLedger& ledger)
    : id_(id), kernel_(kernel), mac_(mac), cfg_(cfg), ledger_(ledger)
{
}

RouteEntry* AodvRouter::live_route(NodeId destination)
{
    auto it = routes_.find(destination);
    if (it == routes_.end()) {
        return nullptr;
    }
    if (it->second.expires_at < kernel_.now()) {
        routes_.erase(it);
        ++counters_.routes_expired;
        return nullptr;
    }
    return &it->second;
}

std::optional<RouteEntry> AodvRouter::route_to(NodeId destination) const
{
    auto it = routes_.find(destination);
    if (it == routes_.end() || it->second.expires_at < kernel_.now()) {
        return std::nullopt;
    }
    return it->second;
}

void AodvRouter::install_route(NodeId destination, NodeId next_hop, int hop_count)
{
    const SimTime expiry = kernel_.now() + cfg_.active_route_timeout;
    RouteEntry* existing = live_route(destination);
    if (existing == nullptr || hop_count <= existing->hop_count || existing->next_hop == next_hop) {
        routes_[destination] = RouteEntry{destination, next_hop, hop_count, expiry};
    }
    flush(destination);
}

int AodvRouter::expire_routes(SimTime now)
{
    int expired = 0;
    for (auto it = routes_.begin(); it != routes_.end();) {
        if (it->second.expires_at < now) {
            it = routes_.erase(it);
            ++expired;
        } else {
            ++it;
        }
    }
    counters_.routes_expired += static_cast<std::uint64_t>(expired);
    return expired;
}

RouteDecision AodvRouter::originate(DataPacket packet)
{
    packet.ttl = cfg_.ttl;
    packet.path.assign(1, id_);
    return route_or_discover(std::move(packet));
}

RouteDecision AodvRouter::route_or_discover(DataPacket packet)
{
    if (RouteEntry* route = live_route(packet.destination)) {
        route->expires_at = kernel_.now() + cfg_.active_route_timeout;
        Frame frame;
        frame.kind = FrameKind::Data;
        frame.dst = route->next_hop;
        frame.payload_bytes = packet.bytes;
        const PacketId pid = packet.id;
        frame.payload = std::move(packet);
        if (!mac_.enqueue(std::move(frame))) {
            ledger_.drop(pid, id_, DropReason::Queue);
            return RouteDecision::DroppedQueue;
        }
        return RouteDecision::Forwarded;
    }
    if (buffer_.size() >= cfg_.buffer_capacity) {
        ledger_.drop(packet.id, id_, DropReason::NoRoute);
        return RouteDecision::DroppedNoRoute;
    }
    const NodeId destination = packet.destination;
    buffer_.push_back(std::move(packet));
    if (!discovering(destination)) {
        start_discovery(destination);
    }
    return RouteDecision::Buffered;
}

bool AodvRouter::send_control(Frame frame)
{
    if (!mac_.enqueue(std::move(frame))) {
        ++counters_.control_dropped;
        return false;
    }
    return true;
}

void AodvRouter::start_discovery(NodeId destination)
{
    ++counters_.discoveries_started;
    auto& d = discoveries_[destination];
    d.attempts = 1;
    send_rreq(destination);
    d.timer = kernel_.schedule_in(cfg_.rreq_retry_interval, EventKind::RreqRetry,
                                  [this, destination] { on_rreq_timer(destination); });
}

void AodvRouter::send_rreq(NodeId destination)
{
    ++counters_.rreq_originated;
    RouteRequest rreq{id_, destination, ++next_rreq_id_, 0};
    seen_rreq_.emplace(id_, rreq.rreq_id);
    Frame frame;
    frame.kind = FrameKind::Broadcast;
    frame.dst = kBroadcast;
    frame.payload_bytes = cfg_.rreq_bytes;
    frame.payload = rreq;
    send_control(std::move(frame));
}

void AodvRouter::on_rreq_timer(NodeId destination)
{
    auto it = discoveries_.find(destination);
    if (it == discoveries_.end()) {
        return;
    }
    if (live_route(destination) != nullptr) {
        flush(destination);
        return;
    }
    if (it->second.attempts < 1 + cfg_.rreq_retries) {
        ++it->second.attempts;
        send_rreq(destination);
        it->second.timer = kernel_.schedule_in(cfg_.rreq_retry_interval, EventKind::RreqRetry,
                                               [this, destination] { on_rreq_timer(destination); });
        return;
    }
    discoveries_.erase(it);
    ++counters_.discoveries_failed;
    std::deque<DataPacket> keep;
    for (auto& p : buffer_) {
        if (p.destination == destination) {
            ledger_.drop(p.id, id_, DropReason::NoRoute);
        } else {
            keep.push_back(std::move(p));
        }
    }
    buffer_ = std::move(keep);
}

void AodvRouter::flush(NodeId destination)
{
    if (auto it = discoveries_.find(destination); it != discoveries_.end()) {
        kernel_.cancel(it->second.timer);
        discoveries_.erase(it);
    }
    std::deque<DataPacket> ready;
    std::deque<DataPacket> keep;
    for (auto& p : buffer_) {
        (p.destination == destination ? ready : keep).push_back(std::move(p));
    }
    buffer_ = std::move(keep);
    for (auto& p : ready) {
        route_or_discover(std::move(p));
    }
}

RreqAction AodvRouter::handle_rreq(const RouteRequest& rreq, NodeId from)
{
    if (!seen_rreq_.emplace(rreq.originator, rreq.rreq_id).second) {
        ++counters_.rreq_duplicates;
        return RreqAction::Ignore;
    }
    install_route(rreq.originator, from, rreq.hop_count + 1);

    if (rreq.target == id_) {
        Frame frame;
        frame.kind = FrameKind::Data;
        frame.dst = from;
        frame.payload_bytes = cfg_.rrep_bytes;
        frame.payload = RouteReply{rreq.originator, id_, 0};
        if (send_control(std::move(frame))) {
            ++counters_.rrep_sent;
        }
        return RreqAction::ReplyAsDestination;
    }

    RouteRequest next = rreq;
    ++next.hop_count;
    Frame frame;
    frame.kind = FrameKind::Broadcast;
    frame.dst = kBroadcast;
    frame.payload_bytes = cfg_.rreq_bytes;
    frame.payload = next;
    if (send_control(std::move(frame))) {
        ++counters_.rreq_forwarded;
    }
    return RreqAction::Rebroadcast;
}

void AodvRouter::handle_rrep(const RouteReply& rrep, NodeId from)
{
    install_route(rrep.target, from, rrep.hop_count + 1);
    if (rrep.originator == id_) {
        return;
    }
    RouteEntry* back = live_route(rrep.originator);
    if (back == nullptr) {
        ++counters_.rrep_dropped;
        return;
    }
    back->expires_at = kernel_.now() + cfg_.active_route_timeout;
    RouteReply next = rrep;
    ++next.hop_count;
    Frame frame;
    frame.kind = FrameKind::Data;
    frame.dst = back->next_hop;
    frame.payload_bytes = cfg_.rrep_bytes;
    frame.payload = next;
    if (send_control(std::move(frame))) {
        ++counters_.rrep_forwarded;
    }
}

int AodvRouter::on_link_failure(NodeId next_hop)
{
    int invalidated = 0;
    for (auto it = routes_.begin(); it != routes_.end();) {
        if (it->second.next_hop == next_hop) {
            it = routes_.erase(it);
            ++invalidated;
        } else {
            ++it;
        }
    }
    counters_.routes_invalidated += static_cast<std::uint64_t>(invalidated);

    auto stranded = mac_.extract_queued([next_hop](const Frame& f) {
        return f.kind == FrameKind::Data && f.dst == next_hop;
    });
    for (auto& frame : stranded) {
        if (auto* packet = std::get_if<DataPacket>(&frame.payload)) {
            route_or_discover(std::move(*packet));
        } else {
            ++counters_.rrep_dropped;
        }
    }
    return invalidated;
}

void AodvRouter::receive_data(DataPacket packet, NodeId from)
{
    if (!ledger_.hand_over(packet.id, from, id_)) {
        return;
    }
    packet.path.push_back(id_);
    if (packet.destination == id_) {
        ledger_.delivered(packet.id, id_, kernel_.now() - packet.created);
        if (delivery_observer_) {
            delivery_observer_(packet);
        }
        return;
    }
    if (--packet.ttl <= 0) {
        ++counters_.ttl_expired;
        ledger_.drop(packet.id, id_, DropReason::NoRoute);
        return;
    }
    route_or_discover(std::move(packet));
}

void AodvRouter::on_mac_receive(const Frame& frame)
{
    if (const auto* data = std::get_if<DataPacket>(&frame.payload)) {
        receive_data(*data, frame.src);
    } else if (const auto* rreq = std::get_if<RouteRequest>(&frame.payload)) {
        handle_rreq(*rreq, frame.src);
    } else if (const auto* rrep = std::get_if<RouteReply>(&frame.payload)) {
        handle_rrep(*rrep, frame.src);
    }
}

void AodvRouter::on_mac_tx_success(const Frame&) {}

void AodvRouter::on_mac_tx_failed(const Frame& frame)
{
    if (const auto* data = frame.data()) {
        ledger_.drop(data->id, id_, DropReason::Mac);
    } else {
        ++counters_.rrep_dropped;
    }
    on_link_failure(frame.dst);
}

}  // namespace manetsim
