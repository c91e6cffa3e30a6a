#include "manetsim/simulation.hpp"

namespace manetsim {

Simulation::Simulation(const Scenario& scenario, std::uint64_t seed) : Simulation(scenario, seed, Options{}) {}

Simulation::Simulation(const Scenario& scenario, std::uint64_t seed, Options options)
    : scenario_(scenario),
      kernel_(seed),
      metrics_(scenario.node_count, seed),
      ledger_(metrics_),
      mobility_(scenario.node_count, scenario.terrain)
{
    scenario_.validate();
    if (options.random_mobility) {
        mobility_.start_random_waypoint(kernel_, speed_range_for_average(scenario_.avg_speed));
    }
    std::vector<CbrSession> sessions;
    if (options.cbr_traffic) {
        sessions = build_sdp_set(kernel_.rng(), scenario_.node_count, scenario_.sdp_count, scenario_.disjoint_sdps,
                                 scenario_.traffic);
    }

    channel_ = std::make_unique<Channel>(kernel_, scenario_.radio, scenario_.node_count,
                                         [this](NodeId n) { return mobility_.position_at(n, kernel_.now()); });
    const auto contention = ContentionState::initial(scenario_.algorithm, scenario_.backoff);
    for (NodeId n = 0; n < scenario_.node_count; ++n) {
        macs_.push_back(std::make_unique<DcfMac>(n, kernel_, *channel_, scenario_.mac, contention));
        channel_->attach(n, macs_.back().get());
    }
    for (NodeId n = 0; n < scenario_.node_count; ++n) {
        routers_.push_back(std::make_unique<AodvRouter>(n, kernel_, *macs_[n], scenario_.aodv, ledger_));
        macs_[n]->set_upper(routers_.back().get());
    }

    if (options.cbr_traffic) {
        traffic_ = std::make_unique<CbrTraffic>(kernel_, std::move(sessions), [this](CbrSession& s) {
            DataPacket p;
            p.id = ledger_.create(s.source);
            p.source = s.source;
            p.destination = s.destination;
            p.seq = s.next_seq;
            p.created = kernel_.now();
            p.bytes = s.packet_bytes;
            routers_[s.source]->originate(std::move(p));
        });
        traffic_->start();
    }
    kernel_.schedule(scenario_.traffic.start, EventKind::MetricsWindowStart, [] {});
    kernel_.schedule(scenario_.sim_end, EventKind::SimEnd, [] {});
}

PacketId Simulation::send(NodeId source, NodeId destination, int bytes)
{
    DataPacket p;
    p.id = ledger_.create(source);
    p.source = source;
    p.destination = destination;
    p.created = kernel_.now();
    p.bytes = bytes;
    const PacketId id = p.id;
    routers_.at(source)->originate(std::move(p));
    return id;
}

std::uint64_t Simulation::count_in_flight() const
{
    std::uint64_t count = 0;
    for (NodeId n = 0; n < macs_.size(); ++n) {
        for (const auto& f : macs_[n]->queue()) {
            if (const auto* d = f.data(); d != nullptr && ledger_.holds(d->id, n)) {
                ++count;
            }
        }
        for (const auto& p : routers_[n]->buffer()) {
            if (ledger_.holds(p.id, n)) {
                ++count;
            }
        }
    }
    return count;
}

std::vector<CbrSession> Simulation::sessions() const
{
    return traffic_ ? traffic_->sessions() : std::vector<CbrSession>{};
}

RoutingCounters Simulation::routing_totals() const
{
    RoutingCounters t;
    for (const auto& r : routers_) {
        const auto& c = r->counters();
        t.rreq_originated += c.rreq_originated;
        t.rreq_forwarded += c.rreq_forwarded;
        t.rreq_duplicates += c.rreq_duplicates;
        t.rrep_sent += c.rrep_sent;
        t.rrep_forwarded += c.rrep_forwarded;
        t.rrep_dropped += c.rrep_dropped;
        t.discoveries_started += c.discoveries_started;
        t.discoveries_failed += c.discoveries_failed;
        t.routes_invalidated += c.routes_invalidated;
        t.routes_expired += c.routes_expired;
        t.control_dropped += c.control_dropped;
        t.ttl_expired += c.ttl_expired;
    }
    return t;
}

MacCounters Simulation::mac_totals() const
{
    MacCounters t;
    for (const auto& m : macs_) {
        const auto& c = m->counters();
        t.enqueued += c.enqueued;
        t.dropped_queue += c.dropped_queue;
        t.dropped_mac += c.dropped_mac;
        t.delivered_up += c.delivered_up;
        t.attempts += c.attempts;
        t.successes += c.successes;
        t.ack_timeouts += c.ack_timeouts;
        t.broadcasts_sent += c.broadcasts_sent;
        t.acks_sent += c.acks_sent;
        t.acks_skipped += c.acks_skipped;
        t.duplicates += c.duplicates;
    }
    return t;
}

RunResult Simulation::run()
{
    if (finished_) {
        throw SimulationFault("Simulation::run called twice");
    }
    kernel_.run_until(scenario_.sim_end);
    finished_ = true;
    metrics_.in_flight_at_end = count_in_flight();
    return RunResult{metrics_, routing_totals(), mac_totals(), kernel_.dispatched(), kernel_.trace_digest()};
}

RunResult run_once(const Scenario& scenario, std::uint64_t seed)
{
    Simulation sim(scenario, seed);
    return sim.run();
}

}  // namespace manetsim
