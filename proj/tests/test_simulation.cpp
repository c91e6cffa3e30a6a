#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "static_sim.hpp"

#include <limits>
#include <set>

using namespace testbed;

namespace {

Scenario small()
{
    Scenario s;
    s.node_count = 16;
    s.terrain = {500, 500};
    s.sdp_count = 5;
    s.sim_end = seconds_to_time(60);
    s.traffic.start = seconds_to_time(20);
    s.traffic.end = seconds_to_time(60);
    s.radio.tx_range = 200;
    return s;
}

}  // namespace

TEST_CASE("every generated packet is accounted for")
{
    for (auto policy : kAllPolicies) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            Scenario s = small();
            s.algorithm = policy;
            s.avg_speed = seed == 2 ? 30.0 : 5.0;
            Simulation sim(s, seed);
            const auto r = sim.run();
            CHECK(r.metrics.ledger_closes());
            CHECK(r.metrics.total_generated() == 5 * 160);
            CHECK(r.metrics.in_flight_at_end == sim.ledger().live());
            CHECK(r.metrics.total_received() > 0);
        }
    }
}

TEST_CASE("clock ends at the scenario end")
{
    Scenario s = small();
    Simulation sim(s, 1);
    sim.run();
    CHECK(sim.kernel().now() == s.sim_end);
    CHECK_THROWS_AS(sim.run(), SimulationFault);
}

TEST_CASE("same seed, same run")
{
    const auto a = run_once(small(), 9);
    const auto b = run_once(small(), 9);
    CHECK(a.trace_digest == b.trace_digest);
    CHECK(a.events == b.events);
    CHECK(a.metrics.received == b.metrics.received);
    CHECK(a.metrics.delay_sum_us == b.metrics.delay_sum_us);
    const auto c = run_once(small(), 10);
    CHECK(a.trace_digest != c.trace_digest);
}

TEST_CASE("algorithms share mobility and sessions for a seed")
{
    Scenario s = small();
    s.algorithm = BackoffPolicy::BEB;
    Simulation a(s, 4);
    s.algorithm = BackoffPolicy::Log;
    Simulation b(s, 4);
    const auto sa = a.sessions();
    const auto sb = b.sessions();
    REQUIRE(sa.size() == sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i) {
        CHECK(sa[i].source == sb[i].source);
        CHECK(sa[i].destination == sb[i].destination);
    }
    for (NodeId n = 0; n < s.node_count; ++n) {
        CHECK(a.mobility().legs(n).front().to == b.mobility().legs(n).front().to);
    }
}

TEST_CASE("no delivery is faster than DIFS plus one DATA airtime")
{
    Scenario s = small();
    Simulation sim(s, 2);
    std::int64_t shortest = std::numeric_limits<std::int64_t>::max();
    std::uint64_t seen = 0;
    for (NodeId n = 0; n < s.node_count; ++n) {
        sim.router(n).set_delivery_observer([&](const DataPacket& p) {
            shortest = std::min(shortest, (sim.kernel().now() - p.created).count());
            ++seen;
        });
    }
    const auto r = sim.run();
    CHECK(seen == r.metrics.total_received());
    CHECK(shortest >= 2402);
}

TEST_CASE("one hop on an idle channel with a known route takes 2402 us")
{
    auto sim = static_sim({{0, 0}, {100, 0}}, 2.0);
    sim->mac(0).set_backoff_override([](const ContentionState&) { return 0; });
    sim->kernel().schedule(SimTime{0}, EventKind::CbrEmit, [&] { sim->router(0).install_route(1, 1, 1); });
    sim->kernel().schedule(seconds_to_time(1), EventKind::CbrEmit, [&] { sim->send(0, 1); });
    const auto r = sim->run();
    REQUIRE(r.metrics.received[1] == 1);
    CHECK(r.metrics.delay_sum_us[1] == 2402);
}

TEST_CASE("traffic generated only in the window")
{
    Scenario s = small();
    Simulation sim(s, 3);
    sim.kernel().run_until(seconds_to_time(20) - Duration{1});
    CHECK(sim.metrics().total_generated() == 0);
    sim.kernel().run_until(seconds_to_time(20));
    CHECK(sim.metrics().total_generated() == 5);
}

TEST_CASE("pairs are disjoint across the run")
{
    Scenario s = small();
    s.sdp_count = 8;
    Simulation sim(s, 1);
    std::set<NodeId> ends;
    for (const auto& c : sim.sessions()) {
        ends.insert(c.source);
        ends.insert(c.destination);
    }
    CHECK(ends.size() == 16);
}
