#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "manetsim/phy_channel.hpp"

#include <memory>
#include <stdexcept>
#include <vector>

using namespace manetsim;

namespace {

struct Probe : ChannelClient {
    Kernel* kernel = nullptr;
    int busy = 0;
    int idle = 0;
    std::vector<SimTime> received_at;
    std::vector<Frame> received;
    int tx_ended = 0;

    void on_medium_busy() override { ++busy; }
    void on_medium_idle() override { ++idle; }
    void on_frame_received(const Frame& f) override
    {
        received.push_back(f);
        received_at.push_back(kernel->now());
    }
    void on_transmission_end(const Frame&) override { ++tx_ended; }
};

struct Medium {
    Kernel kernel{1};
    std::vector<Vec2> pos;
    Channel channel;
    std::vector<std::unique_ptr<Probe>> probes;
    std::vector<ReceptionOutcome> outcomes;

    explicit Medium(std::vector<Vec2> positions, RadioConfig cfg = {})
        : pos(std::move(positions)), channel(kernel, cfg, pos.size(), [this](NodeId n) { return pos[n]; })
    {
        for (NodeId n = 0; n < pos.size(); ++n) {
            probes.push_back(std::make_unique<Probe>());
            probes.back()->kernel = &kernel;
            channel.attach(n, probes.back().get());
        }
        channel.set_outcome_observer([this](const ReceptionOutcome& o) { outcomes.push_back(o); });
    }

    void send_at(SimTime t, NodeId from, NodeId to, int bytes = 540)
    {
        kernel.schedule(t, EventKind::TxStart, [this, from, to, bytes] {
            Frame f;
            f.kind = FrameKind::Data;
            f.src = from;
            f.dst = to;
            channel.begin_transmission(from, f, bytes);
        });
    }
};

}  // namespace

TEST_CASE("airtime")
{
    RadioConfig cfg;
    CHECK(airtime(540, cfg) == Duration{2352});
    CHECK(airtime(14, cfg) == Duration{248});
    CHECK(airtime(1, cfg) == Duration{196});
    CHECK_THROWS_AS(airtime(0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(airtime(-3, cfg), std::invalid_argument);
    cfg.data_rate_bps = 11'000'000;
    CHECK(airtime(540, cfg) == Duration{192 + 393});  // 4320/11 = 392.7 rounds up
}

TEST_CASE("in_range")
{
    CHECK(in_range({3, 4}, {3, 4}, 0.0));
    CHECK(in_range({0, 0}, {300, 400}, 500.0));
    CHECK_FALSE(in_range({0, 0}, {300, 400}, 499.0));
    CHECK(in_range({0, 0}, {250, 0}, 250.0));
    CHECK_FALSE(in_range({0, 0}, {250.001, 0}, 250.0));
    RandomSource rng(1);
    for (int i = 0; i < 1000; ++i) {
        const Vec2 a{rng.uniform_real(0, 500), rng.uniform_real(0, 500)};
        const Vec2 b{rng.uniform_real(0, 500), rng.uniform_real(0, 500)};
        const double r = rng.uniform_real(0, 400);
        REQUIRE(in_range(a, b, r) == in_range(b, a, r));
    }
}

TEST_CASE("lone sender reaches its neighbour at the end of the frame")
{
    Medium m({{0, 0}, {100, 0}, {600, 0}});
    m.send_at(SimTime{1000}, 0, 1);
    m.kernel.run_until(SimTime{10000});
    REQUIRE(m.probes[1]->received.size() == 1);
    CHECK(m.probes[1]->received_at[0] == SimTime{1000 + 2352});
    CHECK(m.probes[2]->received.empty());
    CHECK(m.probes[0]->tx_ended == 1);
    CHECK(m.probes[1]->busy == 1);
    CHECK(m.probes[1]->idle == 1);
    CHECK(m.probes[2]->busy == 0);
    CHECK(m.channel.stats(1).rx_delivered == 1);
    REQUIRE(m.outcomes.size() == 1);
    CHECK(m.outcomes[0].delivered);
}

TEST_CASE("overlapping senders collide at a common receiver")
{
    Medium m({{0, 0}, {100, 0}, {200, 0}});
    m.send_at(SimTime{0}, 0, 1);
    m.send_at(SimTime{500}, 2, 1);
    m.kernel.run_until(SimTime{10000});
    CHECK(m.probes[1]->received.empty());
    CHECK(m.channel.stats(1).rx_corrupted == 2);
    // each sender was transmitting when the other's frame was on air
    CHECK(m.channel.stats(0).rx_corrupted + m.channel.stats(2).rx_corrupted == 2);
}

TEST_CASE("hidden terminal: ends of a 0.9 * range line collide in the middle")
{
    RadioConfig cfg;
    const double d = 0.9 * cfg.tx_range;
    Medium m({{0, 0}, {d, 0}, {2 * d, 0}}, cfg);
    bool a_sensed_busy = true;
    bool c_sensed_busy = true;
    m.kernel.schedule(SimTime{100}, EventKind::TxStart, [&] {
        a_sensed_busy = m.channel.medium_busy(0, m.kernel.now());
    });
    m.send_at(SimTime{100}, 0, 1);
    m.kernel.schedule(SimTime{900}, EventKind::TxStart, [&] {
        c_sensed_busy = m.channel.medium_busy(2, m.kernel.now());
    });
    m.send_at(SimTime{900}, 2, 1);
    m.kernel.run_until(SimTime{10000});
    CHECK_FALSE(a_sensed_busy);
    CHECK_FALSE(c_sensed_busy);
    CHECK(m.channel.stats(1).rx_corrupted == 2);
    CHECK(m.probes[1]->received.empty());
    CHECK(m.probes[0]->busy == 0);
    CHECK(m.probes[2]->busy == 0);
}

TEST_CASE("back-to-back frames do not collide")
{
    Medium m({{0, 0}, {100, 0}, {200, 0}});
    m.send_at(SimTime{0}, 0, 1);
    m.send_at(SimTime{2352}, 2, 1);
    m.kernel.run_until(SimTime{10000});
    CHECK(m.probes[1]->received.size() == 2);
    CHECK(m.channel.stats(1).rx_corrupted == 0);
}

TEST_CASE("a transmitting node cannot receive")
{
    Medium m({{0, 0}, {100, 0}});
    m.send_at(SimTime{0}, 0, 1);
    m.send_at(SimTime{100}, 1, 0);
    m.kernel.run_until(SimTime{10000});
    CHECK(m.probes[0]->received.empty());
    CHECK(m.probes[1]->received.empty());
}

TEST_CASE("double transmission is a fault")
{
    Medium m({{0, 0}, {100, 0}});
    m.send_at(SimTime{0}, 0, 1);
    m.send_at(SimTime{10}, 0, 1);
    CHECK_THROWS_AS(m.kernel.run_until(SimTime{10000}), SimulationFault);
}

TEST_CASE("carrier sense")
{
    RadioConfig cfg;
    Medium m({{0, 0}, {cfg.tx_range, 0}, {cfg.tx_range + 1, 0}}, cfg);
    CHECK_FALSE(m.channel.medium_busy(1, SimTime{0}));
    std::vector<bool> seen;
    m.send_at(SimTime{0}, 0, 1);
    m.kernel.schedule(SimTime{0}, EventKind::SlotTick, [&] {
        seen.push_back(m.channel.medium_busy(0, m.kernel.now()));  // own transmission
        seen.push_back(m.channel.medium_busy(1, m.kernel.now()));  // starts now, not yet sensed
    });
    m.kernel.schedule(SimTime{1}, EventKind::SlotTick, [&] {
        seen.push_back(m.channel.medium_busy(1, m.kernel.now()));
        seen.push_back(m.channel.medium_busy(2, m.kernel.now()));  // just outside range
    });
    m.kernel.schedule(SimTime{2352}, EventKind::SlotTick, [&] {
        seen.push_back(m.channel.medium_busy(1, m.kernel.now()));  // ends now
    });
    m.kernel.run_until(SimTime{5000});
    CHECK(seen == std::vector<bool>{true, false, true, false, false});
}

TEST_CASE("sensing range multiplier reaches beyond reception range")
{
    RadioConfig cfg;
    cfg.carrier_sense_multiplier = 2.0;
    Medium m({{0, 0}, {400, 0}}, cfg);
    m.send_at(SimTime{0}, 0, 1);
    m.kernel.run_until(SimTime{5000});
    CHECK(m.probes[1]->busy == 1);
    CHECK(m.probes[1]->received.empty());
    CHECK(m.channel.stats(1).rx_corrupted == 0);
}

TEST_CASE("positions are sampled at transmission start")
{
    Medium m({{0, 0}, {100, 0}});
    m.send_at(SimTime{0}, 0, 1);
    m.kernel.schedule(SimTime{10}, EventKind::WaypointArrival, [&] { m.pos[1] = {5000, 0}; });
    m.kernel.run_until(SimTime{5000});
    CHECK(m.probes[1]->received.size() == 1);
}

TEST_CASE("every in-range receiver gets exactly one outcome per frame")
{
    RandomSource rng(8);
    std::vector<Vec2> pos;
    for (int i = 0; i < 12; ++i) {
        pos.push_back({rng.uniform_real(0, 600), rng.uniform_real(0, 600)});
    }
    Medium m(pos);
    std::vector<std::pair<NodeId, SimTime>> sends;
    for (NodeId n = 0; n < 12; ++n) {
        for (int k = 0; k < 5; ++k) {
            sends.emplace_back(n, SimTime{static_cast<std::int64_t>(n) * 40000 + k * 5000 +
                                          rng.uniform_int(0, 3000)});
        }
    }
    std::size_t expected = 0;
    for (auto [n, t] : sends) {
        for (NodeId r = 0; r < 12; ++r) {
            if (r != n && in_range(pos[n], pos[r], 250.0)) {
                ++expected;
            }
        }
        m.send_at(t, n, kBroadcast);
    }
    m.kernel.run_until(SimTime{1'000'000});
    CHECK(m.outcomes.size() == expected);
    std::uint64_t delivered = 0;
    std::uint64_t corrupted = 0;
    for (NodeId n = 0; n < 12; ++n) {
        delivered += m.channel.stats(n).rx_delivered;
        corrupted += m.channel.stats(n).rx_corrupted;
    }
    CHECK(delivered + corrupted == expected);
}
