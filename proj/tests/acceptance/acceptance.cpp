// Acceptance checks. One line per criterion: "<id> PASS|FAIL <detail>".
// Exit status is nonzero when any criterion fails.

#include "backoff_oracle.hpp"
#include "testbed.hpp"

#include "manetsim/micro.hpp"
#include "manetsim/report.hpp"
#include "manetsim/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>

using namespace testbed;

namespace {

int failures = 0;
std::map<int, std::string> lines;  // by criterion number

void verdict(const char* id, bool pass, const std::string& detail)
{
    lines[std::atoi(id + 1)] = std::string(id) + (pass ? " PASS " : " FAIL ") + detail;
    failures += pass ? 0 : 1;
}

std::string policy_name(BackoffPolicy p)
{
    return std::string(to_string(p));
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// ---------------------------------------------------------------- A1

void a1_backoff_sequences()
{
    using V = std::vector<int>;
    const std::map<BackoffPolicy, V> collisions_from_32{
        {BackoffPolicy::BEB, {64, 128, 256, 512, 1024, 1024}},
        {BackoffPolicy::EIED, {64, 128, 256, 512, 1024, 1024}},
        {BackoffPolicy::DIDD, {64, 128, 256, 512, 1024, 1024}},
        {BackoffPolicy::ModifiedBEB, {48, 72, 108, 162, 243, 365, 548, 822, 1024, 1024}},
        {BackoffPolicy::MILD, {48, 72, 108, 162, 243, 365, 548, 822, 1024, 1024}},
        {BackoffPolicy::Log, {37, 43, 49, 55, 61, 67, 74, 81}},
    };
    std::size_t checked = 0;
    std::string mismatch;
    auto expect = [&](BackoffPolicy p, const char* what, int got, int want) {
        ++checked;
        if (got != want && mismatch.empty()) {
            mismatch = policy_name(p) + " " + what + ": got " + std::to_string(got) + " want " + std::to_string(want);
        }
    };

    for (const auto& [p, seq] : collisions_from_32) {
        auto s = ContentionState::initial(p, {});
        for (int want : seq) {
            s = on_collision(s);
            expect(p, "collision", s.cw, want);
        }
    }
    // success sequences
    {
        ContentionState s{BackoffPolicy::MILD, 48, {}};
        for (int want : {47, 46, 45, 44, 43}) {
            s = on_success(s);
            expect(s.policy, "success", s.cw, want);
        }
        s = ContentionState{BackoffPolicy::DIDD, 1024, {}};
        for (int want : {512, 256, 128, 64, 32, 32}) {
            s = on_success(s);
            expect(s.policy, "success", s.cw, want);
        }
        s = ContentionState{BackoffPolicy::EIED, 1024, {}};
        for (int want : {939, 861, 790, 724, 664, 609, 558, 512}) {
            s = on_success(s);
            expect(s.policy, "success", s.cw, want);
        }
        for (auto p : {BackoffPolicy::BEB, BackoffPolicy::ModifiedBEB, BackoffPolicy::Log}) {
            for (int cw : {32, 33, 100, 1024}) {
                expect(p, "reset", on_success(ContentionState{p, cw, {}}).cw, 32);
            }
        }
    }
    // scripted mixed patterns against the integer oracle
    const std::vector<std::string> scripts{"CCCSCCSSSC", "SSSSCCCCCCCCCCS", "CSCSCSCSCS", "CCCCCCCCCCCCSSSSSSSSSSSS",
                                           "CCSCCSCCSCCSCCS"};
    for (auto p : kAllPolicies) {
        for (const auto& script : scripts) {
            auto s = ContentionState::initial(p, {});
            int o = 32;
            for (char c : script) {
                s = c == 'C' ? on_collision(s) : on_success(s);
                o = c == 'C' ? oracle::grow(p, o) : oracle::shrink(p, o);
                expect(p, "script", s.cw, o);
            }
        }
        for (int cw = 32; cw <= 1024; ++cw) {
            expect(p, "grow", on_collision(ContentionState{p, cw, {}}).cw, oracle::grow(p, cw));
            expect(p, "shrink", on_success(ContentionState{p, cw, {}}).cw, oracle::shrink(p, cw));
        }
    }
    verdict("A1", mismatch.empty(),
            mismatch.empty() ? std::to_string(checked) + " window updates match the closed form" : mismatch);
}

// ---------------------------------------------------------------- A2

void a2_cross_simulator()
{
    bool pass = true;
    std::ostringstream detail;
    for (auto p : kAllPolicies) {
        StaticNet net({{0, 0}, {100, 0}}, 7, p);
        SaturatedSender a(net.mac(0), 1);
        SaturatedSender b(net.mac(1), 0);
        net.kernel.run_until(seconds_to_time(400));
        const auto c0 = net.mac(0).counters();
        const auto c1 = net.mac(1).counters();
        const std::uint64_t successes = c0.successes + c1.successes;
        // a collision costs each of the two stations one ACK timeout
        const std::uint64_t collisions = (c0.ack_timeouts + c1.ack_timeouts) / 2;
        const std::uint64_t cycles = successes + collisions;

        MicroConfig mc;
        mc.policy = p;
        mc.seed = 7;
        mc.horizon_slots = std::numeric_limits<std::uint64_t>::max();
        mc.max_cycles = cycles;
        const auto r = run_micro(mc);
        const double rel = std::abs(static_cast<double>(successes) - static_cast<double>(r.total_successes())) /
                           static_cast<double>(r.total_successes());
        const bool ok = cycles >= 100000 && rel <= 0.02;
        pass = pass && ok;
        detail << policy_name(p) << " cycles=" << cycles << " rel=" << fmt("%.4f", rel) << (ok ? "" : "(!)") << " ";
    }
    verdict("A2", pass, detail.str());
}

// ---------------------------------------------------------------- desk grids (A3, A5, A6, A7)

Scenario desk_base()
{
    Scenario s;
    s.node_count = 20;
    s.terrain = {500, 500};
    s.sdp_count = 10;
    s.sim_end = seconds_to_time(600);
    s.traffic.start = seconds_to_time(200);
    s.traffic.end = seconds_to_time(600);
    s.radio.tx_range = 200;
    s.avg_speed = 10;
    s.seeds = {1, 2, 3};
    return s;
}

std::map<std::pair<BackoffPolicy, double>, double> pdr_by_point(const SweepResult& r)
{
    std::map<std::pair<BackoffPolicy, double>, double> out;
    for (const auto& row : r.aggregate) {
        out[{row.algorithm, row.axis_value}] = row.pdr;
    }
    return out;
}

struct LedgerTally {
    std::size_t runs = 0;
    std::size_t open = 0;
    void add(const SweepResult& r)
    {
        for (const auto& run : r.runs) {
            ++runs;
            const auto& m = run.result.metrics;
            const auto sum = m.total_received() + m.dropped_queue + m.dropped_mac + m.dropped_no_route +
                             m.in_flight_at_end;
            open += sum == m.total_generated() ? 0 : 1;
        }
    }
};

void a5_a6_a7(LedgerTally& tally)
{
    const Scenario base = desk_base();

    SweepSpec speed;
    speed.axis = SweepAxis::Speed;
    speed.values = {5, 30};
    const auto by_speed = run_sweep(speed, base);
    tally.add(by_speed);
    const auto sp = pdr_by_point(by_speed);
    {
        bool pass = true;
        std::ostringstream d;
        for (auto p : kAllPolicies) {
            const double lo = sp.at({p, 5});
            const double hi = sp.at({p, 30});
            const bool ok = hi < lo;
            pass = pass && ok;
            d << policy_name(p) << " " << fmt("%.4f", lo) << "->" << fmt("%.4f", hi) << (ok ? "" : "(!)") << " ";
        }
        verdict("A5", pass, d.str());
    }
    {
        const double mbeb = sp.at({BackoffPolicy::ModifiedBEB, 30});
        const double mild = sp.at({BackoffPolicy::MILD, 30});
        verdict("A7", mbeb >= mild,
                "pdr mbeb=" + fmt("%.4f", mbeb) + " mild=" + fmt("%.4f", mild) + " gap=" +
                    fmt("%+.1f%%", 100.0 * (mbeb - mild) / mild));
    }

    SweepSpec range;
    range.axis = SweepAxis::Range;
    range.values = {100, 250};
    const auto by_range = run_sweep(range, base);
    tally.add(by_range);
    const auto rp = pdr_by_point(by_range);
    bool pass = true;
    std::ostringstream d;
    for (auto p : kAllPolicies) {
        const double lo = rp.at({p, 100});
        const double hi = rp.at({p, 250});
        const bool ok = hi > lo;
        pass = pass && ok;
        d << policy_name(p) << " " << fmt("%.4f", lo) << "->" << fmt("%.4f", hi) << (ok ? "" : "(!)") << " ";
    }
    verdict("A6", pass, d.str());
}

void a3_ledger(LedgerTally& tally)
{
    // default scenario: the traffic window covers 800 s
    Scenario full;
    full.seeds = {1};
    SweepSpec spec;
    spec.values = {full.avg_speed};
    const auto r = run_sweep(spec, full);
    tally.add(r);
    std::size_t wrong_count = 0;
    for (const auto& run : r.runs) {
        wrong_count += run.result.metrics.total_generated() == full.sdp_count * 3200 ? 0 : 1;
    }
    verdict("A3", tally.open == 0 && wrong_count == 0,
            std::to_string(tally.runs) + " runs, " + std::to_string(tally.open) + " open ledgers; " +
                std::to_string(r.runs.size()) + " full-window runs, " + std::to_string(wrong_count) +
                " with generated != " + std::to_string(full.sdp_count * 3200));
}

// ---------------------------------------------------------------- A4

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// raw.csv digest of the reference sweep below; changes only when model behavior changes
constexpr std::uint64_t kFrozenRawDigest = 0xcad2d1ffc25a6faaull;

void a4_determinism()
{
    Scenario base = desk_base();
    base.sim_end = seconds_to_time(120);
    base.traffic.start = seconds_to_time(40);
    base.traffic.end = seconds_to_time(120);
    base.seeds = {1, 2};
    SweepSpec spec;
    spec.values = {5, 30};
    const auto first = format_raw_csv(run_sweep(spec, base, Execution::Serial).runs);
    const auto second = format_raw_csv(run_sweep(spec, base, Execution::Serial).runs);
    const auto parallel = format_raw_csv(run_sweep(spec, base, Execution::Parallel, 2).runs);
    const auto digest = fnv1a(first);
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(digest));
    verdict("A4", first == second && first == parallel && digest == kFrozenRawDigest,
            std::string("repeat ") + (first == second ? "identical" : "DIFFERS") + ", parallel " +
                (first == parallel ? "identical" : "DIFFERS") + ", raw.csv digest " + hex +
                (digest == kFrozenRawDigest ? " (frozen)" : " (frozen value differs)"));
}

// ---------------------------------------------------------------- A8

void a8_hidden_terminal()
{
    RadioConfig radio;
    const double d = 0.9 * radio.tx_range;
    StaticNet net({{0, 0}, {d, 0}, {2 * d, 0}}, 5, BackoffPolicy::BEB, radio);
    std::vector<TxAttempt> attempts;
    for (NodeId n : {NodeId{0}, NodeId{2}}) {
        net.mac(n).set_attempt_observer([&](const TxAttempt& a) { attempts.push_back(a); });
    }
    SaturatedSender a(net.mac(0), 1);
    SaturatedSender c(net.mac(2), 1);
    Recorder middle;
    net.mac(1).set_upper(&middle);
    net.kernel.run_until(seconds_to_time(5));

    // transmissions that started while the other end was already on the air
    const Duration air = airtime(512 + 28, radio);
    std::uint64_t started_over = 0;
    for (const auto& x : attempts) {
        for (const auto& y : attempts) {
            if (x.node != y.node && y.at < x.at && x.at < y.at + air) {
                ++started_over;
            }
        }
    }
    const auto corrupted = net.channel.stats(1).rx_corrupted;
    const bool ends_hidden = !in_range({0, 0}, {2 * d, 0}, radio.tx_range);
    verdict("A8", ends_hidden && corrupted > 0 && started_over > 0,
            "corrupted at middle=" + std::to_string(corrupted) + ", attempts started during the other's frame=" +
                std::to_string(started_over) + ", ends hear each other=" + (ends_hidden ? "no" : "yes"));
}

// ---------------------------------------------------------------- A9

void a9_latency()
{
    bool pass = true;
    std::ostringstream d;
    for (int k : {0, 1, 2, 7, 15, 31}) {
        StaticNet net({{0, 0}, {100, 0}}, 1);
        Recorder tx;
        Recorder rx;
        tx.kernel = rx.kernel = &net.kernel;
        net.mac(0).set_upper(&tx);
        net.mac(1).set_upper(&rx);
        net.mac(0).set_backoff_override([k](const ContentionState&) { return k; });
        const SimTime t0{5000};
        net.kernel.schedule(t0, EventKind::CbrEmit, [&] { net.mac(0).enqueue(data_frame(1)); });
        net.kernel.run_until(SimTime{1'000'000});
        const bool ok = rx.received_at.size() == 1 && tx.sent_at.size() == 1 &&
                        rx.received_at[0] - t0 == Duration{50 + 20 * k + 2352} &&
                        tx.sent_at[0] - rx.received_at[0] == Duration{10 + 248};
        pass = pass && ok;
        d << "k=" << k << (ok ? " ok " : " MISMATCH ");
    }
    verdict("A9", pass, d.str());
}

// ---------------------------------------------------------------- A10

ReportRow row(BackoffPolicy p, double pdr_value, double delay)
{
    ReportRow r;
    r.algorithm = p;
    r.axis = SweepAxis::Speed;
    r.axis_value = 20;
    r.sdps = 25;
    r.pdr = pdr_value;
    r.avg_delay_us = delay;
    return r;
}

void a10_summary()
{
    const std::vector<ReportRow> table{
        row(BackoffPolicy::BEB, 0.71, 31000), row(BackoffPolicy::ModifiedBEB, 0.82, 21000),
        row(BackoffPolicy::MILD, 0.66, 47000), row(BackoffPolicy::EIED, 0.74, 28000),
        row(BackoffPolicy::DIDD, 0.73, 29500), row(BackoffPolicy::Log, 0.70, 34000),
    };
    bool pattern = true;
    for (const auto& e : summarize_best_worst(table)) {
        for (auto p : kAllPolicies) {
            pattern = pattern && e.is_best(p) == (p == BackoffPolicy::ModifiedBEB) &&
                      e.is_worst(p) == (p == BackoffPolicy::MILD);
        }
    }
    // 0.8% and 1.5% away from the best and worst
    const std::vector<ReportRow> ties{
        row(BackoffPolicy::BEB, 0.800, 20000), row(BackoffPolicy::EIED, 0.7936, 20160),
        row(BackoffPolicy::DIDD, 0.788, 20300), row(BackoffPolicy::MILD, 0.600, 40000),
        row(BackoffPolicy::Log, 0.6048, 39680), row(BackoffPolicy::ModifiedBEB, 0.609, 39400),
    };
    bool tie_rule = true;
    for (const auto& e : summarize_best_worst(ties)) {
        tie_rule = tie_rule && e.is_best(BackoffPolicy::BEB) && e.is_best(BackoffPolicy::EIED) &&
                   !e.is_best(BackoffPolicy::DIDD) && e.is_worst(BackoffPolicy::MILD) &&
                   e.is_worst(BackoffPolicy::Log) && !e.is_worst(BackoffPolicy::ModifiedBEB);
    }
    verdict("A10", pattern && tie_rule,
            std::string("reference pattern ") + (pattern ? "reproduced" : "WRONG") + ", 1% co-marking " +
                (tie_rule ? "holds" : "WRONG"));
}

}  // namespace

int main()
{
    const auto start = std::chrono::steady_clock::now();
    LedgerTally tally;
    a1_backoff_sequences();
    a2_cross_simulator();
    a5_a6_a7(tally);
    a3_ledger(tally);
    a4_determinism();
    a8_hidden_terminal();
    a9_latency();
    a10_summary();
    for (const auto& [n, line] : lines) {
        std::printf("%s\n", line.c_str());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d criteria failed (%.0f s)\n", failures, secs);
    return failures == 0 ? 0 : 1;
}
