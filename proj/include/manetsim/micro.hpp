#pragma once

#include "manetsim/backoff.hpp"

#include <cstdint>
#include <vector>

namespace manetsim {

/// Slot-synchronous contention model for a few saturated stations that all
/// hear each other. Every slot is idle, a success or a collision; busy slots
/// stand for a whole frame exchange.
struct MicroConfig {
    int station_count = 2;             // 1..3 (1 is a degenerate test case)
    BackoffPolicy policy = BackoffPolicy::BEB;
    BackoffParams params{};
    std::uint64_t horizon_slots = 1'000'000;
    std::uint64_t max_cycles = 0;      // stop after this many busy slots; 0 = no limit
    std::uint64_t seed = 1;
    bool record_trace = false;
};

struct CwSample {
    std::uint64_t slot;
    int station;
    int cw;
};

struct MicroResult {
    std::vector<std::uint64_t> successes;   // per station
    std::vector<std::uint64_t> collisions;  // per station, one per collided slot it took part in
    std::uint64_t idle_slots = 0;
    std::uint64_t success_slots = 0;
    std::uint64_t collision_slots = 0;
    std::vector<CwSample> cw_trace;         // filled when record_trace is set

    std::uint64_t slots() const { return idle_slots + success_slots + collision_slots; }
    std::uint64_t cycles() const { return success_slots + collision_slots; }
    std::uint64_t total_successes() const;
    double collision_fraction() const;      // collision slots / busy slots
};

/// Throws ConfigError for a station count outside 1..3 or invalid params.
MicroResult run_micro(const MicroConfig& cfg);

}  // namespace manetsim
