#pragma once

#include "manetsim/random_source.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace manetsim {

/// Simulated time and durations, integer microseconds. 0 is run start.
using SimTime = std::chrono::microseconds;
using Duration = std::chrono::microseconds;

inline constexpr SimTime seconds_to_time(double s)
{
    // round-half-up keeps e.g. 0.25 s -> 250000 us exact
    return SimTime{static_cast<std::int64_t>(s * 1e6 + 0.5)};
}

inline constexpr double to_seconds(SimTime t)
{
    return static_cast<double>(t.count()) * 1e-6;
}

enum class EventKind : std::uint8_t {
    TxStart,
    TxEnd,
    SlotTick,
    DifsExpired,
    AckTimeout,
    WaypointArrival,
    CbrEmit,
    RouteTimeout,
    RreqRetry,
    MetricsWindowStart,
    SimEnd,
};

std::string_view to_string(EventKind kind);

/// Raised when the simulator itself is inconsistent (e.g. scheduling into the
/// past). A run that hits one is aborted.
class SimulationFault : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct EventHandle {
    std::uint64_t sequence = 0;
    bool valid() const noexcept { return sequence != 0; }
};

/// Discrete-event engine: time-ordered queue, clock and the run's random source.
///
/// Events with equal fire time are dispatched in ascending insertion sequence.
/// The kernel also folds every dispatched (time, kind, sequence) triple into a
/// running FNV-1a digest so two runs can be compared for trace identity.
class Kernel {
public:
    explicit Kernel(std::uint64_t seed);

    Kernel(const Kernel&) = delete;
    Kernel& operator=(const Kernel&) = delete;

    SimTime now() const noexcept { return now_; }
    RandomSource& rng() noexcept { return rng_; }

    EventHandle schedule(SimTime fire_at, EventKind kind, std::function<void()> action);
    EventHandle schedule_in(Duration delay, EventKind kind, std::function<void()> action)
    {
        return schedule(now_ + delay, kind, std::move(action));
    }

    /// Returns false when the handle already fired, was cancelled or is unknown.
    bool cancel(EventHandle handle);

    /// Dispatches every event with fire time <= end, then sets the clock to end.
    std::uint64_t run_until(SimTime end);

    std::size_t pending() const noexcept { return heap_.size() - cancelled_.size(); }
    std::uint64_t dispatched() const noexcept { return dispatched_; }
    std::uint64_t trace_digest() const noexcept { return digest_; }

private:
    struct Entry {
        SimTime fire_at;
        std::uint64_t sequence;
        EventKind kind;
        std::function<void()> action;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const noexcept
        {
            if (a.fire_at != b.fire_at) {
                return a.fire_at > b.fire_at;
            }
            return a.sequence > b.sequence;
        }
    };

    void fold_into_digest(const Entry& e) noexcept;

    SimTime now_{0};
    std::uint64_t next_sequence_ = 1;
    std::uint64_t dispatched_ = 0;
    std::uint64_t digest_ = 0xcbf29ce484222325ULL;
    std::vector<Entry> heap_;
    std::unordered_set<std::uint64_t> live_;
    std::unordered_set<std::uint64_t> cancelled_;
    RandomSource rng_;
};

}  // namespace manetsim
