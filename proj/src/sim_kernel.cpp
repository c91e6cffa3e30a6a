#include "manetsim/sim_kernel.hpp"

#include <algorithm>
#include <string>

namespace manetsim {

std::string_view to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::TxStart: return "TxStart";
    case EventKind::TxEnd: return "TxEnd";
    case EventKind::SlotTick: return "SlotTick";
    case EventKind::DifsExpired: return "DifsExpired";
    case EventKind::AckTimeout: return "AckTimeout";
    case EventKind::WaypointArrival: return "WaypointArrival";
    case EventKind::CbrEmit: return "CbrEmit";
    case EventKind::RouteTimeout: return "RouteTimeout";
    case EventKind::RreqRetry: return "RreqRetry";
    case EventKind::MetricsWindowStart: return "MetricsWindowStart";
    case EventKind::SimEnd: return "SimEnd";
    }
    return "?";
}

Kernel::Kernel(std::uint64_t seed) : rng_(seed) {}

EventHandle Kernel::schedule(SimTime fire_at, EventKind kind, std::function<void()> action)
{
    if (fire_at < now_) {
        throw SimulationFault("event " + std::string(to_string(kind)) + " scheduled at " +
                              std::to_string(fire_at.count()) + " us, clock is " +
                              std::to_string(now_.count()) + " us");
    }
    const std::uint64_t seq = next_sequence_++;
    heap_.push_back(Entry{fire_at, seq, kind, std::move(action)});
    std::push_heap(heap_.begin(), heap_.end(), Later{});
    live_.insert(seq);
    return EventHandle{seq};
}

bool Kernel::cancel(EventHandle handle)
{
    if (!handle.valid() || live_.erase(handle.sequence) == 0) {
        return false;
    }
    cancelled_.insert(handle.sequence);
    return true;
}

void Kernel::fold_into_digest(const Entry& e) noexcept
{
    auto mix = [this](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            digest_ ^= (v >> (8 * i)) & 0xffU;
            digest_ *= 0x100000001b3ULL;
        }
    };
    mix(static_cast<std::uint64_t>(e.fire_at.count()));
    mix(static_cast<std::uint64_t>(e.kind));
    mix(e.sequence);
}

std::uint64_t Kernel::run_until(SimTime end)
{
    std::uint64_t count = 0;
    while (!heap_.empty() && heap_.front().fire_at <= end) {
        std::pop_heap(heap_.begin(), heap_.end(), Later{});
        Entry e = std::move(heap_.back());
        heap_.pop_back();
        if (cancelled_.erase(e.sequence) != 0) {
            continue;
        }
        live_.erase(e.sequence);
        now_ = e.fire_at;
        fold_into_digest(e);
        ++dispatched_;
        ++count;
        e.action();
    }
    if (end > now_) {
        now_ = end;
    }
    return count;
}

}  // namespace manetsim
