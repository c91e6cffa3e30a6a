#include "manetsim/metrics.hpp"

#include <numeric>

namespace manetsim {

RunMetrics::RunMetrics(std::size_t node_count, std::uint64_t run_seed)
    : seed(run_seed),
      generated(node_count, 0),
      received(node_count, 0),
      delay_sum_us(node_count, 0),
      delay_count(node_count, 0)
{
}

std::uint64_t RunMetrics::total_generated() const
{
    return std::accumulate(generated.begin(), generated.end(), std::uint64_t{0});
}

std::uint64_t RunMetrics::total_received() const
{
    return std::accumulate(received.begin(), received.end(), std::uint64_t{0});
}

bool RunMetrics::ledger_closes() const
{
    return total_generated() == total_received() + total_dropped() + in_flight_at_end;
}

std::optional<double> RunMetrics::mean_destination_delay_us() const
{
    double sum = 0.0;
    std::size_t destinations = 0;
    for (std::size_t d = 0; d < delay_count.size(); ++d) {
        if (delay_count[d] == 0) {
            continue;
        }
        sum += static_cast<double>(delay_sum_us[d]) / static_cast<double>(delay_count[d]);
        ++destinations;
    }
    if (destinations == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(destinations);
}

double pdr(std::span<const RunMetrics> runs)
{
    std::uint64_t received = 0;
    std::uint64_t generated = 0;
    for (const auto& r : runs) {
        received += r.total_received();
        generated += r.total_generated();
    }
    if (generated == 0) {
        throw MetricsError("packet delivery ratio undefined: no packets generated");
    }
    return static_cast<double>(received) / static_cast<double>(generated);
}

std::optional<double> avg_end_to_end_delay(std::span<const RunMetrics> runs)
{
    double sum = 0.0;
    std::size_t m = 0;
    for (const auto& r : runs) {
        if (auto d = r.mean_destination_delay_us()) {
            sum += *d;
            ++m;
        }
    }
    if (m == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(m);
}

PacketId PacketLedger::create(NodeId source)
{
    ++metrics_.generated.at(source);
    holder_.push_back(source);
    ++live_;
    return holder_.size() - 1;
}

bool PacketLedger::hand_over(PacketId id, NodeId from, NodeId to)
{
    if (!holds(id, from)) {
        return false;
    }
    holder_[id] = to;
    return true;
}

void PacketLedger::delivered(PacketId id, NodeId destination, Duration delay)
{
    if (!holds(id, destination)) {
        return;
    }
    holder_[id] = kNoNode;
    --live_;
    ++metrics_.received.at(destination);
    metrics_.delay_sum_us.at(destination) += static_cast<std::uint64_t>(delay.count());
    ++metrics_.delay_count.at(destination);
}

bool PacketLedger::drop(PacketId id, NodeId at, DropReason reason)
{
    if (!holds(id, at)) {
        return false;
    }
    holder_[id] = kNoNode;
    --live_;
    switch (reason) {
    case DropReason::Queue: ++metrics_.dropped_queue; break;
    case DropReason::Mac: ++metrics_.dropped_mac; break;
    case DropReason::NoRoute: ++metrics_.dropped_no_route; break;
    }
    return true;
}

}  // namespace manetsim
