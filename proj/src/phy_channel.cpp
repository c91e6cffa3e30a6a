#include "manetsim/phy_channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace manetsim {

double distance(Vec2 a, Vec2 b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::string_view RadioConfig::violation() const
{
    if (!(tx_range > 0.0)) return "tx_range must be > 0";
    if (!(carrier_sense_multiplier >= 1.0)) return "carrier_sense_multiplier must be >= 1";
    if (data_rate_bps <= 0) return "data_rate_bps must be > 0";
    if (phy_overhead.count() < 0) return "phy_overhead_us must be >= 0";
    return {};
}

Duration airtime(int frame_bytes, const RadioConfig& cfg)
{
    if (frame_bytes <= 0) {
        throw std::invalid_argument("airtime: frame size must be positive");
    }
    const std::int64_t bits_us = static_cast<std::int64_t>(frame_bytes) * 8 * 1'000'000;
    const std::int64_t payload_us = (bits_us + cfg.data_rate_bps - 1) / cfg.data_rate_bps;
    return cfg.phy_overhead + Duration{payload_us};
}

bool in_range(Vec2 a, Vec2 b, double r)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy <= r * r;
}

Channel::Channel(Kernel& kernel, RadioConfig cfg, std::size_t node_count, PositionFn position)
    : kernel_(kernel),
      cfg_(cfg),
      position_(std::move(position)),
      clients_(node_count, nullptr),
      transmitting_(node_count, 0),
      audible_(node_count, 0),
      receiving_(node_count),
      stats_(node_count)
{
}

void Channel::attach(NodeId node, ChannelClient* client)
{
    clients_.at(node) = client;
}

bool Channel::medium_busy(NodeId node, SimTime t) const
{
    if (transmitting_.at(node)) {
        return true;
    }
    for (const auto& [id, tx] : active_) {
        if (tx.start < t && tx.end > t &&
            std::find(tx.sensed_by.begin(), tx.sensed_by.end(), node) != tx.sensed_by.end()) {
            return true;
        }
    }
    return false;
}

void Channel::corrupt(TxId id, NodeId receiver)
{
    auto& tx = active_.at(id);
    for (std::size_t i = 0; i < tx.receivers.size(); ++i) {
        if (tx.receivers[i] == receiver) {
            tx.corrupted[i] = 1;
            return;
        }
    }
}

TxId Channel::begin_transmission(NodeId sender, Frame frame, int air_bytes)
{
    const SimTime now = kernel_.now();
    if (transmitting_.at(sender)) {
        throw SimulationFault("node " + std::to_string(sender) + " started a transmission while on air");
    }

    auto& st = stats_[sender];
    ++st.tx_started;
    if (frame.kind != FrameKind::Ack && medium_busy(sender, now)) {
        ++st.tx_started_while_busy;
    }

    const TxId id = next_id_++;
    Transmission tx{sender, std::move(frame), now, now + airtime(air_bytes, cfg_), position_(sender), {}, {}, {}};

    // half-duplex: anything this node was receiving is lost
    for (TxId other : receiving_[sender]) {
        if (active_.at(other).end > now) {
            corrupt(other, sender);
        }
    }
    transmitting_[sender] = 1;

    const double cs_range = cfg_.carrier_sense_range();
    for (NodeId n = 0; n < clients_.size(); ++n) {
        if (n == sender) {
            continue;
        }
        const Vec2 pos = position_(n);
        if (in_range(tx.origin, pos, cfg_.tx_range)) {
            char bad = transmitting_[n];
            for (TxId other : receiving_[n]) {
                if (active_.at(other).end > now) {
                    corrupt(other, n);
                    bad = 1;
                }
            }
            tx.receivers.push_back(n);
            tx.corrupted.push_back(bad);
            receiving_[n].push_back(id);
        }
        if (in_range(tx.origin, pos, cs_range)) {
            tx.sensed_by.push_back(n);
        }
    }

    const std::vector<NodeId> sensed = tx.sensed_by;
    const SimTime end = tx.end;
    active_.emplace(id, std::move(tx));

    for (NodeId n : sensed) {
        if (++audible_[n] == 1 && clients_[n] != nullptr) {
            clients_[n]->on_medium_busy();
        }
    }
    kernel_.schedule(end, EventKind::TxEnd, [this, id] { end_transmission(id); });
    return id;
}

void Channel::end_transmission(TxId id)
{
    auto node = active_.extract(id);
    Transmission& tx = node.mapped();
    const SimTime now = kernel_.now();

    transmitting_[tx.sender] = 0;
    if (clients_[tx.sender] != nullptr) {
        clients_[tx.sender]->on_transmission_end(tx.frame);
    }

    for (std::size_t i = 0; i < tx.receivers.size(); ++i) {
        const NodeId r = tx.receivers[i];
        auto& rx = receiving_[r];
        rx.erase(std::remove(rx.begin(), rx.end(), id), rx.end());
        const bool delivered = tx.corrupted[i] == 0;
        if (delivered) {
            ++stats_[r].rx_delivered;
        } else {
            ++stats_[r].rx_corrupted;
        }
        if (observer_) {
            observer_(ReceptionOutcome{id, tx.sender, r, tx.frame.kind, delivered, now});
        }
        if (delivered && clients_[r] != nullptr) {
            clients_[r]->on_frame_received(tx.frame);
        }
    }

    for (NodeId n : tx.sensed_by) {
        if (--audible_[n] == 0 && clients_[n] != nullptr) {
            clients_[n]->on_medium_idle();
        }
    }
}

}  // namespace manetsim
