#pragma once

#include "manetsim/backoff.hpp"
#include "manetsim/packet.hpp"
#include "manetsim/phy_channel.hpp"
#include "manetsim/sim_kernel.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace manetsim {

/// 802.11 DSSS timing and MAC constants.
struct MacTiming {
    Duration slot{20};
    Duration sifs{10};
    Duration difs{50};
    int retry_limit = 7;
    int mac_overhead_bytes = 28;  // header + FCS on DATA/broadcast frames
    int ack_bytes = 14;
    std::size_t queue_capacity = 50;

    /// sifs + ACK airtime + one slot of guard.
    Duration ack_timeout(const RadioConfig& radio) const
    {
        return sifs + airtime(ack_bytes, radio) + slot;
    }

    std::string_view violation() const;
};

enum class MacPhase { Idle, WaitDifs, Backoff, Transmitting, WaitAck };

std::string_view to_string(MacPhase phase);

/// Interface the MAC uses to talk to the layer above it.
class MacUpper {
public:
    virtual ~MacUpper() = default;
    /// Intact, non-duplicate DATA addressed to this node, or any broadcast.
    virtual void on_mac_receive(const Frame& frame) = 0;
    /// Unicast frame acknowledged, or broadcast frame sent.
    virtual void on_mac_tx_success(const Frame& frame) = 0;
    /// Unicast frame dropped after retry_limit retransmissions.
    virtual void on_mac_tx_failed(const Frame& frame) = 0;
};

struct MacCounters {
    std::uint64_t enqueued = 0;
    std::uint64_t dropped_queue = 0;
    std::uint64_t dropped_mac = 0;
    std::uint64_t delivered_up = 0;
    std::uint64_t attempts = 0;
    std::uint64_t successes = 0;
    std::uint64_t ack_timeouts = 0;
    std::uint64_t broadcasts_sent = 0;
    std::uint64_t acks_sent = 0;
    std::uint64_t acks_skipped = 0;  // due while already on air
    std::uint64_t duplicates = 0;
};

/// One channel access by a node: which frame, which try, and the window it drew from.
struct TxAttempt {
    NodeId node = kNoNode;
    NodeId dst = kNoNode;
    FrameKind kind = FrameKind::Data;
    std::uint64_t seq = 0;
    int attempt = 1;  // 1-based
    int cw = 0;
    int backoff_slots = 0;
    SimTime at{0};
};

/// Per-node DCF state machine (basic access, no RTS/CTS).
///
/// Contention: wait until the medium has been idle for DIFS, then count the
/// drawn backoff down one slot per idle slot. A busy medium freezes the
/// counter at the number of whole slots still owed; counting resumes after the
/// next idle DIFS. Two nodes whose counters expire at the same instant both
/// transmit, since sensing cannot see a transmission that starts in the same
/// slot. ACKs go out SIFS after the DATA, ignoring carrier sense.
class DcfMac final : public ChannelClient {
public:
    using BackoffOverride = std::function<int(const ContentionState&)>;

    DcfMac(NodeId id, Kernel& kernel, Channel& channel, MacTiming timing, ContentionState contention);

    DcfMac(const DcfMac&) = delete;
    DcfMac& operator=(const DcfMac&) = delete;

    void set_upper(MacUpper* upper) { upper_ = upper; }

    /// Appends to the interface queue (drop-tail). Returns false on overflow.
    bool enqueue(Frame frame);

    /// Removes queued frames matching `pred`, except a head frame already in service.
    std::vector<Frame> extract_queued(const std::function<bool(const Frame&)>& pred);

    NodeId id() const noexcept { return id_; }
    MacPhase phase() const;
    const ContentionState& contention() const noexcept { return contention_; }
    const std::deque<Frame>& queue() const noexcept { return queue_; }
    const MacCounters& counters() const noexcept { return counters_; }
    const MacTiming& timing() const noexcept { return timing_; }

    void set_attempt_observer(std::function<void(const TxAttempt&)> fn) { attempt_observer_ = std::move(fn); }
    /// Replaces the random backoff draw (test hook).
    void set_backoff_override(BackoffOverride fn) { backoff_override_ = std::move(fn); }

    void on_medium_busy() override;
    void on_medium_idle() override;
    void on_frame_received(const Frame& frame) override;
    void on_transmission_end(const Frame& frame) override;

private:
    enum class State { Idle, Contending, Transmitting, WaitAck, Completing };

    int air_bytes(const Frame& frame) const;
    int draw() ;
    void start_service();
    void try_access();
    void freeze();
    void on_access();
    void on_ack_timeout();
    void send_ack(Frame ack);
    void finish_head(bool failed);
    void resume();

    NodeId id_;
    Kernel& kernel_;
    Channel& channel_;
    MacTiming timing_;
    ContentionState contention_;
    MacUpper* upper_ = nullptr;

    State state_ = State::Idle;
    std::deque<Frame> queue_;
    int backoff_slots_ = 0;
    SimTime idle_since_{0};
    SimTime countdown_start_{0};
    bool access_pending_ = false;
    SimTime access_at_{0};
    EventHandle access_event_{};
    EventHandle ack_timer_{};
    std::uint64_t next_seq_ = 0;
    std::unordered_map<NodeId, std::uint64_t> last_rx_seq_;
    MacCounters counters_;
    std::function<void(const TxAttempt&)> attempt_observer_;
    BackoffOverride backoff_override_;
};

}  // namespace manetsim
