#include "manetsim/mac_dcf.hpp"

#include <algorithm>

namespace manetsim {

std::string_view MacTiming::violation() const
{
    if (slot.count() <= 0 || sifs.count() <= 0 || difs.count() <= 0) return "timing constants must be positive";
    if (difs != sifs + 2 * slot) return "difs must equal sifs + 2 * slot";
    if (retry_limit < 0) return "retry_limit must be >= 0";
    if (mac_overhead_bytes < 0) return "mac_overhead_bytes must be >= 0";
    if (ack_bytes <= 0) return "ack_bytes must be > 0";
    if (queue_capacity == 0) return "queue_capacity must be > 0";
    return {};
}

std::string_view to_string(MacPhase phase)
{
    switch (phase) {
    case MacPhase::Idle: return "Idle";
    case MacPhase::WaitDifs: return "WaitDifs";
    case MacPhase::Backoff: return "Backoff";
    case MacPhase::Transmitting: return "Transmitting";
    case MacPhase::WaitAck: return "WaitAck";
    }
    return "?";
}

DcfMac::DcfMac(NodeId id, Kernel& kernel, Channel& channel, MacTiming timing, ContentionState contention)
    : id_(id), kernel_(kernel), channel_(channel), timing_(timing), contention_(contention)
{
}

MacPhase DcfMac::phase() const
{
    switch (state_) {
    case State::Idle:
    case State::Completing:
        return MacPhase::Idle;
    case State::Transmitting:
        return MacPhase::Transmitting;
    case State::WaitAck:
        return MacPhase::WaitAck;
    case State::Contending:
        return access_pending_ && kernel_.now() >= countdown_start_ ? MacPhase::Backoff : MacPhase::WaitDifs;
    }
    return MacPhase::Idle;
}

int DcfMac::air_bytes(const Frame& frame) const
{
    if (frame.kind == FrameKind::Ack) {
        return timing_.ack_bytes;
    }
    return frame.payload_bytes + timing_.mac_overhead_bytes;
}

int DcfMac::draw()
{
    if (backoff_override_) {
        return backoff_override_(contention_);
    }
    return draw_backoff(contention_, kernel_.rng());
}

bool DcfMac::enqueue(Frame frame)
{
    if (queue_.size() >= timing_.queue_capacity) {
        ++counters_.dropped_queue;
        return false;
    }
    frame.src = id_;
    frame.seq = ++next_seq_;
    frame.retries = 0;
    frame.enqueue_time = kernel_.now();
    queue_.push_back(std::move(frame));
    ++counters_.enqueued;
    if (state_ == State::Idle) {
        start_service();
    }
    return true;
}

std::vector<Frame> DcfMac::extract_queued(const std::function<bool(const Frame&)>& pred)
{
    std::vector<Frame> out;
    const bool head_busy = state_ != State::Idle && state_ != State::Completing;
    auto first = queue_.begin();
    if (head_busy && first != queue_.end()) {
        ++first;
    }
    auto keep = first;
    for (auto it = first; it != queue_.end(); ++it) {
        if (pred(*it)) {
            out.push_back(std::move(*it));
        } else {
            if (keep != it) {
                *keep = std::move(*it);
            }
            ++keep;
        }
    }
    queue_.erase(keep, queue_.end());
    return out;
}

void DcfMac::start_service()
{
    state_ = State::Contending;
    backoff_slots_ = draw();
    try_access();
}

void DcfMac::try_access()
{
    if (channel_.transmitting(id_) || channel_.audible_count(id_) > 0) {
        return;  // resumes from on_medium_idle / own transmission end
    }
    const SimTime now = kernel_.now();
    countdown_start_ = std::max(now, idle_since_) + timing_.difs;
    access_at_ = countdown_start_ + backoff_slots_ * timing_.slot;
    access_pending_ = true;
    const auto kind = backoff_slots_ == 0 ? EventKind::DifsExpired : EventKind::SlotTick;
    access_event_ = kernel_.schedule(access_at_, kind, [this] { on_access(); });
}

void DcfMac::freeze()
{
    if (!access_pending_) {
        return;
    }
    const SimTime now = kernel_.now();
    if (access_at_ == now) {
        return;  // counter already expired in this slot
    }
    kernel_.cancel(access_event_);
    access_pending_ = false;
    if (now > countdown_start_) {
        const auto elapsed = static_cast<int>((now - countdown_start_) / timing_.slot);
        backoff_slots_ = std::max(0, backoff_slots_ - elapsed);
    }
}

void DcfMac::on_medium_busy()
{
    freeze();
}

void DcfMac::on_medium_idle()
{
    idle_since_ = kernel_.now();
    if (state_ == State::Contending && !access_pending_ && !channel_.transmitting(id_)) {
        try_access();
    }
}

void DcfMac::on_access()
{
    access_pending_ = false;
    if (channel_.transmitting(id_)) {
        // an ACK of ours went out in this very slot; go again after it
        backoff_slots_ = 0;
        return;
    }
    const Frame& head = queue_.front();
    state_ = State::Transmitting;
    ++counters_.attempts;
    if (attempt_observer_) {
        attempt_observer_(TxAttempt{id_, head.dst, head.kind, head.seq, head.retries + 1, contention_.cw,
                                    backoff_slots_, kernel_.now()});
    }
    channel_.begin_transmission(id_, head, air_bytes(head));
}

void DcfMac::on_transmission_end(const Frame& frame)
{
    if (channel_.audible_count(id_) == 0) {
        idle_since_ = kernel_.now();
    }
    if (frame.kind == FrameKind::Ack) {
        if (state_ == State::Contending && !access_pending_) {
            try_access();
        }
        return;
    }
    if (frame.kind == FrameKind::Broadcast) {
        ++counters_.broadcasts_sent;
        finish_head(false);
        return;
    }
    state_ = State::WaitAck;
    ack_timer_ = kernel_.schedule_in(timing_.ack_timeout(channel_.config()), EventKind::AckTimeout,
                                     [this] { on_ack_timeout(); });
}

void DcfMac::on_ack_timeout()
{
    ++counters_.ack_timeouts;
    contention_ = on_collision(contention_);
    Frame& head = queue_.front();
    ++head.retries;
    if (head.retries > timing_.retry_limit) {
        ++counters_.dropped_mac;
        finish_head(true);
        return;
    }
    state_ = State::Contending;
    backoff_slots_ = draw();
    try_access();
}

void DcfMac::finish_head(bool failed)
{
    Frame done = std::move(queue_.front());
    queue_.pop_front();
    state_ = State::Completing;
    if (upper_ != nullptr) {
        if (failed) {
            upper_->on_mac_tx_failed(done);
        } else {
            upper_->on_mac_tx_success(done);
        }
    }
    resume();
}

void DcfMac::resume()
{
    if (queue_.empty()) {
        state_ = State::Idle;
    } else {
        start_service();
    }
}

void DcfMac::on_frame_received(const Frame& frame)
{
    switch (frame.kind) {
    case FrameKind::Ack:
        if (state_ == State::WaitAck && frame.dst == id_ && frame.src == queue_.front().dst &&
            frame.seq == queue_.front().seq) {
            kernel_.cancel(ack_timer_);
            contention_ = on_success(contention_);
            ++counters_.successes;
            finish_head(false);
        }
        return;
    case FrameKind::Data: {
        if (frame.dst != id_) {
            return;
        }
        Frame ack;
        ack.kind = FrameKind::Ack;
        ack.src = id_;
        ack.dst = frame.src;
        ack.seq = frame.seq;
        ack.payload = AckBody{};
        kernel_.schedule_in(timing_.sifs, EventKind::TxStart, [this, ack] { send_ack(ack); });
        auto [it, fresh] = last_rx_seq_.try_emplace(frame.src, frame.seq);
        if (!fresh && it->second == frame.seq) {
            ++counters_.duplicates;
            return;
        }
        it->second = frame.seq;
        ++counters_.delivered_up;
        if (upper_ != nullptr) {
            upper_->on_mac_receive(frame);
        }
        return;
    }
    case FrameKind::Broadcast:
        ++counters_.delivered_up;
        if (upper_ != nullptr) {
            upper_->on_mac_receive(frame);
        }
        return;
    }
}

void DcfMac::send_ack(Frame ack)
{
    if (channel_.transmitting(id_)) {
        ++counters_.acks_skipped;
        return;
    }
    freeze();
    ++counters_.acks_sent;
    channel_.begin_transmission(id_, std::move(ack), timing_.ack_bytes);
}

}  // namespace manetsim
