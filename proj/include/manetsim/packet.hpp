#pragma once

#include "manetsim/sim_kernel.hpp"

#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

namespace manetsim {

using NodeId = std::uint32_t;
inline constexpr NodeId kBroadcast = std::numeric_limits<NodeId>::max();
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max() - 1;

using PacketId = std::uint64_t;

/// End-to-end CBR data packet.
struct DataPacket {
    PacketId id = 0;
    NodeId source = kNoNode;
    NodeId destination = kNoNode;
    std::uint64_t seq = 0;
    SimTime created{0};
    int bytes = 512;
    int ttl = 64;
    std::vector<NodeId> path;  // nodes that handled the packet, source first
};

struct RouteRequest {
    NodeId originator = kNoNode;
    NodeId target = kNoNode;
    std::uint64_t rreq_id = 0;
    int hop_count = 0;
};

struct RouteReply {
    NodeId originator = kNoNode;
    NodeId target = kNoNode;
    int hop_count = 0;
};

struct AckBody {};

using NetPayload = std::variant<AckBody, DataPacket, RouteRequest, RouteReply>;

enum class FrameKind : std::uint8_t { Data, Ack, Broadcast };

/// A MAC transmission unit. `Data` is any unicast frame (CBR data or RREP);
/// `Broadcast` goes to every neighbour without acknowledgement.
struct Frame {
    FrameKind kind = FrameKind::Data;
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
    int payload_bytes = 0;  // network-layer bytes; MAC overhead is added on air
    std::uint64_t seq = 0;  // per-sender MAC sequence, reused across retries
    SimTime enqueue_time{0};
    int retries = 0;
    NetPayload payload;

    const DataPacket* data() const { return std::get_if<DataPacket>(&payload); }
};

}  // namespace manetsim
