#pragma once

#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "qrb/bytes.hpp"
#include "qrb/crypto.hpp"
#include "qrb/protocol.hpp"

namespace qrb::transport {

/// Frames larger than this are rejected before allocation.
inline constexpr size_t kMaxFrameBytes = 16 * 1024 * 1024;

enum class MessageKind : uint8_t {
    recovery_request = 1,
    share_response = 2,
    refusal = 3,
    directory_lookup = 4,
    directory_reply = 5,
};

/// Owner -> trustee: the full sealed packet set; the trustee trial-decrypts
/// to find their own packet.
struct RecoveryRequest {
    std::vector<crypto::SealedBlob> sealed_packets;
    bool operator==(const RecoveryRequest&) const = default;
};

struct DirectoryLookup {
    std::string locator;
    bool operator==(const DirectoryLookup&) const = default;
};

struct DirectoryReply {
    std::optional<crypto::PublicKey> key;  // nullopt = locator unknown
    bool operator==(const DirectoryReply&) const = default;
};

using Message = std::variant<RecoveryRequest, protocol::ShareResponse, protocol::Refusal,
                             DirectoryLookup, DirectoryReply>;

MessageKind kind_of(const Message& message);

// Frame layout: u32-BE length (of kind byte + body) | kind u8 | body.
Bytes encode_frame(const Message& message);

/// Decodes exactly one frame; trailing bytes are an error.
Message decode_frame(ByteView data);  // FrameError

/// Decodes a concatenation of frames in order.
std::vector<Message> decode_frame_sequence(ByteView data);  // FrameError

/// In-memory network with reliable in-order delivery, matching the model's
/// assumption of secure channels. Drop and delay knobs exist for tests and
/// default to off.
class SimulatedNetwork {
public:
    explicit SimulatedNetwork(uint64_t seed = 0) : rng_(seed) {}

    void register_party(const std::string& id);
    bool knows(const std::string& id) const;

    void set_drop_probability(double p);  // ParamError unless 0 <= p <= 1
    void set_delay_steps(int steps);      // messages become visible after `steps` calls to step()

    /// Carries the message as real frame bytes. UnknownPartyError if either
    /// end is unregistered.
    void deliver(const std::string& from, const std::string& to, const Message& message);

    /// Pops the oldest visible message for `id`, or nullopt.
    std::optional<std::pair<std::string, Message>> receive(const std::string& id);

    /// Advances time for delayed messages.
    void step();

private:
    struct Envelope {
        std::string from;
        Bytes frame;
        int steps_remaining = 0;
    };

    mutable std::mutex mutex_;
    std::map<std::string, std::deque<Envelope>> inboxes_;
    std::vector<std::pair<std::string, Envelope>> in_flight_;  // (to, envelope)
    std::mt19937_64 rng_;
    double drop_probability_ = 0.0;
    int delay_steps_ = 0;
};

}  // namespace qrb::transport
