#include "qrb/transport.hpp"

#include "qrb/errors.hpp"

namespace qrb::transport {

namespace {

Bytes encode_body(const Message& message) {
    Bytes body;
    std::visit(
        [&body](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, RecoveryRequest>) {
                append_u16be(body, static_cast<uint16_t>(m.sealed_packets.size()));
                for (const crypto::SealedBlob& blob : m.sealed_packets) {
                    const Bytes wire = crypto::encode_sealed_blob(blob);
                    append_u32be(body, static_cast<uint32_t>(wire.size()));
                    append_bytes(body, wire);
                }
            } else if constexpr (std::is_same_v<T, protocol::ShareResponse>) {
                append_u8(body, m.share.index);
                append_u32be(body, static_cast<uint32_t>(m.share.payload.size()));
                append_bytes(body, m.share.payload);
            } else if constexpr (std::is_same_v<T, protocol::Refusal>) {
                append_u8(body, static_cast<uint8_t>(m.reason));
            } else if constexpr (std::is_same_v<T, DirectoryLookup>) {
                append_u32be(body, static_cast<uint32_t>(m.locator.size()));
                append_bytes(body, as_bytes(m.locator));
            } else if constexpr (std::is_same_v<T, DirectoryReply>) {
                append_u8(body, m.key ? 1 : 0);
                if (m.key) append_bytes(body, m.key->bytes);
            }
        },
        message);
    return body;
}

Message decode_body(MessageKind kind, ByteReader& reader) {
    switch (kind) {
        case MessageKind::recovery_request: {
            RecoveryRequest request;
            const uint16_t count = reader.u16be();
            request.sealed_packets.reserve(count);
            for (uint16_t i = 0; i < count; ++i) {
                const uint32_t len = reader.u32be();
                request.sealed_packets.push_back(crypto::decode_sealed_blob(reader.take(len)));
            }
            return request;
        }
        case MessageKind::share_response: {
            protocol::ShareResponse response;
            response.share.index = reader.u8();
            const uint32_t len = reader.u32be();
            const ByteView payload = reader.take(len);
            response.share.payload.assign(payload.begin(), payload.end());
            return response;
        }
        case MessageKind::refusal: {
            const uint8_t reason = reader.u8();
            if (reason < 1 || reason > 5) {
                throw MalformedInputError("refusal: unknown reason code");
            }
            return protocol::Refusal{static_cast<protocol::RefusalReason>(reason)};
        }
        case MessageKind::directory_lookup: {
            const uint32_t len = reader.u32be();
            const ByteView view = reader.take(len);
            return DirectoryLookup{
                std::string(reinterpret_cast<const char*>(view.data()), view.size())};
        }
        case MessageKind::directory_reply: {
            const uint8_t found = reader.u8();
            if (found > 1) {
                throw MalformedInputError("directory reply: bad presence flag");
            }
            DirectoryReply reply;
            if (found) {
                reply.key = crypto::PublicKey::from_bytes(reader.take(32));
            }
            return reply;
        }
    }
    throw FrameError(FrameError::Kind::unknown_kind, "unknown message kind");
}

// Reads one frame starting at the reader's position.
Message decode_one(ByteReader& reader) {
    const uint32_t length = reader.u32be();
    if (length > kMaxFrameBytes) {
        throw FrameError(FrameError::Kind::oversize, "frame exceeds 16 MiB limit");
    }
    if (length < 1) {
        throw FrameError(FrameError::Kind::truncation, "frame too short for a kind byte");
    }
    const ByteView payload = reader.take(length);
    ByteReader body(payload);
    const uint8_t kind = body.u8();
    if (kind < 1 || kind > 5) {
        throw FrameError(FrameError::Kind::unknown_kind, "unknown frame kind");
    }
    const Message message = decode_body(static_cast<MessageKind>(kind), body);
    if (!body.done()) {
        throw FrameError(FrameError::Kind::trailing_bytes, "frame body has trailing bytes");
    }
    return message;
}

}  // namespace

MessageKind kind_of(const Message& message) {
    switch (message.index()) {
        case 0: return MessageKind::recovery_request;
        case 1: return MessageKind::share_response;
        case 2: return MessageKind::refusal;
        case 3: return MessageKind::directory_lookup;
        default: return MessageKind::directory_reply;
    }
}

Bytes encode_frame(const Message& message) {
    const Bytes body = encode_body(message);
    if (1 + body.size() > kMaxFrameBytes) {
        throw FrameError(FrameError::Kind::oversize, "message exceeds 16 MiB frame limit");
    }
    Bytes frame;
    frame.reserve(4 + 1 + body.size());
    append_u32be(frame, static_cast<uint32_t>(1 + body.size()));
    append_u8(frame, static_cast<uint8_t>(kind_of(message)));
    append_bytes(frame, body);
    return frame;
}

Message decode_frame(ByteView data) {
    try {
        ByteReader reader(data);
        const Message message = decode_one(reader);
        if (!reader.done()) {
            throw FrameError(FrameError::Kind::trailing_bytes, "bytes after frame");
        }
        return message;
    } catch (const TruncationError&) {
        throw FrameError(FrameError::Kind::truncation, "frame truncated");
    }
}

std::vector<Message> decode_frame_sequence(ByteView data) {
    try {
        std::vector<Message> messages;
        ByteReader reader(data);
        while (!reader.done()) {
            messages.push_back(decode_one(reader));
        }
        return messages;
    } catch (const TruncationError&) {
        throw FrameError(FrameError::Kind::truncation, "frame sequence truncated");
    }
}

void SimulatedNetwork::register_party(const std::string& id) {
    std::lock_guard lock(mutex_);
    inboxes_.try_emplace(id);
}

bool SimulatedNetwork::knows(const std::string& id) const {
    std::lock_guard lock(mutex_);
    return inboxes_.count(id) > 0;
}

void SimulatedNetwork::set_drop_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParamError("drop probability must lie in [0,1]");
    }
    std::lock_guard lock(mutex_);
    drop_probability_ = p;
}

void SimulatedNetwork::set_delay_steps(int steps) {
    if (steps < 0) {
        throw ParamError("delay must be nonnegative");
    }
    std::lock_guard lock(mutex_);
    delay_steps_ = steps;
}

void SimulatedNetwork::deliver(const std::string& from, const std::string& to,
                               const Message& message) {
    std::lock_guard lock(mutex_);
    if (inboxes_.count(from) == 0) {
        throw UnknownPartyError("unknown sender '" + from + "'");
    }
    const auto inbox = inboxes_.find(to);
    if (inbox == inboxes_.end()) {
        throw UnknownPartyError("unknown recipient '" + to + "'");
    }
    if (drop_probability_ > 0.0) {
        const double draw =
            static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        if (draw < drop_probability_) {
            return;
        }
    }
    Envelope envelope{from, encode_frame(message), delay_steps_};
    if (delay_steps_ == 0) {
        inbox->second.push_back(std::move(envelope));
    } else {
        in_flight_.emplace_back(to, std::move(envelope));
    }
}

std::optional<std::pair<std::string, Message>> SimulatedNetwork::receive(const std::string& id) {
    std::lock_guard lock(mutex_);
    const auto inbox = inboxes_.find(id);
    if (inbox == inboxes_.end()) {
        throw UnknownPartyError("unknown recipient '" + id + "'");
    }
    if (inbox->second.empty()) {
        return std::nullopt;
    }
    Envelope envelope = std::move(inbox->second.front());
    inbox->second.pop_front();
    return std::make_pair(std::move(envelope.from), decode_frame(envelope.frame));
}

void SimulatedNetwork::step() {
    std::lock_guard lock(mutex_);
    std::vector<std::pair<std::string, Envelope>> still_pending;
    for (auto& [to, envelope] : in_flight_) {
        if (--envelope.steps_remaining <= 0) {
            inboxes_[to].push_back(std::move(envelope));
        } else {
            still_pending.emplace_back(to, std::move(envelope));
        }
    }
    in_flight_ = std::move(still_pending);
}

}  // namespace qrb::transport
