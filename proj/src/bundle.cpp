#include "qrb/bundle.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "qrb/armor.hpp"
#include "qrb/errors.hpp"

namespace qrb {

namespace {

constexpr std::array<uint8_t, 4> kMagic = {'Q', 'R', 'B', '1'};
constexpr size_t kMinAeadBytes = 24 + 16;    // nonce + tag
constexpr size_t kMinSealedBytes = 32 + 16;  // ephemeral key + tag

BundleDecodeError structure_error(const std::string& what) {
    return BundleDecodeError(BundleDecodeError::Kind::structure, what);
}

}  // namespace

std::string_view to_string(BackupMode mode) {
    switch (mode) {
        case BackupMode::indirect_permission: return "indirect_permission";
        case BackupMode::indirect_escrow: return "indirect_escrow";
    }
    return "unknown";
}

Bytes encode_packet(const SharePacketPlain& packet) {
    Bytes out;
    append_u8(out, packet.share.index);
    append_u32be(out, static_cast<uint32_t>(packet.share.payload.size()));
    append_bytes(out, packet.share.payload);
    const Bytes instruction = canonical_instruction_encoding(packet.instruction);
    append_u32be(out, static_cast<uint32_t>(instruction.size()));
    append_bytes(out, instruction);
    append_bytes(out, packet.signature.bytes);
    return out;
}

SharePacketPlain decode_packet(ByteView data) {
    try {
        ByteReader reader(data);
        SharePacketPlain packet;
        packet.share.index = reader.u8();
        if (packet.share.index == 0) {
            throw MalformedInputError("packet: share index 0");
        }
        const uint32_t payload_len = reader.u32be();
        const ByteView payload = reader.take(payload_len);
        packet.share.payload.assign(payload.begin(), payload.end());
        const uint32_t instruction_len = reader.u32be();
        packet.instruction = decode_instruction(reader.take(instruction_len));
        packet.signature = crypto::Signature::from_bytes(reader.take(64));
        if (!reader.done()) {
            throw MalformedInputError("packet: trailing bytes");
        }
        return packet;
    } catch (const TruncationError&) {
        throw MalformedInputError("packet: truncated");
    }
}

void BackupBundle::validate() const {
    if (version != kBundleVersion) {
        throw BundleDecodeError(BundleDecodeError::Kind::version_unsupported,
                                "unsupported bundle version");
    }
    if (mode != BackupMode::indirect_permission && mode != BackupMode::indirect_escrow) {
        throw structure_error("unknown bundle mode");
    }
    if (threshold_k < 1 || threshold_k > trustee_count_n) {
        throw structure_error("bundle requires 1 <= k <= n");
    }
    if (sealed_packets.size() != trustee_count_n) {
        throw structure_error("sealed packet count disagrees with n");
    }
    const bool wants_secret = mode == BackupMode::indirect_permission;
    if (encrypted_secret.has_value() != wants_secret) {
        throw structure_error(wants_secret
                                  ? "indirect_permission bundle lacks its encrypted secret"
                                  : "indirect_escrow bundle must not carry an encrypted secret");
    }
}

Bytes encode_bundle(const BackupBundle& bundle) {
    bundle.validate();
    Bytes out;
    append_bytes(out, kMagic);
    append_u8(out, bundle.version);
    append_u8(out, static_cast<uint8_t>(bundle.mode));
    append_u16be(out, bundle.threshold_k);
    append_u16be(out, bundle.trustee_count_n);
    if (bundle.encrypted_secret) {
        const Bytes aead = crypto::encode_aead(*bundle.encrypted_secret);
        append_u32be(out, static_cast<uint32_t>(aead.size()));
        append_bytes(out, aead);
    } else {
        append_u32be(out, 0);
    }
    append_u16be(out, static_cast<uint16_t>(bundle.sealed_packets.size()));
    for (const crypto::SealedBlob& blob : bundle.sealed_packets) {
        const Bytes wire = crypto::encode_sealed_blob(blob);
        append_u32be(out, static_cast<uint32_t>(wire.size()));
        append_bytes(out, wire);
    }
    return out;
}

BackupBundle decode_bundle(ByteView data) {
    try {
        ByteReader reader(data);
        const ByteView magic = reader.take(4);
        if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) {
            throw BundleDecodeError(BundleDecodeError::Kind::magic_mismatch,
                                    "not a backup bundle (bad magic)");
        }
        BackupBundle bundle;
        bundle.version = reader.u8();
        if (bundle.version != kBundleVersion) {
            throw BundleDecodeError(BundleDecodeError::Kind::version_unsupported,
                                    "unsupported bundle version");
        }
        bundle.mode = static_cast<BackupMode>(reader.u8());
        bundle.threshold_k = reader.u16be();
        bundle.trustee_count_n = reader.u16be();

        const uint32_t secret_len = reader.u32be();
        if (secret_len > 0) {
            if (secret_len < kMinAeadBytes) {
                throw structure_error("encrypted secret block too short");
            }
            bundle.encrypted_secret = crypto::decode_aead(reader.take(secret_len));
        }

        const uint16_t packet_count = reader.u16be();
        bundle.sealed_packets.reserve(packet_count);
        for (uint16_t i = 0; i < packet_count; ++i) {
            const uint32_t len = reader.u32be();
            if (len < kMinSealedBytes) {
                throw structure_error("sealed packet too short");
            }
            bundle.sealed_packets.push_back(crypto::decode_sealed_blob(reader.take(len)));
        }
        if (!reader.done()) {
            throw BundleDecodeError(BundleDecodeError::Kind::trailing_bytes,
                                    "bytes after end of bundle");
        }
        bundle.validate();
        return bundle;
    } catch (const TruncationError&) {
        throw BundleDecodeError(BundleDecodeError::Kind::truncation, "bundle truncated");
    }
}

std::string armor_bundle(const BackupBundle& bundle) {
    return armor::armor(kBundleArmorLabel, encode_bundle(bundle));
}

BackupBundle dearmor_bundle(std::string_view text) {
    return decode_bundle(armor::dearmor(kBundleArmorLabel, text));
}

void save_bundle(const std::filesystem::path& path, const BackupBundle& bundle, bool armored) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw MalformedInputError("cannot write '" + path.string() + "'");
    }
    if (armored) {
        const std::string text = armor_bundle(bundle);
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
    } else {
        const Bytes raw = encode_bundle(bundle);
        out.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(raw.size()));
    }
}

BackupBundle load_bundle(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw MalformedInputError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string content = buf.str();
    if (armor::looks_armored(content)) {
        return dearmor_bundle(content);
    }
    return decode_bundle(as_bytes(content));
}

}  // namespace qrb
