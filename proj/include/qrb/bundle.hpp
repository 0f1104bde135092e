#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "qrb/bytes.hpp"
#include "qrb/crypto.hpp"
#include "qrb/instruction.hpp"
#include "qrb/sss.hpp"

namespace qrb {

enum class BackupMode : uint8_t {
    /// Shares are of a random key; the owner keeps the key-encrypted secret.
    indirect_permission = 1,
    /// Shares are of the secret itself; kept for protocol comparison only —
    /// trustees learn their shares of the secret during recovery.
    indirect_escrow = 2,
};

std::string_view to_string(BackupMode mode);

/// The plaintext a trustee finds inside their sealed packet: one share, the
/// recovery instruction, and the owner's signature over both.
struct SharePacketPlain {
    sss::Share share;
    RecoveryInstruction instruction;
    crypto::Signature signature;

    bool operator==(const SharePacketPlain&) const = default;
};

Bytes encode_packet(const SharePacketPlain& packet);
SharePacketPlain decode_packet(ByteView data);  // MalformedInputError

/// The owner-possessed backup artifact. Contains nothing that names a
/// trustee; packet order is randomised at build time.
struct BackupBundle {
    uint8_t version = 1;
    BackupMode mode = BackupMode::indirect_permission;
    uint16_t threshold_k = 0;
    uint16_t trustee_count_n = 0;
    std::optional<crypto::AeadCiphertext> encrypted_secret;  // present iff indirect_permission
    std::vector<crypto::SealedBlob> sealed_packets;

    bool operator==(const BackupBundle&) const = default;

    /// Structure law: 1 <= k <= n = |sealed_packets|, and the encrypted
    /// secret is present exactly in indirect_permission mode. Throws
    /// BundleDecodeError(structure).
    void validate() const;
};

inline constexpr uint8_t kBundleVersion = 1;
inline constexpr std::string_view kBundleArmorLabel = "QR BACKUP";

// Binary layout (all integers big-endian):
//   magic "QRB1" | version u8 | mode u8 | k u16 | n u16
//   | encrypted-secret length u32 (0 = absent) | encrypted-secret bytes
//   | packet count u16 | per packet: length u32 | sealed blob bytes
Bytes encode_bundle(const BackupBundle& bundle);
BackupBundle decode_bundle(ByteView data);  // BundleDecodeError

std::string armor_bundle(const BackupBundle& bundle);
BackupBundle dearmor_bundle(std::string_view text);  // ArmorError | BundleDecodeError

/// Writes binary or armored depending on `armored`.
void save_bundle(const std::filesystem::path& path, const BackupBundle& bundle, bool armored);
/// Sniffs armored vs binary content.
BackupBundle load_bundle(const std::filesystem::path& path);

}  // namespace qrb
