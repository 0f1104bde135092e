#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "qrb/bytes.hpp"
#include "qrb/entropy.hpp"
#include "qrb/instruction.hpp"
#include "qrb/sss.hpp"

namespace qrb::crypto {

inline constexpr std::string_view kDefaultSuiteId = "x25519-xchacha20poly1305-ed25519-sha256";

struct PublicKey {
    std::array<uint8_t, 32> bytes{};

    static PublicKey from_bytes(ByteView raw);  // MalformedInputError unless 32 octets
    bool operator==(const PublicKey&) const = default;
    bool operator<(const PublicKey& other) const { return bytes < other.bytes; }
};

struct Digest {
    std::array<uint8_t, 32> bytes{};
    bool operator==(const Digest&) const = default;
};

struct Signature {
    std::array<uint8_t, 64> bytes{};

    static Signature from_bytes(ByteView raw);  // MalformedInputError unless 64 octets
    bool operator==(const Signature&) const = default;
};

/// 32-octet symmetric key. Zeroised on destruction.
struct SymmetricKey {
    std::array<uint8_t, 32> bytes{};

    static SymmetricKey from_bytes(ByteView raw);

    SymmetricKey() = default;
    SymmetricKey(const SymmetricKey&) = default;
    SymmetricKey(SymmetricKey&&) = default;
    SymmetricKey& operator=(const SymmetricKey&) = default;
    SymmetricKey& operator=(SymmetricKey&&) = default;
    ~SymmetricKey();
};

/// One party's identity: an Ed25519 keypair. The same identity also receives
/// sealed packets through the standard Ed25519 -> X25519 conversion, so a
/// single 32-octet public key serves both verification and sealing.
class KeyPair {
public:
    KeyPair() = default;
    KeyPair(const KeyPair&) = default;
    KeyPair(KeyPair&&) = default;
    KeyPair& operator=(const KeyPair&) = default;
    KeyPair& operator=(KeyPair&&) = default;
    ~KeyPair();

    static KeyPair from_seed(ByteView seed);  // 32-octet seed

    const PublicKey& public_key() const { return public_; }
    std::string_view suite_id() const { return kDefaultSuiteId; }
    std::array<uint8_t, 32> seed() const;
    const std::array<uint8_t, 64>& signing_secret() const { return secret_; }

private:
    PublicKey public_;
    std::array<uint8_t, 64> secret_{};  // libsodium layout: seed || public key
};

struct AeadCiphertext {
    std::array<uint8_t, 24> nonce{};
    Bytes body;  // ciphertext || 16-octet tag

    bool operator==(const AeadCiphertext&) const = default;
};

/// Recipient-anonymous envelope: nothing in it identifies the recipient;
/// only the matching private key can open it.
struct SealedBlob {
    std::array<uint8_t, 32> ephemeral_public_key{};
    Bytes body;  // ciphertext || 16-octet tag

    bool operator==(const SealedBlob&) const = default;
};

/// The primitive operations behind the backup and recovery ceremonies.
/// Exactly one production suite exists; the indirection keeps the protocol
/// code independent of the algorithm choices.
class CipherSuite {
public:
    virtual ~CipherSuite() = default;

    virtual std::string_view id() const = 0;
    virtual KeyPair keypair_from_entropy(EntropySource& rng) const = 0;
    virtual SymmetricKey symmetric_key_from_entropy(EntropySource& rng) const = 0;
    virtual AeadCiphertext aead_encrypt(const SymmetricKey& key, ByteView plaintext,
                                        EntropySource& nonce_source) const = 0;
    virtual Bytes aead_decrypt(const SymmetricKey& key, const AeadCiphertext& ct) const = 0;
    virtual SealedBlob seal(const PublicKey& recipient, ByteView plaintext,
                            EntropySource& rng) const = 0;
    virtual Bytes unseal(const KeyPair& recipient, const SealedBlob& blob) const = 0;
    virtual Signature sign(const KeyPair& signer, const Digest& digest) const = 0;
    virtual bool verify(const PublicKey& signer, const Digest& digest,
                        const Signature& sig) const = 0;
    virtual Digest hash(ByteView data) const = 0;
};

const CipherSuite& default_suite();

// Convenience wrappers over default_suite().
KeyPair generate_identity_keypair(EntropySource& rng);
SymmetricKey generate_symmetric_key(EntropySource& rng);
AeadCiphertext symmetric_encrypt(const SymmetricKey& key, ByteView plaintext,
                                 EntropySource& nonce_source);
Bytes symmetric_decrypt(const SymmetricKey& key, const AeadCiphertext& ct);
SealedBlob seal(const PublicKey& recipient, ByteView plaintext, EntropySource& rng);
Bytes unseal(const KeyPair& recipient, const SealedBlob& blob);
Signature sign(const KeyPair& signer, const Digest& digest);
bool verify(const PublicKey& signer, const Digest& digest, const Signature& sig);
Digest sha256(ByteView data);

/// Digest binding a share to its recovery instruction. Both parts are
/// length-prefixed, so (payload "AB", note "C") and (payload "A", note "BC")
/// hash differently.
Digest canonical_digest(const sss::Share& share, const RecoveryInstruction& instruction);

/// First 8 octets of SHA-256 of the public key, lowercase hex.
std::string fingerprint(const PublicKey& key);

// Fixed wire encodings shared by bundle files and transport frames.
Bytes encode_aead(const AeadCiphertext& ct);
AeadCiphertext decode_aead(ByteView data);
Bytes encode_sealed_blob(const SealedBlob& blob);
SealedBlob decode_sealed_blob(ByteView data);

// Armored key files ("QR PUBLIC KEY" / "QR PRIVATE KEY" envelopes).
inline constexpr std::string_view kPublicKeyLabel = "QR PUBLIC KEY";
inline constexpr std::string_view kPrivateKeyLabel = "QR PRIVATE KEY";

void save_public_key(const std::filesystem::path& path, const PublicKey& key);
PublicKey load_public_key(const std::filesystem::path& path);
void save_keypair(const std::filesystem::path& path, const KeyPair& keypair);
KeyPair load_keypair(const std::filesystem::path& path);

}  // namespace qrb::crypto
