#include "qrb/crypto.hpp"

#include <sodium.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "qrb/armor.hpp"
#include "qrb/errors.hpp"

namespace qrb::crypto {

namespace {

static_assert(crypto_sign_PUBLICKEYBYTES == 32);
static_assert(crypto_sign_SECRETKEYBYTES == 64);
static_assert(crypto_sign_BYTES == 64);
static_assert(crypto_scalarmult_BYTES == 32);
static_assert(crypto_aead_xchacha20poly1305_ietf_NPUBBYTES == 24);
static_assert(crypto_aead_xchacha20poly1305_ietf_KEYBYTES == 32);
static_assert(crypto_hash_sha256_BYTES == 32);

constexpr std::string_view kSealKeyContext = "qrb-seal-key";
constexpr std::string_view kSealNonceContext = "qrb-seal-nonce";

struct X25519Public {
    std::array<uint8_t, 32> bytes{};
};

struct X25519Secret {
    std::array<uint8_t, 32> bytes{};
    ~X25519Secret() { sodium_memzero(bytes.data(), bytes.size()); }
};

X25519Public agreement_public(const PublicKey& identity) {
    X25519Public out;
    if (crypto_sign_ed25519_pk_to_curve25519(out.bytes.data(), identity.bytes.data()) != 0) {
        throw MalformedInputError("public key cannot receive sealed data");
    }
    return out;
}

X25519Secret agreement_secret(const KeyPair& identity) {
    X25519Secret out;
    if (crypto_sign_ed25519_sk_to_curve25519(out.bytes.data(),
                                             identity.signing_secret().data()) != 0) {
        throw MalformedInputError("private key cannot open sealed data");
    }
    return out;
}

// key = SHA-256(context || shared || ephemeral_pk || recipient_pk)
SymmetricKey derive_seal_key(ByteView shared, ByteView ephemeral_pk, ByteView recipient_pk) {
    crypto_hash_sha256_state state;
    crypto_hash_sha256_init(&state);
    crypto_hash_sha256_update(&state,
                              reinterpret_cast<const unsigned char*>(kSealKeyContext.data()),
                              kSealKeyContext.size());
    crypto_hash_sha256_update(&state, shared.data(), shared.size());
    crypto_hash_sha256_update(&state, ephemeral_pk.data(), ephemeral_pk.size());
    crypto_hash_sha256_update(&state, recipient_pk.data(), recipient_pk.size());
    SymmetricKey key;
    crypto_hash_sha256_final(&state, key.bytes.data());
    return key;
}

// The ephemeral key is fresh per seal, so a nonce derived from the key pair
// is unique; no nonce needs to travel with the blob.
std::array<uint8_t, 24> derive_seal_nonce(ByteView ephemeral_pk, ByteView recipient_pk) {
    crypto_hash_sha256_state state;
    crypto_hash_sha256_init(&state);
    crypto_hash_sha256_update(&state,
                              reinterpret_cast<const unsigned char*>(kSealNonceContext.data()),
                              kSealNonceContext.size());
    crypto_hash_sha256_update(&state, ephemeral_pk.data(), ephemeral_pk.size());
    crypto_hash_sha256_update(&state, recipient_pk.data(), recipient_pk.size());
    std::array<uint8_t, 32> full{};
    crypto_hash_sha256_final(&state, full.data());
    std::array<uint8_t, 24> nonce{};
    std::memcpy(nonce.data(), full.data(), nonce.size());
    return nonce;
}

class SodiumSuite final : public CipherSuite {
public:
    SodiumSuite() { detail::ensure_sodium(); }

    std::string_view id() const override { return kDefaultSuiteId; }

    KeyPair keypair_from_entropy(EntropySource& rng) const override {
        std::array<uint8_t, 32> seed{};
        rng.fill(seed);
        KeyPair kp = KeyPair::from_seed(seed);
        sodium_memzero(seed.data(), seed.size());
        return kp;
    }

    SymmetricKey symmetric_key_from_entropy(EntropySource& rng) const override {
        SymmetricKey key;
        rng.fill(key.bytes);
        return key;
    }

    AeadCiphertext aead_encrypt(const SymmetricKey& key, ByteView plaintext,
                                EntropySource& nonce_source) const override {
        AeadCiphertext ct;
        nonce_source.fill(ct.nonce);
        ct.body.resize(plaintext.size() + crypto_aead_xchacha20poly1305_ietf_ABYTES);
        unsigned long long written = 0;
        crypto_aead_xchacha20poly1305_ietf_encrypt(ct.body.data(), &written, plaintext.data(),
                                                   plaintext.size(), nullptr, 0, nullptr,
                                                   ct.nonce.data(), key.bytes.data());
        ct.body.resize(written);
        return ct;
    }

    Bytes aead_decrypt(const SymmetricKey& key, const AeadCiphertext& ct) const override {
        if (ct.body.size() < crypto_aead_xchacha20poly1305_ietf_ABYTES) {
            throw AuthenticationError("ciphertext shorter than the authentication tag");
        }
        Bytes plaintext(ct.body.size() - crypto_aead_xchacha20poly1305_ietf_ABYTES);
        unsigned long long written = 0;
        if (crypto_aead_xchacha20poly1305_ietf_decrypt(plaintext.data(), &written, nullptr,
                                                       ct.body.data(), ct.body.size(), nullptr, 0,
                                                       ct.nonce.data(), key.bytes.data()) != 0) {
            throw AuthenticationError("ciphertext failed authentication");
        }
        plaintext.resize(written);
        return plaintext;
    }

    SealedBlob seal(const PublicKey& recipient, ByteView plaintext,
                    EntropySource& rng) const override {
        const X25519Public recipient_x = agreement_public(recipient);

        X25519Secret ephemeral_secret;
        rng.fill(ephemeral_secret.bytes);
        SealedBlob blob;
        crypto_scalarmult_base(blob.ephemeral_public_key.data(), ephemeral_secret.bytes.data());

        std::array<uint8_t, 32> shared{};
        if (crypto_scalarmult(shared.data(), ephemeral_secret.bytes.data(),
                              recipient_x.bytes.data()) != 0) {
            throw MalformedInputError("recipient key rejected by key agreement");
        }

        const SymmetricKey key =
            derive_seal_key(shared, blob.ephemeral_public_key, recipient_x.bytes);
        const auto nonce = derive_seal_nonce(blob.ephemeral_public_key, recipient_x.bytes);
        sodium_memzero(shared.data(), shared.size());

        blob.body.resize(plaintext.size() + crypto_aead_xchacha20poly1305_ietf_ABYTES);
        unsigned long long written = 0;
        crypto_aead_xchacha20poly1305_ietf_encrypt(blob.body.data(), &written, plaintext.data(),
                                                   plaintext.size(), nullptr, 0, nullptr,
                                                   nonce.data(), key.bytes.data());
        blob.body.resize(written);
        return blob;
    }

    Bytes unseal(const KeyPair& recipient, const SealedBlob& blob) const override {
        if (blob.body.size() < crypto_aead_xchacha20poly1305_ietf_ABYTES) {
            throw AuthenticationError("sealed blob shorter than the authentication tag");
        }
        const X25519Secret recipient_secret = agreement_secret(recipient);
        const X25519Public recipient_x = agreement_public(recipient.public_key());

        std::array<uint8_t, 32> shared{};
        if (crypto_scalarmult(shared.data(), recipient_secret.bytes.data(),
                              blob.ephemeral_public_key.data()) != 0) {
            throw AuthenticationError("sealed blob carries an invalid ephemeral key");
        }

        const SymmetricKey key =
            derive_seal_key(shared, blob.ephemeral_public_key, recipient_x.bytes);
        const auto nonce = derive_seal_nonce(blob.ephemeral_public_key, recipient_x.bytes);
        sodium_memzero(shared.data(), shared.size());

        Bytes plaintext(blob.body.size() - crypto_aead_xchacha20poly1305_ietf_ABYTES);
        unsigned long long written = 0;
        if (crypto_aead_xchacha20poly1305_ietf_decrypt(plaintext.data(), &written, nullptr,
                                                       blob.body.data(), blob.body.size(), nullptr,
                                                       0, nonce.data(), key.bytes.data()) != 0) {
            throw AuthenticationError("sealed blob failed authentication");
        }
        plaintext.resize(written);
        return plaintext;
    }

    Signature sign(const KeyPair& signer, const Digest& digest) const override {
        Signature sig;
        crypto_sign_detached(sig.bytes.data(), nullptr, digest.bytes.data(), digest.bytes.size(),
                             signer.signing_secret().data());
        return sig;
    }

    bool verify(const PublicKey& signer, const Digest& digest,
                const Signature& sig) const override {
        return crypto_sign_verify_detached(sig.bytes.data(), digest.bytes.data(),
                                           digest.bytes.size(), signer.bytes.data()) == 0;
    }

    Digest hash(ByteView data) const override {
        Digest digest;
        crypto_hash_sha256(digest.bytes.data(), data.data(), data.size());
        return digest;
    }
};

Bytes read_file_text_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw MalformedInputError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string s = buf.str();
    return Bytes(s.begin(), s.end());
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw MalformedInputError("cannot write '" + path.string() + "'");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace

PublicKey PublicKey::from_bytes(ByteView raw) {
    if (raw.size() != 32) {
        throw MalformedInputError("public key must be 32 octets");
    }
    PublicKey key;
    std::memcpy(key.bytes.data(), raw.data(), 32);
    return key;
}

Signature Signature::from_bytes(ByteView raw) {
    if (raw.size() != 64) {
        throw MalformedInputError("signature must be 64 octets");
    }
    Signature sig;
    std::memcpy(sig.bytes.data(), raw.data(), 64);
    return sig;
}

SymmetricKey SymmetricKey::from_bytes(ByteView raw) {
    if (raw.size() != 32) {
        throw MalformedInputError("symmetric key must be 32 octets");
    }
    SymmetricKey key;
    std::memcpy(key.bytes.data(), raw.data(), 32);
    return key;
}

SymmetricKey::~SymmetricKey() {
    sodium_memzero(bytes.data(), bytes.size());
}

KeyPair::~KeyPair() {
    sodium_memzero(secret_.data(), secret_.size());
}

KeyPair KeyPair::from_seed(ByteView seed) {
    if (seed.size() != 32) {
        throw MalformedInputError("keypair seed must be 32 octets");
    }
    detail::ensure_sodium();
    KeyPair kp;
    crypto_sign_seed_keypair(kp.public_.bytes.data(), kp.secret_.data(), seed.data());
    return kp;
}

std::array<uint8_t, 32> KeyPair::seed() const {
    std::array<uint8_t, 32> seed{};
    std::memcpy(seed.data(), secret_.data(), 32);
    return seed;
}

const CipherSuite& default_suite() {
    static const SodiumSuite suite;
    return suite;
}

KeyPair generate_identity_keypair(EntropySource& rng) {
    return default_suite().keypair_from_entropy(rng);
}

SymmetricKey generate_symmetric_key(EntropySource& rng) {
    return default_suite().symmetric_key_from_entropy(rng);
}

AeadCiphertext symmetric_encrypt(const SymmetricKey& key, ByteView plaintext,
                                 EntropySource& nonce_source) {
    return default_suite().aead_encrypt(key, plaintext, nonce_source);
}

Bytes symmetric_decrypt(const SymmetricKey& key, const AeadCiphertext& ct) {
    return default_suite().aead_decrypt(key, ct);
}

SealedBlob seal(const PublicKey& recipient, ByteView plaintext, EntropySource& rng) {
    return default_suite().seal(recipient, plaintext, rng);
}

Bytes unseal(const KeyPair& recipient, const SealedBlob& blob) {
    return default_suite().unseal(recipient, blob);
}

Signature sign(const KeyPair& signer, const Digest& digest) {
    return default_suite().sign(signer, digest);
}

bool verify(const PublicKey& signer, const Digest& digest, const Signature& sig) {
    return default_suite().verify(signer, digest, sig);
}

Digest sha256(ByteView data) {
    return default_suite().hash(data);
}

Digest canonical_digest(const sss::Share& share, const RecoveryInstruction& instruction) {
    Bytes message;
    const Bytes instruction_bytes = canonical_instruction_encoding(instruction);
    append_u32be(message, static_cast<uint32_t>(1 + share.payload.size()));
    append_u8(message, share.index);
    append_bytes(message, share.payload);
    append_u32be(message, static_cast<uint32_t>(instruction_bytes.size()));
    append_bytes(message, instruction_bytes);
    return sha256(message);
}

std::string fingerprint(const PublicKey& key) {
    const Digest digest = sha256(key.bytes);
    return to_hex(ByteView(digest.bytes.data(), 8));
}

Bytes encode_aead(const AeadCiphertext& ct) {
    Bytes out;
    append_bytes(out, ct.nonce);
    append_bytes(out, ct.body);
    return out;
}

AeadCiphertext decode_aead(ByteView data) {
    if (data.size() < 24 + crypto_aead_xchacha20poly1305_ietf_ABYTES) {
        throw MalformedInputError("AEAD ciphertext too short");
    }
    AeadCiphertext ct;
    std::memcpy(ct.nonce.data(), data.data(), 24);
    ct.body.assign(data.begin() + 24, data.end());
    return ct;
}

Bytes encode_sealed_blob(const SealedBlob& blob) {
    Bytes out;
    append_bytes(out, blob.ephemeral_public_key);
    append_bytes(out, blob.body);
    return out;
}

SealedBlob decode_sealed_blob(ByteView data) {
    if (data.size() < 32 + crypto_aead_xchacha20poly1305_ietf_ABYTES) {
        throw MalformedInputError("sealed blob too short");
    }
    SealedBlob blob;
    std::memcpy(blob.ephemeral_public_key.data(), data.data(), 32);
    blob.body.assign(data.begin() + 32, data.end());
    return blob;
}

void save_public_key(const std::filesystem::path& path, const PublicKey& key) {
    write_file(path, armor::armor(kPublicKeyLabel, key.bytes, /*with_checksum=*/false));
}

PublicKey load_public_key(const std::filesystem::path& path) {
    const Bytes text = read_file_text_bytes(path);
    const Bytes raw = armor::dearmor(kPublicKeyLabel,
                                     std::string_view(reinterpret_cast<const char*>(text.data()),
                                                      text.size()),
                                     /*require_checksum=*/false);
    return PublicKey::from_bytes(raw);
}

void save_keypair(const std::filesystem::path& path, const KeyPair& keypair) {
    const auto seed = keypair.seed();
    write_file(path, armor::armor(kPrivateKeyLabel, seed, /*with_checksum=*/false));
}

KeyPair load_keypair(const std::filesystem::path& path) {
    const Bytes text = read_file_text_bytes(path);
    const Bytes seed = armor::dearmor(kPrivateKeyLabel,
                                      std::string_view(reinterpret_cast<const char*>(text.data()),
                                                       text.size()),
                                      /*require_checksum=*/false);
    return KeyPair::from_seed(seed);
}

}  // namespace qrb::crypto
