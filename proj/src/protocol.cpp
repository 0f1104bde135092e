#include "qrb/protocol.hpp"

#include <sodium.h>

#include <algorithm>
#include <set>

#include "qrb/errors.hpp"

namespace qrb::protocol {

std::string_view to_string(RefusalReason reason) {
    switch (reason) {
        case RefusalReason::not_my_packet: return "not_my_packet";
        case RefusalReason::bad_signature: return "bad_signature";
        case RefusalReason::fingerprint_mismatch: return "fingerprint_mismatch";
        case RefusalReason::ownership_rejected: return "ownership_rejected";
        case RefusalReason::directory_unavailable: return "directory_unavailable";
    }
    return "unknown";
}

std::string_view to_string(RecoverySession::State state) {
    switch (state) {
        case RecoverySession::State::collecting: return "collecting";
        case RecoverySession::State::ready: return "ready";
        case RecoverySession::State::finished: return "finished";
        case RecoverySession::State::aborted: return "aborted";
    }
    return "unknown";
}

BackupBundle create_backup(const crypto::KeyPair& owner, ByteView secret,
                           std::span<const TrusteeDescriptor> trustees, int threshold,
                           const RecoveryInstruction& instruction, BackupMode mode,
                           EntropySource& rng) {
    const size_t n = trustees.size();
    if (secret.empty()) {
        throw ParamError("create_backup: secret must be nonempty");
    }
    if (threshold < 1 || n < 1 || static_cast<size_t>(threshold) > n || n > sss::kMaxShares) {
        throw ParamError("create_backup: require 1 <= threshold <= trustees <= 255");
    }
    std::set<crypto::PublicKey> seen;
    for (const TrusteeDescriptor& trustee : trustees) {
        if (!seen.insert(trustee.public_key).second) {
            throw DuplicateTrusteeKeyError("create_backup: trustee public keys must be distinct");
        }
    }

    BackupBundle bundle;
    bundle.mode = mode;
    bundle.threshold_k = static_cast<uint16_t>(threshold);
    bundle.trustee_count_n = static_cast<uint16_t>(n);

    std::vector<sss::Share> shares;
    if (mode == BackupMode::indirect_permission) {
        const crypto::SymmetricKey random_key = crypto::generate_symmetric_key(rng);
        bundle.encrypted_secret = crypto::symmetric_encrypt(random_key, secret, rng);
        shares = sss::split(random_key.bytes, threshold, static_cast<int>(n), rng);
        // random_key is wiped by its destructor; the shares below are the
        // only remaining trace and are wiped before returning.
    } else {
        shares = sss::split(secret, threshold, static_cast<int>(n), rng);
    }

    bundle.sealed_packets.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        SharePacketPlain packet;
        packet.share = shares[i];
        packet.instruction = instruction;
        packet.signature = crypto::sign(owner, crypto::canonical_digest(shares[i], instruction));
        Bytes plain = encode_packet(packet);
        bundle.sealed_packets.push_back(crypto::seal(trustees[i].public_key, plain, rng));
        sodium_memzero(plain.data(), plain.size());
        sodium_memzero(packet.share.payload.data(), packet.share.payload.size());
    }

    // Shuffle so that packet position cannot be correlated with the
    // owner's trustee list order.
    for (size_t i = n - 1; i > 0; --i) {
        const size_t j = static_cast<size_t>(rng.next_below(i + 1));
        std::swap(bundle.sealed_packets[i], bundle.sealed_packets[j]);
    }

    for (sss::Share& share : shares) {
        sodium_memzero(share.payload.data(), share.payload.size());
    }

    bundle.validate();
    return bundle;
}

BackupBundle renew_backup(const crypto::KeyPair& owner, ByteView secret,
                          std::span<const TrusteeDescriptor> trustees, int threshold,
                          const RecoveryInstruction& instruction, BackupMode mode,
                          EntropySource& rng) {
    // A renewal is a fresh ceremony: new random key, new shares, new seals.
    // Nothing from any previous bundle is reused.
    return create_backup(owner, secret, trustees, threshold, instruction, mode, rng);
}

TrusteeDecision respond_to_recovery_request(const crypto::KeyPair& trustee,
                                            std::span<const crypto::SealedBlob> sealed_packets,
                                            const IdentityDirectory& directory, Verdict verdict) {
    // Trial-decrypt everything; the packets are recipient-anonymous, so
    // this is the only way to find one's own.
    std::optional<Bytes> plain;
    for (const crypto::SealedBlob& blob : sealed_packets) {
        try {
            plain = crypto::unseal(trustee, blob);
            break;
        } catch (const AuthenticationError&) {
        } catch (const MalformedInputError&) {
        }
    }
    if (!plain) {
        return Refusal{RefusalReason::not_my_packet};
    }

    SharePacketPlain packet;
    try {
        packet = decode_packet(*plain);
    } catch (const MalformedInputError&) {
        return Refusal{RefusalReason::bad_signature};
    }

    std::optional<crypto::PublicKey> owner_key;
    try {
        owner_key = directory.lookup(packet.instruction.directory_locator);
    } catch (const DirectoryError&) {
        return Refusal{RefusalReason::directory_unavailable};
    }
    if (!owner_key) {
        return Refusal{RefusalReason::directory_unavailable};
    }

    if (crypto::fingerprint(*owner_key) != packet.instruction.owner_key_fingerprint) {
        return Refusal{RefusalReason::fingerprint_mismatch};
    }
    if (!crypto::verify(*owner_key, crypto::canonical_digest(packet.share, packet.instruction),
                        packet.signature)) {
        return Refusal{RefusalReason::bad_signature};
    }

    // Everything checked out cryptographically; the human judgment decides.
    if (verdict != Verdict::confirmed_owner) {
        return Refusal{RefusalReason::ownership_rejected};
    }
    return ShareResponse{std::move(packet.share)};
}

RecoverySession::RecoverySession(BackupBundle bundle) : bundle_(std::move(bundle)) {
    bundle_.validate();
}

void RecoverySession::absorb(const ShareResponse& response) {
    if (state_ == State::finished || state_ == State::aborted) {
        throw SessionStateError("session already " + std::string(to_string(state_)));
    }
    if (response.share.index == 0) {
        throw ParamError("absorb: share index 0 is invalid");
    }
    collected_.emplace(response.share.index, response.share);  // duplicates are no-ops
    if (state_ == State::collecting && collected_.size() >= bundle_.threshold_k) {
        state_ = State::ready;
    }
}

std::vector<sss::Share> RecoverySession::collected_shares() const {
    std::vector<sss::Share> shares;
    shares.reserve(collected_.size());
    for (const auto& [index, share] : collected_) {
        shares.push_back(share);
    }
    return shares;
}

Bytes RecoverySession::finish() {
    if (state_ != State::ready) {
        throw SessionStateError("finish requires a ready session (state is " +
                                std::string(to_string(state_)) + ")");
    }
    const std::vector<sss::Share> shares = collected_shares();

    if (bundle_.mode == BackupMode::indirect_escrow) {
        Bytes secret = sss::combine(shares, bundle_.threshold_k);
        state_ = State::finished;
        return secret;
    }

    crypto::SymmetricKey random_key;
    try {
        Bytes key_bytes = sss::combine(shares, bundle_.threshold_k);
        random_key = crypto::SymmetricKey::from_bytes(key_bytes);
        sodium_memzero(key_bytes.data(), key_bytes.size());
    } catch (const ShareLengthMismatchError&) {
        state_ = State::aborted;
        throw AuthenticationError("collected shares are inconsistent");
    } catch (const MalformedInputError&) {
        state_ = State::aborted;
        throw AuthenticationError("collected shares do not form a valid key");
    }

    try {
        Bytes secret = crypto::symmetric_decrypt(random_key, *bundle_.encrypted_secret);
        state_ = State::finished;
        return secret;
    } catch (const AuthenticationError&) {
        // Wrong or corrupt shares produced a wrong key; the ciphertext's
        // authentication catches it.
        state_ = State::aborted;
        throw;
    }
}

RenewalReport check_trustee_keys(const IdentityDirectory& directory,
                                 std::span<const TrusteeDescriptor> trustees) {
    RenewalReport report;
    for (const TrusteeDescriptor& trustee : trustees) {
        try {
            const auto current = directory.lookup(trustee.identity_label);
            if (!current) {
                report.unavailable.push_back(trustee);
            } else if (!(*current == trustee.public_key)) {
                report.changed.push_back(trustee);
            }
        } catch (const DirectoryError&) {
            report.unavailable.push_back(trustee);
        }
    }
    return report;
}

}  // namespace qrb::protocol
