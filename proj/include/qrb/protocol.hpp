#pragma once

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qrb/bundle.hpp"
#include "qrb/crypto.hpp"
#include "qrb/directory.hpp"
#include "qrb/entropy.hpp"

namespace qrb::protocol {

/// A chosen trustee: the owner's private mnemonic for them plus their
/// public key. The label never enters the bundle.
struct TrusteeDescriptor {
    std::string identity_label;
    crypto::PublicKey public_key;
};

/// Outcome of the human authentication step. The library never computes
/// this; the trustee's judgment is injected.
enum class Verdict {
    confirmed_owner,
    rejected,
    ignored,
};

struct ShareResponse {
    sss::Share share;
    bool operator==(const ShareResponse&) const = default;
};

enum class RefusalReason : uint8_t {
    not_my_packet = 1,
    bad_signature = 2,
    fingerprint_mismatch = 3,
    ownership_rejected = 4,
    directory_unavailable = 5,
};

std::string_view to_string(RefusalReason reason);

struct Refusal {
    RefusalReason reason;
    bool operator==(const Refusal&) const = default;
};

using TrusteeDecision = std::variant<ShareResponse, Refusal>;

/// Runs the backup ceremony. In indirect_permission mode a fresh random key
/// encrypts the secret and the key is what gets shared; in indirect_escrow
/// mode the secret itself is shared and no ciphertext is stored. Every
/// packet is signed with the owner's key, sealed to one trustee, and the
/// packet order is shuffled. Key material and plaintext shares are wiped
/// before returning.
///
/// Throws ParamError (bad threshold, empty secret, more than 255 trustees)
/// and DuplicateTrusteeKeyError.
BackupBundle create_backup(const crypto::KeyPair& owner, ByteView secret,
                           std::span<const TrusteeDescriptor> trustees, int threshold,
                           const RecoveryInstruction& instruction, BackupMode mode,
                           EntropySource& rng);

/// Rebuilds a backup with fresh key material (and possibly new trustees).
/// The old bundle shares nothing with the new one.
BackupBundle renew_backup(const crypto::KeyPair& owner, ByteView secret,
                          std::span<const TrusteeDescriptor> trustees, int threshold,
                          const RecoveryInstruction& instruction, BackupMode mode,
                          EntropySource& rng);

/// One trustee's handling of a recovery request: trial-unseal every packet,
/// fetch the owner key named by the embedded instruction, check fingerprint
/// and signature, then apply the human verdict. Total function — every
/// failure maps to a Refusal reason.
TrusteeDecision respond_to_recovery_request(const crypto::KeyPair& trustee,
                                            std::span<const crypto::SealedBlob> sealed_packets,
                                            const IdentityDirectory& directory, Verdict verdict);

/// Owner-side accumulator for decrypted shares.
class RecoverySession {
public:
    enum class State { collecting, ready, finished, aborted };

    explicit RecoverySession(BackupBundle bundle);  // BundleDecodeError on bad bundle

    State state() const { return state_; }
    size_t collected_count() const { return collected_.size(); }
    const BackupBundle& bundle() const { return bundle_; }

    /// Records a share keyed by its index. Duplicate indices are idempotent.
    /// Throws SessionStateError once the session is finished or aborted.
    void absorb(const ShareResponse& response);

    /// Combines the collected shares and recovers the secret. Requires
    /// state ready. A corrupt share yields a wrong key, the ciphertext
    /// rejects it (AuthenticationError) and the session aborts.
    Bytes finish();

    /// Shares collected so far, ascending by index.
    std::vector<sss::Share> collected_shares() const;

private:
    BackupBundle bundle_;
    std::map<uint8_t, sss::Share> collected_;
    State state_ = State::collecting;
};

std::string_view to_string(RecoverySession::State state);

struct RenewalReport {
    std::vector<TrusteeDescriptor> changed;      // directory key differs from the recorded one
    std::vector<TrusteeDescriptor> unavailable;  // lookup failed or locator unknown
    bool all_clear() const { return changed.empty() && unavailable.empty(); }
};

/// Compares each trustee's recorded key against the directory (keyed by
/// identity_label). Owners should renew the backup for every changed
/// trustee.
RenewalReport check_trustee_keys(const IdentityDirectory& directory,
                                 std::span<const TrusteeDescriptor> trustees);

}  // namespace qrb::protocol
