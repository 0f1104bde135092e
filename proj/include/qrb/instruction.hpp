#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qrb/bytes.hpp"

namespace qrb {

/// How the owner wants trustees to confirm their identity before releasing
/// a share.
enum class VerificationPolicy : uint8_t {
    in_person,
    live_video,
    voice_call,
    any,
};

std::string_view to_string(VerificationPolicy policy);
std::optional<VerificationPolicy> verification_policy_from_string(std::string_view name);

/// The instruction embedded in every sealed trustee packet. Tells the
/// trustee who claims to own the backup, where to fetch the owner's public
/// key, and how to authenticate the requester.
struct RecoveryInstruction {
    std::string owner_display_name;
    std::string owner_key_fingerprint;  // 16 lowercase hex chars (8 octets)
    std::string directory_locator;
    VerificationPolicy verification_policy = VerificationPolicy::any;
    std::optional<std::string> legal_agent;  // contact if the owner cannot communicate
    std::string freeform_note;

    bool operator==(const RecoveryInstruction&) const = default;
};

/// Deterministic encoding: the six fields in declaration order, each as a
/// u32-BE length prefix plus UTF-8 bytes. The policy encodes as its name;
/// an absent legal_agent encodes as length 0.
Bytes canonical_instruction_encoding(const RecoveryInstruction& instruction);

/// Strict inverse of canonical_instruction_encoding. Throws
/// MalformedInputError on truncation, trailing bytes or an unknown policy.
RecoveryInstruction decode_instruction(ByteView data);

/// Parses the CLI's key=value instruction file. Blank lines and lines
/// starting with '#' are skipped; unknown keys are rejected with ParamError.
RecoveryInstruction parse_instruction_file(std::string_view text);

}  // namespace qrb
