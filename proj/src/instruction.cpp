#include "qrb/instruction.hpp"

#include <array>

#include "qrb/errors.hpp"

namespace qrb {

namespace {

constexpr std::array<std::pair<VerificationPolicy, std::string_view>, 4> kPolicyNames = {{
    {VerificationPolicy::in_person, "in_person"},
    {VerificationPolicy::live_video, "live_video"},
    {VerificationPolicy::voice_call, "voice_call"},
    {VerificationPolicy::any, "any"},
}};

void append_field(Bytes& out, std::string_view value) {
    append_u32be(out, static_cast<uint32_t>(value.size()));
    append_bytes(out, as_bytes(value));
}

std::string read_field(ByteReader& reader) {
    const uint32_t len = reader.u32be();
    const ByteView view = reader.take(len);
    return std::string(reinterpret_cast<const char*>(view.data()), view.size());
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

std::string_view to_string(VerificationPolicy policy) {
    for (const auto& [value, name] : kPolicyNames) {
        if (value == policy) return name;
    }
    return "any";
}

std::optional<VerificationPolicy> verification_policy_from_string(std::string_view name) {
    for (const auto& [value, policy_name] : kPolicyNames) {
        if (policy_name == name) return value;
    }
    return std::nullopt;
}

Bytes canonical_instruction_encoding(const RecoveryInstruction& instruction) {
    Bytes out;
    append_field(out, instruction.owner_display_name);
    append_field(out, instruction.owner_key_fingerprint);
    append_field(out, instruction.directory_locator);
    append_field(out, to_string(instruction.verification_policy));
    append_field(out, instruction.legal_agent ? *instruction.legal_agent : std::string_view{});
    append_field(out, instruction.freeform_note);
    return out;
}

RecoveryInstruction decode_instruction(ByteView data) {
    try {
        ByteReader reader(data);
        RecoveryInstruction instruction;
        instruction.owner_display_name = read_field(reader);
        instruction.owner_key_fingerprint = read_field(reader);
        instruction.directory_locator = read_field(reader);
        const std::string policy = read_field(reader);
        const auto parsed = verification_policy_from_string(policy);
        if (!parsed) {
            throw MalformedInputError("instruction: unknown verification policy '" + policy + "'");
        }
        instruction.verification_policy = *parsed;
        std::string agent = read_field(reader);
        if (!agent.empty()) {
            instruction.legal_agent = std::move(agent);
        }
        instruction.freeform_note = read_field(reader);
        if (!reader.done()) {
            throw MalformedInputError("instruction: trailing bytes");
        }
        return instruction;
    } catch (const TruncationError&) {
        throw MalformedInputError("instruction: truncated encoding");
    }
}

RecoveryInstruction parse_instruction_file(std::string_view text) {
    RecoveryInstruction instruction;
    size_t start = 0;
    while (start <= text.size()) {
        const size_t nl = text.find('\n', start);
        const std::string_view raw =
            text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParamError("instruction file: expected key=value, got '" + std::string(line) + "'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));

        if (key == "owner_display_name") {
            instruction.owner_display_name = value;
        } else if (key == "owner_key_fingerprint") {
            instruction.owner_key_fingerprint = value;
        } else if (key == "directory_locator") {
            instruction.directory_locator = value;
        } else if (key == "verification_policy") {
            const auto parsed = verification_policy_from_string(value);
            if (!parsed) {
                throw ParamError("instruction file: unknown verification policy '" +
                                 std::string(value) + "'");
            }
            instruction.verification_policy = *parsed;
        } else if (key == "legal_agent") {
            if (!value.empty()) instruction.legal_agent = std::string(value);
        } else if (key == "freeform_note") {
            instruction.freeform_note = value;
        } else {
            throw ParamError("instruction file: unknown key '" + std::string(key) + "'");
        }
    }
    return instruction;
}

}  // namespace qrb
