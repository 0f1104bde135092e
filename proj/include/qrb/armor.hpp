#pragma once

#include <string>
#include <string_view>

#include "qrb/bytes.hpp"

namespace qrb::armor {

/// Wraps `data` in a printable envelope:
///
///   -----BEGIN <label>-----
///   <base64, wrapped at 64 columns>
///   =<crc32 of the raw bytes, 8 lowercase hex digits>   (when with_checksum)
///   -----END <label>-----
///
/// The checksum line lets a reader detect single-character transcription
/// errors that still decode as valid base64.
std::string armor(std::string_view label, ByteView data, bool with_checksum = true);

/// Inverse of armor(). Whitespace and line wrapping inside the body are
/// ignored. Throws ArmorError: bad_header when the envelope is malformed or
/// the label does not match, bad_encoding for non-base64 body characters,
/// checksum_mismatch when the crc line disagrees with the decoded bytes.
Bytes dearmor(std::string_view label, std::string_view text, bool require_checksum = true);

/// True when `text` starts (after leading whitespace) with an armor header.
bool looks_armored(std::string_view text);

}  // namespace qrb::armor
