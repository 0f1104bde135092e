#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrb/bytes.hpp"
#include "qrb/entropy.hpp"

namespace qrb::sss {

/// One fragment of a split secret. `index` is the nonzero evaluation point;
/// the payload has the same length as the secret.
struct Share {
    uint8_t index = 0;
    Bytes payload;

    bool operator==(const Share&) const = default;
};

inline constexpr int kMaxShares = 255;

/// Splits `secret` into `share_count` shares such that any `threshold` of
/// them recover it. One random degree-(threshold-1) polynomial per secret
/// byte, evaluated at x = 1..share_count.
std::vector<Share> split(ByteView secret, int threshold, int share_count, EntropySource& rng);

/// Recovers the secret from at least `threshold` shares with distinct
/// indices and equal payload lengths. Interpolates at x = 0 over exactly the
/// `threshold` shares with the smallest indices.
Bytes combine(std::span<const Share> shares, int threshold);

}  // namespace qrb::sss
