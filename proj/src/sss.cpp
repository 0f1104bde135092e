#include "qrb/sss.hpp"

#include <sodium.h>

#include <algorithm>

#include "qrb/errors.hpp"
#include "qrb/gf256.hpp"

namespace qrb::sss {

namespace {

// Horner evaluation of the byte polynomial at x. coeffs[0] is the constant
// term (the secret byte), coeffs[degree] the highest coefficient.
uint8_t eval_poly(ByteView coeffs, uint8_t x) {
    uint8_t acc = 0;
    for (size_t i = coeffs.size(); i-- > 0;) {
        acc = gf256::add(gf256::mul(acc, x), coeffs[i]);
    }
    return acc;
}

}  // namespace

std::vector<Share> split(ByteView secret, int threshold, int share_count, EntropySource& rng) {
    if (secret.empty()) {
        throw ParamError("split: secret must be nonempty");
    }
    if (threshold < 1 || share_count < 1 || threshold > share_count || share_count > kMaxShares) {
        throw ParamError("split: require 1 <= threshold <= share_count <= 255");
    }

    std::vector<Share> shares(static_cast<size_t>(share_count));
    for (int i = 0; i < share_count; ++i) {
        shares[static_cast<size_t>(i)].index = static_cast<uint8_t>(i + 1);
        shares[static_cast<size_t>(i)].payload.resize(secret.size());
    }

    Bytes coeffs(static_cast<size_t>(threshold));
    for (size_t pos = 0; pos < secret.size(); ++pos) {
        coeffs[0] = secret[pos];
        if (threshold > 1) {
            rng.fill(std::span<uint8_t>(coeffs.data() + 1, static_cast<size_t>(threshold - 1)));
        }
        for (int i = 0; i < share_count; ++i) {
            shares[static_cast<size_t>(i)].payload[pos] =
                eval_poly(coeffs, static_cast<uint8_t>(i + 1));
        }
    }
    sodium_memzero(coeffs.data(), coeffs.size());
    return shares;
}

Bytes combine(std::span<const Share> shares, int threshold) {
    if (threshold < 1) {
        throw ParamError("combine: threshold must be at least 1");
    }

    // Reject duplicate indices outright; they signal caller confusion, not a
    // recoverable subset choice.
    std::vector<const Share*> sorted;
    sorted.reserve(shares.size());
    for (const Share& s : shares) {
        if (s.index == 0) {
            throw ParamError("combine: share index 0 is invalid");
        }
        sorted.push_back(&s);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Share* a, const Share* b) { return a->index < b->index; });
    for (size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i]->index == sorted[i - 1]->index) {
            throw DuplicateShareIndexError("combine: duplicate share index");
        }
    }
    if (sorted.size() < static_cast<size_t>(threshold)) {
        throw InsufficientSharesError("combine: fewer shares than threshold");
    }
    sorted.resize(static_cast<size_t>(threshold));

    const size_t length = sorted[0]->payload.size();
    for (const Share* s : sorted) {
        if (s->payload.size() != length) {
            throw ShareLengthMismatchError("combine: share payload lengths differ");
        }
    }

    // Lagrange basis at x = 0: weight_i = prod_{j != i} x_j / (x_j - x_i).
    std::vector<uint8_t> weights(sorted.size());
    for (size_t i = 0; i < sorted.size(); ++i) {
        uint8_t w = 1;
        const uint8_t xi = sorted[i]->index;
        for (size_t j = 0; j < sorted.size(); ++j) {
            if (j == i) continue;
            const uint8_t xj = sorted[j]->index;
            w = gf256::mul(w, gf256::div(xj, gf256::add(xj, xi)));
        }
        weights[i] = w;
    }

    Bytes secret(length, 0);
    for (size_t pos = 0; pos < length; ++pos) {
        uint8_t acc = 0;
        for (size_t i = 0; i < sorted.size(); ++i) {
            acc = gf256::add(acc, gf256::mul(weights[i], sorted[i]->payload[pos]));
        }
        secret[pos] = acc;
    }
    return secret;
}

}  // namespace qrb::sss
