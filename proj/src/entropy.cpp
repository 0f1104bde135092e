#include "qrb/entropy.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>

#include "qrb/errors.hpp"

namespace qrb {

namespace detail {

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0) {
        throw EntropyError("libsodium initialisation failed");
    }
}

}  // namespace detail

uint64_t EntropySource::next_below(uint64_t bound) {
    if (bound == 0) {
        throw ParamError("next_below: bound must be nonzero");
    }
    // Rejection sampling over the top multiple of bound.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
        uint64_t v = 0;
        uint8_t raw[8];
        fill(raw);
        std::memcpy(&v, raw, 8);
        if (v < limit) {
            return v % bound;
        }
    }
}

SystemEntropy::SystemEntropy() {
    detail::ensure_sodium();
}

void SystemEntropy::fill(std::span<uint8_t> out) {
    randombytes_buf(out.data(), out.size());
}

SeededEntropy::SeededEntropy(uint64_t seed) {
    detail::ensure_sodium();
    uint8_t seed_bytes[8];
    for (int i = 0; i < 8; ++i) {
        seed_bytes[i] = static_cast<uint8_t>(seed >> (8 * i));
    }
    crypto_hash_sha256(key_.data(), seed_bytes, sizeof seed_bytes);
}

void SeededEntropy::refill() {
    uint8_t nonce[crypto_stream_chacha20_NONCEBYTES] = {0};
    for (int i = 0; i < 8; ++i) {
        nonce[i] = static_cast<uint8_t>(counter_ >> (8 * i));
    }
    crypto_stream_chacha20(block_.data(), block_.size(), nonce, key_.data());
    ++counter_;
    used_ = 0;
}

void SeededEntropy::fill(std::span<uint8_t> out) {
    size_t produced = 0;
    while (produced < out.size()) {
        if (used_ == block_.size()) {
            refill();
        }
        const size_t chunk = std::min(out.size() - produced, block_.size() - used_);
        std::memcpy(out.data() + produced, block_.data() + used_, chunk);
        produced += chunk;
        used_ += chunk;
    }
}

}  // namespace qrb
