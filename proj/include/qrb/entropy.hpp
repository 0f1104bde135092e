#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "qrb/bytes.hpp"

namespace qrb {

namespace detail {
/// Initialises libsodium once per process. Throws EntropyError on failure.
void ensure_sodium();
}  // namespace detail

/// Injected randomness. Production code uses SystemEntropy; tests use
/// SeededEntropy so every artifact is reproducible. A source is consumed by
/// one caller at a time.
class EntropySource {
public:
    virtual ~EntropySource() = default;
    virtual void fill(std::span<uint8_t> out) = 0;

    uint8_t next_byte() {
        uint8_t b = 0;
        fill({&b, 1});
        return b;
    }

    Bytes next(size_t n) {
        Bytes out(n);
        fill(out);
        return out;
    }

    /// Uniform draw in [0, bound). bound must be nonzero.
    uint64_t next_below(uint64_t bound);
};

/// Cryptographically secure source backed by the operating system.
class SystemEntropy final : public EntropySource {
public:
    SystemEntropy();
    void fill(std::span<uint8_t> out) override;
};

/// Deterministic stream cipher keyed from a 64-bit seed. Test use only.
class SeededEntropy final : public EntropySource {
public:
    explicit SeededEntropy(uint64_t seed);
    void fill(std::span<uint8_t> out) override;

private:
    void refill();

    std::array<uint8_t, 32> key_;
    std::array<uint8_t, 64> block_{};
    uint64_t counter_ = 0;
    size_t used_ = 64;  // forces refill on first use
};

}  // namespace qrb
