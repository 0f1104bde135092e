#pragma once

#include <array>
#include <cstdint>

#include "qrb/errors.hpp"

namespace qrb::gf256 {

/// Reduction polynomial x^8 + x^4 + x^3 + x + 1 (0x11B, the AES polynomial).
inline constexpr uint16_t kReductionPoly = 0x11B;

/// Field addition is XOR; subtraction is the same operation.
constexpr uint8_t add(uint8_t a, uint8_t b) {
    return a ^ b;
}

namespace detail {

// Carry-less multiply with reduction, used only to build the tables.
constexpr uint8_t mul_bitwise(uint8_t a, uint8_t b) {
    uint8_t result = 0;
    uint16_t acc = a;
    while (b != 0) {
        if (b & 1) {
            result ^= static_cast<uint8_t>(acc);
        }
        acc <<= 1;
        if (acc & 0x100) {
            acc ^= kReductionPoly;
        }
        b >>= 1;
    }
    return result;
}

struct Tables {
    // exp_[i] = g^i for generator g = 0x03; exp_ is doubled so that
    // exp_[log_[a] + log_[b]] never needs a modular reduction.
    std::array<uint8_t, 510> exp_{};
    std::array<uint8_t, 256> log_{};
};

constexpr Tables make_tables() {
    Tables t{};
    uint8_t x = 1;
    for (int i = 0; i < 255; ++i) {
        t.exp_[i] = x;
        t.exp_[i + 255] = x;
        t.log_[x] = static_cast<uint8_t>(i);
        x = mul_bitwise(x, 0x03);
    }
    return t;
}

inline constexpr Tables kTables = make_tables();

}  // namespace detail

constexpr uint8_t mul(uint8_t a, uint8_t b) {
    if (a == 0 || b == 0) {
        return 0;
    }
    return detail::kTables.exp_[detail::kTables.log_[a] + detail::kTables.log_[b]];
}

/// Multiplicative inverse of a nonzero element.
constexpr uint8_t inv(uint8_t a) {
    if (a == 0) {
        throw ParamError("gf256: zero has no multiplicative inverse");
    }
    return detail::kTables.exp_[255 - detail::kTables.log_[a]];
}

/// a / b, b nonzero.
constexpr uint8_t div(uint8_t a, uint8_t b) {
    return mul(a, inv(b));
}

}  // namespace qrb::gf256
