#include "qrb/gf256.hpp"

#include "doctest.h"

using namespace qrb;

TEST_CASE("gf256 zero and identity") {
    CHECK(gf256::mul(0x00, 0x57) == 0x00);
    CHECK(gf256::mul(0x57, 0x00) == 0x00);
    CHECK(gf256::mul(0x01, 0xAB) == 0xAB);
    CHECK(gf256::mul(0xAB, 0x01) == 0xAB);
}

TEST_CASE("gf256 known products under 0x11B") {
    // Textbook products for the AES polynomial.
    CHECK(gf256::mul(0x57, 0x83) == 0xC1);
    CHECK(gf256::mul(0x57, 0x13) == 0xFE);
    CHECK(gf256::mul(0x02, 0x80) == 0x1B);
}

TEST_CASE("gf256 table path matches bitwise multiply exhaustively") {
    for (int a = 0; a < 256; ++a) {
        for (int b = 0; b < 256; ++b) {
            const auto ua = static_cast<uint8_t>(a);
            const auto ub = static_cast<uint8_t>(b);
            REQUIRE(gf256::mul(ua, ub) == gf256::detail::mul_bitwise(ua, ub));
        }
    }
}

TEST_CASE("gf256 inverse law over all nonzero elements") {
    for (int a = 1; a < 256; ++a) {
        const auto ua = static_cast<uint8_t>(a);
        REQUIRE(gf256::mul(ua, gf256::inv(ua)) == 0x01);
    }
    CHECK_THROWS_AS(gf256::inv(0), ParamError);
}

TEST_CASE("gf256 field laws on sampled triples") {
    for (int a = 0; a < 256; a += 5) {
        for (int b = 0; b < 256; b += 7) {
            for (int c = 0; c < 256; c += 11) {
                const auto ua = static_cast<uint8_t>(a);
                const auto ub = static_cast<uint8_t>(b);
                const auto uc = static_cast<uint8_t>(c);
                // commutativity
                REQUIRE(gf256::mul(ua, ub) == gf256::mul(ub, ua));
                // associativity
                REQUIRE(gf256::mul(gf256::mul(ua, ub), uc) ==
                        gf256::mul(ua, gf256::mul(ub, uc)));
                // distributivity over XOR
                REQUIRE(gf256::mul(ua, gf256::add(ub, uc)) ==
                        gf256::add(gf256::mul(ua, ub), gf256::mul(ua, uc)));
            }
        }
    }
}
