#include "qrb/bytes.hpp"

#include <algorithm>
#include <array>

#include "qrb/errors.hpp"

namespace qrb {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

constexpr std::array<int8_t, 256> make_b64_reverse() {
    std::array<int8_t, 256> rev{};
    rev.fill(-1);
    for (int i = 0; i < 64; ++i) {
        rev[static_cast<uint8_t>(kB64Alphabet[i])] = static_cast<int8_t>(i);
    }
    return rev;
}

constexpr auto kB64Reverse = make_b64_reverse();

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string to_hex(ByteView data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0F]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw MalformedInputError("hex string has odd length");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        const int hi = hex_nibble(hex[i]);
        const int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw MalformedInputError("invalid hex digit");
        }
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::string base64_encode(ByteView data) {
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    size_t i = 0;
    while (i + 3 <= data.size()) {
        const uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back(kB64Alphabet[v & 63]);
        i += 3;
    }
    const size_t rest = data.size() - i;
    if (rest == 1) {
        const uint32_t v = data[i] << 16;
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back('=');
        out.push_back('=');
    } else if (rest == 2) {
        const uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

Bytes base64_decode(std::string_view text) {
    if (text.size() % 4 != 0) {
        throw MalformedInputError("base64 length not a multiple of 4");
    }
    Bytes out;
    out.reserve(text.size() / 4 * 3);
    for (size_t i = 0; i < text.size(); i += 4) {
        int pad = 0;
        uint32_t v = 0;
        for (size_t j = 0; j < 4; ++j) {
            const char c = text[i + j];
            if (c == '=') {
                // Padding may only appear in the last group, trailing.
                if (i + 4 != text.size() || (j == 2 && text[i + 3] != '=') || j < 2) {
                    throw MalformedInputError("misplaced base64 padding");
                }
                ++pad;
                v <<= 6;
                continue;
            }
            if (pad > 0) {
                throw MalformedInputError("data after base64 padding");
            }
            const int8_t d = kB64Reverse[static_cast<uint8_t>(c)];
            if (d < 0) {
                throw MalformedInputError("invalid base64 character");
            }
            v = (v << 6) | static_cast<uint32_t>(d);
        }
        out.push_back(static_cast<uint8_t>((v >> 16) & 0xFF));
        if (pad < 2) out.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
        if (pad < 1) out.push_back(static_cast<uint8_t>(v & 0xFF));
        // Trailing bits left over from a corrupted final quantum are ignored
        // here; the armor checksum is responsible for catching them.
    }
    return out;
}

bool contains_subsequence(ByteView haystack, ByteView needle) {
    if (needle.empty()) return true;
    if (needle.size() > haystack.size()) return false;
    const auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end());
    return it != haystack.end();
}

void append_u8(Bytes& out, uint8_t v) {
    out.push_back(v);
}

void append_u16be(Bytes& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v & 0xFF));
}

void append_u32be(Bytes& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>((v >> 16) & 0xFF));
    out.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<uint8_t>(v & 0xFF));
}

void append_bytes(Bytes& out, ByteView data) {
    out.insert(out.end(), data.begin(), data.end());
}

uint8_t ByteReader::u8() {
    if (remaining() < 1) throw TruncationError{};
    return data_[pos_++];
}

uint16_t ByteReader::u16be() {
    if (remaining() < 2) throw TruncationError{};
    const uint16_t v = static_cast<uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
    pos_ += 2;
    return v;
}

uint32_t ByteReader::u32be() {
    if (remaining() < 4) throw TruncationError{};
    const uint32_t v = (static_cast<uint32_t>(data_[pos_]) << 24) |
                       (static_cast<uint32_t>(data_[pos_ + 1]) << 16) |
                       (static_cast<uint32_t>(data_[pos_ + 2]) << 8) |
                       static_cast<uint32_t>(data_[pos_ + 3]);
    pos_ += 4;
    return v;
}

ByteView ByteReader::take(size_t n) {
    if (remaining() < n) throw TruncationError{};
    const ByteView view = data_.subspan(pos_, n);
    pos_ += n;
    return view;
}

}  // namespace qrb
