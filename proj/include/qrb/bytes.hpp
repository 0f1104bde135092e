#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrb {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

inline ByteView as_bytes(const std::string_view s) {
    return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);  // throws MalformedInputError

std::string base64_encode(ByteView data);
Bytes base64_decode(std::string_view text);  // strict alphabet/length, throws MalformedInputError

/// True iff `needle` occurs as a contiguous subsequence of `haystack`.
bool contains_subsequence(ByteView haystack, ByteView needle);

// Big-endian wire helpers shared by the bundle and frame encoders.
void append_u8(Bytes& out, uint8_t v);
void append_u16be(Bytes& out, uint16_t v);
void append_u32be(Bytes& out, uint32_t v);
void append_bytes(Bytes& out, ByteView data);

/// Raised by ByteReader when a read runs past the end of the buffer.
/// Deliberately not part of the qrb::Error hierarchy: decoders catch it
/// and rethrow their own truncation error.
struct TruncationError {};

class ByteReader {
public:
    explicit ByteReader(ByteView data) : data_(data) {}

    size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }

    uint8_t u8();
    uint16_t u16be();
    uint32_t u32be();
    ByteView take(size_t n);

private:
    ByteView data_;
    size_t pos_ = 0;
};

}  // namespace qrb
