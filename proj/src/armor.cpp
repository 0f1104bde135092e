#include "qrb/armor.hpp"

#include <zlib.h>

#include <cctype>
#include <cstdio>

#include "qrb/errors.hpp"

namespace qrb::armor {

namespace {

constexpr size_t kWrapColumn = 64;

std::string begin_line(std::string_view label) {
    return "-----BEGIN " + std::string(label) + "-----";
}

std::string end_line(std::string_view label) {
    return "-----END " + std::string(label) + "-----";
}

uint32_t crc32_of(ByteView data) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    crc = ::crc32(crc, data.data(), static_cast<uInt>(data.size()));
    return static_cast<uint32_t>(crc);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    size_t start = 0;
    while (start <= text.size()) {
        const size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

}  // namespace

std::string armor(std::string_view label, ByteView data, bool with_checksum) {
    const std::string body = base64_encode(data);
    std::string out = begin_line(label);
    out.push_back('\n');
    for (size_t i = 0; i < body.size(); i += kWrapColumn) {
        out.append(body.substr(i, kWrapColumn));
        out.push_back('\n');
    }
    if (with_checksum) {
        char crc_line[16];
        std::snprintf(crc_line, sizeof crc_line, "=%08x", crc32_of(data));
        out.append(crc_line);
        out.push_back('\n');
    }
    out.append(end_line(label));
    out.push_back('\n');
    return out;
}

Bytes dearmor(std::string_view label, std::string_view text, bool require_checksum) {
    const std::string begin = begin_line(label);
    const std::string end = end_line(label);

    std::string body;
    bool saw_begin = false;
    bool saw_end = false;
    bool have_crc = false;
    uint32_t declared_crc = 0;

    for (std::string_view raw : split_lines(text)) {
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (!saw_begin) {
            if (line != begin) {
                throw ArmorError(ArmorError::Kind::bad_header,
                                 "expected '" + begin + "'");
            }
            saw_begin = true;
            continue;
        }
        if (line == end) {
            saw_end = true;
            break;
        }
        if (line.front() == '=' && line.size() == 9) {
            Bytes crc_bytes;
            try {
                crc_bytes = from_hex(line.substr(1));
            } catch (const MalformedInputError&) {
                throw ArmorError(ArmorError::Kind::bad_header, "unreadable checksum line");
            }
            declared_crc = (static_cast<uint32_t>(crc_bytes[0]) << 24) |
                           (static_cast<uint32_t>(crc_bytes[1]) << 16) |
                           (static_cast<uint32_t>(crc_bytes[2]) << 8) |
                           static_cast<uint32_t>(crc_bytes[3]);
            have_crc = true;
            continue;
        }
        if (have_crc) {
            throw ArmorError(ArmorError::Kind::bad_header, "body after checksum line");
        }
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c))) body.push_back(c);
        }
    }

    if (!saw_begin || !saw_end) {
        throw ArmorError(ArmorError::Kind::bad_header, "missing armor header or footer");
    }
    if (require_checksum && !have_crc) {
        throw ArmorError(ArmorError::Kind::bad_header, "missing checksum line");
    }

    Bytes data;
    try {
        data = base64_decode(body);
    } catch (const MalformedInputError& e) {
        throw ArmorError(ArmorError::Kind::bad_encoding, e.what());
    }
    if (have_crc && crc32_of(data) != declared_crc) {
        throw ArmorError(ArmorError::Kind::checksum_mismatch, "armor checksum mismatch");
    }
    return data;
}

bool looks_armored(std::string_view text) {
    return trim(text).substr(0, 11) == "-----BEGIN ";
}

}  // namespace qrb::armor
