// bytes.hpp
//
// byte-buffer helpers: big-endian packing, hex encode/decode, and the
// hex fixture format (one octet pair per byte, '#' comments).

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vpnscan {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

inline void put_u8(Bytes& b, uint8_t v) { b.push_back(v); }

inline void put_u16(Bytes& b, uint16_t v) {
    b.push_back(static_cast<uint8_t>(v >> 8));
    b.push_back(static_cast<uint8_t>(v));
}

inline void put_u32(Bytes& b, uint32_t v) {
    b.push_back(static_cast<uint8_t>(v >> 24));
    b.push_back(static_cast<uint8_t>(v >> 16));
    b.push_back(static_cast<uint8_t>(v >> 8));
    b.push_back(static_cast<uint8_t>(v));
}

inline void put_u64(Bytes& b, uint64_t v) {
    put_u32(b, static_cast<uint32_t>(v >> 32));
    put_u32(b, static_cast<uint32_t>(v));
}

inline void put_bytes(Bytes& b, ByteView v) { b.insert(b.end(), v.begin(), v.end()); }

inline void put_str(Bytes& b, std::string_view s) {
    b.insert(b.end(), s.begin(), s.end());
}

// Readers return 0 on out-of-range access; callers that care about
// truncation must check sizes first.
inline uint8_t get_u8(ByteView b, size_t off) { return off < b.size() ? b[off] : 0; }

inline uint16_t get_u16(ByteView b, size_t off) {
    if (off + 2 > b.size()) return 0;
    return static_cast<uint16_t>(b[off] << 8 | b[off + 1]);
}

inline uint32_t get_u32(ByteView b, size_t off) {
    if (off + 4 > b.size()) return 0;
    return static_cast<uint32_t>(b[off]) << 24 | static_cast<uint32_t>(b[off + 1]) << 16
        | static_cast<uint32_t>(b[off + 2]) << 8 | static_cast<uint32_t>(b[off + 3]);
}

inline uint64_t get_u64(ByteView b, size_t off) {
    return static_cast<uint64_t>(get_u32(b, off)) << 32 | get_u32(b, off + 4);
}

// Patch a previously reserved big-endian field in place.
inline void patch_u16(Bytes& b, size_t off, uint16_t v) {
    b[off] = static_cast<uint8_t>(v >> 8);
    b[off + 1] = static_cast<uint8_t>(v);
}

inline void patch_u32(Bytes& b, size_t off, uint32_t v) {
    b[off] = static_cast<uint8_t>(v >> 24);
    b[off + 1] = static_cast<uint8_t>(v >> 16);
    b[off + 2] = static_cast<uint8_t>(v >> 8);
    b[off + 3] = static_cast<uint8_t>(v);
}

std::string to_hex(ByteView b);
Bytes from_hex(std::string_view hex);  // throws std::invalid_argument on bad input

// Fixture format: whitespace-separated octet pairs, '#' starts a comment.
Bytes load_hex_fixture(const std::string& path);

}  // namespace vpnscan
