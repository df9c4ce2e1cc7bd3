// ip.hpp
//
// Small value types for IPv4/IPv6 addresses and CIDR prefixes.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vpnscan {

class IpAddress {
public:
    IpAddress() = default;

    static std::optional<IpAddress> parse(std::string_view text);

    bool is_v4() const { return len_ == 4; }
    bool is_v6() const { return len_ == 16; }
    size_t byte_length() const { return len_; }
    const uint8_t* data() const { return bytes_.data(); }

    std::array<uint8_t, 4> v4_octets() const {
        return {bytes_[0], bytes_[1], bytes_[2], bytes_[3]};
    }
    const std::array<uint8_t, 16>& raw() const { return bytes_; }

    std::string to_string() const;

    auto operator<=>(const IpAddress&) const = default;

    // Numeric successor within the same family; wraps silently.
    IpAddress next() const;

    friend struct IpAddressHash;

private:
    std::array<uint8_t, 16> bytes_{};
    uint8_t len_ = 0;  // 4 or 16; 0 = unset
};

struct IpAddressHash {
    size_t operator()(const IpAddress& a) const {
        size_t h = a.len_;
        for (size_t i = 0; i < a.len_; ++i) h = h * 131 + a.bytes_[i];
        return h;
    }
};

class Cidr {
public:
    // Accepts "addr/len" or a bare address (host prefix).
    static std::optional<Cidr> parse(std::string_view text);

    const IpAddress& network() const { return network_; }
    unsigned prefix_length() const { return prefix_len_; }
    unsigned max_prefix_length() const { return network_.is_v4() ? 32u : 128u; }

    bool contains(const IpAddress& ip) const;
    uint64_t address_count() const;  // capped at 2^63 for wide v6 prefixes

    // Enumerates all addresses; throws when the prefix spans more than
    // `limit` addresses (guards against /8-style v6 expansion).
    std::vector<IpAddress> expand(uint64_t limit) const;

    std::string to_string() const;

    bool operator==(const Cidr&) const = default;

private:
    IpAddress network_;
    unsigned prefix_len_ = 0;
};

}  // namespace vpnscan
