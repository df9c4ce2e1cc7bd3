// ip.cpp

#include "vpnscan/ip.hpp"

#include <arpa/inet.h>

#include <charconv>
#include <cstring>
#include <stdexcept>

namespace vpnscan {

std::optional<IpAddress> IpAddress::parse(std::string_view text) {
    std::string z(text);
    IpAddress a;
    in_addr v4{};
    if (inet_pton(AF_INET, z.c_str(), &v4) == 1) {
        std::memcpy(a.bytes_.data(), &v4, 4);
        a.len_ = 4;
        return a;
    }
    in6_addr v6{};
    if (inet_pton(AF_INET6, z.c_str(), &v6) == 1) {
        std::memcpy(a.bytes_.data(), &v6, 16);
        a.len_ = 16;
        return a;
    }
    return std::nullopt;
}

std::string IpAddress::to_string() const {
    char buf[INET6_ADDRSTRLEN] = {};
    if (len_ == 4) {
        inet_ntop(AF_INET, bytes_.data(), buf, sizeof buf);
    } else if (len_ == 16) {
        inet_ntop(AF_INET6, bytes_.data(), buf, sizeof buf);
    } else {
        return "<unset>";
    }
    return buf;
}

IpAddress IpAddress::next() const {
    IpAddress out = *this;
    for (int i = static_cast<int>(len_) - 1; i >= 0; --i) {
        if (++out.bytes_[static_cast<size_t>(i)] != 0) break;
    }
    return out;
}

std::optional<Cidr> Cidr::parse(std::string_view text) {
    Cidr c;
    auto slash = text.find('/');
    std::string_view addr_part = text.substr(0, slash);
    auto addr = IpAddress::parse(addr_part);
    if (!addr) return std::nullopt;
    c.network_ = *addr;
    unsigned max_len = c.max_prefix_length();
    if (slash == std::string_view::npos) {
        c.prefix_len_ = max_len;
    } else {
        std::string_view len_part = text.substr(slash + 1);
        unsigned len = 0;
        auto [p, ec] = std::from_chars(len_part.data(), len_part.data() + len_part.size(), len);
        if (ec != std::errc() || p != len_part.data() + len_part.size() || len > max_len) {
            return std::nullopt;
        }
        c.prefix_len_ = len;
    }
    // canonicalize: zero host bits
    auto raw = c.network_.raw();
    IpAddress canon = c.network_;
    auto* bytes = const_cast<uint8_t*>(canon.data());
    for (unsigned bit = c.prefix_len_; bit < max_len; ++bit) {
        bytes[bit / 8] &= static_cast<uint8_t>(~(0x80u >> (bit % 8)));
    }
    (void)raw;
    c.network_ = canon;
    return c;
}

bool Cidr::contains(const IpAddress& ip) const {
    if (ip.byte_length() != network_.byte_length()) return false;
    unsigned full = prefix_len_ / 8;
    if (std::memcmp(ip.data(), network_.data(), full) != 0) return false;
    unsigned rem = prefix_len_ % 8;
    if (rem == 0) return true;
    uint8_t mask = static_cast<uint8_t>(0xff00u >> rem);
    return (ip.data()[full] & mask) == (network_.data()[full] & mask);
}

uint64_t Cidr::address_count() const {
    unsigned host_bits = max_prefix_length() - prefix_len_;
    if (host_bits >= 63) return uint64_t{1} << 63;
    return uint64_t{1} << host_bits;
}

std::vector<IpAddress> Cidr::expand(uint64_t limit) const {
    uint64_t n = address_count();
    if (n > limit) {
        throw std::runtime_error("prefix " + to_string() + " expands to too many addresses");
    }
    std::vector<IpAddress> out;
    out.reserve(n);
    IpAddress cur = network_;
    for (uint64_t i = 0; i < n; ++i) {
        out.push_back(cur);
        cur = cur.next();
    }
    return out;
}

std::string Cidr::to_string() const {
    return network_.to_string() + "/" + std::to_string(prefix_len_);
}

}  // namespace vpnscan
