// pptp.cpp
//
// PPTP Start-Control-Connection-Request/Reply (RFC 2637). Fixed 156-octet
// control messages; the SCCRP vendor field is the fingerprinting hook.

#include "vpnscan/probe.hpp"

#include <algorithm>

namespace vpnscan::probe {

namespace {

constexpr uint16_t kSccrqLength = 156;
constexpr uint16_t kMsgTypeControl = 1;
constexpr uint32_t kMagicCookie = 0x1A2B3C4D;
constexpr uint16_t kCtrlSccrq = 1;
constexpr uint16_t kCtrlSccrp = 2;
constexpr uint16_t kProtocolVersion = 0x0100;
constexpr uint32_t kFramingAny = 3;  // async | sync
constexpr uint32_t kBearerAny = 3;   // analog | digital

constexpr size_t kVendorOffset = 92;
constexpr size_t kVendorFieldSize = 64;

void put_padded(Bytes& b, std::string_view s, size_t field) {
    size_t n = std::min(s.size(), field);
    put_str(b, s.substr(0, n));
    b.insert(b.end(), field - n, 0);
}

std::string trim_fixed_field(ByteView b, size_t off, size_t len) {
    std::string s;
    for (size_t i = 0; i < len && off + i < b.size(); ++i) {
        char c = static_cast<char>(b[off + i]);
        if (c == '\0') break;
        s.push_back(c);
    }
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    return s;
}

}  // namespace

ProbePayload build_pptp_probe() {
    Bytes b;
    put_u16(b, kSccrqLength);
    put_u16(b, kMsgTypeControl);
    put_u32(b, kMagicCookie);
    put_u16(b, kCtrlSccrq);
    put_u16(b, 0);  // reserved0
    put_u16(b, kProtocolVersion);
    put_u16(b, 0);  // reserved1
    put_u32(b, kFramingAny);
    put_u32(b, kBearerAny);
    put_u16(b, 0);  // max channels (none; control connection only)
    put_u16(b, 0);  // firmware revision
    put_padded(b, "scanner", 64);  // hostname
    put_padded(b, "", kVendorFieldSize);
    return {Protocol::pptp, std::move(b), "sccrq", Transport::tcp};
}

DetectionVerdict parse_pptp_response(ByteView response) {
    DetectionVerdict v;
    v.protocol = Protocol::pptp;
    size_t excerpt = std::min(response.size(), kRawExcerptCap);
    v.raw_excerpt.assign(response.begin(), response.begin() + excerpt);

    if (response.size() < 12) {
        v.evidence.push_back("short read");
        return v;
    }
    if (get_u32(response, 4) != kMagicCookie) {
        v.evidence.push_back("magic cookie mismatch");
        return v;
    }
    if (get_u16(response, 2) != kMsgTypeControl) {
        v.evidence.push_back("not a control message");
        return v;
    }
    if (get_u16(response, 8) != kCtrlSccrp) {
        v.evidence.push_back("not an SCCRP");
        return v;
    }
    uint16_t declared_len = get_u16(response, 0);
    if (declared_len < kSccrqLength || response.size() < kSccrqLength) {
        v.evidence.push_back("truncated SCCRP");
        return v;
    }

    v.detected = true;
    v.evidence.push_back("magic cookie");
    v.evidence.push_back("SCCRP message type");
    std::string vendor = trim_fixed_field(response, kVendorOffset, kVendorFieldSize);
    if (!vendor.empty()) {
        v.vendor = vendor;
        v.evidence.push_back("vendor field present");
    }
    return v;
}

}  // namespace vpnscan::probe
