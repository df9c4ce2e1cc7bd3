// openvpn.cpp
//
// OpenVPN control-channel hard reset packets. Client resets carry no TLS
// payload; the v1/v2 opcode selects the key exchange method. Unsigned
// probes only reach servers without tls-auth; the random-HMAC variant
// carries a random-fill signature in tls-auth framing.

#include "vpnscan/probe.hpp"

#include <algorithm>

namespace vpnscan::probe {

namespace {

constexpr uint8_t kOpHardResetClientV1 = 1;
constexpr uint8_t kOpHardResetServerV1 = 2;
constexpr uint8_t kOpHardResetClientV2 = 7;
constexpr uint8_t kOpHardResetServerV2 = 8;

constexpr size_t kSessionIdLen = 8;
constexpr size_t kHmacSha1Len = 20;  // tls-auth default digest
constexpr size_t kMaxPlausibleAcks = 8;

uint8_t opcode_byte(uint8_t opcode) { return static_cast<uint8_t>(opcode << 3); }  // key id 0

// Without tls-auth: opcode | session id | ack count | acked ids |
// [remote session id when acks present] | message packet id.
// With tls-auth, HMAC + replay packet id + timestamp follow the session id.
bool reset_shape_ok(ByteView pkt, size_t hmac_len) {
    size_t base = 1 + kSessionIdLen + (hmac_len ? hmac_len + 4 + 4 : 0);
    if (pkt.size() < base + 1 + 4) return false;
    if (get_u64(pkt, 1) == 0) return false;  // session id never zero
    uint8_t ack_count = get_u8(pkt, base);
    if (ack_count > kMaxPlausibleAcks) return false;
    size_t expect = base + 1 + 4u * ack_count + (ack_count ? kSessionIdLen : 0) + 4;
    if (pkt.size() != expect) return false;
    return get_u32(pkt, expect - 4) == 0;  // first message packet id
}

}  // namespace

ProbePayload build_openvpn_probe(Transport transport, KeyMethod key_method, HmacMode hmac,
                                 RandomSource& rng) {
    Bytes pkt;
    uint8_t opcode =
        key_method == KeyMethod::km1 ? kOpHardResetClientV1 : kOpHardResetClientV2;
    put_u8(pkt, opcode_byte(opcode));
    put_u64(pkt, rng.nonzero_u64());  // session id
    if (hmac == HmacMode::random) {
        uint8_t sig[kHmacSha1Len];
        rng.fill(sig);
        put_bytes(pkt, sig);
        put_u32(pkt, 1);  // replay packet id
        put_u32(pkt, 0);  // net time (ignored by servers on packet id 1)
    }
    put_u8(pkt, 0);   // no acks
    put_u32(pkt, 0);  // message packet id

    std::string variant = std::string(to_string(transport)) + ":" + to_string(key_method);
    if (hmac == HmacMode::random) variant += ":hmac-random";

    if (transport == Transport::tcp) {
        Bytes framed;
        put_u16(framed, static_cast<uint16_t>(pkt.size()));
        put_bytes(framed, pkt);
        pkt = std::move(framed);
    }
    return {Protocol::openvpn, std::move(pkt), variant, transport};
}

DetectionVerdict parse_openvpn_response(const ProbePayload& probe, ByteView response) {
    DetectionVerdict v;
    v.protocol = Protocol::openvpn;
    size_t excerpt = std::min(response.size(), kRawExcerptCap);
    v.raw_excerpt.assign(response.begin(), response.begin() + excerpt);

    ByteView pkt = response;
    if (probe.transport == Transport::tcp) {
        if (response.size() < 2) {
            v.evidence.push_back("short read");
            return v;
        }
        uint16_t framed_len = get_u16(response, 0);
        if (response.size() < 2u + framed_len) {
            v.evidence.push_back("truncated TCP frame");
            return v;
        }
        pkt = response.subspan(2, framed_len);
    }
    if (pkt.size() < 1 + kSessionIdLen) {
        v.evidence.push_back("short read");
        return v;
    }

    uint8_t opcode = static_cast<uint8_t>(get_u8(pkt, 0) >> 3);
    if (opcode != kOpHardResetServerV1 && opcode != kOpHardResetServerV2) {
        v.evidence.push_back("not a server hard-reset opcode");
        return v;
    }
    bool plain = reset_shape_ok(pkt, 0);
    bool signed_frame = reset_shape_ok(pkt, kHmacSha1Len);
    if (!plain && !signed_frame) {
        v.evidence.push_back("malformed reset packet");
        return v;
    }

    v.detected = true;
    v.evidence.push_back(opcode == kOpHardResetServerV2 ? "server hard-reset v2"
                                                        : "server hard-reset v1");
    if (signed_frame && !plain) v.evidence.push_back("tls-auth framing");
    v.key_method = opcode == kOpHardResetServerV2 ? KeyMethod::km2 : KeyMethod::km1;
    return v;
}

}  // namespace vpnscan::probe
