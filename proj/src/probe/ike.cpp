// ike.cpp
//
// ISAKMP/IKEv1 Main Mode SA proposal (RFC 2408/2409). One SA payload,
// one proposal, seven transforms.

#include "vpnscan/probe.hpp"

namespace vpnscan::probe {

namespace {

// ISAKMP next-payload types
constexpr uint8_t kPayloadNone = 0;
constexpr uint8_t kPayloadSa = 1;
constexpr uint8_t kPayloadTransform = 3;
constexpr uint8_t kPayloadNotification = 11;

constexpr uint8_t kVersion = 0x10;             // major 1, minor 0
constexpr uint8_t kExchangeIdentityProt = 2;   // Main Mode

constexpr uint32_t kDoiIpsec = 1;
constexpr uint32_t kSitIdentityOnly = 1;
constexpr uint8_t kProtoIsakmp = 1;
constexpr uint8_t kTransformKeyIke = 1;

// Oakley attribute types (TV format)
constexpr uint16_t kAttrEncryption = 1;
constexpr uint16_t kAttrHash = 2;
constexpr uint16_t kAttrAuthMethod = 3;
constexpr uint16_t kAttrGroup = 4;
constexpr uint16_t kAttrLifeType = 11;
constexpr uint16_t kAttrLifeDuration = 12;
constexpr uint16_t kAttrKeyLength = 14;

constexpr uint16_t kAuthPresharedKey = 1;
constexpr uint16_t kLifeTypeSeconds = 1;
constexpr uint16_t kLifeSeconds = 28800;

void put_attr(Bytes& b, uint16_t type, uint16_t value) {
    put_u16(b, static_cast<uint16_t>(0x8000 | type));
    put_u16(b, value);
}

Bytes encode_transform(const IkeTransform& t, uint8_t number, bool last) {
    Bytes b;
    put_u8(b, last ? kPayloadNone : kPayloadTransform);
    put_u8(b, 0);
    put_u16(b, 0);  // length, patched below
    put_u8(b, number);
    put_u8(b, kTransformKeyIke);
    put_u16(b, 0);  // reserved
    put_attr(b, kAttrEncryption, t.encryption);
    if (t.key_length) put_attr(b, kAttrKeyLength, t.key_length);
    put_attr(b, kAttrHash, t.hash);
    put_attr(b, kAttrAuthMethod, kAuthPresharedKey);
    put_attr(b, kAttrGroup, t.dh_group);
    put_attr(b, kAttrLifeType, kLifeTypeSeconds);
    put_attr(b, kAttrLifeDuration, kLifeSeconds);
    patch_u16(b, 2, static_cast<uint16_t>(b.size()));
    return b;
}

}  // namespace

const std::vector<IkeTransform>& default_ike_transforms() {
    // enc ids: DES=1, 3DES=5, AES-CBC=7; hash ids: MD5=1, SHA1=2,
    // SHA2-256=4, SHA2-384=5
    static const std::vector<IkeTransform> kSuites = {
        {5, 0, 2, 2},     // 3DES / SHA1 / DH2
        {7, 128, 2, 2},   // AES128 / SHA1 / DH2
        {7, 128, 4, 14},  // AES128 / SHA256 / DH14
        {7, 256, 2, 5},   // AES256 / SHA1 / DH5
        {7, 256, 4, 14},  // AES256 / SHA256 / DH14
        {1, 0, 1, 1},     // DES / MD5 / DH1
        {7, 256, 5, 14},  // AES256 / SHA384 / DH14
    };
    return kSuites;
}

ProbePayload build_ike_probe(RandomSource& rng, const std::vector<IkeTransform>& transforms) {
    Bytes transform_block;
    for (size_t i = 0; i < transforms.size(); ++i) {
        Bytes t = encode_transform(transforms[i], static_cast<uint8_t>(i + 1),
                                   i + 1 == transforms.size());
        put_bytes(transform_block, t);
    }

    Bytes proposal;
    put_u8(proposal, kPayloadNone);
    put_u8(proposal, 0);
    put_u16(proposal, static_cast<uint16_t>(8 + transform_block.size()));
    put_u8(proposal, 1);  // proposal #
    put_u8(proposal, kProtoIsakmp);
    put_u8(proposal, 0);  // SPI size
    put_u8(proposal, static_cast<uint8_t>(transforms.size()));
    put_bytes(proposal, transform_block);

    Bytes sa;
    put_u8(sa, kPayloadNone);
    put_u8(sa, 0);
    put_u16(sa, static_cast<uint16_t>(12 + proposal.size()));
    put_u32(sa, kDoiIpsec);
    put_u32(sa, kSitIdentityOnly);
    put_bytes(sa, proposal);

    Bytes pkt;
    put_u64(pkt, rng.nonzero_u64());  // initiator cookie
    put_u64(pkt, 0);                  // responder cookie
    put_u8(pkt, kPayloadSa);
    put_u8(pkt, kVersion);
    put_u8(pkt, kExchangeIdentityProt);
    put_u8(pkt, 0);   // flags
    put_u32(pkt, 0);  // message id
    put_u32(pkt, static_cast<uint32_t>(28 + sa.size()));
    put_bytes(pkt, sa);

    return {Protocol::ike, std::move(pkt), "main-mode-sa", Transport::udp};
}

DetectionVerdict parse_ike_response(const ProbePayload& probe, ByteView response) {
    DetectionVerdict v;
    v.protocol = Protocol::ike;
    size_t excerpt = std::min(response.size(), kRawExcerptCap);
    v.raw_excerpt.assign(response.begin(), response.begin() + excerpt);

    if (response.size() < 28) {
        v.evidence.push_back("short read");
        return v;
    }
    uint64_t init_cookie = get_u64(response, 0);
    uint64_t resp_cookie = get_u64(response, 8);
    uint8_t next_payload = get_u8(response, 16);
    uint8_t version = get_u8(response, 17);

    if (probe.bytes.size() >= 8 && init_cookie != get_u64(probe.bytes, 0)) {
        v.evidence.push_back("cookie mismatch");
        return v;
    }
    if ((version >> 4) != 1) {
        v.evidence.push_back("unsupported ISAKMP major version");
        return v;
    }
    if (resp_cookie == 0) {
        v.evidence.push_back("responder cookie zero");
        return v;
    }
    if (next_payload != kPayloadSa && next_payload != kPayloadNotification) {
        v.evidence.push_back("unexpected next payload");
        return v;
    }

    v.detected = true;
    v.evidence.push_back("initiator cookie echoed");
    v.evidence.push_back("responder-cookie nonzero");
    v.evidence.push_back(next_payload == kPayloadSa ? "next payload SA"
                                                    : "next payload Notification");
    return v;
}

}  // namespace vpnscan::probe
