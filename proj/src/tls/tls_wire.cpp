// tls_wire.cpp

#include "vpnscan/tls_wire.hpp"

#include <algorithm>
#include <cstdio>

namespace vpnscan::tlswire {

namespace {

constexpr uint8_t kHandshakeClientHello = 1;
constexpr uint8_t kHandshakeServerHello = 2;
constexpr uint8_t kHandshakeCertificate = 11;
constexpr uint8_t kHandshakeServerHelloDone = 14;

constexpr uint16_t kExtServerName = 0;
constexpr uint16_t kExtHeartbeat = 15;

void put_u24(Bytes& b, uint32_t v) {
    b.push_back(static_cast<uint8_t>(v >> 16));
    b.push_back(static_cast<uint8_t>(v >> 8));
    b.push_back(static_cast<uint8_t>(v));
}

uint32_t get_u24(ByteView b, size_t off) {
    if (off + 3 > b.size()) return 0;
    return static_cast<uint32_t>(b[off]) << 16 | static_cast<uint32_t>(b[off + 1]) << 8
        | b[off + 2];
}

Bytes wrap_record(uint8_t type, uint16_t version, ByteView payload) {
    Bytes rec;
    put_u8(rec, type);
    put_u16(rec, version);
    put_u16(rec, static_cast<uint16_t>(payload.size()));
    put_bytes(rec, payload);
    return rec;
}

Bytes wrap_handshake(uint8_t msg_type, ByteView body) {
    Bytes h;
    put_u8(h, msg_type);
    put_u24(h, static_cast<uint32_t>(body.size()));
    put_bytes(h, body);
    return h;
}

// Record version on the wire: stay at the offered floor so SSL3-only
// servers do not drop the hello at the record layer.
uint16_t record_version_for(uint16_t client_version) {
    return client_version <= kTls10 ? client_version : kTls10;
}

}  // namespace

std::string version_name(uint16_t version) {
    switch (version) {
        case kSsl2: return "SSLv2";
        case kSsl3: return "SSLv3";
        case kTls10: return "TLSv1.0";
        case kTls11: return "TLSv1.1";
        case kTls12: return "TLSv1.2";
        default: {
            char buf[16];
            std::snprintf(buf, sizeof buf, "0x%04x", version);
            return buf;
        }
    }
}

std::string cipher_name(uint16_t cipher) {
    switch (cipher) {
        case 0x0004: return "TLS_RSA_WITH_RC4_128_MD5";
        case 0x0005: return "TLS_RSA_WITH_RC4_128_SHA";
        case 0xC011: return "TLS_ECDHE_RSA_WITH_RC4_128_SHA";
        case 0x0003: return "TLS_RSA_EXPORT_WITH_RC4_40_MD5";
        case 0x0006: return "TLS_RSA_EXPORT_WITH_RC2_CBC_40_MD5";
        case 0x0008: return "TLS_RSA_EXPORT_WITH_DES40_CBC_SHA";
        case 0x0011: return "TLS_DHE_DSS_EXPORT_WITH_DES40_CBC_SHA";
        case 0x0014: return "TLS_DHE_RSA_EXPORT_WITH_DES40_CBC_SHA";
        case 0x000A: return "TLS_RSA_WITH_3DES_EDE_CBC_SHA";
        case 0x002F: return "TLS_RSA_WITH_AES_128_CBC_SHA";
        case 0x0035: return "TLS_RSA_WITH_AES_256_CBC_SHA";
        case 0x003C: return "TLS_RSA_WITH_AES_128_CBC_SHA256";
        case 0x003D: return "TLS_RSA_WITH_AES_256_CBC_SHA256";
        case 0x009C: return "TLS_RSA_WITH_AES_128_GCM_SHA256";
        case 0x009D: return "TLS_RSA_WITH_AES_256_GCM_SHA384";
        case 0x000D: return "TLS_DH_DSS_WITH_3DES_EDE_CBC_SHA";
        case 0x0010: return "TLS_DH_RSA_WITH_3DES_EDE_CBC_SHA";
        case 0x0030: return "TLS_DH_DSS_WITH_AES_128_CBC_SHA";
        case 0x0031: return "TLS_DH_RSA_WITH_AES_128_CBC_SHA";
        case 0x0036: return "TLS_DH_DSS_WITH_AES_256_CBC_SHA";
        case 0x0037: return "TLS_DH_RSA_WITH_AES_256_CBC_SHA";
        case 0xC013: return "TLS_ECDHE_RSA_WITH_AES_128_CBC_SHA";
        case 0xC014: return "TLS_ECDHE_RSA_WITH_AES_256_CBC_SHA";
        case 0xC02F: return "TLS_ECDHE_RSA_WITH_AES_128_GCM_SHA256";
        case 0xC030: return "TLS_ECDHE_RSA_WITH_AES_256_GCM_SHA384";
        case 0xC02B: return "TLS_ECDHE_ECDSA_WITH_AES_128_GCM_SHA256";
        default: {
            char buf[16];
            std::snprintf(buf, sizeof buf, "0x%04x", cipher);
            return buf;
        }
    }
}

const std::vector<uint16_t>& ciphers_for(CipherClass c) {
    static const std::vector<uint16_t> rc4 = {0x0005, 0x0004, 0xC011};
    static const std::vector<uint16_t> rsa_export = {0x0003, 0x0006, 0x0008};
    static const std::vector<uint16_t> dhe_export = {0x0014, 0x0011};
    static const std::vector<uint16_t> static_rsa = {0x002F, 0x0035, 0x003C,
                                                     0x003D, 0x009C, 0x009D, 0x000A};
    static const std::vector<uint16_t> static_dh = {0x0030, 0x0031, 0x0036, 0x0037, 0x000D};
    static const std::vector<uint16_t> all = [] {
        std::vector<uint16_t> v = {0xC02F, 0xC030, 0xC02B, 0xC013, 0xC014};
        for (auto* cls : {&rc4, &rsa_export, &dhe_export, &static_rsa, &static_dh}) {
            v.insert(v.end(), cls->begin(), cls->end());
        }
        return v;
    }();
    switch (c) {
        case CipherClass::rc4: return rc4;
        case CipherClass::rsa_export: return rsa_export;
        case CipherClass::dhe_export_512: return dhe_export;
        case CipherClass::static_rsa: return static_rsa;
        case CipherClass::static_dh: return static_dh;
        case CipherClass::all: return all;
    }
    return all;
}

Bytes build_client_hello(const ClientHelloSpec& spec, RandomSource& rng) {
    Bytes body;
    put_u16(body, spec.versions.max_version);
    uint8_t random[32];
    rng.fill(random);
    put_bytes(body, random);
    put_u8(body, 0);  // empty session id
    put_u16(body, static_cast<uint16_t>(spec.ciphers.size() * 2));
    for (uint16_t c : spec.ciphers) put_u16(body, c);
    put_u8(body, 1);
    put_u8(body, 0);  // null compression only

    Bytes exts;
    if (spec.sni) {
        Bytes name_list;
        put_u8(name_list, 0);  // host_name
        put_u16(name_list, static_cast<uint16_t>(spec.sni->size()));
        put_str(name_list, *spec.sni);
        Bytes ext;
        put_u16(ext, kExtServerName);
        put_u16(ext, static_cast<uint16_t>(name_list.size() + 2));
        put_u16(ext, static_cast<uint16_t>(name_list.size()));
        put_bytes(ext, name_list);
        put_bytes(exts, ext);
    }
    if (spec.offer_heartbeat) {
        put_u16(exts, kExtHeartbeat);
        put_u16(exts, 1);
        put_u8(exts, 1);  // peer_allowed_to_send
    }
    if (!exts.empty()) {
        put_u16(body, static_cast<uint16_t>(exts.size()));
        put_bytes(body, exts);
    }

    Bytes hs = wrap_handshake(kHandshakeClientHello, body);
    return wrap_record(kRecordHandshake, record_version_for(spec.versions.max_version), hs);
}

Bytes build_sslv2_client_hello(RandomSource& rng) {
    // SSLv2 CLIENT-HELLO with the three classic SSL_CK RC4/DES kinds.
    static const uint32_t kinds[] = {0x010080, 0x020080, 0x040080};
    Bytes msg;
    put_u8(msg, 1);  // CLIENT-HELLO
    put_u16(msg, kSsl2);
    put_u16(msg, sizeof kinds / sizeof kinds[0] * 3);
    put_u16(msg, 0);   // session id length
    put_u16(msg, 16);  // challenge length
    for (uint32_t k : kinds) put_u24(msg, k);
    uint8_t challenge[16];
    rng.fill(challenge);
    put_bytes(msg, challenge);

    Bytes out;
    put_u16(out, static_cast<uint16_t>(0x8000 | msg.size()));
    put_bytes(out, msg);
    return out;
}

std::vector<Record> split_records(ByteView data) {
    std::vector<Record> out;
    size_t off = 0;
    while (off + 5 <= data.size()) {
        Record r;
        r.type = data[off];
        r.version = get_u16(data, off + 1);
        uint16_t len = get_u16(data, off + 3);
        if (r.type < 20 || r.type > 24) break;  // not a TLS record stream
        if (off + 5 + len > data.size()) {
            // truncated trailing record; take what is there
            r.payload.assign(data.begin() + off + 5, data.end());
            out.push_back(std::move(r));
            break;
        }
        r.payload.assign(data.begin() + off + 5, data.begin() + off + 5 + len);
        out.push_back(std::move(r));
        off += 5 + static_cast<size_t>(len);
    }
    return out;
}

ServerFlight parse_server_flight(ByteView data) {
    ServerFlight f;
    Bytes handshake;
    for (auto& rec : split_records(data)) {
        if (rec.type == kRecordAlert) {
            f.alert = true;
            if (rec.payload.size() >= 2) f.alert_description = rec.payload[1];
            continue;
        }
        if (rec.type == kRecordHandshake) {
            handshake.insert(handshake.end(), rec.payload.begin(), rec.payload.end());
        }
    }
    size_t off = 0;
    while (off + 4 <= handshake.size()) {
        uint8_t msg_type = handshake[off];
        uint32_t len = get_u24(handshake, off + 1);
        if (off + 4 + len > handshake.size()) break;
        ByteView body(handshake.data() + off + 4, len);
        if (msg_type == kHandshakeServerHello && body.size() >= 38) {
            f.got_server_hello = true;
            f.version = get_u16(body, 0);
            size_t p = 2 + 32;
            uint8_t sid_len = get_u8(body, p);
            p += 1 + sid_len;
            f.cipher = get_u16(body, p);
            p += 2;
            p += 1;  // compression
            if (p + 2 <= body.size()) {
                uint16_t ext_len = get_u16(body, p);
                p += 2;
                size_t end = std::min(body.size(), p + ext_len);
                while (p + 4 <= end) {
                    uint16_t et = get_u16(body, p);
                    uint16_t el = get_u16(body, p + 2);
                    if (et == kExtHeartbeat) f.heartbeat_ext = true;
                    p += 4 + el;
                }
            }
        } else if (msg_type == kHandshakeCertificate && body.size() >= 3) {
            uint32_t chain_len = get_u24(body, 0);
            size_t p = 3;
            size_t end = std::min(body.size(), static_cast<size_t>(3 + chain_len));
            while (p + 3 <= end) {
                uint32_t cert_len = get_u24(body, p);
                p += 3;
                if (p + cert_len > end) break;
                f.certificates.emplace_back(body.begin() + p, body.begin() + p + cert_len);
                p += cert_len;
            }
        }
        off += 4 + len;
    }
    return f;
}

Bytes build_heartbeat_request(uint16_t version, uint16_t declared_len, ByteView payload) {
    Bytes msg;
    put_u8(msg, 1);  // heartbeat_request
    put_u16(msg, declared_len);
    put_bytes(msg, payload);
    msg.insert(msg.end(), 16, 0x50);  // padding
    return wrap_record(kRecordHeartbeat, version, msg);
}

HeartbeatReply parse_heartbeat_reply(ByteView data) {
    HeartbeatReply r;
    for (auto& rec : split_records(data)) {
        if (rec.type != kRecordHeartbeat) continue;
        r.present = true;
        r.payload_bytes += rec.payload.size();
    }
    return r;
}

ParsedClientHello parse_client_hello(ByteView data) {
    ParsedClientHello h;
    if (data.size() >= 3 && (data[0] & 0x80) && data[2] == 1) {
        // SSLv2 CLIENT-HELLO
        h.sslv2 = true;
        h.valid = true;
        h.client_version = get_u16(data, 3);
        return h;
    }
    auto records = split_records(data);
    if (records.empty() || records[0].type != kRecordHandshake) return h;
    ByteView hs(records[0].payload);
    if (hs.size() < 4 || hs[0] != kHandshakeClientHello) return h;
    uint32_t len = get_u24(hs, 1);
    if (4 + len > hs.size()) return h;
    ByteView body = hs.subspan(4, len);
    if (body.size() < 35) return h;
    h.client_version = get_u16(body, 0);
    size_t p = 2 + 32;
    uint8_t sid_len = get_u8(body, p);
    p += 1 + sid_len;
    if (p + 2 > body.size()) return h;
    uint16_t cipher_bytes = get_u16(body, p);
    p += 2;
    if (p + cipher_bytes > body.size()) return h;
    for (size_t i = 0; i + 1 < cipher_bytes; i += 2) h.ciphers.push_back(get_u16(body, p + i));
    p += cipher_bytes;
    uint8_t comp_len = get_u8(body, p);
    p += 1 + comp_len;
    if (p + 2 <= body.size()) {
        uint16_t ext_len = get_u16(body, p);
        p += 2;
        size_t end = std::min(body.size(), p + ext_len);
        while (p + 4 <= end) {
            uint16_t et = get_u16(body, p);
            uint16_t el = get_u16(body, p + 2);
            if (et == kExtHeartbeat) h.heartbeat_ext = true;
            if (et == kExtServerName && p + 4 + el <= end && el >= 5) {
                ByteView ext = body.subspan(p + 4, el);
                uint16_t name_len = get_u16(ext, 3);
                if (5u + name_len <= ext.size()) {
                    h.sni = std::string(reinterpret_cast<const char*>(ext.data() + 5), name_len);
                }
            }
            p += 4 + el;
        }
    }
    h.valid = true;
    return h;
}

Bytes build_server_hello(uint16_t version, uint16_t cipher, bool heartbeat_ext,
                         RandomSource& rng) {
    Bytes body;
    put_u16(body, version);
    uint8_t random[32];
    rng.fill(random);
    put_bytes(body, random);
    put_u8(body, 0);  // no session id
    put_u16(body, cipher);
    put_u8(body, 0);  // null compression
    if (heartbeat_ext) {
        put_u16(body, 5);
        put_u16(body, kExtHeartbeat);
        put_u16(body, 1);
        put_u8(body, 1);
    }
    Bytes hs = wrap_handshake(kHandshakeServerHello, body);
    return wrap_record(kRecordHandshake, version, hs);
}

Bytes build_certificate_msg(uint16_t version, ByteView leaf_der) {
    Bytes body;
    put_u24(body, static_cast<uint32_t>(leaf_der.size() + 3));
    put_u24(body, static_cast<uint32_t>(leaf_der.size()));
    put_bytes(body, leaf_der);
    Bytes hs = wrap_handshake(kHandshakeCertificate, body);
    return wrap_record(kRecordHandshake, version, hs);
}

Bytes build_server_hello_done(uint16_t version) {
    Bytes hs = wrap_handshake(kHandshakeServerHelloDone, {});
    return wrap_record(kRecordHandshake, version, hs);
}

Bytes build_alert(uint16_t version, uint8_t level, uint8_t description) {
    Bytes body{level, description};
    return wrap_record(kRecordAlert, version, body);
}

}  // namespace vpnscan::tlswire
