// tls_wire.hpp
//
// Hand-assembled TLS records: client hellos for downgrade offers that
// modern TLS stacks refuse to emit (SSLv2, SSL 3.0, export suites), the
// matching server-side parsing/synthesis for mock endpoints, and the
// heartbeat probe. Nothing here negotiates keys; every exchange stops at
// the server-hello flight.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vpnscan/bytes.hpp"
#include "vpnscan/rng.hpp"

namespace vpnscan::tlswire {

// protocol version codes
constexpr uint16_t kSsl2 = 0x0002;
constexpr uint16_t kSsl3 = 0x0300;
constexpr uint16_t kTls10 = 0x0301;
constexpr uint16_t kTls11 = 0x0302;
constexpr uint16_t kTls12 = 0x0303;

std::string version_name(uint16_t version);
std::string cipher_name(uint16_t cipher);

enum class CipherClass { all, rc4, rsa_export, dhe_export_512, static_rsa, static_dh };
const std::vector<uint16_t>& ciphers_for(CipherClass c);

struct VersionRange {
    uint16_t min_version = kSsl3;
    uint16_t max_version = kTls12;
    bool contains(uint16_t v) const { return v >= min_version && v <= max_version; }
};

struct ClientHelloSpec {
    VersionRange versions;
    std::vector<uint16_t> ciphers;
    bool offer_heartbeat = false;
    std::optional<std::string> sni;
};

Bytes build_client_hello(const ClientHelloSpec& spec, RandomSource& rng);
Bytes build_sslv2_client_hello(RandomSource& rng);

// Parsed server response to a client hello (handshake flight or alert).
struct ServerFlight {
    bool got_server_hello = false;
    uint16_t version = 0;
    uint16_t cipher = 0;
    bool heartbeat_ext = false;
    std::vector<Bytes> certificates;  // leaf first, DER
    bool alert = false;
    uint8_t alert_description = 0;
};
ServerFlight parse_server_flight(ByteView data);

Bytes build_heartbeat_request(uint16_t version, uint16_t declared_len, ByteView payload);

struct HeartbeatReply {
    bool present = false;       // any heartbeat record came back
    size_t payload_bytes = 0;   // octets carried in heartbeat responses
};
HeartbeatReply parse_heartbeat_reply(ByteView data);

// --- server side (mocknet) --------------------------------------------------

struct ParsedClientHello {
    bool valid = false;
    bool sslv2 = false;
    uint16_t client_version = 0;
    std::vector<uint16_t> ciphers;
    bool heartbeat_ext = false;
    std::optional<std::string> sni;
};
ParsedClientHello parse_client_hello(ByteView data);

Bytes build_server_hello(uint16_t version, uint16_t cipher, bool heartbeat_ext,
                         RandomSource& rng);
Bytes build_certificate_msg(uint16_t version, ByteView leaf_der);
Bytes build_server_hello_done(uint16_t version);
Bytes build_alert(uint16_t version, uint8_t level, uint8_t description);

// Splits a raw TLS stream into records; used by both sides.
struct Record {
    uint8_t type = 0;
    uint16_t version = 0;
    Bytes payload;
};
std::vector<Record> split_records(ByteView data);

constexpr uint8_t kRecordHandshake = 22;
constexpr uint8_t kRecordAlert = 21;
constexpr uint8_t kRecordHeartbeat = 24;

}  // namespace vpnscan::tlswire
