// probe.hpp
//
// Transport-free construction of VPN connection-initiation payloads and
// classification of raw response bytes. Builders are deterministic under
// a seeded RandomSource; parsers never throw on arbitrary input.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vpnscan/bytes.hpp"
#include "vpnscan/ip.hpp"
#include "vpnscan/rng.hpp"

namespace vpnscan::probe {

enum class Protocol { ike, pptp, openvpn, sstp, http_get };
enum class Transport { udp, tcp };
enum class KeyMethod { km1, km2 };
enum class HmacMode { none, random };

const char* to_string(Protocol p);
const char* to_string(Transport t);
const char* to_string(KeyMethod k);
std::optional<Protocol> protocol_from_string(std::string_view s);
std::optional<Transport> transport_from_string(std::string_view s);

struct TransportTarget {
    IpAddress address;
    Transport transport = Transport::udp;
    uint16_t port = 0;

    bool operator==(const TransportTarget&) const = default;
};

struct ProbePayload {
    Protocol protocol;
    Bytes bytes;
    std::string variant;  // matched against responses, e.g. "udp:km2"
    Transport transport = Transport::udp;
};

struct DetectionVerdict {
    bool detected = false;
    Protocol protocol;
    std::vector<std::string> evidence;
    std::optional<std::string> vendor;     // pptp and sstp only
    std::optional<KeyMethod> key_method;   // openvpn only
    Bytes raw_excerpt;                     // first bytes of the response, capped
};

inline constexpr size_t kRawExcerptCap = 256;

// --- IKE / ISAKMP ---------------------------------------------------------

struct IkeTransform {
    uint16_t encryption;   // OAKLEY encryption algorithm id
    uint16_t key_length;   // 0 = algorithm-implied (DES/3DES)
    uint16_t hash;         // OAKLEY hash algorithm id
    uint16_t dh_group;
};

// Spread from legacy to modern to maximize responder acceptance.
const std::vector<IkeTransform>& default_ike_transforms();

ProbePayload build_ike_probe(RandomSource& rng,
                             const std::vector<IkeTransform>& transforms = default_ike_transforms());
DetectionVerdict parse_ike_response(const ProbePayload& probe, ByteView response);

// --- PPTP -----------------------------------------------------------------

ProbePayload build_pptp_probe();
DetectionVerdict parse_pptp_response(ByteView response);

// --- OpenVPN --------------------------------------------------------------

ProbePayload build_openvpn_probe(Transport transport, KeyMethod key_method, HmacMode hmac,
                                 RandomSource& rng);
DetectionVerdict parse_openvpn_response(const ProbePayload& probe, ByteView response);

// --- SSTP -----------------------------------------------------------------

ProbePayload build_sstp_request(const std::string& host_header, RandomSource& rng);
DetectionVerdict parse_sstp_response(ByteView response);

// --- plain web probe ------------------------------------------------------

ProbePayload build_http_get(const std::string& host);
// true iff the bytes parse as an HTTP response with any status code
bool classify_web_response(ByteView response);
DetectionVerdict parse_web_response(ByteView response);

// Dispatch helpers used by the scan engine.
DetectionVerdict parse_response(const ProbePayload& probe, ByteView response);

}  // namespace vpnscan::probe
