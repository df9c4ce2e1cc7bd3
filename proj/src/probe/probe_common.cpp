// probe_common.cpp

#include "vpnscan/probe.hpp"

namespace vpnscan::probe {

const char* to_string(Protocol p) {
    switch (p) {
        case Protocol::ike: return "ike";
        case Protocol::pptp: return "pptp";
        case Protocol::openvpn: return "openvpn";
        case Protocol::sstp: return "sstp";
        case Protocol::http_get: return "http_get";
    }
    return "?";
}

const char* to_string(Transport t) {
    return t == Transport::udp ? "udp" : "tcp";
}

const char* to_string(KeyMethod k) {
    return k == KeyMethod::km1 ? "km1" : "km2";
}

std::optional<Protocol> protocol_from_string(std::string_view s) {
    if (s == "ike" || s == "ipsec") return Protocol::ike;
    if (s == "pptp") return Protocol::pptp;
    if (s == "openvpn") return Protocol::openvpn;
    if (s == "sstp") return Protocol::sstp;
    if (s == "http_get" || s == "http") return Protocol::http_get;
    return std::nullopt;
}

std::optional<Transport> transport_from_string(std::string_view s) {
    if (s == "udp") return Transport::udp;
    if (s == "tcp") return Transport::tcp;
    return std::nullopt;
}

DetectionVerdict parse_response(const ProbePayload& probe, ByteView response) {
    switch (probe.protocol) {
        case Protocol::ike: return parse_ike_response(probe, response);
        case Protocol::pptp: return parse_pptp_response(response);
        case Protocol::openvpn: return parse_openvpn_response(probe, response);
        case Protocol::sstp: return parse_sstp_response(response);
        case Protocol::http_get: return parse_web_response(response);
    }
    return {};
}

}  // namespace vpnscan::probe
