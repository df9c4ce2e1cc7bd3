// sstp_http.cpp
//
// SSTP duplex-POST request (MS-SSTP HTTPS layer) and plain web GET, plus
// the shared HTTP response classification.

#include "vpnscan/probe.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace vpnscan::probe {

namespace {

constexpr const char* kSstpUri = "/sra_{BA195980-CD49-458b-9E23-C84EE0ADCD75}/";
// MS-SSTP mandates ULONGLONG_MAX so the duplex stream never terminates.
constexpr const char* kSstpContentLength = "18446744073709551615";

struct StatusLine {
    int major = 0, minor = 0, code = 0;
};

// Returns nullopt unless the bytes start with a syntactically valid
// HTTP/x.y status line.
std::optional<StatusLine> parse_status_line(ByteView b) {
    static const std::string_view prefix = "HTTP/";
    if (b.size() < prefix.size() + 8) return std::nullopt;
    for (size_t i = 0; i < prefix.size(); ++i) {
        if (b[i] != static_cast<uint8_t>(prefix[i])) return std::nullopt;
    }
    size_t i = prefix.size();
    auto digit = [&](size_t k) { return k < b.size() && std::isdigit(b[k]); };
    if (!digit(i) || b[i + 1] != '.' || !digit(i + 2) || b[i + 3] != ' ') return std::nullopt;
    StatusLine s;
    s.major = b[i] - '0';
    s.minor = b[i + 2] - '0';
    i += 4;
    if (!digit(i) || !digit(i + 1) || !digit(i + 2)) return std::nullopt;
    s.code = (b[i] - '0') * 100 + (b[i + 1] - '0') * 10 + (b[i + 2] - '0');
    if (i + 3 < b.size() && b[i + 3] != ' ' && b[i + 3] != '\r' && b[i + 3] != '\n') {
        return std::nullopt;
    }
    return s;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::optional<std::string> find_header(ByteView b, std::string_view name) {
    std::string text(reinterpret_cast<const char*>(b.data()), b.size());
    std::string lower = ascii_lower(text);
    std::string needle = "\n" + ascii_lower(name) + ":";
    size_t pos = lower.find(needle);
    if (pos == std::string::npos) return std::nullopt;
    size_t start = pos + needle.size();
    size_t end = text.find_first_of("\r\n", start);
    if (end == std::string::npos) end = text.size();
    std::string value = text.substr(start, end - start);
    size_t a = value.find_first_not_of(" \t");
    if (a == std::string::npos) return std::string();
    size_t z = value.find_last_not_of(" \t");
    return value.substr(a, z - a + 1);
}

void set_excerpt(DetectionVerdict& v, ByteView response) {
    size_t n = std::min(response.size(), kRawExcerptCap);
    v.raw_excerpt.assign(response.begin(), response.begin() + n);
}

std::string make_guid(RandomSource& rng) {
    uint8_t raw[16];
    rng.fill(raw);
    char buf[40];
    std::snprintf(buf, sizeof buf,
                  "%02X%02X%02X%02X-%02X%02X-%02X%02X-%02X%02X-%02X%02X%02X%02X%02X%02X",
                  raw[0], raw[1], raw[2], raw[3], raw[4], raw[5], raw[6], raw[7], raw[8],
                  raw[9], raw[10], raw[11], raw[12], raw[13], raw[14], raw[15]);
    return buf;
}

}  // namespace

ProbePayload build_sstp_request(const std::string& host_header, RandomSource& rng) {
    std::string req;
    req += "SSTP_DUPLEX_POST ";
    req += kSstpUri;
    req += " HTTP/1.1\r\n";
    req += "Host: " + host_header + "\r\n";
    req += "SSTPCORRELATIONID: {" + make_guid(rng) + "}\r\n";
    req += "Content-Length: ";
    req += kSstpContentLength;
    req += "\r\n\r\n";
    Bytes b(req.begin(), req.end());
    return {Protocol::sstp, std::move(b), "duplex-post", Transport::tcp};
}

DetectionVerdict parse_sstp_response(ByteView response) {
    DetectionVerdict v;
    v.protocol = Protocol::sstp;
    set_excerpt(v, response);

    auto status = parse_status_line(response);
    if (!status) {
        v.evidence.push_back("not an HTTP response");
        return v;
    }
    if (status->code != 200) {
        v.evidence.push_back("HTTP " + std::to_string(status->code));
        return v;
    }
    v.detected = true;
    v.evidence.push_back("HTTP 200 to duplex post");
    if (auto server = find_header(response, "Server"); server && !server->empty()) {
        v.vendor = *server;
        v.evidence.push_back("server header present");
    }
    return v;
}

ProbePayload build_http_get(const std::string& host) {
    std::string req = "GET / HTTP/1.1\r\nHost: " + host
        + "\r\nAccept: */*\r\nConnection: close\r\n\r\n";
    Bytes b(req.begin(), req.end());
    return {Protocol::http_get, std::move(b), "get", Transport::tcp};
}

bool classify_web_response(ByteView response) {
    return parse_status_line(response).has_value();
}

DetectionVerdict parse_web_response(ByteView response) {
    DetectionVerdict v;
    v.protocol = Protocol::http_get;
    set_excerpt(v, response);
    auto status = parse_status_line(response);
    if (!status) {
        v.evidence.push_back("not an HTTP response");
        return v;
    }
    v.detected = true;
    v.evidence.push_back("HTTP " + std::to_string(status->code));
    return v;
}

}  // namespace vpnscan::probe
