// mocknet.hpp
//
// In-process mock servers for each VPN protocol's first exchange, a plain
// web server, and configurable-weakness TLS endpoints. Every received
// packet is logged so tests can assert blocklist and rate guarantees.

#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vpnscan/bytes.hpp"
#include "vpnscan/net.hpp"
#include "vpnscan/probe.hpp"

namespace vpnscan::mocknet {

enum class MockProtocol { ike, pptp, openvpn, sstp, web, web_tls, tls_raw };
enum class Behavior { canonical, silent, malformed, delayed };
enum class HeartbeatMode { absent, safe, vulnerable };

const char* to_string(MockProtocol p);

struct TlsPolicy {
    std::vector<uint16_t> versions;  // tls_wire version codes
    std::vector<uint16_t> ciphers;
    HeartbeatMode heartbeat = HeartbeatMode::absent;
    std::string cert_pem, key_pem;  // empty: minted at spawn
    std::string certificate_file;   // optional PEM path (cert; key minted if absent)
    // hostname -> (cert_pem, key_pem); minted when pems empty
    std::map<std::string, std::pair<std::string, std::string>> sni_vhosts;
};

struct MockProfile {
    MockProtocol protocol = MockProtocol::web;
    Behavior behavior = Behavior::canonical;
    std::optional<TlsPolicy> tls;
    std::optional<std::string> vendor_string;
    std::set<probe::KeyMethod> key_methods = {probe::KeyMethod::km2};  // openvpn
    bool require_hmac = false;        // tls-auth style: ignore unsigned probes
    bool accept_random_hmac = false;  // answer probes carrying any signature
    int delay_ms = 0;                 // behavior=delayed
    probe::Transport transport = probe::Transport::udp;  // openvpn only
    std::string bind_address = "127.0.0.1";
    uint16_t port = 0;  // 0 = ephemeral
};

struct LoggedPacket {
    Bytes bytes;
    std::chrono::steady_clock::time_point at;
    std::string peer;
};

class PacketLog {
public:
    void add(Bytes bytes, std::string peer) {
        std::lock_guard lock(mu_);
        entries_.push_back({std::move(bytes), std::chrono::steady_clock::now(),
                            std::move(peer)});
    }
    std::vector<LoggedPacket> snapshot() const {
        std::lock_guard lock(mu_);
        return entries_;
    }
    size_t count() const {
        std::lock_guard lock(mu_);
        return entries_.size();
    }

private:
    mutable std::mutex mu_;
    std::vector<LoggedPacket> entries_;
};

class MockServer {
public:
    virtual ~MockServer() = default;
    virtual net::Endpoint endpoint() const = 0;
    virtual const MockProfile& profile() const = 0;
    virtual const PacketLog& log() const = 0;
    virtual void stop() = 0;
};

// Throws std::runtime_error on bind failure.
std::unique_ptr<MockServer> spawn(const MockProfile& profile);
std::vector<std::unique_ptr<MockServer>> spawn_grid(const std::vector<MockProfile>& profiles);

// JSON profile documents for the `mocknet` CLI; throws on schema errors.
std::vector<MockProfile> profiles_from_json(const std::string& json_text);

// Default transport/port pairing used when a profile is scanned.
probe::Transport default_transport(MockProtocol p);

}  // namespace vpnscan::mocknet
