// mocknet.cpp

#include "vpnscan/mocknet.hpp"

#include <poll.h>
#include <unistd.h>

#include <atomic>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "vpnscan/rng.hpp"
#include "vpnscan/tls_session.hpp"
#include "vpnscan/tls_wire.hpp"
#include "vpnscan/x509.hpp"

namespace vpnscan::mocknet {

namespace {

using namespace std::chrono_literals;

constexpr int kPollTickMs = 50;
constexpr int kConnReadTimeoutMs = 2000;

const char* kDefaultSstpVendor = "Microsoft-HTTPAPI/2.0";

std::string peer_string(const sockaddr_storage& ss) {
    char host[INET6_ADDRSTRLEN] = {};
    uint16_t port = 0;
    if (ss.ss_family == AF_INET) {
        auto* sa = reinterpret_cast<const sockaddr_in*>(&ss);
        inet_ntop(AF_INET, &sa->sin_addr, host, sizeof host);
        port = ntohs(sa->sin_port);
    } else if (ss.ss_family == AF_INET6) {
        auto* sa = reinterpret_cast<const sockaddr_in6*>(&ss);
        inet_ntop(AF_INET6, &sa->sin6_addr, host, sizeof host);
        port = ntohs(sa->sin6_port);
    }
    return std::string(host) + ":" + std::to_string(port);
}

// --- canned protocol responses ---------------------------------------------

Bytes ike_response(ByteView request, bool corrupt_cookie, RandomSource& rng) {
    Bytes sa;
    // SA payload accepting one proposal/transform (3DES/SHA1/DH2)
    Bytes transform;
    put_u8(transform, 0);
    put_u8(transform, 0);
    put_u16(transform, 0);
    put_u8(transform, 1);  // transform #
    put_u8(transform, 1);  // KEY_IKE
    put_u16(transform, 0);
    for (auto [attr, val] :
         {std::pair<uint16_t, uint16_t>{1, 5}, {2, 2}, {3, 1}, {4, 2}}) {
        put_u16(transform, static_cast<uint16_t>(0x8000 | attr));
        put_u16(transform, val);
    }
    patch_u16(transform, 2, static_cast<uint16_t>(transform.size()));

    Bytes proposal;
    put_u8(proposal, 0);
    put_u8(proposal, 0);
    put_u16(proposal, static_cast<uint16_t>(8 + transform.size()));
    put_u8(proposal, 1);
    put_u8(proposal, 1);  // PROTO_ISAKMP
    put_u8(proposal, 0);
    put_u8(proposal, 1);  // one transform accepted
    put_bytes(proposal, transform);

    put_u8(sa, 0);
    put_u8(sa, 0);
    put_u16(sa, static_cast<uint16_t>(12 + proposal.size()));
    put_u32(sa, 1);  // DOI IPSEC
    put_u32(sa, 1);  // SIT_IDENTITY_ONLY
    put_bytes(sa, proposal);

    Bytes resp;
    uint64_t init_cookie = get_u64(request, 0);
    if (corrupt_cookie) init_cookie ^= 0xdeadbeefcafe1234ULL;
    put_u64(resp, init_cookie);
    put_u64(resp, rng.nonzero_u64());  // responder cookie
    put_u8(resp, 1);                   // next payload SA
    put_u8(resp, 0x10);
    put_u8(resp, 2);  // identity protection
    put_u8(resp, 0);
    put_u32(resp, 0);
    put_u32(resp, static_cast<uint32_t>(28 + sa.size()));
    put_bytes(resp, sa);
    return resp;
}

Bytes pptp_sccrp(const std::string& vendor) {
    Bytes b;
    put_u16(b, 156);
    put_u16(b, 1);  // control message
    put_u32(b, 0x1A2B3C4D);
    put_u16(b, 2);  // SCCRP
    put_u16(b, 0);
    put_u16(b, 0x0100);
    put_u8(b, 1);  // result: success
    put_u8(b, 0);  // error
    put_u32(b, 3);
    put_u32(b, 3);
    put_u16(b, 0);
    put_u16(b, 0x0100);  // firmware
    auto put_field = [&](const std::string& s) {
        size_t n = std::min<size_t>(s.size(), 64);
        put_str(b, std::string_view(s).substr(0, n));
        b.insert(b.end(), 64 - n, 0);
    };
    put_field("mockpptp");
    put_field(vendor);
    return b;
}

bool pptp_request_valid(ByteView req) {
    return req.size() >= 156 && get_u32(req, 4) == 0x1A2B3C4D && get_u16(req, 2) == 1
        && get_u16(req, 8) == 1;
}

struct OpenVpnRequest {
    bool valid = false;
    uint8_t opcode = 0;
    uint64_t session_id = 0;
    bool carries_hmac = false;
};

OpenVpnRequest parse_openvpn_request(ByteView pkt) {
    OpenVpnRequest r;
    if (pkt.size() < 14) return r;
    r.opcode = static_cast<uint8_t>(pkt[0] >> 3);
    r.session_id = get_u64(pkt, 1);
    // plain reset: opcode + session + ack count + packet id
    if (pkt.size() == 14 && pkt[9] == 0) {
        r.valid = true;
        return r;
    }
    // tls-auth framing: 20-byte hmac + packet id + net time before acks
    if (pkt.size() == 42 && pkt[37] == 0) {
        r.valid = true;
        r.carries_hmac = true;
        return r;
    }
    return r;
}

Bytes openvpn_server_reset(uint8_t server_opcode, uint64_t client_session, bool signed_frame,
                           RandomSource& rng) {
    Bytes b;
    put_u8(b, static_cast<uint8_t>(server_opcode << 3));
    put_u64(b, rng.nonzero_u64());
    if (signed_frame) {
        uint8_t hmac[20];
        rng.fill(hmac);
        put_bytes(b, hmac);
        put_u32(b, 1);  // replay packet id
        put_u32(b, 0);  // net time
    }
    put_u8(b, 1);                  // one ack
    put_u32(b, 0);                 // acked packet id
    put_u64(b, client_session);    // remote session
    put_u32(b, 0);                 // message packet id
    return b;
}

std::string http_response(int code, const std::string& reason, const std::string& server,
                          const std::string& body, const char* content_length = nullptr) {
    std::string resp = "HTTP/1.1 " + std::to_string(code) + " " + reason + "\r\n";
    if (!server.empty()) resp += "Server: " + server + "\r\n";
    resp += "Content-Length: ";
    resp += content_length ? content_length : std::to_string(body.size());
    resp += "\r\n\r\n";
    resp += body;
    return resp;
}

struct RequestLine {
    std::string method, uri;
};

std::optional<RequestLine> parse_request_line(ByteView req) {
    std::string text(reinterpret_cast<const char*>(req.data()),
                     std::min<size_t>(req.size(), 4096));
    auto eol = text.find("\r\n");
    if (eol == std::string::npos) return std::nullopt;
    std::string line = text.substr(0, eol);
    auto sp1 = line.find(' ');
    if (sp1 == std::string::npos) return std::nullopt;
    auto sp2 = line.find(' ', sp1 + 1);
    if (sp2 == std::string::npos) return std::nullopt;
    if (line.substr(sp2 + 1, 5) != "HTTP/") return std::nullopt;
    return RequestLine{line.substr(0, sp1), line.substr(sp1 + 1, sp2 - sp1 - 1)};
}

// --- server scaffolding -----------------------------------------------------

class ServerBase : public MockServer {
public:
    explicit ServerBase(MockProfile profile) : profile_(std::move(profile)) {
        auto ip = IpAddress::parse(profile_.bind_address);
        if (!ip) throw std::runtime_error("bad mock bind address: " + profile_.bind_address);
        bind_ip_ = *ip;
    }

    ~ServerBase() override { ServerBase::stop(); }

    net::Endpoint endpoint() const override { return {bind_ip_, bound_port_}; }
    const MockProfile& profile() const override { return profile_; }
    const PacketLog& log() const override { return log_; }

    void stop() override {
        bool expected = false;
        if (!stopping_.compare_exchange_strong(expected, true)) return;
        if (main_thread_.joinable()) main_thread_.join();
        std::lock_guard lock(conn_mu_);
        for (auto& t : conn_threads_) {
            if (t.joinable()) t.join();
        }
        conn_threads_.clear();
    }

protected:
    bool stopping() const { return stopping_.load(); }

    void maybe_delay() {
        if (profile_.behavior == Behavior::delayed) {
            int left = profile_.delay_ms > 0 ? profile_.delay_ms : 1000;
            while (left > 0 && !stopping()) {
                int step = std::min(left, kPollTickMs);
                std::this_thread::sleep_for(std::chrono::milliseconds(step));
                left -= step;
            }
        }
    }

    void track_connection(std::thread t) {
        std::lock_guard lock(conn_mu_);
        conn_threads_.push_back(std::move(t));
    }

    MockProfile profile_;
    IpAddress bind_ip_;
    uint16_t bound_port_ = 0;
    PacketLog log_;
    std::thread main_thread_;

private:
    std::atomic<bool> stopping_{false};
    std::mutex conn_mu_;
    std::vector<std::thread> conn_threads_;
};

class UdpMockServer final : public ServerBase {
public:
    explicit UdpMockServer(MockProfile profile) : ServerBase(std::move(profile)) {
        auto sock = net::bind_udp(bind_ip_, profile_.port, &bound_port_);
        if (!sock) throw std::runtime_error("mocknet: UDP bind failed");
        sock_ = std::move(*sock);
        main_thread_ = std::thread([this] { run(); });
    }

private:
    void run() {
        SystemRandom rng;
        while (!stopping()) {
            pollfd pfd{sock_.fd(), POLLIN, 0};
            int rc = ::poll(&pfd, 1, kPollTickMs);
            if (rc <= 0) continue;
            uint8_t buf[64 * 1024];
            sockaddr_storage from{};
            socklen_t from_len = sizeof from;
            ssize_t n = ::recvfrom(sock_.fd(), buf, sizeof buf, 0,
                                   reinterpret_cast<sockaddr*>(&from), &from_len);
            if (n < 0) continue;
            Bytes req(buf, buf + n);
            log_.add(req, peer_string(from));
            if (profile_.behavior == Behavior::silent) continue;
            maybe_delay();
            Bytes resp = respond(req, rng);
            if (!resp.empty()) {
                ::sendto(sock_.fd(), resp.data(), resp.size(), 0,
                         reinterpret_cast<sockaddr*>(&from), from_len);
            }
        }
    }

    Bytes respond(ByteView req, RandomSource& rng) {
        switch (profile_.protocol) {
            case MockProtocol::ike: {
                if (req.size() < 28) return {};
                return ike_response(req, profile_.behavior == Behavior::malformed, rng);
            }
            case MockProtocol::openvpn: {
                auto parsed = parse_openvpn_request(req);
                if (!parsed.valid) return {};
                if (profile_.behavior == Behavior::malformed) {
                    return Bytes{0x30, 0x00, 0x01};  // P_DATA_V1 junk
                }
                if (profile_.require_hmac && !parsed.carries_hmac
                    && !profile_.accept_random_hmac) {
                    return {};
                }
                if (parsed.carries_hmac && !profile_.accept_random_hmac
                    && !profile_.require_hmac) {
                    return {};  // signature we cannot verify: drop
                }
                bool km2 = profile_.key_methods.count(probe::KeyMethod::km2) > 0;
                bool km1 = profile_.key_methods.count(probe::KeyMethod::km1) > 0;
                if (parsed.opcode == 7 && km2) {
                    return openvpn_server_reset(8, parsed.session_id, parsed.carries_hmac,
                                                rng);
                }
                if (parsed.opcode == 1 && km1) {
                    return openvpn_server_reset(2, parsed.session_id, parsed.carries_hmac,
                                                rng);
                }
                return {};
            }
            default:
                return {};
        }
    }

    net::Socket sock_;
};

class TcpMockServer final : public ServerBase {
public:
    explicit TcpMockServer(MockProfile profile) : ServerBase(std::move(profile)) {
        needs_tls_ = profile_.protocol == MockProtocol::sstp
            || profile_.protocol == MockProtocol::web_tls;
        if (needs_tls_) {
            TlsPolicy policy = profile_.tls.value_or(TlsPolicy{});
            std::string cert_pem = policy.cert_pem, key_pem = policy.key_pem;
            if (cert_pem.empty()) {
                x509::MintSpec spec;
                spec.subject_cn = spec.issuer_cn = "mock." + profile_.bind_address;
                spec.not_before = 0;
                spec.not_after = 4102444800;  // far future
                auto minted = x509::mint_certificate(spec);
                cert_pem = minted.cert_pem;
                key_pem = minted.key_pem;
            }
            tls_ctx_ = std::make_unique<net::TlsServerContext>(cert_pem, key_pem);
            for (auto& [host, pems] : policy.sni_vhosts) {
                std::string c = pems.first, k = pems.second;
                if (c.empty()) {
                    x509::MintSpec spec;
                    spec.subject_cn = spec.issuer_cn = host;
                    spec.not_before = 0;
                    spec.not_after = 4102444800;
                    auto minted = x509::mint_certificate(spec);
                    c = minted.cert_pem;
                    k = minted.key_pem;
                }
                tls_ctx_->add_sni_certificate(host, c, k);
            }
        }
        if (profile_.protocol == MockProtocol::tls_raw) {
            TlsPolicy policy = profile_.tls.value_or(TlsPolicy{});
            if (!policy.certificate_file.empty()) {
                auto der = x509::pem_file_to_der(policy.certificate_file);
                if (!der) throw std::runtime_error("mocknet: bad certificate file");
                raw_cert_der_ = *der;
            } else if (!policy.cert_pem.empty()) {
                // reuse the PEM directly
                x509::MintSpec unused;
                (void)unused;
                raw_cert_der_ = {};
            }
            if (raw_cert_der_.empty()) {
                x509::MintSpec spec;
                spec.subject_cn = spec.issuer_cn = "legacy.mock";
                spec.not_before = 0;
                spec.not_after = 4102444800;
                raw_cert_der_ = x509::mint_certificate(spec).der;
            }
        }
        auto sock = net::listen_tcp(bind_ip_, profile_.port, &bound_port_);
        if (!sock) throw std::runtime_error("mocknet: TCP bind failed");
        listener_ = std::move(*sock);
        main_thread_ = std::thread([this] { run(); });
    }

private:
    void run() {
        while (!stopping()) {
            pollfd pfd{listener_.fd(), POLLIN, 0};
            int rc = ::poll(&pfd, 1, kPollTickMs);
            if (rc <= 0) continue;
            sockaddr_storage from{};
            socklen_t from_len = sizeof from;
            int fd = ::accept(listener_.fd(), reinterpret_cast<sockaddr*>(&from), &from_len);
            if (fd < 0) continue;
            std::string peer = peer_string(from);
            track_connection(std::thread([this, fd, peer] {
                handle(net::Socket(fd), peer);
            }));
        }
    }

    void handle(net::Socket sock, const std::string& peer) {
        switch (profile_.protocol) {
            case MockProtocol::pptp: handle_pptp(std::move(sock), peer); break;
            case MockProtocol::openvpn: handle_openvpn_tcp(std::move(sock), peer); break;
            case MockProtocol::web: handle_http_plain(std::move(sock), peer); break;
            case MockProtocol::sstp:
            case MockProtocol::web_tls: handle_http_tls(std::move(sock), peer); break;
            case MockProtocol::tls_raw: handle_tls_raw(std::move(sock), peer); break;
            default: break;
        }
    }

    void handle_pptp(net::Socket sock, const std::string& peer) {
        Bytes req = net::read_until_deadline(sock.fd(), kConnReadTimeoutMs, 4096);
        log_.add(req, peer);
        if (profile_.behavior == Behavior::silent) return;
        maybe_delay();
        if (profile_.behavior == Behavior::malformed) {
            Bytes junk(156, 0xAA);
            net::send_all(sock.fd(), junk);
            return;
        }
        if (!pptp_request_valid(req)) return;
        Bytes resp = pptp_sccrp(profile_.vendor_string.value_or("MockPPTP"));
        net::send_all(sock.fd(), resp);
    }

    void handle_openvpn_tcp(net::Socket sock, const std::string& peer) {
        Bytes req = net::read_until_deadline(sock.fd(), kConnReadTimeoutMs, 4096);
        log_.add(req, peer);
        if (profile_.behavior == Behavior::silent) return;
        maybe_delay();
        if (req.size() < 2) return;
        uint16_t framed = get_u16(req, 0);
        if (req.size() < 2u + framed) return;
        auto parsed = parse_openvpn_request(ByteView(req).subspan(2, framed));
        if (!parsed.valid) return;
        if (profile_.behavior == Behavior::malformed) {
            Bytes junk{0x00, 0x03, 0x30, 0x00, 0x01};
            net::send_all(sock.fd(), junk);
            return;
        }
        if (profile_.require_hmac && !parsed.carries_hmac && !profile_.accept_random_hmac) {
            return;
        }
        SystemRandom rng;
        bool km2 = profile_.key_methods.count(probe::KeyMethod::km2) > 0;
        bool km1 = profile_.key_methods.count(probe::KeyMethod::km1) > 0;
        Bytes pkt;
        if (parsed.opcode == 7 && km2) {
            pkt = openvpn_server_reset(8, parsed.session_id, parsed.carries_hmac, rng);
        } else if (parsed.opcode == 1 && km1) {
            pkt = openvpn_server_reset(2, parsed.session_id, parsed.carries_hmac, rng);
        } else {
            return;
        }
        Bytes framed_resp;
        put_u16(framed_resp, static_cast<uint16_t>(pkt.size()));
        put_bytes(framed_resp, pkt);
        net::send_all(sock.fd(), framed_resp);
    }

    Bytes read_http_request(const std::function<Bytes(int)>& read_some) {
        Bytes req;
        for (int i = 0; i < 20; ++i) {
            Bytes chunk = read_some(200);
            if (chunk.empty()) break;
            req.insert(req.end(), chunk.begin(), chunk.end());
            std::string_view view(reinterpret_cast<const char*>(req.data()), req.size());
            if (view.find("\r\n\r\n") != std::string_view::npos) break;
        }
        return req;
    }

    std::string http_reply_for(ByteView req) {
        std::string server = profile_.vendor_string.value_or(
            profile_.protocol == MockProtocol::sstp ? kDefaultSstpVendor : "mockweb/1.0");
        auto line = parse_request_line(req);
        if (profile_.protocol == MockProtocol::sstp) {
            if (line && line->method == "SSTP_DUPLEX_POST"
                && line->uri.find("sra_{BA195980") != std::string::npos) {
                return http_response(200, "OK", server, "", "18446744073709551615");
            }
            return http_response(404, "Not Found", server, "not found\n");
        }
        if (line && line->method == "GET") {
            return http_response(200, "OK", server, "ok\n");
        }
        return http_response(404, "Not Found", server, "not found\n");
    }

    void handle_http_plain(net::Socket sock, const std::string& peer) {
        Bytes req = read_http_request(
            [&](int ms) { return net::read_until_deadline(sock.fd(), ms, 8192); });
        log_.add(req, peer);
        if (profile_.behavior == Behavior::silent) return;
        maybe_delay();
        if (profile_.behavior == Behavior::malformed) {
            std::string junk = "*** not http ***\r\n";
            net::send_all(sock.fd(), Bytes(junk.begin(), junk.end()));
            return;
        }
        std::string resp = http_reply_for(req);
        net::send_all(sock.fd(), Bytes(resp.begin(), resp.end()));
    }

    void handle_http_tls(net::Socket sock, const std::string& peer) {
        std::string err;
        auto stream = tls_ctx_->accept(std::move(sock), kConnReadTimeoutMs, err);
        if (!stream) {
            log_.add({}, peer + " (tls handshake failed)");
            return;
        }
        Bytes req = read_http_request([&](int ms) { return stream->read_until_deadline(ms); });
        log_.add(req, peer);
        if (profile_.behavior == Behavior::silent) return;
        maybe_delay();
        if (profile_.behavior == Behavior::malformed) {
            std::string junk = "*** not http ***\r\n";
            stream->write(Bytes(junk.begin(), junk.end()));
            return;
        }
        std::string resp = http_reply_for(req);
        stream->write(Bytes(resp.begin(), resp.end()));
    }

    void handle_tls_raw(net::Socket sock, const std::string& peer) {
        TlsPolicy policy = profile_.tls.value_or(TlsPolicy{});
        SystemRandom rng;
        Bytes data;
        tlswire::ParsedClientHello hello;
        for (int i = 0; i < 20; ++i) {
            Bytes chunk = net::read_until_deadline(sock.fd(), 100, 16384);
            data.insert(data.end(), chunk.begin(), chunk.end());
            hello = tlswire::parse_client_hello(data);
            if (hello.valid || chunk.empty()) break;
        }
        log_.add(data, peer);
        if (!hello.valid || profile_.behavior == Behavior::silent) return;
        maybe_delay();
        if (hello.sslv2) return;  // no SSLv2 anywhere: connection dropped
        if (profile_.behavior == Behavior::malformed) {
            net::send_all(sock.fd(), tlswire::build_alert(tlswire::kTls10, 2, 80));
            return;
        }

        uint16_t version = 0;
        for (uint16_t v : policy.versions) {
            if (v <= hello.client_version && v > version) version = v;
        }
        if (version == 0) {
            net::send_all(sock.fd(),
                          tlswire::build_alert(tlswire::kTls10, 2, 70));  // protocol_version
            return;
        }
        uint16_t cipher = 0;
        for (uint16_t c : hello.ciphers) {
            if (std::find(policy.ciphers.begin(), policy.ciphers.end(), c)
                != policy.ciphers.end()) {
                cipher = c;
                break;
            }
        }
        if (cipher == 0) {
            net::send_all(sock.fd(),
                          tlswire::build_alert(version, 2, 40));  // handshake_failure
            return;
        }
        bool hb_ext = policy.heartbeat != HeartbeatMode::absent && hello.heartbeat_ext;
        Bytes flight = tlswire::build_server_hello(version, cipher, hb_ext, rng);
        Bytes cert = tlswire::build_certificate_msg(version, raw_cert_der_);
        put_bytes(flight, cert);
        put_bytes(flight, tlswire::build_server_hello_done(version));
        net::send_all(sock.fd(), flight);

        // post-hello records: heartbeat service per policy
        auto deadline = std::chrono::steady_clock::now() + 2s;
        Bytes pending;
        while (std::chrono::steady_clock::now() < deadline && !stopping()) {
            Bytes chunk = net::read_until_deadline(sock.fd(), 100, 32768);
            if (chunk.empty()) {
                if (pending.empty()) continue;
            }
            pending.insert(pending.end(), chunk.begin(), chunk.end());
            auto records = tlswire::split_records(pending);
            size_t consumed = 0;
            for (auto& rec : records) {
                consumed += 5 + rec.payload.size();
                if (rec.type != tlswire::kRecordHeartbeat) continue;
                if (policy.heartbeat == HeartbeatMode::absent) continue;
                if (rec.payload.size() < 3 || rec.payload[0] != 1) continue;
                uint16_t declared = get_u16(rec.payload, 1);
                size_t actual = rec.payload.size() >= 3 + 16 ? rec.payload.size() - 3 - 16
                                                             : rec.payload.size() - 3;
                Bytes reply;
                if (policy.heartbeat == HeartbeatMode::vulnerable) {
                    // echo by declared length: the over-read emulation
                    put_u8(reply, 2);
                    put_u16(reply, declared);
                    for (size_t i = 0; i < declared; ++i) {
                        reply.push_back(i < actual ? rec.payload[3 + i] : 0x41);
                    }
                    reply.insert(reply.end(), 16, 0x00);
                } else {
                    if (declared > actual) continue;  // malformed: discard silently
                    put_u8(reply, 2);
                    put_u16(reply, declared);
                    reply.insert(reply.end(), rec.payload.begin() + 3,
                                 rec.payload.begin() + 3 + declared);
                    reply.insert(reply.end(), 16, 0x00);
                }
                Bytes rec_out;
                put_u8(rec_out, tlswire::kRecordHeartbeat);
                put_u16(rec_out, version);
                put_u16(rec_out, static_cast<uint16_t>(reply.size()));
                put_bytes(rec_out, reply);
                net::send_all(sock.fd(), rec_out);
            }
            pending.erase(pending.begin(),
                          pending.begin() + std::min(consumed, pending.size()));
        }
    }

    net::Socket listener_;
    bool needs_tls_ = false;
    std::unique_ptr<net::TlsServerContext> tls_ctx_;
    Bytes raw_cert_der_;
};

}  // namespace

const char* to_string(MockProtocol p) {
    switch (p) {
        case MockProtocol::ike: return "ike";
        case MockProtocol::pptp: return "pptp";
        case MockProtocol::openvpn: return "openvpn";
        case MockProtocol::sstp: return "sstp";
        case MockProtocol::web: return "web";
        case MockProtocol::web_tls: return "web_tls";
        case MockProtocol::tls_raw: return "tls_raw";
    }
    return "?";
}

probe::Transport default_transport(MockProtocol p) {
    switch (p) {
        case MockProtocol::ike: return probe::Transport::udp;
        case MockProtocol::openvpn: return probe::Transport::udp;
        default: return probe::Transport::tcp;
    }
}

std::unique_ptr<MockServer> spawn(const MockProfile& profile) {
    bool udp = (profile.protocol == MockProtocol::ike)
        || (profile.protocol == MockProtocol::openvpn
            && profile.transport == probe::Transport::udp);
    if (udp) return std::make_unique<UdpMockServer>(profile);
    return std::make_unique<TcpMockServer>(profile);
}

std::vector<std::unique_ptr<MockServer>> spawn_grid(const std::vector<MockProfile>& profiles) {
    std::vector<std::unique_ptr<MockServer>> out;
    std::vector<std::string> errors;
    for (const auto& p : profiles) {
        try {
            out.push_back(spawn(p));
        } catch (const std::exception& e) {
            errors.push_back(std::string(to_string(p.protocol)) + ": " + e.what());
        }
    }
    if (!errors.empty()) {
        std::string msg = "mocknet spawn failures:";
        for (const auto& e : errors) msg += " " + e + ";";
        throw std::runtime_error(msg);
    }
    return out;
}

std::vector<MockProfile> profiles_from_json(const std::string& json_text) {
    nlohmann::json doc = nlohmann::json::parse(json_text);
    const nlohmann::json& list = doc.is_array() ? doc : doc.at("profiles");
    std::vector<MockProfile> out;
    for (const auto& j : list) {
        MockProfile p;
        std::string proto = j.at("protocol").get<std::string>();
        if (proto == "ike") p.protocol = MockProtocol::ike;
        else if (proto == "pptp") p.protocol = MockProtocol::pptp;
        else if (proto == "openvpn") p.protocol = MockProtocol::openvpn;
        else if (proto == "sstp") p.protocol = MockProtocol::sstp;
        else if (proto == "web") p.protocol = MockProtocol::web;
        else if (proto == "web_tls") p.protocol = MockProtocol::web_tls;
        else if (proto == "tls_raw") p.protocol = MockProtocol::tls_raw;
        else throw std::runtime_error("unknown mock protocol: " + proto);

        if (j.contains("behavior")) {
            std::string b = j["behavior"].get<std::string>();
            if (b == "canonical") p.behavior = Behavior::canonical;
            else if (b == "silent") p.behavior = Behavior::silent;
            else if (b == "malformed") p.behavior = Behavior::malformed;
            else if (b == "delayed") p.behavior = Behavior::delayed;
            else throw std::runtime_error("unknown behavior: " + b);
        }
        if (j.contains("vendor")) p.vendor_string = j["vendor"].get<std::string>();
        if (j.contains("delay_ms")) p.delay_ms = j["delay_ms"].get<int>();
        if (j.contains("bind")) p.bind_address = j["bind"].get<std::string>();
        if (j.contains("port")) p.port = j["port"].get<uint16_t>();
        if (j.contains("transport")) {
            auto t = probe::transport_from_string(j["transport"].get<std::string>());
            if (!t) throw std::runtime_error("bad transport");
            p.transport = *t;
        }
        if (j.contains("key_methods")) {
            p.key_methods.clear();
            for (const auto& k : j["key_methods"]) {
                std::string s = k.get<std::string>();
                if (s == "km1") p.key_methods.insert(probe::KeyMethod::km1);
                else if (s == "km2") p.key_methods.insert(probe::KeyMethod::km2);
                else throw std::runtime_error("bad key method: " + s);
            }
        }
        if (j.contains("require_hmac")) p.require_hmac = j["require_hmac"].get<bool>();
        if (j.contains("accept_random_hmac")) {
            p.accept_random_hmac = j["accept_random_hmac"].get<bool>();
        }
        if (j.contains("tls")) {
            TlsPolicy policy;
            const auto& t = j["tls"];
            if (t.contains("versions")) {
                for (const auto& v : t["versions"]) {
                    std::string s = v.get<std::string>();
                    if (s == "ssl3") policy.versions.push_back(tlswire::kSsl3);
                    else if (s == "tls1.0") policy.versions.push_back(tlswire::kTls10);
                    else if (s == "tls1.1") policy.versions.push_back(tlswire::kTls11);
                    else if (s == "tls1.2") policy.versions.push_back(tlswire::kTls12);
                    else throw std::runtime_error("bad tls version: " + s);
                }
            }
            if (t.contains("ciphers")) {
                for (const auto& c : t["ciphers"]) {
                    std::string s = c.get<std::string>();
                    const std::vector<uint16_t>* cls = nullptr;
                    if (s == "rc4") cls = &tlswire::ciphers_for(tlswire::CipherClass::rc4);
                    else if (s == "static_rsa")
                        cls = &tlswire::ciphers_for(tlswire::CipherClass::static_rsa);
                    else if (s == "static_dh")
                        cls = &tlswire::ciphers_for(tlswire::CipherClass::static_dh);
                    else if (s == "export")
                        cls = &tlswire::ciphers_for(tlswire::CipherClass::rsa_export);
                    else if (s == "dhe_export")
                        cls = &tlswire::ciphers_for(tlswire::CipherClass::dhe_export_512);
                    else if (s == "modern") {
                        static const std::vector<uint16_t> modern = {0xC02F, 0xC030, 0xC02B,
                                                                     0xC013, 0xC014};
                        cls = &modern;
                    } else {
                        policy.ciphers.push_back(
                            static_cast<uint16_t>(std::stoul(s, nullptr, 0)));
                        continue;
                    }
                    policy.ciphers.insert(policy.ciphers.end(), cls->begin(), cls->end());
                }
            }
            if (t.contains("heartbeat")) {
                std::string h = t["heartbeat"].get<std::string>();
                if (h == "absent") policy.heartbeat = HeartbeatMode::absent;
                else if (h == "safe") policy.heartbeat = HeartbeatMode::safe;
                else if (h == "vulnerable") policy.heartbeat = HeartbeatMode::vulnerable;
                else throw std::runtime_error("bad heartbeat mode: " + h);
            }
            if (t.contains("certificate_file")) {
                policy.certificate_file = t["certificate_file"].get<std::string>();
            }
            if (t.contains("sni_vhosts")) {
                for (const auto& host : t["sni_vhosts"]) {
                    policy.sni_vhosts[host.get<std::string>()] = {"", ""};
                }
            }
            p.tls = std::move(policy);
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace vpnscan::mocknet
