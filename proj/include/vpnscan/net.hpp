// net.hpp
//
// Thin POSIX socket layer: RAII fds, timeout-bounded connect/read, and
// the Endpoint value type shared by scanner and mocknet.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "vpnscan/bytes.hpp"
#include "vpnscan/ip.hpp"

namespace vpnscan::net {

struct Endpoint {
    IpAddress ip;
    uint16_t port = 0;

    std::string to_string() const {
        if (ip.is_v6()) return "[" + ip.to_string() + "]:" + std::to_string(port);
        return ip.to_string() + ":" + std::to_string(port);
    }
    bool operator==(const Endpoint&) const = default;
};

class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    ~Socket() { close(); }
    Socket(Socket&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
    Socket& operator=(Socket&& o) noexcept {
        if (this != &o) {
            close();
            fd_ = o.fd_;
            o.fd_ = -1;
        }
        return *this;
    }
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;

    int fd() const { return fd_; }
    bool valid() const { return fd_ >= 0; }
    void close();
    int release() {
        int f = fd_;
        fd_ = -1;
        return f;
    }

private:
    int fd_ = -1;
};

// UDP: one socket per exchange is plenty at desk scale.
struct UdpExchange {
    bool sent = false;
    bool received = false;
    Bytes response;
    std::string error;  // set on socket-level failure
};
UdpExchange udp_exchange(const Endpoint& dst, ByteView payload, int timeout_ms);

struct TcpResult {
    enum class Status { ok, refused, timeout, error };
    Status status = Status::error;
    Socket sock;
    std::string error;
};
TcpResult tcp_connect(const Endpoint& dst, int timeout_ms);

// Reads until EOF, `max` bytes, or the deadline; whatever arrived is
// returned (possibly empty).
Bytes read_until_deadline(int fd, int timeout_ms, size_t max = 64 * 1024);
bool send_all(int fd, ByteView data);

// Listener helpers used by mocknet.
std::optional<Socket> listen_tcp(const IpAddress& ip, uint16_t port, uint16_t* bound_port);
std::optional<Socket> bind_udp(const IpAddress& ip, uint16_t port, uint16_t* bound_port);

}  // namespace vpnscan::net
