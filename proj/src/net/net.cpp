// net.cpp

#include "vpnscan/net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

namespace vpnscan::net {

namespace {

using steady = std::chrono::steady_clock;

socklen_t to_sockaddr(const Endpoint& ep, sockaddr_storage& out) {
    std::memset(&out, 0, sizeof out);
    if (ep.ip.is_v4()) {
        auto* sa = reinterpret_cast<sockaddr_in*>(&out);
        sa->sin_family = AF_INET;
        sa->sin_port = htons(ep.port);
        std::memcpy(&sa->sin_addr, ep.ip.data(), 4);
        return sizeof(sockaddr_in);
    }
    auto* sa = reinterpret_cast<sockaddr_in6*>(&out);
    sa->sin6_family = AF_INET6;
    sa->sin6_port = htons(ep.port);
    std::memcpy(&sa->sin6_addr, ep.ip.data(), 16);
    return sizeof(sockaddr_in6);
}

bool addr_equal(const sockaddr_storage& a, const Endpoint& ep) {
    if (a.ss_family == AF_INET && ep.ip.is_v4()) {
        auto* sa = reinterpret_cast<const sockaddr_in*>(&a);
        return std::memcmp(&sa->sin_addr, ep.ip.data(), 4) == 0
            && ntohs(sa->sin_port) == ep.port;
    }
    if (a.ss_family == AF_INET6 && ep.ip.is_v6()) {
        auto* sa = reinterpret_cast<const sockaddr_in6*>(&a);
        return std::memcmp(&sa->sin6_addr, ep.ip.data(), 16) == 0
            && ntohs(sa->sin6_port) == ep.port;
    }
    return false;
}

int remaining_ms(steady::time_point deadline) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - steady::now());
    return left.count() > 0 ? static_cast<int>(left.count()) : 0;
}

}  // namespace

void Socket::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

UdpExchange udp_exchange(const Endpoint& dst, ByteView payload, int timeout_ms) {
    UdpExchange ex;
    int family = dst.ip.is_v4() ? AF_INET : AF_INET6;
    Socket s(::socket(family, SOCK_DGRAM, 0));
    if (!s.valid()) {
        ex.error = std::strerror(errno);
        return ex;
    }
    sockaddr_storage sa;
    socklen_t sa_len = to_sockaddr(dst, sa);
    if (::sendto(s.fd(), payload.data(), payload.size(), 0,
                 reinterpret_cast<sockaddr*>(&sa), sa_len) < 0) {
        ex.error = std::strerror(errno);
        return ex;
    }
    ex.sent = true;

    auto deadline = steady::now() + std::chrono::milliseconds(timeout_ms);
    for (;;) {
        pollfd pfd{s.fd(), POLLIN, 0};
        int left = remaining_ms(deadline);
        if (left == 0) return ex;
        int rc = ::poll(&pfd, 1, left);
        if (rc == 0) return ex;  // timeout
        if (rc < 0) {
            if (errno == EINTR) continue;
            ex.error = std::strerror(errno);
            return ex;
        }
        uint8_t buf[64 * 1024];
        sockaddr_storage from{};
        socklen_t from_len = sizeof from;
        ssize_t n = ::recvfrom(s.fd(), buf, sizeof buf, 0,
                               reinterpret_cast<sockaddr*>(&from), &from_len);
        if (n < 0) {
            if (errno == EINTR) continue;
            ex.error = std::strerror(errno);
            return ex;
        }
        if (!addr_equal(from, dst)) continue;  // stray datagram
        ex.received = true;
        ex.response.assign(buf, buf + n);
        return ex;
    }
}

TcpResult tcp_connect(const Endpoint& dst, int timeout_ms) {
    TcpResult r;
    int family = dst.ip.is_v4() ? AF_INET : AF_INET6;
    Socket s(::socket(family, SOCK_STREAM, 0));
    if (!s.valid()) {
        r.error = std::strerror(errno);
        return r;
    }
    int flags = ::fcntl(s.fd(), F_GETFL, 0);
    ::fcntl(s.fd(), F_SETFL, flags | O_NONBLOCK);

    sockaddr_storage sa;
    socklen_t sa_len = to_sockaddr(dst, sa);
    int rc = ::connect(s.fd(), reinterpret_cast<sockaddr*>(&sa), sa_len);
    if (rc < 0 && errno != EINPROGRESS) {
        r.status = errno == ECONNREFUSED ? TcpResult::Status::refused : TcpResult::Status::error;
        r.error = std::strerror(errno);
        return r;
    }
    if (rc < 0) {
        pollfd pfd{s.fd(), POLLOUT, 0};
        rc = ::poll(&pfd, 1, timeout_ms);
        if (rc == 0) {
            r.status = TcpResult::Status::timeout;
            r.error = "connect timeout";
            return r;
        }
        if (rc < 0) {
            r.error = std::strerror(errno);
            return r;
        }
        int err = 0;
        socklen_t len = sizeof err;
        ::getsockopt(s.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
        if (err != 0) {
            r.status = err == ECONNREFUSED ? TcpResult::Status::refused
                                           : TcpResult::Status::error;
            r.error = std::strerror(err);
            return r;
        }
    }
    ::fcntl(s.fd(), F_SETFL, flags);  // back to blocking
    r.status = TcpResult::Status::ok;
    r.sock = std::move(s);
    return r;
}

Bytes read_until_deadline(int fd, int timeout_ms, size_t max) {
    Bytes out;
    auto deadline = steady::now() + std::chrono::milliseconds(timeout_ms);
    while (out.size() < max) {
        pollfd pfd{fd, POLLIN, 0};
        int left = remaining_ms(deadline);
        if (left == 0) break;
        int rc = ::poll(&pfd, 1, left);
        if (rc <= 0) {
            if (rc < 0 && errno == EINTR) continue;
            break;
        }
        uint8_t buf[16 * 1024];
        ssize_t n = ::read(fd, buf, std::min(sizeof buf, max - out.size()));
        if (n <= 0) break;  // EOF or error
        out.insert(out.end(), buf, buf + n);
    }
    return out;
}

bool send_all(int fd, ByteView data) {
    size_t off = 0;
    while (off < data.size()) {
        ssize_t n = ::write(fd, data.data() + off, data.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        off += static_cast<size_t>(n);
    }
    return true;
}

static std::optional<Socket> bind_any(const IpAddress& ip, uint16_t port, int type,
                                      uint16_t* bound_port) {
    int family = ip.is_v4() ? AF_INET : AF_INET6;
    Socket s(::socket(family, type, 0));
    if (!s.valid()) return std::nullopt;
    int one = 1;
    ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_storage sa;
    socklen_t sa_len = to_sockaddr({ip, port}, sa);
    if (::bind(s.fd(), reinterpret_cast<sockaddr*>(&sa), sa_len) < 0) return std::nullopt;
    if (bound_port) {
        sockaddr_storage actual{};
        socklen_t len = sizeof actual;
        ::getsockname(s.fd(), reinterpret_cast<sockaddr*>(&actual), &len);
        *bound_port = ntohs(actual.ss_family == AF_INET
                                ? reinterpret_cast<sockaddr_in*>(&actual)->sin_port
                                : reinterpret_cast<sockaddr_in6*>(&actual)->sin6_port);
    }
    return s;
}

std::optional<Socket> listen_tcp(const IpAddress& ip, uint16_t port, uint16_t* bound_port) {
    auto s = bind_any(ip, port, SOCK_STREAM, bound_port);
    if (!s) return std::nullopt;
    if (::listen(s->fd(), 64) < 0) return std::nullopt;
    return s;
}

std::optional<Socket> bind_udp(const IpAddress& ip, uint16_t port, uint16_t* bound_port) {
    return bind_any(ip, port, SOCK_DGRAM, bound_port);
}

}  // namespace vpnscan::net
