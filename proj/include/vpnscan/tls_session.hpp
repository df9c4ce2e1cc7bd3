// tls_session.hpp
//
// Real TLS sessions over connected sockets (libssl): the permissive
// client used for certificate collection and SSTP probing, and the
// server side used by mock TLS endpoints. SNI vhosts supported on the
// server for the with/without-SNI comparison tests.

#pragma once

#include <memory>
#include <optional>
#include <string>

#include "vpnscan/bytes.hpp"
#include "vpnscan/net.hpp"

namespace vpnscan::net {

class TlsStream {
public:
    virtual ~TlsStream() = default;
    virtual bool write(ByteView data) = 0;
    virtual Bytes read_until_deadline(int timeout_ms, size_t max = 64 * 1024) = 0;
    virtual std::optional<Bytes> peer_certificate_der() = 0;
};

// Client handshake over an already-connected socket. On failure the
// returned pointer is null and `error` names the stage.
std::unique_ptr<TlsStream> tls_client_handshake(Socket sock,
                                                const std::optional<std::string>& sni,
                                                int timeout_ms, std::string& error);

class TlsServerContext {
public:
    TlsServerContext(const std::string& cert_pem, const std::string& key_pem);
    ~TlsServerContext();
    TlsServerContext(const TlsServerContext&) = delete;
    TlsServerContext& operator=(const TlsServerContext&) = delete;

    // Serve a different certificate when the client sends this SNI name.
    void add_sni_certificate(const std::string& hostname, const std::string& cert_pem,
                             const std::string& key_pem);

    std::unique_ptr<TlsStream> accept(Socket sock, int timeout_ms, std::string& error);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace vpnscan::net
