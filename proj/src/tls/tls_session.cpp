// tls_session.cpp

#include "vpnscan/tls_session.hpp"

#include <openssl/bio.h>
#include <openssl/err.h>
#include <openssl/pem.h>
#include <openssl/ssl.h>
#include <sys/socket.h>
#include <sys/time.h>

#include <chrono>
#include <cstring>
#include <map>
#include <stdexcept>

namespace vpnscan::net {

namespace {

void set_fd_timeouts(int fd, int timeout_ms) {
    timeval tv{};
    tv.tv_sec = timeout_ms / 1000;
    tv.tv_usec = (timeout_ms % 1000) * 1000;
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
}

std::string ssl_error_string() {
    unsigned long e = ERR_get_error();
    if (e == 0) return "unknown TLS error";
    char buf[256];
    ERR_error_string_n(e, buf, sizeof buf);
    ERR_clear_error();
    return buf;
}

struct SslFree {
    void operator()(SSL* s) const { SSL_free(s); }
};
using SslPtr = std::unique_ptr<SSL, SslFree>;

class OpenSslStream final : public TlsStream {
public:
    OpenSslStream(SslPtr ssl, Socket sock) : ssl_(std::move(ssl)), sock_(std::move(sock)) {}

    bool write(ByteView data) override {
        size_t off = 0;
        while (off < data.size()) {
            int n = SSL_write(ssl_.get(), data.data() + off,
                              static_cast<int>(data.size() - off));
            if (n <= 0) return false;
            off += static_cast<size_t>(n);
        }
        return true;
    }

    Bytes read_until_deadline(int timeout_ms, size_t max) override {
        Bytes out;
        auto deadline =
            std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
        while (out.size() < max) {
            auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                            deadline - std::chrono::steady_clock::now())
                            .count();
            if (left <= 0) break;
            set_fd_timeouts(sock_.fd(), static_cast<int>(left));
            uint8_t buf[16 * 1024];
            int n = SSL_read(ssl_.get(), buf, static_cast<int>(std::min(sizeof buf, max - out.size())));
            if (n <= 0) break;  // timeout, close_notify, or error
            out.insert(out.end(), buf, buf + n);
            if (SSL_pending(ssl_.get()) == 0) {
                // one application flight is enough for probe exchanges
                if (!out.empty()) break;
            }
        }
        return out;
    }

    std::optional<Bytes> peer_certificate_der() override {
        X509* cert = SSL_get_peer_certificate(ssl_.get());
        if (!cert) return std::nullopt;
        unsigned char* buf = nullptr;
        int len = i2d_X509(cert, &buf);
        std::optional<Bytes> out;
        if (len > 0) out = Bytes(buf, buf + len);
        OPENSSL_free(buf);
        X509_free(cert);
        return out;
    }

private:
    SslPtr ssl_;
    Socket sock_;
};

SSL_CTX* make_client_ctx() {
    static SSL_CTX* ctx = [] {
        SSL_CTX* c = SSL_CTX_new(TLS_client_method());
        SSL_CTX_set_verify(c, SSL_VERIFY_NONE, nullptr);
        SSL_CTX_set_security_level(c, 0);
        SSL_CTX_set_min_proto_version(c, TLS1_VERSION);
        SSL_CTX_set_cipher_list(c, "ALL:@SECLEVEL=0");
        return c;
    }();
    return ctx;
}

bool load_cert_key(SSL_CTX* ctx, const std::string& cert_pem, const std::string& key_pem) {
    BIO* cbio = BIO_new_mem_buf(cert_pem.data(), static_cast<int>(cert_pem.size()));
    X509* cert = PEM_read_bio_X509(cbio, nullptr, nullptr, nullptr);
    BIO_free(cbio);
    if (!cert) return false;
    int rc = SSL_CTX_use_certificate(ctx, cert);
    X509_free(cert);
    if (rc != 1) return false;

    BIO* kbio = BIO_new_mem_buf(key_pem.data(), static_cast<int>(key_pem.size()));
    EVP_PKEY* key = PEM_read_bio_PrivateKey(kbio, nullptr, nullptr, nullptr);
    BIO_free(kbio);
    if (!key) return false;
    rc = SSL_CTX_use_PrivateKey(ctx, key);
    EVP_PKEY_free(key);
    return rc == 1;
}

}  // namespace

std::unique_ptr<TlsStream> tls_client_handshake(Socket sock,
                                                const std::optional<std::string>& sni,
                                                int timeout_ms, std::string& error) {
    set_fd_timeouts(sock.fd(), timeout_ms);
    SslPtr ssl(SSL_new(make_client_ctx()));
    if (!ssl) {
        error = "SSL_new failed";
        return nullptr;
    }
    SSL_set_fd(ssl.get(), sock.fd());
    if (sni) SSL_set_tlsext_host_name(ssl.get(), sni->c_str());
    ERR_clear_error();
    if (SSL_connect(ssl.get()) != 1) {
        error = "handshake: " + ssl_error_string();
        return nullptr;
    }
    return std::make_unique<OpenSslStream>(std::move(ssl), std::move(sock));
}

struct TlsServerContext::Impl {
    SSL_CTX* default_ctx = nullptr;
    std::map<std::string, SSL_CTX*> sni_ctx;

    ~Impl() {
        if (default_ctx) SSL_CTX_free(default_ctx);
        for (auto& [name, ctx] : sni_ctx) SSL_CTX_free(ctx);
    }

    static int servername_cb(SSL* ssl, int*, void* arg) {
        auto* impl = static_cast<Impl*>(arg);
        const char* name = SSL_get_servername(ssl, TLSEXT_NAMETYPE_host_name);
        if (name) {
            auto it = impl->sni_ctx.find(name);
            if (it != impl->sni_ctx.end()) SSL_set_SSL_CTX(ssl, it->second);
        }
        return SSL_TLSEXT_ERR_OK;
    }
};

static SSL_CTX* make_server_ctx(const std::string& cert_pem, const std::string& key_pem) {
    SSL_CTX* ctx = SSL_CTX_new(TLS_server_method());
    if (!ctx) throw std::runtime_error("SSL_CTX_new failed");
    SSL_CTX_set_security_level(ctx, 0);
    SSL_CTX_set_min_proto_version(ctx, TLS1_VERSION);
    if (!load_cert_key(ctx, cert_pem, key_pem)) {
        SSL_CTX_free(ctx);
        throw std::runtime_error("failed to load server certificate/key");
    }
    return ctx;
}

TlsServerContext::TlsServerContext(const std::string& cert_pem, const std::string& key_pem)
    : impl_(std::make_unique<Impl>()) {
    impl_->default_ctx = make_server_ctx(cert_pem, key_pem);
    SSL_CTX_set_tlsext_servername_callback(impl_->default_ctx, Impl::servername_cb);
    SSL_CTX_set_tlsext_servername_arg(impl_->default_ctx, impl_.get());
}

TlsServerContext::~TlsServerContext() = default;

void TlsServerContext::add_sni_certificate(const std::string& hostname,
                                           const std::string& cert_pem,
                                           const std::string& key_pem) {
    impl_->sni_ctx[hostname] = make_server_ctx(cert_pem, key_pem);
}

std::unique_ptr<TlsStream> TlsServerContext::accept(Socket sock, int timeout_ms,
                                                    std::string& error) {
    set_fd_timeouts(sock.fd(), timeout_ms);
    SslPtr ssl(SSL_new(impl_->default_ctx));
    if (!ssl) {
        error = "SSL_new failed";
        return nullptr;
    }
    SSL_set_fd(ssl.get(), sock.fd());
    ERR_clear_error();
    if (SSL_accept(ssl.get()) != 1) {
        error = "accept handshake: " + ssl_error_string();
        return nullptr;
    }
    return std::make_unique<OpenSslStream>(std::move(ssl), std::move(sock));
}

}  // namespace vpnscan::net
