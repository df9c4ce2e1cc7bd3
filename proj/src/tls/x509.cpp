// x509.cpp

#include "vpnscan/x509.hpp"

#include <openssl/asn1.h>
#include <openssl/bio.h>
#include <openssl/evp.h>
#include <openssl/pem.h>
#include <openssl/x509.h>
#include <openssl/x509v3.h>

#include <cstring>
#include <memory>
#include <stdexcept>

namespace vpnscan::x509 {

namespace {

struct X509Free {
    void operator()(X509* p) const { X509_free(p); }
};
struct PkeyFree {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct BioFree {
    void operator()(BIO* p) const { BIO_free(p); }
};
using X509Ptr = std::unique_ptr<X509, X509Free>;
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyFree>;
using BioPtr = std::unique_ptr<BIO, BioFree>;

std::optional<std::string> name_entry(X509_NAME* name, int nid) {
    int idx = X509_NAME_get_index_by_NID(name, nid, -1);
    if (idx < 0) return std::nullopt;
    X509_NAME_ENTRY* e = X509_NAME_get_entry(name, idx);
    ASN1_STRING* s = X509_NAME_ENTRY_get_data(e);
    unsigned char* utf8 = nullptr;
    int len = ASN1_STRING_to_UTF8(&utf8, s);
    if (len < 0) return std::nullopt;
    std::string out(reinterpret_cast<char*>(utf8), static_cast<size_t>(len));
    OPENSSL_free(utf8);
    return out;
}

Bytes name_der(X509_NAME* name) {
    unsigned char* buf = nullptr;
    int len = i2d_X509_NAME(name, &buf);
    Bytes out;
    if (len > 0) out.assign(buf, buf + len);
    OPENSSL_free(buf);
    return out;
}

std::string hex_lower(const unsigned char* p, size_t n) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(n * 2);
    for (size_t i = 0; i < n; ++i) {
        out.push_back(digits[p[i] >> 4]);
        out.push_back(digits[p[i] & 0xf]);
    }
    return out;
}

UnixSeconds asn1_time_to_unix(const ASN1_TIME* t) {
    tm parts{};
    if (ASN1_TIME_to_tm(t, &parts) != 1) return 0;
    // parts is UTC; reuse the proleptic-gregorian conversion via timegm
    return static_cast<UnixSeconds>(timegm(&parts));
}

PkeyPtr generate_p256_key() {
    PkeyPtr key(EVP_PKEY_Q_keygen(nullptr, nullptr, "EC", "P-256"));
    if (!key) throw std::runtime_error("EC keygen failed");
    return key;
}

void add_name_entries(X509_NAME* name, const std::string& cn, const std::string& org) {
    if (!org.empty()) {
        X509_NAME_add_entry_by_txt(name, "O", MBSTRING_UTF8,
                                   reinterpret_cast<const unsigned char*>(org.c_str()), -1,
                                   -1, 0);
    }
    if (!cn.empty()) {
        X509_NAME_add_entry_by_txt(name, "CN", MBSTRING_UTF8,
                                   reinterpret_cast<const unsigned char*>(cn.c_str()), -1, -1,
                                   0);
    }
}

}  // namespace

std::optional<ParsedCertificate> parse_der(ByteView der) {
    const unsigned char* p = der.data();
    X509Ptr cert(d2i_X509(nullptr, &p, static_cast<long>(der.size())));
    if (!cert) return std::nullopt;

    ParsedCertificate out;
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    if (X509_digest(cert.get(), EVP_sha256(), digest, &digest_len) == 1) {
        out.fingerprint_sha256 = hex_lower(digest, digest_len);
    }

    X509_NAME* subject = X509_get_subject_name(cert.get());
    X509_NAME* issuer = X509_get_issuer_name(cert.get());
    out.subject_cn = name_entry(subject, NID_commonName);
    out.issuer_cn = name_entry(issuer, NID_commonName);
    out.subject_org = name_entry(subject, NID_organizationName);
    out.issuer_org = name_entry(issuer, NID_organizationName);
    out.subject_dn_der = name_der(subject);
    out.issuer_dn_der = name_der(issuer);

    out.not_before = asn1_time_to_unix(X509_get0_notBefore(cert.get()));
    out.not_after = asn1_time_to_unix(X509_get0_notAfter(cert.get()));

    if (auto* sans = static_cast<GENERAL_NAMES*>(
            X509_get_ext_d2i(cert.get(), NID_subject_alt_name, nullptr, nullptr))) {
        for (int i = 0; i < sk_GENERAL_NAME_num(sans); ++i) {
            GENERAL_NAME* gn = sk_GENERAL_NAME_value(sans, i);
            if (gn->type == GEN_DNS) {
                const unsigned char* d = ASN1_STRING_get0_data(gn->d.dNSName);
                int len = ASN1_STRING_length(gn->d.dNSName);
                if (d && len > 0) out.san_list.emplace_back(reinterpret_cast<const char*>(d),
                                                            static_cast<size_t>(len));
            }
        }
        GENERAL_NAMES_free(sans);
    }

    const ASN1_OCTET_STRING* ski = X509_get0_subject_key_id(cert.get());
    if (ski) out.subject_key_id = hex_lower(ASN1_STRING_get0_data(ski),
                                            static_cast<size_t>(ASN1_STRING_length(ski)));
    const ASN1_OCTET_STRING* aki = X509_get0_authority_key_id(cert.get());
    if (aki) out.authority_key_id = hex_lower(ASN1_STRING_get0_data(aki),
                                              static_cast<size_t>(ASN1_STRING_length(aki)));

    EVP_PKEY* own_key = X509_get0_pubkey(cert.get());
    out.self_signature_valid = own_key && X509_verify(cert.get(), own_key) == 1;
    return out;
}

std::optional<Bytes> pem_file_to_der(const std::string& path) {
    BioPtr bio(BIO_new_file(path.c_str(), "r"));
    if (!bio) return std::nullopt;
    X509Ptr cert(PEM_read_bio_X509(bio.get(), nullptr, nullptr, nullptr));
    if (!cert) return std::nullopt;
    unsigned char* buf = nullptr;
    int len = i2d_X509(cert.get(), &buf);
    if (len <= 0) return std::nullopt;
    Bytes der(buf, buf + len);
    OPENSSL_free(buf);
    return der;
}

std::optional<ParsedCertificate> parse_pem_file(const std::string& path) {
    auto der = pem_file_to_der(path);
    if (!der) return std::nullopt;
    return parse_der(*der);
}

MintedCertificate mint_certificate(const MintSpec& spec) {
    PkeyPtr subject_key;
    if (!spec.subject_key_pem.empty()) {
        BioPtr bio(BIO_new_mem_buf(spec.subject_key_pem.data(),
                                   static_cast<int>(spec.subject_key_pem.size())));
        subject_key.reset(PEM_read_bio_PrivateKey(bio.get(), nullptr, nullptr, nullptr));
        if (!subject_key) throw std::runtime_error("bad subject key PEM");
    } else {
        subject_key = generate_p256_key();
    }
    PkeyPtr issuer_key;
    EVP_PKEY* signing_key = subject_key.get();
    if (!spec.sign_with_own_key) {
        issuer_key = generate_p256_key();
        signing_key = issuer_key.get();
    }

    X509Ptr cert(X509_new());
    X509_set_version(cert.get(), 2);
    ASN1_INTEGER_set_uint64(X509_get_serialNumber(cert.get()), spec.serial);
    time_t nb = static_cast<time_t>(spec.not_before);
    time_t na = static_cast<time_t>(spec.not_after);
    X509_time_adj_ex(X509_getm_notBefore(cert.get()), 0, 0, &nb);
    X509_time_adj_ex(X509_getm_notAfter(cert.get()), 0, 0, &na);
    X509_set_pubkey(cert.get(), subject_key.get());

    X509_NAME* subject = X509_get_subject_name(cert.get());
    add_name_entries(subject, spec.subject_cn, spec.subject_org);
    X509_NAME* issuer = X509_get_issuer_name(cert.get());
    add_name_entries(issuer, spec.issuer_cn, spec.issuer_org);

    auto add_ext = [&](int nid, const std::string& value) {
        X509V3_CTX ctx;
        X509V3_set_ctx_nodb(&ctx);
        X509V3_set_ctx(&ctx, cert.get(), cert.get(), nullptr, nullptr, 0);
        X509_EXTENSION* ext = X509V3_EXT_conf_nid(nullptr, &ctx, nid, value.c_str());
        if (ext) {
            X509_add_ext(cert.get(), ext, -1);
            X509_EXTENSION_free(ext);
        }
    };
    if (!spec.sans.empty()) {
        std::string value;
        for (const auto& s : spec.sans) {
            if (!value.empty()) value += ",";
            value += "DNS:" + s;
        }
        add_ext(NID_subject_alt_name, value);
    }
    if (spec.add_key_ids) {
        add_ext(NID_subject_key_identifier, "hash");
        add_ext(NID_authority_key_identifier, "keyid:always");
    }

    if (X509_sign(cert.get(), signing_key, EVP_sha256()) == 0) {
        throw std::runtime_error("X509_sign failed");
    }

    MintedCertificate out;
    unsigned char* buf = nullptr;
    int len = i2d_X509(cert.get(), &buf);
    if (len <= 0) throw std::runtime_error("i2d_X509 failed");
    out.der.assign(buf, buf + len);
    OPENSSL_free(buf);

    BioPtr cert_bio(BIO_new(BIO_s_mem()));
    PEM_write_bio_X509(cert_bio.get(), cert.get());
    char* data = nullptr;
    long n = BIO_get_mem_data(cert_bio.get(), &data);
    out.cert_pem.assign(data, static_cast<size_t>(n));

    BioPtr key_bio(BIO_new(BIO_s_mem()));
    PEM_write_bio_PrivateKey(key_bio.get(), subject_key.get(), nullptr, nullptr, 0, nullptr,
                             nullptr);
    n = BIO_get_mem_data(key_bio.get(), &data);
    out.key_pem.assign(data, static_cast<size_t>(n));
    return out;
}

}  // namespace vpnscan::x509
