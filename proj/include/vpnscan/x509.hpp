// x509.hpp
//
// X.509 parsing into the audit record shape, plus a small certificate
// mint used by mock servers and test corpora. Backed by libcrypto.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vpnscan/bytes.hpp"
#include "vpnscan/clock.hpp"

namespace vpnscan::x509 {

struct ParsedCertificate {
    std::string fingerprint_sha256;  // lowercase hex
    std::optional<std::string> subject_cn, issuer_cn;
    std::optional<std::string> subject_org, issuer_org;
    std::vector<std::string> san_list;
    UnixSeconds not_before = 0;
    UnixSeconds not_after = 0;
    std::optional<std::string> authority_key_id, subject_key_id;  // lowercase hex
    bool self_signature_valid = false;   // signature verifies under own key
    Bytes subject_dn_der, issuer_dn_der; // exact DN octets
};

std::optional<ParsedCertificate> parse_der(ByteView der);
std::optional<ParsedCertificate> parse_pem_file(const std::string& path);
std::optional<Bytes> pem_file_to_der(const std::string& path);

struct MintSpec {
    std::string subject_cn;
    std::string issuer_cn;
    std::string subject_org;  // empty = omit
    std::string issuer_org;   // empty = omit
    std::vector<std::string> sans;
    UnixSeconds not_before = 0;
    UnixSeconds not_after = 0;
    bool sign_with_own_key = true;  // false: signed by a separately generated key
    bool add_key_ids = true;
    uint64_t serial = 1;
    std::string subject_key_pem;  // reuse an existing key (renewal fixtures); empty = generate
};

struct MintedCertificate {
    Bytes der;
    std::string cert_pem;
    std::string key_pem;  // subject key (for TLS server use)
};

// EC P-256 throughout; keygen is cheap enough for per-spawn certs.
MintedCertificate mint_certificate(const MintSpec& spec);

}  // namespace vpnscan::x509
