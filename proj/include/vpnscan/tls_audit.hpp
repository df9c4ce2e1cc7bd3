// tls_audit.hpp
//
// Certificate collection from TLS-based VPN endpoints and the hygiene
// statistics computed over them: expiry, self-issued/self-signed and
// snake-oil flags, issuer ranking, expiry distribution, and the
// with/without-SNI comparison.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vpnscan/clock.hpp"
#include "vpnscan/probe.hpp"
#include "vpnscan/x509.hpp"

namespace vpnscan::tlsaudit {

struct TlsCertificateRecord {
    std::optional<std::string> fingerprint;  // sha256 over DER, lowercase hex
    std::optional<std::string> subject_cn, issuer_cn;
    std::optional<std::string> subject_org, issuer_org;
    std::vector<std::string> san_list;
    UnixSeconds not_before = 0;
    UnixSeconds not_after = 0;
    std::optional<std::string> authority_key_id, subject_key_id;
    bool self_signature_valid = false;
    Bytes subject_dn_der, issuer_dn_der;
    probe::TransportTarget source_target;
    std::optional<std::string> sni_used;
};

struct CertFlags {
    bool expired = false;
    bool self_issued = false;
    bool self_signed = false;
    bool snake_oil = false;
};

TlsCertificateRecord record_from_der(ByteView der, const probe::TransportTarget& source,
                                     const std::optional<std::string>& sni);

// expired: not_after strictly before the reference date.
// self-issued: subject DN octets equal issuer DN octets.
// self-signed: signature verifies under the certificate's own key.
// snake oil: self-issued with both CNs in {localhost, user.local}.
CertFlags classify_certificate(const TlsCertificateRecord& rec, UnixSeconds reference_date);

struct DedupeResult {
    std::vector<TlsCertificateRecord> unique;           // one per distinct fingerprint
    std::vector<TlsCertificateRecord> fingerprintless;  // passed through unmerged
    size_t input_count = 0;
};
DedupeResult dedupe_certificates(const std::vector<TlsCertificateRecord>& records);

// Ranked (issuer organization, count); absent orgs grouped under "N/S".
std::vector<std::pair<std::string, size_t>> issuer_stats(
    const std::vector<TlsCertificateRecord>& records);

// Whole days since expiry for every expired record.
std::vector<int64_t> expiry_distribution(const std::vector<TlsCertificateRecord>& records,
                                         UnixSeconds reference_date);

struct MismatchReport {
    bool mismatch = false;
    bool renewal = false;
    std::vector<std::string> differing_fields;
    // which side carries the later not_after when classified as a renewal
    std::optional<std::string> newer;  // "with_sni" | "without_sni"
};
MismatchReport compare_sni_certificates(const TlsCertificateRecord& with_sni,
                                        const TlsCertificateRecord& without_sni);

// --- live collection --------------------------------------------------------

enum class CollectFailure { none, connect, handshake, no_certificate };

struct CollectOutcome {
    CollectFailure failure = CollectFailure::none;
    std::string error;
    std::optional<TlsCertificateRecord> record;
    bool ok() const { return failure == CollectFailure::none && record.has_value(); }
};

CollectOutcome collect_certificate(const probe::TransportTarget& target,
                                   const std::optional<std::string>& sni, int timeout_ms);

// NDJSON row per the audit output contract.
std::string record_to_ndjson(const TlsCertificateRecord& rec, UnixSeconds reference_date);

}  // namespace vpnscan::tlsaudit
