// tls_audit.cpp

#include "vpnscan/tls_audit.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"
#include "vpnscan/tls_session.hpp"

namespace vpnscan::tlsaudit {

namespace {

bool is_placeholder_cn(const std::optional<std::string>& cn) {
    return cn && (*cn == "localhost" || *cn == "user.local");
}

bool sorted_equal(std::vector<std::string> a, std::vector<std::string> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

}  // namespace

TlsCertificateRecord record_from_der(ByteView der, const probe::TransportTarget& source,
                                     const std::optional<std::string>& sni) {
    TlsCertificateRecord rec;
    rec.source_target = source;
    rec.sni_used = sni;
    auto parsed = x509::parse_der(der);
    if (!parsed) return rec;  // unparseable: keep the empty record, no fingerprint
    rec.fingerprint = parsed->fingerprint_sha256;
    rec.subject_cn = parsed->subject_cn;
    rec.issuer_cn = parsed->issuer_cn;
    rec.subject_org = parsed->subject_org;
    rec.issuer_org = parsed->issuer_org;
    rec.san_list = parsed->san_list;
    rec.not_before = parsed->not_before;
    rec.not_after = parsed->not_after;
    rec.authority_key_id = parsed->authority_key_id;
    rec.subject_key_id = parsed->subject_key_id;
    rec.self_signature_valid = parsed->self_signature_valid;
    rec.subject_dn_der = parsed->subject_dn_der;
    rec.issuer_dn_der = parsed->issuer_dn_der;
    return rec;
}

CertFlags classify_certificate(const TlsCertificateRecord& rec, UnixSeconds reference_date) {
    CertFlags f;
    f.expired = rec.not_after < reference_date;
    f.self_issued = !rec.subject_dn_der.empty() && rec.subject_dn_der == rec.issuer_dn_der;
    f.self_signed = rec.self_signature_valid;
    f.snake_oil =
        f.self_issued && is_placeholder_cn(rec.subject_cn) && is_placeholder_cn(rec.issuer_cn);
    return f;
}

DedupeResult dedupe_certificates(const std::vector<TlsCertificateRecord>& records) {
    DedupeResult out;
    out.input_count = records.size();
    std::set<std::string> seen;
    for (const auto& rec : records) {
        if (!rec.fingerprint) {
            out.fingerprintless.push_back(rec);
        } else if (seen.insert(*rec.fingerprint).second) {
            out.unique.push_back(rec);
        }
    }
    return out;
}

std::vector<std::pair<std::string, size_t>> issuer_stats(
    const std::vector<TlsCertificateRecord>& records) {
    std::map<std::string, size_t> counts;
    for (const auto& rec : records) {
        std::string org = rec.issuer_org && !rec.issuer_org->empty() ? *rec.issuer_org : "N/S";
        ++counts[org];
    }
    std::vector<std::pair<std::string, size_t>> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

std::vector<int64_t> expiry_distribution(const std::vector<TlsCertificateRecord>& records,
                                         UnixSeconds reference_date) {
    std::vector<int64_t> out;
    for (const auto& rec : records) {
        if (rec.not_after < reference_date) {
            out.push_back((reference_date - rec.not_after) / 86400);
        }
    }
    return out;
}

MismatchReport compare_sni_certificates(const TlsCertificateRecord& with_sni,
                                        const TlsCertificateRecord& without_sni) {
    MismatchReport rep;
    if (with_sni.fingerprint && without_sni.fingerprint
        && *with_sni.fingerprint == *without_sni.fingerprint) {
        return rep;  // identical certificate
    }
    if (with_sni.authority_key_id != without_sni.authority_key_id) {
        rep.differing_fields.push_back("authority_key_id");
    }
    if (with_sni.subject_key_id != without_sni.subject_key_id) {
        rep.differing_fields.push_back("subject_key_id");
    }
    if (!sorted_equal(with_sni.san_list, without_sni.san_list)) {
        rep.differing_fields.push_back("san_list");
    }
    if (with_sni.issuer_cn != without_sni.issuer_cn) {
        rep.differing_fields.push_back("issuer_cn");
    }
    if (with_sni.subject_cn != without_sni.subject_cn) {
        rep.differing_fields.push_back("subject_cn");
    }
    if (rep.differing_fields.empty()) {
        rep.renewal = true;  // same identity, different fingerprint
        if (with_sni.not_after != without_sni.not_after) {
            rep.newer = with_sni.not_after > without_sni.not_after ? "with_sni" : "without_sni";
        }
        return rep;
    }
    rep.mismatch = true;
    return rep;
}

CollectOutcome collect_certificate(const probe::TransportTarget& target,
                                   const std::optional<std::string>& sni, int timeout_ms) {
    CollectOutcome out;
    net::Endpoint ep{target.address, target.port};
    auto conn = net::tcp_connect(ep, timeout_ms);
    if (conn.status != net::TcpResult::Status::ok) {
        out.failure = CollectFailure::connect;
        out.error = conn.error;
        return out;
    }
    std::string err;
    auto tls = net::tls_client_handshake(std::move(conn.sock), sni, timeout_ms, err);
    if (!tls) {
        out.failure = CollectFailure::handshake;
        out.error = err;
        return out;
    }
    auto der = tls->peer_certificate_der();
    if (!der) {
        out.failure = CollectFailure::no_certificate;
        out.error = "no peer certificate";
        return out;
    }
    out.record = record_from_der(*der, target, sni);
    return out;
}

std::string record_to_ndjson(const TlsCertificateRecord& rec, UnixSeconds reference_date) {
    CertFlags f = classify_certificate(rec, reference_date);
    nlohmann::ordered_json j;
    j["target_ip"] = rec.source_target.address.to_string();
    if (rec.sni_used) j["sni"] = *rec.sni_used;
    if (rec.fingerprint) j["fingerprint"] = *rec.fingerprint;
    if (rec.subject_cn) j["subject_cn"] = *rec.subject_cn;
    if (rec.issuer_cn) j["issuer_cn"] = *rec.issuer_cn;
    if (rec.issuer_org) j["issuer_org"] = *rec.issuer_org;
    j["not_before"] = format_iso8601(rec.not_before);
    j["not_after"] = format_iso8601(rec.not_after);
    j["expired"] = f.expired;
    j["self_issued"] = f.self_issued;
    j["self_signed"] = f.self_signed;
    j["snake_oil"] = f.snake_oil;
    return j.dump();
}

}  // namespace vpnscan::tlsaudit
