#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace leraykit {

enum class CertificateMethod { exact, bounded_numeric };

// One machine-checkable claim. Verdicts: "verified" / "failed" for claims,
// "supports" / "refutes" / "inconclusive" for numeric evidence.
struct Certificate {
    std::string claim_id;
    CertificateMethod method = CertificateMethod::exact;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json witnesses = nlohmann::json::object();
    std::string verdict = "failed";
    std::string paper_anchor;

    bool passed() const { return verdict == "verified" || verdict == "supports"; }
};

std::string to_string(CertificateMethod m);
void to_json(nlohmann::json& j, const Certificate& c);

// First failing certificate, or nullptr.
const Certificate* first_failure(const std::vector<Certificate>& certs);

}  // namespace leraykit
