#include "leraykit/certificate.hpp"

namespace leraykit {

std::string to_string(CertificateMethod m)
{
    return m == CertificateMethod::exact ? "exact" : "bounded-numeric";
}

void to_json(nlohmann::json& j, const Certificate& c)
{
    j = nlohmann::json{{"claim_id", c.claim_id},
                       {"method", to_string(c.method)},
                       {"inputs", c.inputs},
                       {"witnesses", c.witnesses},
                       {"verdict", c.verdict},
                       {"paper_anchor", c.paper_anchor}};
}

const Certificate* first_failure(const std::vector<Certificate>& certs)
{
    for (const auto& c : certs) {
        if (!c.passed()) {
            return &c;
        }
    }
    return nullptr;
}

}  // namespace leraykit
