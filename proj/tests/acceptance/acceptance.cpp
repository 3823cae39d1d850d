// Acceptance criteria 1-10. One PASS/FAIL line each, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "leraykit/bwcert.hpp"
#include "leraykit/emcert.hpp"
#include "leraykit/specialfn.hpp"
#include "leraykit/symbol.hpp"

using namespace leraykit;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(lo * std::pow(hi / lo, i / double(n - 1)));
    }
    out.back() = hi;
    return out;
}

double rel(const BoundedFloat& a, const BoundedFloat& b)
{
    return (abs(a.value() - b.value()) / abs(b.value())).convert_to<double>();
}

Outcome heisenberg()
{
    const auto start = std::chrono::steady_clock::now();
    double worst = 0;
    for (int k = 0; k <= 50; ++k) {
        const BoundedFloat j = symbol::symbol_value({Real(2), Real(1), k});
        worst = std::max(worst, abs(j.value() - 1).convert_to<double>() + j.radius_double());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst <= 1e-12 && secs < 1.0, "max |J-1| + radius = " + fmt("%.3g", worst) + ", " + fmt("%.3f", secs) + " s"};
}

Outcome gamma2_norms()
{
    double worst = 0;
    for (double d : {-0.5, 0.0, 0.5, 1.5, 2.0, 2.5}) {
        const long double pi = 3.14159265358979323846264338327950288L;
        const long double expected = std::sqrt(pi / 2 * (1 - d) / std::cos(d * pi / 2));
        const auto n = symbol::leray_norm(Real(2), symbol::MeasureTag::generic(Real(d)));
        worst = std::max(worst, std::abs(n.value.to_double() - double(expected)));
    }
    double near_one = 0;
    for (double d : {1 - 1e-6, 1 + 1e-6}) {
        const auto n = symbol::leray_norm(Real(2), symbol::MeasureTag::generic(Real(d)));
        near_one = std::max(near_one, std::abs(n.value.to_double() - 1));
    }
    return {worst <= 1e-10 && near_one <= 1e-4,
            "max error " + fmt("%.3g", worst) + ", |norm - 1| at d = 1 +/- 1e-6: " + fmt("%.3g", near_one)};
}

Outcome pairing_norms()
{
    double worst = 0;
    bool argmax_zero = true;
    for (double g : {1.2, 1.5, 2.0, 3.0, 5.0, 10.0}) {
        const Real gamma(g);
        const auto n = symbol::leray_norm(gamma, symbol::MeasureTag::pairing());
        worst = std::max(worst, std::abs(n.value.to_double() - g / (2 * std::sqrt(g - 1))));
        if (g != 2.0) {
            symbol::SupSearchOptions opt;
            opt.k_max = 200;
            opt.early_stop = false;
            const auto s = symbol::sup_search(gamma, gamma - 1, kDefaultTolerance, opt);
            argmax_zero = argmax_zero && s.argmax_k == 0;
        }
    }
    return {worst <= 1e-10 && argmax_zero,
            "max error " + fmt("%.3g", worst) + (argmax_zero ? ", sup at k = 0 for gamma != 2" : ", sup not at k = 0")};
}

Outcome preferred_growth()
{
    bool increasing = true;
    double worst_gap = 0;
    for (double g : {1.5, 3.0, 5.0}) {
        const Real gamma(g);
        const Real d = (gamma + 1) / 3;
        BoundedFloat prev = symbol::sub_norm({gamma, d, 0});
        for (int k = 1; k <= 200; ++k) {
            const BoundedFloat cur = symbol::sub_norm({gamma, d, k});
            increasing = increasing && cur.lower() > prev.upper();
            prev = cur;
        }
        const double limit = symbol::hf_limit(g);
        worst_gap = std::max(worst_gap, std::abs(prev.to_double() - limit));
    }
    return {increasing && worst_gap <= 1e-3,
            std::string(increasing ? "strictly increasing" : "not increasing") + ", max |sqrtJ(200) - limit| = " +
                fmt("%.3g", worst_gap)};
}

Outcome holder_symmetry()
{
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> unit(0, 1);
    double worst = 0;
    int samples = 0;
    while (samples < 20) {
        const double g = 1 + 3 * unit(gen);
        if (std::abs(g - 2) < 1e-3) {
            continue;
        }
        const Real gamma(g);
        const double bound = std::min(g / std::abs(g - 2), 4.0);
        const auto h = symbol::HolderReparam::from_a(Real(1 - 0.9 * bound * (2 * unit(gen) - 1)));
        const Real gs = symbol::holder_conjugate(gamma);
        if (!h.finite_for_all_modes(gamma) || !h.finite_for_all_modes(gs)) {
            continue;
        }
        ++samples;
        for (int k = 0; k <= 40; ++k) {
            const auto a = symbol::symbol_value({gamma, h.exponent(gamma), k});
            const auto b = symbol::symbol_value({gs, h.exponent(gs), k});
            worst = std::max(worst, rel(a, b));
        }
    }
    return {worst <= 1e-10, "max relative difference " + fmt("%.3g", worst) + " over 20 pairs, k <= 40"};
}

Outcome phi_inequalities()
{
    bool below = true;
    bool above = true;
    bool sandwich = true;
    double min_margin = 1;
    for (double q : {-2.0, 0.0, 1.0, 3.0, 2.0 / 3.0}) {
        const Real qr = q == 2.0 / 3.0 ? Real(2) / 3 : Real(q);
        for (double r : log_grid(std::max(q, 0.0) + 0.01, 1e3, 50)) {
            const Real rr(r);
            const BoundedFloat v = special::phi(rr, qr);
            if (q == 2.0 / 3.0) {
                above = above && v.certainly_above(Real(1));
                min_margin = std::min(min_margin, (v.lower() - 1).convert_to<double>());
            } else {
                below = below && v.certainly_below(Real(1));
                min_margin = std::min(min_margin, (1 - v.upper()).convert_to<double>());
            }
            const auto s = special::phi_sandwich(rr, qr);
            sandwich = sandwich && s.lower <= v.lower() && v.upper() <= s.upper;
        }
    }
    return {below && above && sandwich,
            std::string(below ? "" : "Phi<1 failed; ") + (above ? "" : "Phi(r,2/3)>1 failed; ") +
                (sandwich ? "" : "sandwich failed; ") + "smallest certified margin " + fmt("%.3g", min_margin)};
}

Outcome exact_suite()
{
    const auto start = std::chrono::steady_clock::now();
    std::vector<Certificate> certs = em::h_claims();
    for (auto& c : em::s_bound_claims()) {
        certs.push_back(std::move(c));
    }
    certs.push_back(em::bracket_certificates());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string failed;
    int exact_claims = 0;
    for (const auto& c : certs) {
        if (c.method != CertificateMethod::exact) {
            continue;
        }
        ++exact_claims;
        if (!c.passed()) {
            failed += " " + c.claim_id;
        }
    }
    return {failed.empty() && exact_claims == 8 && secs < 30,
            std::to_string(exact_claims) + " exact claims" + (failed.empty() ? " verified" : ", failed:" + failed) + ", " +
                fmt("%.2f", secs) + " s"};
}

Outcome euler_maclaurin()
{
    double worst = 0;
    for (double r : {0.7, 1.0, 2.0, 5.0, 20.0}) {
        worst = std::max(worst, std::abs(em::em_reconstruction(r).difference()));
    }
    double worst_rel = 0;
    for (double r : {1.0, 2.0, 5.0}) {
        const double closed = em::s_integral_closed(Real(r)).convert_to<double>();
        worst_rel = std::max(worst_rel, std::abs(closed - em::s_integral_quadrature(r).first) / std::abs(closed));
    }
    return {worst <= 1e-10 && worst_rel <= 1e-8,
            "max reconstruction gap " + fmt("%.3g", worst) + ", integral relative error " + fmt("%.3g", worst_rel)};
}

Outcome root_machinery()
{
    const Certificate c = em::root_sample_certificate(100);
    double worst = 0;
    for (const auto& chk : c.witnesses["checks"]) {
        if (chk.contains("worst")) {
            worst = chk["worst"].get<double>();
        }
    }
    return {c.passed(), "100 samples, worst relative residual " + fmt("%.3g", worst)};
}

Outcome bernstein_widder()
{
    const std::vector<double> grid{0.5, 1, 2, 4, 8};
    bool supports = true;
    for (double q : {-2.0, 0.0, 1.0, 3.0}) {
        supports = supports && bw::cm_numeric_certificate(q, 4, grid, 0.5).verdict == "supports";
    }
    const bool refutes = bw::cm_numeric_certificate(2.0 / 3.0, 4, grid, 0.5).verdict == "refutes";
    const double t = bw::find_negative_kernel(2.0 / 3.0);
    const bool witness = t > 0 && bw::m_kernel(t, 2.0 / 3.0) < 0;
    const double s2 = bw::quadratic_roots(1e-4).s2;
    const double s2_gap = std::abs(s2 - (3 - std::sqrt(3.0)) / 6);
    return {supports && refutes && witness && s2_gap <= 1e-4,
            std::string(supports ? "supports q in {-2,0,1,3}" : "support failed") + (refutes ? ", refutes q=2/3" : ", no refutation") +
                ", M(" + fmt("%.4g", t) + ", 2/3) = " + fmt("%.3g", witness ? bw::m_kernel(t, 2.0 / 3.0) : 0.0) +
                ", |s2(1e-4) - (3-sqrt3)/6| = " + fmt("%.3g", s2_gap)};
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"Heisenberg constancy J(1,2,k) = 1", heisenberg},
        {"gamma = 2 closed form and continuity at d = 1", gamma2_norms},
        {"pairing norm and sup at k = 0", pairing_norms},
        {"preferred measure: increasing to the high-frequency limit", preferred_growth},
        {"Hoelder symmetry", holder_symmetry},
        {"Phi inequalities and sandwich", phi_inequalities},
        {"exact certificate suite", exact_suite},
        {"Euler-Maclaurin reconstruction", euler_maclaurin},
        {"root machinery", root_machinery},
        {"Bernstein-Widder evidence", bernstein_widder},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
