#include <doctest.h>

#include <cmath>

#include "leraykit/emcert.hpp"
#include "leraykit/errors.hpp"
#include "support/oracles.hpp"

using namespace leraykit;
using namespace leraykit::em;
using exact::BigRational;

namespace {

const Certificate& find(const std::vector<Certificate>& certs, const std::string& id)
{
    for (const auto& c : certs) {
        if (c.claim_id == id) {
            return c;
        }
    }
    FAIL("missing claim " << id);
    return certs.front();
}

// Root of p_r between m and Mu by long double bisection, independent of the cubic formula.
long double bisect_root(long double r)
{
    auto p = [r](long double x) {
        return (-4 + 39 * r - 36 * r * r + 162 * r * r * r) + (18 + 18 * r + 216 * r * r) * x + (54 - 54 * r) * x * x -
               108 * x * x * x;
    };
    long double lo = 0;
    long double hi = 3 * r + 10;  // p(lo) > 0 > p(hi)
    for (int i = 0; i < 200; ++i) {
        const long double mid = (lo + hi) / 2;
        (p(mid) > 0 ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

}  // namespace

TEST_CASE("S and f_r closed forms")
{
    CHECK(s_term(BigRational(1), BigRational(0)) == BigRational(-891, 64));
    CHECK(s_function(1.0, 0.0) == doctest::Approx(-891.0 / 64).epsilon(1e-15));
    CHECK(std::abs(s_function(1.0, 1e6)) < 1e-23);
    CHECK_THROWS_AS(s_function(2.0 / 3.0, 1.0), DomainError);
    CHECK_THROWS_AS(s_function(0.5, 1.0), DomainError);
    CHECK_THROWS_AS(s_function(1.0, -1.0), DomainError);
    // f_r(j) is the q = 2/3 summand of Phi
    for (double r : {0.8, 1.0, 3.0}) {
        for (double j : {1.0, 2.0, 7.0}) {
            const double q = 2.0 / 3.0;
            CHECK(f_r(r, j) == doctest::Approx(2 * r * (j - q) / std::pow(r + j - q, 3)).epsilon(1e-13));
        }
    }
}

TEST_CASE("first-order Euler-Maclaurin on a linear function")
{
    const auto d = em_first_order([](double x) { return x; }, [](double) { return 1.0; }, 0, 10L);
    CHECK(d.integral == doctest::Approx(50).epsilon(1e-14));
    CHECK(d.boundary == doctest::Approx(5).epsilon(1e-14));
    CHECK(std::abs(d.bernoulli) < 1e-13);
    CHECK(d.sum() == doctest::Approx(55).epsilon(1e-14));
}

TEST_CASE("first-order Euler-Maclaurin reproduces a quadratic sum")
{
    // sum_{j=3}^{20} j^2 = 2870 - 5
    const auto d = em_first_order([](double x) { return x * x; }, [](double x) { return 2 * x; }, 2, 20L);
    CHECK(d.sum() == doctest::Approx(2865).epsilon(1e-13));
    CHECK(d.error_bound < 1e-9);
}

TEST_CASE("infinite range requires tail data")
{
    CHECK_THROWS_AS(em_first_order([](double x) { return 1 / (x * x); }, [](double x) { return -2 / (x * x * x); }, 1,
                                   std::nullopt),
                    TailUnbounded);
    CHECK_THROWS_AS(em_first_order([](double x) { return x; }, [](double) { return 1.0; }, 5, 2L), DomainError);
}

TEST_CASE("f_r decomposition at r = 1")
{
    const auto d = em_f_r(1.0);
    CHECK(d.integral == doctest::Approx(-3).epsilon(1e-10));
    CHECK(d.boundary == doctest::Approx(18).epsilon(1e-15));
    const auto phi = oracle::phi_series(1.0L, 2.0L / 3.0L, 2000000);
    CHECK(d.sum() > double(phi.lo) - 1e-9);
    CHECK(d.sum() < double(phi.hi) + 1e-9);
    CHECK(d.error_bound < 1e-9);
}

TEST_CASE("Euler-Maclaurin reconstruction of Phi(r, 2/3)")
{
    for (double r : {0.7, 1.0, 2.0, 5.0, 20.0}) {
        CAPTURE(r);
        const auto rec = em_reconstruction(r);
        CHECK(std::abs(rec.difference()) <= 1e-10);
        CHECK(rec.peeled.radius_double() < 1e-11);
        const auto phi = oracle::phi_series(static_cast<long double>(r), 2.0L / 3.0L, 4000000);
        CHECK(rec.peeled.to_double() > double(phi.lo) - 1e-9);
        CHECK(rec.peeled.to_double() < double(phi.hi) + 1e-9);
    }
}

TEST_CASE("integral of S: closed form against quadrature")
{
    for (double r : {1.0, 2.0, 5.0, 50.0}) {
        CAPTURE(r);
        const double closed = s_integral_closed(Real(r)).convert_to<double>();
        const auto [quad, err] = s_integral_quadrature(r);
        CHECK(std::abs(closed - quad) <= 1e-8 * std::abs(closed));
    }
}

TEST_CASE("p_r coefficients and identities")
{
    CHECK(pr_poly(BigRational(1)) == RationalPolynomial{BigRational(161), BigRational(252), BigRational(0), BigRational(-108)});
    for (const BigRational& r : {BigRational(7, 10), BigRational(1), BigRational(3)}) {
        CHECK(exact::descartes_sign_changes(pr_poly(r)) == 1);
    }
    // pointwise versions of the polynomial identities, at arbitrary rationals
    for (const BigRational& r : {BigRational(5, 7), BigRational(2), BigRational(-13, 4), BigRational(101, 3)}) {
        const auto p = pr_poly(r);
        CHECK(p(BigRational(3, 2) * r + BigRational(1, 6)) == BigRational(81) * r);
        CHECK(p(BigRational(3, 2) * r + BigRational(1, 3)) == BigRational(4) + 66 * r - BigRational(225, 2) * r * r);
        const BigRational rm = p(m_bound(r)) * BigRational(5).pow(15) * r.pow(9);
        CHECK(rm == BigRational(81) * (12348 + 125 * r * r * (1515625 * r.pow(4) + 21000 * r * r - 5292)));
        CHECK(p(mu_bound(r)) * BigRational(5).pow(6) * r.pow(3) == BigRational(-81) * (36 + 875 * r * r));
    }
    // same identity with the printed 2/25 coefficient fails
    const BigRational r(1);
    CHECK(pr_poly(r)(mu_bound(r, printed_bracket_coefficient())) * BigRational(5).pow(6) != BigRational(-81) * 911);
    CHECK(pr_poly(r)(mu_bound(r, printed_bracket_coefficient())).sign() > 0);
}

TEST_CASE("critical point bracket")
{
    CHECK(mu_bound(BigRational(1)) == BigRational(134, 75));
    CHECK(m_bound(BigRational(1)) == BigRational(134, 75) - BigRational(21, 3125));
    const double q1 = q_root(1.0);
    CHECK(m_bound(1.0) < q1);
    CHECK(q1 < mu_bound(1.0));
    CHECK(q1 == doctest::Approx(double(bisect_root(1.0L))).epsilon(1e-15));
    for (double r : {0.7, 0.9, 2.5, 17.0, 400.0}) {
        CAPTURE(r);
        CHECK(q_root(r) == doctest::Approx(double(bisect_root(r))).epsilon(1e-14));
        CHECK(pr_relative_residual(r, q_root(r)) < 1e-10);
    }
    // residual at r = 5 in exact arithmetic at the rounded root
    const double q5 = q_root(5.0);
    const BigRational exact_residual = pr_poly(BigRational(5))(BigRational{mpq_class(q5)});
    CHECK(std::abs(exact_residual.to_double()) < 1e-8);
    CHECK_THROWS_AS(q_root(2.0 / 3.0), DomainError);
    CHECK_THROWS_AS(q_root(0.1), DomainError);
}

TEST_CASE("Q_r expansion at infinity")
{
    for (double r : {100.0, 1000.0}) {
        const Real rr(r);
        const Real q = q_root(rr);
        const Real three_terms = 3 * rr / 2 + Real(1) / 6 + Real(3) / (25 * rr);
        const Real gap = abs(q - three_terms);
        CHECK(gap * rr * rr * rr < 0.01);
        CHECK(abs(q - three_terms + Real(21) / (3125 * rr * rr * rr)) * pow(rr, 4) < 1);
    }
}

TEST_CASE("S(r, Q_r) bound")
{
    for (double r : {0.7, 1.0, 3.0, 30.0, 900.0}) {
        CAPTURE(r);
        const Real rr(r);
        const Real q = q_root(rr);
        CHECK(s_function(rr, q) < Real(16) / (3125 * rr * rr * rr));
        // Q_r maximises S(r, .)
        const Real h = q * Real(1e-6);
        CHECK(s_function(rr, q) > s_function(rr, q + h));
        CHECK(s_function(rr, q) > s_function(rr, q - h));
    }
    CHECK(s_function(1.0, q_root(1.0)) < 16.0 / 3125);
}

TEST_CASE("bracket certificate")
{
    const Certificate c = bracket_certificates();
    CHECK(c.verdict == "verified");
    const auto& printed = c.witnesses["printed_coefficient_2/25"];
    CHECK_FALSE(printed["m_identity_holds"].get<bool>());
    CHECK_FALSE(printed["Mu_identity_holds"].get<bool>());
    CHECK_FALSE(printed["Mu(1)_is_upper_bound"].get<bool>());
}

TEST_CASE("exact identity battery")
{
    const Certificate c = identity_certificate();
    CHECK(c.verdict == "verified");
    CHECK(c.witnesses["checks"].size() >= 10);
}

TEST_CASE("H pipeline")
{
    const auto claims = h_claims();
    for (const auto& c : claims) {
        CAPTURE(c.claim_id);
        CHECK(c.passed());
    }
    // values transcribed independently of the library tables
    const auto& t1 = find(claims, "Table 1 F_j equality");
    CHECK(t1.witnesses["F1"][12] == "246037500/1");
    CHECK(t1.witnesses["F3"][0] == "-3304390656/1");
    CHECK(t1.witnesses["F2"].size() == 16);
    CHECK(t1.witnesses["F3"].size() == 17);

    const LogRational h2 = derivative(derivative(h_function()));
    CHECK(h2.log_coeff.is_zero());
    CHECK(h2.rational(BigRational(1, 3)) == BigRational(-437616243, 25600000));
    CHECK(h2.rational(BigRational(2, 3)) == BigRational(49618, 2278125));
    CHECK_NOTHROW(h_pipeline());
}

TEST_CASE("H derivative matches finite differences")
{
    const LogRational h = h_function();
    const LogRational h1 = derivative(h);
    for (long num : {1L, 3L, 40L}) {
        const BigRational r(num);
        const BigRational step(1, 1000000);
        const Real fd = (evaluate(h, r + step).value() - evaluate(h, r - step).value()) * 500000;
        CHECK(abs(fd - evaluate(h1, r).value()) < 1e-9);
    }
}

TEST_CASE("inequality chain Phi(r,2/3) - 1 > H(r)")
{
    const LogRational h = h_function();
    for (double r : {0.7, 0.8, 1.0, 1.5, 3.0, 10.0, 100.0}) {
        CAPTURE(r);
        const auto phi = oracle::phi_series(static_cast<long double>(r), 2.0L / 3.0L, 4000000);
        const double hv = evaluate(h, BigRational{mpq_class(r)}).to_double();
        CHECK(hv > 0);
        CHECK(double(phi.lo) - 1 > hv - 1e-10);
    }
}

TEST_CASE("W split and P(r)")
{
    const auto claims = s_bound_claims();
    for (const auto& c : claims) {
        CAPTURE(c.claim_id);
        CHECK(c.passed());
    }
    CHECK(table2_u()[2] == RationalPolynomial{BigRational(864), BigRational(14256)});
    CHECK(table2_v()[2] ==
          RationalPolynomial{BigRational(0), BigRational(0), BigRational(23328), BigRational(116640), BigRational(2103165)});
    const auto& beta = find(claims, "Table 3 β_n equality").witnesses["P"];
    CHECK(beta.size() == 23);
    CHECK(BigRational::parse(beta[0].get<std::string>()) == BigRational::parse("1000376035344") / BigRational(5).pow(30));
    CHECK(beta[1] == "0/1");
    CHECK(beta[21] == "0/1");
    CHECK(beta[22] == "455625/2");
    CHECK_NOTHROW(s_bound_certificate());
}

TEST_CASE("em suite")
{
    const auto certs = run_suite();
    CHECK(certs.size() == 13);
    for (const auto& c : certs) {
        CAPTURE(c.claim_id);
        CHECK(c.passed());
        CHECK_FALSE(c.paper_anchor.empty());
    }
    CHECK(find(certs, "H''(1/3) exact").verdict == "verified");
    CHECK(find(certs, "Table 3 β_n equality").verdict == "verified");
}

TEST_CASE("exact certificates are deterministic")
{
    nlohmann::json a;
    nlohmann::json b;
    to_json(a, bracket_certificates());
    to_json(b, bracket_certificates());
    CHECK(a.dump() == b.dump());
}
