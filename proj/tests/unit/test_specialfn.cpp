#include <doctest.h>

#include <cmath>
#include <random>

#include "leraykit/specialfn.hpp"
#include "support/oracles.hpp"

using namespace leraykit;
using namespace leraykit::special;

namespace {

long double ld(const Real& x) { return x.convert_to<long double>(); }

// Interval check with the oracle's width plus the library radius.
bool overlaps(const BoundedFloat& v, const oracle::Interval& iv)
{
    const long double lo = ld(v.lower());
    const long double hi = ld(v.upper());
    return hi >= iv.lo && lo <= iv.hi;
}

}  // namespace

TEST_CASE("polygamma of order 1 at 1 is zeta(2)")
{
    const auto v = polygamma(1, Real(1), 1e-12);
    CHECK(v.radius() <= Real(1e-12));
    CHECK(overlaps(v, oracle::zeta_partial(2, 1.0L, 2000000)));
    const Real pi = real_pi();
    CHECK(abs(v.value() - pi * pi / 6) <= v.radius() + Real(1e-30));
}

TEST_CASE("polygamma of order 2 is negative on sampled points")
{
    for (double r : {0.5, 1.0, 5.0, 50.0}) {
        const auto v = polygamma(2, Real(r), 1e-12);
        CHECK(v.certainly_negative());
        // -psi''(x) = 2 zeta(3, x)
        const auto iv = oracle::zeta_partial(3, r, 200000);
        CHECK(overlaps(scale(v, Real(-0.5)), iv));
    }
}

TEST_CASE("digamma at 1 is minus the Euler-Mascheroni constant")
{
    const auto v = digamma(Real(1), 1e-12);
    CHECK(v.radius() <= Real(1e-12));
    CHECK(overlaps(-v, oracle::euler_gamma(100000)));
    // recurrence psi(x+1) = psi(x) + 1/x across the shift point
    for (double x : {0.3, 7.5, 15.9, 40.0}) {
        const auto a = digamma(Real(x) + 1);
        const auto b = digamma(Real(x));
        CHECK(abs(a.value() - b.value() - 1 / Real(x)) <= a.radius() + b.radius() + Real(1e-30));
    }
}

TEST_CASE("polygamma domain and tolerance errors")
{
    CHECK_THROWS_AS(polygamma(1, Real(0)), DomainError);
    CHECK_THROWS_AS(polygamma(1, Real(-2)), DomainError);
    CHECK_THROWS_AS(polygamma(1, Real(1), 1e-200), ToleranceUnreachable);
    CHECK_THROWS_AS(polygamma(1, Real(1), 0.0), DomainError);
    CHECK_THROWS_AS(polygamma(PolygammaQuery{-1, Real(1)}), DomainError);
}

TEST_CASE("property: tail-bound soundness against ten times more head terms")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> order(1, 4);
    std::uniform_real_distribution<double> arg(0.05, 60.0);
    for (int i = 0; i < 25; ++i) {
        const int m = order(rng);
        const double x = arg(rng);
        const auto v = hurwitz_zeta(m + 1, Real(x));
        // head of 10x the library's shift distance summed explicitly, then the library tail
        Real head = 0;
        Real b = Real(x);
        for (int j = 0; j < 400; ++j) {
            head += pow(1 / b, m + 1);
            b += 1;
        }
        const auto tail = hurwitz_zeta(m + 1, b);
        const Real longer = head + tail.value();
        CHECK(abs(longer - v.value()) <= v.radius() + tail.radius() + Real(1e-30));
    }
}

TEST_CASE("phi values")
{
    const auto big = phi(Real(1e6), Real(0));
    CHECK(abs(big.value() - 1) <= Real(1e-4));

    const auto one = phi(Real(1), Real(0), 1e-12);
    CHECK(overlaps(one, oracle::phi_series(1.0L, 0.0L, 2000000)));
    const Real pi = real_pi();
    // pi^2/3 - 2 zeta(3); zeta(3) from the oracle bracket is too coarse, so compare with 0.8858 loosely
    CHECK(abs(one.value() - (pi * pi / 3 - 2 * Real("1.2020569031595942853997381615114499907649862923405"))) <=
          one.radius() + Real(1e-30));

    for (double r : {0.7, 1.0, 10.0, 100.0}) {
        CHECK(phi(Real(r), Real(2) / 3).certainly_above(Real(1)));
    }
    CHECK_THROWS_AS(phi(Real(-2), Real(0)), DomainError);
    CHECK_THROWS_AS(phi(Real(0.5), Real(0.5)), DomainError);
}

TEST_CASE("property: phi series and polygamma routes agree on a random grid")
{
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> qd(-3.0, 3.0);
    std::uniform_real_distribution<double> logr(-1.0, 3.0);
    for (int i = 0; i < 20; ++i) {
        const double q = qd(rng);
        const double r = std::max(q - 1, 0.0) + 0.1 + std::pow(10.0, logr(rng));
        const auto a = phi(Real(r), Real(q));
        const auto b = phi_polygamma_route(Real(r), Real(q));
        CHECK(abs(a.value() - b.value()) <= a.radius() + b.radius());
    }
}

TEST_CASE("property: sandwich contains phi")
{
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> qd(-4.0, 4.0);
    std::uniform_real_distribution<double> logr(-1.0, 4.0);
    for (int i = 0; i < 40; ++i) {
        const Real q = Real(qd(rng));
        const Real r = (q - 1 > 0 ? q - 1 : Real(0)) + Real(0.1) + pow(Real(10), Real(logr(rng)));
        if (abs(r - q) < Real(kPhiThresholdGap)) {
            continue;
        }
        const auto v = phi(r, q);
        const auto s = phi_sandwich(r, q);
        CHECK(v.certainly_above(s.lower));
        CHECK(v.certainly_below(s.upper));
    }
}

TEST_CASE("property: monotone tail of phi relative to 1")
{
    for (double q : {0.0, 1.0, 2.0 / 3.0}) {
        for (int i = 0; i <= 24; ++i) {
            const Real r = Real(q) + pow(Real(10), Real(-1.9 + i * (4.0 + 1.9) / 24)) ;
            if (r > Real(1e4)) {
                continue;
            }
            const auto v = phi(r, Real(q));
            if (q == 2.0 / 3.0) {
                CHECK(v.certainly_above(Real(1)));
            } else {
                CHECK(v.certainly_below(Real(1)));
            }
        }
    }
}

TEST_CASE("theta")
{
    const auto t = theta(Real(1), Real(0), 1e-12);
    const Real pi = real_pi();
    CHECK(abs(t.value() - (pi * pi / 6 - 1)) <= t.radius() + Real(1e-30));
    CHECK(overlaps(t + BoundedFloat::exact(Real(1)), oracle::zeta_partial(2, 1.0L, 2000000)));
    CHECK(theta(Real(0), Real(0.3)).value() == 0);
    CHECK(theta(Real(0), Real(-5)).value() == 0);

    const Real h = Real(1e-3);
    const Real r = 2;
    const Real q = Real(1) / 2;
    const Real fd = (theta(r + h, q).value() - theta(r - h, q).value()) / (2 * h);
    CHECK(abs(fd - phi(r, q).value()) < Real(1e-5));
    CHECK_THROWS_AS(theta(Real(-3), Real(0)), DomainError);
}

TEST_CASE("polygamma_sandwich")
{
    const auto s1 = polygamma_sandwich(1, 1.0);
    CHECK(s1.lower == doctest::Approx(1.5));
    CHECK(s1.upper == doctest::Approx(2.0));
    CHECK(s1.strictly_contains(M_PI * M_PI / 6));
    const auto s2 = polygamma_sandwich(2, 2.0);
    CHECK(s2.lower == doctest::Approx(0.375));
    CHECK(s2.upper == doctest::Approx(0.5));
    const auto v = polygamma(2, Real(2));
    CHECK(s2.strictly_contains(-v.to_double()));
    const auto far = polygamma_sandwich(1, 1e12);
    CHECK(far.upper < 1e-11);
    CHECK_THROWS_AS(polygamma_sandwich(1, 0.0), DomainError);
    CHECK_THROWS_AS(polygamma_sandwich(3, 1.0), DomainError);
}

TEST_CASE("phi_sandwich")
{
    const double r = 3;
    const auto s = phi_sandwich(r, 0.0);
    CHECK(s.lower == doctest::Approx((r * r * r + 2 * r * r + 3 * r) / std::pow(r + 1, 3)));
    CHECK(s.upper == doctest::Approx((r * r * r + 4 * r * r + 4 * r) / std::pow(r + 1, 3)));
    const auto v = phi(Real(5), Real(0));
    const auto s5 = phi_sandwich(Real(5), Real(0));
    CHECK(v.certainly_above(s5.lower));
    CHECK(v.certainly_below(s5.upper));
    const auto far = phi_sandwich(1e9, 0.3);
    CHECK(far.lower == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(far.upper == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(phi_sandwich(0.5, 2.0), DomainError);
}

TEST_CASE("log_gamma")
{
    CHECK(abs(log_gamma(Real(1)).value()) <= Real(1e-30));
    CHECK(abs(log_gamma(Real(5)).value() - log(Real(24))) <= Real(1e-30));
    CHECK(abs(gamma(Real(0.5)).value() - sqrt(real_pi())) <= Real(1e-30));
    CHECK_THROWS_AS(log_gamma(Real(0)), DomainError);
}
