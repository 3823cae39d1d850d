#pragma once

#include <algorithm>
#include <string>

#include "leraykit/bounded_float.hpp"
#include "leraykit/errors.hpp"
#include "leraykit/real.hpp"

namespace leraykit::special {

// psi^(order)(argument); order 0 is the digamma function.
struct PolygammaQuery {
    int order = 1;
    Real argument{1};
};

template <typename Scalar>
struct Sandwich {
    Scalar lower;
    Scalar upper;
    bool strictly_contains(const Scalar& v) const { return lower < v && v < upper; }
};

// log Gamma(x) for x > 0, correctly rounded by MPFR.
BoundedFloat log_gamma(const Real& x);
BoundedFloat gamma(const Real& x);
// log Gamma over an interval argument; the radius grows by |psi| times the input radius.
BoundedFloat log_gamma(const BoundedFloat& x);

// Hurwitz zeta sum_{j>=0} (a+j)^(-s) for integer s >= 2 and a > 0.
BoundedFloat hurwitz_zeta(int s, const Real& a, double tol = kDefaultTolerance);

BoundedFloat digamma(const Real& x, double tol = kDefaultTolerance);
BoundedFloat polygamma(const PolygammaQuery& query, double tol = kDefaultTolerance);
BoundedFloat polygamma(int order, const Real& x, double tol = kDefaultTolerance);

// Phi(r,q) = sum_{j>=1} 2r(j-q)/(r+j-q)^3, cross-checked against
// 2r psi'(r+1-q) + r^2 psi''(r+1-q).
BoundedFloat phi(const Real& r, const Real& q, double tol = kDefaultTolerance);
// Same quantity computed only through the polygamma combination.
BoundedFloat phi_polygamma_route(const Real& r, const Real& q, double tol = kDefaultTolerance);

// Theta(r,q) = r^2 psi'(r+1-q); dTheta/dr = Phi.
BoundedFloat theta(const Real& r, const Real& q, double tol = kDefaultTolerance);

// Inputs closer than this to the open-interval endpoint r = q are refused by phi.
inline constexpr double kPhiThresholdGap = 1e-6;

// Closed-form bounds on (-1)^(m+1) psi^(m)(x), m in {1, 2}.
template <typename Scalar>
Sandwich<Scalar> polygamma_sandwich(int m, const Scalar& x)
{
    if (m != 1 && m != 2) {
        throw DomainError("polygamma_sandwich: order must be 1 or 2, got " + std::to_string(m));
    }
    if (!(x > 0)) {
        throw DomainError("polygamma_sandwich: argument must be positive");
    }
    const Scalar fact_m1 = Scalar(1);            // (m-1)! for m in {1,2}
    const Scalar fact_m = Scalar(m == 1 ? 1 : 2);  // m!
    Scalar xm = x;
    if (m == 2) {
        xm = x * x;
    }
    const Scalar xm1 = xm * x;
    const Scalar base = fact_m1 / xm;
    return {base + fact_m / (2 * xm1), base + fact_m / xm1};
}

// Rational bounds on Phi(r,q), valid for r > max(q-1, 0).
template <typename Scalar>
Sandwich<Scalar> phi_sandwich(const Scalar& r, const Scalar& q)
{
    const Scalar floor = q - 1 > Scalar(0) ? Scalar(q - 1) : Scalar(0);
    if (!(r > floor)) {
        throw DomainError("phi_sandwich: requires r > max(q-1, 0)");
    }
    const Scalar x = r + 1 - q;
    const Scalar den = x * x * x;
    const Scalar r2 = r * r;
    const Scalar r3 = r2 * r;
    const Scalar lo = r3 + (2 - 3 * q) * r2 + (3 - 5 * q + 2 * q * q) * r;
    const Scalar hi = r3 + (4 - 3 * q) * r2 + (4 - 6 * q + 2 * q * q) * r;
    return {lo / den, hi / den};
}

}  // namespace leraykit::special
