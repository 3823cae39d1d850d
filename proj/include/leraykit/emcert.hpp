#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "leraykit/bounded_float.hpp"
#include "leraykit/certificate.hpp"
#include "leraykit/exactpoly.hpp"
#include "leraykit/real.hpp"

namespace leraykit::em {

using exact::BigRational;
using exact::BivariatePolynomial;
using exact::RationalFunction;
using exact::RationalPolynomial;

// f_r(x) = 18r(3x-2)/(3r+3x-2)^3, the summand of Phi(r, 2/3).
template <typename S>
S f_r(const S& r, const S& x)
{
    const S u = 3 * r + 3 * x - 2;
    return 18 * r * (3 * x - 2) / (u * u * u);
}

template <typename S>
S f_r_prime(const S& r, const S& x)
{
    const S u = 3 * r + 3 * x - 2;
    return 54 * r * (9 * r - 2 * u) / (u * u * u * u);
}

// S(r,x) = 81r(9x^2-3x-9r^2-2) / ((3r+3x+1)^3 (3r+3x-2)^3)
template <typename S>
S s_term(const S& r, const S& x)
{
    const S a = 3 * r + 3 * x + 1;
    const S b = 3 * r + 3 * x - 2;
    return 81 * r * (9 * x * x - 3 * x - 9 * r * r - 2) / (a * a * a * b * b * b);
}

// Checked versions: DomainError for r <= 2/3 or x < 0.
double s_function(double r, double x);
Real s_function(const Real& r, const Real& x);

// ---- first-order Euler-Maclaurin ----

// What the caller knows about [cutoff, inf) when the upper limit is infinite.
struct EMTail {
    long cutoff = 0;
    double integral_beyond = 0;  // int_cutoff^inf f
    double limit = 0;            // f(inf)
    double curvature_mass = 0;   // upper bound on int_cutoff^inf |f''|
};

// sum_{j=m+1}^n f(j) = integral + boundary + bernoulli, where
// boundary = (f(n) - f(m))/2 and bernoulli = int_m^n P1(x) f'(x) dx.
struct EMDecomposition {
    double integral = 0;
    double boundary = 0;
    double bernoulli = 0;
    double error_bound = 0;
    double sum() const { return integral + boundary + bernoulli; }
};

using Function = std::function<double(double)>;

// n == nullopt means infinity; then `tail` is required (TailUnbounded otherwise).
EMDecomposition em_first_order(const Function& f, const Function& f_prime, long m, std::optional<long> n,
                               double tol = kDefaultTolerance, const std::optional<EMTail>& tail = std::nullopt);

// Tail data for f_r with the cutoff chosen so the Bernoulli tail is below tol/10.
EMTail f_r_tail(double r, double tol = kDefaultTolerance);
EMDecomposition em_f_r(double r, double tol = kDefaultTolerance);

// Phi(r, 2/3) against 1 + (6r-1)/(3r+1)^3 + sum_{N>=1} S(r,N).
struct Reconstruction {
    BoundedFloat direct;
    BoundedFloat peeled;  // radius includes the C/(3K^3) tail of the S-sum
    long terms = 0;
    double tail_constant = 0;  // |S(r,N)| <= C/N^4 for N > terms
    double difference() const;
};
Reconstruction em_reconstruction(double r, double tol = kDefaultTolerance);

// int_2^inf S(r,x) dx.
Real s_integral_closed(const Real& r);
// (value, error estimate) by exp-sinh quadrature.
std::pair<double, double> s_integral_quadrature(double r);

// ---- critical point of S(r, .) ----

// p(r, x), a polynomial in r (first) and x (second).
BivariatePolynomial pr_bivariate();
RationalPolynomial pr_poly(const BigRational& r);

// Coefficient of 1/r in the bracket: 3/25 gives bounds that work, 2/25 is the
// misprinted variant kept as a failure witness.
inline BigRational bracket_coefficient() { return {3, 25}; }
inline BigRational printed_bracket_coefficient() { return {2, 25}; }

// m(r) = 3r/2 + 1/6 + c/r - 21/(3125 r^3), Mu(r) = 3r/2 + 1/6 + c/r.
BigRational m_bound(const BigRational& r, const BigRational& c = bracket_coefficient());
BigRational mu_bound(const BigRational& r, const BigRational& c = bracket_coefficient());
double m_bound(double r);
double mu_bound(double r);
// r^3 m(r) and r Mu(r) as polynomials in r.
RationalPolynomial m_numerator(const BigRational& c = bracket_coefficient());
RationalPolynomial mu_numerator(const BigRational& c = bracket_coefficient());

// Unique positive root of p_r by the cubic formula, polished by Newton. DomainError for r <= 2/3.
Real q_root(const Real& r);
double q_root(double r);
// |p_r(Q)| / sum |c_i| Q^i.
double pr_relative_residual(double r, double x);

// ---- H(r) ----

// rational(r) + log_coeff(r) * log((3r+7)/(3r+4)).
struct LogRational {
    RationalFunction rational;
    RationalPolynomial log_coeff;
};
LogRational derivative(const LogRational& f);

LogRational h_function();
// Rational part evaluated exactly, log term at working precision.
BoundedFloat evaluate(const LogRational& f, const BigRational& r);

// Certificates. The aggregate functions throw CertificateFailure naming the first failing check.
Certificate identity_certificate();
Certificate reconstruction_certificate(double tol = kDefaultTolerance);
Certificate bracket_certificates();
std::vector<Certificate> h_claims();
Certificate h_pipeline();
std::vector<Certificate> s_bound_claims();
Certificate s_bound_certificate();
Certificate root_sample_certificate(int samples = 100, unsigned seed = 20240607);

std::vector<Certificate> run_suite(double tol = kDefaultTolerance);

// The printed tables, for comparison.
RationalPolynomial table1(int j);  // F_j, j = 1..3
std::vector<RationalPolynomial> table2_u();
std::vector<RationalPolynomial> table2_v();
RationalPolynomial table3();

}  // namespace leraykit::em
