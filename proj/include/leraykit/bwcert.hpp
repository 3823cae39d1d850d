#pragma once

#include <utility>
#include <vector>

#include "leraykit/bounded_float.hpp"
#include "leraykit/certificate.hpp"
#include "leraykit/real.hpp"

namespace leraykit::bw {

// Kernels of the Laplace representation of F_q, all in double precision.
// Small arguments go through their Taylor series to avoid cancellation.
double h0(double t);  // 2 - 2e^t + t + t e^t, also called E(t)
double h1(double t);  // 1 - e^t + t e^t
double g0(double t);
double g1(double t);
double g2(double t);
inline double kernel_e(double t) { return h0(t); }

// M(t,q) = g0(t) - g1(t) q + g2(t) q^2
double m_kernel(double t, double q);
// M(t,q) / (e^t - 1)^3 * e^(-x t), evaluated without overflow.
double integrand(double t, double q, double x);

// Factored form 4(e^t-1)^2 (1 - 2e^t + e^2t - t^2 e^t).
double discriminant(double t);
// g1^2 - 4 g0 g2.
double discriminant_from_kernels(double t);
// 1 - 2e^t + e^2t - t^2 e^t, positive for t > 0.
double cosh_gap(double t);

struct QuadraticRoots {
    double s1;
    double s2;
    double one_minus_s1;  // accurate even where s1 rounds to 1
};
// Roots in q of M(t, q) = 0, s2 < s1.
QuadraticRoots quadratic_roots(double t);

// F_q(x) = Theta(x+q, q) - x - 2q + 1/2, checked against quadrature of the
// Laplace integral. Throws CrossCheckFailure beyond 10 max(tol, 1e-12).
BoundedFloat f_q(const Real& x, const Real& q, double tol = kDefaultTolerance);
BoundedFloat f_q_theta_route(const Real& x, const Real& q, double tol = kDefaultTolerance);
// Adaptive Gauss-Kronrod on [0, T] plus the analytic tail bound; returns (value, error estimate).
std::pair<double, double> f_q_quadrature(double x, double q, double tol = kDefaultTolerance);

// Signs of (-1)^m Delta_h^m F_q on the grid for m = 0..orders. Strict separation
// from zero by the error radii is required for `supports`; a certain sign
// violation gives `refutes`.
Certificate cm_numeric_certificate(double q, int orders, const std::vector<double>& grid, double step = 0.5,
                                   double tol = kDefaultTolerance);

// First t on a log grid in [1e-4, 50] with M(t,q) < 0, or a negative value if none.
double find_negative_kernel(double q);

// Certificates of the bw suite, in a fixed order.
std::vector<Certificate> run_suite(double tol = kDefaultTolerance);

}  // namespace leraykit::bw
