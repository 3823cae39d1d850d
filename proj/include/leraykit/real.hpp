#pragma once

#include <string>

#include <boost/multiprecision/mpfr.hpp>

#include "leraykit/exactpoly.hpp"

namespace leraykit {

// Working-precision real. Precision is process-wide and set once at start-up.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

inline constexpr unsigned kDefaultPrecisionBits = 128;
inline constexpr unsigned kMinPrecisionBits = 80;
inline constexpr double kDefaultTolerance = 1e-12;

// Reads LERAYKIT_PRECISION_BITS once; throws DomainError for values below kMinPrecisionBits.
void init_precision_from_env();
void set_working_precision_bits(unsigned bits);
// Actual significand bits of a freshly constructed Real.
unsigned working_precision_bits();
// 2^(1-p): bound on the relative rounding error of one correctly rounded operation.
Real unit_roundoff();

// Copy rounded to working precision; inputs created with a different precision
// would otherwise carry it through every result.
Real promote(const Real& x);

Real to_real(const exact::BigRational& q);
Real to_real(double x);
Real real_pi();

// Shortest round-trippable text with `digits` significant digits.
std::string format_real(const Real& x, int digits = 15);

}  // namespace leraykit
