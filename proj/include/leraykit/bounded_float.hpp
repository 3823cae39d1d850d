#pragma once

#include <string>

#include "leraykit/real.hpp"

namespace leraykit {

// A working-precision value with a guaranteed absolute error radius: the true
// quantity lies in [value - radius, value + radius]. Every operation adds the
// propagated input radii plus one unit roundoff of the result.
class BoundedFloat {
public:
    BoundedFloat() = default;
    BoundedFloat(Real value, Real radius);
    static BoundedFloat exact(Real value) { return {std::move(value), Real(0)}; }
    // Value rounded once to working precision.
    static BoundedFloat rounded(Real value);

    const Real& value() const noexcept { return value_; }
    const Real& radius() const noexcept { return radius_; }
    Real lower() const { return value_ - radius_; }
    Real upper() const { return value_ + radius_; }
    double to_double() const { return value_.convert_to<double>(); }
    double radius_double() const;

    bool contains(const Real& x) const { return lower() <= x && x <= upper(); }
    // Strict separation from a point, accounting for the radius.
    bool certainly_above(const Real& x) const { return lower() > x; }
    bool certainly_below(const Real& x) const { return upper() < x; }
    bool certainly_positive() const { return certainly_above(Real(0)); }
    bool certainly_negative() const { return certainly_below(Real(0)); }

    BoundedFloat operator-() const { return {-value_, radius_}; }
    BoundedFloat& operator+=(const BoundedFloat& rhs);
    BoundedFloat& operator-=(const BoundedFloat& rhs);
    BoundedFloat& operator*=(const BoundedFloat& rhs);
    BoundedFloat& operator/=(const BoundedFloat& rhs);

    friend BoundedFloat operator+(BoundedFloat a, const BoundedFloat& b) { return a += b; }
    friend BoundedFloat operator-(BoundedFloat a, const BoundedFloat& b) { return a -= b; }
    friend BoundedFloat operator*(BoundedFloat a, const BoundedFloat& b) { return a *= b; }
    friend BoundedFloat operator/(BoundedFloat a, const BoundedFloat& b) { return a /= b; }

    // Widen the radius by an additional non-negative amount.
    BoundedFloat& widen(const Real& extra);

    std::string to_string(int digits = 15) const;

private:
    Real value_{0};
    Real radius_{0};
};

BoundedFloat exp(const BoundedFloat& x);
BoundedFloat log(const BoundedFloat& x);
BoundedFloat sqrt(const BoundedFloat& x);
BoundedFloat scale(const BoundedFloat& x, const Real& exact_factor);

}  // namespace leraykit
