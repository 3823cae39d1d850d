#include "leraykit/bounded_float.hpp"

#include <cmath>
#include <limits>

#include "leraykit/errors.hpp"

namespace leraykit {

namespace {

// Radius arithmetic is itself rounded; a relative slack keeps it an upper bound.
Real inflate(const Real& r) { return r * (1 + 4 * unit_roundoff()); }

Real rounding_term(const Real& v) { return abs(v) * unit_roundoff(); }

}  // namespace

BoundedFloat::BoundedFloat(Real value, Real radius) : value_(std::move(value)), radius_(std::move(radius))
{
    if (radius_ < 0) {
        throw DomainError("BoundedFloat: negative radius");
    }
}

BoundedFloat BoundedFloat::rounded(Real value)
{
    Real r = rounding_term(value);
    return {std::move(value), std::move(r)};
}

double BoundedFloat::radius_double() const
{
    const double r = radius_.convert_to<double>();
    return std::nextafter(r, std::numeric_limits<double>::infinity());
}

BoundedFloat& BoundedFloat::operator+=(const BoundedFloat& rhs)
{
    value_ += rhs.value_;
    radius_ = inflate(radius_ + rhs.radius_ + rounding_term(value_));
    return *this;
}

BoundedFloat& BoundedFloat::operator-=(const BoundedFloat& rhs)
{
    value_ -= rhs.value_;
    radius_ = inflate(radius_ + rhs.radius_ + rounding_term(value_));
    return *this;
}

BoundedFloat& BoundedFloat::operator*=(const BoundedFloat& rhs)
{
    const Real propagated = abs(value_) * rhs.radius_ + abs(rhs.value_) * radius_ + radius_ * rhs.radius_;
    value_ *= rhs.value_;
    radius_ = inflate(propagated + rounding_term(value_));
    return *this;
}

BoundedFloat& BoundedFloat::operator/=(const BoundedFloat& rhs)
{
    const Real denom = abs(rhs.value_);
    if (denom <= rhs.radius_) {
        throw DomainError("BoundedFloat: divisor interval contains zero");
    }
    const Real propagated = (abs(value_) * rhs.radius_ + denom * radius_) / (denom * (denom - rhs.radius_));
    value_ /= rhs.value_;
    radius_ = inflate(propagated + rounding_term(value_));
    return *this;
}

BoundedFloat& BoundedFloat::widen(const Real& extra)
{
    if (extra < 0) {
        throw DomainError("BoundedFloat: negative widening");
    }
    radius_ = inflate(radius_ + extra);
    return *this;
}

std::string BoundedFloat::to_string(int digits) const
{
    return format_real(value_, digits) + " +/- " + format_real(radius_, 3);
}

BoundedFloat exp(const BoundedFloat& x)
{
    Real v = boost::multiprecision::exp(x.value());
    Real r = v * boost::multiprecision::expm1(x.radius()) + abs(v) * unit_roundoff();
    return {std::move(v), inflate(r)};
}

BoundedFloat log(const BoundedFloat& x)
{
    if (x.lower() <= 0) {
        throw DomainError("BoundedFloat: log of an interval reaching zero");
    }
    Real v = boost::multiprecision::log(x.value());
    Real r = x.radius() / x.lower() + abs(v) * unit_roundoff();
    return {std::move(v), inflate(r)};
}

BoundedFloat sqrt(const BoundedFloat& x)
{
    if (x.lower() < 0) {
        throw DomainError("BoundedFloat: sqrt of an interval reaching below zero");
    }
    Real v = boost::multiprecision::sqrt(x.value());
    Real r = (v > 0 ? x.radius() / v : boost::multiprecision::sqrt(x.radius())) + v * unit_roundoff();
    return {std::move(v), inflate(r)};
}

BoundedFloat scale(const BoundedFloat& x, const Real& exact_factor)
{
    Real v = x.value() * exact_factor;
    Real r = x.radius() * abs(exact_factor) + abs(v) * unit_roundoff();
    return {std::move(v), inflate(r)};
}

}  // namespace leraykit
