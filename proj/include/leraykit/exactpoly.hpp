#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace leraykit::exact {

// Exact rational number, always held in canonical form (den > 0, gcd = 1).
class BigRational {
public:
    BigRational() = default;
    BigRational(long value);  // NOLINT(google-explicit-constructor)
    BigRational(long num, long den);
    explicit BigRational(mpq_class value);

    // Accepts "a", "-a", "a/b" with arbitrary-length decimal integers.
    static BigRational parse(std::string_view text);

    const mpq_class& get() const noexcept { return value_; }
    std::string numerator() const { return value_.get_num().get_str(); }
    std::string denominator() const { return value_.get_den().get_str(); }
    // Always "num/den", e.g. "3/1", "-7/25".
    std::string to_string() const;
    double to_double() const { return value_.get_d(); }

    int sign() const noexcept { return sgn(value_); }
    bool is_zero() const noexcept { return sign() == 0; }
    BigRational abs() const;
    BigRational pow(int exponent) const;

    BigRational operator-() const;
    BigRational& operator+=(const BigRational& rhs);
    BigRational& operator-=(const BigRational& rhs);
    BigRational& operator*=(const BigRational& rhs);
    BigRational& operator/=(const BigRational& rhs);

    friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
    friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
    friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
    friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }

    friend bool operator==(const BigRational& a, const BigRational& b) { return cmp(a.value_, b.value_) == 0; }
    friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b)
    {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    mpq_class value_{0};
};

enum class Sign : std::int8_t { negative = -1, zero = 0, positive = 1 };

char sign_symbol(Sign s);

// Dense univariate polynomial; coefficient n multiplies x^n. No trailing zeros,
// so the zero polynomial has an empty coefficient vector and degree -1.
class RationalPolynomial {
public:
    RationalPolynomial() = default;
    explicit RationalPolynomial(std::vector<BigRational> ascending);
    RationalPolynomial(std::initializer_list<BigRational> ascending);

    static RationalPolynomial constant(const BigRational& c);
    static RationalPolynomial monomial(const BigRational& c, int degree);
    static RationalPolynomial identity() { return monomial(1, 1); }

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    const std::vector<BigRational>& coefficients() const noexcept { return coeffs_; }
    BigRational coefficient(int n) const;
    BigRational leading() const;

    // Exact Horner evaluation.
    BigRational operator()(const BigRational& x) const;

    RationalPolynomial operator-() const;
    RationalPolynomial& operator+=(const RationalPolynomial& rhs);
    RationalPolynomial& operator-=(const RationalPolynomial& rhs);
    RationalPolynomial& operator*=(const RationalPolynomial& rhs);
    RationalPolynomial& operator*=(const BigRational& scale);

    friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
    friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }
    friend RationalPolynomial operator*(RationalPolynomial a, const RationalPolynomial& b) { return a *= b; }
    friend RationalPolynomial operator*(RationalPolynomial a, const BigRational& s) { return a *= s; }
    friend RationalPolynomial operator*(const BigRational& s, RationalPolynomial a) { return a *= s; }
    friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;

private:
    void trim();
    std::vector<BigRational> coeffs_;
};

enum class PolyOp { add, sub, mul };

RationalPolynomial poly_arith(const RationalPolynomial& p, const RationalPolynomial& q, PolyOp op);
RationalPolynomial poly_derivative(const RationalPolynomial& p, int order = 1);
BigRational poly_eval(const RationalPolynomial& p, const BigRational& x);
RationalPolynomial pow(const RationalPolynomial& p, int exponent);
// p(q(x))
RationalPolynomial compose(const RationalPolynomial& p, const RationalPolynomial& q);

struct PolyDivision {
    RationalPolynomial quotient;
    RationalPolynomial remainder;
};
PolyDivision divmod(const RationalPolynomial& p, const RationalPolynomial& q);
// Monic greatest common divisor; gcd(0, 0) = 0.
RationalPolynomial gcd(const RationalPolynomial& p, const RationalPolynomial& q);

// Sign alternations among nonzero coefficients, ascending exponent order.
int descartes_sign_changes(const RationalPolynomial& p);
std::vector<Sign> sign_pattern(const RationalPolynomial& p);
std::string sign_pattern_string(const RationalPolynomial& p);

// Polynomial in two variables, written r^j Q^k; zero coefficients are never stored.
class BivariatePolynomial {
public:
    using Exponents = std::pair<int, int>;

    BivariatePolynomial() = default;

    static BivariatePolynomial constant(const BigRational& c);
    static BivariatePolynomial first();   // r
    static BivariatePolynomial second();  // Q
    static BivariatePolynomial in_first(const RationalPolynomial& p);
    static BivariatePolynomial in_second(const RationalPolynomial& p);

    const std::map<Exponents, BigRational>& terms() const noexcept { return terms_; }
    BigRational coefficient(int j, int k) const;
    void set(int j, int k, const BigRational& c);
    bool is_zero() const noexcept { return terms_.empty(); }
    int degree_in_second() const;

    // Coefficient of Q^k as a polynomial in r.
    RationalPolynomial coefficient_in_second(int k) const;
    // B(r, q(r))
    RationalPolynomial substitute_second(const RationalPolynomial& q) const;
    // r^shift * B(r, num(r) / r^den_power); throws DomainError if a negative power survives.
    RationalPolynomial substitute_second_over_power(const RationalPolynomial& num, int den_power,
                                                    int shift) const;

    BivariatePolynomial operator-() const;
    BivariatePolynomial& operator+=(const BivariatePolynomial& rhs);
    BivariatePolynomial& operator-=(const BivariatePolynomial& rhs);
    BivariatePolynomial& operator*=(const BivariatePolynomial& rhs);
    BivariatePolynomial& operator*=(const BigRational& scale);

    friend BivariatePolynomial operator+(BivariatePolynomial a, const BivariatePolynomial& b) { return a += b; }
    friend BivariatePolynomial operator-(BivariatePolynomial a, const BivariatePolynomial& b) { return a -= b; }
    friend BivariatePolynomial operator*(BivariatePolynomial a, const BivariatePolynomial& b) { return a *= b; }
    friend BivariatePolynomial operator*(BivariatePolynomial a, const BigRational& s) { return a *= s; }
    friend BivariatePolynomial operator*(const BigRational& s, BivariatePolynomial a) { return a *= s; }
    friend bool operator==(const BivariatePolynomial&, const BivariatePolynomial&) = default;

private:
    std::map<Exponents, BigRational> terms_;
};

BivariatePolynomial pow(const BivariatePolynomial& p, int exponent);

// Positive-coefficient part U and negated negative part V, so that W = U - V.
std::pair<BivariatePolynomial, BivariatePolynomial> split_by_sign(const BivariatePolynomial& w);

// num/den in lowest terms with monic denominator.
class RationalFunction {
public:
    RationalFunction() = default;
    RationalFunction(RationalPolynomial num, RationalPolynomial den);
    explicit RationalFunction(RationalPolynomial num);

    const RationalPolynomial& numerator() const noexcept { return num_; }
    const RationalPolynomial& denominator() const noexcept { return den_; }
    BigRational operator()(const BigRational& x) const;

    RationalFunction operator-() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    friend bool operator==(const RationalFunction&, const RationalFunction&) = default;

private:
    RationalPolynomial num_;
    RationalPolynomial den_{RationalPolynomial::constant(1)};
};

RationalFunction derivative(const RationalFunction& f);

// Bernoulli numbers B_0..B_n with B_1 = -1/2.
std::vector<BigRational> bernoulli_numbers(int n);

void to_json(nlohmann::json& j, const BigRational& q);
void from_json(const nlohmann::json& j, BigRational& q);
// Array of "num/den" strings, ascending exponent.
void to_json(nlohmann::json& j, const RationalPolynomial& p);
void from_json(const nlohmann::json& j, RationalPolynomial& p);

}  // namespace leraykit::exact
