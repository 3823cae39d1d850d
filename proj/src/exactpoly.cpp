#include "leraykit/exactpoly.hpp"

#include <algorithm>
#include <cctype>

#include "leraykit/errors.hpp"

namespace leraykit::exact {

//
// BigRational
//

BigRational::BigRational(long value) : value_(value) {}

BigRational::BigRational(long num, long den)
{
    if (den == 0) {
        throw DomainError("BigRational: zero denominator");
    }
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

BigRational::BigRational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

BigRational BigRational::parse(std::string_view text)
{
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; }),
            s.end());
    const auto slash = s.find('/');
    mpz_class num;
    mpz_class den = 1;
    if (num.set_str(s.substr(0, slash), 10) != 0) {
        throw DomainError("BigRational: cannot parse '" + std::string(text) + "'");
    }
    if (slash != std::string::npos && den.set_str(s.substr(slash + 1), 10) != 0) {
        throw DomainError("BigRational: cannot parse '" + std::string(text) + "'");
    }
    if (den == 0) {
        throw DomainError("BigRational: zero denominator in '" + std::string(text) + "'");
    }
    return BigRational(mpq_class(num, den));
}

std::string BigRational::to_string() const { return numerator() + "/" + denominator(); }

BigRational BigRational::abs() const { return BigRational(mpq_class(::abs(value_))); }

BigRational BigRational::pow(int exponent) const
{
    if (exponent < 0) {
        return BigRational(1) / pow(-exponent);
    }
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(exponent));
    return BigRational(mpq_class(num, den));
}

BigRational BigRational::operator-() const { return BigRational(mpq_class(-value_)); }

BigRational& BigRational::operator+=(const BigRational& rhs)
{
    value_ += rhs.value_;
    return *this;
}

BigRational& BigRational::operator-=(const BigRational& rhs)
{
    value_ -= rhs.value_;
    return *this;
}

BigRational& BigRational::operator*=(const BigRational& rhs)
{
    value_ *= rhs.value_;
    return *this;
}

BigRational& BigRational::operator/=(const BigRational& rhs)
{
    if (rhs.is_zero()) {
        throw DomainError("BigRational: division by zero");
    }
    value_ /= rhs.value_;
    return *this;
}

char sign_symbol(Sign s)
{
    switch (s) {
    case Sign::negative: return '-';
    case Sign::positive: return '+';
    default: return '0';
    }
}

//
// RationalPolynomial
//

RationalPolynomial::RationalPolynomial(std::vector<BigRational> ascending) : coeffs_(std::move(ascending))
{
    trim();
}

RationalPolynomial::RationalPolynomial(std::initializer_list<BigRational> ascending) : coeffs_(ascending)
{
    trim();
}

RationalPolynomial RationalPolynomial::constant(const BigRational& c) { return RationalPolynomial({c}); }

RationalPolynomial RationalPolynomial::monomial(const BigRational& c, int degree)
{
    std::vector<BigRational> v(static_cast<std::size_t>(degree) + 1);
    v.back() = c;
    return RationalPolynomial(std::move(v));
}

void RationalPolynomial::trim()
{
    while (!coeffs_.empty() && coeffs_.back().is_zero()) {
        coeffs_.pop_back();
    }
}

BigRational RationalPolynomial::coefficient(int n) const
{
    if (n < 0 || n > degree()) {
        return {};
    }
    return coeffs_[static_cast<std::size_t>(n)];
}

BigRational RationalPolynomial::leading() const { return is_zero() ? BigRational{} : coeffs_.back(); }

BigRational RationalPolynomial::operator()(const BigRational& x) const
{
    BigRational acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc *= x;
        acc += *it;
    }
    return acc;
}

RationalPolynomial RationalPolynomial::operator-() const
{
    RationalPolynomial out = *this;
    for (auto& c : out.coeffs_) {
        c = -c;
    }
    return out;
}

RationalPolynomial& RationalPolynomial::operator+=(const RationalPolynomial& rhs)
{
    if (rhs.coeffs_.size() > coeffs_.size()) {
        coeffs_.resize(rhs.coeffs_.size());
    }
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) {
        coeffs_[i] += rhs.coeffs_[i];
    }
    trim();
    return *this;
}

RationalPolynomial& RationalPolynomial::operator-=(const RationalPolynomial& rhs) { return *this += -rhs; }

RationalPolynomial& RationalPolynomial::operator*=(const RationalPolynomial& rhs)
{
    if (is_zero() || rhs.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    std::vector<BigRational> out(coeffs_.size() + rhs.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].is_zero()) {
            continue;
        }
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) {
            out[i + j] += coeffs_[i] * rhs.coeffs_[j];
        }
    }
    coeffs_ = std::move(out);
    trim();
    return *this;
}

RationalPolynomial& RationalPolynomial::operator*=(const BigRational& scale)
{
    for (auto& c : coeffs_) {
        c *= scale;
    }
    trim();
    return *this;
}

RationalPolynomial poly_arith(const RationalPolynomial& p, const RationalPolynomial& q, PolyOp op)
{
    switch (op) {
    case PolyOp::add: return p + q;
    case PolyOp::sub: return p - q;
    case PolyOp::mul: return p * q;
    }
    return {};
}

RationalPolynomial poly_derivative(const RationalPolynomial& p, int order)
{
    if (order < 0) {
        throw DomainError("poly_derivative: negative order");
    }
    std::vector<BigRational> c = p.coefficients();
    for (int step = 0; step < order && !c.empty(); ++step) {
        std::vector<BigRational> d(c.size() - 1);
        for (std::size_t n = 1; n < c.size(); ++n) {
            d[n - 1] = c[n] * BigRational(static_cast<long>(n));
        }
        c = std::move(d);
    }
    return RationalPolynomial(std::move(c));
}

BigRational poly_eval(const RationalPolynomial& p, const BigRational& x) { return p(x); }

RationalPolynomial pow(const RationalPolynomial& p, int exponent)
{
    if (exponent < 0) {
        throw DomainError("pow: negative exponent");
    }
    RationalPolynomial result = RationalPolynomial::constant(1);
    RationalPolynomial base = p;
    while (exponent > 0) {
        if (exponent & 1) {
            result *= base;
        }
        exponent >>= 1;
        if (exponent > 0) {
            base *= base;
        }
    }
    return result;
}

RationalPolynomial compose(const RationalPolynomial& p, const RationalPolynomial& q)
{
    RationalPolynomial acc;
    const auto& c = p.coefficients();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc *= q;
        acc += RationalPolynomial::constant(*it);
    }
    return acc;
}

PolyDivision divmod(const RationalPolynomial& p, const RationalPolynomial& q)
{
    if (q.is_zero()) {
        throw ZeroPolynomial("divmod: division by the zero polynomial");
    }
    std::vector<BigRational> rem = p.coefficients();
    const int dq = q.degree();
    const int dp = p.degree();
    if (dp < dq) {
        return {RationalPolynomial{}, p};
    }
    std::vector<BigRational> quot(static_cast<std::size_t>(dp - dq) + 1);
    const BigRational lead = q.leading();
    for (int n = dp; n >= dq; --n) {
        const BigRational& top = rem[static_cast<std::size_t>(n)];
        if (top.is_zero()) {
            continue;
        }
        const BigRational factor = top / lead;
        quot[static_cast<std::size_t>(n - dq)] = factor;
        for (int i = 0; i <= dq; ++i) {
            rem[static_cast<std::size_t>(n - dq + i)] -= factor * q.coefficient(i);
        }
    }
    return {RationalPolynomial(std::move(quot)), RationalPolynomial(std::move(rem))};
}

RationalPolynomial gcd(const RationalPolynomial& p, const RationalPolynomial& q)
{
    RationalPolynomial a = p;
    RationalPolynomial b = q;
    while (!b.is_zero()) {
        RationalPolynomial r = divmod(a, b).remainder;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) {
        return a;
    }
    return a * (BigRational(1) / a.leading());
}

int descartes_sign_changes(const RationalPolynomial& p)
{
    if (p.is_zero()) {
        throw ZeroPolynomial("descartes_sign_changes: zero polynomial has no sign sequence");
    }
    int changes = 0;
    int previous = 0;
    for (const auto& c : p.coefficients()) {
        const int s = c.sign();
        if (s == 0) {
            continue;
        }
        if (previous != 0 && s != previous) {
            ++changes;
        }
        previous = s;
    }
    return changes;
}

std::vector<Sign> sign_pattern(const RationalPolynomial& p)
{
    std::vector<Sign> out;
    out.reserve(p.coefficients().size());
    for (const auto& c : p.coefficients()) {
        out.push_back(static_cast<Sign>(c.sign()));
    }
    return out;
}

std::string sign_pattern_string(const RationalPolynomial& p)
{
    std::string out;
    for (Sign s : sign_pattern(p)) {
        out.push_back(sign_symbol(s));
    }
    return out;
}

//
// BivariatePolynomial
//

BivariatePolynomial BivariatePolynomial::constant(const BigRational& c)
{
    BivariatePolynomial out;
    out.set(0, 0, c);
    return out;
}

BivariatePolynomial BivariatePolynomial::first()
{
    BivariatePolynomial out;
    out.set(1, 0, 1);
    return out;
}

BivariatePolynomial BivariatePolynomial::second()
{
    BivariatePolynomial out;
    out.set(0, 1, 1);
    return out;
}

BivariatePolynomial BivariatePolynomial::in_first(const RationalPolynomial& p)
{
    BivariatePolynomial out;
    for (int n = 0; n <= p.degree(); ++n) {
        out.set(n, 0, p.coefficient(n));
    }
    return out;
}

BivariatePolynomial BivariatePolynomial::in_second(const RationalPolynomial& p)
{
    BivariatePolynomial out;
    for (int n = 0; n <= p.degree(); ++n) {
        out.set(0, n, p.coefficient(n));
    }
    return out;
}

BigRational BivariatePolynomial::coefficient(int j, int k) const
{
    const auto it = terms_.find({j, k});
    return it == terms_.end() ? BigRational{} : it->second;
}

void BivariatePolynomial::set(int j, int k, const BigRational& c)
{
    if (c.is_zero()) {
        terms_.erase({j, k});
    } else {
        terms_[{j, k}] = c;
    }
}

int BivariatePolynomial::degree_in_second() const
{
    int d = -1;
    for (const auto& [e, c] : terms_) {
        d = std::max(d, e.second);
    }
    return d;
}

RationalPolynomial BivariatePolynomial::coefficient_in_second(int k) const
{
    std::vector<BigRational> c;
    for (const auto& [e, value] : terms_) {
        if (e.second != k) {
            continue;
        }
        if (static_cast<int>(c.size()) <= e.first) {
            c.resize(static_cast<std::size_t>(e.first) + 1);
        }
        c[static_cast<std::size_t>(e.first)] = value;
    }
    return RationalPolynomial(std::move(c));
}

RationalPolynomial BivariatePolynomial::substitute_second(const RationalPolynomial& q) const
{
    RationalPolynomial acc;
    for (int k = degree_in_second(); k >= 0; --k) {
        acc *= q;
        acc += coefficient_in_second(k);
    }
    return acc;
}

RationalPolynomial BivariatePolynomial::substitute_second_over_power(const RationalPolynomial& num,
                                                                    int den_power, int shift) const
{
    RationalPolynomial acc;
    RationalPolynomial num_power = RationalPolynomial::constant(1);
    for (int k = 0; k <= degree_in_second(); ++k) {
        const RationalPolynomial ck = coefficient_in_second(k);
        if (!ck.is_zero()) {
            RationalPolynomial term = ck * num_power;
            const int exponent = shift - den_power * k;
            if (exponent >= 0) {
                acc += term * RationalPolynomial::monomial(1, exponent);
            } else {
                // Only allowed if the low-order coefficients vanish.
                const auto& tc = term.coefficients();
                for (int n = 0; n < -exponent && n <= term.degree(); ++n) {
                    if (!tc[static_cast<std::size_t>(n)].is_zero()) {
                        throw DomainError("substitute_second_over_power: result is not a polynomial");
                    }
                }
                std::vector<BigRational> shifted(tc.begin() + std::min<std::size_t>(tc.size(), -exponent),
                                                 tc.end());
                acc += RationalPolynomial(std::move(shifted));
            }
        }
        num_power *= num;
    }
    return acc;
}

BivariatePolynomial BivariatePolynomial::operator-() const
{
    BivariatePolynomial out = *this;
    for (auto& [e, c] : out.terms_) {
        c = -c;
    }
    return out;
}

BivariatePolynomial& BivariatePolynomial::operator+=(const BivariatePolynomial& rhs)
{
    for (const auto& [e, c] : rhs.terms_) {
        set(e.first, e.second, coefficient(e.first, e.second) + c);
    }
    return *this;
}

BivariatePolynomial& BivariatePolynomial::operator-=(const BivariatePolynomial& rhs) { return *this += -rhs; }

BivariatePolynomial& BivariatePolynomial::operator*=(const BivariatePolynomial& rhs)
{
    std::map<Exponents, BigRational> out;
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : rhs.terms_) {
            out[{ea.first + eb.first, ea.second + eb.second}] += ca * cb;
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    terms_ = std::move(out);
    return *this;
}

BivariatePolynomial& BivariatePolynomial::operator*=(const BigRational& scale)
{
    if (scale.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) {
        c *= scale;
    }
    return *this;
}

BivariatePolynomial pow(const BivariatePolynomial& p, int exponent)
{
    if (exponent < 0) {
        throw DomainError("pow: negative exponent");
    }
    BivariatePolynomial result = BivariatePolynomial::constant(1);
    for (int i = 0; i < exponent; ++i) {
        result *= p;
    }
    return result;
}

std::pair<BivariatePolynomial, BivariatePolynomial> split_by_sign(const BivariatePolynomial& w)
{
    BivariatePolynomial u;
    BivariatePolynomial v;
    for (const auto& [e, c] : w.terms()) {
        if (c.sign() > 0) {
            u.set(e.first, e.second, c);
        } else {
            v.set(e.first, e.second, -c);
        }
    }
    return {u, v};
}

//
// RationalFunction
//

RationalFunction::RationalFunction(RationalPolynomial num, RationalPolynomial den)
{
    if (den.is_zero()) {
        throw ZeroPolynomial("RationalFunction: zero denominator");
    }
    if (num.is_zero()) {
        num_ = {};
        den_ = RationalPolynomial::constant(1);
        return;
    }
    const RationalPolynomial g = gcd(num, den);
    num_ = divmod(num, g).quotient;
    den_ = divmod(den, g).quotient;
    const BigRational lead = den_.leading();
    num_ *= BigRational(1) / lead;
    den_ *= BigRational(1) / lead;
}

RationalFunction::RationalFunction(RationalPolynomial num)
    : num_(std::move(num)), den_(RationalPolynomial::constant(1))
{
}

BigRational RationalFunction::operator()(const BigRational& x) const
{
    const BigRational d = den_(x);
    if (d.is_zero()) {
        throw DomainError("RationalFunction: pole at " + x.to_string());
    }
    return num_(x) / d;
}

RationalFunction RationalFunction::operator-() const { return RationalFunction(-num_, den_); }

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b)
{
    if (a.den_ == b.den_) {
        return {a.num_ + b.num_, a.den_};
    }
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b)
{
    return {a.num_ * b.num_, a.den_ * b.den_};
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b)
{
    if (b.num_.is_zero()) {
        throw ZeroPolynomial("RationalFunction: division by zero function");
    }
    return {a.num_ * b.den_, a.den_ * b.num_};
}

RationalFunction derivative(const RationalFunction& f)
{
    const auto& n = f.numerator();
    const auto& d = f.denominator();
    return {poly_derivative(n) * d - n * poly_derivative(d), d * d};
}

std::vector<BigRational> bernoulli_numbers(int n)
{
    // Akiyama-Tanigawa gives B_1 = +1/2; flipped below.
    std::vector<BigRational> out(static_cast<std::size_t>(n) + 1);
    std::vector<BigRational> a(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) {
        a[static_cast<std::size_t>(m)] = BigRational(1, m + 1);
        for (int j = m; j >= 1; --j) {
            a[static_cast<std::size_t>(j - 1)] =
                BigRational(j) * (a[static_cast<std::size_t>(j - 1)] - a[static_cast<std::size_t>(j)]);
        }
        out[static_cast<std::size_t>(m)] = a[0];
    }
    if (n >= 1) {
        out[1] = BigRational(-1, 2);
    }
    return out;
}

void to_json(nlohmann::json& j, const BigRational& q) { j = q.to_string(); }

void from_json(const nlohmann::json& j, BigRational& q) { q = BigRational::parse(j.get<std::string>()); }

void to_json(nlohmann::json& j, const RationalPolynomial& p)
{
    j = nlohmann::json::array();
    for (const auto& c : p.coefficients()) {
        j.push_back(c.to_string());
    }
}

void from_json(const nlohmann::json& j, RationalPolynomial& p)
{
    std::vector<BigRational> c;
    for (const auto& item : j) {
        c.push_back(BigRational::parse(item.get<std::string>()));
    }
    p = RationalPolynomial(std::move(c));
}

}  // namespace leraykit::exact
