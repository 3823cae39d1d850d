#include "leraykit/specialfn.hpp"

#include <cmath>
#include <mutex>
#include <vector>

#include "leraykit/exactpoly.hpp"

namespace leraykit::special {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::log;
using boost::multiprecision::pow;

constexpr int kMaxEulerMaclaurinTerms = 120;

struct BernoulliTable {
    unsigned bits = 0;
    std::vector<Real> b2k;             // B_{2k}, k = 0..kMax
    std::vector<Real> b2k_over_fact;   // B_{2k}/(2k)!
};

const BernoulliTable& bernoulli_table()
{
    static std::mutex mu;
    static BernoulliTable table;
    std::lock_guard<std::mutex> lock(mu);
    const unsigned bits = working_precision_bits();
    if (table.bits != bits) {
        const auto exact = exact::bernoulli_numbers(2 * kMaxEulerMaclaurinTerms + 2);
        table.b2k.clear();
        table.b2k_over_fact.clear();
        exact::BigRational fact(1);
        for (int k = 0; k <= kMaxEulerMaclaurinTerms + 1; ++k) {
            if (k > 0) {
                fact = fact * exact::BigRational((2 * k - 1) * (2 * k));
            }
            table.b2k.push_back(to_real(exact[2 * k]));
            table.b2k_over_fact.push_back(to_real(exact[2 * k] / fact));
        }
        table.bits = bits;
    }
    return table;
}

// Shift point beyond which the asymptotic and Euler-Maclaurin expansions
// reach working precision before diverging.
Real shift_point()
{
    const double bits = working_precision_bits();
    return Real(std::max(16.0, std::ceil(0.12 * bits) + 2.0));
}

void require_tol(double tol)
{
    if (!(tol > 0) || !std::isfinite(tol)) {
        throw DomainError("tolerance must be a positive finite number");
    }
}

BoundedFloat finish(BoundedFloat v, double tol, const char* what)
{
    if (v.radius() > Real(tol)) {
        throw ToleranceUnreachable(std::string(what) + ": certified radius " + format_real(v.radius(), 3) +
                                   " exceeds tolerance " + format_real(Real(tol), 3) +
                                   " at the current working precision");
    }
    return v;
}

// Tail sum_{j>=0} (b+j)^(-s) for b >= shift point, via Euler-Maclaurin with
// the remainder bounded by twice the first omitted correction.
BoundedFloat zeta_tail(int s, const Real& b)
{
    const auto& table = bernoulli_table();
    const Real inv_b = 1 / b;
    const Real b_pow = pow(inv_b, s - 1);  // b^(1-s)
    Real sum = b_pow / (s - 1) + b_pow * inv_b / 2;
    Real abs_sum = abs(sum);
    const Real inv_b2 = inv_b * inv_b;
    Real rising = Real(s);             // (s)_{2k-1}, starts at k = 1
    Real power = b_pow * inv_b2;       // b^(-s-2k+1), starts at k = 1
    Real remainder;
    const Real u = unit_roundoff();
    bool converged = false;
    int k = 1;
    for (; k <= kMaxEulerMaclaurinTerms; ++k) {
        const Real term = table.b2k_over_fact[k] * rising * power;
        if (abs(term) <= u * abs(sum)) {
            remainder = 2 * abs(term);
            converged = true;
            break;
        }
        sum += term;
        abs_sum += abs(term);
        rising *= Real(s + 2 * k - 1) * Real(s + 2 * k);
        power *= inv_b2;
    }
    if (!converged) {
        throw ToleranceUnreachable("Euler-Maclaurin tail did not reach working precision");
    }
    const Real rounding = abs_sum * u * (2 * k + s + 8);
    return {sum, remainder + rounding};
}

}  // namespace

BoundedFloat log_gamma(const Real& x_in)
{
    const Real x = promote(x_in);
    if (!(x > 0)) {
        throw DomainError("log_gamma: argument must be positive");
    }
    Real out;
    int sign = 0;
    mpfr_lgamma(out.backend().data(), &sign, x.backend().data(), MPFR_RNDN);
    return BoundedFloat::rounded(out);
}

BoundedFloat log_gamma(const BoundedFloat& x)
{
    const Real lo = x.lower();
    if (!(lo > 0)) {
        throw DomainError("log_gamma: argument interval reaches zero");
    }
    // |psi(t)| <= |log t| + 1/t for t > 0, and the bound is largest at the lower end
    // or at the upper end of the interval.
    const Real hi = x.upper();
    const Real slope = std::max(abs(log(lo)) + 1 / lo, abs(log(hi)) + 1 / lo);
    BoundedFloat v = log_gamma(x.value());
    v.widen(slope * x.radius());
    return v;
}

BoundedFloat gamma(const Real& x_in)
{
    const Real x = promote(x_in);
    if (!(x > 0)) {
        throw DomainError("gamma: argument must be positive");
    }
    Real out;
    mpfr_gamma(out.backend().data(), x.backend().data(), MPFR_RNDN);
    return BoundedFloat::rounded(out);
}

BoundedFloat hurwitz_zeta(int s, const Real& a_in, double tol)
{
    const Real a = promote(a_in);
    require_tol(tol);
    if (s < 2) {
        throw DomainError("hurwitz_zeta: exponent must be an integer >= 2");
    }
    if (!(a > 0)) {
        throw DomainError("hurwitz_zeta: shift must be positive");
    }
    const Real start = shift_point();
    Real head = 0;
    Real head_abs = 0;
    Real b = a;
    long n = 0;
    while (b < start) {
        const Real term = pow(1 / b, s);
        head += term;
        head_abs += term;
        b += 1;
        ++n;
    }
    BoundedFloat tail = zeta_tail(s, b);
    BoundedFloat total(head, head_abs * unit_roundoff() * (n + s + 4));
    total += tail;
    return finish(total, tol, "hurwitz_zeta");
}

BoundedFloat digamma(const Real& x_in, double tol)
{
    const Real x = promote(x_in);
    require_tol(tol);
    if (!(x > 0)) {
        throw DomainError("digamma: argument must be positive");
    }
    const auto& table = bernoulli_table();
    const Real start = shift_point();
    const Real u = unit_roundoff();
    Real shift_sum = 0;
    Real y = x;
    long n = 0;
    while (y < start) {
        shift_sum += 1 / y;
        y += 1;
        ++n;
    }
    // psi(y) ~ log y - 1/(2y) - sum_k B_{2k} / (2k y^{2k})
    const Real inv_y2 = 1 / (y * y);
    Real sum = log(y) - 1 / (2 * y);
    Real abs_sum = abs(log(y)) + 1 / (2 * y);
    Real power = inv_y2;
    Real remainder;
    bool converged = false;
    int k = 1;
    for (; k <= kMaxEulerMaclaurinTerms; ++k) {
        const Real term = table.b2k[k] * power / (2 * k);
        if (abs(term) <= u * abs(sum)) {
            remainder = 2 * abs(term);
            converged = true;
            break;
        }
        sum -= term;
        abs_sum += abs(term);
        power *= inv_y2;
    }
    if (!converged) {
        throw ToleranceUnreachable("digamma: asymptotic expansion did not reach working precision");
    }
    const Real value = sum - shift_sum;
    const Real radius = remainder + (abs_sum + shift_sum) * u * (n + 2 * k + 8);
    return finish(BoundedFloat(value, radius), tol, "digamma");
}

BoundedFloat polygamma(int order, const Real& x, double tol)
{
    return polygamma(PolygammaQuery{order, x}, tol);
}

BoundedFloat polygamma(const PolygammaQuery& query, double tol)
{
    require_tol(tol);
    if (query.order < 0) {
        throw DomainError("polygamma: order must be non-negative");
    }
    if (!(query.argument > 0)) {
        throw DomainError("polygamma: argument must be positive, got " + format_real(query.argument));
    }
    if (query.order == 0) {
        return digamma(query.argument, tol);
    }
    // psi^(m)(x) = (-1)^(m+1) m! zeta(m+1, x)
    const int m = query.order;
    Real factorial = 1;
    for (int i = 2; i <= m; ++i) {
        factorial *= i;
    }
    if (m % 2 == 0) {
        factorial = -factorial;
    }
    BoundedFloat z = hurwitz_zeta(m + 1, query.argument, tol);
    return finish(scale(z, factorial), tol, "polygamma");
}

BoundedFloat phi_polygamma_route(const Real& r_in, const Real& q_in, double tol)
{
    const Real r = promote(r_in);
    const Real q = promote(q_in);
    require_tol(tol);
    const Real x = r + 1 - q;
    if (!(x > 0)) {
        throw DomainError("phi: requires r + 1 - q > 0");
    }
    BoundedFloat a = scale(polygamma(1, x, tol), 2 * r);
    BoundedFloat b = scale(polygamma(2, x, tol), r * r);
    return finish(a + b, tol, "phi");
}

BoundedFloat phi(const Real& r_in, const Real& q_in, double tol)
{
    const Real r = promote(r_in);
    const Real q = promote(q_in);
    require_tol(tol);
    const Real x = r + 1 - q;
    if (!(x > 0)) {
        throw DomainError("phi: requires r + 1 - q > 0, got r=" + format_real(r) + " q=" + format_real(q));
    }
    if (abs(r - q) < Real(kPhiThresholdGap)) {
        throw DomainError("phi: r lies within 1e-6 of q; endpoint values are not evaluated");
    }
    // Direct terms 2r(u - r)/u^3 with u = x + j - 1 until u passes the shift point;
    // the remainder is 2r zeta(2, u) - 2r^2 zeta(3, u).
    const Real start = 2 * shift_point();
    const Real u_ro = unit_roundoff();
    Real head = 0;
    Real head_abs = 0;
    Real u = x;
    long n = 0;
    while (u < start) {
        const Real term = 2 * r * (u - r) / (u * u * u);
        head += term;
        head_abs += abs(term);
        u += 1;
        ++n;
    }
    BoundedFloat series(head, head_abs * u_ro * (n + 10));
    series += scale(zeta_tail(2, u), 2 * r);
    series -= scale(zeta_tail(3, u), 2 * r * r);
    finish(series, tol, "phi");

    const BoundedFloat other = phi_polygamma_route(r, q, tol);
    const Real gap = abs(series.value() - other.value());
    if (gap > series.radius() + other.radius()) {
        throw CrossCheckFailure("phi: series route and polygamma route differ by " + format_real(gap, 3));
    }
    return series;
}

BoundedFloat theta(const Real& r_in, const Real& q_in, double tol)
{
    const Real r = promote(r_in);
    const Real q = promote(q_in);
    require_tol(tol);
    const Real x = r + 1 - q;
    if (!(x > 0)) {
        throw DomainError("theta: requires r + 1 - q > 0");
    }
    if (r == 0) {
        return BoundedFloat::exact(Real(0));
    }
    return finish(scale(polygamma(1, x, tol), r * r), tol, "theta");
}

}  // namespace leraykit::special
