#include "leraykit/bwcert.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "leraykit/errors.hpp"
#include "leraykit/specialfn.hpp"

namespace leraykit::bw {

namespace {

constexpr double kSeriesCutoff = 0.5;
constexpr double kMaxT = 700.0;
constexpr int kSeriesTerms = 48;

// Taylor coefficients at t = 0 of the kernels, index n multiplies t^n.
struct SeriesTables {
    std::array<double, kSeriesTerms> h0{};
    std::array<double, kSeriesTerms> h1{};
    std::array<double, kSeriesTerms> g0{};
    std::array<double, kSeriesTerms> g1{};
    std::array<double, kSeriesTerms> g2{};
    std::array<double, kSeriesTerms> cosh_gap{};
    std::array<double, kSeriesTerms> cube{};  // (e^t - 1)^3

    SeriesTables()
    {
        double fact = 1;
        for (int n = 0; n < kSeriesTerms; ++n) {
            if (n > 0) {
                fact *= n;
            }
            const double p2 = std::ldexp(1.0, n);
            const double p3 = std::pow(3.0, n);
            const double dn = n;
            if (n >= 3) {
                h0[n] = (dn - 2) / fact;
            }
            if (n >= 2) {
                h1[n] = (dn - 1) / fact;
            }
            if (n >= 3) {
                g0[n] = (2 - 2 * p2 + dn + dn * p2 / 2) / fact;
                g1[n] = 2 * (2 - p2 + dn * p2 / 2 - dn) / fact;
                g2[n] = dn * (p2 / 2 - 2) / fact;
                cube[n] = (p3 - 3 * p2 + 3) / fact;
            }
            if (n >= 4) {
                cosh_gap[n] = (p2 - 2 - dn * (dn - 1)) / fact;
            }
        }
    }
};

const SeriesTables& series()
{
    static const SeriesTables tables;
    return tables;
}

template <typename Coeff>
double sum_series(Coeff coeff, double t)
{
    double sum = 0;
    double power = 1;
    for (int n = 0; n < kSeriesTerms; ++n) {
        const double term = coeff(n) * power;
        sum += term;
        if (n > 4 && std::fabs(term) < 1e-19 * std::fabs(sum)) {
            break;
        }
        power *= t;
    }
    return sum;
}

double series_of(const std::array<double, kSeriesTerms>& c, double t)
{
    return sum_series([&](int n) { return c[static_cast<std::size_t>(n)]; }, t);
}

double m_series(double t, double q)
{
    const auto& s = series();
    return sum_series(
        [&](int n) {
            const auto i = static_cast<std::size_t>(n);
            return s.g0[i] - q * s.g1[i] + q * q * s.g2[i];
        },
        t);
}

void require_t(double t)
{
    if (!(t > 0)) {
        throw DomainError("kernel argument t must be positive");
    }
    if (t > kMaxT) {
        throw DomainError("kernel argument t exceeds the double-precision range (t <= 700)");
    }
}

std::vector<double> log_grid(double lo, double hi, int count)
{
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < count; ++i) {
        out.push_back(std::exp(a + (b - a) * i / (count - 1)));
    }
    out.back() = hi;
    return out;
}

double binomial(int n, int k)
{
    double c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c;
}

// M(t,q) e^(-3t) with w = e^(-t), in the q = 1 expansion.
double scaled_numerator(double t, double q)
{
    const double w = std::exp(-t);
    const double omw = -std::expm1(-t);
    const double p = q - 1;
    const double e_scaled = ((t - 2) + (t + 2) * w) * w * w;  // E(t) w^3
    return e_scaled + 2 * omw * (omw - t * w) * w * p + t * omw * omw * w * p * p;
}

}  // namespace

double h0(double t)
{
    require_t(t);
    if (t < kSeriesCutoff) {
        return series_of(series().h0, t);
    }
    return (t - 2) * std::expm1(t) + 2 * t;
}

double h1(double t)
{
    require_t(t);
    if (t < kSeriesCutoff) {
        return series_of(series().h1, t);
    }
    return t * std::exp(t) - std::expm1(t);
}

double g0(double t) { return std::exp(t) * h0(t); }
double g1(double t) { return 2 * std::expm1(t) * h1(t); }

double g2(double t)
{
    require_t(t);
    const double e = std::expm1(t);
    return t * e * e;
}

double m_kernel(double t, double q)
{
    require_t(t);
    if (t < kSeriesCutoff) {
        return m_series(t, q);
    }
    // Expanded around q = 1, where M(t,1) = E(t) and the naive form cancels.
    const double e = std::expm1(t);
    const double p = q - 1;
    return h0(t) + 2 * e * (e - t) * p + t * e * e * p * p;
}

double integrand(double t, double q, double x)
{
    if (!(t > 0)) {
        throw DomainError("integrand: t must be positive");
    }
    if (t < kSeriesCutoff) {
        return m_series(t, q) / series_of(series().cube, t) * std::exp(-x * t);
    }
    // Numerator and denominator scaled by e^(-3t).
    const double omw = -std::expm1(-t);
    return scaled_numerator(t, q) / (omw * omw * omw) * std::exp(-x * t);
}

double cosh_gap(double t)
{
    require_t(t);
    if (t < kSeriesCutoff) {
        return series_of(series().cosh_gap, t);
    }
    const double e = std::expm1(t);
    return e * e - t * t * std::exp(t);
}

double discriminant(double t)
{
    const double e = std::expm1(t);
    return 4 * e * e * cosh_gap(t);
}

double discriminant_from_kernels(double t)
{
    const double a = g1(t);
    return a * a - 4 * g0(t) * g2(t);
}

QuadraticRoots quadratic_roots(double t)
{
    if (!(t > 0)) {
        throw DomainError("quadratic_roots: t must be positive");
    }
    // s = (A +- sqrt(B)) / D with A = h1, B the cosh gap, D = t(e^t - 1); for t >= 1
    // all three are scaled by e^(-t). 1 - s1 = t E / ((D - A + sqrt B) D) avoids the
    // cancellation once s1 is within rounding of 1.
    double a = 0;
    double b = 0;
    double den = 0;
    double te = 0;  // t E(t), scaled like (D - A)^2
    if (t < 1) {
        a = h1(t);
        b = std::sqrt(cosh_gap(t));
        den = t * std::expm1(t);
        te = t * h0(t);
    } else {
        const double w = std::exp(-t);
        const double omw = -std::expm1(-t);
        a = t - omw;
        b = std::sqrt(omw * omw - t * t * w);
        den = t * omw;
        te = t * ((t - 2) + (t + 2) * w) * w;
    }
    const double gap = te / ((den - a + b) * den);
    return {(a + b) / den, (a - b) / den, gap};
}

BoundedFloat f_q_theta_route(const Real& x, const Real& q, double tol)
{
    if (!(x > 0)) {
        throw DomainError("F_q: x must be positive");
    }
    BoundedFloat th = special::theta(x + q, q, tol);
    th -= BoundedFloat::exact(promote(x));
    th -= scale(BoundedFloat::exact(promote(q)), Real(2));
    th += BoundedFloat::exact(Real(0.5));
    return th;
}

std::pair<double, double> f_q_quadrature(double x, double q, double tol)
{
    if (!(x > 0)) {
        throw DomainError("F_q quadrature: x must be positive");
    }
    // Tail beyond T from |M(t,q)| <= C t e^(2t), with C a coarse sup over [1, T].
    double big_t = 20;
    double tail = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 12; ++attempt) {
        double c = 0;
        for (int i = 0; i <= 200; ++i) {
            const double t = 1 + (big_t - 1) * i / 200.0;
            c = std::max(c, std::fabs(scaled_numerator(t, q)) / (t * std::exp(-t)));
        }
        c *= 2;
        const double s = 1 + x;
        const double omw = -std::expm1(-big_t);
        tail = c / (omw * omw * omw) * std::exp(-s * big_t) * (big_t / s + 1 / (s * s));
        if (tail < tol / 10) {
            break;
        }
        big_t *= 1.5;
    }
    double error = 0;
    const auto f = [&](double t) { return t == 0 ? (q * q - q + 1.0 / 6) : integrand(t, q, x); };
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, big_t, 20, 1e-15, &error);
    return {value, error + tail};
}

BoundedFloat f_q(const Real& x, const Real& q, double tol)
{
    BoundedFloat v = f_q_theta_route(x, q, tol);
    const auto [quad, quad_err] = f_q_quadrature(x.convert_to<double>(), q.convert_to<double>(), tol);
    const double gap = std::fabs(v.to_double() - quad);
    const double allowed = 10 * std::max(tol, 1e-12);
    if (gap > allowed) {
        throw CrossCheckFailure("F_q: Theta route " + v.to_string() + " and quadrature " + std::to_string(quad) +
                                " (est. error " + std::to_string(quad_err) + ") differ by " +
                                std::to_string(gap));
    }
    return v;
}

double find_negative_kernel(double q)
{
    for (double t : log_grid(1e-4, 50, 400)) {
        if (m_kernel(t, q) < 0) {
            return t;
        }
    }
    return -1;
}

Certificate cm_numeric_certificate(double q, int orders, const std::vector<double>& grid, double step, double tol)
{
    if (grid.empty()) {
        throw DomainError("cm_numeric_certificate: grid must be nonempty");
    }
    if (orders < 0 || orders > 4) {
        throw DomainError("cm_numeric_certificate: orders must lie in 0..4");
    }
    if (!(step > 0)) {
        throw DomainError("cm_numeric_certificate: step must be positive");
    }
    for (double x : grid) {
        if (!(x > 0)) {
            throw DomainError("cm_numeric_certificate: grid points must be positive");
        }
    }
    Certificate cert;
    cert.claim_id = "F_q completely monotone (numeric), q=" + format_real(Real(q), 6);
    cert.method = CertificateMethod::bounded_numeric;
    cert.paper_anchor = "(-1)^m d^m/dx^m F_q(x) > 0 for x > 0 when q <= 0 or q >= 1";
    cert.inputs = {{"q", q}, {"orders", orders}, {"grid", grid}, {"step", step}, {"tol", tol}};

    std::map<double, BoundedFloat> cache;
    const auto value_at = [&](double x) -> const BoundedFloat& {
        auto it = cache.find(x);
        if (it == cache.end()) {
            it = cache.emplace(x, f_q(Real(x), Real(q), tol)).first;
        }
        return it->second;
    };

    nlohmann::json violations = nlohmann::json::array();
    std::vector<double> min_margin(static_cast<std::size_t>(orders) + 1, std::numeric_limits<double>::infinity());
    bool undetermined = false;
    for (double x : grid) {
        for (int m = 0; m <= orders; ++m) {
            BoundedFloat diff = BoundedFloat::exact(Real(0));
            for (int i = 0; i <= m; ++i) {
                const double c = ((m - i) % 2 == 0 ? 1.0 : -1.0) * binomial(m, i);
                diff += scale(value_at(x + i * step), Real(c));
            }
            const BoundedFloat signed_diff = (m % 2 == 0) ? diff : -diff;
            auto& margin = min_margin[static_cast<std::size_t>(m)];
            margin = std::min(margin, signed_diff.to_double());
            if (signed_diff.certainly_negative()) {
                violations.push_back({{"x", x},
                                      {"order", m},
                                      {"signed_difference", signed_diff.to_double()},
                                      {"radius", signed_diff.radius_double()}});
            } else if (!signed_diff.certainly_positive()) {
                undetermined = true;
            }
        }
    }
    cert.witnesses["min_signed_difference_by_order"] = min_margin;
    cert.witnesses["note"] = "finite-difference evidence, not a proof";
    const double t_neg = find_negative_kernel(q);
    if (t_neg > 0) {
        cert.witnesses["kernel_negative_at_t"] = t_neg;
        cert.witnesses["kernel_value"] = m_kernel(t_neg, q);
    }
    if (!violations.empty()) {
        cert.verdict = "refutes";
        cert.witnesses["violations"] = violations;
    } else if (undetermined) {
        cert.verdict = "inconclusive";
    } else {
        cert.verdict = "supports";
    }
    return cert;
}

std::vector<Certificate> run_suite(double tol)
{
    std::vector<Certificate> out;
    const auto grid = log_grid(1e-4, 50, 200);

    {
        Certificate c;
        c.claim_id = "g0, g1, g2 positive";
        c.method = CertificateMethod::bounded_numeric;
        c.paper_anchor = "g0(t), g1(t), g2(t) > 0 for t > 0";
        c.inputs = {{"t_min", 1e-4}, {"t_max", 50}, {"points", grid.size()}};
        double m0 = 1e300;
        double m1 = 1e300;
        double m2 = 1e300;
        for (double t : grid) {
            m0 = std::min(m0, g0(t) / (t * t * t));
            m1 = std::min(m1, g1(t) / (t * t * t));
            m2 = std::min(m2, g2(t) / (t * t * t));
        }
        c.witnesses = {{"min_g0_over_t3", m0}, {"min_g1_over_t3", m1}, {"min_g2_over_t3", m2}};
        c.verdict = (m0 > 0 && m1 > 0 && m2 > 0) ? "verified" : "failed";
        out.push_back(c);
    }
    {
        Certificate c;
        c.claim_id = "cosh inequality behind the discriminant";
        c.method = CertificateMethod::bounded_numeric;
        c.paper_anchor = "1 - 2e^t + e^(2t) - t^2 e^t > 0 for t > 0";
        c.inputs = {{"t_min", 1e-4}, {"t_max", 50}, {"points", grid.size()}};
        double worst_rel = 0;
        double min_scaled = 1e300;
        bool ok = true;
        for (double t : grid) {
            const double gap = cosh_gap(t);
            ok = ok && gap > 0;
            min_scaled = std::min(min_scaled, gap / std::pow(t, 4));
            const double a = discriminant(t);
            const double b = discriminant_from_kernels(t);
            worst_rel = std::max(worst_rel, std::fabs(a - b) / std::fabs(a));
        }
        c.witnesses = {{"min_gap_over_t4", min_scaled}, {"max_relative_discriminant_mismatch", worst_rel}};
        c.verdict = (ok && worst_rel <= 1e-10) ? "verified" : "failed";
        out.push_back(c);
    }
    {
        Certificate c;
        c.claim_id = "roots ordered 0 < s2 < s1 < 1";
        c.method = CertificateMethod::bounded_numeric;
        c.paper_anchor = "0 < s2(t) < s1(t) < 1 for t > 0, s1 -> 1 as t -> infinity";
        c.inputs = {{"t_min", 1e-4}, {"t_max", 50}, {"points", grid.size()}};
        bool ok = true;
        double worst_residual = 0;
        bool s2_increasing = true;
        double prev_s2 = -1;
        for (double t : grid) {
            const auto r = quadratic_roots(t);
            ok = ok && 0 < r.s2 && r.s2 < r.s1 && r.one_minus_s1 > 0;
            for (double s : {r.s1, r.s2}) {
                const double a = g0(t);
                const double b = g1(t) * s;
                const double cc = g2(t) * s * s;
                worst_residual = std::max(worst_residual, std::fabs(cc - b + a) / (std::fabs(a) + std::fabs(b) + std::fabs(cc)));
            }
            s2_increasing = s2_increasing && r.s2 > prev_s2;
            prev_s2 = r.s2;
        }
        const auto at50 = quadratic_roots(50);
        const bool limit_ok = at50.one_minus_s1 > 0 && at50.one_minus_s1 < 1e-6;
        c.witnesses = {{"max_relative_root_residual", worst_residual},
                       {"one_minus_s1_at_50", at50.one_minus_s1},
                       {"s2_increasing_on_grid_informational", s2_increasing}};
        c.verdict = (ok && worst_residual <= 1e-8 && limit_ok) ? "verified" : "failed";
        out.push_back(c);
    }
    {
        Certificate c;
        c.claim_id = "s2 small-t limit";
        c.method = CertificateMethod::bounded_numeric;
        c.paper_anchor = "s2(t) -> (3 - sqrt 3)/6 as t -> 0+";
        const double limit = (3 - std::sqrt(3.0)) / 6;
        const double s2 = quadratic_roots(1e-4).s2;
        c.inputs = {{"t", 1e-4}};
        c.witnesses = {{"s2", s2}, {"limit", limit}, {"gap", std::fabs(s2 - limit)}};
        c.verdict = std::fabs(s2 - limit) <= 1e-4 ? "verified" : "failed";
        out.push_back(c);
    }
    {
        Certificate c;
        c.claim_id = "M(t,q) > 0 for q outside (0,1)";
        c.method = CertificateMethod::bounded_numeric;
        c.paper_anchor = "M(t,q) > 0 for t > 0 and q in (-inf,0] U [1,inf)";
        const std::vector<double> qs{-1, 0, 1, 2};
        c.inputs = {{"q", qs}, {"t_min", 1e-4}, {"t_max", 50}};
        bool ok = true;
        nlohmann::json mins = nlohmann::json::object();
        for (double q : qs) {
            double lo = 1e300;
            for (double t : grid) {
                lo = std::min(lo, m_kernel(t, q) / (t * t * t));
            }
            mins[format_real(Real(q), 6)] = lo;
            ok = ok && lo > 0;
        }
        c.witnesses = {{"min_M_over_t3", mins}};
        c.verdict = ok ? "verified" : "failed";
        out.push_back(c);
    }
    {
        Certificate c;
        c.claim_id = "Phi(r,q) < 1 for q outside (0,1)";
        c.method = CertificateMethod::bounded_numeric;
        c.paper_anchor = "Phi(r,q) < 1 for r > q when q in (-inf,0] U [1,inf)";
        const std::vector<double> qs{-5, -1, 0, 1, 2, 5};
        c.inputs = {{"q", qs}, {"r_max", 1e3}, {"points_per_q", 30}, {"tol", tol}};
        bool ok = true;
        nlohmann::json margins = nlohmann::json::object();
        for (double q : qs) {
            double worst = 1e300;
            for (double r : log_grid(std::max(q, 0.0) + 0.01, 1e3, 30)) {
                const BoundedFloat v = special::phi(Real(r), Real(q), tol);
                ok = ok && v.certainly_below(Real(1));
                worst = std::min(worst, (1 - v.upper()).convert_to<double>());
            }
            margins[format_real(Real(q), 6)] = worst;
        }
        c.witnesses = {{"min_certified_margin_below_1", margins}};
        c.verdict = ok ? "verified" : "failed";
        out.push_back(c);
    }
    const std::vector<double> cm_grid{0.5, 1, 2, 4, 8};
    for (double q : {-2.0, 0.0, 1.0, 3.0}) {
        out.push_back(cm_numeric_certificate(q, 4, cm_grid, 0.5, tol));
    }
    {
        Certificate c = cm_numeric_certificate(2.0 / 3.0, 4, cm_grid, 0.5, tol);
        const bool refuted = c.verdict == "refutes" && c.witnesses.contains("kernel_negative_at_t");
        c.claim_id = "q=2/3 CM refuted";
        c.paper_anchor = "F_q is not completely monotone for q in ((3 - sqrt 3)/6, 1); M(t,2/3) < 0 near t = 0";
        c.witnesses["evidence_verdict"] = c.verdict;
        c.verdict = refuted ? "verified" : "failed";
        out.push_back(c);
    }
    return out;
}

}  // namespace leraykit::bw
