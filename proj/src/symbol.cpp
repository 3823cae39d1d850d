#include "leraykit/symbol.hpp"

#include <algorithm>
#include <cmath>

#include "leraykit/errors.hpp"
#include "leraykit/specialfn.hpp"

namespace leraykit::symbol {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::cos;
using boost::multiprecision::log;
using boost::multiprecision::pow;
using boost::multiprecision::sin;
using boost::multiprecision::sqrt;
using boost::multiprecision::tan;

void require_gamma(const Real& gamma)
{
    if (!(gamma > 1)) {
        throw DomainError("gamma must exceed 1, got " + format_real(gamma));
    }
}

std::string outside_message(const Real& d, const Real& gamma, int k, const OpenInterval& iv)
{
    return "d = " + format_real(d) + " ∉ I_" + std::to_string(k) + "(" + format_real(gamma) +
           ") = " + iv.to_string();
}

// Absolute for values up to 1, relative beyond: J grows without bound near the
// upper end of I_k, where no fixed absolute radius is reachable.
BoundedFloat ensure_tol(BoundedFloat v, double tol, const char* what)
{
    const Real scale_factor = abs(v.value()) > 1 ? abs(v.value()) : Real(1);
    if (v.radius() > Real(tol) * scale_factor) {
        throw ToleranceUnreachable(std::string(what) + ": certified radius " + format_real(v.radius(), 3) +
                                   " exceeds tolerance");
    }
    return v;
}

// sqrt(pi/2 (1-d) sec(d pi/2)); equals 1 at d = 1 by continuity.
BoundedFloat gamma2_closed_form(const Real& d)
{
    if (d == 1) {
        return BoundedFloat::exact(Real(1));
    }
    const Real pi = real_pi();
    const Real x = d * pi / 2;
    const Real v = sqrt(pi / 2 * (1 - d) / cos(x));
    // Relative conditioning of the radicand in its three rounded inputs.
    const Real rel = 8 * unit_roundoff() * (4 + abs(x * tan(x)) + (abs(d) + 1) / abs(1 - d));
    return {v, v * rel};
}

// (gamma-1)^(1/gamma-1) sqrt(pi/4 (gamma-2) gamma csc(2pi/gamma)), gamma != 2.
BoundedFloat lebesgue_closed_form(const Real& gamma)
{
    const Real pi = real_pi();
    const Real y = 2 * pi / gamma;
    const Real e = 1 / gamma - 1;
    const Real v = pow(gamma - 1, e) * sqrt(pi / 4 * (gamma - 2) * gamma / sin(y));
    const Real rel = 8 * unit_roundoff() *
                     (6 + abs(y / tan(y)) + (gamma + 2) / abs(gamma - 2) + abs(e * log(gamma - 1)));
    return {v, v * rel};
}

BoundedFloat pairing_closed_form(const Real& gamma)
{
    const BoundedFloat g = BoundedFloat::exact(gamma);
    return g / scale(sqrt(g - BoundedFloat::exact(Real(1))), Real(2));
}

BoundedFloat hf_limit_bounded(const Real& gamma)
{
    return sqrt(pairing_closed_form(gamma));
}

int sign_of(const Real& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

}  // namespace

std::string OpenInterval::to_string() const
{
    return "(" + format_real(lower) + ", " + format_real(upper) + ")";
}

MeasureTag MeasureTag::parse(const std::string& name)
{
    if (name == "pairing") {
        return pairing();
    }
    if (name == "preferred") {
        return preferred();
    }
    if (name == "dual-preferred" || name == "dual_preferred") {
        return dual_preferred();
    }
    if (name == "lebesgue") {
        return lebesgue();
    }
    throw DomainError("unknown measure '" + name + "' (expected pairing, preferred, dual-preferred, lebesgue)");
}

Real MeasureTag::exponent(const Real& gamma) const
{
    switch (kind) {
    case MeasureKind::generic:
        return promote(d);
    case MeasureKind::pairing:
        return gamma - 1;
    case MeasureKind::preferred:
        return (gamma + 1) / 3;
    case MeasureKind::dual_preferred:
        return (5 * gamma - 7) / 3;
    case MeasureKind::lebesgue:
        return Real(1);
    }
    return promote(d);
}

std::string MeasureTag::name() const
{
    switch (kind) {
    case MeasureKind::generic:
        return "generic";
    case MeasureKind::pairing:
        return "pairing";
    case MeasureKind::preferred:
        return "preferred";
    case MeasureKind::dual_preferred:
        return "dual-preferred";
    case MeasureKind::lebesgue:
        return "lebesgue";
    }
    return "generic";
}

HolderReparam HolderReparam::from_exponent(const Real& gamma, const Real& d)
{
    if (gamma == 2) {
        throw DegenerateGamma("the reparametrization d = a(gamma-2)+1 is degenerate at gamma = 2");
    }
    return from_a((d - 1) / (gamma - 2));
}

HolderReparam HolderReparam::from_a(Real a)
{
    Real q = 1 - a;
    return {std::move(a), std::move(q)};
}

Real HolderReparam::exponent(const Real& gamma) const { return a * (gamma - 2) + 1; }

bool HolderReparam::finite_for_all_modes(const Real& gamma) const
{
    if (gamma == 2) {
        return true;
    }
    return abs(q) < gamma / abs(gamma - 2);
}

std::string to_string(Monotonicity m)
{
    switch (m) {
    case Monotonicity::strictly_decreasing:
        return "StrictlyDecreasing";
    case Monotonicity::strictly_increasing:
        return "StrictlyIncreasing";
    case Monotonicity::non_monotone:
        return "NonMonotone";
    case Monotonicity::constant:
        return "Constant";
    }
    return "Constant";
}

OpenInterval boundedness_interval(const Real& gamma_in, int k)
{
    const Real gamma = promote(gamma_in);
    require_gamma(gamma);
    if (k < 0) {
        throw DomainError("mode k must be non-negative");
    }
    return {Real(-2 * k - 1), Real(2 * k + 2) * (gamma - 1) + 1};
}

BoundedFloat symbol_value(const SymbolQuery& query, double tol)
{
    const Real gamma = promote(query.gamma);
    const Real d = promote(query.d);
    const int k = query.k;
    require_gamma(gamma);
    const OpenInterval iv = boundedness_interval(gamma, k);
    if (!iv.contains(d)) {
        throw UnboundedMode(outside_message(d, gamma, k, iv), k);
    }
    // J = Gamma(a1) Gamma(a2) / Gamma(k+1)^2 (gamma/2)^(2k+2) (gamma-1)^(-a2)
    const BoundedFloat g = BoundedFloat::exact(gamma);
    const BoundedFloat a1 = (BoundedFloat::exact(Real(2 * k + 1)) + BoundedFloat::exact(d)) / g;
    const BoundedFloat a2 = BoundedFloat::exact(Real(2 * k + 2)) - a1;
    BoundedFloat logj = special::log_gamma(a1) + special::log_gamma(a2);
    logj -= scale(special::log_gamma(Real(k + 1)), Real(2));
    logj += scale(log(scale(g, Real(0.5))), Real(2 * k + 2));
    logj -= a2 * log(g - BoundedFloat::exact(Real(1)));
    return ensure_tol(exp(logj), tol, "symbol_value");
}

BoundedFloat sub_norm(const SymbolQuery& query, double tol)
{
    return ensure_tol(sqrt(symbol_value(query, tol)), tol, "sub_norm");
}

Real holder_conjugate(const Real& gamma_in)
{
    const Real gamma = promote(gamma_in);
    require_gamma(gamma);
    return gamma / (gamma - 1);
}

HolderPartner holder_partner(const Real& gamma_in, const Real& d_in)
{
    const Real gamma = promote(gamma_in);
    const Real d = promote(d_in);
    require_gamma(gamma);
    const HolderReparam rep = HolderReparam::from_exponent(gamma, d);
    const Real star = holder_conjugate(gamma);
    return {star, rep.exponent(star)};
}

Real hf_limit(const Real& gamma_in)
{
    const Real gamma = promote(gamma_in);
    require_gamma(gamma);
    return sqrt(gamma / (2 * sqrt(gamma - 1)));
}

double hf_limit(double gamma) { return hf_limit(Real(gamma)).convert_to<double>(); }

bool in_decreasing_regime(const Real& gamma_in, const Real& d_in)
{
    const Real gamma = promote(gamma_in);
    const Real d = promote(d_in);
    require_gamma(gamma);
    if (!boundedness_interval(gamma, 0).contains(d)) {
        return false;
    }
    if (gamma == 2) {
        return d != 1;
    }
    if (gamma > 2) {
        return d <= 1 || d >= gamma - 1;
    }
    return d <= gamma - 1 || d >= 1;
}

NormResult sup_search(const Real& gamma_in, const Real& d_in, double tol, const SupSearchOptions& options)
{
    const Real gamma = promote(gamma_in);
    const Real d = promote(d_in);
    require_gamma(gamma);
    const OpenInterval iv0 = boundedness_interval(gamma, 0);
    if (!iv0.contains(d)) {
        throw Unbounded(outside_message(d, gamma, 0, iv0));
    }
    if (options.k_max < 0 || options.window < 1) {
        throw DomainError("sup_search: k_max must be non-negative and window positive");
    }
    const BoundedFloat limit = hf_limit_bounded(gamma);
    NormResult out;
    out.method = "sup-search";
    out.d = d;
    out.converged = false;

    BoundedFloat best;
    int best_k = -1;
    Real prev_gap;
    int streak = 0;
    int k = 0;
    for (; k <= options.k_max; ++k) {
        const BoundedFloat s = sub_norm({gamma, d, k}, tol);
        if (best_k < 0 || s.value() > best.value()) {
            best = s;
            best_k = k;
        }
        const Real gap = s.value() - limit.value();
        if (k > 0) {
            const bool one_sided = sign_of(gap) == sign_of(prev_gap);
            const bool shrinking = abs(gap) < abs(prev_gap) || (gap == 0 && prev_gap == 0);
            streak = (one_sided && shrinking) ? streak + 1 : 0;
        }
        prev_gap = gap;
        if (streak >= options.window) {
            out.converged = true;
            if (options.early_stop) {
                break;
            }
        }
    }
    out.cutoff_k = std::min(k, options.k_max);
    if (best.value() >= limit.value()) {
        out.value = best;
        out.argmax_k = best_k;
    } else {
        out.value = limit;
        out.argmax_k = -1;
    }
    out.value = ensure_tol(out.value, tol, "sup_search");
    return out;
}

NormResult leray_norm(const Real& gamma_in, const MeasureTag& measure, double tol, int k_max)
{
    const Real gamma = promote(gamma_in);
    require_gamma(gamma);
    const Real d = measure.exponent(gamma);
    const OpenInterval iv0 = boundedness_interval(gamma, 0);
    if (!iv0.contains(d)) {
        throw Unbounded(outside_message(d, gamma, 0, iv0));
    }
    NormResult out;
    out.d = d;
    if (gamma == 2) {
        out.value = gamma2_closed_form(d);
        out.method = "closed-form-gamma2";
    } else if (d == 1) {
        out.value = lebesgue_closed_form(gamma);
        out.method = "closed-form-lebesgue";
    } else if (measure.kind == MeasureKind::pairing || d == gamma - 1) {
        out.value = pairing_closed_form(gamma);
        out.method = "closed-form-pairing";
    } else if (measure.kind == MeasureKind::preferred || d == (gamma + 1) / 3) {
        out.value = hf_limit_bounded(gamma);
        out.method = "closed-form-preferred";
    } else if (in_decreasing_regime(gamma, d)) {
        out.value = sub_norm({gamma, d, 0}, tol);
        out.method = "decreasing-regime";
        out.argmax_k = 0;
    } else {
        SupSearchOptions options;
        options.k_max = k_max;
        return sup_search(gamma, d, tol, options);
    }
    out.value = ensure_tol(out.value, tol, "leray_norm");
    return out;
}

ScanResult monotonicity_scan(const Real& gamma_in, const Real& d_in, int k_max, double tol)
{
    const Real gamma = promote(gamma_in);
    const Real d = promote(d_in);
    require_gamma(gamma);
    if (k_max < 1) {
        throw DomainError("monotonicity_scan: k_max must be at least 1");
    }
    for (int k = 0; k <= k_max; ++k) {
        const OpenInterval iv = boundedness_interval(gamma, k);
        if (!iv.contains(d)) {
            throw UnboundedMode(outside_message(d, gamma, k, iv), k);
        }
    }
    ScanResult out;
    out.values.reserve(static_cast<std::size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) {
        out.values.push_back(symbol_value({gamma, d, k}, tol));
    }
    if (gamma == 2 && d == 1) {
        out.kind = Monotonicity::constant;
        return out;
    }
    int direction = 0;
    for (int k = 1; k <= k_max; ++k) {
        const BoundedFloat& a = out.values[static_cast<std::size_t>(k - 1)];
        const BoundedFloat& b = out.values[static_cast<std::size_t>(k)];
        const Real diff = b.value() - a.value();
        if (abs(diff) <= a.radius() + b.radius()) {
            throw Inconclusive("J(d,gamma,k) at k = " + std::to_string(k - 1) + " and " + std::to_string(k) +
                               " are not separated by their error radii");
        }
        const int step = sign_of(diff);
        if (direction == 0) {
            direction = step;
        } else if (step != direction) {
            out.kind = Monotonicity::non_monotone;
            out.witness_k = k - 1;
            return out;
        }
    }
    out.kind = direction > 0 ? Monotonicity::strictly_increasing : Monotonicity::strictly_decreasing;
    return out;
}

}  // namespace leraykit::symbol
