#pragma once

#include <optional>
#include <string>
#include <vector>

#include "leraykit/bounded_float.hpp"
#include "leraykit/real.hpp"

namespace leraykit::symbol {

// (gamma, d, k): one value of the symbol function J(d, gamma, k).
struct SymbolQuery {
    Real gamma;
    Real d;
    int k = 0;
};

// Open interval (lower, upper).
struct OpenInterval {
    Real lower;
    Real upper;
    bool contains(const Real& x) const { return lower < x && x < upper; }
    std::string to_string() const;
};

enum class MeasureKind { generic, pairing, preferred, dual_preferred, lebesgue };

struct MeasureTag {
    MeasureKind kind = MeasureKind::generic;
    Real d{0};  // only read for generic

    static MeasureTag generic(Real d) { return {MeasureKind::generic, std::move(d)}; }
    static MeasureTag pairing() { return {MeasureKind::pairing, Real(0)}; }
    static MeasureTag preferred() { return {MeasureKind::preferred, Real(0)}; }
    static MeasureTag dual_preferred() { return {MeasureKind::dual_preferred, Real(0)}; }
    static MeasureTag lebesgue() { return {MeasureKind::lebesgue, Real(0)}; }
    // "pairing", "preferred", "dual-preferred" (or dual_preferred), "lebesgue".
    static MeasureTag parse(const std::string& name);

    // Measure exponent d for the given gamma.
    Real exponent(const Real& gamma) const;
    std::string name() const;
};

// d = a(gamma - 2) + 1, q = 1 - a.
struct HolderReparam {
    Real a;
    Real q;

    static HolderReparam from_exponent(const Real& gamma, const Real& d);
    static HolderReparam from_a(Real a);
    Real exponent(const Real& gamma) const;
    // J(delta_a(gamma), gamma, k) finite for every k iff |q| < gamma/|gamma - 2|.
    bool finite_for_all_modes(const Real& gamma) const;
};

struct HolderPartner {
    Real gamma_star;
    Real d_prime;
};

enum class Monotonicity { strictly_decreasing, strictly_increasing, non_monotone, constant };

std::string to_string(Monotonicity m);

struct ScanResult {
    Monotonicity kind = Monotonicity::constant;
    // First turning index for non_monotone, otherwise -1.
    int witness_k = -1;
    std::vector<BoundedFloat> values;  // J(d, gamma, k), k = 0..k_max
};

struct SupSearchOptions {
    int k_max = 200;
    // Stop once the last `window` gaps to the limit are one-sided and shrinking.
    bool early_stop = true;
    int window = 20;
};

struct NormResult {
    BoundedFloat value;
    // closed-form-gamma2, closed-form-lebesgue, closed-form-pairing, closed-form-preferred,
    // decreasing-regime or sup-search.
    std::string method;
    Real d;
    // sup-search only: index of the largest head value, or -1 when the limit dominates.
    int argmax_k = -1;
    int cutoff_k = -1;
    bool converged = true;
};

// Radius <= tol * max(1, J).
BoundedFloat symbol_value(const SymbolQuery& query, double tol = kDefaultTolerance);
// sqrt(J): norm of the k-th sub-operator.
BoundedFloat sub_norm(const SymbolQuery& query, double tol = kDefaultTolerance);

OpenInterval boundedness_interval(const Real& gamma, int k);
Real holder_conjugate(const Real& gamma);
HolderPartner holder_partner(const Real& gamma, const Real& d);

Real hf_limit(const Real& gamma);
double hf_limit(double gamma);

NormResult leray_norm(const Real& gamma, const MeasureTag& measure, double tol = kDefaultTolerance,
                      int k_max = 200);
// Supremum of sqrt(J(d, gamma, k)) over k with the high-frequency limit as the tail bracket.
NormResult sup_search(const Real& gamma, const Real& d, double tol = kDefaultTolerance,
                      const SupSearchOptions& options = {});

// True when k -> J(d, gamma, k) is strictly decreasing by the known regimes.
bool in_decreasing_regime(const Real& gamma, const Real& d);

ScanResult monotonicity_scan(const Real& gamma, const Real& d, int k_max, double tol = kDefaultTolerance);

}  // namespace leraykit::symbol
