#include "leraykit/real.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>

#include "leraykit/errors.hpp"

namespace leraykit {

namespace {

unsigned digits10_for_bits(unsigned bits)
{
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120));
}

std::once_flag g_init;

void ensure_initialized()
{
    std::call_once(g_init, [] {
        Real::default_precision(digits10_for_bits(kDefaultPrecisionBits));
        if (const char* env = std::getenv("LERAYKIT_PRECISION_BITS")) {
            char* end = nullptr;
            const long bits = std::strtol(env, &end, 10);
            if (end != env && *end == '\0' && bits >= static_cast<long>(kMinPrecisionBits) && bits <= 100000) {
                Real::default_precision(digits10_for_bits(static_cast<unsigned>(bits)));
            }
        }
    });
}

// Set the default before any Real is constructed in main, so that no value
// silently carries the backend's built-in precision.
[[maybe_unused]] const bool g_static_init = (ensure_initialized(), true);

}  // namespace

Real promote(const Real& x)
{
    ensure_initialized();
    Real out;
    mpfr_set(out.backend().data(), x.backend().data(), MPFR_RNDN);
    return out;
}

void init_precision_from_env()
{
    ensure_initialized();
    if (const char* env = std::getenv("LERAYKIT_PRECISION_BITS")) {
        char* end = nullptr;
        const long bits = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || bits < static_cast<long>(kMinPrecisionBits) || bits > 100000) {
            throw DomainError("LERAYKIT_PRECISION_BITS must be an integer in [80, 100000], got '" +
                              std::string(env) + "'");
        }
    }
}

void set_working_precision_bits(unsigned bits)
{
    ensure_initialized();
    if (bits < kMinPrecisionBits) {
        throw DomainError("working precision must be at least 80 bits");
    }
    Real::default_precision(digits10_for_bits(bits));
}

unsigned working_precision_bits()
{
    ensure_initialized();
    Real probe;
    return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

Real unit_roundoff()
{
    ensure_initialized();
    return ldexp(Real(1), 1 - static_cast<int>(working_precision_bits()));
}

Real to_real(const exact::BigRational& q)
{
    ensure_initialized();
    Real out;
    mpfr_set_q(out.backend().data(), q.get().get_mpq_t(), MPFR_RNDN);
    return out;
}

Real to_real(double x)
{
    ensure_initialized();
    return Real(x);
}

Real real_pi()
{
    ensure_initialized();
    Real pi;
    mpfr_const_pi(pi.backend().data(), MPFR_RNDN);
    return pi;
}

std::string format_real(const Real& x, int digits)
{
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

}  // namespace leraykit
