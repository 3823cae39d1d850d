#pragma once

#include <stdexcept>
#include <string>

namespace leraykit {

// Base of every error raised by the library; the CLI maps these onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of the function (r <= 0, gamma <= 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Requested tolerance is below what the working precision can certify.
class ToleranceUnreachable : public Error {
public:
    using Error::Error;
};

// d lies outside I_k(gamma): the k-th sub-operator is unbounded.
class UnboundedMode : public Error {
public:
    UnboundedMode(const std::string& what, int k) : Error(what), k_(k) {}
    int mode() const noexcept { return k_; }

private:
    int k_;
};

// d lies outside I_0(gamma): the full transform is unbounded.
class Unbounded : public Error {
public:
    using Error::Error;
};

// gamma == 2, where the Hoelder partner is not unique.
class DegenerateGamma : public Error {
public:
    using Error::Error;
};

class ZeroPolynomial : public Error {
public:
    using Error::Error;
};

// Adjacent values could not be separated by their error radii.
class Inconclusive : public Error {
public:
    using Error::Error;
};

// Two independent evaluation routes disagree beyond tolerance.
class CrossCheckFailure : public Error {
public:
    using Error::Error;
};

class CertificateFailure : public Error {
public:
    using Error::Error;
};

// Infinite Euler-Maclaurin range requested without tail information.
class TailUnbounded : public Error {
public:
    using Error::Error;
};

}  // namespace leraykit
