#pragma once

#include <stdexcept>
#include <string>

namespace convapprox {

/// Argument outside the mathematical domain of an operation (k = 0, p < 1, q >= 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Series whose tail is infinite, e.g. k^{-r} with r <= 1.
class DivergentTailError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter combination that an operation does not accept
/// (wrong sequence family for a condition, missing delta for p = 1, ...).
class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A theorem hypothesis required before a bound may be asserted does not hold.
class HypothesisViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical certificate (sign alternation, equioscillation) could not be established.
class CertificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace convapprox
