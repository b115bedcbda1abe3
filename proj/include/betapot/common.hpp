#pragma once
/// Shared error types and small utilities used across the library.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace betapot {

using Point = std::vector<double>;

/// Violated precondition or malformed argument (caller bug).
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Evaluation outside a function's mathematical domain.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

/// An integral or series that is provably (or detectably) divergent.
/// Carries the best finite partial estimate for diagnostics.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& msg, double partial = 0.0)
        : std::runtime_error(msg), partial_estimate(partial) {}
    double partial_estimate;
};

/// Numerical failure: bracket exhaustion, non-convergence, undefined ratio.
class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Format a double with 12 significant digits (canonical text output).
std::string format12(double x);

/// Round a double to 12 significant digits (canonical numeric output).
double round12(double x);

/// FNV-1a 64-bit hash of a byte string; used for config fingerprints.
std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace betapot
