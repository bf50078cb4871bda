#pragma once

#include <stdexcept>
#include <string>

namespace exlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (r < 4, D = 1 for L(1, chi), ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed user input: non-fundamental discriminant, bad fraction string, unknown key.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Query past the extent of a precomputed table or a configured cap.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A symbolic rewrite that has no answer (cyclic substitution, equal exponents in balance).
class AlgebraError : public Error {
public:
    using Error::Error;
};

/// Two bound terms that cannot be ordered under the given assumptions.
class IncomparableError : public AlgebraError {
public:
    IncomparableError(std::string lhs, std::string rhs)
        : AlgebraError("incomparable terms: " + lhs + " vs " + rhs),
          lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}

    const std::string &lhs() const { return lhs_; }
    const std::string &rhs() const { return rhs_; }

private:
    std::string lhs_;
    std::string rhs_;
};

/// A scripted derivation step disagreed with its reference value.
class RegressionError : public Error {
public:
    using Error::Error;
};

} // namespace exlab
