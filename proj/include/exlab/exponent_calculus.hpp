#pragma once

#include <string>

#include "exlab/rational.hpp"

/// Exponent tuples of higher-order derivative tests for exponential sums.
///
/// An order-r tuple (a, b, xi, eta, alpha, gamma, delta) certifies
///
///     sum_{m in I} e(F(m)) << M^a T^b + M^xi T^eta + M^alpha + M^gamma T^-delta
///
/// whenever F^(j) ~ T M^-j for j = r-2, r-1, r. Order 4 is seeded with fixed
/// constants; every higher order follows from one exact recursion step.
namespace exlab::exponents {

/// Which exponents carry an implicit "+eps". Arithmetic is done at eps = 0.
struct EpsFlags {
    bool b = false;
    bool eta = false;

    friend bool operator==(const EpsFlags &, const EpsFlags &) = default;
};

struct ExponentTuple {
    int order = 4;
    Rational a;
    Rational b;
    Rational xi;
    Rational eta;
    Rational alpha;
    Rational gamma;
    Rational delta;
    EpsFlags eps_on;

    friend bool operator==(const ExponentTuple &, const ExponentTuple &) = default;
};

/// Largest order derive_tuple accepts.
inline constexpr int kMaxOrder = 10000;

/// The order-4 seed: (1/2, 13/84+eps, 0, 31/84+eps, 334/411, 1, 1/2).
ExponentTuple base_tuple();

/// Order j tuple from the order j-1 tuple. Every formula divides by 2(b+1).
ExponentTuple step(const ExponentTuple &t);

/// base_tuple() stepped r-4 times. Throws DomainError for r < 4 or r > kMaxOrder.
ExponentTuple derive_tuple(int r);

/// Numeric value of the four-term bound with eps added to the flagged T-exponents.
double bound_eval(const ExponentTuple &t, double M, double T, double eps);

/// Multi-line "name = p/q" listing with eps markers.
std::string to_text(const ExponentTuple &t);

} // namespace exlab::exponents
