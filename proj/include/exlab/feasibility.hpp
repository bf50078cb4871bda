#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "exlab/rational.hpp"

/// The parameter condition linking the short-interval exponent theta and the
/// power r in x >= D^r:
///
///     lead / r + c0 + c1 / r <= theta,   lead = 5/2, c0 = 492293/10^6, c1 = 507707/10^6.
namespace exlab::feasibility {

struct FeasibilityProblem {
    Rational theta;
    std::int64_t r = 1;
    Rational c0{492293, 1000000};
    Rational c1{507707, 1000000};
    Rational lead{5, 2};
};

/// The admissible threshold for alpha.
inline Rational alpha_threshold() { return Rational(4923, 10000); }
inline constexpr std::int64_t kPublishedR = 433433;

/// Exact evaluation of the condition. DomainError for r < 1.
bool check(const Rational &theta, std::int64_t r);

/// Smallest r >= 1 satisfying check, or nullopt when theta <= c0.
std::optional<std::int64_t> minimal_r(const Rational &theta);

struct ClaimReport {
    bool x_large_enough = false;   ///< x >= D^r
    bool alpha_in_range = false;   ///< 4923/10000 <= alpha <= 1
    bool condition_holds = false;  ///< check(alpha, r)
    bool y_range_holds = false;    ///< D^(5/2) x^(c0 + c1/r) < x^alpha
    double log_x = 0.0;
    double log_lhs = 0.0;          ///< log of D^(5/2) x^(c0 + c1/r)
    double log_y = 0.0;            ///< alpha log x

    std::string to_text() const;
};

/// Evaluated in log space so D^r never overflows.
ClaimReport claim_report(double x, const Rational &alpha, double D, std::int64_t r);

} // namespace exlab::feasibility
