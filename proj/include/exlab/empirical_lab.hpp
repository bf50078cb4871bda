#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "exlab/character.hpp"

/// Desk-scale experiments: the triple-character remainder Delta, the inner
/// exponential sums bounded by the order-5 derivative test, and log-log fits.
/// Everything here reports numbers; nothing asserts an asymptotic bound.
namespace exlab::empirical {

using characters::RealCharacter;

inline constexpr double kDefaultDeltaCap = 1e9;

struct DeltaSample {
    double x = 0.0;
    std::int64_t d1 = 1;
    std::int64_t d2 = 1;
    std::int64_t d3 = 1;
    std::int64_t raw_sum = 0; ///< sum_{n1 n2 n3 <= x} chi1(n1) chi2(n2) chi3(n3), exact
    double residue = 0.0;     ///< Res_{s=1} L1 L2 L3 x^s / s
    double delta = 0.0;       ///< raw_sum - residue
    double bound_value = 0.0; ///< the four final bound monomials at (D1 D2 D3, Dmax, x), eps = 0
};

/// Exact character-weighted count of triples with n1 n2 n3 <= floor(x) by the
/// three-fold hyperbola method in O(x^(2/3)).
std::int64_t triple_sum(const RealCharacter &chi1, const RealCharacter &chi2, const RealCharacter &chi3,
                        std::uint64_t x);

/// Direct enumeration of all triples, O(x log^2 x). Reference for small x only;
/// RangeError above 10^7.
std::int64_t triple_sum_naive(const RealCharacter &chi1, const RealCharacter &chi2, const RealCharacter &chi3,
                              std::uint64_t x);

/// Throws DomainError for x < 1 and RangeError above the cap.
DeltaSample triple_delta(const RealCharacter &chi1, const RealCharacter &chi2, const RealCharacter &chi3, double x,
                         double cap = kDefaultDeltaCap);

/// Sign in front of the additive m n3 / D3 phase.
enum class SignChoice { plus, minus, max_modulus };

/// sum_{lo <= n3 <= hi} e(3 (n1 n2 n3 x / D)^(1/3) +- m n3 / D3), D3 the conductor of chi3.
/// max_modulus evaluates both signs and returns the larger sum.
std::complex<double> exp_sum(std::int64_t n1, std::int64_t n2, const RealCharacter &chi3,
                             std::pair<std::int64_t, std::int64_t> n3_range, double x, double D, std::int64_t m,
                             SignChoice sign = SignChoice::max_modulus);

/// The order-5 derivative-test bound for exp_sum over a range:
/// M = range length, T = (n1 n2 mid x / D)^(1/3).
double derivative_test_bound(std::int64_t n1, std::int64_t n2, std::pair<std::int64_t, std::int64_t> n3_range,
                             double x, double D, double eps = 0.0);

struct SweepPoint {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    double modulus = 0.0;
    double bound = 0.0;
};

struct SweepReport {
    std::vector<SweepPoint> points;
    double fitted_constant = 0.0; ///< max modulus / bound
};

/// Ranges [L, 2L] for `points` geometric L in [16, max_length]; report only.
SweepReport derivative_test_sweep(std::int64_t n1, std::int64_t n2, const RealCharacter &chi3, double x, double D,
                                  std::int64_t m, int points = 100, std::int64_t max_length = 4096);

struct Fit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least squares of log magnitude on log size. Needs >= 3 positive samples with
/// at least two distinct sizes.
Fit exponent_fit(const std::vector<std::pair<double, double>> &samples);

struct BoundCheckReport {
    std::vector<double> ratios;           ///< |delta| / bound_value per sample
    double max_ratio = 0.0;               ///< empirical implied constant
    std::optional<double> trend_slope;    ///< log-log slope of ratio against x
    bool growing = false;                 ///< trend_slope > kTrendThreshold
};

inline constexpr double kTrendThreshold = 0.05;

/// Ratios of |delta| to the bound and an upward-trend flag. Never fails on data;
/// throws DomainError on an empty sample list.
BoundCheckReport bound_check(const std::vector<DeltaSample> &samples);

} // namespace exlab::empirical
