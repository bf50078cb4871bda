#include "exlab/empirical_lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "exlab/bound_algebra.hpp"
#include "exlab/errors.hpp"
#include "exlab/exponent_calculus.hpp"
#include "exlab/numeric.hpp"

namespace exlab::empirical {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::uint64_t icbrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(n)));
    while (r * r * r > n) --r;
    while ((r + 1) * (r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// sum_{a b <= y} chi_a(a) chi_b(b) by the two-fold hyperbola method.
std::int64_t pair_sum(const RealCharacter &ca, const RealCharacter &cb, std::uint64_t y) {
    if (y == 0) return 0;
    const std::uint64_t s = isqrt(y);
    std::int64_t total = 0;
    for (std::uint64_t a = 1; a <= s; ++a) {
        if (const int c = ca(a)) total += c * cb.partial_sum(y / a);
        if (const int c = cb(a)) total += c * ca.partial_sum(y / a);
    }
    return total - ca.partial_sum(s) * cb.partial_sum(s);
}

} // namespace

std::int64_t triple_sum(const RealCharacter &chi1, const RealCharacter &chi2, const RealCharacter &chi3,
                        std::uint64_t x) {
    if (x == 0) return 0;
    // Every admissible triple has some coordinate <= c = floor(x^(1/3)); inclusion-exclusion
    // over the events {n_i <= c}.
    const std::uint64_t c = icbrt(x);
    const std::array<const RealCharacter *, 3> chi{&chi1, &chi2, &chi3};

    std::int64_t singles = 0;
    for (int i = 0; i < 3; ++i) {
        const auto &other1 = *chi[(i + 1) % 3];
        const auto &other2 = *chi[(i + 2) % 3];
        for (std::uint64_t n = 1; n <= c; ++n)
            if (const int v = (*chi[i])(n)) singles += v * pair_sum(other1, other2, x / n);
    }

    std::int64_t pairs = 0;
    for (int i = 0; i < 3; ++i) {
        const auto &ci = *chi[i];
        const auto &cj = *chi[(i + 1) % 3];
        const auto &rest = *chi[(i + 2) % 3];
        for (std::uint64_t a = 1; a <= c; ++a) {
            const int va = ci(a);
            if (va == 0) continue;
            for (std::uint64_t b = 1; b <= c; ++b)
                if (const int vb = cj(b)) pairs += va * vb * rest.partial_sum(x / (a * b));
        }
    }

    const std::int64_t triples = chi1.partial_sum(c) * chi2.partial_sum(c) * chi3.partial_sum(c);
    return singles - pairs + triples;
}

std::int64_t triple_sum_naive(const RealCharacter &chi1, const RealCharacter &chi2, const RealCharacter &chi3,
                              std::uint64_t x) {
    if (x > 10000000) throw RangeError("naive enumeration is limited to x <= 1e7");
    std::int64_t s = 0;
    for (std::uint64_t i = 1; i <= x; ++i) {
        const int a = chi1(i);
        if (a == 0) continue;
        for (std::uint64_t j = 1; i * j <= x; ++j) {
            const int b = chi2(j);
            if (b == 0) continue;
            for (std::uint64_t k = 1; i * j * k <= x; ++k) s += a * b * chi3(k);
        }
    }
    return s;
}

DeltaSample triple_delta(const RealCharacter &chi1, const RealCharacter &chi2, const RealCharacter &chi3, double x,
                         double cap) {
    if (!(x >= 1.0)) throw DomainError("triple_delta needs x >= 1");
    if (x > cap)
        throw RangeError("x = " + format_sig12(x) + " exceeds the brute-force cap " + format_sig12(cap) +
                         " (override with --cap)");
    DeltaSample s;
    s.x = x;
    s.d1 = chi1.discriminant();
    s.d2 = chi2.discriminant();
    s.d3 = chi3.discriminant();
    s.raw_sum = triple_sum(chi1, chi2, chi3, static_cast<std::uint64_t>(std::floor(x)));
    const std::array<RealCharacter, 3> factors{chi1, chi2, chi3};
    s.residue = characters::residue_main_term(characters::ResiduePattern::from(factors), x);
    s.delta = static_cast<double>(s.raw_sum) - s.residue;

    static const bounds::BoundExpr final_bound = bounds::run_derivation().final;
    const double D = static_cast<double>(chi1.conductor() * chi2.conductor() * chi3.conductor());
    const double dmax = static_cast<double>(std::max({chi1.conductor(), chi2.conductor(), chi3.conductor()}));
    s.bound_value = bounds::evaluate(final_bound, {{bounds::sym::D, D}, {bounds::sym::Dmax, dmax}, {bounds::sym::x, x}});
    return s;
}

namespace {

std::complex<double> exp_sum_signed(std::int64_t n1, std::int64_t n2, std::int64_t D3,
                                    std::pair<std::int64_t, std::int64_t> range, double x, double D, std::int64_t m,
                                    int sign) {
    CompensatedComplexSum sum;
    const long double scale = static_cast<long double>(n1) * n2 * x / D;
    for (std::int64_t n3 = range.first; n3 <= range.second; ++n3) {
        const long double main = 3.0L * std::cbrt(scale * n3);
        const long double frac_main = main - std::floor(main);
        std::int64_t r = static_cast<std::int64_t>((static_cast<__int128>(m) * n3) % D3);
        if (r < 0) r += D3;
        const long double frac_add = static_cast<long double>(sign * r) / D3;
        const double phase = static_cast<double>(2.0L * static_cast<long double>(kPi) * (frac_main + frac_add));
        sum.add({std::cos(phase), std::sin(phase)});
    }
    return sum.value();
}

} // namespace

std::complex<double> exp_sum(std::int64_t n1, std::int64_t n2, const RealCharacter &chi3,
                             std::pair<std::int64_t, std::int64_t> n3_range, double x, double D, std::int64_t m,
                             SignChoice sign) {
    if (n3_range.first < 1 || n3_range.second < n3_range.first) throw DomainError("exp_sum needs a nonempty range of n3 >= 1");
    if (n1 < 1 || n2 < 1 || !(x > 0.0) || !(D > 0.0)) throw DomainError("exp_sum parameters must be positive");
    const auto D3 = static_cast<std::int64_t>(chi3.conductor());
    if (sign == SignChoice::plus) return exp_sum_signed(n1, n2, D3, n3_range, x, D, m, +1);
    if (sign == SignChoice::minus) return exp_sum_signed(n1, n2, D3, n3_range, x, D, m, -1);
    const auto p = exp_sum_signed(n1, n2, D3, n3_range, x, D, m, +1);
    const auto q = exp_sum_signed(n1, n2, D3, n3_range, x, D, m, -1);
    return std::abs(p) >= std::abs(q) ? p : q;
}

double derivative_test_bound(std::int64_t n1, std::int64_t n2, std::pair<std::int64_t, std::int64_t> n3_range,
                             double x, double D, double eps) {
    static const exponents::ExponentTuple order5 = exponents::derive_tuple(5);
    const double M = static_cast<double>(n3_range.second - n3_range.first + 1);
    const double mid = 0.5 * static_cast<double>(n3_range.first + n3_range.second);
    const double T = std::cbrt(static_cast<double>(n1) * static_cast<double>(n2) * mid * x / D);
    return exponents::bound_eval(order5, M, T, eps);
}

SweepReport derivative_test_sweep(std::int64_t n1, std::int64_t n2, const RealCharacter &chi3, double x, double D,
                                  std::int64_t m, int points, std::int64_t max_length) {
    if (points < 1 || max_length < 16) throw DomainError("sweep needs points >= 1 and max_length >= 16");
    SweepReport rep;
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        const auto L = static_cast<std::int64_t>(std::llround(16.0 * std::pow(static_cast<double>(max_length) / 16.0, t)));
        SweepPoint p{L, 2 * L, 0.0, 0.0};
        p.modulus = std::abs(exp_sum(n1, n2, chi3, {p.lo, p.hi}, x, D, m));
        p.bound = derivative_test_bound(n1, n2, {p.lo, p.hi}, x, D);
        rep.fitted_constant = std::max(rep.fitted_constant, p.modulus / p.bound);
        rep.points.push_back(p);
    }
    return rep;
}

Fit exponent_fit(const std::vector<std::pair<double, double>> &samples) {
    if (samples.size() < 3) throw ValidationError("exponent fit needs at least 3 samples");
    std::vector<double> lx;
    std::vector<double> ly;
    for (const auto &[size, magnitude] : samples) {
        if (!(size > 0.0) || !(magnitude > 0.0)) throw ValidationError("exponent fit needs positive samples");
        lx.push_back(std::log(size));
        ly.push_back(std::log(magnitude));
    }
    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx <= 1e-300) throw DomainError("exponent fit is degenerate: all sizes are equal");
    Fit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy <= 1e-300 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

BoundCheckReport bound_check(const std::vector<DeltaSample> &samples) {
    if (samples.empty()) throw DomainError("bound_check needs at least one sample");
    BoundCheckReport rep;
    std::vector<std::pair<double, double>> trend;
    for (const auto &s : samples) {
        const double r = std::abs(s.delta) / s.bound_value;
        rep.ratios.push_back(r);
        rep.max_ratio = std::max(rep.max_ratio, r);
        if (r > 0.0) trend.emplace_back(s.x, r);
    }
    const bool distinct = std::any_of(trend.begin(), trend.end(),
                                      [&](const auto &p) { return p.first != trend.front().first; });
    if (trend.size() >= 3 && distinct) {
        rep.trend_slope = exponent_fit(trend).slope;
        rep.growing = *rep.trend_slope > kTrendThreshold;
    }
    return rep;
}

} // namespace exlab::empirical
