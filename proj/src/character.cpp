#include "exlab/character.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>

#include "exlab/errors.hpp"
#include "exlab/numeric.hpp"

namespace exlab::characters {

namespace {

// (a | 2) indexed by a mod 8.
constexpr std::array<int, 8> kTwoTable{0, 1, 0, -1, 0, -1, 0, 1};

std::int64_t mod(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

bool squarefree(std::uint64_t n) {
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0) return false;
        while (n % p == 0) n /= p;
    }
    return true;
}

} // namespace

int kronecker(std::int64_t a, std::int64_t n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0) return 0;

    int v = __builtin_ctzll(static_cast<unsigned long long>(n));
    n >>= v;
    int k = (v & 1) ? kTwoTable[static_cast<std::size_t>(a & 7)] : 1;
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    // n is odd and positive from here on.
    while (a != 0) {
        v = __builtin_ctzll(static_cast<unsigned long long>(a));
        a >>= v;
        if (v & 1) k *= kTwoTable[static_cast<std::size_t>(n & 7)];
        if (a & n & 2) k = -k;
        const std::int64_t r = a < 0 ? -a : a;
        a = n % r;
        n = r;
    }
    return n > 1 ? 0 : k;
}

std::string fundamental_discriminant_problem(std::int64_t d) {
    if (d == 0) return "0 is not a discriminant";
    if (d == 1) return {};
    const std::uint64_t abs_d = static_cast<std::uint64_t>(d < 0 ? -d : d);
    switch (mod(d, 4)) {
    case 1:
        return squarefree(abs_d) ? std::string{} : std::to_string(d) + " = 1 mod 4 but is not squarefree";
    case 0: {
        const std::int64_t m = d / 4;
        const std::int64_t r = mod(m, 4);
        if (r != 2 && r != 3)
            return std::to_string(d) + " = 4m with m = " + std::to_string(m) + " = " + std::to_string(r) +
                   " mod 4 (need 2 or 3)";
        if (!squarefree(abs_d / 4)) return std::to_string(d) + " = 4m with m = " + std::to_string(m) + " not squarefree";
        return {};
    }
    default:
        return std::to_string(d) + " = " + std::to_string(mod(d, 4)) + " mod 4 (need 0 or 1)";
    }
}

std::vector<std::int64_t> fundamental_discriminants(std::int64_t max_abs) {
    std::vector<std::int64_t> out;
    for (std::int64_t a = 2; a <= max_abs; ++a)
        for (std::int64_t d : {-a, a})
            if (fundamental_discriminant_problem(d).empty()) out.push_back(d);
    return out;
}

RealCharacter RealCharacter::from_discriminant(std::int64_t d) {
    if (auto problem = fundamental_discriminant_problem(d); !problem.empty())
        throw ValidationError("not a fundamental discriminant: " + problem);
    RealCharacter chi;
    chi.disc_ = d;
    const std::uint64_t conductor = static_cast<std::uint64_t>(d < 0 ? -d : d);
    chi.period_.resize(conductor);
    chi.prefix_.resize(conductor);
    std::int32_t running = 0;
    for (std::uint64_t n = 0; n < conductor; ++n) {
        chi.period_[n] = static_cast<std::int8_t>(d == 1 ? 1 : kronecker(d, static_cast<std::int64_t>(n)));
        if (n > 0) running += chi.period_[n];
        chi.prefix_[n] = running;
    }
    return chi;
}

int RealCharacter::value(std::int64_t n) const {
    if (n >= 0) return (*this)(static_cast<std::uint64_t>(n));
    const int at_minus_one = disc_ < 0 ? -1 : 1;
    return at_minus_one * (*this)(static_cast<std::uint64_t>(-n));
}

std::int64_t RealCharacter::partial_sum(std::uint64_t t) const {
    if (is_trivial()) return static_cast<std::int64_t>(t);
    // A full period sums to zero for nonprincipal characters.
    return prefix_[t % period_.size()];
}

std::complex<double> gauss_sum(std::int64_t m, const RealCharacter &chi) {
    const std::int64_t D = static_cast<std::int64_t>(chi.conductor());
    const std::int64_t mm = mod(m, D);
    CompensatedComplexSum sum;
    for (std::int64_t k = 1; k <= D; ++k) {
        const int c = chi(static_cast<std::uint64_t>(k));
        if (c == 0) continue;
        const std::int64_t r = static_cast<std::int64_t>((static_cast<__int128>(k) * mm) % D);
        const double angle = 2.0 * kPi * static_cast<double>(r) / static_cast<double>(D);
        sum.add(static_cast<double>(c) * std::complex<double>(std::cos(angle), std::sin(angle)));
    }
    return sum.value();
}

double l_one(const RealCharacter &chi) {
    if (chi.is_trivial()) throw DomainError("L(1, chi) is a pole for the trivial character");
    const std::uint64_t D = chi.conductor();
    if (chi.parity() == Parity::odd) {
        std::int64_t weighted = 0;
        for (std::uint64_t a = 1; a < D; ++a) weighted += chi(a) * static_cast<std::int64_t>(a);
        return -kPi * static_cast<double>(weighted) / std::pow(static_cast<double>(D), 1.5);
    }
    CompensatedSum<double> sum;
    for (std::uint64_t a = 1; a < D; ++a) {
        const int c = chi(a);
        if (c != 0) sum.add(c * std::log(std::sin(kPi * static_cast<double>(a) / static_cast<double>(D))));
    }
    return -sum.value() / std::sqrt(static_cast<double>(D));
}

namespace {

/// Derivatives of the summand f needed by the Euler-Maclaurin tail, plus a
/// regularized antiderivative (only its chi-weighted sum is meaningful).
struct Summand {
    std::function<double(double)> f;
    std::function<double(double)> antiderivative;
    std::function<double(double)> d1;
    std::function<double(double)> d3;
    std::function<double(double)> d5;
};

/// sum_{n > N} chi(n) f(n) for N a multiple of the conductor: each residue class
/// N + a + jD is summed over j >= 0 by Euler-Maclaurin; the divergent integral
/// parts cancel because chi sums to zero over a period.
double twisted_tail(const RealCharacter &chi, std::uint64_t N, const Summand &s) {
    const double D = static_cast<double>(chi.conductor());
    CompensatedSum<double> tail;
    for (std::uint64_t a = 1; a <= chi.conductor(); ++a) {
        const int c = chi(a);
        if (c == 0) continue;
        const double t = static_cast<double>(N + a);
        const double em = -s.antiderivative(t) / D + s.f(t) / 2.0 - D / 12.0 * s.d1(t) +
                          D * D * D / 720.0 * s.d3(t) - std::pow(D, 5) / 30240.0 * s.d5(t);
        tail.add(c * em);
    }
    return tail.value();
}

std::uint64_t round_up(std::uint64_t n, std::uint64_t period) { return (n + period - 1) / period * period; }

} // namespace

double l_series(const RealCharacter &chi, double s, std::uint64_t periods) {
    if (chi.is_trivial()) throw DomainError("L(s, chi) series needs a nonprincipal character");
    if (!(s > 0.0)) throw DomainError("L(s, chi) series converges only for s > 0");
    const std::uint64_t N = std::max<std::uint64_t>(periods, 1) * chi.conductor();
    CompensatedSum<double> head;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const int c = chi(n);
        if (c != 0) head.add(c * std::pow(static_cast<double>(n), -s));
    }
    const double one_minus_s = 1.0 - s;
    Summand term{
        [s](double t) { return std::pow(t, -s); },
        [one_minus_s](double t) {
            const double lt = std::log(t);
            return std::abs(one_minus_s) < 1e-300 ? lt : std::expm1(one_minus_s * lt) / one_minus_s;
        },
        [s](double t) { return -s * std::pow(t, -s - 1); },
        [s](double t) { return -s * (s + 1) * (s + 2) * std::pow(t, -s - 3); },
        [s](double t) { return -s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * std::pow(t, -s - 5); },
    };
    return head.value() + twisted_tail(chi, N, term);
}

double l_one_derivative(const RealCharacter &chi, std::uint64_t cutoff) {
    if (chi.is_trivial()) throw DomainError("L'(1, chi) is undefined at the pole of zeta");
    const std::uint64_t N = round_up(std::max<std::uint64_t>(cutoff, 1), chi.conductor());
    CompensatedSum<double> head;
    for (std::uint64_t n = 2; n <= N; ++n) {
        const int c = chi(n);
        if (c != 0) {
            const double x = static_cast<double>(n);
            head.add(c * std::log(x) / x);
        }
    }
    Summand term{
        [](double t) { return std::log(t) / t; },
        [](double t) { return 0.5 * std::log(t) * std::log(t); },
        [](double t) { return (1.0 - std::log(t)) / (t * t); },
        [](double t) { return (11.0 - 6.0 * std::log(t)) / std::pow(t, 4); },
        [](double t) { return (274.0 - 120.0 * std::log(t)) / std::pow(t, 6); },
    };
    return -(head.value() + twisted_tail(chi, N, term));
}

double stieltjes_gamma1_euler_maclaurin(std::uint64_t n) {
    CompensatedSum<double> sum;
    for (std::uint64_t k = 2; k <= n; ++k) {
        const double x = static_cast<double>(k);
        sum.add(std::log(x) / x);
    }
    const double t = static_cast<double>(n);
    const double lt = std::log(t);
    const double f = lt / t;
    const double f1 = (1.0 - lt) / (t * t);
    const double f3 = (11.0 - 6.0 * lt) / std::pow(t, 4);
    const double f5 = (274.0 - 120.0 * lt) / std::pow(t, 6);
    return sum.value() - 0.5 * lt * lt - f / 2.0 - f1 / 12.0 + f3 / 720.0 - f5 / 30240.0;
}

ResiduePattern ResiduePattern::from(std::span<const RealCharacter> factors) {
    if (factors.empty() || factors.size() > 3)
        throw ValidationError("residue pattern needs 1 to 3 L-factors, got " + std::to_string(factors.size()));
    ResiduePattern p;
    for (const auto &chi : factors) {
        if (chi.is_trivial())
            ++p.zeta_factors;
        else
            p.characters.push_back(chi);
    }
    return p;
}

namespace {

/// Truncated Laurent series in u = s - 1, coefficients for u^-3 .. u^2.
struct Laurent {
    static constexpr int kLow = -3;
    static constexpr int kHigh = 2;
    std::array<double, kHigh - kLow + 1> c{};
    std::array<bool, kHigh - kLow + 1> known{};

    double &at(int k) { return c[static_cast<std::size_t>(k - kLow)]; }
    double get(int k) const { return c[static_cast<std::size_t>(k - kLow)]; }
    bool is_known(int k) const { return k < kLow || known[static_cast<std::size_t>(k - kLow)]; }
    void set(int k, double v) {
        at(k) = v;
        known[static_cast<std::size_t>(k - kLow)] = true;
    }
    void set_zero_below(int k) {
        for (int j = kLow; j < k; ++j) set(j, 0.0);
    }
};

Laurent multiply(const Laurent &a, const Laurent &b) {
    Laurent out;
    for (int k = Laurent::kLow; k <= Laurent::kHigh; ++k) {
        double v = 0.0;
        bool ok = true;
        for (int i = Laurent::kLow; i <= Laurent::kHigh; ++i) {
            const int j = k - i;
            if (j < Laurent::kLow || j > Laurent::kHigh) {
                // Coefficients below kLow are zero by construction; above kHigh unknown.
                if (j > Laurent::kHigh && a.get(i) != 0.0) ok = false;
                if (j > Laurent::kHigh && !a.is_known(i)) ok = false;
                continue;
            }
            const bool zero_a = a.is_known(i) && a.get(i) == 0.0;
            const bool zero_b = b.is_known(j) && b.get(j) == 0.0;
            if (zero_a || zero_b) continue;
            if (!a.is_known(i) || !b.is_known(j)) {
                ok = false;
                continue;
            }
            v += a.get(i) * b.get(j);
        }
        if (ok) out.set(k, v);
    }
    return out;
}

} // namespace

double residue_main_term(const ResiduePattern &pattern, double x) {
    if (pattern.factor_count() < 1 || pattern.factor_count() > 3)
        throw ValidationError("residue pattern needs 1 to 3 L-factors");
    if (x < 1.0) throw DomainError("residue main term needs x >= 1");
    if (pattern.zeta_factors == 0) return 0.0;

    Laurent product;
    product.set_zero_below(0);
    product.set(0, 1.0);
    product.set(1, 0.0);
    product.set(2, 0.0);

    Laurent zeta;
    zeta.set_zero_below(-1);
    zeta.set(-1, 1.0);
    zeta.set(0, kEulerGamma);
    zeta.set(1, -kStieltjesGamma1);
    for (int i = 0; i < pattern.zeta_factors; ++i) product = multiply(product, zeta);

    for (const auto &chi : pattern.characters) {
        Laurent l;
        l.set_zero_below(0);
        l.set(0, l_one(chi));
        l.set(1, l_one_derivative(chi));
        product = multiply(product, l);
    }

    const double lx = std::log(x);
    Laurent kernel; // x^s / s = x (1 + (L-1) u + (L^2/2 - L + 1) u^2 + ...)
    kernel.set_zero_below(0);
    kernel.set(0, x);
    kernel.set(1, x * (lx - 1.0));
    kernel.set(2, x * (0.5 * lx * lx - lx + 1.0));
    product = multiply(product, kernel);

    if (!product.is_known(-1)) throw Error("residue expansion truncated too early");
    return product.get(-1);
}

} // namespace exlab::characters
