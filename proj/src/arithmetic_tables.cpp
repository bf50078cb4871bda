#include "exlab/arithmetic_tables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "exlab/bound_algebra.hpp"
#include "exlab/errors.hpp"
#include "exlab/numeric.hpp"

namespace exlab::tables {

Function parse_function(const std::string &name) {
    static const std::array<std::pair<const char *, Function>, 11> names{{
        {"lambda", Function::lambda},
        {"nu", Function::nu},
        {"lambda_prime", Function::lambda_prime},
        {"lambda'", Function::lambda_prime},
        {"rho", Function::rho},
        {"Lambda", Function::von_mangoldt},
        {"rho_star", Function::rho_star},
        {"rho_sub", Function::rho_sub},
        {"Lambda_star", Function::von_mangoldt_star},
        {"Lambda_sub", Function::von_mangoldt_sub},
        {"von_mangoldt", Function::von_mangoldt},
    }};
    for (const auto &[n, f] : names)
        if (name == n) return f;
    throw ValidationError("unknown arithmetic function '" + name + "'");
}

std::string function_name(Function f) {
    switch (f) {
    case Function::lambda: return "lambda";
    case Function::nu: return "nu";
    case Function::lambda_prime: return "lambda_prime";
    case Function::rho: return "rho";
    case Function::von_mangoldt: return "Lambda";
    case Function::rho_star: return "rho_star";
    case Function::rho_sub: return "rho_sub";
    case Function::von_mangoldt_star: return "Lambda_star";
    case Function::von_mangoldt_sub: return "Lambda_sub";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Log combinations

void LogCombination::add(std::uint64_t prime, std::int64_t coeff) {
    if (coeff == 0) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), prime,
                               [](const auto &term, std::uint64_t p) { return term.first < p; });
    if (it != terms_.end() && it->first == prime) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    } else {
        terms_.insert(it, {prime, coeff});
    }
}

LogCombination &LogCombination::operator+=(const LogCombination &rhs) {
    add_scaled(rhs, 1);
    return *this;
}

void LogCombination::add_scaled(const LogCombination &rhs, std::int64_t scale) {
    if (scale == 0) return;
    for (const auto &[p, c] : rhs.terms_) add(p, c * scale);
}

double LogCombination::value() const {
    CompensatedSum<double> s;
    for (const auto &[p, c] : terms_) s.add(static_cast<double>(c) * std::log(static_cast<double>(p)));
    return s.value();
}

void LogAccumulator::add(const LogCombination &c, std::int64_t scale) {
    for (const auto &[p, k] : c.terms()) coeffs_[p] += k * scale;
}

double LogAccumulator::value() const {
    CompensatedSum<double> s;
    for (const auto &[p, c] : coeffs_)
        if (c != 0) s.add(static_cast<double>(c) * std::log(static_cast<double>(p)));
    return s.value();
}

bool LogAccumulator::equals(const LogAccumulator &other) const {
    auto a = coeffs_.begin();
    auto b = other.coeffs_.begin();
    while (true) {
        while (a != coeffs_.end() && a->second == 0) ++a;
        while (b != other.coeffs_.end() && b->second == 0) ++b;
        if (a == coeffs_.end() || b == other.coeffs_.end()) return a == coeffs_.end() && b == other.coeffs_.end();
        if (a->first != b->first || a->second != b->second) return false;
        ++a;
        ++b;
    }
}

LogAccumulator LogAccumulator::plus(const LogAccumulator &other) const {
    LogAccumulator out = *this;
    for (const auto &[p, c] : other.coeffs_) out.coeffs_[p] += c;
    return out;
}

// ---------------------------------------------------------------------------
// Multiplicative helpers shared by the table and the windowed counter

namespace {

/// lambda(q^g) = sum_{i=0}^{g} chi(q)^i.
std::int64_t lambda_prime_power(int chi_q, int g) {
    if (chi_q == 1) return g + 1;
    if (chi_q == 0) return 1;
    return (g % 2 == 0) ? 1 : 0;
}

/// nu(q^f): -1 - chi(q) for f = 1, chi(q) for f = 2, 0 beyond.
std::int64_t nu_prime_power(int chi_q, int f) {
    if (f == 0) return 1;
    if (f == 1) return -1 - chi_q;
    if (f == 2) return chi_q;
    return 0;
}

/// Adds nu(m) lambda'(n/m) for every cube-free m | n, routed by m <= cutoff.
void accumulate_split(const Factorization &fac, const RealCharacter &chi, std::uint64_t cutoff, LogCombination &star,
                      LogCombination &sub) {
    const std::size_t k = fac.size();
    std::array<int, 16> f{}; // exponent of each prime in m
    std::vector<int> chis(k);
    for (std::size_t i = 0; i < k; ++i) chis[i] = chi(fac[i].first);

    while (true) {
        std::int64_t nu_m = 1;
        unsigned __int128 m = 1;
        for (std::size_t i = 0; i < k && nu_m != 0; ++i) {
            nu_m *= nu_prime_power(chis[i], f[i]);
            for (int j = 0; j < f[i]; ++j) m *= fac[i].first;
        }
        if (nu_m != 0) {
            // lambda'(d), d = n/m: coefficient of log q is prod_{r != q} lambda(r^g_r) * sum_{j<g_q} lambda(q^j).
            LogCombination &target = (m <= cutoff) ? star : sub;
            for (std::size_t i = 0; i < k; ++i) {
                const int g = fac[i].second - f[i];
                if (g < 1) continue;
                std::int64_t other = 1;
                for (std::size_t r = 0; r < k && other != 0; ++r)
                    if (r != i) other *= lambda_prime_power(chis[r], fac[r].second - f[r]);
                if (other == 0) continue;
                std::int64_t partial = 0;
                for (int j = 0; j < g; ++j) partial += lambda_prime_power(chis[i], j);
                target.add(fac[i].first, nu_m * other * partial);
            }
        }
        std::size_t i = 0;
        while (i < k) {
            if (f[i] < std::min(2, fac[i].second)) {
                ++f[i];
                break;
            }
            f[i] = 0;
            ++i;
        }
        if (i == k) break;
    }
}

std::uint64_t default_cutoff(const RealCharacter &chi) { return chi.conductor() * chi.conductor(); }

} // namespace

// ---------------------------------------------------------------------------
// FunctionTable

FunctionTable FunctionTable::build(std::uint64_t limit, const RealCharacter &chi, TableOptions options) {
    if (limit < 1) throw DomainError("table limit must be >= 1");
    const std::size_t needed = (limit + 1) * bytes_per_entry();
    if (limit > std::numeric_limits<std::uint32_t>::max() || needed > options.memory_budget_bytes)
        throw RangeError("table to " + std::to_string(limit) + " needs " + std::to_string(needed >> 20) +
                         " MiB (budget " + std::to_string(options.memory_budget_bytes >> 20) +
                         " MiB); lower the limit, raise the budget, or use the segmented window counter "
                         "(psi-short) which sieves in blocks of " +
                         std::to_string(kSegmentSize) + " entries");

    FunctionTable t;
    t.limit_ = limit;
    t.chi_ = chi;
    t.cutoff_ = options.cutoff.value_or(default_cutoff(chi));
    const std::size_t size = limit + 1;

    // Smallest prime factors, linear sieve.
    t.spf_.assign(size, 0);
    std::vector<std::uint32_t> primes;
    if (size > 1) t.spf_[1] = 1;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (t.spf_[i] == 0) {
            t.spf_[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : primes) {
            const std::uint64_t ip = i * p;
            if (p > t.spf_[i] || ip > limit) break;
            t.spf_[ip] = p;
        }
    }

    // lambda = 1 * chi
    t.lambda_.assign(size, 0);
    for (std::uint64_t d = 1; d <= limit; ++d) {
        const int c = chi(d);
        if (c == 0) continue;
        for (std::uint64_t n = d; n <= limit; n += d) t.lambda_[n] += c;
    }

    // nu = mu * (mu chi)
    std::vector<std::int8_t> mu(size, 0);
    if (size > 1) mu[1] = 1;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        const std::uint64_t p = t.spf_[n];
        const std::uint64_t rest = n / p;
        mu[n] = (rest % p == 0) ? 0 : static_cast<std::int8_t>(-mu[rest]);
    }
    t.nu_.assign(size, 0);
    for (std::uint64_t d = 1; d <= limit; ++d) {
        const int w = mu[d] * chi(d);
        if (w == 0) continue;
        for (std::uint64_t a = 1, n = d; n <= limit; ++a, n += d)
            if (mu[a] != 0) t.nu_[n] = static_cast<std::int8_t>(t.nu_[n] + mu[a] * w);
    }

    // rho = 1 * lambda, split at the cutoff on the lambda-argument.
    t.rho_.assign(size, 0);
    t.rho_star_.assign(size, 0);
    t.rho_sub_.assign(size, 0);
    for (std::uint64_t m = 1; m <= limit; ++m) {
        const std::int32_t l = t.lambda_[m];
        if (l == 0) continue;
        auto &split = (m <= t.cutoff_) ? t.rho_star_ : t.rho_sub_;
        for (std::uint64_t n = m; n <= limit; n += m) {
            t.rho_[n] += l;
            split[n] += l;
        }
    }

    // Lambda from prime powers; lambda' = lambda * Lambda.
    t.von_mangoldt_.assign(size, 0.0);
    t.lambda_prime_.assign(size, 0.0);
    for (std::uint32_t p : primes) {
        const double lp = std::log(static_cast<double>(p));
        for (std::uint64_t q = p; q <= limit; q *= p) {
            t.von_mangoldt_[q] = lp;
            for (std::uint64_t d = 1, n = q; n <= limit; ++d, n += q)
                if (t.lambda_[d] != 0) t.lambda_prime_[n] += t.lambda_[d] * lp;
            if (q > limit / p) break;
        }
    }

    // Lambda^* and Lambda_*: sum over d m = n of nu(m) lambda'(d), split on m.
    t.von_mangoldt_star_.assign(size, 0.0);
    t.von_mangoldt_sub_.assign(size, 0.0);
    for (std::uint64_t m = 1; m <= limit; ++m) {
        const int w = t.nu_[m];
        if (w == 0) continue;
        auto &split = (m <= t.cutoff_) ? t.von_mangoldt_star_ : t.von_mangoldt_sub_;
        for (std::uint64_t d = 2, n = 2 * m; n <= limit; ++d, n += m) split[n] += w * t.lambda_prime_[d];
    }
    return t;
}

double FunctionTable::value(Function f, std::uint64_t n) const {
    if (n < 1 || n > limit_) throw RangeError("index " + std::to_string(n) + " outside table [1, " + std::to_string(limit_) + "]");
    switch (f) {
    case Function::lambda: return lambda_[n];
    case Function::nu: return nu_[n];
    case Function::lambda_prime: return lambda_prime_[n];
    case Function::rho: return rho_[n];
    case Function::von_mangoldt: return von_mangoldt_[n];
    case Function::rho_star: return rho_star_[n];
    case Function::rho_sub: return rho_sub_[n];
    case Function::von_mangoldt_star: return von_mangoldt_star_[n];
    case Function::von_mangoldt_sub: return von_mangoldt_sub_[n];
    }
    return 0.0;
}

Factorization FunctionTable::factorize(std::uint64_t n) const {
    Factorization out;
    while (n > 1) {
        const std::uint64_t p = spf_[n];
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    return out;
}

LogCombination FunctionTable::lambda_prime_exact(std::uint64_t n) const {
    LogCombination out;
    for (const auto &[p, e] : factorize(n)) {
        std::int64_t c = 0;
        std::uint64_t d = n;
        for (int k = 1; k <= e; ++k) {
            d /= p;
            c += lambda_[d];
        }
        out.add(p, c);
    }
    return out;
}

LogCombination FunctionTable::von_mangoldt_exact(std::uint64_t n) const {
    LogCombination out;
    const auto fac = factorize(n);
    if (fac.size() == 1) out.add(fac.front().first, 1);
    return out;
}

LogCombination FunctionTable::von_mangoldt_split_exact(std::uint64_t n, bool star) const {
    LogCombination s;
    LogCombination u;
    accumulate_split(factorize(n), chi_, cutoff_, s, u);
    return star ? s : u;
}

LogCombination FunctionTable::von_mangoldt_star_exact(std::uint64_t n) const { return von_mangoldt_split_exact(n, true); }
LogCombination FunctionTable::von_mangoldt_sub_exact(std::uint64_t n) const { return von_mangoldt_split_exact(n, false); }

// ---------------------------------------------------------------------------
// Sums and residuals

namespace {

std::uint64_t checked_floor(const FunctionTable &t, double x) {
    if (!(x >= 0.0)) throw DomainError("summation bound must be >= 0");
    const double fx = std::floor(x);
    if (fx > static_cast<double>(t.limit()))
        throw RangeError("x = " + format_sig12(x) + " exceeds table limit " + std::to_string(t.limit()));
    return static_cast<std::uint64_t>(fx);
}

bool integer_valued(Function f) {
    return f == Function::lambda || f == Function::nu || f == Function::rho || f == Function::rho_star ||
           f == Function::rho_sub;
}

struct MainTerm {
    Function f;
    double l1;
    double l1p;

    double operator()(double x) const {
        const double lx = std::log(x);
        switch (f) {
        case Function::lambda: return l1 * x;
        case Function::lambda_prime: return l1 * x * lx + (l1p - l1) * x;
        case Function::rho: return l1 * x * lx + (l1p + (2.0 * kEulerGamma - 1.0) * l1) * x;
        default: return 0.0;
        }
    }
};

void require_asymptotic_function(Function f) {
    if (f != Function::lambda && f != Function::lambda_prime && f != Function::rho)
        throw ValidationError("asymptotic formulas exist for lambda, lambda_prime and rho only, not " + function_name(f));
}

bounds::Monomial error_monomial(Function f) {
    using bounds::Monomial;
    if (f == Function::rho) return Monomial{{bounds::sym::D, Rational(527, 1038)}, {bounds::sym::x, Rational(511, 1038)}};
    return Monomial{{bounds::sym::D, Rational(1, 3)}, {bounds::sym::x, Rational(1, 3)}};
}

} // namespace

double error_exponent(Function f) {
    require_asymptotic_function(f);
    return error_monomial(f).exponent(bounds::sym::x).to_double();
}

double divisor_sum(const FunctionTable &t, Function f, double x) {
    const std::uint64_t n_max = checked_floor(t, x);
    if (integer_valued(f)) {
        std::int64_t s = 0;
        for (std::uint64_t n = 1; n <= n_max; ++n) s += static_cast<std::int64_t>(t.value(f, n));
        return static_cast<double>(s);
    }
    CompensatedSum<double> s;
    for (std::uint64_t n = 1; n <= n_max; ++n) s.add(t.value(f, n));
    return s.value();
}

Residual asymptotic_residual(const FunctionTable &t, Function f, double x) {
    require_asymptotic_function(f);
    if (x < 1.0) throw DomainError("asymptotic residual needs x >= 1");
    const double sum = divisor_sum(t, f, x);
    const auto &chi = t.character();
    Residual r;
    if (f == Function::rho) {
        const std::array<RealCharacter, 3> factors{RealCharacter::trivial(), RealCharacter::trivial(), chi};
        r.main = characters::residue_main_term(characters::ResiduePattern::from(factors), x);
    } else if (f == Function::lambda) {
        const std::array<RealCharacter, 2> factors{RealCharacter::trivial(), chi};
        r.main = characters::residue_main_term(characters::ResiduePattern::from(factors), x);
    } else {
        r.main = MainTerm{f, characters::l_one(chi), characters::l_one_derivative(chi)}(x);
    }
    r.residual = sum - r.main;
    const double scale = bounds::evaluate(error_monomial(f), {{bounds::sym::D, static_cast<double>(chi.conductor())},
                                                             {bounds::sym::x, x}});
    r.normalized = r.residual / scale;
    return r;
}

double residual_envelope(const FunctionTable &t, Function f, double x) {
    require_asymptotic_function(f);
    const std::uint64_t hi = checked_floor(t, x);
    const std::uint64_t lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(x / 2.0)));
    const MainTerm main{f, characters::l_one(t.character()), characters::l_one_derivative(t.character())};
    CompensatedSum<double> running;
    double worst = 0.0;
    for (std::uint64_t n = 1; n <= hi; ++n) {
        running.add(t.value(f, n));
        if (n >= lo) worst = std::max(worst, std::abs(running.value() - main(static_cast<double>(n))));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Windowed psi counting

namespace {

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
    std::vector<bool> composite(n + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
    }
    return out;
}

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

} // namespace

CountReport psi_counts(std::uint64_t limit, const RealCharacter &chi, double x, double y,
                       std::optional<std::uint64_t> cutoff) {
    if (!(y > 0.0) || !(y <= x)) throw DomainError("psi counts need 0 < y <= x");
    if (x > static_cast<double>(limit))
        throw RangeError("x = " + format_sig12(x) + " exceeds limit " + std::to_string(limit));
    const std::uint64_t C = cutoff.value_or(default_cutoff(chi));
    const auto hi = static_cast<std::uint64_t>(std::floor(x));
    const double lower = x - y;
    const std::uint64_t lo = lower < 0.0 ? 0 : static_cast<std::uint64_t>(std::floor(lower)); // window is (lo, hi]

    CountReport rep;
    rep.x = x;
    rep.y = y;
    const auto small_primes = primes_up_to(isqrt(hi));

    std::vector<std::uint64_t> rem;
    std::vector<Factorization> facs;
    for (std::uint64_t start = lo + 1; start <= hi; start += kSegmentSize) {
        const std::uint64_t end = std::min(hi, start + kSegmentSize - 1);
        const std::size_t len = end - start + 1;
        rem.resize(len);
        facs.assign(len, {});
        for (std::size_t i = 0; i < len; ++i) rem[i] = start + i;
        for (std::uint64_t p : small_primes) {
            if (p * p > end) break;
            for (std::uint64_t n = (start + p - 1) / p * p; n <= end; n += p) {
                const std::size_t i = n - start;
                int e = 0;
                while (rem[i] % p == 0) {
                    rem[i] /= p;
                    ++e;
                }
                facs[i].emplace_back(p, e);
            }
        }
        for (std::size_t i = 0; i < len; ++i) {
            const std::uint64_t n = start + i;
            if (n < 2) continue;
            auto &fac = facs[i];
            if (rem[i] > 1) fac.emplace_back(rem[i], 1);
            if (fac.size() == 1) {
                rep.psi_exact.add(fac.front().first, 1);
                if (fac.front().second == 1) ++rep.pi_count;
            }
            LogCombination star;
            LogCombination sub;
            accumulate_split(fac, chi, C, star, sub);
            rep.psi_star_exact.add(star);
            rep.psi_substar_exact.add(sub);
        }
    }
    rep.psi = rep.psi_exact.value();
    rep.psi_star = rep.psi_star_exact.value();
    rep.psi_substar = rep.psi_substar_exact.value();
    rep.li_value = li_difference(std::max(lower, 0.0), x);
    rep.main_term = y;
    rep.ratio = rep.psi / y;
    return rep;
}

// ---------------------------------------------------------------------------
// Logarithmic integral

namespace {

/// Ei(t) = gamma + log|t| + sum_{n>=1} t^n / (n n!).
double exponential_integral(double t) {
    CompensatedSum<double> s;
    double term = 1.0;
    for (int n = 1; n < 2000; ++n) {
        term *= t / n;
        const double add = term / n;
        s.add(add);
        if (std::abs(add) < 1e-18 * std::abs(s.value()) && n > std::abs(t)) break;
    }
    return kEulerGamma + std::log(std::abs(t)) + s.value();
}

/// Integral of e^u / u over [a, b] by composite 10-point Gauss-Legendre.
double gauss_legendre_li(double a, double b, int panels) {
    static constexpr std::array<double, 5> nodes{0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                                  0.8650633666889845, 0.9739065285171717};
    static constexpr std::array<double, 5> weights{0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                                    0.1494513491505806, 0.0666713443086881};
    const double h = (b - a) / panels;
    CompensatedSum<double> s;
    for (int i = 0; i < panels; ++i) {
        const double mid = a + (i + 0.5) * h;
        const double half = 0.5 * h;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            for (double sign : {-1.0, 1.0}) {
                const double u = mid + sign * half * nodes[k];
                s.add(weights[k] * half * std::exp(u) / u);
            }
        }
    }
    return s.value();
}

} // namespace

double li(double x) {
    if (x == 0.0) return 0.0;
    if (!(x > 0.0) || x == 1.0) throw DomainError("li(x) needs x > 0, x != 1");
    return exponential_integral(std::log(x));
}

double li_difference(double a, double b) {
    if (a == b) return 0.0;
    if (a < 2.0) return li(b) - li(a);
    const double ua = std::log(a);
    const double ub = std::log(b);
    double prev = gauss_legendre_li(ua, ub, 4);
    for (int panels = 8; panels <= (1 << 20); panels *= 2) {
        const double cur = gauss_legendre_li(ua, ub, panels);
        if (std::abs(cur - prev) <= 1e-12 * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

TauMoment tau_moment_bound(std::uint64_t cap, double A) {
    if (cap < 2) throw DomainError("tau moment needs cap >= 2");
    if (!(A >= 0.0)) throw DomainError("tau moment needs A >= 0");
    std::vector<std::uint32_t> tau(cap + 1, 0);
    for (std::uint64_t d = 1; d <= cap; ++d)
        for (std::uint64_t n = d; n <= cap; n += d) ++tau[n];
    const std::uint32_t max_tau = *std::max_element(tau.begin() + 1, tau.end());
    if (A * std::log(static_cast<double>(max_tau)) > 700.0)
        throw RangeError("tau(d)^A overflows a double (max tau = " + std::to_string(max_tau) + ", A = " +
                         format_sig12(A) + ")");
    TauMoment out;
    CompensatedSum<double> s;
    for (std::uint64_t d = 1; d <= cap; ++d) s.add(std::pow(static_cast<double>(tau[d]), A) / static_cast<double>(d));
    out.sum = s.value();
    out.log_power = std::pow(std::log(static_cast<double>(cap)), std::exp2(A) + 1.0);
    return out;
}

} // namespace exlab::tables
