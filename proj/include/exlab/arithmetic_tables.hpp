#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exlab/character.hpp"

/// Sieved tables of the arithmetic functions built from a real character chi:
///
///   lambda  = 1 * chi            nu  = mu * (mu chi)
///   rho     = 1 * lambda         lambda' = lambda * Lambda  (= chi * log)
///   Lambda  = lambda' * nu
///
/// and the splits rho = rho^* + rho_*, Lambda = Lambda^* + Lambda_* according to
/// whether the m-divisor is <= or > a cutoff C (default D^2).
namespace exlab::tables {

using characters::RealCharacter;

enum class Function {
    lambda,
    nu,
    lambda_prime,
    rho,
    von_mangoldt,
    rho_star,
    rho_sub,
    von_mangoldt_star,
    von_mangoldt_sub,
};

/// Accepts "lambda", "nu", "lambda_prime" (or "lambda'"), "rho", "Lambda",
/// "rho_star", "rho_sub", "Lambda_star", "Lambda_sub".
Function parse_function(const std::string &name);
std::string function_name(Function f);

/// Integer combination sum c_p log p, sorted by prime, no zero coefficients.
/// Identities between log-valued functions are checked on this form.
class LogCombination {
public:
    void add(std::uint64_t prime, std::int64_t coeff);
    LogCombination &operator+=(const LogCombination &rhs);
    /// Adds scale * rhs.
    void add_scaled(const LogCombination &rhs, std::int64_t scale);

    const std::vector<std::pair<std::uint64_t, std::int64_t>> &terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    double value() const;

    friend bool operator==(const LogCombination &, const LogCombination &) = default;

private:
    std::vector<std::pair<std::uint64_t, std::int64_t>> terms_;
};

/// Prime-indexed accumulator for large sums of log combinations.
class LogAccumulator {
public:
    void add(std::uint64_t prime, std::int64_t coeff) { coeffs_[prime] += coeff; }
    void add(const LogCombination &c, std::int64_t scale = 1);
    /// Sum in increasing prime order, compensated.
    double value() const;
    /// Equality ignoring zero coefficients.
    bool equals(const LogAccumulator &other) const;
    LogAccumulator plus(const LogAccumulator &other) const;

private:
    std::map<std::uint64_t, std::int64_t> coeffs_;
};

using Factorization = std::vector<std::pair<std::uint64_t, int>>;

struct TableOptions {
    /// Split threshold for the starred functions; defaults to D^2.
    std::optional<std::uint64_t> cutoff;
    std::size_t memory_budget_bytes = std::size_t{3} << 30;
};

class FunctionTable {
public:
    /// Sieves every column on [1, limit]. Throws RangeError if the columns would
    /// exceed the memory budget.
    static FunctionTable build(std::uint64_t limit, const RealCharacter &chi, TableOptions options = {});

    /// Bytes of column storage per table entry.
    static constexpr std::size_t bytes_per_entry() { return 4 + 4 + 1 + 4 + 4 + 4 + 8 * 4; }

    std::uint64_t limit() const { return limit_; }
    std::uint64_t cutoff() const { return cutoff_; }
    const RealCharacter &character() const { return chi_; }

    std::int32_t lambda(std::uint64_t n) const { return lambda_[n]; }
    std::int32_t nu(std::uint64_t n) const { return nu_[n]; }
    std::int32_t rho(std::uint64_t n) const { return rho_[n]; }
    std::int32_t rho_star(std::uint64_t n) const { return rho_star_[n]; }
    std::int32_t rho_sub(std::uint64_t n) const { return rho_sub_[n]; }
    double lambda_prime(std::uint64_t n) const { return lambda_prime_[n]; }
    double von_mangoldt(std::uint64_t n) const { return von_mangoldt_[n]; }
    double von_mangoldt_star(std::uint64_t n) const { return von_mangoldt_star_[n]; }
    double von_mangoldt_sub(std::uint64_t n) const { return von_mangoldt_sub_[n]; }
    double value(Function f, std::uint64_t n) const;

    /// Smallest prime factor (1 for n = 1).
    std::uint64_t smallest_prime_factor(std::uint64_t n) const { return spf_[n]; }
    Factorization factorize(std::uint64_t n) const;

    /// lambda'(n) = sum_{p^k | n} lambda(n / p^k) log p.
    LogCombination lambda_prime_exact(std::uint64_t n) const;
    LogCombination von_mangoldt_exact(std::uint64_t n) const;
    /// sum over d m = n with m <= cutoff (star) or m > cutoff (sub) of nu(m) lambda'(d).
    LogCombination von_mangoldt_star_exact(std::uint64_t n) const;
    LogCombination von_mangoldt_sub_exact(std::uint64_t n) const;

private:
    LogCombination von_mangoldt_split_exact(std::uint64_t n, bool star) const;

    std::uint64_t limit_ = 0;
    std::uint64_t cutoff_ = 0;
    RealCharacter chi_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::int32_t> lambda_;
    std::vector<std::int8_t> nu_;
    std::vector<std::int32_t> rho_;
    std::vector<std::int32_t> rho_star_;
    std::vector<std::int32_t> rho_sub_;
    std::vector<double> lambda_prime_;
    std::vector<double> von_mangoldt_;
    std::vector<double> von_mangoldt_star_;
    std::vector<double> von_mangoldt_sub_;
};

/// sum_{n <= x} f(n). Integer-valued columns are summed exactly. RangeError if x > limit.
double divisor_sum(const FunctionTable &t, Function f, double x);

struct Residual {
    double main = 0.0;
    double residual = 0.0;
    /// residual / (error monomial at (D, x), eps = 0)
    double normalized = 0.0;
};

/// Main terms:
///   lambda : L(1,chi) x
///   lambda': L(1,chi) x log x + (L'(1,chi) - L(1,chi)) x
///   rho    : L(1,chi) x log x + (L'(1,chi) + (2 gamma - 1) L(1,chi)) x
/// Error monomials: D^(1/3) x^(1/3) for lambda, lambda'; D^(527/1038) x^(511/1038) for rho.
Residual asymptotic_residual(const FunctionTable &t, Function f, double x);

/// max |sum_{n<=u} f(n) - main(u)| over integers u in [x/2, x].
double residual_envelope(const FunctionTable &t, Function f, double x);

/// Error exponent of x in the asymptotic formula for f.
double error_exponent(Function f);

struct CountReport {
    double x = 0.0;
    double y = 0.0;
    double psi = 0.0;          ///< psi(x) - psi(x - y)
    double psi_star = 0.0;     ///< psi^*(x) - psi^*(x - y)
    double psi_substar = 0.0;  ///< psi_*(x) - psi_*(x - y)
    std::uint64_t pi_count = 0; ///< pi(x) - pi(x - y)
    double li_value = 0.0;     ///< li(x) - li(x - y)
    double main_term = 0.0;    ///< y
    double ratio = 0.0;        ///< psi / y
    LogAccumulator psi_exact;
    LogAccumulator psi_star_exact;
    LogAccumulator psi_substar_exact;

    /// psi = psi^* + psi_* coefficient by coefficient.
    bool split_exact() const { return psi_exact.equals(psi_star_exact.plus(psi_substar_exact)); }
};

/// Window size used by the segmented factorization sieve.
inline constexpr std::uint64_t kSegmentSize = std::uint64_t{1} << 20;

/// Counts over the window (x - y, x] by segmented factorization; no full table.
/// Requires 0 < y <= x <= limit.
CountReport psi_counts(std::uint64_t limit, const RealCharacter &chi, double x, double y,
                       std::optional<std::uint64_t> cutoff = std::nullopt);

/// Logarithmic integral li(x) (principal value from 0), x > 0, x != 1.
double li(double x);
/// li(b) - li(a); quadrature in log t when a >= 2, relative tolerance 1e-9 or better.
double li_difference(double a, double b);

struct TauMoment {
    double sum = 0.0;       ///< sum_{d <= cap} tau(d)^A / d
    double log_power = 0.0; ///< (log cap)^(2^A + 1), for comparison only
};

/// Throws RangeError if tau^A would overflow a double.
TauMoment tau_moment_bound(std::uint64_t cap, double A);

} // namespace exlab::tables
