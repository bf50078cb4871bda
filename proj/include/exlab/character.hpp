#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

/// Real primitive Dirichlet characters, their Gauss sums and L-values at s = 1,
/// and residue main terms of products of three L-series.
namespace exlab::characters {

/// Kronecker symbol (a | n) on the full integer domain.
int kronecker(std::int64_t a, std::int64_t n);

/// Empty string if d is a fundamental discriminant (1 counts, as the trivial
/// character); otherwise a description of the failed condition.
std::string fundamental_discriminant_problem(std::int64_t d);

/// Fundamental discriminants with 1 < |d| <= max_abs, in increasing |d| then sign order.
std::vector<std::int64_t> fundamental_discriminants(std::int64_t max_abs);

enum class Parity { even, odd };

/// chi(n) = (d | n) for a fundamental discriminant d; conductor |d|.
/// d = 1 gives the trivial character (the zeta factor).
class RealCharacter {
public:
    /// Throws ValidationError naming the failed condition for non-fundamental d.
    static RealCharacter from_discriminant(std::int64_t d);
    static RealCharacter trivial() { return from_discriminant(1); }

    std::int64_t discriminant() const { return disc_; }
    std::uint64_t conductor() const { return period_.size(); }
    Parity parity() const { return disc_ < 0 ? Parity::odd : Parity::even; }
    bool is_trivial() const { return disc_ == 1; }

    /// chi(n) for n >= 0 (chi(0) = 0 unless trivial).
    int operator()(std::uint64_t n) const { return period_[n % period_.size()]; }
    /// chi(n) for any integer, using chi(-1) = sign of the discriminant.
    int value(std::int64_t n) const;

    /// sum_{1 <= n <= t} chi(n), O(1).
    std::int64_t partial_sum(std::uint64_t t) const;

    /// chi(0), chi(1), ..., chi(conductor - 1).
    std::span<const std::int8_t> period() const { return period_; }

    friend bool operator==(const RealCharacter &lhs, const RealCharacter &rhs) { return lhs.disc_ == rhs.disc_; }

private:
    std::int64_t disc_ = 1;
    std::vector<std::int8_t> period_;
    std::vector<std::int32_t> prefix_; // prefix_[r] = sum_{1 <= n <= r} chi(n), r < conductor
};

/// G(m, chi) = sum_{k=1}^{D} chi(k) e(k m / D), compensated summation.
/// Absolute error within D * 2^-50.
std::complex<double> gauss_sum(std::int64_t m, const RealCharacter &chi);

/// L(1, chi) from the finite closed forms: -pi D^(-3/2) sum chi(a) a for odd chi,
/// -D^(-1/2) sum chi(a) log sin(pi a / D) for even chi. DomainError for D = 1.
double l_one(const RealCharacter &chi);

/// L(s, chi) for real s > 0 by summing `periods` full periods of the Dirichlet
/// series and adding an Euler-Maclaurin tail per residue class.
double l_series(const RealCharacter &chi, double s, std::uint64_t periods = 1000);

/// L'(1, chi) = -sum chi(n) log n / n, summed to the first multiple of D at or
/// above `cutoff`, plus an Euler-Maclaurin tail per residue class. The truncated
/// tail term is O(D^7 log N / N^8); absolute error well under 1e-6 for cutoff >= 1000 D.
double l_one_derivative(const RealCharacter &chi, std::uint64_t cutoff = 1000000);

/// First Stieltjes constant gamma_1.
inline constexpr double kStieltjesGamma1 = -0.0728158454836767; // OEIS A082633 (negated), 15 digits

/// gamma_1 = lim (sum_{k<=n} log k / k - (log n)^2 / 2) with Euler-Maclaurin corrections at n.
/// Used to validate kStieltjesGamma1.
double stieltjes_gamma1_euler_maclaurin(std::uint64_t n = 1000);

/// zeta^k * prod L(s, chi_i) with 1 to 3 factors in total; trivial characters count as zeta.
struct ResiduePattern {
    int zeta_factors = 0;
    std::vector<RealCharacter> characters;

    static ResiduePattern from(std::span<const RealCharacter> factors);
    int factor_count() const { return zeta_factors + static_cast<int>(characters.size()); }
};

/// Res_{s=1} of the pattern's L-product times x^s / s.
double residue_main_term(const ResiduePattern &pattern, double x);

} // namespace exlab::characters
