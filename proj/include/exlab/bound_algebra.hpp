#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "exlab/rational.hpp"

/// Bounds as finite maxima of monomials with exact rational exponents.
///
/// Constants are never tracked: a BoundExpr {m1, m2} means O(m1 + m2).
/// All symbols denote quantities >= 1.
namespace exlab::bounds {

using Symbol = std::string;

namespace sym {
inline const Symbol D = "D";
inline const Symbol Dmax = "Dmax";
inline const Symbol x = "x";
inline const Symbol N = "N";
inline const Symbol P = "P";
inline const Symbol N3 = "N3";
inline const Symbol M = "M";
inline const Symbol T = "T";
} // namespace sym

class Monomial {
public:
    Monomial() = default;
    Monomial(std::initializer_list<std::pair<const Symbol, Rational>> exps, bool eps = false);

    /// sym^e, or the empty monomial when e == 0.
    static Monomial power(const Symbol &sym, const Rational &e);

    Rational exponent(const Symbol &sym) const;
    const std::map<Symbol, Rational> &exponents() const { return exps_; }
    bool eps() const { return eps_; }
    bool empty() const { return exps_.empty(); }
    bool contains(const Symbol &sym) const { return exps_.count(sym) != 0; }

    Monomial with_eps(bool eps) const;
    Monomial without(const Symbol &sym) const;
    Monomial pow(const Rational &e) const;
    Monomial inverse() const { return pow(Rational(-1)); }

    /// Same exponent map, ignoring the eps flag.
    bool same_exponents(const Monomial &other) const { return exps_ == other.exps_; }

    /// "D^(14/97) Dmax^(1/2) x^(69/194) [eps]"; "1" when empty.
    std::string to_string() const;
    nlohmann::json to_json() const;

    friend bool operator==(const Monomial &, const Monomial &) = default;
    friend bool operator<(const Monomial &lhs, const Monomial &rhs);

private:
    void set(const Symbol &sym, const Rational &e);

    std::map<Symbol, Rational> exps_;
    bool eps_ = false;

    friend Monomial mul(const Monomial &, const Monomial &);
};

/// Exponent-wise sum; eps flags OR'd.
Monomial mul(const Monomial &lhs, const Monomial &rhs);
inline Monomial operator*(const Monomial &lhs, const Monomial &rhs) { return mul(lhs, rhs); }
inline Monomial operator/(const Monomial &lhs, const Monomial &rhs) { return mul(lhs, rhs.inverse()); }

/// Replaces sym^e by repl^e. Throws AlgebraError if repl contains sym.
Monomial substitute(const Monomial &m, const Symbol &sym, const Monomial &repl);

/// A nonempty max of monomials. Terms with identical exponents are merged
/// (eps flags OR'd); insertion order is kept for display, equality ignores it.
class BoundExpr {
public:
    BoundExpr() = default;
    BoundExpr(std::initializer_list<Monomial> terms);
    explicit BoundExpr(const std::vector<Monomial> &terms);

    void add(const Monomial &m);
    const std::vector<Monomial> &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    /// Every term multiplied by m.
    BoundExpr scaled(const Monomial &m) const;
    BoundExpr substituted(const Symbol &sym, const Monomial &repl) const;

    std::string to_string() const;
    nlohmann::json to_json() const;

    /// Order-insensitive; compares exponents and eps flags.
    friend bool operator==(const BoundExpr &lhs, const BoundExpr &rhs);
    /// Order-insensitive; eps flags ignored.
    bool same_exponents(const BoundExpr &other) const;

private:
    std::vector<Monomial> terms_;
};

BoundExpr concat(const BoundExpr &lhs, const BoundExpr &rhs);

/// Removes sym from every term using lower <= sym <= upper: a negative exponent takes
/// the lower bound, a positive one the upper bound. Without a lower bound, a negative
/// exponent is an AlgebraError.
BoundExpr eliminate_bounded(const BoundExpr &e, const Symbol &sym, const std::optional<Monomial> &lower,
                            const Monomial &upper);

/// The value of sym (free of sym) at which t1 == t2. Throws AlgebraError when the
/// two sym-exponents are equal.
Monomial balance(const Monomial &t1, const Monomial &t2, const Symbol &sym);

/// Ordering assumptions 1 <= chain[0] <= chain[1] <= ... for the symbols in chain.
/// Symbols outside the chain are only known to be >= 1. `fold` lists chain symbols
/// that get merged into their successor when simplifying.
struct Assumptions {
    std::vector<Symbol> chain;
    std::vector<Symbol> fold;

    /// Dmax <= D <= x, folding Dmax into D.
    static Assumptions dmax_d_x();
};

/// True iff big >= small for every assignment satisfying the assumptions.
bool dominates(const Monomial &big, const Monomial &small, const Assumptions &a);

/// Upper-bounds m by folding each `fold` symbol into its chain successor
/// (nonnegative exponent) or dropping it (negative exponent).
Monomial fold_symbols(const Monomial &m, const Assumptions &a);

/// The single folded term dominating every term of e; eps is OR'd over all terms.
/// Throws IncomparableError naming a pair when no term dominates the rest.
Monomial dominant_simplify(const BoundExpr &e, const Assumptions &a);

/// Numeric value; the eps flag contributes eps_symbol^eps.
double evaluate(const Monomial &m, const std::map<Symbol, double> &assignment, double eps = 0.0,
                const Symbol &eps_symbol = sym::x);
double evaluate(const BoundExpr &e, const std::map<Symbol, double> &assignment, double eps = 0.0,
                const Symbol &eps_symbol = sym::x);

/// Every intermediate of the scripted triple-L-series derivation.
struct Derivation {
    BoundExpr start;        ///< Prefactor times the inner sum, plus the truncation term.
    BoundExpr after_lemma;  ///< Inner n3-sum bound after the order-5 derivative test.
    BoundExpr eq9_bracket;  ///< Per-block bound divided by the prefactor D^(1/6) x^(1/3) P^(1/3) Dmax^(1/2).
    BoundExpr eq9;          ///< Per-block bound with the prefactor multiplied in.
    BoundExpr eq10;         ///< After eliminating N3 and P; includes the truncation term.
    Monomial n_choice;      ///< Balancing value of N.
    BoundExpr final;        ///< eq10 with N substituted.
    Monomial simplified;    ///< Single dominating monomial under Dmax <= D <= x.

    nlohmann::json to_json() const;
    std::string to_text() const;
};

/// Runs the derivation and checks each stage against the reference displays.
/// Throws RegressionError naming the first stage and term that differ.
Derivation derive_main_theorem();

/// Runs the derivation without the reference check.
Derivation run_derivation();

/// Reference values of each checked stage (exponents only).
struct ReferenceDisplays {
    BoundExpr eq9_bracket;
    BoundExpr eq9;
    BoundExpr eq10;
    Monomial n_choice;
    BoundExpr final;
    Monomial simplified;
};
const ReferenceDisplays &reference_displays();

/// Exponent of x and of D in the simplified bound of the earlier four-term result.
inline Rational previous_x_exponent() { return Rational(2498, 5073); }
inline Rational previous_d_exponent() { return Rational(2575, 5073); }

} // namespace exlab::bounds
