#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace exlab {

/// Exact rational number with arbitrary-precision numerator and denominator.
///
/// Always kept in canonical form (gcd 1, positive denominator), so structural
/// equality is value equality.
class Rational {
public:
    Rational() = default;
    Rational(long value) : q_(value) {} // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    explicit Rational(mpq_class q);
    Rational(const mpz_class &num, const mpz_class &den);

    /// Parses "p/q", an integer, or a finite decimal such as "0.4923" or "-1.5e-3".
    /// Decimals are read exactly (0.4923 is 4923/10000).
    static Rational parse(std::string_view text);

    const mpz_class &numerator() const { return q_.get_num(); }
    const mpz_class &denominator() const { return q_.get_den(); }
    const mpq_class &raw() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    double to_double() const { return q_.get_d(); }
    /// "p/q", or just "p" when the denominator is 1.
    std::string to_string() const;
    /// Fixed-point decimal with `places` digits after the point, rounded half away from zero.
    std::string to_decimal(int places) const;

    mpz_class floor() const;
    mpz_class ceil() const;
    Rational abs() const;
    Rational inverse() const;

    Rational &operator+=(const Rational &rhs);
    Rational &operator-=(const Rational &rhs);
    Rational &operator*=(const Rational &rhs);
    Rational &operator/=(const Rational &rhs);

    friend Rational operator+(Rational lhs, const Rational &rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational &rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational &rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational &rhs) { return lhs /= rhs; }
    Rational operator-() const { return Rational(mpq_class(-q_)); }

    friend bool operator==(const Rational &lhs, const Rational &rhs) { return lhs.q_ == rhs.q_; }
    friend std::strong_ordering operator<=>(const Rational &lhs, const Rational &rhs) {
        const int c = cmp(lhs.q_, rhs.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream &operator<<(std::ostream &os, const Rational &r) {
        return os << r.to_string();
    }

private:
    mpq_class q_;
};

} // namespace exlab

template <> struct std::hash<exlab::Rational> {
    std::size_t operator()(const exlab::Rational &r) const noexcept {
        return std::hash<std::string>{}(r.to_string());
    }
};
