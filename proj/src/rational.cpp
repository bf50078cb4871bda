#include "exlab/rational.hpp"

#include <cctype>

#include "exlab/errors.hpp"

namespace exlab {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

mpz_class pow10(unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

} // namespace

Rational::Rational(long num, long den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

Rational::Rational(const mpz_class &num, const mpz_class &den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    const std::string original(text);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw ValidationError("empty rational literal");

    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }

    Rational value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto num = text.substr(0, slash);
        const auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw ValidationError("malformed fraction '" + original + "'");
        const mpz_class d{std::string(den), 10};
        if (d == 0) throw ValidationError("zero denominator in '" + original + "'");
        value = Rational(mpz_class{std::string(num), 10}, d);
    } else {
        long exponent = 0;
        if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
            auto exp_part = text.substr(e + 1);
            bool exp_negative = false;
            if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
                exp_negative = exp_part.front() == '-';
                exp_part.remove_prefix(1);
            }
            if (!all_digits(exp_part) || exp_part.size() > 6)
                throw ValidationError("malformed exponent in '" + original + "'");
            exponent = std::stol(std::string(exp_part));
            if (exp_negative) exponent = -exponent;
            text = text.substr(0, e);
        }
        std::string digits;
        long frac_digits = 0;
        if (auto dot = text.find('.'); dot != std::string_view::npos) {
            const auto int_part = text.substr(0, dot);
            const auto frac_part = text.substr(dot + 1);
            if ((!int_part.empty() && !all_digits(int_part)) ||
                (!frac_part.empty() && !all_digits(frac_part)) || (int_part.empty() && frac_part.empty()))
                throw ValidationError("malformed decimal '" + original + "'");
            digits = std::string(int_part) + std::string(frac_part);
            frac_digits = static_cast<long>(frac_part.size());
        } else {
            if (!all_digits(text)) throw ValidationError("malformed number '" + original + "'");
            digits = std::string(text);
        }
        const long scale = exponent - frac_digits;
        const mpz_class num(digits, 10);
        if (scale >= 0)
            value = Rational(mpz_class(num * pow10(static_cast<unsigned long>(scale))), mpz_class(1));
        else
            value = Rational(num, pow10(static_cast<unsigned long>(-scale)));
    }
    return negative ? -value : value;
}

std::string Rational::to_string() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::to_decimal(int places) const {
    const mpz_class scale = pow10(static_cast<unsigned long>(places));
    mpz_class scaled_abs = abs().numerator() * scale * 2 + abs().denominator();
    mpz_class denom2 = abs().denominator() * 2;
    mpz_class rounded;
    mpz_fdiv_q(rounded.get_mpz_t(), scaled_abs.get_mpz_t(), denom2.get_mpz_t());

    std::string digits = rounded.get_str();
    if (places > 0) {
        if (digits.size() <= static_cast<std::size_t>(places))
            digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
        digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
    }
    if (sign() < 0 && rounded != 0) digits.insert(0, "-");
    return digits;
}

mpz_class Rational::floor() const {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
}

mpz_class Rational::ceil() const {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(q_))); }

Rational Rational::inverse() const {
    if (is_zero()) throw DomainError("inverse of zero");
    return Rational(mpq_class(1 / q_));
}

Rational &Rational::operator+=(const Rational &rhs) {
    q_ += rhs.q_;
    return *this;
}

Rational &Rational::operator-=(const Rational &rhs) {
    q_ -= rhs.q_;
    return *this;
}

Rational &Rational::operator*=(const Rational &rhs) {
    q_ *= rhs.q_;
    return *this;
}

Rational &Rational::operator/=(const Rational &rhs) {
    if (rhs.is_zero()) throw DomainError("division by zero rational");
    q_ /= rhs.q_;
    return *this;
}

} // namespace exlab
