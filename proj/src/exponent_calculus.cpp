#include "exlab/exponent_calculus.hpp"

#include <cmath>
#include <sstream>

#include "exlab/errors.hpp"

namespace exlab::exponents {

ExponentTuple base_tuple() {
    ExponentTuple t;
    t.order = 4;
    t.a = Rational(1, 2);
    t.b = Rational(13, 84);
    t.xi = Rational(0);
    t.eta = Rational(31, 84);
    t.alpha = Rational(334, 411);
    t.gamma = Rational(1);
    t.delta = Rational(1, 2);
    t.eps_on = {.b = true, .eta = true};
    return t;
}

ExponentTuple step(const ExponentTuple &t) {
    const Rational one(1);
    const Rational b1 = t.b + one;
    const Rational den = Rational(2) * b1;

    ExponentTuple next;
    next.order = t.order + 1;
    next.a = (t.a + t.b + one) / den;
    next.b = t.b / den;
    next.xi = ((t.xi + one) * b1 - t.a * t.eta) / den;
    next.eta = t.eta / den;
    next.alpha = (t.alpha + one) / Rational(2);
    next.gamma = (t.a * t.delta + b1 * (t.gamma + one)) / den;
    next.delta = t.delta / den;
    // Division by 2(b+1) keeps "+eps" on exactly the entries that had it.
    next.eps_on = t.eps_on;
    return next;
}

ExponentTuple derive_tuple(int r) {
    if (r < 4) throw DomainError("derivative-test order must be >= 4, got " + std::to_string(r));
    if (r > kMaxOrder)
        throw DomainError("derivative-test order " + std::to_string(r) + " exceeds cap " +
                          std::to_string(kMaxOrder));
    ExponentTuple t = base_tuple();
    while (t.order < r) t = step(t);
    return t;
}

double bound_eval(const ExponentTuple &t, double M, double T, double eps) {
    const double b = t.b.to_double() + (t.eps_on.b ? eps : 0.0);
    const double eta = t.eta.to_double() + (t.eps_on.eta ? eps : 0.0);
    return std::pow(M, t.a.to_double()) * std::pow(T, b) + std::pow(M, t.xi.to_double()) * std::pow(T, eta) +
           std::pow(M, t.alpha.to_double()) + std::pow(M, t.gamma.to_double()) * std::pow(T, -t.delta.to_double());
}

std::string to_text(const ExponentTuple &t) {
    std::ostringstream os;
    const auto line = [&os](const char *name, const Rational &v, bool eps) {
        os << name << " = " << v.to_string() << (eps ? " +eps" : "") << '\n';
    };
    os << "order = " << t.order << '\n';
    line("a", t.a, false);
    line("b", t.b, t.eps_on.b);
    line("xi", t.xi, false);
    line("eta", t.eta, t.eps_on.eta);
    line("alpha", t.alpha, false);
    line("gamma", t.gamma, false);
    line("delta", t.delta, false);
    return os.str();
}

} // namespace exlab::exponents
