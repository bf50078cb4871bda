#include "exlab/feasibility.hpp"

#include <cmath>
#include <sstream>

#include "exlab/errors.hpp"

namespace exlab::feasibility {

bool check(const Rational &theta, std::int64_t r) {
    if (r < 1) throw DomainError("feasibility check needs r >= 1, got " + std::to_string(r));
    const FeasibilityProblem p;
    const Rational rr(static_cast<long>(r));
    return p.lead / rr + p.c0 + p.c1 / rr <= theta;
}

std::optional<std::int64_t> minimal_r(const Rational &theta) {
    const FeasibilityProblem p;
    if (theta <= p.c0) return std::nullopt;
    // (lead + c1) / r <= theta - c0  <=>  r >= (lead + c1) / (theta - c0)
    const mpz_class r = ((p.lead + p.c1) / (theta - p.c0)).ceil();
    if (r < 1) return 1;
    if (!r.fits_slong_p()) throw RangeError("minimal r does not fit in 64 bits");
    return r.get_si();
}

ClaimReport claim_report(double x, const Rational &alpha, double D, std::int64_t r) {
    if (!(x > 0.0) || !(D >= 1.0) || r < 1) throw DomainError("claim report needs x > 0, D >= 1, r >= 1");
    const FeasibilityProblem p;
    ClaimReport rep;
    rep.log_x = std::log(x);
    rep.x_large_enough = rep.log_x >= static_cast<double>(r) * std::log(D);
    rep.alpha_in_range = alpha >= alpha_threshold() && alpha <= Rational(1);
    rep.condition_holds = check(alpha, r);
    const double exponent = (p.c0 + p.c1 / Rational(static_cast<long>(r))).to_double();
    rep.log_lhs = 2.5 * std::log(D) + exponent * rep.log_x;
    rep.log_y = alpha.to_double() * rep.log_x;
    rep.y_range_holds = rep.log_lhs < rep.log_y;
    return rep;
}

std::string ClaimReport::to_text() const {
    std::ostringstream os;
    const auto yn = [](bool b) { return b ? "yes" : "no"; };
    os << "x >= D^r: " << yn(x_large_enough) << '\n'
       << "alpha in [4923/10000, 1]: " << yn(alpha_in_range) << '\n'
       << "parameter condition at (alpha, r): " << yn(condition_holds) << '\n'
       << "D^(5/2) x^(c0 + c1/r) < x^alpha: " << yn(y_range_holds) << " (log lhs " << log_lhs << ", log y " << log_y
       << ")\n";
    return os.str();
}

} // namespace exlab::feasibility
