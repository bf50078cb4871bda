#include "doctest.h"

#include <cmath>
#include <random>

#include "exlab/bound_algebra.hpp"
#include "exlab/errors.hpp"

using exlab::Rational;
using namespace exlab::bounds;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

Monomial random_monomial(std::mt19937_64 &rng, const std::vector<Symbol> &syms) {
    std::uniform_int_distribution<int> num(-12, 12);
    std::uniform_int_distribution<int> den(1, 6);
    Monomial m;
    for (const auto &s : syms) m = m * Monomial::power(s, Rational(num(rng), den(rng)));
    return m;
}

} // namespace

TEST_CASE("monomial basics") {
    const Monomial a{{sym::D, q(1, 2)}, {sym::x, q(1, 3)}};
    const Monomial b{{sym::D, q(-1, 2)}, {sym::N, q(2)}};
    const Monomial ab = a * b;
    CHECK_FALSE(ab.contains(sym::D));
    CHECK(ab.exponent(sym::x) == q(1, 3));
    CHECK(ab.exponent(sym::N) == q(2));
    CHECK((a / a).empty());
    CHECK(a.pow(q(6)).exponent(sym::D) == q(3));
    CHECK(Monomial::power(sym::x, q(0)).empty());
    CHECK(Monomial().to_string() == "1");
    CHECK(Monomial({{sym::D, q(14, 97)}, {sym::x, q(69, 194)}}, true).to_string() == "D^(14/97) x^(69/194) [+eps]");
}

TEST_CASE("substitute") {
    const Monomial m{{sym::N, q(3)}, {sym::x, q(1)}};
    const Monomial r = substitute(m, sym::N, Monomial{{sym::x, q(1, 3)}, {sym::D, q(-1)}});
    CHECK(r == Monomial{{sym::x, q(2)}, {sym::D, q(-3)}});
    CHECK(substitute(m, sym::P, Monomial{{sym::x, q(1)}}) == m);
    CHECK_THROWS_AS(substitute(m, sym::N, Monomial{{sym::N, q(1)}}), exlab::AlgebraError);
}

TEST_CASE("bound expressions merge equal terms") {
    BoundExpr e{Monomial{{sym::x, q(1)}}, Monomial({{sym::x, q(1)}}, true), Monomial{{sym::D, q(1)}}};
    CHECK(e.size() == 2);
    CHECK(e.terms()[0].eps());
    const BoundExpr f{Monomial{{sym::D, q(1)}}, Monomial({{sym::x, q(1)}}, true)};
    CHECK(e == f);
}

TEST_CASE("eliminate_bounded picks the worse endpoint") {
    const BoundExpr e{Monomial{{sym::N3, q(-1, 2)}, {sym::x, q(1)}}, Monomial{{sym::N3, q(1, 4)}}};
    const auto r = eliminate_bounded(e, sym::N3, Monomial{{sym::P, q(1, 3)}}, Monomial{{sym::N, q(1)}});
    CHECK(r == BoundExpr{Monomial{{sym::P, q(-1, 6)}, {sym::x, q(1)}}, Monomial{{sym::N, q(1, 4)}}});
    CHECK_THROWS_AS(eliminate_bounded(e, sym::N3, std::nullopt, Monomial{{sym::N, q(1)}}), exlab::AlgebraError);
}

TEST_CASE("balance equalizes the two terms") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const Monomial t1 = random_monomial(rng, {sym::D, sym::x, sym::N});
        const Monomial t2 = random_monomial(rng, {sym::D, sym::Dmax, sym::N});
        if (t1.exponent(sym::N) == t2.exponent(sym::N)) {
            CHECK_THROWS_AS(balance(t1, t2, sym::N), exlab::AlgebraError);
            continue;
        }
        const Monomial n = balance(t1, t2, sym::N);
        CHECK_FALSE(n.contains(sym::N));
        CHECK(substitute(t1, sym::N, n) == substitute(t2, sym::N, n));
    }
}

TEST_CASE("dominance agrees with sampling under Dmax <= D <= x") {
    std::mt19937_64 rng(11);
    const auto a = Assumptions::dmax_d_x();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int proven = 0;
    for (int i = 0; i < 400; ++i) {
        const Monomial big = random_monomial(rng, {sym::Dmax, sym::D, sym::x});
        const Monomial small = random_monomial(rng, {sym::Dmax, sym::D, sym::x});
        bool sampled = true;
        for (int k = 0; k < 300 && sampled; ++k) {
            const double lx = 1.0 + 50.0 * u(rng);
            const double ld = lx * u(rng);
            const double lm = ld * u(rng);
            const std::map<Symbol, double> at{{sym::x, std::exp(lx)}, {sym::D, std::exp(ld)}, {sym::Dmax, std::exp(lm)}};
            if (std::log(evaluate(big, at)) < std::log(evaluate(small, at)) - 1e-9) sampled = false;
        }
        const bool claimed = dominates(big, small, a);
        if (claimed) {
            ++proven;
            CHECK(sampled);
        }
    }
    CHECK(proven > 0);
    CHECK(dominates(Monomial{{sym::x, q(1)}}, Monomial{{sym::D, q(1)}}, a));
    CHECK_FALSE(dominates(Monomial{{sym::D, q(1)}}, Monomial{{sym::x, q(1)}}, a));
    CHECK(dominates(Monomial{{sym::D, q(1)}}, Monomial{{sym::Dmax, q(1)}}, a));
}

TEST_CASE("dominant_simplify reports incomparable pairs") {
    const auto a = Assumptions::dmax_d_x();
    const BoundExpr e{Monomial{{sym::x, q(1, 2)}}, Monomial{{sym::D, q(1)}, {sym::x, q(1, 4)}}};
    CHECK_THROWS_AS(dominant_simplify(e, a), exlab::IncomparableError);
    const BoundExpr g{Monomial{{sym::x, q(1, 2)}, {sym::Dmax, q(1, 3)}}, Monomial{{sym::x, q(1, 3)}}};
    CHECK(dominant_simplify(g, a) == Monomial{{sym::x, q(1, 2)}, {sym::D, q(1, 3)}});
    CHECK(fold_symbols(Monomial{{sym::Dmax, q(-1)}, {sym::D, q(1)}}, a) == Monomial{{sym::D, q(1)}});
}

TEST_CASE("evaluate") {
    const Monomial m({{sym::D, q(1, 2)}, {sym::x, q(1, 3)}}, true);
    CHECK(evaluate(m, {{sym::D, 4.0}, {sym::x, 27.0}}) == doctest::Approx(6.0));
    CHECK(evaluate(m, {{sym::D, 4.0}, {sym::x, 27.0}}, 1.0 / 3.0) == doctest::Approx(18.0));
    CHECK_THROWS_AS(evaluate(m, {{sym::D, 4.0}}), exlab::ValidationError);
    CHECK(evaluate(BoundExpr{m, Monomial{{sym::D, q(1)}}}, {{sym::D, 4.0}, {sym::x, 27.0}}) == doctest::Approx(10.0));
}

TEST_CASE("derivation reproduces every stage") {
    const Derivation d = derive_main_theorem();
    const Monomial h = Monomial::power(sym::Dmax, q(1, 2));
    using namespace sym;
    CHECK(d.eq9_bracket.same_exponents(BoundExpr{
        Monomial{{D, q(-13, 582)}, {N3, q(-55, 194)}, {P, q(13, 582)}, {x, q(13, 582)}},
        Monomial{{D, q(-31, 582)}, {N3, q(-225, 388)}, {P, q(31, 582)}, {x, q(31, 582)}},
        Monomial{{N3, q(-77, 822)}},
        Monomial{{D, q(7, 97)}, {N3, q(21, 194)}, {P, q(-7, 97)}, {x, q(-7, 97)}},
    }));
    CHECK(d.eq10.same_exponents(BoundExpr{
        Monomial{{D, q(1, 3)}, {x, q(2, 3)}, {N, q(-1, 3)}},
        Monomial{{D, q(14, 97)}, {N, q(76, 291)}, {x, q(69, 194)}} * h,
        Monomial{{D, q(11, 97)}, {N, q(75, 388)}, {x, q(75, 194)}} * h,
        Monomial{{D, q(1, 6)}, {N, q(745, 2466)}, {x, q(1, 3)}} * h,
        Monomial{{D, q(139, 582)}, {N, q(215, 582)}, {x, q(76, 291)}} * h,
    }));
    CHECK(d.n_choice.same_exponents(Monomial{{D, q(55, 173)}, {Dmax, q(-291, 346)}, {x, q(181, 346)}}));
    CHECK(d.final.same_exponents(BoundExpr{
        Monomial{{D, q(118, 519)}, {Dmax, q(97, 346)}, {x, q(511, 1038)}},
        Monomial{{D, q(121, 692)}, {Dmax, q(467, 1384)}, {x, q(675, 1384)}},
        Monomial{{D, q(56039, 213309)}, {Dmax, q(69941, 284412)}, {x, q(419257, 853236)}},
        Monomial{{D, q(17936, 50343)}, {Dmax, q(131, 692)}, {x, q(91507, 201372)}},
    }));
    CHECK(d.simplified.same_exponents(Monomial{{D, q(527, 1038)}, {x, q(511, 1038)}}));
    CHECK(d.simplified.eps());
}

TEST_CASE("derivation serializes") {
    const auto j = run_derivation().to_json();
    CHECK(j["simplified"]["exponents"]["x"] == "511/1038");
    CHECK(j["final"].size() == 4);
    const auto text = run_derivation().to_text();
    CHECK(text.find("D^(527/1038) x^(511/1038)") != std::string::npos);
}

TEST_CASE("exponent comparison with the earlier result") {
    CHECK(q(511, 1038) < previous_x_exponent());
    CHECK(q(527, 1038) > previous_d_exponent());
}
