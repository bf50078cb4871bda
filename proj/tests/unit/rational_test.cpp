#include "doctest.h"

#include <unordered_set>

#include "exlab/errors.hpp"
#include "exlab/rational.hpp"

using exlab::Rational;

TEST_CASE("rational canonical form") {
    CHECK(Rational(6, -4).to_string() == "-3/2");
    CHECK(Rational(10, 5).to_string() == "2");
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(0, 7).sign() == 0);
    CHECK_THROWS_AS(Rational(1, 0), exlab::DomainError);
}

TEST_CASE("rational parse") {
    CHECK(Rational::parse("139/194") == Rational(139, 194));
    CHECK(Rational::parse("0.4923") == Rational(4923, 10000));
    CHECK(Rational::parse("-1.5e-2") == Rational(-3, 200));
    CHECK(Rational::parse("12") == Rational(12));
    CHECK(Rational::parse("1e3") == Rational(1000));
    CHECK_THROWS(Rational::parse("abc"));
    CHECK_THROWS(Rational::parse("1/0"));
    CHECK_THROWS(Rational::parse(""));
}

TEST_CASE("rational arithmetic and ordering") {
    const Rational a(13, 84);
    const Rational b(31, 84);
    CHECK(a + b == Rational(11, 21));
    CHECK(b - a == Rational(3, 14));
    CHECK(a * b == Rational(403, 7056));
    CHECK(a / b == Rational(13, 31));
    CHECK(a < b);
    CHECK(Rational(-1, 3) < Rational(-1, 4));
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(-7, 2).ceil() == -3);
    CHECK(Rational(3, 7).inverse() == Rational(7, 3));
    CHECK_THROWS(Rational(0).inverse());
}

TEST_CASE("rational decimal rendering") {
    CHECK(Rational(511, 1038).to_decimal(6) == "0.492293");
    CHECK(Rational(2498, 5073).to_decimal(6) == "0.492411");
    CHECK(Rational(-1, 8).to_decimal(2) == "-0.13");
    CHECK(Rational(5).to_decimal(3) == "5.000");
    CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("rational hashing agrees with equality") {
    std::unordered_set<Rational> s{Rational(1, 2), Rational(2, 4), Rational(3, 6)};
    CHECK(s.size() == 1);
}
