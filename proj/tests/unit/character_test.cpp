#include "doctest.h"

#include <array>
#include <cmath>
#include <numeric>

#include "exlab/character.hpp"
#include "exlab/errors.hpp"
#include "exlab/numeric.hpp"

using namespace exlab::characters;

namespace {

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
    std::int64_t r = 1;
    b %= m;
    if (b < 0) b += m;
    while (e > 0) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

// chi_d(p) from Euler's criterion for odd p and the mod-8 rule at p = 2.
int chi_at_prime(std::int64_t d, std::int64_t p) {
    if (p == 2) {
        if (d % 2 == 0) return 0;
        const std::int64_t r = ((d % 8) + 8) % 8;
        return (r == 1 || r == 7) ? 1 : -1;
    }
    const std::int64_t v = powmod(d, (p - 1) / 2, p);
    return v == 0 ? 0 : (v == 1 ? 1 : -1);
}

int chi_by_factoring(std::int64_t d, std::int64_t n) {
    int v = 1;
    for (std::int64_t p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            v *= chi_at_prime(d, p);
            n /= p;
        }
    if (n > 1) v *= chi_at_prime(d, n);
    return v;
}

bool squarefree(std::int64_t n) {
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0) return false;
    return true;
}

bool fundamental_by_definition(std::int64_t d) {
    if (d == 1 || d == 0) return false;
    const std::int64_t r = ((d % 4) + 4) % 4;
    if (r == 1) return squarefree(std::llabs(d));
    if (r != 0) return false;
    const std::int64_t m = d / 4;
    const std::int64_t mr = ((m % 4) + 4) % 4;
    return (mr == 2 || mr == 3) && squarefree(std::llabs(m));
}

} // namespace

TEST_CASE("fundamental discriminants match the definition") {
    const auto list = fundamental_discriminants(300);
    std::size_t count = 0;
    for (std::int64_t d = -300; d <= 300; ++d) {
        const bool expected = fundamental_by_definition(d);
        CHECK(fundamental_discriminant_problem(d).empty() == (expected || d == 1));
        if (expected) ++count;
    }
    CHECK(list.size() == count);
    CHECK_THROWS_AS(RealCharacter::from_discriminant(12 * 4), exlab::ValidationError);
    CHECK_THROWS_AS(RealCharacter::from_discriminant(-3 * 9), exlab::ValidationError);
    CHECK_THROWS_AS(RealCharacter::from_discriminant(0), exlab::ValidationError);
    CHECK(RealCharacter::from_discriminant(-4).conductor() == 4);
    CHECK(RealCharacter::from_discriminant(-4).parity() == Parity::odd);
    CHECK(RealCharacter::from_discriminant(5).parity() == Parity::even);
}

TEST_CASE("kronecker symbol matches Euler's criterion") {
    for (std::int64_t d : fundamental_discriminants(120)) {
        const auto chi = RealCharacter::from_discriminant(d);
        for (std::int64_t n = 1; n <= 400; ++n) {
            const int expected = std::gcd(n, d) == 1 ? chi_by_factoring(d, n) : 0;
            REQUIRE(chi(static_cast<std::uint64_t>(n)) == expected);
            REQUIRE(kronecker(d, n) == expected);
        }
        CHECK(chi.value(-1) == (d < 0 ? -1 : 1));
    }
    CHECK(kronecker(2, 0) == 0);
    CHECK(kronecker(1, 0) == 1);
    CHECK(kronecker(-1, 0) == 1);
}

TEST_CASE("characters are periodic, multiplicative and sum to zero") {
    for (std::int64_t d : {-4, 5, -8, 12, 13, -163, 89}) {
        const auto chi = RealCharacter::from_discriminant(d);
        const auto D = static_cast<std::int64_t>(chi.conductor());
        int period_sum = 0;
        for (std::int64_t n = 1; n <= D; ++n) period_sum += chi(n);
        CHECK(period_sum == 0);
        for (std::uint64_t a = 1; a <= 60; ++a)
            for (std::uint64_t b = 1; b <= 60; ++b) REQUIRE(chi(a * b) == chi(a) * chi(b));
        std::int64_t running = 0;
        for (std::uint64_t t = 1; t <= 1000; ++t) {
            running += chi(t);
            REQUIRE(chi.partial_sum(t) == running);
        }
    }
    const auto one = RealCharacter::trivial();
    CHECK(one.is_trivial());
    CHECK(one(12345) == 1);
    CHECK(one.partial_sum(77) == 77);
}

TEST_CASE("orthogonality of distinct characters") {
    const auto ds = fundamental_discriminants(40);
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = 0; j < ds.size(); ++j) {
            const auto c1 = RealCharacter::from_discriminant(ds[i]);
            const auto c2 = RealCharacter::from_discriminant(ds[j]);
            const std::uint64_t L = std::lcm(c1.conductor(), c2.conductor());
            std::int64_t s = 0;
            std::int64_t units = 0;
            for (std::uint64_t n = 1; n <= L; ++n) {
                s += c1(n) * c2(n);
                if (std::gcd(n, L) == 1) ++units;
            }
            CHECK(s == (i == j ? units : 0));
        }
}

TEST_CASE("gauss sums") {
    for (std::int64_t d : fundamental_discriminants(200)) {
        const auto chi = RealCharacter::from_discriminant(d);
        const double root = std::sqrt(static_cast<double>(chi.conductor()));
        const auto g1 = gauss_sum(1, chi);
        if (d > 0) {
            CHECK(g1.real() == doctest::Approx(root).epsilon(1e-12));
            CHECK(std::abs(g1.imag()) < 1e-9);
        } else {
            CHECK(g1.imag() == doctest::Approx(root).epsilon(1e-12));
            CHECK(std::abs(g1.real()) < 1e-9);
        }
        for (std::int64_t m = 1; m <= 30; ++m) {
            const auto g = gauss_sum(m, chi);
            if (std::gcd(m, d) == 1) {
                CHECK(std::abs(std::abs(g) - root) < 1e-9);
            }
            CHECK(std::abs(g - static_cast<double>(chi.value(m)) * g1) < 1e-9);
        }
    }
}

TEST_CASE("L(1, chi) against class-number values") {
    using exlab::kPi;
    CHECK(l_one(RealCharacter::from_discriminant(-4)) == doctest::Approx(kPi / 4).epsilon(1e-13));
    CHECK(l_one(RealCharacter::from_discriminant(-3)) == doctest::Approx(kPi / (3 * std::sqrt(3.0))).epsilon(1e-13));
    CHECK(l_one(RealCharacter::from_discriminant(-23)) == doctest::Approx(3 * kPi / std::sqrt(23.0)).epsilon(1e-13));
    CHECK(l_one(RealCharacter::from_discriminant(-163)) == doctest::Approx(kPi / std::sqrt(163.0)).epsilon(1e-13));
    const double phi = (1 + std::sqrt(5.0)) / 2;
    CHECK(l_one(RealCharacter::from_discriminant(5)) == doctest::Approx(2 * std::log(phi) / std::sqrt(5.0)).epsilon(1e-13));
    CHECK(l_one(RealCharacter::from_discriminant(8)) ==
          doctest::Approx(std::log(1 + std::sqrt(2.0)) / std::sqrt(2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(l_one(RealCharacter::trivial()), exlab::DomainError);
}

TEST_CASE("series evaluation agrees with closed forms") {
    for (std::int64_t d : {-4, 5, -8, 12, 13, -7}) {
        const auto chi = RealCharacter::from_discriminant(d);
        CHECK(l_series(chi, 1.0) == doctest::Approx(l_one(chi)).epsilon(1e-10));
    }
    const double catalan = 0.915965594177219015;
    CHECK(l_series(RealCharacter::from_discriminant(-4), 2.0) == doctest::Approx(catalan).epsilon(1e-12));
}

TEST_CASE("L'(1, chi)") {
    const auto chi = RealCharacter::from_discriminant(-4);
    const double g = exlab::kEulerGamma;
    const double closed = exlab::kPi / 4 *
                          (g + 2 * std::log(2.0) + 3 * std::log(exlab::kPi) - 4 * std::lgamma(0.25));
    CHECK(l_one_derivative(chi) == doctest::Approx(closed).epsilon(1e-9));
    for (std::int64_t d : {5, -8, 13}) {
        const auto c = RealCharacter::from_discriminant(d);
        const double h = 1e-4;
        const double fd = (l_series(c, 1 + h) - l_series(c, 1 - h)) / (2 * h);
        CHECK(l_one_derivative(c) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("first Stieltjes constant") {
    CHECK(stieltjes_gamma1_euler_maclaurin() == doctest::Approx(kStieltjesGamma1).epsilon(1e-12));
}

TEST_CASE("residue main terms") {
    const auto one = RealCharacter::trivial();
    const auto m4 = RealCharacter::from_discriminant(-4);
    const auto five = RealCharacter::from_discriminant(5);

    const std::array<RealCharacter, 3> none{m4, five, m4};
    CHECK(residue_main_term(ResiduePattern::from(none), 1e6) == 0.0);

    const std::array<RealCharacter, 2> pair{one, m4};
    CHECK(residue_main_term(ResiduePattern::from(pair), 1000.0) == doctest::Approx(1000.0 * exlab::kPi / 4));

    // sum_{n <= x} d(n) = x log x + (2 gamma - 1) x + O(sqrt x)
    const std::array<RealCharacter, 2> zz{one, one};
    const double x = 1e6;
    CHECK(residue_main_term(ResiduePattern::from(zz), x) ==
          doctest::Approx(x * std::log(x) + (2 * exlab::kEulerGamma - 1) * x).epsilon(1e-12));

    // sum_{n <= x} d3(n) against a brute-force count
    std::vector<std::uint32_t> d3(20001, 0);
    for (std::uint64_t a = 1; a <= 20000; ++a)
        for (std::uint64_t b = 1; a * b <= 20000; ++b)
            for (std::uint64_t c = 1; a * b * c <= 20000; ++c) ++d3[a * b * c];
    const double total = std::accumulate(d3.begin(), d3.end(), 0.0);
    const std::array<RealCharacter, 3> zzz{one, one, one};
    CHECK(std::abs(total - residue_main_term(ResiduePattern::from(zzz), 20000.0)) < 2000.0);

    const std::array<RealCharacter, 4> too_many{one, one, one, one};
    CHECK_THROWS(ResiduePattern::from(too_many));
}
