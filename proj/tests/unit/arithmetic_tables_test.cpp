#include "doctest.h"

#include <cmath>
#include <vector>

#include "exlab/arithmetic_tables.hpp"
#include "exlab/errors.hpp"

using namespace exlab::tables;
using exlab::characters::RealCharacter;

namespace {

// Straight-from-the-definition values by trial division and divisor loops.
struct Brute {
    std::uint64_t n_max;
    std::vector<int> mu, chi, lambda, nu, rho;
    std::vector<double> Lambda, lambda_prime;

    Brute(std::uint64_t n, const RealCharacter &c)
        : n_max(n), mu(n + 1), chi(n + 1), lambda(n + 1), nu(n + 1), rho(n + 1), Lambda(n + 1), lambda_prime(n + 1) {
        for (std::uint64_t k = 1; k <= n; ++k) {
            chi[k] = c(k);
            std::uint64_t m = k;
            int sign = 1;
            bool square = false;
            std::uint64_t distinct = 0;
            std::uint64_t last = 0;
            for (std::uint64_t p = 2; p * p <= m; ++p) {
                if (m % p) continue;
                int e = 0;
                while (m % p == 0) {
                    m /= p;
                    ++e;
                }
                ++distinct;
                last = p;
                sign = -sign;
                if (e > 1) square = true;
            }
            if (m > 1) {
                ++distinct;
                last = m;
                sign = -sign;
            }
            mu[k] = square ? 0 : sign;
            if (distinct == 1) Lambda[k] = std::log(static_cast<double>(last));
        }
        for (std::uint64_t k = 1; k <= n; ++k)
            for (std::uint64_t d = 1; d <= k; ++d) {
                if (k % d) continue;
                const std::uint64_t e = k / d;
                lambda[k] += chi[d];
                nu[k] += mu[d] * mu[e] * chi[e];
            }
        for (std::uint64_t k = 1; k <= n; ++k)
            for (std::uint64_t d = 1; d <= k; ++d) {
                if (k % d) continue;
                rho[k] += lambda[d];
                lambda_prime[k] += lambda[d] * Lambda[k / d];
            }
    }
};

} // namespace

TEST_CASE("tables agree with definitions") {
    for (std::int64_t disc : {-4, 5, -8, 12, 13, 1}) {
        const auto chi = RealCharacter::from_discriminant(disc);
        const Brute b(1500, chi);
        const auto t = FunctionTable::build(1500, chi);
        for (std::uint64_t n = 1; n <= 1500; ++n) {
            REQUIRE(t.lambda(n) == b.lambda[n]);
            REQUIRE(t.nu(n) == b.nu[n]);
            REQUIRE(t.rho(n) == b.rho[n]);
            REQUIRE(t.rho_star(n) + t.rho_sub(n) == t.rho(n));
            REQUIRE(t.von_mangoldt(n) == doctest::Approx(b.Lambda[n]).epsilon(1e-12));
            REQUIRE(t.lambda_prime(n) == doctest::Approx(b.lambda_prime[n]).epsilon(1e-12));
            REQUIRE(t.lambda_prime_exact(n).value() == doctest::Approx(b.lambda_prime[n]).epsilon(1e-12));
            REQUIRE(t.von_mangoldt_star(n) + t.von_mangoldt_sub(n) == doctest::Approx(t.von_mangoldt(n)).epsilon(1e-9));
        }
    }
}

TEST_CASE("Lambda = lambda' * nu at the log-combination level") {
    const auto chi = RealCharacter::from_discriminant(-4);
    const auto t = FunctionTable::build(3000, chi);
    for (std::uint64_t n = 2; n <= 3000; ++n) {
        LogCombination conv;
        for (std::uint64_t d = 1; d <= n; ++d)
            if (n % d == 0 && t.nu(n / d) != 0) conv.add_scaled(t.lambda_prime_exact(d), t.nu(n / d));
        REQUIRE(conv == t.von_mangoldt_exact(n));
        LogCombination split = t.von_mangoldt_star_exact(n);
        split += t.von_mangoldt_sub_exact(n);
        REQUIRE(split == t.von_mangoldt_exact(n));
    }
}

TEST_CASE("lambda' stays between 0 and tau(n) log n") {
    const auto t = FunctionTable::build(20000, RealCharacter::from_discriminant(13));
    for (std::uint64_t n = 1; n <= 20000; ++n) {
        int tau = 0;
        for (std::uint64_t d = 1; d * d <= n; ++d)
            if (n % d == 0) tau += (d * d == n) ? 1 : 2;
        REQUIRE(t.lambda_prime(n) >= -1e-12);
        REQUIRE(t.lambda_prime(n) <= tau * std::log(static_cast<double>(n)) + 1e-9);
    }
}

TEST_CASE("nu values on prime powers") {
    const auto chi = RealCharacter::from_discriminant(5);
    const auto t = FunctionTable::build(1000, chi);
    for (std::uint64_t p : {2, 3, 5, 7, 11, 29, 31}) {
        CHECK(t.nu(p) == -1 - chi(p));
        CHECK(t.nu(p * p) == chi(p));
        if (p * p * p <= 1000) CHECK(t.nu(p * p * p) == 0);
    }
}

TEST_CASE("cutoff defaults to D squared") {
    CHECK(FunctionTable::build(100, RealCharacter::from_discriminant(-4)).cutoff() == 16);
    CHECK(FunctionTable::build(100, RealCharacter::from_discriminant(5), {.cutoff = 7}).cutoff() == 7);
    const auto t = FunctionTable::build(200, RealCharacter::from_discriminant(-4));
    CHECK(t.rho_sub(16) == 0);
    CHECK(t.rho_sub(17) != 0);
}

TEST_CASE("divisor sums") {
    const auto chi = RealCharacter::from_discriminant(-4);
    const auto t = FunctionTable::build(100, chi);
    const Brute b(100, chi);
    double expected = 0;
    for (std::uint64_t n = 1; n <= 10; ++n) expected += b.rho[n];
    CHECK(divisor_sum(t, Function::rho, 10.0) == expected);
    CHECK(divisor_sum(t, Function::rho, 10.9) == expected);
    CHECK(divisor_sum(t, Function::lambda, 0.5) == 0.0);
    CHECK_THROWS_AS(divisor_sum(t, Function::rho, 101.0), exlab::RangeError);
}

TEST_CASE("asymptotic residuals are moderate") {
    const auto t = FunctionTable::build(200000, RealCharacter::from_discriminant(-4));
    for (Function f : {Function::lambda, Function::lambda_prime, Function::rho}) {
        const auto r = asymptotic_residual(t, f, 200000.0);
        CHECK(std::abs(r.normalized) < 10.0);
        CHECK(r.main > 0.0);
    }
    CHECK_THROWS_AS(asymptotic_residual(t, Function::nu, 100.0), exlab::ValidationError);
    CHECK(error_exponent(Function::rho) == doctest::Approx(511.0 / 1038.0));
    CHECK(error_exponent(Function::lambda) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("memory budget is enforced") {
    CHECK_THROWS_AS(FunctionTable::build(1000000, RealCharacter::from_discriminant(-4), {.memory_budget_bytes = 1000}),
                    exlab::RangeError);
}

TEST_CASE("function names round-trip") {
    for (Function f : {Function::lambda, Function::nu, Function::lambda_prime, Function::rho, Function::von_mangoldt,
                       Function::rho_star, Function::rho_sub, Function::von_mangoldt_star, Function::von_mangoldt_sub})
        CHECK(parse_function(function_name(f)) == f);
    CHECK_THROWS_AS(parse_function("zeta"), exlab::ValidationError);
}

TEST_CASE("short-interval prime counts") {
    const auto chi = RealCharacter::from_discriminant(-4);
    const auto r = psi_counts(1000, chi, 100.0, 10.0);
    CHECK(r.psi == doctest::Approx(std::log(97.0)).epsilon(1e-12));
    CHECK(std::abs(r.psi - std::log(97.0)) < 1e-12);
    CHECK(r.pi_count == 1);
    CHECK(r.split_exact());

    // windowed counts against the table for a window spanning several segments
    const auto t = FunctionTable::build(3000000, chi);
    const auto w = psi_counts(3000000, chi, 3000000.0, 2500000.0);
    double psi = 0.0;
    double star = 0.0;
    for (std::uint64_t n = 500001; n <= 3000000; ++n) {
        psi += t.von_mangoldt(n);
        star += t.von_mangoldt_star(n);
    }
    CHECK(w.psi == doctest::Approx(psi).epsilon(1e-12));
    CHECK(w.psi_star == doctest::Approx(star).epsilon(1e-9));
    CHECK(w.split_exact());
    CHECK_THROWS_AS(psi_counts(100, chi, 200.0, 10.0), exlab::RangeError);
    CHECK_THROWS_AS(psi_counts(100, chi, 50.0, 0.0), exlab::DomainError);
}

TEST_CASE("logarithmic integral") {
    CHECK(li(2.0) == doctest::Approx(1.045163780117492784).epsilon(1e-12));
    CHECK(li(1e6) == doctest::Approx(78627.5491594622).epsilon(1e-12));
    CHECK(li_difference(1e6 - 1e4, 1e6) == doctest::Approx(li(1e6) - li(1e6 - 1e4)).epsilon(1e-9));
}

TEST_CASE("tau moment") {
    double expected = 0.0;
    for (int d = 1; d <= 10; ++d) {
        int tau = 0;
        for (int k = 1; k <= d; ++k) tau += (d % k == 0);
        expected += static_cast<double>(tau) / d;
    }
    const auto m = tau_moment_bound(10, 1.0);
    CHECK(m.sum == doctest::Approx(expected).epsilon(1e-14));
    CHECK(m.log_power == doctest::Approx(std::pow(std::log(10.0), 3.0)));
    CHECK_THROWS_AS(tau_moment_bound(1000, 1e6), exlab::RangeError);
    CHECK_THROWS_AS(tau_moment_bound(1, 1.0), exlab::DomainError);
}
