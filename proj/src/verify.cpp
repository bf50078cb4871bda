#include "exlab/verify.hpp"

#include <cmath>
#include <numeric>
#include <cstdio>
#include <random>
#include <tuple>
#include <sstream>

#include "exlab/arithmetic_tables.hpp"
#include "exlab/bound_algebra.hpp"
#include "exlab/character.hpp"
#include "exlab/empirical_lab.hpp"
#include "exlab/errors.hpp"
#include "exlab/exponent_calculus.hpp"
#include "exlab/feasibility.hpp"
#include "exlab/numeric.hpp"
#include "exlab/parallel.hpp"

namespace exlab::verify {

namespace {

using characters::RealCharacter;

Rational q(long p, long d = 1) { return Rational(p, d); }

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

struct Check {
    CriterionResult &r;
    void operator()(bool ok, const std::string &what) {
        r.details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
        if (!ok) r.passed = false;
    }
};

CriterionResult start(int id, const char *title) {
    CriterionResult r;
    r.id = id;
    r.title = title;
    r.passed = true;
    return r;
}

// --- 1 -------------------------------------------------------------------

CriterionResult exponent_recursion(const Options &) {
    auto r = start(1, "exponent recursion");
    Check check{r};
    const auto t = exponents::derive_tuple(5);
    check(t.a == q(139, 194) && t.b == q(13, 194) && t.xi == q(163, 388) && t.eta == q(31, 194) &&
              t.alpha == q(745, 822) && t.gamma == q(215, 194) && t.delta == q(21, 97),
          "order 5 = (139/194, 13/194, 163/388, 31/194, 745/822, 215/194, 21/97)");
    bool identities = true;
    auto prev = t;
    for (int j = 6; j <= 50; ++j) {
        const auto cur = exponents::step(prev);
        const Rational f = q(2) * (prev.b + q(1));
        identities = identities && cur.order == j && f * cur.b == prev.b && f * cur.eta == prev.eta &&
                     f * cur.delta == prev.delta;
        prev = cur;
    }
    check(identities, "2(b+1) scaling of b, eta, delta between consecutive orders 5..50");
    return r;
}

// --- 2 -------------------------------------------------------------------

CriterionResult derivation_pipeline(const Options &) {
    auto r = start(2, "derivation pipeline");
    Check check{r};
    bounds::Derivation d;
    try {
        d = bounds::derive_main_theorem();
        check(true, "every stage matches its reference display");
    } catch (const RegressionError &e) {
        check(false, e.what());
        return r;
    }
    using namespace bounds::sym;
    using bounds::Monomial;
    check(d.eq9_bracket.size() == 4, "four bracketed per-block terms");
    check(d.eq10.size() == 5, "five-term bound after eliminating N3 and P");
    check(d.n_choice.same_exponents(Monomial{{D, q(55, 173)}, {Dmax, q(-291, 346)}, {x, q(181, 346)}}),
          "N = " + d.n_choice.to_string());
    check(d.final.same_exponents(bounds::BoundExpr{
              Monomial{{D, q(118, 519)}, {Dmax, q(97, 346)}, {x, q(511, 1038)}},
              Monomial{{D, q(121, 692)}, {Dmax, q(467, 1384)}, {x, q(675, 1384)}},
              Monomial{{D, q(56039, 213309)}, {Dmax, q(69941, 284412)}, {x, q(419257, 853236)}},
              Monomial{{D, q(17936, 50343)}, {Dmax, q(131, 692)}, {x, q(91507, 201372)}},
          }),
          "four final monomials");
    check(d.simplified.same_exponents(Monomial{{D, q(527, 1038)}, {x, q(511, 1038)}}),
          "simplified = " + d.simplified.to_string());
    return r;
}

// --- 3 -------------------------------------------------------------------

CriterionResult improvement_claim(const Options &) {
    auto r = start(3, "improvement claim");
    Check check{r};
    const Rational ox = q(511, 1038);
    const Rational od = q(527, 1038);
    const Rational px = bounds::previous_x_exponent();
    const Rational pd = bounds::previous_d_exponent();
    check(ox < px, "x exponent 511/1038 = " + ox.to_decimal(8) + " < 2498/5073 = " + px.to_decimal(8));
    check(od < pd, "D exponent 527/1038 = " + od.to_decimal(8) + " < 2575/5073 = " + pd.to_decimal(8) +
                       " (cross products 527*5073 = 2673471, 2575*1038 = 2672850)");
    check(q(4922, 10000) < ox && ox < q(4923, 10000), "0.4922 < 511/1038 < 0.4923");
    return r;
}

// --- 4 -------------------------------------------------------------------

int euler_criterion(std::int64_t d, std::int64_t p) {
    if (p == 2) {
        if (d % 2 == 0) return 0;
        const std::int64_t m = ((d % 8) + 8) % 8;
        return (m == 1 || m == 7) ? 1 : -1;
    }
    std::int64_t b = ((d % p) + p) % p;
    if (b == 0) return 0;
    std::int64_t e = (p - 1) / 2;
    std::int64_t acc = 1;
    while (e > 0) {
        if (e & 1) acc = acc * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return acc == 1 ? 1 : -1;
}

CriterionResult characters_and_gauss(const Options &options) {
    auto r = start(4, "characters and Gauss sums");
    Check check{r};
    const auto discs = characters::fundamental_discriminants(200);

    struct PerDisc {
        double worst_modulus = 0.0;
        double worst_twist = 0.0;
        bool euler = true;
        bool multiplicative = true;
        bool period_sum = true;
    };
    const auto results = parallel_map(
        discs,
        [](std::int64_t d) {
            PerDisc out;
            const auto chi = RealCharacter::from_discriminant(d);
            const auto D = static_cast<std::int64_t>(chi.conductor());
            const double root = std::sqrt(static_cast<double>(D));
            const auto g1 = characters::gauss_sum(1, chi);
            for (std::int64_t m = 1; m <= D; ++m) {
                if (std::gcd(m, D) != 1) continue;
                const auto g = characters::gauss_sum(m, chi);
                out.worst_modulus = std::max(out.worst_modulus, std::abs(std::abs(g) - root));
                out.worst_twist = std::max(out.worst_twist, std::abs(g - static_cast<double>(chi.value(m)) * g1));
            }
            for (std::int64_t p = 2; p <= 1000; ++p) {
                bool prime = true;
                for (std::int64_t k = 2; k * k <= p && prime; ++k) prime = p % k != 0;
                if (prime && chi(static_cast<std::uint64_t>(p)) != euler_criterion(d, p)) out.euler = false;
            }
            for (std::uint64_t a = 1; a <= 100; ++a)
                for (std::uint64_t b = 1; b <= 100; ++b)
                    if (chi(a * b) != chi(a) * chi(b)) out.multiplicative = false;
            std::int64_t s = 0;
            for (std::int64_t n = 1; n <= D; ++n) s += chi(static_cast<std::uint64_t>(n));
            out.period_sum = s == 0;
            return out;
        },
        options.threads);

    double worst_modulus = 0.0;
    double worst_twist = 0.0;
    bool euler = true;
    bool mult = true;
    bool sums = true;
    for (const auto &p : results) {
        worst_modulus = std::max(worst_modulus, p.worst_modulus);
        worst_twist = std::max(worst_twist, p.worst_twist);
        euler = euler && p.euler;
        mult = mult && p.multiplicative;
        sums = sums && p.period_sum;
    }
    check(worst_modulus < 1e-9, std::to_string(discs.size()) + " discriminants, max ||G(m)| - sqrt D| < 1e-9");
    check(worst_twist < 1e-9, "max |G(m) - chi(m) G(1)| < 1e-9");
    check(euler, "chi(p) agrees with Euler's criterion for primes p <= 1000");
    check(mult, "chi(ab) = chi(a) chi(b) for a, b <= 100");
    check(sums, "sum of chi over a period is 0");

    bool orth = true;
    std::size_t pairs = 0;
    for (std::int64_t d1 : discs) {
        if (std::llabs(d1) > 60) continue;
        for (std::int64_t d2 : discs) {
            if (std::llabs(d2) > 60) continue;
            const auto c1 = RealCharacter::from_discriminant(d1);
            const auto c2 = RealCharacter::from_discriminant(d2);
            const std::uint64_t L = std::lcm(c1.conductor(), c2.conductor());
            std::int64_t s = 0;
            std::int64_t units = 0;
            for (std::uint64_t n = 1; n <= L; ++n) {
                s += c1(n) * c2(n);
                units += std::gcd(n, L) == 1;
            }
            orth = orth && s == (d1 == d2 ? units : 0);
            ++pairs;
        }
    }
    check(orth, "orthogonality over " + std::to_string(pairs) + " ordered pairs with |D| <= 60");
    return r;
}

// --- 5 -------------------------------------------------------------------

struct IdentityReport {
    std::int64_t disc = 0;
    bool lambda = true, nu = true, rho = true, lambda_prime = true, von_mangoldt = true, range = true;
};

IdentityReport convolution_identities(std::int64_t disc, std::uint64_t N) {
    using tables::LogCombination;
    IdentityReport rep;
    rep.disc = disc;
    const auto chi = RealCharacter::from_discriminant(disc);
    const auto t = tables::FunctionTable::build(N, chi);

    // Independent smallest-prime-factor sieve and Moebius.
    std::vector<std::uint64_t> spf(N + 1, 0);
    for (std::uint64_t i = 2; i <= N; ++i)
        if (spf[i] == 0)
            for (std::uint64_t j = i; j <= N; j += i)
                if (spf[j] == 0) spf[j] = i;
    std::vector<int> mu(N + 1, 1);
    std::vector<std::uint64_t> prime_power_base(N + 1, 0);
    for (std::uint64_t n = 2; n <= N; ++n) {
        const std::uint64_t p = spf[n];
        const std::uint64_t m = n / p;
        mu[n] = (m % p == 0) ? 0 : -mu[m];
        prime_power_base[n] = (m == 1 || prime_power_base[m] == p) ? p : 0;
    }

    std::vector<std::int64_t> lambda(N + 1, 0), nu(N + 1, 0), rho(N + 1, 0);
    for (std::uint64_t d = 1; d <= N; ++d) {
        const int c = chi(d);
        const int mc = mu[d] * c;
        for (std::uint64_t n = d, a = 1; n <= N; n += d, ++a) {
            lambda[n] += c;
            nu[n] += mu[a] * mc;
        }
    }
    for (std::uint64_t d = 1; d <= N; ++d)
        for (std::uint64_t n = d; n <= N; n += d) rho[n] += lambda[d];

    std::vector<LogCombination> lp(N + 1);
    for (std::uint64_t m = 2; m <= N; ++m) {
        const std::uint64_t p = prime_power_base[m];
        if (p == 0) continue;
        for (std::uint64_t n = m, d = 1; n <= N; n += m, ++d)
            if (t.lambda(d) != 0) lp[n].add(p, t.lambda(d));
    }
    std::vector<LogCombination> vm(N + 1);
    for (std::uint64_t d = 1; d <= N; ++d) {
        const int w = t.nu(d);
        if (w == 0) continue;
        for (std::uint64_t n = 2 * d, a = 2; n <= N; n += d, ++a)
            if (!lp[a].empty()) vm[n].add_scaled(lp[a], w);
    }

    for (std::uint64_t n = 1; n <= N; ++n) {
        rep.lambda = rep.lambda && lambda[n] == t.lambda(n);
        rep.nu = rep.nu && nu[n] == t.nu(n);
        rep.rho = rep.rho && rho[n] == t.rho(n);
        rep.lambda_prime = rep.lambda_prime && lp[n] == t.lambda_prime_exact(n);
        LogCombination expected;
        if (prime_power_base[n] != 0) expected.add(prime_power_base[n], 1);
        rep.von_mangoldt = rep.von_mangoldt && vm[n] == expected;
        // 0 <= lambda'(n) <= tau(n) log n, coefficientwise on log p.
        if (n >= 2) {
            std::uint64_t tau = 1;
            std::vector<std::pair<std::uint64_t, int>> f;
            for (std::uint64_t m = n; m > 1;) {
                const std::uint64_t p = spf[m];
                int e = 0;
                while (m % p == 0) {
                    m /= p;
                    ++e;
                }
                tau *= static_cast<std::uint64_t>(e + 1);
                f.emplace_back(p, e);
            }
            for (const auto &[p, c] : lp[n].terms()) {
                const auto it = std::find_if(f.begin(), f.end(), [p = p](const auto &pe) { return pe.first == p; });
                const std::int64_t cap = it == f.end() ? 0 : static_cast<std::int64_t>(tau) * it->second;
                if (c < 0 || c > cap) rep.range = false;
            }
        }
    }
    return rep;
}

CriterionResult convolution_oracle(const Options &options) {
    auto r = start(5, "convolution identities");
    Check check{r};
    const std::uint64_t N = 100000;
    const std::vector<std::int64_t> discs{-4, 5, -8, 12, 13};
    const auto reps = parallel_map(discs, [N](std::int64_t d) { return convolution_identities(d, N); }, options.threads);
    for (const auto &rep : reps) {
        const std::string tag = "D = " + std::to_string(rep.disc) + ", n <= " + std::to_string(N) + ": ";
        check(rep.lambda, tag + "lambda = 1 * chi");
        check(rep.nu, tag + "nu = mu * (mu chi)");
        check(rep.rho, tag + "rho = 1 * lambda");
        check(rep.lambda_prime, tag + "lambda' = lambda * Lambda (exact log form)");
        check(rep.von_mangoldt, tag + "Lambda = lambda' * nu (exact log form)");
        check(rep.range, tag + "0 <= lambda'(n) <= tau(n) log n");
    }
    return r;
}

// --- 6 -------------------------------------------------------------------

CriterionResult delta_oracle(const Options &options) {
    auto r = start(6, "triple sum oracle");
    Check check{r};
    const std::uint64_t X = 10000;
    const std::vector<std::int64_t> discs{1, -4, 5};
    std::vector<std::array<std::int64_t, 3>> triples;
    for (auto a : discs)
        for (auto b : discs)
            for (auto c : discs) triples.push_back({a, b, c});

    const auto mismatches = parallel_map(
        triples,
        [X](const std::array<std::int64_t, 3> &d) {
            const auto c1 = RealCharacter::from_discriminant(d[0]);
            const auto c2 = RealCharacter::from_discriminant(d[1]);
            const auto c3 = RealCharacter::from_discriminant(d[2]);
            std::vector<std::int64_t> w(X + 1, 0);
            for (std::uint64_t i = 1; i <= X; ++i)
                for (std::uint64_t j = 1; i * j <= X; ++j)
                    for (std::uint64_t k = 1; i * j * k <= X; ++k) w[i * j * k] += c1(i) * c2(j) * c3(k);
            std::int64_t naive = 0;
            std::uint64_t bad = 0;
            for (std::uint64_t x = 1; x <= X; ++x) {
                naive += w[x];
                if (empirical::triple_sum(c1, c2, c3, x) != naive) ++bad;
            }
            return bad;
        },
        options.threads);
    std::uint64_t total_bad = 0;
    for (auto b : mismatches) total_bad += b;
    check(total_bad == 0, "hyperbola = enumeration for all 27 triples over {1, -4, 5} and every x <= 10000 (" +
                              std::to_string(total_bad) + " mismatches)");
    const auto one = RealCharacter::trivial();
    const auto s = empirical::triple_delta(one, one, one, 10.0);
    check(s.raw_sum == 53, "sum_{n <= 10} d3(n) = " + std::to_string(s.raw_sum));
    return r;
}

// --- 7 -------------------------------------------------------------------

CriterionResult residual_consistency(const Options &options) {
    auto r = start(7, "asymptotic residuals");
    Check check{r};
    const std::vector<double> xs = options.quick ? std::vector<double>{1e4, 2.5e4, 5e4, 1e5}
                                                 : std::vector<double>{1e4, 1e5, 1e6, 1e7};
    const auto chi = RealCharacter::from_discriminant(-4);
    const auto t = tables::FunctionTable::build(static_cast<std::uint64_t>(xs.back()), chi);
    const std::vector<tables::Function> fs{tables::Function::lambda, tables::Function::lambda_prime,
                                           tables::Function::rho};
    const auto per_f = parallel_map(
        fs,
        [&](tables::Function f) {
            std::vector<std::pair<double, double>> normalized;
            std::vector<std::pair<double, double>> raw;
            std::vector<std::pair<double, double>> envelope;
            for (double x : xs) {
                const auto res = tables::asymptotic_residual(t, f, x);
                normalized.emplace_back(x, res.normalized);
                raw.emplace_back(x, std::abs(res.residual));
                envelope.emplace_back(x, tables::residual_envelope(t, f, x));
            }
            return std::make_tuple(normalized, raw, envelope);
        },
        options.threads);
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto &[normalized, raw, envelope] = per_f[i];
        const std::string name = tables::function_name(fs[i]);
        double worst = 0.0;
        std::string values;
        for (const auto &[x, v] : normalized) {
            worst = std::max(worst, std::abs(v));
            values += (values.empty() ? "" : ", ") + fixed4(v);
        }
        check(worst < 10.0, name + ": normalized residuals [" + values + "] below 10");
        const double slope = empirical::exponent_fit(envelope).slope;
        const double limit = tables::error_exponent(fs[i]) + 0.05;
        check(slope <= limit, name + ": slope of max |residual| over [x/2, x] is " + fixed4(slope) + ", limit " +
                                  fixed4(limit));
        r.details.push_back("info " + name + ": slope of |residual| at the grid points alone is " +
                            fixed4(empirical::exponent_fit(raw).slope));
    }
    return r;
}

// --- 8 -------------------------------------------------------------------

CriterionResult feasibility_regression(const Options &options) {
    auto r = start(8, "feasibility");
    Check check{r};
    const Rational theta(4923, 10000);
    check(feasibility::check(theta, 433433), "condition holds at theta = 0.4923, r = 433433");
    check(!feasibility::check(theta, 429672), "condition fails at r = 429672");
    const auto m = feasibility::minimal_r(theta);
    check(m && *m == 429673, "minimal r = " + (m ? std::to_string(*m) : std::string("infeasible")));

    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<long> th(4900, 5500);
    std::uniform_int_distribution<long> rr(1, 1000000);
    bool monotone = true;
    for (int i = 0; i < 1000; ++i) {
        const Rational t(th(rng), 10000);
        const long k = rr(rng);
        const bool here = feasibility::check(t, k);
        const bool up_theta = feasibility::check(t + Rational(1, 10000), k);
        const bool up_r = feasibility::check(t, k + 1);
        if (here && (!up_theta || !up_r)) monotone = false;
    }
    check(monotone, "monotone in theta and r on 1000 random points (seed " + std::to_string(options.seed) + ")");
    return r;
}

// --- 9 -------------------------------------------------------------------

CriterionResult psi_split(const Options &) {
    auto r = start(9, "psi split");
    Check check{r};
    const auto chi = RealCharacter::from_discriminant(-4);
    for (double x : {1e5, 1e6}) {
        const auto rep = tables::psi_counts(static_cast<std::uint64_t>(x), chi, x, x);
        check(rep.split_exact(), "psi = psi^* + psi_* exactly at x = " + format_sig12(x) + " (psi = " +
                                     format_sig12(rep.psi) + ")");
    }
    const auto small = tables::psi_counts(100, chi, 100.0, 10.0);
    check(std::abs(small.psi - std::log(97.0)) < 1e-12, "psi(100) - psi(90) = log 97");
    return r;
}

// --- 10 ------------------------------------------------------------------

CriterionResult determinism(const Options &options) {
    auto r = start(10, "determinism");
    Check check{r};
    Options quick = options;
    quick.quick = true;
    std::vector<CriterionResult> first;
    std::vector<CriterionResult> second;
    for (int id = 1; id < kCriterionCount; ++id) first.push_back(run_criterion(id, quick));
    Options single = quick;
    single.threads = 1;
    for (int id = 1; id < kCriterionCount; ++id) second.push_back(run_criterion(id, single));
    check(render(first, quick) == render(second, quick),
          "quick reports for criteria 1-9 are byte-identical across two runs and thread counts");
    return r;
}

} // namespace

CriterionResult run_criterion(int id, const Options &options) {
    switch (id) {
    case 1: return exponent_recursion(options);
    case 2: return derivation_pipeline(options);
    case 3: return improvement_claim(options);
    case 4: return characters_and_gauss(options);
    case 5: return convolution_oracle(options);
    case 6: return delta_oracle(options);
    case 7: return residual_consistency(options);
    case 8: return feasibility_regression(options);
    case 9: return psi_split(options);
    case 10: return determinism(options);
    default: throw ValidationError("no criterion " + std::to_string(id) + " (valid: 1-10)");
    }
}

std::vector<CriterionResult> run_all(const Options &options) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, options));
    return out;
}

std::string render(const std::vector<CriterionResult> &results, const Options &options) {
    std::ostringstream os;
    os << "mode " << (options.quick ? "quick" : "full") << ", seed " << options.seed << '\n';
    int passed = 0;
    for (const auto &c : results) {
        os << (c.passed ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.title << '\n';
        for (const auto &d : c.details) os << "    " << d << '\n';
        passed += c.passed;
    }
    os << passed << '/' << results.size() << " criteria passed\n";
    return os.str();
}

} // namespace exlab::verify
