#include "exlab/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "exlab/arithmetic_tables.hpp"
#include "exlab/bound_algebra.hpp"
#include "exlab/character.hpp"
#include "exlab/empirical_lab.hpp"
#include "exlab/errors.hpp"
#include "exlab/exponent_calculus.hpp"
#include "exlab/feasibility.hpp"
#include "exlab/numeric.hpp"
#include "exlab/parallel.hpp"
#include "exlab/verify.hpp"

namespace exlab::cli {

namespace {

using json = nlohmann::json;
using characters::RealCharacter;

double j12(double v) { return round_sig12(v); }
std::string f12(double v) { return format_sig12(v); }

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

/// key=value lines, '#' comments. Each entry becomes "--key=value".
std::vector<std::string> read_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file '" + path + "'");
    std::vector<std::string> extra;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || key == "config")
            throw ValidationError(path + ":" + std::to_string(lineno) + ": invalid key '" + key + "'");
        extra.push_back("--" + key + "=" + value);
    }
    return extra;
}

std::filesystem::path output_path(const std::string &out) {
    std::filesystem::path p(out);
    if (p.is_relative())
        if (const char *dir = std::getenv(kOutputDirEnv); dir && *dir) p = std::filesystem::path(dir) / p;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    return p;
}

/// Streams to --out when given, otherwise to the command's stdout.
class Sink {
public:
    Sink(const std::string &out_path, std::ostream &fallback) {
        if (!out_path.empty()) {
            path_ = output_path(out_path);
            file_.open(path_);
            if (!file_) throw ValidationError("cannot write '" + path_.string() + "'");
        }
        stream_ = out_path.empty() ? &fallback : &file_;
    }
    std::ostream &stream() { return *stream_; }
    bool to_file() const { return stream_ == &file_; }
    const std::filesystem::path &path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream file_;
    std::ostream *stream_ = nullptr;
};

RealCharacter character(std::int64_t d) { return RealCharacter::from_discriminant(d); }

std::pair<std::int64_t, std::int64_t> parse_range(const std::string &text, const std::string &sep) {
    const auto pos = text.find(sep);
    try {
        if (pos == std::string::npos) {
            const std::int64_t v = std::stoll(text);
            return {v, v};
        }
        return {std::stoll(text.substr(0, pos)), std::stoll(text.substr(pos + sep.size()))};
    } catch (const std::exception &) {
        throw ValidationError("malformed range '" + text + "' (expected a" + sep + "b)");
    }
}

double parse_real(const std::string &s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception &) {
        throw ValidationError("malformed number '" + s + "'");
    }
}

/// "lo:hi:geometric:n", "lo:hi:linear:n" or a comma list.
std::vector<double> parse_grid(const std::string &text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(trim(p));
    std::vector<double> out;
    if (parts.size() == 1) {
        std::stringstream cs(text);
        for (std::string p; std::getline(cs, p, ',');) out.push_back(parse_real(trim(p)));
        if (out.empty()) throw ValidationError("empty grid");
        return out;
    }
    if (parts.size() != 4) throw ValidationError("grid must be lo:hi:geometric|linear:n, got '" + text + "'");
    const double lo = parse_real(parts[0]);
    const double hi = parse_real(parts[1]);
    const int n = static_cast<int>(parse_real(parts[3]));
    if (n < 1 || !(lo > 0.0) || hi < lo) throw ValidationError("grid needs 0 < lo <= hi and n >= 1");
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        if (parts[2] == "geometric")
            out.push_back(std::round(lo * std::pow(hi / lo, t)));
        else if (parts[2] == "linear")
            out.push_back(std::round(lo + (hi - lo) * t));
        else
            throw ValidationError("grid spacing must be geometric or linear, got '" + parts[2] + "'");
    }
    return out;
}

json tuple_json(const exponents::ExponentTuple &t) {
    json eps = json::array();
    if (t.eps_on.b) eps.push_back("b");
    if (t.eps_on.eta) eps.push_back("eta");
    return {{"order", t.order},
            {"a", t.a.to_string()},
            {"b", t.b.to_string()},
            {"xi", t.xi.to_string()},
            {"eta", t.eta.to_string()},
            {"alpha", t.alpha.to_string()},
            {"gamma", t.gamma.to_string()},
            {"delta", t.delta.to_string()},
            {"eps_on", eps}};
}

std::string comparison_line(const Rational &a, const Rational &b) {
    const char *rel = a < b ? "<" : (a == b ? "=" : ">");
    return a.to_string() + " " + rel + " " + b.to_string() + "   (" + a.to_decimal(6) + " " + rel + " " +
           b.to_decimal(6) + ")";
}

std::string resolved_value(const CLI::Option *opt) {
    const auto &res = opt->results();
    if (!res.empty()) return res.back();
    if (opt->get_expected_max() == 0) return "false";
    return opt->get_default_str();
}

void echo_options(const CLI::App &app, const std::string &prefix, std::ostream &err) {
    for (const CLI::Option *opt : app.get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name == "config") continue;
        err << "# " << prefix << name << '=' << resolved_value(opt) << '\n';
    }
}

/// The selected command and every option it and the globals resolved to.
void echo_config(const CLI::App &app, std::ostream &err) {
    const CLI::App *sub = app.get_subcommands().front();
    err << "# command=" << sub->get_name() << '\n';
    echo_options(app, "", err);
    echo_options(*sub, "", err);
}

struct Globals {
    std::string config;
    unsigned threads = 0;
    std::uint64_t seed = 20240917;
};

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"exlab: exponent calculus and numerical checks for triple character sums", "exlab"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "key=value file; its entries override command-line flags");
    app.add_option("--threads", g.threads, "worker threads for sweeps and verification (0 = all cores)")
        ->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomized checks")->capture_default_str();

    std::function<int()> action;
    const auto on = [&](CLI::App *sub, std::function<int()> fn) { sub->callback([&action, fn] { action = fn; }); };

    // tuple
    int order = 5;
    bool tuple_json_flag = false;
    auto *tuple = app.add_subcommand("tuple", "exponent tuple of the order-r derivative test");
    tuple->add_option("--order", order, "order r >= 4")->capture_default_str();
    tuple->add_flag("--json", tuple_json_flag, "JSON output");
    on(tuple, [&] {
        const auto t = exponents::derive_tuple(order);
        if (tuple_json_flag)
            out << tuple_json(t).dump(2) << '\n';
        else
            out << exponents::to_text(t);
        return kOk;
    });

    // derive
    std::string report = "text";
    auto *derive = app.add_subcommand("derive", "symbolic derivation of the triple-sum bound");
    derive->add_option("--report", report, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    on(derive, [&] {
        const auto d = bounds::derive_main_theorem();
        if (report == "json")
            out << d.to_json().dump(2) << '\n';
        else
            out << d.to_text();
        return kOk;
    });

    // compare
    std::string ours = "511/1038";
    std::string theirs = "2498/5073";
    auto *compare = app.add_subcommand("compare", "exact comparison of two exponents");
    compare->add_option("--ours", ours, "exponent (p/q or decimal)")->capture_default_str();
    compare->add_option("--theirs", theirs, "exponent (p/q or decimal)")->capture_default_str();
    on(compare, [&] {
        out << comparison_line(Rational::parse(ours), Rational::parse(theirs)) << '\n';
        out << "reference pairs:\n";
        out << "  x:   " << comparison_line(Rational(511, 1038), bounds::previous_x_exponent()) << '\n';
        out << "  D:   " << comparison_line(Rational(527, 1038), bounds::previous_d_exponent()) << '\n';
        out << "  " << comparison_line(Rational(39, 77), Rational(39, 79)) << '\n';
        out << "  " << comparison_line(Rational(2500, 5077), Rational(2498, 5073)) << '\n';
        return kOk;
    });

    // character
    std::int64_t disc = -4;
    int table = 20;
    bool char_json = false;
    auto *chr = app.add_subcommand("character", "values of the real primitive character of a discriminant");
    chr->add_option("--disc", disc, "fundamental discriminant (1 = trivial)")->required();
    chr->add_option("--table", table, "print chi(1..n)")->capture_default_str();
    chr->add_flag("--json", char_json, "JSON output");
    on(chr, [&] {
        if (table < 0) throw ValidationError("--table must be >= 0");
        const auto c = character(disc);
        std::vector<int> vals;
        for (int n = 1; n <= table; ++n) vals.push_back(c(static_cast<std::uint64_t>(n)));
        const char *parity = c.parity() == characters::Parity::odd ? "odd" : "even";
        if (char_json) {
            out << json{{"disc", disc}, {"conductor", c.conductor()}, {"parity", parity}, {"values", vals}}.dump(2)
                << '\n';
        } else {
            out << "disc " << disc << ", conductor " << c.conductor() << ", " << parity << '\n';
            for (int n = 1; n <= table; ++n) out << n << ' ' << vals[static_cast<std::size_t>(n - 1)] << '\n';
        }
        return kOk;
    });

    // gauss
    std::string m_range = "1";
    bool gauss_json = false;
    auto *gauss = app.add_subcommand("gauss", "Gauss sums G(m, chi)");
    gauss->add_option("--disc", disc, "fundamental discriminant")->required();
    gauss->add_option("--m", m_range, "m or a range a..b")->capture_default_str();
    gauss->add_flag("--json", gauss_json, "JSON output");
    on(gauss, [&] {
        const auto c = character(disc);
        const auto [lo, hi] = parse_range(m_range, "..");
        if (hi < lo) throw ValidationError("empty m range");
        json rows = json::array();
        if (!gauss_json) out << "m,re,im,abs\n";
        for (std::int64_t m = lo; m <= hi; ++m) {
            const auto gs = characters::gauss_sum(m, c);
            if (gauss_json)
                rows.push_back({{"m", m}, {"re", j12(gs.real())}, {"im", j12(gs.imag())}, {"abs", j12(std::abs(gs))}});
            else
                out << m << ',' << f12(gs.real()) << ',' << f12(gs.imag()) << ',' << f12(std::abs(gs)) << '\n';
        }
        if (gauss_json) out << json{{"disc", disc}, {"sums", rows}}.dump(2) << '\n';
        return kOk;
    });

    // lfunction
    bool derivative = false;
    bool lf_json = false;
    auto *lf = app.add_subcommand("lfunction", "L(1, chi) and optionally L'(1, chi)");
    lf->add_option("--disc", disc, "fundamental discriminant, not 1")->required();
    lf->add_flag("--derivative", derivative, "also L'(1, chi)");
    lf->add_flag("--json", lf_json, "JSON output");
    on(lf, [&] {
        const auto c = character(disc);
        const double l1 = characters::l_one(c);
        json j{{"disc", disc}, {"L1", j12(l1)}};
        if (derivative) j["L1_derivative"] = j12(characters::l_one_derivative(c));
        if (lf_json) {
            out << j.dump(2) << '\n';
        } else {
            out << "L(1, chi) = " << f12(l1) << '\n';
            if (derivative) out << "L'(1, chi) = " << f12(j["L1_derivative"].get<double>()) << '\n';
        }
        return kOk;
    });

    // tables
    double limit = 1e5;
    std::string dump;
    std::string out_path;
    std::int64_t cutoff = 0;
    auto *tab = app.add_subcommand("tables", "sieved arithmetic-function tables");
    tab->add_option("--disc", disc, "fundamental discriminant")->required();
    tab->add_option("--limit", limit, "table length N")->capture_default_str();
    tab->add_option("--cutoff", cutoff, "split threshold (default D^2)");
    tab->add_option("--dump", dump, "csv: n,lambda,nu,lambda_prime,rho,Lambda,rho_star,rho_sub,Lambda_star,Lambda_sub")
        ->check(CLI::IsMember({"csv"}));
    tab->add_option("--out", out_path, "output file (relative to $EXLAB_OUTPUT_DIR if set)");
    on(tab, [&] {
        if (!(limit >= 1.0)) throw ValidationError("--limit must be >= 1");
        tables::TableOptions opts;
        if (cutoff > 0) opts.cutoff = static_cast<std::uint64_t>(cutoff);
        const auto t = tables::FunctionTable::build(static_cast<std::uint64_t>(limit), character(disc), opts);
        Sink sink(out_path, out);
        auto &os = sink.stream();
        if (dump == "csv") {
            os << "n,lambda,nu,lambda_prime,rho,Lambda,rho_star,rho_sub,Lambda_star,Lambda_sub\n";
            for (std::uint64_t n = 1; n <= t.limit(); ++n)
                os << n << ',' << t.lambda(n) << ',' << int(t.nu(n)) << ',' << f12(t.lambda_prime(n)) << ','
                   << t.rho(n) << ',' << f12(t.von_mangoldt(n)) << ',' << t.rho_star(n) << ',' << t.rho_sub(n) << ','
                   << f12(t.von_mangoldt_star(n)) << ',' << f12(t.von_mangoldt_sub(n)) << '\n';
        } else {
            os << "limit " << t.limit() << ", cutoff " << t.cutoff() << '\n';
            for (auto f : {tables::Function::lambda, tables::Function::nu, tables::Function::lambda_prime,
                           tables::Function::rho, tables::Function::von_mangoldt})
                os << "sum " << tables::function_name(f) << " = "
                   << f12(tables::divisor_sum(t, f, static_cast<double>(t.limit()))) << '\n';
        }
        if (sink.to_file()) out << "wrote " << sink.path().string() << '\n';
        return kOk;
    });

    // divisor-sum
    std::string fname = "rho";
    double x = 1e6;
    bool ds_json = false;
    auto *ds = app.add_subcommand("divisor-sum", "D(x; f) with main term and normalized residual");
    ds->add_option("--f", fname, "lambda, nu, lambda_prime, rho, Lambda, rho_star, rho_sub, Lambda_star, Lambda_sub")
        ->capture_default_str();
    ds->add_option("--x", x, "upper limit")->required();
    ds->add_option("--disc", disc, "fundamental discriminant")->required();
    ds->add_flag("--json", ds_json, "JSON output");
    on(ds, [&] {
        const auto f = tables::parse_function(fname);
        if (!(x >= 1.0)) throw ValidationError("--x must be >= 1");
        const auto t = tables::FunctionTable::build(static_cast<std::uint64_t>(x), character(disc));
        json j{{"f", tables::function_name(f)}, {"x", j12(x)}, {"disc", disc}, {"sum", j12(tables::divisor_sum(t, f, x))}};
        if (f == tables::Function::lambda || f == tables::Function::lambda_prime || f == tables::Function::rho) {
            const auto r = tables::asymptotic_residual(t, f, x);
            j["main"] = j12(r.main);
            j["residual"] = j12(r.residual);
            j["normalized"] = j12(r.normalized);
        }
        if (ds_json) {
            out << j.dump(2) << '\n';
        } else {
            for (const auto *k : {"sum", "main", "residual", "normalized"})
                if (j.contains(k)) out << k << " = " << f12(j[k].get<double>()) << '\n';
        }
        return kOk;
    });

    // psi-short
    double alpha = 0.55;
    bool psi_json = false;
    auto *ps = app.add_subcommand("psi-short", "psi, psi^*, psi_* over (x - x^alpha, x]");
    ps->add_option("--x", x, "right endpoint")->required();
    ps->add_option("--alpha", alpha, "window exponent, y = x^alpha")->capture_default_str();
    ps->add_option("--disc", disc, "fundamental discriminant")->required();
    ps->add_option("--cutoff", cutoff, "split threshold (default D^2)");
    ps->add_flag("--json", psi_json, "JSON output");
    on(ps, [&] {
        if (!(x >= 2.0) || !(alpha > 0.0) || alpha > 1.0) throw ValidationError("need x >= 2 and 0 < alpha <= 1");
        const double y = std::pow(x, alpha);
        std::optional<std::uint64_t> c;
        if (cutoff > 0) c = static_cast<std::uint64_t>(cutoff);
        const auto r = tables::psi_counts(static_cast<std::uint64_t>(x), character(disc), x, y, c);
        const json j{{"x", j12(r.x)},
                     {"y", j12(r.y)},
                     {"psi", j12(r.psi)},
                     {"psi_star", j12(r.psi_star)},
                     {"psi_sub", j12(r.psi_substar)},
                     {"primes", r.pi_count},
                     {"li", j12(r.li_value)},
                     {"ratio", j12(r.ratio)},
                     {"split_exact", r.split_exact()}};
        if (psi_json) {
            out << j.dump(2) << '\n';
        } else {
            for (const auto *k : {"x", "y", "psi", "psi_star", "psi_sub", "li", "ratio"})
                out << k << " = " << f12(j[k].get<double>()) << '\n';
            out << "primes = " << r.pi_count << '\n' << "split exact = " << (r.split_exact() ? "yes" : "no") << '\n';
        }
        return kOk;
    });

    // delta
    std::int64_t d1 = 1, d2 = 1, d3 = -4;
    double cap = empirical::kDefaultDeltaCap;
    bool naive_check = false;
    bool delta_json = false;
    auto *delta = app.add_subcommand("delta", "triple character sum and its remainder");
    delta->add_option("--d1", d1, "discriminant of chi1")->capture_default_str();
    delta->add_option("--d2", d2, "discriminant of chi2")->capture_default_str();
    delta->add_option("--d3", d3, "discriminant of chi3")->capture_default_str();
    delta->add_option("--x", x, "upper limit")->required();
    delta->add_option("--cap", cap, "largest x accepted")->capture_default_str();
    delta->add_flag("--naive-check", naive_check, "compare with direct enumeration");
    delta->add_flag("--json", delta_json, "JSON output");
    on(delta, [&] {
        const auto s = empirical::triple_delta(character(d1), character(d2), character(d3), x, cap);
        json j{{"x", j12(s.x)},           {"d1", s.d1},           {"d2", s.d2},
               {"d3", s.d3},              {"raw_sum", s.raw_sum}, {"residue", j12(s.residue)},
               {"delta", j12(s.delta)},   {"bound_value", j12(s.bound_value)}};
        int code = kOk;
        if (naive_check) {
            const auto naive = empirical::triple_sum_naive(character(d1), character(d2), character(d3),
                                                           static_cast<std::uint64_t>(std::floor(x)));
            j["naive_sum"] = naive;
            j["naive_agrees"] = naive == s.raw_sum;
            if (naive != s.raw_sum) code = kRegression;
        }
        if (delta_json) {
            out << j.dump(2) << '\n';
        } else {
            out << "raw_sum = " << s.raw_sum << '\n'
                << "residue = " << f12(s.residue) << '\n'
                << "delta = " << f12(s.delta) << '\n'
                << "bound_value = " << f12(s.bound_value) << '\n';
            if (naive_check)
                out << "naive_sum = " << j["naive_sum"].get<std::int64_t>() << " ("
                    << (code == kOk ? "agrees" : "MISMATCH") << ")\n";
        }
        return code;
    });

    // delta-sweep
    std::string grid = "1e4:1e8:geometric:9";
    auto *sweep = app.add_subcommand(
        "delta-sweep",
        "Delta over an x grid. CSV columns: x,d1,d2,d3,raw_sum,residue,delta,bound_value,ratio "
        "(ratio = |delta| / bound_value); a summary with the fitted slope of |delta| goes to stderr");
    sweep->add_option("--d1", d1, "discriminant of chi1")->capture_default_str();
    sweep->add_option("--d2", d2, "discriminant of chi2")->capture_default_str();
    sweep->add_option("--d3", d3, "discriminant of chi3")->capture_default_str();
    sweep->add_option("--x-grid", grid, "lo:hi:geometric|linear:n or a comma list")->capture_default_str();
    sweep->add_option("--cap", cap, "largest x accepted")->capture_default_str();
    sweep->add_option("--out", out_path, "CSV file (relative to $EXLAB_OUTPUT_DIR if set); stdout if absent");
    on(sweep, [&] {
        const auto xs = parse_grid(grid);
        for (double v : xs)
            if (v > cap)
                throw RangeError("grid point " + f12(v) + " exceeds the cap " + f12(cap) + " (override with --cap)");
        const auto c1 = character(d1), c2 = character(d2), c3 = character(d3);
        const auto samples = parallel_map(
            xs, [&](double v) { return empirical::triple_delta(c1, c2, c3, v, cap); }, g.threads);
        Sink sink(out_path, out);
        auto &os = sink.stream();
        os << "x,d1,d2,d3,raw_sum,residue,delta,bound_value,ratio\n";
        for (const auto &s : samples)
            os << f12(s.x) << ',' << s.d1 << ',' << s.d2 << ',' << s.d3 << ',' << s.raw_sum << ',' << f12(s.residue)
               << ',' << f12(s.delta) << ',' << f12(s.bound_value) << ',' << f12(std::abs(s.delta) / s.bound_value)
               << '\n';
        const auto check = empirical::bound_check(samples);
        err << "max ratio " << f12(check.max_ratio);
        if (check.trend_slope) err << ", ratio trend slope " << f12(*check.trend_slope);
        if (check.growing) err << " (ratios grow with x)";
        err << '\n';
        std::vector<std::pair<double, double>> mags;
        for (const auto &s : samples)
            if (s.delta != 0.0) mags.emplace_back(s.x, std::abs(s.delta));
        if (mags.size() >= 3) {
            try {
                const auto fit = empirical::exponent_fit(mags);
                err << "fitted slope of |delta| " << f12(fit.slope) << " (r^2 " << f12(fit.r_squared)
                    << "), bound exponent 511/1038 = " << Rational(511, 1038).to_decimal(6) << '\n';
            } catch (const DomainError &) {
            }
        }
        if (sink.to_file()) out << "wrote " << samples.size() << " rows to " << sink.path().string() << '\n';
        return kOk;
    });

    // expsum
    std::int64_t n1 = 3, n2 = 7, m = 2;
    std::string range = "1000:2000";
    std::string sign = "max";
    double big_d = 0.0;
    bool expsum_sweep = false;
    bool es_json = false;
    auto *es = app.add_subcommand("expsum", "inner exponential sum over n3 against the order-5 derivative test");
    es->add_option("--n1", n1, "n1")->capture_default_str();
    es->add_option("--n2", n2, "n2")->capture_default_str();
    es->add_option("--d3", d3, "discriminant of chi3")->required();
    es->add_option("--x", x, "x")->required();
    es->add_option("--range", range, "n3 range a:b")->capture_default_str();
    es->add_option("--m", m, "additive frequency m")->capture_default_str();
    es->add_option("--D", big_d, "the product conductor D (default: conductor of chi3)");
    es->add_option("--sign", sign, "plus, minus or max")->check(CLI::IsMember({"plus", "minus", "max"}))->capture_default_str();
    es->add_flag("--sweep", expsum_sweep, "100-point sweep of ranges [L, 2L]; CSV lo,hi,modulus,bound,ratio");
    es->add_flag("--json", es_json, "JSON output");
    on(es, [&] {
        const auto c3 = character(d3);
        const double D = big_d > 0.0 ? big_d : static_cast<double>(c3.conductor());
        if (expsum_sweep) {
            const auto rep = empirical::derivative_test_sweep(n1, n2, c3, x, D, m);
            out << "lo,hi,modulus,bound,ratio\n";
            for (const auto &p : rep.points)
                out << p.lo << ',' << p.hi << ',' << f12(p.modulus) << ',' << f12(p.bound) << ','
                    << f12(p.modulus / p.bound) << '\n';
            err << "fitted constant " << f12(rep.fitted_constant) << '\n';
            return kOk;
        }
        const auto r = parse_range(range, ":");
        const auto s = sign == "plus"    ? empirical::SignChoice::plus
                       : sign == "minus" ? empirical::SignChoice::minus
                                         : empirical::SignChoice::max_modulus;
        const auto e = empirical::exp_sum(n1, n2, c3, r, x, D, m, s);
        const double bound = empirical::derivative_test_bound(n1, n2, r, x, D);
        const json j{{"re", j12(e.real())},
                     {"im", j12(e.imag())},
                     {"modulus", j12(std::abs(e))},
                     {"length", r.second - r.first + 1},
                     {"bound", j12(bound)},
                     {"ratio", j12(std::abs(e) / bound)}};
        if (es_json) {
            out << j.dump(2) << '\n';
        } else {
            for (const auto *k : {"re", "im", "modulus", "bound", "ratio"})
                out << k << " = " << f12(j[k].get<double>()) << '\n';
            out << "length = " << j["length"].get<std::int64_t>() << '\n';
        }
        return kOk;
    });

    // feasibility
    std::string theta = "0.4923";
    std::int64_t r_param = feasibility::kPublishedR;
    bool minimal = false;
    bool claim = false;
    std::string alpha_text = "0.4923";
    auto *fe = app.add_subcommand("feasibility", "the theta/r parameter condition, solved exactly");
    fe->add_option("--theta", theta, "theta (decimal or p/q, parsed exactly)")->capture_default_str();
    fe->add_option("--r", r_param, "r >= 1")->capture_default_str();
    fe->add_flag("--minimal", minimal, "print the smallest feasible r");
    fe->add_flag("--claim", claim, "claim report for --x, --alpha, --D, --r");
    fe->add_option("--x", x, "x for --claim");
    fe->add_option("--alpha", alpha_text, "alpha for --claim (exact)")->capture_default_str();
    fe->add_option("--D", big_d, "D for --claim");
    on(fe, [&] {
        const Rational th = Rational::parse(theta);
        if (claim) {
            if (!(big_d >= 1.0)) throw ValidationError("--claim needs --D >= 1");
            out << feasibility::claim_report(x, Rational::parse(alpha_text), big_d, r_param).to_text();
            return kOk;
        }
        if (minimal) {
            const auto mr = feasibility::minimal_r(th);
            out << (mr ? std::to_string(*mr) : std::string("infeasible")) << '\n';
            return kOk;
        }
        out << (feasibility::check(th, r_param) ? "true" : "false") << '\n';
        return kOk;
    });

    // verify-all
    bool quick = false;
    int criterion = 0;
    auto *va = app.add_subcommand("verify-all", "run the acceptance criteria and print a deterministic report");
    va->add_flag("--quick", quick, "reduced limits (tables <= 1e5, Delta <= 1e4)");
    va->add_option("--criterion", criterion, "run only this criterion (1-10)");
    on(va, [&] {
        verify::Options opts{quick, g.seed, g.threads};
        std::vector<verify::CriterionResult> results;
        if (criterion != 0)
            results.push_back(verify::run_criterion(criterion, opts));
        else
            results = verify::run_all(opts);
        out << verify::render(results, opts);
        const bool all = std::all_of(results.begin(), results.end(), [](const auto &c) { return c.passed; });
        return all ? kOk : kRegression;
    });

    for (CLI::App *sub : app.get_subcommands([](const CLI::App *) { return true; }))
        for (CLI::Option *opt : sub->get_options()) opt->capture_default_str();

    try {
        std::vector<std::string> argv = args;
        for (std::size_t i = 0; i < args.size(); ++i) {
            std::string path;
            if (args[i] == "--config" && i + 1 < args.size())
                path = args[i + 1];
            else if (args[i].rfind("--config=", 0) == 0)
                path = args[i].substr(9);
            if (!path.empty()) {
                const auto extra = read_config(path);
                argv.insert(argv.end(), extra.begin(), extra.end());
            }
        }
        std::vector<std::string> reversed(argv.rbegin(), argv.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::CallForAllHelp &e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError &e) {
        app.exit(e, err, err);
        return kInvalid;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }

    echo_config(app, err);

    try {
        return action();
    } catch (const RegressionError &e) {
        err << "regression: " << e.what() << '\n';
        return kRegression;
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const DomainError &e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const RangeError &e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kRegression;
    }
}

} // namespace exlab::cli
