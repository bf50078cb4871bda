#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "exlab/cli.hpp"

using exlab::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir() {
    auto p = std::filesystem::temp_directory_path() / "exlab_cli_test";
    std::filesystem::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("tuple json") {
    const auto r = call({"tuple", "--order", "5", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["a"] == "139/194");
    CHECK(j["delta"] == "21/97");
    CHECK(j["order"] == 5);
    CHECK(r.err.find("# command=tuple") != std::string::npos);
    CHECK(r.err.find("# order=5") != std::string::npos);
}

TEST_CASE("feasibility commands") {
    CHECK(call({"feasibility", "--theta", "0.4923", "--minimal"}).out == "429673\n");
    CHECK(call({"feasibility", "--theta", "0.4923", "--r", "433433"}).out == "true\n");
    CHECK(call({"feasibility", "--theta", "0.4923", "--r", "429672"}).out == "false\n");
    CHECK(call({"feasibility", "--theta", "0.4", "--minimal"}).out == "infeasible\n");
    CHECK(call({"feasibility", "--theta", "0.4923", "--r", "0"}).code == 1);
    const auto claim = call({"feasibility", "--claim", "--x", "8", "--D", "2", "--r", "3", "--alpha", "1"});
    CHECK(claim.out.find("x >= D^r: yes") != std::string::npos);
}

TEST_CASE("usage and validation errors exit 1") {
    CHECK(call({}).code == 1);
    CHECK(call({"nonsense"}).code == 1);
    CHECK(call({"tuple", "--bogus"}).code == 1);
    CHECK(call({"tuple", "--order", "3"}).code == 1);
    CHECK(call({"character", "--disc", "8", "--table", "4"}).code == 0);
    const auto bad = call({"character", "--disc", "9"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("error:") != std::string::npos);
    CHECK(call({"lfunction", "--disc", "1"}).code == 1);
    CHECK(call({"delta", "--x", "1e7", "--cap", "1e6"}).code == 1);
    CHECK(call({"delta", "--x", "1e7", "--cap", "1e6"}).err.find("--cap") != std::string::npos);
}

TEST_CASE("derive and compare") {
    const auto d = call({"derive", "--report", "json"});
    REQUIRE(d.code == 0);
    const auto j = nlohmann::json::parse(d.out);
    CHECK(j["simplified"]["exponents"]["D"] == "527/1038");
    const auto c = call({"compare", "--ours", "511/1038", "--theirs", "2498/5073"});
    CHECK(c.out.rfind("511/1038 < 2498/5073   (0.492293 < 0.492411)", 0) == 0);
    CHECK(c.out.find("39/77 > 39/79") != std::string::npos);
}

TEST_CASE("config file overrides flags") {
    const auto cfg = scratch_dir() / "run.cfg";
    std::ofstream(cfg) << "# comment\ntheta = 1/2\nminimal=true\n";
    const auto r = call({"feasibility", "--theta", "0.4923", "--config", cfg.string()});
    CHECK(r.code == 0);
    CHECK(r.out == "391\n");
    CHECK(r.err.find("# theta=1/2") != std::string::npos);

    std::ofstream(cfg) << "unknown_key=3\n";
    CHECK(call({"feasibility", "--config", cfg.string()}).code == 1);
    std::ofstream(cfg) << "no equals sign\n";
    CHECK(call({"feasibility", "--config", cfg.string()}).code == 1);
    CHECK(call({"feasibility", "--config", (scratch_dir() / "missing.cfg").string()}).code == 1);
}

TEST_CASE("csv output is reproducible and honours the output directory") {
    const auto dir = scratch_dir() / "out";
    std::filesystem::remove_all(dir);
    ::setenv(exlab::cli::kOutputDirEnv, dir.string().c_str(), 1);
    const std::vector<std::string> args{"--threads", "2", "delta-sweep", "--d3", "-4", "--x-grid", "1e3:1e5:geometric:5",
                                        "--out", "samples.csv"};
    REQUIRE(call(args).code == 0);
    std::stringstream a;
    a << std::ifstream(dir / "samples.csv").rdbuf();
    REQUIRE(call({"--threads", "1", "delta-sweep", "--d3", "-4", "--x-grid", "1e3:1e5:geometric:5", "--out",
                  "samples.csv"})
                .code == 0);
    std::stringstream b;
    b << std::ifstream(dir / "samples.csv").rdbuf();
    ::unsetenv(exlab::cli::kOutputDirEnv);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("x,d1,d2,d3,raw_sum,residue,delta,bound_value,ratio\n", 0) == 0);
    const std::string csv = a.str();
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}

TEST_CASE("table dump") {
    const auto r = call({"tables", "--disc", "-4", "--limit", "10", "--dump", "csv"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header == "n,lambda,nu,lambda_prime,rho,Lambda,rho_star,rho_sub,Lambda_star,Lambda_sub");
    CHECK(first == "1,1,1,0,1,0,1,0,0,0");
}

TEST_CASE("numeric commands") {
    const auto d = call({"delta", "--d1", "1", "--d2", "1", "--d3", "1", "--x", "10", "--naive-check", "--json"});
    REQUIRE(d.code == 0);
    CHECK(nlohmann::json::parse(d.out)["raw_sum"] == 53);
    const auto g = call({"gauss", "--disc", "5", "--m", "1..4", "--json"});
    CHECK(nlohmann::json::parse(g.out)["sums"].size() == 4);
    const auto l = call({"lfunction", "--disc", "-4", "--json"});
    CHECK(nlohmann::json::parse(l.out)["L1"] == 0.785398163397);
    const auto p = call({"psi-short", "--x", "100", "--alpha", "0.5", "--disc", "-4", "--json"});
    CHECK(nlohmann::json::parse(p.out)["primes"] == 1);
    const auto e = call({"expsum", "--n1", "3", "--n2", "7", "--d3", "5", "--x", "1e6", "--range", "1000:1000", "--m", "2",
                         "--json"});
    CHECK(nlohmann::json::parse(e.out)["modulus"] == 1.0);
    CHECK(call({"divisor-sum", "--f", "rho", "--x", "1000", "--disc", "-4"}).code == 0);
    CHECK(call({"divisor-sum", "--f", "zeta", "--x", "1000", "--disc", "-4"}).code == 1);
}

TEST_CASE("verify-all exit codes") {
    CHECK(call({"verify-all", "--criterion", "1"}).code == 0);
    const auto r = call({"verify-all", "--criterion", "3"});
    CHECK(r.code == 2);
    CHECK(r.out.find("[FAIL] 3.") != std::string::npos);
    CHECK(call({"verify-all", "--criterion", "11"}).code == 1);
}
