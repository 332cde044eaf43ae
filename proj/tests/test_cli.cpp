#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

std::string binary_path() {
    const char* p = std::getenv("CORRLAB_BIN");
    REQUIRE(p != nullptr);
    return p;
}

CliResult run_cli(const std::string& args) {
    std::string cmd = binary_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST_CASE("decompose emits singleton coefficients", "[cli]") {
    auto r = run_cli("decompose --space uniform:m=2,n=2 --function builtin:and");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    bool found = false;
    for (const auto& item : j["coefficients"]) {
        if (item["alpha"] == nlohmann::json::array({1, 0})) {
            REQUIRE(item["coeff"].get<double>() == Catch::Approx(0.25).margin(1e-12));
            found = true;
        }
    }
    REQUIRE(found);
    REQUIRE(j["efron_stein_norms"].size() == 4);
}

TEST_CASE("decompose of a constant has a single coefficient", "[cli]") {
    auto r = run_cli(R"(decompose --space uniform:m=2,n=2 --function '{"values":[0.5,0.5,0.5,0.5]}')");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["coefficients"].size() == 1);
    REQUIRE(j["coefficients"][0]["alpha"] == nlohmann::json::array({0, 0}));
}

TEST_CASE("malformed inputs exit with code 2", "[cli]") {
    REQUIRE(run_cli(R"(decompose --space uniform:m=2,n=2 --function '{"values":[1,0]}')").exit_code == 2);
    REQUIRE(run_cli("decompose --space uniform:m=9,n=1 --function builtin:and").exit_code == 2);
    REQUIRE(run_cli("decompose --space nonsense:m=2,n=2 --function builtin:and").exit_code == 2);
    REQUIRE(run_cli("experiment no-such-experiment").exit_code == 2);
}

TEST_CASE("verify reports and exit codes", "[cli]") {
    SECTION("AND self-pair verifies") {
        auto r = run_cli("verify --space uniform:m=2,n=2 --f builtin:and --g builtin:and");
        REQUIRE(r.exit_code == 0);
        auto j = nlohmann::json::parse(r.out);
        REQUIRE(j["gap"].get<double>() == Catch::Approx(0.1875).margin(1e-12));
        REQUIRE(j["verdict"].get<bool>());
        REQUIRE(j["hypotheses"]["monotone_f"].get<bool>());
    }
    SECTION("non-monotone pair is recorded, not asserted") {
        auto r = run_cli(
            R"(verify --space uniform:m=2,n=2 --f builtin:and --g '{"values":[1,1,1,0]}')");
        REQUIRE(r.exit_code == 0);
        auto j = nlohmann::json::parse(r.out);
        REQUIRE_FALSE(j["hypotheses"]["monotone_g"].get<bool>());
        REQUIRE(j["gap"].get<double>() < 0.0);
    }
    SECTION("corrupted quantities trip the violation exit code") {
        REQUIRE(run_cli("verify --space uniform:m=2,n=2 --f builtin:and --g builtin:and --corrupt a1")
                    .exit_code == 1);
        REQUIRE(run_cli("verify --space uniform:m=2,n=2 --f builtin:and --g builtin:and --corrupt gap")
                    .exit_code == 1);
    }
}

TEST_CASE("json reports are byte-identical across runs", "[cli]") {
    const std::string args =
        "verify --space pbiased:p=0.3,n=3 --f builtin:talagrand_f?k=1 --g builtin:talagrand_g?k=1";
    auto a = run_cli(args);
    auto b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.out == b.out);
    REQUIRE_FALSE(a.out.empty());
}

TEST_CASE("csv output carries the sweep with a header row", "[cli]") {
    auto r = run_cli("verify --space uniform:m=2,n=2 --f builtin:and --g builtin:and --format csv");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.rfind("rho,q\n", 0) == 0);
}

TEST_CASE("coefficient-file audit", "[cli]") {
    std::string path = "/tmp/corrlab_test_coeffs.json";
    {
        FILE* f = fopen(path.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs("[1.0, 0.5]", f);  // p(t) = t + 0.5 t^2
        fclose(f);
    }
    auto r = run_cli("audit --coeffs " + path);
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["M"].get<double>() == Catch::Approx(1.5).margin(1e-12));
    REQUIRE(j["sup"].get<double>() == Catch::Approx(1.5).margin(1e-9));
    REQUIRE(j["verdict"] == "ok");
    REQUIRE(run_cli("audit --coeffs /nonexistent.json").exit_code == 2);
}

TEST_CASE("ellipsoid bodies load from a matrix file", "[cli]") {
    std::string path = "/tmp/corrlab_test_ellipsoid.json";
    {
        FILE* f = fopen(path.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs("[[1.0, 0.0], [0.0, 4.0]]", f);
        fclose(f);
    }
    auto r = run_cli("verify --gaussian --dim 2 --f ellipsoid:A=" + path +
                     " --g ball:r=1 --samples 20000 --seed 4");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["verdicts"]["gap_nonneg"].get<bool>());
}

TEST_CASE("continuous and Gaussian verify routes", "[cli]") {
    SECTION("legendre route on coordinate oracles") {
        auto r = run_cli("verify --basis legendre --dim 2 --f coord:1 --g coord:1 --degree 8 --quad 16");
        REQUIRE(r.exit_code == 0);
        auto j = nlohmann::json::parse(r.out);
        REQUIRE(j["gap"].get<double>() == Catch::Approx(1.0 / 3.0).margin(1e-9));
        REQUIRE(j["a1"].get<double>() == Catch::Approx(1.0 / 3.0).margin(1e-9));
        REQUIRE(j["verdict"].get<bool>());
    }
    SECTION("cosine route on the single-frequency oracle") {
        auto r = run_cli("verify --basis cosine --dim 1 --f cosbump --g cosbump --degree 8 --quad 16");
        REQUIRE(r.exit_code == 0);
        auto j = nlohmann::json::parse(r.out);
        REQUIRE(j["hypotheses"]["neumann_f"].get<bool>());
        REQUIRE(j["gap"].get<double>() == Catch::Approx(1.0 / 3.0).margin(1e-6));
    }
    SECTION("gaussian route on a body pair") {
        auto r = run_cli("verify --gaussian --dim 1 --f ball:r=1 --g ball:r=1 --samples 20000 --seed 3");
        REQUIRE(r.exit_code == 0);
        auto j = nlohmann::json::parse(r.out);
        REQUIRE(j["verdicts"]["gap_nonneg"].get<bool>());
        REQUIRE(j["gap"]["value"].get<double>() == Catch::Approx(0.2166).margin(0.02));
    }
    SECTION("unknown basis exits 2") {
        REQUIRE(run_cli("verify --basis fourier --dim 1 --f coord:1 --g coord:1").exit_code == 2);
    }
}

TEST_CASE("experiments write reports and respect seeds", "[cli]") {
    SECTION("hadamard witness sweep") {
        auto r = run_cli("experiment hadamard-witness --k 1..3 --format json");
        REQUIRE(r.exit_code == 0);
        auto j = nlohmann::json::parse(r.out);
        REQUIRE(j["rows"].size() == 3);
        REQUIRE(j["pass"].get<bool>());
    }
    SECTION("talagrand tightness") {
        auto r = run_cli("experiment talagrand-tightness --sizes 20 --format json");
        REQUIRE(r.exit_code == 0);
        auto j = nlohmann::json::parse(r.out);
        REQUIRE(j["band_within_factor_4"].get<bool>());
        REQUIRE(j["gap_identity_ok"].get<bool>());
    }
    SECTION("keller separation") {
        auto r = run_cli("experiment keller --p 0.5 --p 0.1 --format json");
        REQUIRE(r.exit_code == 0);
        auto j = nlohmann::json::parse(r.out);
        REQUIRE(j["pass"].get<bool>());
    }
    SECTION("enumerate-monotone") {
        auto r = run_cli("experiment enumerate-monotone --n 3 --format json");
        REQUIRE(r.exit_code == 0);
        auto j = nlohmann::json::parse(r.out);
        REQUIRE(j["per_n"][2]["count"].get<int>() == 20);
        REQUIRE(j["pass"].get<bool>());
    }
    SECTION("cube-cont") {
        auto r = run_cli("experiment cube-cont --degree 8 --quad 16 --format json");
        REQUIRE(r.exit_code == 0);
        auto j = nlohmann::json::parse(r.out);
        REQUIRE(j["pass"].get<bool>());
    }
    SECTION("hu with reduced sampling") {
        auto r = run_cli("experiment hu --dim 2 --samples 20000 --seed 2 --format json");
        REQUIRE(r.exit_code == 0);
        auto j = nlohmann::json::parse(r.out);
        REQUIRE(j["pass"].get<bool>());
    }
    SECTION("gaussian balls with a pinned seed is reproducible") {
        const std::string args = "experiment gaussian-balls --eps 0.2 --dim 8 --samples 20000 --seed 5";
        auto a = run_cli(args + " --format json");
        auto b = run_cli(args + " --format json");
        REQUIRE(a.exit_code == 0);
        REQUIRE(a.out == b.out);
        auto j = nlohmann::json::parse(a.out);
        REQUIRE(j["exact_gap"].get<double>() == Catch::Approx(0.04).margin(1e-15));
    }
}
