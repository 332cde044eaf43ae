#include "corrlab/power_series.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace corrlab;

TEST_CASE("length sums absolute coefficients", "[power_series]") {
    REQUIRE(length(PowerSeries{{1.0, 0.0, 2.0}}) == 3.0);  // t + 2t^3
    REQUIRE(length(PowerSeries{{1.0}}) == 1.0);
    REQUIRE(length(PowerSeries{{-1.0, 0.5}}) == 1.5);
}

TEST_CASE("sup on [0,1]: monotone and parabola cases", "[power_series]") {
    auto r1 = sup_unit_interval(PowerSeries{{1.0}});  // p(t) = t
    REQUIRE(r1.value == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(r1.argmax_t == Catch::Approx(1.0).margin(1e-9));

    auto r2 = sup_unit_interval(PowerSeries{{1.0, -1.0}});  // t - t^2
    REQUIRE(r2.value == Catch::Approx(0.25).margin(1e-12));
    REQUIRE(r2.argmax_t == Catch::Approx(0.5).margin(1e-6));
}

namespace {
// expanded coefficients of t (1-t)^k by binomial convolution
PowerSeries bump_family(int k) {
    std::vector<double> poly{1.0};  // (1-t)^k
    for (int j = 0; j < k; ++j) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= poly[i];
        }
        poly = std::move(next);
    }
    return PowerSeries{std::move(poly)};
}
}  // namespace

TEST_CASE("sup matches the calculus oracle for t(1-t)^k", "[power_series]") {
    // maximum at t* = 1/(k+1) with value t* (k/(k+1))^k
    for (int k : {4, 10}) {
        double tstar = 1.0 / (k + 1);
        double expected = tstar * std::pow(1.0 - tstar, k);
        auto r = sup_unit_interval(bump_family(k));
        REQUIRE(r.value == Catch::Approx(expected).margin(1e-10));
        REQUIRE(r.argmax_t == Catch::Approx(tstar).margin(1e-6));
    }
}

TEST_CASE("sup dominates every grid point", "[power_series]") {
    std::mt19937 gen(42);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        PowerSeries p;
        p.coeffs.resize(1 + gen() % 12);
        for (auto& c : p.coeffs) c = coeff(gen);
        auto r = sup_unit_interval(p);
        for (int i = 0; i <= 500; ++i) {
            double t = i / 500.0;
            REQUIRE(r.value >= std::fabs(p.evaluate(t)) - 1e-12);
        }
    }
}

TEST_CASE("sup rejects non-finite coefficients", "[power_series]") {
    PowerSeries bad{{1.0, std::numeric_limits<double>::infinity()}};
    REQUIRE_THROWS_AS(sup_unit_interval(bad), std::invalid_argument);
}

TEST_CASE("Chebyshev coefficients by recurrence", "[chebyshev]") {
    auto t0 = chebyshev_first_kind(0);
    REQUIRE(t0.coeffs == std::vector<double>{1.0});
    auto t2 = chebyshev_first_kind(2);
    REQUIRE(t2.coeffs == std::vector<double>{-1.0, 0.0, 2.0});
    auto t4 = chebyshev_first_kind(4);
    REQUIRE(t4.coeffs == std::vector<double>{1.0, 0.0, -8.0, 0.0, 8.0});
    REQUIRE_THROWS_AS(chebyshev_first_kind(-1), std::invalid_argument);
    REQUIRE_THROWS_AS(chebyshev_first_kind(1025), std::invalid_argument);
}

TEST_CASE("T_c(cos theta) = cos(c theta)", "[chebyshev]") {
    for (int c = 0; c <= 32; ++c) {
        Polynomial t = chebyshev_first_kind(c);
        for (int i = 0; i < 100; ++i) {
            double theta = 3.14159265358979323846 * i / 99.0;
            REQUIRE(t.evaluate(std::cos(theta)) == Catch::Approx(std::cos(c * theta)).margin(1e-8));
            REQUIRE(chebyshev_eval(c, std::cos(theta)) == Catch::Approx(std::cos(c * theta)).margin(1e-10));
        }
    }
}

TEST_CASE("scaled Chebyshev factors a_d", "[witness]") {
    SECTION("d = 1 is the identity map") {
        auto a1 = build_a_d(1);
        REQUIRE(a1.coeffs.size() == 2);
        REQUIRE(a1.coeffs[0] == Catch::Approx(0.0).margin(1e-15));
        REQUIRE(a1.coeffs[1] == Catch::Approx(1.0).margin(1e-15));
    }
    SECTION("d = 4 matches the hand computation (6.125 t^2 - 1)/5.125") {
        auto a4 = build_a_d(4);
        REQUIRE(a4.coeffs[0] == Catch::Approx(-1.0 / 5.125).epsilon(1e-12));
        REQUIRE(a4.coeffs[1] == Catch::Approx(0.0).margin(1e-15));
        REQUIRE(a4.coeffs[2] == Catch::Approx(6.125 / 5.125).epsilon(1e-12));
    }
    SECTION("a_d(1) = 1") {
        for (int d : {1, 4, 16, 64, 256, 1024, 4096}) {
            REQUIRE(a_d_eval(d, 1.0) == Catch::Approx(1.0).margin(1e-10));
        }
    }
    SECTION("non-square d rejected") {
        REQUIRE_THROWS_AS(build_a_d(2), std::invalid_argument);
        REQUIRE_THROWS_AS(build_a_d(8), std::invalid_argument);
    }
    SECTION("unit bound on [0,1] and quarter bound on [0, 1-3/d]") {
        for (int d : {1, 4, 16, 64, 256, 1024, 4096}) {
            for (int i = 0; i <= 1000; ++i) {
                double t = i / 1000.0;
                double v = std::fabs(a_d_eval(d, t));
                REQUIRE(v <= 1.0 + 1e-9);
                if (d >= 4 && t <= 1.0 - 3.0 / d) REQUIRE(v <= 0.25 + 1e-9);
            }
        }
    }
}

TEST_CASE("witness construction", "[witness]") {
    auto w1 = build_hadamard_witness(1);
    REQUIRE(w1.series.degree() == 4);  // 1 + 1 + 2
    REQUIRE(w1.evaluate(1.0) == 0.0);  // a_1(0) = 0 kills t = 1
    REQUIRE(w1.leading_coefficient == Catch::Approx(1.0).margin(1e-10));

    auto w3 = build_hadamard_witness(3);
    REQUIRE(w3.series.degree() == 16);
    REQUIRE_THROWS_AS(build_hadamard_witness(0), std::invalid_argument);
    REQUIRE_THROWS_AS(build_hadamard_witness(9), std::invalid_argument);
}

TEST_CASE("witness sweep: sup * log^2 M stays in a fixed band", "[witness]") {
    // band frozen from the derived oracle run: products 0.4487 .. 0.5629 * ... in [0.40, 4.0]
    double lo = 1e300, hi = 0.0;
    for (int k = 1; k <= 6; ++k) {
        auto audit = audit_witness(build_hadamard_witness(k));
        REQUIRE_FALSE(audit.violation);
        lo = std::min(lo, audit.product);
        hi = std::max(hi, audit.product);
        // sup <= c_up / 4^{k-1} with the fitted constant frozen at 2.5
        REQUIRE(audit.sup.value <= 2.5 / std::pow(4.0, k - 1));
    }
    REQUIRE(lo >= 0.40);
    REQUIRE(hi <= 4.0);
    REQUIRE(hi / lo < 100.0);
}

TEST_CASE("main-lemma audit", "[audit]") {
    SECTION("padded identity: p = t + 0.5 t^2") {
        auto a = audit_main_lemma(PowerSeries{{1.0, 0.5}});
        REQUIRE(a.length_m == Catch::Approx(1.5));
        REQUIRE(a.sup.value == Catch::Approx(1.5).margin(1e-9));  // increasing, max at t = 1
        REQUIRE_FALSE(a.violation);
    }
    SECTION("product grows with log M along t(1-t)^k") {
        double prev = 0.0;
        for (int k : {4, 8, 16}) {
            auto a = audit_main_lemma(bump_family(k));
            REQUIRE(a.length_m == Catch::Approx(std::pow(2.0, k)).epsilon(1e-12));
            REQUIRE(a.product > prev);
            prev = a.product;
        }
    }
    SECTION("precondition failures are distinct") {
        REQUIRE_THROWS_WITH(audit_main_lemma(PowerSeries{{0.5, 2.0}}),
                            Catch::Matchers::ContainsSubstring("c_1"));
        REQUIRE_THROWS_WITH(audit_main_lemma(PowerSeries{{1.0, 0.1}}),
                            Catch::Matchers::ContainsSubstring("length"));
    }
}

TEST_CASE("normalized gap series", "[series]") {
    auto p = normalized_gap_series({0.5, 0.25});
    REQUIRE(p.coeffs == std::vector<double>{1.0, 0.5});  // u + 0.5 u^2

    auto single = normalized_gap_series({0.1});
    REQUIRE(single.coeffs == std::vector<double>{1.0});  // p(u) = u

    REQUIRE_THROWS_AS(normalized_gap_series({-0.2, 0.1}), std::invalid_argument);
    REQUIRE_THROWS_AS(normalized_gap_series({}), std::invalid_argument);
}
