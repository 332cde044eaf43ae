#include "corrlab/solid_cube.hpp"
#include "corrlab/mc.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

using namespace corrlab;
using cube::CubeBasis;
using cube::Domain;
using cube::SmoothFunctionOracle;

namespace {

constexpr std::uint64_t kSeed = 20250811;

// 1D quadrature oracle over the basis domain with its uniform measure
double quad1(const std::function<double(double)>& f, Domain dom, int order = 64) {
    auto gl = cube::gauss_legendre(order);
    double acc = 0.0;
    for (int i = 0; i < order; ++i) {
        double x = dom == Domain::unit ? 0.5 * (gl.nodes[i] + 1.0) : gl.nodes[i];
        acc += 0.5 * gl.weights[i] * f(x);
    }
    return acc;
}

double ks_statistic_uniform(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    double d = 0.0;
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double cdf = samples[i];
        d = std::max(d, std::fabs((i + 1) / n - cdf));
        d = std::max(d, std::fabs(cdf - i / n));
    }
    return d;
}

}  // namespace

TEST_CASE("Gauss-Legendre quadrature fundamentals", "[quadrature]") {
    auto gl = cube::gauss_legendre(16);
    double wsum = 0.0, x2 = 0.0;
    for (int i = 0; i < 16; ++i) {
        wsum += gl.weights[i];
        x2 += gl.weights[i] * gl.nodes[i] * gl.nodes[i];
    }
    REQUIRE(wsum == Catch::Approx(2.0).margin(1e-13));
    REQUIRE(x2 / 2.0 == Catch::Approx(1.0 / 3.0).margin(1e-13));  // uniform measure on [-1,1]
}

TEST_CASE("Legendre basis values and orthonormality", "[legendre]") {
    REQUIRE(cube::legendre_phi(0, 0.3) == 1.0);
    for (double x : {-0.7, 0.0, 0.4, 1.0})
        REQUIRE(cube::legendre_phi(1, x) == Catch::Approx(std::sqrt(3.0) * x).margin(1e-14));
    REQUIRE(quad1([](double x) { return cube::legendre_phi(2, x) * cube::legendre_phi(2, x); },
                  Domain::symmetric) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(quad1([](double x) { return cube::legendre_phi(1, x) * cube::legendre_phi(2, x); },
                  Domain::symmetric) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("cosine basis values and orthonormality", "[cosine]") {
    REQUIRE(cube::cosine_phi(1, 0.0) == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
    REQUIRE(cube::cosine_phi(3, 0.0) == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
    REQUIRE(quad1([](double x) { return cube::cosine_phi(1, x) * cube::cosine_phi(1, x); },
                  Domain::unit) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(quad1([](double x) { return cube::cosine_phi(1, x) * cube::cosine_phi(2, x); },
                  Domain::unit) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("spectral transforms recover basis members", "[transform]") {
    SECTION("f(x) = x on [-1,1]") {
        auto f = cube::oracle_coordinate(1, 0);
        auto e = cube::spectral_transform(f, CubeBasis::legendre, 8, 16);
        REQUIRE(e.coeff(std::vector<int>{1}) == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-13));
        REQUIRE(std::fabs(e.residual) < 1e-12);
        for (int k = 0; k <= 8; ++k) {
            if (k == 1) continue;
            REQUIRE(std::fabs(e.coeff(std::vector<int>{k})) < 1e-12);
        }
    }
    SECTION("constants") {
        SmoothFunctionOracle one;
        one.dim = 2;
        one.domain = Domain::symmetric;
        one.name = "1";
        one.eval = [](std::span<const double>) { return 1.0; };
        auto e = cube::spectral_transform(one, CubeBasis::legendre, 4, 8);
        REQUIRE(e.coeffs[0] == Catch::Approx(1.0).margin(1e-13));
        for (std::size_t i = 1; i < e.coeffs.size(); ++i) REQUIRE(std::fabs(e.coeffs[i]) < 1e-13);
    }
    SECTION("f(x) = cos(pi x) in the cosine basis") {
        SmoothFunctionOracle f;
        f.dim = 1;
        f.domain = Domain::unit;
        f.name = "cos";
        f.eval = [](std::span<const double> x) { return std::cos(cube::kPi * x[0]); };
        auto e = cube::spectral_transform(f, CubeBasis::cosine, 8, 32);
        REQUIRE(e.coeff(std::vector<int>{1}) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
        for (int k = 0; k <= 8; ++k) {
            if (k == 1) continue;
            REQUIRE(std::fabs(e.coeff(std::vector<int>{k})) < 1e-10);
        }
    }
    SECTION("polynomial Parseval residual is tiny below the truncation") {
        auto f = cube::oracle_poly({0.1, 0.4, -0.3, 0.2, 0.05}, 1);
        auto e = cube::spectral_transform(f, CubeBasis::legendre, 16, 64);
        REQUIRE(std::fabs(e.residual) < 1e-8);
    }
    SECTION("guards") {
        auto f = cube::oracle_coordinate(1, 0);
        REQUIRE_THROWS_AS(cube::spectral_transform(f, CubeBasis::legendre, 8, 10), std::invalid_argument);
        REQUIRE_THROWS_AS(cube::spectral_transform(f, CubeBasis::cosine, 4, 8), std::invalid_argument);
    }
}

TEST_CASE("replacement noise on expansions", "[noise]") {
    SmoothFunctionOracle prod;
    prod.dim = 2;
    prod.domain = Domain::symmetric;
    prod.name = "x1 x2";
    prod.monotone = true;
    prod.eval = [](std::span<const double> x) { return x[0] * x[1]; };
    auto e = cube::spectral_transform(prod, CubeBasis::legendre, 4, 8);

    auto id = cube::replacement_noise(e, 1.0);
    for (std::size_t i = 0; i < e.coeffs.size(); ++i)
        REQUIRE(id.coeffs[i] == Catch::Approx(e.coeffs[i]).margin(1e-14));

    auto flat = cube::replacement_noise(e, 0.0);
    for (std::size_t i = 1; i < flat.coeffs.size(); ++i) REQUIRE(std::fabs(flat.coeffs[i]) < 1e-13);

    // x1 x2 at rho = 1/2: centered factors mean T_rho f = rho^2 x1 x2
    auto half = cube::replacement_noise(e, 0.5);
    double x[2] = {0.3, -0.6};
    REQUIRE(cube::evaluate_expansion(half, std::span<const double>(x, 2)) ==
            Catch::Approx(0.25 * x[0] * x[1]).margin(1e-12));

    // analytic definitional route for a product oracle: prod_i (rho u_i + (1-rho) E[u_i])
    SmoothFunctionOracle shifted = cube::oracle_product_monotone(
        {[](double t) { return 1.0 + 0.5 * t; }, [](double t) { return 2.0 + t * t * t; }});
    auto es = cube::spectral_transform(shifted, CubeBasis::legendre, 8, 32);
    auto noisy = cube::replacement_noise(es, 0.7);
    double pt[2] = {0.25, -0.8};
    double expect = (0.7 * (1.0 + 0.5 * pt[0]) + 0.3 * 1.0) * (0.7 * (2.0 + pt[1] * pt[1] * pt[1]) + 0.3 * 2.0);
    REQUIRE(cube::evaluate_expansion(noisy, std::span<const double>(pt, 2)) ==
            Catch::Approx(expect).margin(1e-10));
}

TEST_CASE("reflected heat semigroup", "[heat]") {
    auto cb = cube::oracle_cosbump(1);
    auto e = cube::spectral_transform(cb, CubeBasis::cosine, 8, 32);

    SECTION("constants are fixed, modes decay as exp(-k^2 t)") {
        auto h = cube::reflected_heat(e, 1.0);
        REQUIRE(h.coeffs[0] == Catch::Approx(e.coeffs[0]).margin(1e-14));
        REQUIRE(h.coeffs[1] == Catch::Approx(e.coeffs[1] * std::exp(-1.0)).margin(1e-14));
    }
    SECTION("tensor eigenvalue for a 2D mode") {
        SmoothFunctionOracle mode;
        mode.dim = 2;
        mode.domain = Domain::unit;
        mode.name = "phi_(1,2)";
        mode.eval = [](std::span<const double> x) {
            return cube::cosine_phi(1, x[0]) * cube::cosine_phi(2, x[1]);
        };
        auto e2 = cube::spectral_transform(mode, CubeBasis::cosine, 4, 16);
        auto h2 = cube::reflected_heat(e2, 0.1);
        REQUIRE(h2.coeff(std::vector<int>{1, 2}) ==
                Catch::Approx(e2.coeff(std::vector<int>{1, 2}) * std::exp(-0.5)).margin(1e-12));
    }
    SECTION("semigroup law on coefficients") {
        auto once = cube::reflected_heat(cube::reflected_heat(e, 0.2), 0.3);
        auto direct = cube::reflected_heat(e, 0.5);
        for (std::size_t i = 0; i < once.coeffs.size(); ++i)
            REQUIRE(once.coeffs[i] == Catch::Approx(direct.coeffs[i]).margin(1e-12));
    }
    REQUIRE_THROWS_AS(cube::reflected_heat(cube::spectral_transform(cube::oracle_coordinate(1, 0),
                                                                    CubeBasis::legendre, 4, 8),
                                           0.5),
                      std::invalid_argument);
}

TEST_CASE("reflected Brownian endpoints", "[brownian]") {
    rng::CounterStream cs(kSeed, 1);
    SECTION("t = 0 stays put") {
        REQUIRE(cube::reflected_brownian_endpoint(0.37, 0.0, 4, cs) == 0.37);
    }
    SECTION("steps guard") {
        REQUIRE_THROWS_AS(cube::reflected_brownian_endpoint(0.5, 1.0, 0, cs), std::invalid_argument);
    }
    SECTION("stationary distribution is uniform") {
        std::vector<double> ends(100000);
        for (auto& v : ends) v = cube::reflected_brownian_endpoint(0.2, 12.0, 8, cs);
        REQUIRE(ks_statistic_uniform(std::move(ends)) < 0.01);
    }
    SECTION("path estimates match the spectral multiplier") {
        for (int k = 1; k <= 3; ++k) {
            for (double t : {0.1, 0.5}) {
                for (double x0 : {0.0, 0.3, 0.7}) {
                    mc::Accumulator acc;
                    rng::CounterStream run(kSeed, 100 + 10 * k + static_cast<int>(10 * t));
                    for (int i = 0; i < 40000; ++i)
                        acc.add(cube::cosine_phi(k, cube::reflected_brownian_endpoint(x0, t, 8, run)));
                    double want = std::exp(-static_cast<double>(k) * k * t) * cube::cosine_phi(k, x0);
                    REQUIRE(std::fabs(acc.mean() - want) <= 4.0 * acc.stderr_of_mean());
                }
            }
        }
    }
    SECTION("semigroup estimates preserve monotonicity on an ascending grid") {
        auto cb = cube::oracle_cosbump(1);
        double prev = -1e9;
        double prev_se = 0.0;
        for (double x0 : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            mc::Accumulator acc;
            rng::CounterStream run(kSeed, 300 + static_cast<int>(100 * x0));
            for (int i = 0; i < 40000; ++i) {
                double end = cube::reflected_brownian_endpoint(x0, 0.2, 8, run);
                acc.add(cb(std::span<const double>(&end, 1)));
            }
            double se = acc.stderr_of_mean();
            REQUIRE(acc.mean() >= prev - 4.0 * std::sqrt(se * se + prev_se * prev_se));
            prev = acc.mean();
            prev_se = se;
        }
    }
}

TEST_CASE("quantitative bound over the solid cube", "[cont]") {
    SECTION("Legendre route, f = g = x1 on [-1,1]^2") {
        auto f = cube::oracle_coordinate(2, 0);
        auto rep = cube::verify_cont_bound(f, f, CubeBasis::legendre, 16, 32);
        REQUIRE(rep.gap == Catch::Approx(1.0 / 3.0).margin(1e-10));
        REQUIRE(rep.a1 == Catch::Approx(1.0 / 3.0).margin(1e-10));
        REQUIRE(rep.hypotheses_met);
        REQUIRE(rep.verdict);
        REQUIRE(rep.sweep_monotone);
    }
    SECTION("disjoint coordinates decouple to quadrature resolution") {
        auto f = cube::oracle_coordinate(2, 0);
        auto g = cube::oracle_coordinate(2, 1);
        auto rep = cube::verify_cont_bound(f, g, CubeBasis::legendre, 16, 32);
        REQUIRE(std::fabs(rep.gap) < 1e-9);
        REQUIRE(std::fabs(rep.a1) < 1e-9);
    }
    SECTION("cosine route, single-frequency self-pair") {
        auto cb = cube::oracle_cosbump(1);
        auto rep = cube::verify_cont_bound(cb, cb, CubeBasis::cosine, 16, 32);
        REQUIRE(rep.gap == Catch::Approx(1.0 / 3.0).margin(1e-8));
        REQUIRE(rep.a1 == Catch::Approx(1.0 / 3.0).margin(1e-8));
        REQUIRE(rep.neumann_f);
        REQUIRE(rep.verdict);
    }
    SECTION("the cosine route flags boundary-incompatible oracles") {
        auto f = cube::oracle_coordinate(1, 0, Domain::unit);
        auto rep = cube::verify_cont_bound(f, f, CubeBasis::cosine, 16, 32);
        REQUIRE_FALSE(rep.neumann_f);
        REQUIRE_FALSE(rep.hypotheses_met);
    }
}

TEST_CASE("rearrangement inequality on 1D monotone pairs", "[rearrangement]") {
    auto x = cube::oracle_poly({0.0, 1.0}, 1);
    auto x3 = cube::oracle_poly({0.0, 0.0, 0.0, 1.0}, 1);
    SmoothFunctionOracle c;
    c.dim = 1;
    c.domain = Domain::symmetric;
    c.name = "const";
    c.eval = [](std::span<const double>) { return 0.8; };

    REQUIRE(cube::rearrangement_check(x, x));
    REQUIRE(cube::rearrangement_check(x, x3));
    REQUIRE(cube::rearrangement_check(c, x));  // constant: equality case

    rng::CounterStream cs(kSeed, 5);
    for (int trial = 0; trial < 50; ++trial) {
        // random monotone pair: nonnegative combinations of odd powers
        auto mk = [&]() {
            std::vector<double> coeffs(6, 0.0);
            for (int d : {1, 3, 5}) coeffs[d] = cs.next_uniform();
            return cube::oracle_poly(std::move(coeffs), 1);
        };
        REQUIRE(cube::rearrangement_check(mk(), mk()));
    }
}

TEST_CASE("domain bridging is an affine reparameterization", "[bridge]") {
    auto f = cube::oracle_cosbump(1);  // on [0,1]
    auto g = cube::bridge_to(f, Domain::symmetric);
    double xs = -0.5;  // maps to 0.25
    double xu = 0.25;
    REQUIRE(g(std::span<const double>(&xs, 1)) == Catch::Approx(f(std::span<const double>(&xu, 1))).margin(1e-15));
}
