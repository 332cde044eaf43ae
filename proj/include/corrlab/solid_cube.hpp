#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corrlab/correlation.hpp"
#include "corrlab/power_series.hpp"
#include "corrlab/rng.hpp"

namespace corrlab::cube {

inline constexpr double kPi = 3.14159265358979323846;

// Legendre basis normalized for the uniform measure on [-1,1]:
// phi_k = sqrt(2k+1) P_k with P_k by the Bonnet recurrence.
inline double legendre_phi(int k, double x) {
    if (k < 0) throw std::invalid_argument("legendre_phi: degree must be nonnegative");
    double pm1 = 1.0, p = x;
    if (k == 0) return 1.0;
    for (int j = 1; j < k; ++j) {
        double next = ((2.0 * j + 1.0) * x * p - j * pm1) / (j + 1.0);
        pm1 = p;
        p = next;
    }
    return std::sqrt(2.0 * k + 1.0) * p;
}

// Cosine basis on [0,1]: phi_0 = 1, phi_k = sqrt(2) cos(pi k x).
inline double cosine_phi(int k, double x) {
    if (k < 0) throw std::invalid_argument("cosine_phi: degree must be nonnegative");
    if (k == 0) return 1.0;
    return std::sqrt(2.0) * std::cos(kPi * k * x);
}

// Gauss-Legendre nodes and weights on [-1,1] (weights sum to 2).  Newton on
// P_Q with the usual cosine initial guesses; accurate to ~1e-15 for Q <= 256.
struct Quadrature {
    std::vector<double> nodes, weights;
};

inline Quadrature gauss_legendre(int q) {
    if (q < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    Quadrature quad;
    quad.nodes.resize(q);
    quad.weights.resize(q);
    for (int i = 0; i < (q + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double pm1 = 1.0, p = x;
            for (int j = 1; j < q; ++j) {
                double next = ((2.0 * j + 1.0) * x * p - j * pm1) / (j + 1.0);
                pm1 = p;
                p = next;
            }
            dp = q * (x * p - pm1) / (x * x - 1.0);
            double dx = p / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        quad.nodes[i] = -x;
        quad.weights[i] = w;
        quad.nodes[q - 1 - i] = x;
        quad.weights[q - 1 - i] = w;
    }
    return quad;
}

enum class CubeBasis { legendre, cosine };
enum class Domain { symmetric, unit };  // [-1,1]^n vs [0,1]^n

inline Domain domain_of(CubeBasis b) { return b == CubeBasis::legendre ? Domain::symmetric : Domain::unit; }

struct SmoothFunctionOracle {
    int dim = 1;
    Domain domain = Domain::symmetric;
    std::string name;
    std::function<double(std::span<const double>)> eval;
    bool monotone = false;
    bool neumann_compatible = false;  // zero normal derivative at the boundary

    double operator()(std::span<const double> x) const { return eval(x); }
};

// Affine reparameterization between the two cube conventions.
inline SmoothFunctionOracle bridge_to(const SmoothFunctionOracle& f, Domain target) {
    if (f.domain == target) return f;
    SmoothFunctionOracle g = f;
    g.domain = target;
    bool to_unit = target == Domain::unit;
    g.eval = [inner = f.eval, to_unit](std::span<const double> x) {
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = to_unit ? 2.0 * x[i] - 1.0 : 0.5 * (x[i] + 1.0);
        return inner(y);
    };
    return g;
}

// Coefficient tensor over multi-indices with entries <= D, coordinate 1 most
// significant; the residual ||f||^2 - sum fhat^2 tracks what the truncation
// left behind (up to quadrature accuracy).
struct SpectralExpansion {
    CubeBasis basis = CubeBasis::legendre;
    int dim = 1;
    int max_degree = 0;
    std::vector<double> coeffs;  // (D+1)^n
    double norm2 = 0.0;
    double residual = 0.0;

    std::size_t index(std::span<const int> alpha) const {
        std::size_t idx = 0;
        for (int i = 0; i < dim; ++i) {
            if (alpha[i] < 0 || alpha[i] > max_degree) throw std::invalid_argument("SpectralExpansion: index out of range");
            idx = idx * (max_degree + 1) + alpha[i];
        }
        return idx;
    }
    double coeff(std::span<const int> alpha) const { return coeffs[index(alpha)]; }

    int packed_cardinality(std::size_t idx) const {
        int c = 0;
        for (int i = 0; i < dim; ++i) {
            c += idx % (max_degree + 1) != 0;
            idx /= (max_degree + 1);
        }
        return c;
    }
    // sum of squared entries, the reflected-heat eigenvalue exponent
    int packed_sq_degree(std::size_t idx) const {
        int s = 0;
        for (int i = 0; i < dim; ++i) {
            int e = static_cast<int>(idx % (max_degree + 1));
            s += e * e;
            idx /= (max_degree + 1);
        }
        return s;
    }
};

inline double basis_value(CubeBasis b, int k, double x) {
    return b == CubeBasis::legendre ? legendre_phi(k, x) : cosine_phi(k, x);
}

// Tensor Gauss-Legendre transform of an oracle, n <= 3, quadrature order Q >= 2D.
inline SpectralExpansion spectral_transform(const SmoothFunctionOracle& oracle, CubeBasis basis,
                                            int max_degree, int quad_order) {
    if (oracle.dim > 3) throw std::invalid_argument("spectral_transform: n must be <= 3");
    if (quad_order < 2 * max_degree) throw std::invalid_argument("spectral_transform: need Q >= 2D");
    if (oracle.domain != domain_of(basis))
        throw std::invalid_argument("spectral_transform: oracle domain does not match the basis (bridge it first)");

    const int n = oracle.dim, q = quad_order, d1 = max_degree + 1;
    Quadrature gl = gauss_legendre(q);
    std::vector<double> nodes(q), weights(q);
    for (int i = 0; i < q; ++i) {
        if (basis == CubeBasis::legendre) {  // uniform measure dx/2 on [-1,1]
            nodes[i] = gl.nodes[i];
            weights[i] = 0.5 * gl.weights[i];
        } else {  // uniform measure on [0,1]
            nodes[i] = 0.5 * (gl.nodes[i] + 1.0);
            weights[i] = 0.5 * gl.weights[i];
        }
    }

    std::size_t grid_size = 1;
    for (int i = 0; i < n; ++i) grid_size *= q;
    std::vector<double> values(grid_size);
    std::vector<double> x(n);
    std::vector<int> digs(n, 0);
    for (std::size_t idx = 0; idx < grid_size; ++idx) {
        std::size_t rem = idx;
        for (int i = n - 1; i >= 0; --i) {
            digs[i] = static_cast<int>(rem % q);
            rem /= q;
        }
        for (int i = 0; i < n; ++i) x[i] = nodes[digs[i]];
        values[idx] = oracle(x);
    }

    SpectralExpansion e;
    e.basis = basis;
    e.dim = n;
    e.max_degree = max_degree;

    double norm2 = 0.0;
    {
        std::size_t rem_size = grid_size;
        for (std::size_t idx = 0; idx < rem_size; ++idx) {
            std::size_t rem = idx;
            double w = 1.0;
            for (int i = n - 1; i >= 0; --i) {
                w *= weights[rem % q];
                rem /= q;
            }
            norm2 += w * values[idx] * values[idx];
        }
    }
    e.norm2 = norm2;

    // analysis matrix per axis: A[k][node] = phi_k(node) * weight(node)
    std::vector<double> analysis(static_cast<std::size_t>(d1) * q);
    for (int k = 0; k < d1; ++k)
        for (int i = 0; i < q; ++i) analysis[static_cast<std::size_t>(k) * q + i] = basis_value(basis, k, nodes[i]) * weights[i];

    // contract axes one at a time: sizes go q^n -> d1 q^{n-1} -> ... -> d1^n
    std::vector<double> cur = std::move(values);
    std::vector<std::size_t> dims(n, q);
    for (int axis = 0; axis < n; ++axis) {
        std::size_t before = 1, after = 1;
        for (int i = 0; i < axis; ++i) before *= dims[i];
        for (int i = axis + 1; i < n; ++i) after *= dims[i];
        std::vector<double> next(before * d1 * after, 0.0);
        for (std::size_t b = 0; b < before; ++b)
            for (int k = 0; k < d1; ++k)
                for (std::size_t a = 0; a < after; ++a) {
                    double s = 0.0;
                    const double* arow = &analysis[static_cast<std::size_t>(k) * q];
                    for (int w = 0; w < q; ++w) s += arow[w] * cur[(b * q + w) * after + a];
                    next[(b * d1 + k) * after + a] = s;
                }
        cur = std::move(next);
        dims[axis] = d1;
    }
    e.coeffs = std::move(cur);

    double csum = 0.0;
    for (double c : e.coeffs) csum += c * c;
    e.residual = e.norm2 - csum;
    return e;
}

inline double evaluate_expansion(const SpectralExpansion& e, std::span<const double> x) {
    const int n = e.dim, d1 = e.max_degree + 1;
    std::vector<double> table(static_cast<std::size_t>(n) * d1);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < d1; ++k) table[static_cast<std::size_t>(i) * d1 + k] = basis_value(e.basis, k, x[i]);
    double total = 0.0;
    for (std::size_t idx = 0; idx < e.coeffs.size(); ++idx) {
        if (e.coeffs[idx] == 0.0) continue;
        double v = e.coeffs[idx];
        std::size_t rem = idx;
        for (int i = n - 1; i >= 0; --i) {
            v *= table[static_cast<std::size_t>(i) * d1 + static_cast<int>(rem % d1)];
            rem /= d1;
        }
        total += v;
    }
    return total;
}

// Replacement noise (Legendre route): multiplier rho^{#alpha}.
inline SpectralExpansion replacement_noise(const SpectralExpansion& e, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("replacement_noise: rho must be in [0,1]");
    SpectralExpansion out = e;
    for (std::size_t idx = 0; idx < out.coeffs.size(); ++idx)
        out.coeffs[idx] *= std::pow(rho, e.packed_cardinality(idx));
    return out;
}

// Reflected heat semigroup (cosine route): multiplier exp(-t sum_i alpha_i^2).
inline SpectralExpansion reflected_heat(const SpectralExpansion& e, double t) {
    if (e.basis != CubeBasis::cosine) throw std::invalid_argument("reflected_heat: cosine-basis expansion required");
    if (t < 0.0) throw std::invalid_argument("reflected_heat: t must be nonnegative");
    SpectralExpansion out = e;
    for (std::size_t idx = 0; idx < out.coeffs.size(); ++idx)
        out.coeffs[idx] *= std::exp(-t * e.packed_sq_degree(idx));
    return out;
}

// Folding map of the doubled interval: distance to the nearest even integer.
inline double fold_unit(double y) {
    double z = std::fmod(y, 2.0);
    if (z < 0.0) z += 2.0;
    return z > 1.0 ? 2.0 - z : z;
}

// Endpoint of reflected Brownian motion started at x0, run for time t.  The
// diffusion is scaled so the cosine eigenvalues are exactly k^2 (increment
// standard deviation sqrt(2 dt)/pi), matching the spectral multiplier above.
inline double reflected_brownian_endpoint(double x0, double t, int steps, rng::CounterStream& cs) {
    if (steps < 1) throw std::invalid_argument("reflected_brownian_endpoint: steps must be >= 1");
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw std::invalid_argument("reflected_brownian_endpoint: x0 must be in [0,1]");
    double dt = t / steps;
    double sigma = std::sqrt(2.0 * dt) / kPi;
    double y = x0;
    for (int s = 0; s < steps; ++s) y += sigma * cs.next_gaussian();
    return fold_unit(y);
}

// Sampled-pair monotonicity check: comparable pairs from componentwise meet/join.
inline bool check_monotone_by_sampling(const SmoothFunctionOracle& f, int pairs, std::uint64_t seed) {
    rng::CounterStream cs(seed, 0x310b5);
    const int n = f.dim;
    double lo = f.domain == Domain::unit ? 0.0 : -1.0, hi = 1.0;
    std::vector<double> a(n), b(n);
    for (int p = 0; p < pairs; ++p) {
        for (int i = 0; i < n; ++i) {
            double u = lo + (hi - lo) * cs.next_uniform();
            double v = lo + (hi - lo) * cs.next_uniform();
            a[i] = std::min(u, v);
            b[i] = std::max(u, v);
        }
        if (f(a) > f(b) + 1e-12) return false;
    }
    return true;
}

// Boundary normal derivatives by a second-order one-sided stencil; the cosine
// route needs these to vanish.
inline bool check_neumann(const SmoothFunctionOracle& f, int samples_per_face, std::uint64_t seed,
                          double tol = 1e-6) {
    if (f.domain != Domain::unit) throw std::invalid_argument("check_neumann: oracle must live on [0,1]^n");
    rng::CounterStream cs(seed, 0x8e03);
    const int n = f.dim;
    const double h = 1e-4;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
        for (int side = 0; side < 2; ++side) {
            for (int s = 0; s < samples_per_face; ++s) {
                for (int j = 0; j < n; ++j) x[j] = cs.next_uniform();
                double sign = side == 0 ? 1.0 : -1.0;
                x[i] = side == 0 ? 0.0 : 1.0;
                double f0 = f(x);
                x[i] += sign * h;
                double f1 = f(x);
                x[i] += sign * h;
                double f2 = f(x);
                double deriv = sign * (4.0 * f1 - f2 - 3.0 * f0) / (2.0 * h);
                if (std::fabs(deriv) > tol) return false;
            }
        }
    }
    return true;
}

// Tensor-quadrature moments of a pair on the basis domain: E[f], E[g], E[fg].
struct PairMoments {
    double e_f = 0.0, e_g = 0.0, e_fg = 0.0;
};

inline PairMoments quadrature_moments(const SmoothFunctionOracle& f, const SmoothFunctionOracle& g,
                                      Domain domain, int quad_order) {
    if (f.dim != g.dim) throw std::invalid_argument("quadrature_moments: dimension mismatch");
    const int n = f.dim, q = quad_order;
    Quadrature gl = gauss_legendre(q);
    std::vector<double> nodes(q), weights(q);
    for (int i = 0; i < q; ++i) {
        nodes[i] = domain == Domain::unit ? 0.5 * (gl.nodes[i] + 1.0) : gl.nodes[i];
        weights[i] = 0.5 * gl.weights[i];
    }
    std::size_t grid_size = 1;
    for (int i = 0; i < n; ++i) grid_size *= q;
    PairMoments m;
    std::vector<double> x(n);
    for (std::size_t idx = 0; idx < grid_size; ++idx) {
        std::size_t rem = idx;
        double w = 1.0;
        for (int i = n - 1; i >= 0; --i) {
            int d = static_cast<int>(rem % q);
            x[i] = nodes[d];
            w *= weights[d];
            rem /= q;
        }
        double fv = f(x), gv = g(x);
        m.e_f += w * fv;
        m.e_g += w * gv;
        m.e_fg += w * fv * gv;
    }
    return m;
}

struct ContinuousReport {
    double gap = 0.0;
    double a1 = 0.0;
    double a1_truncation_bound = 0.0;  // Cauchy-Schwarz tail bound from the residuals
    double phi_value = 0.0;
    double ratio = 0.0;
    double residual_f = 0.0, residual_g = 0.0;
    double norm_f = 0.0, norm_g = 0.0;
    bool monotone_f = false, monotone_g = false;
    bool neumann_f = true, neumann_g = true;  // only checked on the cosine route
    std::vector<std::pair<double, double>> sweep;
    bool sweep_monotone = true;
    bool hypotheses_met = false;
    bool verdict = true;
    std::string notes;
};

// Quantitative-bound report over the solid cube with j* = 1.  The gap comes
// straight from quadrature; a_1 is the truncated singleton sum with its tail
// bound surfaced, never silently absorbed.
inline ContinuousReport verify_cont_bound(const SmoothFunctionOracle& f_in,
                                          const SmoothFunctionOracle& g_in, CubeBasis basis,
                                          int max_degree = 32, int quad_order = 64,
                                          bool normalize = false, std::uint64_t seed = 7) {
    if (f_in.dim != g_in.dim) throw std::invalid_argument("verify_cont_bound: dimension mismatch");
    SmoothFunctionOracle f = bridge_to(f_in, domain_of(basis));
    SmoothFunctionOracle g = bridge_to(g_in, domain_of(basis));

    ContinuousReport r;
    r.monotone_f = check_monotone_by_sampling(f, 10000, seed);
    r.monotone_g = check_monotone_by_sampling(g, 10000, seed + 1);
    if (basis == CubeBasis::cosine) {
        r.neumann_f = check_neumann(f, 16, seed + 2);
        r.neumann_g = check_neumann(g, 16, seed + 3);
    }

    SpectralExpansion fe = spectral_transform(f, basis, max_degree, quad_order);
    SpectralExpansion ge = spectral_transform(g, basis, max_degree, quad_order);
    r.norm_f = std::sqrt(std::max(0.0, fe.norm2));
    r.norm_g = std::sqrt(std::max(0.0, ge.norm2));
    if (normalize) {
        double sf = std::max(r.norm_f, 1.0), sg = std::max(r.norm_g, 1.0);
        for (auto& c : fe.coeffs) c /= sf;
        for (auto& c : ge.coeffs) c /= sg;
        fe.norm2 /= sf * sf;
        fe.residual /= sf * sf;
        ge.norm2 /= sg * sg;
        ge.residual /= sg * sg;
    }
    r.residual_f = fe.residual;
    r.residual_g = ge.residual;

    PairMoments mom = quadrature_moments(f, g, domain_of(basis), quad_order);
    double scale = 1.0;
    if (normalize) scale = std::max(r.norm_f, 1.0) * std::max(r.norm_g, 1.0);
    r.gap = (mom.e_fg - mom.e_f * mom.e_g) / scale;

    double a1 = 0.0;
    for (std::size_t idx = 0; idx < fe.coeffs.size(); ++idx)
        if (fe.packed_cardinality(idx) == 1) a1 += fe.coeffs[idx] * ge.coeffs[idx];
    r.a1 = a1;
    r.a1_truncation_bound = std::sqrt(std::max(0.0, fe.residual) * std::max(0.0, ge.residual));
    r.phi_value = phi_bound(std::min(std::max(a1, 0.0), 1.0));
    r.ratio = corrlab::detail::bound_ratio(r.gap, r.phi_value);

    // noise sweep: rho^{#alpha} on the Legendre route, rho^{sum alpha_i^2}
    // (= e^{-t sum alpha_i^2} with rho = e^{-t}) on the cosine route
    double slack = 1e-10 + r.a1_truncation_bound;
    double prev = 0.0;
    for (int gi = 0; gi <= 20; ++gi) {
        double rho = gi / 20.0;
        double q = 0.0;
        for (std::size_t idx = 1; idx < fe.coeffs.size(); ++idx) {
            int expo = basis == CubeBasis::legendre ? fe.packed_cardinality(idx) : fe.packed_sq_degree(idx);
            q += fe.coeffs[idx] * ge.coeffs[idx] * std::pow(rho, expo);
        }
        r.sweep.emplace_back(rho, q);
        if (gi > 0 && q < prev - slack) r.sweep_monotone = false;
        prev = q;
    }

    bool norms_ok = normalize || (r.norm_f <= 1.0 + 1e-9 && r.norm_g <= 1.0 + 1e-9);
    bool neumann_ok = basis != CubeBasis::cosine || (r.neumann_f && r.neumann_g);
    r.hypotheses_met = r.monotone_f && r.monotone_g && norms_ok && neumann_ok;
    if (r.hypotheses_met) {
        r.verdict = r.gap >= -1e-8 && r.a1 >= -1e-8 && r.sweep_monotone;
    } else {
        r.notes = "hypotheses unmet: no assertion applies";
    }
    return r;
}

// Chebyshev rearrangement on 1D monotone oracles over [0,1]:
// E[f(x)] E[g(y)] <= E[f(x) g(x)] up to quadrature tolerance.
inline bool rearrangement_check(const SmoothFunctionOracle& f_in, const SmoothFunctionOracle& g_in,
                                int quad_order = 64) {
    if (f_in.dim != 1 || g_in.dim != 1) throw std::invalid_argument("rearrangement_check: oracles must be 1D");
    SmoothFunctionOracle f = bridge_to(f_in, Domain::unit);
    SmoothFunctionOracle g = bridge_to(g_in, Domain::unit);
    Quadrature gl = gauss_legendre(quad_order);
    double ef = 0.0, eg = 0.0, efg = 0.0;
    for (int i = 0; i < quad_order; ++i) {
        double x = 0.5 * (gl.nodes[i] + 1.0), w = 0.5 * gl.weights[i];
        double fv = f(std::span<const double>(&x, 1)), gv = g(std::span<const double>(&x, 1));
        ef += w * fv;
        eg += w * gv;
        efg += w * fv * gv;
    }
    return ef * eg <= efg + 1e-10;
}

// --- oracle builtins -------------------------------------------------------

inline SmoothFunctionOracle oracle_coordinate(int n, int coord, Domain domain = Domain::symmetric) {
    if (coord < 0 || coord >= n) throw std::invalid_argument("oracle_coordinate: bad coordinate");
    SmoothFunctionOracle o;
    o.dim = n;
    o.domain = domain;
    o.name = "coord:" + std::to_string(coord + 1);
    o.monotone = true;
    o.neumann_compatible = false;
    o.eval = [coord](std::span<const double> x) { return x[coord]; };
    return o;
}

// p(x_1) with coefficients in increasing degree, constant term included
inline SmoothFunctionOracle oracle_poly(std::vector<double> coeffs, int n, Domain domain = Domain::symmetric) {
    SmoothFunctionOracle o;
    o.dim = n;
    o.domain = domain;
    o.name = "poly";
    o.eval = [c = std::move(coeffs)](std::span<const double> x) {
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x[0] + *it;
        return acc;
    };
    return o;
}

// (1 - cos(pi x_1)) / sqrt(3/2): unit norm, monotone on [0,1], Neumann-compatible.
inline SmoothFunctionOracle oracle_cosbump(int n) {
    SmoothFunctionOracle o;
    o.dim = n;
    o.domain = Domain::unit;
    o.name = "cosbump";
    o.monotone = true;
    o.neumann_compatible = true;
    double c = std::sqrt(1.5);
    o.eval = [c](std::span<const double> x) { return (1.0 - std::cos(kPi * x[0])) / c; };
    return o;
}

// Product of 1D monotone nondecreasing nonnegative factors, one per coordinate.
inline SmoothFunctionOracle oracle_product_monotone(std::vector<std::function<double(double)>> factors,
                                                    Domain domain = Domain::symmetric) {
    SmoothFunctionOracle o;
    o.dim = static_cast<int>(factors.size());
    o.domain = domain;
    o.name = "prodmono";
    o.monotone = true;
    o.eval = [fs = std::move(factors)](std::span<const double> x) {
        double v = 1.0;
        for (std::size_t i = 0; i < fs.size(); ++i) v *= fs[i](x[i]);
        return v;
    };
    return o;
}

}  // namespace corrlab::cube
