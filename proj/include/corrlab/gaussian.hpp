#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corrlab/correlation.hpp"
#include "corrlab/mc.hpp"
#include "corrlab/rng.hpp"
#include "corrlab/special_functions.hpp"

namespace corrlab::gaussian {

using mc::McEstimate;

// Normalized probabilists' Hermite polynomial h_j, orthonormal under N(0,1):
// h_0 = 1, h_1 = x, sqrt(j+1) h_{j+1} = x h_j - sqrt(j) h_{j-1}.
inline double hermite(int j, double x) {
    if (j < 0) throw std::invalid_argument("hermite: degree must be nonnegative");
    if (j == 0) return 1.0;
    double hm1 = 1.0, h = x;
    for (int k = 1; k < j; ++k) {
        double next = (x * h - std::sqrt(static_cast<double>(k)) * hm1) / std::sqrt(static_cast<double>(k + 1));
        hm1 = h;
        h = next;
    }
    return h;
}

inline double hermite_multi(std::span<const int> alpha, std::span<const double> x) {
    if (alpha.size() != x.size()) throw std::invalid_argument("hermite_multi: dimension mismatch");
    double v = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (alpha[i] != 0) v *= hermite(alpha[i], x[i]);
    return v;
}

// Membership/value oracle over R^n.  Set indicators return exactly 0 or 1.
struct BodyOracle {
    enum class Kind { symmetric_convex_set, quasiconcave_nonneg, symmetric_convex_function };

    int dim = 1;
    Kind kind = Kind::symmetric_convex_set;
    std::string name;
    std::function<double(std::span<const double>)> eval;
    std::optional<double> radius;  // closed-form metadata when available

    double operator()(std::span<const double> x) const { return eval(x); }
};

inline BodyOracle ball(double r, int n) {
    BodyOracle o;
    o.dim = n;
    o.name = "ball:r=" + std::to_string(r);
    o.radius = r;
    double r2 = r * r;
    o.eval = [r2](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s <= r2 ? 1.0 : 0.0;
    };
    return o;
}

inline BodyOracle box(std::vector<double> halfwidths) {
    BodyOracle o;
    o.dim = static_cast<int>(halfwidths.size());
    o.name = "box";
    o.eval = [hw = std::move(halfwidths)](std::span<const double> x) {
        for (std::size_t i = 0; i < hw.size(); ++i)
            if (std::fabs(x[i]) > hw[i]) return 0.0;
        return 1.0;
    };
    return o;
}

inline BodyOracle slab(std::vector<double> direction, double halfwidth) {
    double nrm = 0.0;
    for (double v : direction) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (nrm <= 0.0) throw std::invalid_argument("slab: zero direction");
    for (double& v : direction) v /= nrm;
    BodyOracle o;
    o.dim = static_cast<int>(direction.size());
    o.name = "slab";
    o.radius = halfwidth;
    o.eval = [dir = std::move(direction), halfwidth](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < dir.size(); ++i) s += dir[i] * x[i];
        return std::fabs(s) <= halfwidth ? 1.0 : 0.0;
    };
    return o;
}

// Membership x^T A x <= 1 for symmetric positive definite A (row-major).
inline BodyOracle ellipsoid(std::vector<double> a_matrix, int n) {
    if (static_cast<int>(a_matrix.size()) != n * n) throw std::invalid_argument("ellipsoid: matrix size mismatch");
    BodyOracle o;
    o.dim = n;
    o.name = "ellipsoid";
    o.eval = [a = std::move(a_matrix), n](std::span<const double> x) {
        double q = 0.0;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += a[static_cast<std::size_t>(i) * n + j] * x[j];
            q += x[i] * row;
        }
        return q <= 1.0 ? 1.0 : 0.0;
    };
    return o;
}

inline BodyOracle gauss_bump(int n) {
    BodyOracle o;
    o.dim = n;
    o.kind = BodyOracle::Kind::quasiconcave_nonneg;
    o.name = "quasi:gauss-bump";
    o.eval = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::exp(-0.5 * s);
    };
    return o;
}

inline BodyOracle abs_coordinate(int n, int coord) {
    if (coord < 0 || coord >= n) throw std::invalid_argument("abs_coordinate: bad coordinate");
    BodyOracle o;
    o.dim = n;
    o.kind = BodyOracle::Kind::symmetric_convex_function;
    o.name = "cvx:abs" + std::to_string(coord + 1);
    o.eval = [coord](std::span<const double> x) { return std::fabs(x[coord]); };
    return o;
}

// ||x||/sqrt(n); unit 2-norm since E||x||^2 = n.
inline BodyOracle scaled_norm(int n) {
    BodyOracle o;
    o.dim = n;
    o.kind = BodyOracle::Kind::symmetric_convex_function;
    o.name = "cvx:norm";
    double inv = 1.0 / std::sqrt(static_cast<double>(n));
    o.eval = [inv](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::sqrt(s) * inv;
    };
    return o;
}

// max(|x_1|, |x_2|) scaled to unit 2-norm; E[max^2] = 1 + 2/pi.
inline BodyOracle max_abs_two(int n) {
    if (n < 2) throw std::invalid_argument("max_abs_two: needs dim >= 2");
    BodyOracle o;
    o.dim = n;
    o.kind = BodyOracle::Kind::symmetric_convex_function;
    o.name = "cvx:max2";
    double inv = 1.0 / std::sqrt(1.0 + 2.0 / 3.14159265358979323846);
    o.eval = [inv](std::span<const double> x) { return std::max(std::fabs(x[0]), std::fabs(x[1])) * inv; };
    return o;
}

// Spot-check of declared oracle structure on random Gaussian samples: central
// symmetry for every kind, exact 0/1 values for set indicators.
inline bool spot_check_oracle(const BodyOracle& body, int samples, std::uint64_t seed) {
    rng::CounterStream cs(seed, 0x0b0d);
    std::vector<double> x(body.dim), neg(body.dim);
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < body.dim; ++i) {
            x[i] = cs.next_gaussian();
            neg[i] = -x[i];
        }
        double v = body(x);
        if (v != body(neg)) return false;
        if (body.kind == BodyOracle::Kind::symmetric_convex_set && v != 0.0 && v != 1.0) return false;
        if (body.kind != BodyOracle::Kind::symmetric_convex_set && v < 0.0) return false;
    }
    return true;
}

// Haar-ish random orthogonal matrix: Gram-Schmidt on Gaussian columns.
inline std::vector<double> random_rotation(int n, rng::CounterStream& cs) {
    std::vector<double> q(static_cast<std::size_t>(n) * n);
    for (auto& v : q) v = cs.next_gaussian();
    // orthonormalize columns
    for (int j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int l = 0; l < j; ++l) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += q[static_cast<std::size_t>(i) * n + j] * q[static_cast<std::size_t>(i) * n + l];
                for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i) * n + j] -= dot * q[static_cast<std::size_t>(i) * n + l];
            }
        }
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) nrm += q[static_cast<std::size_t>(i) * n + j] * q[static_cast<std::size_t>(i) * n + j];
        nrm = std::sqrt(nrm);
        for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i) * n + j] /= nrm;
    }
    return q;
}

inline BodyOracle rotate(const BodyOracle& body, std::vector<double> rotation) {
    const int n = body.dim;
    if (static_cast<int>(rotation.size()) != n * n) throw std::invalid_argument("rotate: matrix size mismatch");
    BodyOracle o = body;
    o.name = body.name + "(rotated)";
    o.eval = [inner = body.eval, r = std::move(rotation), n](std::span<const double> x) {
        std::vector<double> y(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += r[static_cast<std::size_t>(i) * n + j] * x[j];
            y[i] = s;
        }
        return inner(y);
    };
    return o;
}

inline BodyOracle random_ellipsoid(int n, double max_condition, rng::CounterStream& cs) {
    // A = R^T D R with log-uniform eigenvalues of bounded spread
    std::vector<double> r = random_rotation(n, cs);
    std::vector<double> d(n);
    double lo = 1.0 / std::sqrt(max_condition), hi = std::sqrt(max_condition);
    for (auto& v : d) v = lo * std::pow(hi / lo, cs.next_uniform());
    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += r[static_cast<std::size_t>(k) * n + i] * d[k] * r[static_cast<std::size_t>(k) * n + j];
            a[static_cast<std::size_t>(i) * n + j] = s;
        }
    return ellipsoid(std::move(a), n);
}

namespace detail {

// One chunked pass over samples ~ N(0,1)^dim; per sample the visitor adds one
// value per statistic.  Chunk streams are pre-assigned so the reduction is
// independent of the worker count.
template <class Visitor>
std::vector<mc::Accumulator> gaussian_pass(int dim, std::size_t samples, std::uint64_t seed,
                                           std::uint64_t stream, std::size_t nstats, Visitor&& visit) {
    if (samples == 0) throw std::invalid_argument("monte carlo: sample count must be positive");
    std::size_t nchunks = (samples + mc::kChunkSamples - 1) / mc::kChunkSamples;
    std::vector<std::vector<mc::Accumulator>> per_chunk(nchunks);
    mc::run_chunks(nchunks, [&](std::size_t c) {
        std::size_t begin = c * mc::kChunkSamples;
        std::size_t count = std::min(mc::kChunkSamples, samples - begin);
        rng::CounterStream cs(seed, mc::chunk_stream(stream, c));
        std::vector<mc::Accumulator> accs(nstats);
        std::vector<double> x(dim);
        for (std::size_t s = 0; s < count; ++s) {
            rng::fill_gaussian(cs, x);
            visit(std::span<const double>(x), cs, accs);
        }
        per_chunk[c] = std::move(accs);
    });
    std::vector<mc::Accumulator> total(nstats);
    for (const auto& accs : per_chunk)
        for (std::size_t i = 0; i < nstats; ++i) total[i].merge(accs[i]);
    return total;
}

}  // namespace detail

// Hermite coefficient estimate  ftilde(alpha) = E[f(x) h_alpha(x)].
inline McEstimate mc_hermite_coeff(const BodyOracle& oracle, const std::vector<int>& alpha,
                                   std::size_t samples, std::uint64_t seed, std::uint64_t stream = 0) {
    if (static_cast<int>(alpha.size()) != oracle.dim)
        throw std::invalid_argument("mc_hermite_coeff: multi-index dimension mismatch");
    auto accs = detail::gaussian_pass(
        oracle.dim, samples, seed, stream, 1,
        [&](std::span<const double> x, rng::CounterStream&, std::vector<mc::Accumulator>& a) {
            a[0].add(oracle(x) * hermite_multi(alpha, x));
        });
    return mc::finish(accs[0], seed, stream);
}

// Inf_v[K] = E[-K(x) h_2(<x,v>)] for a unit direction v.
inline McEstimate influence_direction(const BodyOracle& oracle, std::vector<double> v,
                                      std::size_t samples, std::uint64_t seed, std::uint64_t stream = 0) {
    if (static_cast<int>(v.size()) != oracle.dim)
        throw std::invalid_argument("influence_direction: direction dimension mismatch");
    double nrm = 0.0;
    for (double c : v) nrm += c * c;
    nrm = std::sqrt(nrm);
    if (std::fabs(nrm - 1.0) > 1e-9) throw std::invalid_argument("influence_direction: direction must be a unit vector");
    auto accs = detail::gaussian_pass(
        oracle.dim, samples, seed, stream, 1,
        [&](std::span<const double> x, rng::CounterStream&, std::vector<mc::Accumulator>& a) {
            double proj = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) proj += v[i] * x[i];
            a[0].add(-oracle(x) * hermite(2, proj));
        });
    return mc::finish(accs[0], seed, stream);
}

// All requested directions in one pass: the body is evaluated once per sample.
inline std::vector<McEstimate> influence_directions_batch(const BodyOracle& oracle,
                                                          const std::vector<std::vector<double>>& dirs,
                                                          std::size_t samples, std::uint64_t seed,
                                                          std::uint64_t stream = 0) {
    for (const auto& v : dirs)
        if (static_cast<int>(v.size()) != oracle.dim)
            throw std::invalid_argument("influence_directions_batch: direction dimension mismatch");
    auto accs = detail::gaussian_pass(
        oracle.dim, samples, seed, stream, dirs.size(),
        [&](std::span<const double> x, rng::CounterStream&, std::vector<mc::Accumulator>& a) {
            double fv = oracle(x);
            for (std::size_t d = 0; d < dirs.size(); ++d) {
                double proj = 0.0;
                for (std::size_t i = 0; i < dirs[d].size(); ++i) proj += dirs[d][i] * x[i];
                a[d].add(-fv * hermite(2, proj));
            }
        });
    std::vector<McEstimate> out;
    out.reserve(dirs.size());
    for (const auto& acc : accs) out.push_back(mc::finish(acc, seed, stream));
    return out;
}

// Influence of the interval [-r, r] along its own axis:
// integral of (1 - x^2) phi over [-r, r] equals 2 r phi(r), hence sqrt(2) r phi(r).
inline double interval_influence_closed_form(double r) { return std::sqrt(2.0) * r * rng::normal_pdf(r); }

// Symmetric matrix of degree-2 Hermite data: M_ii = sqrt(2) ftilde(2 e_i),
// M_ij = ftilde(e_i + e_j); stderr matrix alongside.
struct Degree2Matrix {
    int n = 0;
    std::vector<double> value;   // row-major n x n, symmetric
    std::vector<double> std_error;  // same layout

    double at(int i, int j) const { return value[static_cast<std::size_t>(i) * n + j]; }
    double se(int i, int j) const { return std_error[static_cast<std::size_t>(i) * n + j]; }
};

struct Degree2Profile {
    Degree2Matrix mf, mg;
    double a2 = 0.0;                  // sum over |alpha| = 2 of ftilde gtilde
    double a2_stderr = 0.0;           // first-order error propagation
    double a2_frobenius = 0.0;        // (1/2) <M_f, M_g>_F, the second route
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

namespace detail {

// All n(n+1)/2 degree-2 coefficients of one oracle from a single shared pass.
inline Degree2Matrix degree2_matrix(const BodyOracle& oracle, std::size_t samples, std::uint64_t seed,
                                    std::uint64_t stream) {
    const int n = oracle.dim;
    const std::size_t nstats = static_cast<std::size_t>(n) * (n + 1) / 2;
    auto accs = gaussian_pass(
        n, samples, seed, stream, nstats,
        [&](std::span<const double> x, rng::CounterStream&, std::vector<mc::Accumulator>& a) {
            double fv = oracle(x);
            std::size_t k = 0;
            for (int i = 0; i < n; ++i) a[k++].add(fv * hermite(2, x[i]));
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) a[k++].add(fv * x[i] * x[j]);
        });
    Degree2Matrix m;
    m.n = n;
    m.value.assign(static_cast<std::size_t>(n) * n, 0.0);
    m.std_error.assign(static_cast<std::size_t>(n) * n, 0.0);
    std::size_t k = 0;
    const double rt2 = std::sqrt(2.0);
    for (int i = 0; i < n; ++i, ++k) {
        m.value[static_cast<std::size_t>(i) * n + i] = rt2 * accs[k].mean();
        m.std_error[static_cast<std::size_t>(i) * n + i] = rt2 * accs[k].stderr_of_mean();
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++k) {
            m.value[static_cast<std::size_t>(i) * n + j] = m.value[static_cast<std::size_t>(j) * n + i] = accs[k].mean();
            m.std_error[static_cast<std::size_t>(i) * n + j] = m.std_error[static_cast<std::size_t>(j) * n + i] =
                accs[k].stderr_of_mean();
        }
    return m;
}

}  // namespace detail

// a_2 = sum_i ftilde(2e_i) gtilde(2e_i) + sum_{i<j} ftilde(e_i+e_j) gtilde(e_i+e_j),
// computed from two independent shared-stream passes (one per oracle), together
// with the algebraically equal Frobenius route (1/2)<M_f, M_g>.
inline Degree2Profile degree2_profile(const BodyOracle& f, const BodyOracle& g, std::size_t samples,
                                      std::uint64_t seed, std::uint64_t stream = 0) {
    if (f.dim != g.dim) throw std::invalid_argument("degree2_profile: dimension mismatch");
    Degree2Profile p;
    p.samples = samples;
    p.seed = seed;
    p.mf = detail::degree2_matrix(f, samples, seed, 2 * stream + 1);
    p.mg = detail::degree2_matrix(g, samples, seed, 2 * stream + 2);
    const int n = f.dim;
    const double rt2 = std::sqrt(2.0);
    double a2 = 0.0, var = 0.0, frob = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) frob += p.mf.at(i, j) * p.mg.at(i, j);
    p.a2_frobenius = 0.5 * frob;
    for (int i = 0; i < n; ++i) {
        double fv = p.mf.at(i, i) / rt2, gv = p.mg.at(i, i) / rt2;
        double fs = p.mf.se(i, i) / rt2, gs = p.mg.se(i, i) / rt2;
        a2 += fv * gv;
        var += fv * fv * gs * gs + gv * gv * fs * fs;
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            a2 += p.mf.at(i, j) * p.mg.at(i, j);
            var += p.mf.at(i, j) * p.mf.at(i, j) * p.mg.se(i, j) * p.mg.se(i, j) +
                   p.mg.at(i, j) * p.mg.at(i, j) * p.mf.se(i, j) * p.mf.se(i, j);
        }
    p.a2 = a2;
    p.a2_stderr = std::sqrt(var);
    return p;
}

// Correlated Gaussian pairs with E[x_i y_i] = rho: y = rho x + sqrt(1-rho^2) z.
// This is the convention that preserves the N(0,1)^n marginal.
struct OuPairSampler {
    double rho;
    int n;

    void sample(rng::CounterStream& cs, std::vector<double>& x, std::vector<double>& y) const {
        x.resize(n);
        y.resize(n);
        double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
        for (int i = 0; i < n; ++i) {
            x[i] = cs.next_gaussian();
            y[i] = rho * x[i] + c * cs.next_gaussian();
        }
    }
};

struct GciReport {
    McEstimate gap;  // E[KL] - E[K]E[L]
    double a2 = 0.0, a2_stderr = 0.0, a2_frobenius = 0.0;
    double phi_value = 0.0;
    double ratio = 0.0;
    std::vector<std::pair<double, double>> sweep;          // (rho, q(rho))
    std::vector<double> sweep_stderr;
    bool sweep_monotone_within_error = true;
    bool gap_nonneg = true, a2_nonneg = true;  // within 4 stderr
    std::string kind_f, kind_g;
};

inline const char* kind_name(BodyOracle::Kind k) {
    switch (k) {
        case BodyOracle::Kind::symmetric_convex_set: return "symmetric_convex_set";
        case BodyOracle::Kind::quasiconcave_nonneg: return "quasiconcave_nonneg";
        case BodyOracle::Kind::symmetric_convex_function: return "symmetric_convex_function";
    }
    return "?";
}

// MC verification of the quantitative bound over Gaussian space with j* = 2.
// The same pipeline serves indicators, quasiconcave and convex-function pairs;
// the hypothesis actually exercised is recorded, never assumed.
inline GciReport verify_robust_gci(const BodyOracle& k_body, const BodyOracle& l_body,
                                   const std::vector<double>& rho_grid, std::size_t samples,
                                   std::uint64_t seed) {
    if (k_body.dim != l_body.dim) throw std::invalid_argument("verify_robust_gci: dimension mismatch");
    if (samples == 0) throw std::invalid_argument("verify_robust_gci: sample count must be positive");
    const int n = k_body.dim;
    GciReport r;
    r.kind_f = kind_name(k_body.kind);
    r.kind_g = kind_name(l_body.kind);

    // gap: per-sample K(x)L(x) - K(x')L(y') with independent x', y'
    auto gap_accs = detail::gaussian_pass(
        n, samples, seed, /*stream=*/10, 1,
        [&](std::span<const double> x, rng::CounterStream& cs, std::vector<mc::Accumulator>& a) {
            std::vector<double> xp(n), yp(n);
            for (int i = 0; i < n; ++i) xp[i] = cs.next_gaussian();
            for (int i = 0; i < n; ++i) yp[i] = cs.next_gaussian();
            a[0].add(k_body(x) * l_body(x) - k_body(xp) * l_body(yp));
        });
    r.gap = mc::finish(gap_accs[0], seed, 10);

    Degree2Profile prof = degree2_profile(k_body, l_body, samples, seed, /*stream=*/20);
    r.a2 = prof.a2;
    r.a2_stderr = prof.a2_stderr;
    r.a2_frobenius = prof.a2_frobenius;
    r.phi_value = phi_bound(std::min(std::max(r.a2, 0.0), 1.0));
    r.ratio = corrlab::detail::bound_ratio(r.gap.value, r.phi_value);

    // q(rho) sweep with common random numbers across the grid
    if (!rho_grid.empty()) {
        std::size_t ng = rho_grid.size();
        auto accs = detail::gaussian_pass(
            n, samples, seed, /*stream=*/30, ng,
            [&](std::span<const double> x, rng::CounterStream& cs, std::vector<mc::Accumulator>& a) {
                std::vector<double> z(n), y(n);
                for (int i = 0; i < n; ++i) z[i] = cs.next_gaussian();
                double kv = k_body(x);
                for (std::size_t gi = 0; gi < ng; ++gi) {
                    double rho = rho_grid[gi];
                    double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
                    for (int i = 0; i < n; ++i) y[i] = rho * x[i] + c * z[i];
                    a[gi].add(kv * l_body(y));
                }
            });
        for (std::size_t gi = 0; gi < ng; ++gi) {
            r.sweep.emplace_back(rho_grid[gi], accs[gi].mean());
            r.sweep_stderr.push_back(accs[gi].stderr_of_mean());
        }
        for (std::size_t gi = 1; gi < ng; ++gi) {
            double slack = 4.0 * std::sqrt(r.sweep_stderr[gi] * r.sweep_stderr[gi] +
                                           r.sweep_stderr[gi - 1] * r.sweep_stderr[gi - 1]);
            if (r.sweep[gi].second < r.sweep[gi - 1].second - slack) r.sweep_monotone_within_error = false;
        }
    }

    r.gap_nonneg = r.gap.value >= -4.0 * r.gap.std_error;
    r.a2_nonneg = r.a2 >= -4.0 * r.a2_stderr;
    return r;
}

struct BallsExperiment {
    double eps = 0.0;
    int n = 0;
    double r1 = 0.0, r2 = 0.0;
    double exact_gap = 0.0;  // eps^2 by nested containment
    double a2 = 0.0, a2_stderr = 0.0;
    double phi_value = 0.0;
    double ratio = 0.0;          // exact_gap / Phi(a2)
    bool a2_lower_ok = false;    // a2 >= eps^2 - 4 stderr (small-eps regime check)
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

// Nested origin-centered balls calibrated to Gaussian masses eps and 1-eps via
// chi-square quantiles.  The gap is exactly eps^2; a_2 reduces to the diagonal
// sum since off-diagonal degree-2 coefficients of axis-symmetric sets vanish.
inline BallsExperiment balls_tightness(double eps, int n, std::size_t samples, std::uint64_t seed) {
    if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("balls_tightness: eps must be in (0, 0.5]");
    if (n < 1) throw std::invalid_argument("balls_tightness: n must be >= 1");
    BallsExperiment e;
    e.eps = eps;
    e.n = n;
    e.samples = samples;
    e.seed = seed;
    e.r1 = std::sqrt(special::chi_square_quantile(n, eps));
    e.r2 = std::sqrt(special::chi_square_quantile(n, 1.0 - eps));
    e.exact_gap = eps * eps;

    BodyOracle k_body = ball(e.r1, n), l_body = ball(e.r2, n);
    auto diag = [&](const BodyOracle& o, std::uint64_t stream) {
        return detail::gaussian_pass(
            n, samples, seed, stream, n,
            [&](std::span<const double> x, rng::CounterStream&, std::vector<mc::Accumulator>& a) {
                double v = o(x);
                if (v != 0.0)
                    for (int i = 0; i < n; ++i) a[i].add(v * hermite(2, x[i]));
                else
                    for (int i = 0; i < n; ++i) a[i].add(0.0);
            });
    };
    auto ka = diag(k_body, 41), la = diag(l_body, 42);
    double a2 = 0.0, var = 0.0;
    for (int i = 0; i < n; ++i) {
        double kv = ka[i].mean(), lv = la[i].mean();
        double ks = ka[i].stderr_of_mean(), ls = la[i].stderr_of_mean();
        a2 += kv * lv;
        var += kv * kv * ls * ls + lv * lv * ks * ks;
    }
    e.a2 = a2;
    e.a2_stderr = std::sqrt(var);
    e.phi_value = phi_bound(std::min(std::max(a2, 0.0), 1.0));
    e.ratio = corrlab::detail::bound_ratio(e.exact_gap, e.phi_value);
    e.a2_lower_ok = e.a2 >= e.eps * e.eps - 4.0 * e.a2_stderr;
    return e;
}

// Unit-norm symmetric convex function oracles for the convex-function variant.
inline std::vector<BodyOracle> hu_pair_library(int n) {
    std::vector<BodyOracle> lib;
    lib.push_back(abs_coordinate(n, 0));
    if (n >= 2) lib.push_back(abs_coordinate(n, 1));
    lib.push_back(scaled_norm(n));
    if (n >= 2) lib.push_back(max_abs_two(n));
    return lib;
}

}  // namespace corrlab::gaussian
