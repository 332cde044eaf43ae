#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corrlab/finite_product.hpp"
#include "corrlab/power_series.hpp"

namespace corrlab {

// Phi(x) = min{x, x / log^2(1/x)} on [0,1], natural log.  Phi(0) = 0 and
// Phi(1) = 1 (the 1/log^2 branch is +infinity there).
inline double phi_bound(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("phi_bound: argument must be in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double l = std::log(1.0 / x);
    return std::min(x, x / (l * l));
}

// Psi(x) = x / log(e/x) on [0,1], Psi(0) := 0 by continuity.
inline double psi_bound(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("psi_bound: argument must be in [0,1]");
    if (x == 0.0) return 0.0;
    return x / std::log(std::exp(1.0) / x);
}

inline double correlation_gap(const TabulatedFunction& f, const TabulatedFunction& g) {
    return f.inner(g) - f.expectation() * g.expectation();
}

enum class Grading { cardinality, degree };  // #alpha vs |alpha|

// Level inner products a_l = <f_l, g_l> under the chosen grading, all levels
// including 0.  For the #alpha grading, a_1 is also computed through the
// Efron-Stein singleton components (sum_i <f_i - E f, g_i - E g>) and the two
// routes must agree to 1e-10.
struct LevelProfile {
    int j_star = 1;
    Grading grading = Grading::cardinality;
    std::map<int, double> a;
    double a1_efron_stein = 0.0;

    double a_jstar() const {
        auto it = a.find(j_star);
        return it == a.end() ? 0.0 : it->second;
    }
    double abs_sum() const {
        double s = 0.0;
        for (const auto& [l, v] : a) s += std::fabs(v);
        return s;
    }
    // (a_{j*}, a_{2 j*}, ...) out to the last populated multiple
    std::vector<double> multiples() const {
        std::vector<double> out;
        int max_level = a.empty() ? 0 : a.rbegin()->first;
        for (int l = j_star; l <= max_level; l += j_star) {
            auto it = a.find(l);
            out.push_back(it == a.end() ? 0.0 : it->second);
        }
        return out;
    }
    double series_value(double rho) const {
        double q = 0.0;
        for (const auto& [l, v] : a) q += v * std::pow(rho, l);
        return q;
    }
};

inline LevelProfile level_profile(const TabulatedFunction& f, const TabulatedFunction& g,
                                  const Basis& basis, Grading grading, int j_star) {
    if (!f.space->same_as(*g.space)) throw std::invalid_argument("level_profile: space mismatch");
    if (j_star < 1) throw std::invalid_argument("level_profile: j* must be >= 1");
    FourierExpansion fe = fourier(f, basis), ge = fourier(g, basis);
    LevelProfile p;
    p.j_star = j_star;
    p.grading = grading;
    const auto& sp = *f.space;
    for (std::size_t idx = 0; idx < fe.coeffs.size(); ++idx) {
        int level = grading == Grading::cardinality ? detail::packed_cardinality(sp, idx)
                                                    : detail::packed_degree(sp, idx);
        p.a[level] += fe.coeffs[idx] * ge.coeffs[idx];
    }
    // Efron-Stein route for the first level: f^{={i}} = f_i - E[f]
    double ef = f.expectation(), eg = g.expectation();
    double a1_es = 0.0;
    for (int i = 0; i < sp.n(); ++i) {
        TabulatedFunction fi = project_fi(f, i), gi = project_fi(g, i);
        for (int w = 0; w < sp.m(); ++w)
            a1_es += sp.pi()[w] * (fi.values[w] - ef) * (gi.values[w] - eg);
    }
    p.a1_efron_stein = a1_es;
    if (grading == Grading::cardinality) {
        auto it = p.a.find(1);
        double a1 = it == p.a.end() ? 0.0 : it->second;
        if (std::fabs(a1 - a1_es) > 1e-10)
            throw std::logic_error("level_profile: Fourier/Efron-Stein a_1 routes disagree");
    }
    return p;
}

struct NoiseSweep {
    std::vector<std::pair<double, double>> points;  // (rho, q(rho))
    bool monotone = true;                           // nondecreasing with 1e-12 slack
};

inline NoiseSweep noise_sweep(const TabulatedFunction& f, const TabulatedFunction& g,
                              const Basis& basis, const std::vector<double>& grid) {
    NoiseSweep s;
    for (double rho : grid) {
        TabulatedFunction tf = noise_spectral(f, basis, rho);
        s.points.emplace_back(rho, tf.inner(g));
    }
    for (std::size_t i = 1; i < s.points.size(); ++i)
        if (s.points[i].second < s.points[i - 1].second - 1e-12) s.monotone = false;
    return s;
}

inline std::vector<double> default_rho_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 20; ++i) g.push_back(i / 20.0);
    return g;
}

struct Hypotheses {
    bool monotone_f = false, monotone_g = false;
    double norm_f = 0.0, norm_g = 0.0;  // pre-normalization 2-norms
    bool normalized = false;
};

struct CorrelationReport {
    double gap = 0.0;
    double a_jstar = 0.0;
    double phi_value = 0.0;
    double psi_value = 0.0;
    double ratio = 1.0;
    bool sweep_monotone = true;
    std::vector<std::pair<double, double>> sweep;
    Hypotheses hypotheses;
    bool hypotheses_met = false;
    bool vacuous = false;  // a_{j*} = 0 while higher levels are nonzero
    bool verdict = true;   // asserted inequalities hold (vacuously true when hypotheses unmet)
    std::string notes;
};

namespace detail {
inline double bound_ratio(double gap, double phi_value) {
    if (phi_value > 0.0) return gap / phi_value;
    return gap > 1e-12 ? std::numeric_limits<double>::infinity() : 1.0;
}
}  // namespace detail

// Quantitative-bound report for a pair on a finite product space.  The ratio is
// recorded, never compared against an assumed universal constant; marginal
// floating excesses of a_{j*} above 1 are clipped before Phi.
inline CorrelationReport verify_bound(const TabulatedFunction& f_in, const TabulatedFunction& g_in,
                                      const Basis& basis, int j_star = 1, bool normalize = false,
                                      const std::vector<double>& grid = default_rho_grid()) {
    TabulatedFunction f = f_in, g = g_in;
    CorrelationReport r;
    r.hypotheses.monotone_f = is_monotone(f);
    r.hypotheses.monotone_g = is_monotone(g);
    r.hypotheses.norm_f = f.norm();
    r.hypotheses.norm_g = g.norm();
    if (normalize) {
        double sf = std::max(r.hypotheses.norm_f, 1.0), sg = std::max(r.hypotheses.norm_g, 1.0);
        for (auto& v : f.values) v /= sf;
        for (auto& v : g.values) v /= sg;
        r.hypotheses.normalized = true;
    }
    bool norms_ok = normalize || (r.hypotheses.norm_f <= 1.0 + 1e-9 && r.hypotheses.norm_g <= 1.0 + 1e-9);
    r.hypotheses_met = r.hypotheses.monotone_f && r.hypotheses.monotone_g && norms_ok;

    r.gap = correlation_gap(f, g);
    LevelProfile prof = level_profile(f, g, basis, Grading::cardinality, j_star);
    r.a_jstar = prof.a_jstar();
    double clipped = std::min(std::max(r.a_jstar, 0.0), 1.0);
    r.phi_value = phi_bound(clipped);
    r.psi_value = psi_bound(clipped);
    r.ratio = detail::bound_ratio(r.gap, r.phi_value);

    NoiseSweep sweep = noise_sweep(f, g, basis, grid);
    r.sweep = sweep.points;
    r.sweep_monotone = sweep.monotone;

    if (std::fabs(r.a_jstar) < 1e-12) {
        for (const auto& [l, v] : prof.a)
            if (l > 0 && std::fabs(v) > 1e-12) r.vacuous = true;
        if (r.vacuous) r.notes = "bound vacuous: a_{j*} = 0 with nonzero higher levels";
    }
    if (!r.hypotheses_met) {
        r.notes += (r.notes.empty() ? "" : "; ");
        r.notes += "hypotheses unmet: no assertion applies";
        r.verdict = true;
    } else {
        r.verdict = r.gap >= -1e-9 && r.a_jstar >= -1e-9 && r.sweep_monotone;
    }
    return r;
}

// Audit of the abstract bound pipeline on a level profile: the Cauchy-Schwarz
// mass bound, vanishing off multiples of j*, sign of a_{j*}, and the sup of
// the normalized gap series built from the multiples.
struct FrameworkAudit {
    bool sum_bound_ok = false;
    bool divisibility_ok = false;
    bool a_jstar_nonneg = false;
    bool vacuous = false;
    double abs_sum = 0.0;
    double a_jstar = 0.0;
    double series_sup = 0.0;
    bool pass = false;
};

inline FrameworkAudit framework_audit(const LevelProfile& p) {
    FrameworkAudit a;
    a.abs_sum = p.abs_sum();
    a.sum_bound_ok = a.abs_sum <= 1.0 + 1e-9;
    a.divisibility_ok = true;
    for (const auto& [l, v] : p.a)
        if (l > 0 && l % p.j_star != 0 && std::fabs(v) > 1e-9) a.divisibility_ok = false;
    a.a_jstar = p.a_jstar();
    a.a_jstar_nonneg = a.a_jstar >= -1e-9;
    if (a.a_jstar > 1e-12) {
        PowerSeries series = normalized_gap_series(p.multiples());
        a.series_sup = sup_unit_interval(series).value;
    } else {
        a.vacuous = true;
    }
    a.pass = a.sum_bound_ok && a.divisibility_ok && a.a_jstar_nonneg;
    return a;
}

// Partition certificate for monotone pairs with a_1 = 0: coordinates f depends
// on go to S, and g must be constant across each of them.  Refusal carries the
// first offending coordinate.
struct DisjointnessCertificate {
    bool disjoint = false;
    std::vector<int> s;
    int witness_coordinate = -1;
    std::string reason;
};

namespace detail {
inline bool depends_on(const TabulatedFunction& f, int coord) {
    const auto& sp = *f.space;
    const std::size_t stride = sp.stride(coord);
    const int m = sp.m();
    for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
        if (sp.digit(idx, coord) != 0) continue;
        for (int w = 1; w < m; ++w)
            if (f.values[idx] != f.values[idx + w * stride]) return true;
    }
    return false;
}
}  // namespace detail

inline DisjointnessCertificate disjointness_certificate(const TabulatedFunction& f,
                                                        const TabulatedFunction& g,
                                                        const Basis& basis) {
    if (!is_monotone(f) || !is_monotone(g))
        throw std::invalid_argument("disjointness_certificate: inputs must be monotone");
    DisjointnessCertificate cert;
    LevelProfile prof = level_profile(f, g, basis, Grading::cardinality, 1);
    double a1 = prof.a_jstar();
    if (a1 >= 1e-9) {
        cert.reason = "a_1 is positive";
        return cert;
    }
    const auto& sp = *f.space;
    double ef = f.expectation(), eg = g.expectation();
    for (int i = 0; i < sp.n(); ++i) {
        TabulatedFunction fi = project_fi(f, i), gi = project_fi(g, i);
        double nf = 0.0, ng = 0.0;
        for (int w = 0; w < sp.m(); ++w) {
            nf += sp.pi()[w] * (fi.values[w] - ef) * (fi.values[w] - ef);
            ng += sp.pi()[w] * (gi.values[w] - eg) * (gi.values[w] - eg);
        }
        if (std::min(std::sqrt(nf), std::sqrt(ng)) >= 1e-9) {
            cert.witness_coordinate = i;
            cert.reason = "both one-coordinate projections are non-constant";
            return cert;
        }
    }
    for (int i = 0; i < sp.n(); ++i)
        if (detail::depends_on(f, i)) cert.s.push_back(i);
    for (int i : cert.s) {
        if (detail::depends_on(g, i)) {
            cert.witness_coordinate = i;
            cert.reason = "f and g both depend on a shared coordinate";
            cert.s.clear();
            return cert;
        }
    }
    cert.disjoint = true;
    return cert;
}

}  // namespace corrlab
