#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrlab {

// Real power series p(t) = c_1 t + c_2 t^2 + ... + c_d t^d, no constant term.
// coeffs[0] holds c_1.
struct PowerSeries {
    std::vector<double> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()); }

    // Horner, factoring out the leading t
    double evaluate(double t) const {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
        return acc * t;
    }
};

// Dense polynomial with constant term, q(t) = a_0 + a_1 t + ... .
// Evaluation uses compensated Horner (error-free transformations), which keeps
// ill-conditioned coefficient vectors such as high-degree Chebyshev expansions
// accurate to working precision.
struct Polynomial {
    std::vector<double> coeffs;

    int degree() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1; }

    double evaluate(double t) const {
        if (coeffs.empty()) return 0.0;
        double s = coeffs.back(), comp = 0.0;
        for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) {
            double p = s * t;
            double p_err = std::fma(s, t, -p);
            double sum = p + *it;
            double z = sum - p;
            double s_err = (p - (sum - z)) + (*it - z);
            s = sum;
            comp = comp * t + (p_err + s_err);
        }
        return s + comp;
    }

    Polynomial operator*(const Polynomial& o) const {
        Polynomial r;
        r.coeffs.assign(coeffs.size() + o.coeffs.size() - 1, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            for (std::size_t j = 0; j < o.coeffs.size(); ++j) r.coeffs[i + j] += coeffs[i] * o.coeffs[j];
        return r;
    }
};

inline double length(const PowerSeries& p) {
    double s = 0.0;
    for (double c : p.coeffs) s += std::fabs(c);
    return s;
}

inline double length(const Polynomial& p) {
    double s = 0.0;
    for (double c : p.coeffs) s += std::fabs(c);
    return s;
}

struct SupConfig {
    int grid_size = 0;       // 0 = auto: max(4096, 64*degree)
    double tol = 1e-12;      // absolute tolerance on t for the refinement
    int max_iterations = 200;
};

struct SupResult {
    double argmax_t = 0.0;
    double value = 0.0;
    int grid_size = 0;
    int refinement_iterations = 0;
};

// sup_{t in [0,1]} |f(t)|: dense grid scan followed by golden-section refinement
// around the best grid cell.  The result is never below the grid maximum.
inline SupResult sup_unit_interval(const std::function<double(double)>& f, int degree_hint,
                                   SupConfig cfg = {}) {
    int n = cfg.grid_size > 0 ? cfg.grid_size : std::max(4096, 64 * std::max(degree_hint, 1));
    double best_t = 0.0, best_v = -1.0;
    for (int i = 0; i <= n; ++i) {
        double t = static_cast<double>(i) / n;
        double v = std::fabs(f(t));
        if (v > best_v) {
            best_v = v;
            best_t = t;
        }
    }

    double lo = std::max(0.0, best_t - 1.0 / n);
    double hi = std::min(1.0, best_t + 1.0 / n);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = std::fabs(f(c)), fd = std::fabs(f(d));
    int iters = 0;
    while (b - a > cfg.tol && iters < cfg.max_iterations) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = std::fabs(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = std::fabs(f(d));
        }
        ++iters;
    }
    double refined_t = fc > fd ? c : d;
    double refined_v = std::max(fc, fd);
    SupResult r;
    r.grid_size = n;
    r.refinement_iterations = iters;
    if (refined_v > best_v) {
        r.argmax_t = refined_t;
        r.value = refined_v;
    } else {
        r.argmax_t = best_t;
        r.value = best_v;
    }
    return r;
}

inline SupResult sup_unit_interval(const PowerSeries& p, SupConfig cfg = {}) {
    if (p.coeffs.empty()) throw std::invalid_argument("sup_unit_interval: degree must be >= 1");
    for (double c : p.coeffs)
        if (!std::isfinite(c)) throw std::invalid_argument("sup_unit_interval: non-finite coefficient");
    return sup_unit_interval([&p](double t) { return p.evaluate(t); }, p.degree(), cfg);
}

// Monomial coefficients of the degree-c Chebyshev polynomial of the first kind,
// T_0 = 1, T_1 = x, T_{c+1} = 2x T_c - T_{c-1}.  Exact in doubles only for small c;
// drift for c <= 64 stays below 1e-10 relative.
inline Polynomial chebyshev_first_kind(int c) {
    if (c < 0) throw std::invalid_argument("chebyshev_first_kind: order must be nonnegative");
    if (c > 1024) throw std::invalid_argument("chebyshev_first_kind: order > 1024 (coefficient overflow guard)");
    if (c == 0) return Polynomial{{1.0}};
    if (c == 1) return Polynomial{{0.0, 1.0}};
    Polynomial tm2{{1.0}}, tm1{{0.0, 1.0}};
    for (int k = 2; k <= c; ++k) {
        Polynomial t;
        t.coeffs.assign(tm1.coeffs.size() + 1, 0.0);
        for (std::size_t i = 0; i < tm1.coeffs.size(); ++i) t.coeffs[i + 1] = 2.0 * tm1.coeffs[i];
        for (std::size_t i = 0; i < tm2.coeffs.size(); ++i) t.coeffs[i] -= tm2.coeffs[i];
        tm2 = std::move(tm1);
        tm1 = std::move(t);
    }
    return tm1;
}

// Scalar T_c(x) by the three-term recurrence; stable for any real argument.
inline double chebyshev_eval(int c, double x) {
    if (c < 0) throw std::invalid_argument("chebyshev_eval: order must be nonnegative");
    if (c == 0) return 1.0;
    double tm2 = 1.0, tm1 = x;
    for (int k = 2; k <= c; ++k) {
        double t = 2.0 * x * tm1 - tm2;
        tm2 = tm1;
        tm1 = t;
    }
    return tm1;
}

namespace detail {
inline int integer_sqrt_exact(int d) {
    int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
    while (s * s > d) --s;
    while ((s + 1) * (s + 1) <= d) ++s;
    return s * s == d ? s : -1;
}
}  // namespace detail

// a_d(t) = T_{sqrt d}(t (1+3/d)) / T_{sqrt d}(1+3/d), d a perfect square.
// a_d(1) = 1; |a_d| <= 1 on [0,1]; |a_d| <= 1/4 on [0, 1-3/d] for d >= 4.
inline Polynomial build_a_d(int d) {
    if (d < 1) throw std::invalid_argument("build_a_d: d must be >= 1");
    int s = detail::integer_sqrt_exact(d);
    if (s < 0) throw std::invalid_argument("build_a_d: d must be a perfect square");
    Polynomial t = chebyshev_first_kind(s);
    const double scale = 1.0 + 3.0 / d;
    double pw = 1.0;
    for (std::size_t k = 0; k < t.coeffs.size(); ++k) {
        t.coeffs[k] *= pw;
        pw *= scale;
    }
    const double denom = chebyshev_eval(s, scale);
    for (auto& c : t.coeffs) c /= denom;
    return t;
}

// Stable pointwise a_d(t) via the scalar recurrence (no expanded coefficients).
inline double a_d_eval(int d, double t) {
    int s = detail::integer_sqrt_exact(d);
    if (s < 0) throw std::invalid_argument("a_d_eval: d must be a perfect square");
    const double scale = 1.0 + 3.0 / d;
    return chebyshev_eval(s, t * scale) / chebyshev_eval(s, scale);
}

namespace detail {
// Substitute (1-t) for the variable: returns q with q(t) = p(1-t).
inline Polynomial compose_one_minus_t(const Polynomial& p) {
    Polynomial r{{p.coeffs.back()}};
    Polynomial lin{{1.0, -1.0}};
    for (int k = static_cast<int>(p.coeffs.size()) - 2; k >= 0; --k) {
        r = r * lin;
        r.coeffs[0] += p.coeffs[k];
    }
    return r;
}
}  // namespace detail

// The near-extremal construction p(t) = t * prod_{j=0..k} a_{4^j}(1-t).
//
// The expanded coefficient vector is reliable for the length (absolute values
// admit no cancellation), but for k >= 4 the convolution cascade destroys the
// small low-order coefficients, so pointwise evaluation and the sup search must
// go through the factored form below.
struct HadamardWitness {
    int k = 0;
    PowerSeries series;              // expanded coefficients, c_0 = 0 dropped
    double leading_coefficient = 0;  // c_1 computed from the factored form

    double evaluate(double t) const {
        double v = t;
        int d = 1;
        for (int j = 0; j <= k; ++j) {
            v *= a_d_eval(d, 1.0 - t);
            d *= 4;
        }
        return v;
    }
};

inline HadamardWitness build_hadamard_witness(int k) {
    if (k < 1) throw std::invalid_argument("build_hadamard_witness: k must be >= 1");
    if (k > 8) throw std::invalid_argument("build_hadamard_witness: k > 8 (degree guard)");
    Polynomial prod{{1.0}};
    double c1 = 1.0;
    int d = 1;
    for (int j = 0; j <= k; ++j) {
        prod = prod * detail::compose_one_minus_t(build_a_d(d));
        c1 *= a_d_eval(d, 1.0);
        d *= 4;
    }
    HadamardWitness w;
    w.k = k;
    w.series.coeffs = prod.coeffs;  // multiplying by t shifts every degree up by one
    w.leading_coefficient = c1;
    return w;
}

struct MainLemmaAudit {
    double length_m = 0.0;
    SupResult sup;
    double product = 0.0;  // sup * log^2(M), natural log
    bool violation = false;
    std::string note;
};

struct AuditOptions {
    double c1_tolerance = 1e-12;
    // When set, the sup search evaluates through this function instead of the
    // expanded coefficients (needed for high-degree witnesses whose expanded
    // form carries convolution roundoff).
    std::function<double(double)> evaluator;
    // Overrides the expanded c_1 for the precondition check (same reason).
    double c1_override = std::numeric_limits<double>::quiet_NaN();
};

// Audit of the p(t)-lower-bound statement: with c_1 = 1 and M = length(p) >= 3/2,
// record S = sup |p| on [0,1] and the product S * log^2 M.  A product below 1e-3
// is flagged; that threshold is a red-flag floor, not a claimed constant.
inline MainLemmaAudit audit_main_lemma(const PowerSeries& p, const AuditOptions& opt = {}) {
    if (p.coeffs.empty()) throw std::invalid_argument("audit_main_lemma: empty series");
    double c1 = std::isnan(opt.c1_override) ? p.coeffs[0] : opt.c1_override;
    if (std::fabs(c1 - 1.0) > opt.c1_tolerance)
        throw std::invalid_argument("audit_main_lemma: precondition c_1 = 1 violated");
    MainLemmaAudit a;
    a.length_m = length(p);
    if (a.length_m < 1.5) throw std::invalid_argument("audit_main_lemma: precondition length >= 3/2 violated");
    a.sup = opt.evaluator ? sup_unit_interval(opt.evaluator, p.degree())
                          : sup_unit_interval(p);
    double lm = std::log(a.length_m);
    a.product = a.sup.value * lm * lm;
    a.violation = a.product < 1e-3;
    if (a.violation) a.note = "product below red-flag floor 1e-3";
    return a;
}

inline MainLemmaAudit audit_witness(const HadamardWitness& w) {
    AuditOptions opt;
    opt.evaluator = [&w](double t) { return w.evaluate(t); };
    opt.c1_override = w.leading_coefficient;
    opt.c1_tolerance = 1e-8;
    return audit_main_lemma(w.series, opt);
}

// p(u) = u + sum_{l>=2} (a_{l j*}/a_{j*}) u^l from the level values
// (a_{j*}, a_{2 j*}, ...).  When sum |a| <= 1, length(p) <= 1/a_{j*}.
inline PowerSeries normalized_gap_series(const std::vector<double>& level_values) {
    if (level_values.empty() || level_values[0] <= 0.0)
        throw std::invalid_argument("normalized_gap_series: a_{j*} must be positive");
    const double lead = level_values[0];
    PowerSeries p;
    p.coeffs.resize(level_values.size());
    p.coeffs[0] = 1.0;
    double abs_sum = std::fabs(lead);
    for (std::size_t l = 1; l < level_values.size(); ++l) {
        p.coeffs[l] = level_values[l] / lead;
        abs_sum += std::fabs(level_values[l]);
    }
    if (abs_sum <= 1.0 && length(p) > 1.0 / lead + 1e-9)
        throw std::logic_error("normalized_gap_series: length bound 1/a_{j*} violated");
    return p;
}

}  // namespace corrlab
