#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace corrlab::special {

// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a).
// Series expansion for x < a+1, Lentz continued fraction for the upper tail
// otherwise; absolute error well below 1e-12 in the ranges used here.
inline double regularized_lower_gamma(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("regularized_lower_gamma: a must be positive");
    if (x < 0.0) throw std::invalid_argument("regularized_lower_gamma: x must be nonnegative");
    if (x == 0.0) return 0.0;

    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        // P(a,x) = x^a e^{-x} / Gamma(a) * sum_{k>=0} x^k / (a(a+1)...(a+k))
        double term = 1.0 / a, sum = term, ap = a;
        for (int k = 0; k < 1000; ++k) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
        }
        return sum * std::exp(a * std::log(x) - x - lg);
    }
    // Q(a,x) via continued fraction (modified Lentz)
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 1000; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    double q = std::exp(a * std::log(x) - x - lg) * h;
    return 1.0 - q;
}

inline double chi_square_cdf(double dof, double x) {
    if (dof <= 0.0) throw std::invalid_argument("chi_square_cdf: dof must be positive");
    if (x <= 0.0) return 0.0;
    return regularized_lower_gamma(0.5 * dof, 0.5 * x);
}

// Quantile by bisection on the CDF to absolute tolerance 1e-10 in x.
inline double chi_square_quantile(double dof, double q) {
    if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("chi_square_quantile: q must be in [0,1)");
    if (q == 0.0) return 0.0;
    double lo = 0.0, hi = dof + 10.0;
    while (chi_square_cdf(dof, hi) < q) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
        double mid = 0.5 * (lo + hi);
        (chi_square_cdf(dof, mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Binary entropy in nats.
inline double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p must be in [0,1]");
    double h = 0.0;
    if (p > 0.0) h -= p * std::log(p);
    if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
    return h;
}

inline double log_binomial(long long n, long long k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Kahan compensated accumulator for long binomial sums.
class KahanSum {
public:
    void add(double v) {
        double y = v - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0, c_ = 0.0;
};

}  // namespace corrlab::special
