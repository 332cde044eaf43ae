#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace corrlab::rng {

// 64-bit finalizer (SplitMix64). Full avalanche; used both for keying and output.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based stream keyed by (seed, stream id).  The i-th output is a pure
// function of (seed, stream, i), so chunked consumers can be laid out
// deterministically regardless of thread count.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t stream)
        : base_(mix64(mix64(seed) ^ mix64(stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL))) {}

    std::uint64_t next_u64() { return mix64(base_ + 0x9e3779b97f4a7c15ULL * counter_++); }

    // uniform on the open interval (0,1); never returns an endpoint
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_gaussian();

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

// Inverse standard normal CDF.  Acklam's rational approximation (2003 constants)
// followed by one Halley step against erfc, giving |error| < 1e-13 over (0,1).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must be in (0,1)");

    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

inline double CounterStream::next_gaussian() { return normal_quantile(next_uniform()); }

inline void fill_gaussian(CounterStream& cs, std::vector<double>& out) {
    for (auto& v : out) v = cs.next_gaussian();
}

}  // namespace corrlab::rng
