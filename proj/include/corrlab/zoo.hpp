#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrlab/finite_product.hpp"
#include "corrlab/rng.hpp"
#include "corrlab/special_functions.hpp"

namespace corrlab::zoo {

enum class OutputRange { zero_one, pm_one };

enum class BuiltinName {
    dictator,
    and_fn,
    or_fn,
    majority,
    threshold,
    tribes,
    talagrand_f,
    talagrand_g,
    keller_sign,
    random_monotone,
};

struct BuiltinSpec {
    BuiltinName name = BuiltinName::and_fn;
    OutputRange range = OutputRange::zero_one;
    int k = 1;          // threshold level / talagrand parameter
    int coordinate = 0; // dictator coordinate
    int width = 0;      // tribes width, 0 = default
    std::uint64_t seed = 1;
};

inline BuiltinName builtin_from_string(const std::string& s) {
    static const std::map<std::string, BuiltinName> names = {
        {"dictator", BuiltinName::dictator},       {"and", BuiltinName::and_fn},
        {"or", BuiltinName::or_fn},                {"majority", BuiltinName::majority},
        {"threshold", BuiltinName::threshold},     {"tribes", BuiltinName::tribes},
        {"talagrand_f", BuiltinName::talagrand_f}, {"talagrand_g", BuiltinName::talagrand_g},
        {"keller_sign", BuiltinName::keller_sign}, {"random_monotone", BuiltinName::random_monotone},
    };
    auto it = names.find(s);
    if (it == names.end()) throw std::invalid_argument("unknown builtin: " + s);
    return it->second;
}

namespace detail {

inline double encode(bool on, OutputRange range) {
    if (range == OutputRange::zero_one) return on ? 1.0 : 0.0;
    return on ? 1.0 : -1.0;
}

inline int rank_sum(const FiniteSpace& sp, std::size_t idx) {
    int s = 0;
    for (int i = 0; i < sp.n(); ++i) s += sp.rank_of_atom(sp.digit(idx, i));
    return s;
}

inline int default_tribes_width(int n) {
    double w = std::floor(std::log2(static_cast<double>(n)) - std::log2(std::max(1.0, std::log(static_cast<double>(n)))));
    return std::max(1, static_cast<int>(w));
}

}  // namespace detail

inline TabulatedFunction generate(const BuiltinSpec& spec, const SpacePtr& space) {
    const auto& sp = *space;
    const int n = sp.n();
    const int m = sp.m();
    const bool boolean_domain = m == 2;

    auto need_boolean = [&](const char* what) {
        if (!boolean_domain) throw std::invalid_argument(std::string(what) + " requires a 2-atom space");
    };

    std::vector<double> values(sp.size());
    switch (spec.name) {
        case BuiltinName::dictator: {
            if (spec.coordinate < 0 || spec.coordinate >= n)
                throw std::invalid_argument("dictator: coordinate out of range");
            need_boolean("dictator");
            for (std::size_t idx = 0; idx < sp.size(); ++idx)
                values[idx] = detail::encode(sp.rank_of_atom(sp.digit(idx, spec.coordinate)) == 1, spec.range);
            break;
        }
        case BuiltinName::and_fn: {
            need_boolean("and");
            for (std::size_t idx = 0; idx < sp.size(); ++idx)
                values[idx] = detail::encode(detail::rank_sum(sp, idx) == n, spec.range);
            break;
        }
        case BuiltinName::or_fn: {
            need_boolean("or");
            for (std::size_t idx = 0; idx < sp.size(); ++idx)
                values[idx] = detail::encode(detail::rank_sum(sp, idx) > 0, spec.range);
            break;
        }
        case BuiltinName::majority: {
            need_boolean("majority");
            if (n % 2 == 0) throw std::invalid_argument("majority: n must be odd");
            for (std::size_t idx = 0; idx < sp.size(); ++idx)
                values[idx] = detail::encode(2 * detail::rank_sum(sp, idx) > n, spec.range);
            break;
        }
        case BuiltinName::threshold: {
            for (std::size_t idx = 0; idx < sp.size(); ++idx)
                values[idx] = detail::encode(detail::rank_sum(sp, idx) >= spec.k, spec.range);
            break;
        }
        case BuiltinName::tribes: {
            need_boolean("tribes");
            int w = spec.width > 0 ? spec.width : detail::default_tribes_width(n);
            if (w > n) throw std::invalid_argument("tribes: width exceeds n");
            int tribes_count = n / w;
            for (std::size_t idx = 0; idx < sp.size(); ++idx) {
                bool any = false;
                for (int t = 0; t < tribes_count && !any; ++t) {
                    bool all = true;
                    for (int i = t * w; i < (t + 1) * w; ++i)
                        if (sp.rank_of_atom(sp.digit(idx, i)) == 0) {
                            all = false;
                            break;
                        }
                    any = all;
                }
                values[idx] = detail::encode(any, spec.range);
            }
            break;
        }
        case BuiltinName::talagrand_f: {
            need_boolean("talagrand_f");
            for (std::size_t idx = 0; idx < sp.size(); ++idx)
                values[idx] = detail::encode(detail::rank_sum(sp, idx) >= n - spec.k, spec.range);
            break;
        }
        case BuiltinName::talagrand_g: {
            need_boolean("talagrand_g");
            for (std::size_t idx = 0; idx < sp.size(); ++idx)
                values[idx] = detail::encode(detail::rank_sum(sp, idx) > spec.k, spec.range);
            break;
        }
        case BuiltinName::keller_sign: {
            need_boolean("keller_sign");
            // sign(sum x_i - n(1-2p)) on atoms {-1,+1}, sign(0) := +1
            double mean = 0.0;
            for (int w = 0; w < m; ++w) mean += sp.pi()[w] * sp.omega()[w];
            mean *= n;
            for (std::size_t idx = 0; idx < sp.size(); ++idx) {
                double s = 0.0;
                for (int i = 0; i < n; ++i) s += sp.omega()[sp.digit(idx, i)];
                values[idx] = detail::encode(s - mean >= 0.0, OutputRange::pm_one);
            }
            break;
        }
        case BuiltinName::random_monotone: {
            // union of up-sets of random minimal points, rejecting constants
            rng::CounterStream cs(spec.seed, 0xab5e7);
            for (int attempt = 0; attempt < 64; ++attempt) {
                int npoints = 1 + static_cast<int>(cs.next_u64() % (n + 1));
                std::vector<std::vector<int>> mins(npoints, std::vector<int>(n));
                for (auto& pt : mins)
                    for (int i = 0; i < n; ++i) pt[i] = static_cast<int>(cs.next_u64() % m);
                bool all0 = true, all1 = true;
                for (std::size_t idx = 0; idx < sp.size(); ++idx) {
                    bool on = false;
                    for (const auto& pt : mins) {
                        bool ge = true;
                        for (int i = 0; i < n && ge; ++i)
                            ge = sp.rank_of_atom(sp.digit(idx, i)) >= pt[i];
                        if (ge) {
                            on = true;
                            break;
                        }
                    }
                    values[idx] = detail::encode(on, spec.range);
                    (on ? all0 : all1) = false;
                }
                if (!all0 && !all1) break;
            }
            break;
        }
    }
    return TabulatedFunction(space, std::move(values));
}

// All monotone 0/1 functions on the uniform Boolean cube, by scanning every
// table.  Counts follow the Dedekind sequence: 3, 6, 20, 168 for n = 1..4.
inline std::vector<TabulatedFunction> enumerate_monotone(int n) {
    if (n < 1 || n > 4) throw std::invalid_argument("enumerate_monotone: n must be in [1,4]");
    auto space = FiniteSpace::uniform(2, n);
    const int points = 1 << n;
    std::vector<TabulatedFunction> out;
    for (std::uint32_t table = 0; table < (1u << points); ++table) {
        bool ok = true;
        for (int x = 0; x < points && ok; ++x) {
            // bit i of x = digit of coordinate i (coordinate 0 most significant, m=2)
            for (int i = 0; i < n; ++i) {
                int bit = 1 << i;
                if (!(x & bit) && ((table >> x) & 1u) > ((table >> (x | bit)) & 1u)) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) continue;
        std::vector<double> values(points);
        for (int x = 0; x < points; ++x) values[x] = (table >> x) & 1u;
        out.emplace_back(space, std::move(values));
    }
    return out;
}

// Exact binomial statistics of f = sign(sum_i x_i - level) on the p-biased
// cube with atoms {-1,+1}, pi(-1) = p, sign(0) := +1.  All sums run over the
// full binomial support in log space with compensated accumulation.
struct ThresholdStats {
    long long n = 0;
    double level = 0.0;
    double p = 0.0;
    double mean = 0.0;         // E[f]
    double degree1_sum = 0.0;  // sum_i fhat_p(i)
    double abs_moment = 0.0;   // E|sum_i x_i - n(1-2p)|
};

inline ThresholdStats threshold_stats(long long n, double level, double p) {
    if (n < 1 || n > 1000000) throw std::invalid_argument("threshold_stats: n must be in [1, 1e6]");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("threshold_stats: p must be in (0,1)");
    ThresholdStats st;
    st.n = n;
    st.level = level;
    st.p = p;
    const double lp = std::log(p), lq = std::log1p(-p);
    const double centre = n * (1.0 - 2.0 * p);  // E[sum x_i]
    special::KahanSum mean, dsum, amom;
    for (long long b = 0; b <= n; ++b) {  // b = number of -1 coordinates
        double lw = special::log_binomial(n, b) + b * lp + (n - b) * lq;
        if (lw < -745.0) continue;  // underflows to zero anyway
        double w = std::exp(lw);
        double s = static_cast<double>(n - 2 * b);  // sum of atoms
        double sign = s - level >= 0.0 ? 1.0 : -1.0;
        mean.add(w * sign);
        dsum.add(w * sign * (s - centre));
        amom.add(w * std::fabs(s - centre));
    }
    st.mean = mean.value();
    st.abs_moment = amom.value();
    st.degree1_sum = dsum.value() / (2.0 * std::sqrt(p * (1.0 - p)));
    return st;
}

// Exact statistics of the tightness pair on the uniform cube:
// f = 1[sum x_i >= n-k], g = 1[sum x_i > k], 0/1-valued, k < n/2 (so f <= g).
struct TalagrandPairStats {
    int n = 0, k = 0;
    double eps = 0.0;          // E[f]; E[g] = 1 - eps by symmetry
    double gap = 0.0;          // E[fg] - E[f]E[g] = eps - eps(1-eps)
    double degree1_dot = 0.0;  // sum_i fhat(i) ghat(i)
};

inline TalagrandPairStats talagrand_pair_stats(int n, int k) {
    if (n < 1 || k < 0 || 2 * k >= n) throw std::invalid_argument("talagrand_pair_stats: need 0 <= k < n/2");
    TalagrandPairStats st;
    st.n = n;
    st.k = k;
    const double ln2 = std::log(2.0);
    special::KahanSum eps;
    for (int j = n - k; j <= n; ++j) eps.add(std::exp(special::log_binomial(n, j) - n * ln2));
    st.eps = eps.value();
    st.gap = st.eps - st.eps * (1.0 - st.eps);
    // fhat(e_i) = ghat(e_i) = C(n-1, k) / 2^n
    double lc = special::log_binomial(n - 1, k) - n * ln2;
    st.degree1_dot = n * std::exp(2.0 * lc);
    return st;
}

}  // namespace corrlab::zoo
