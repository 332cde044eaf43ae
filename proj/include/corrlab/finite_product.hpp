#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrlab {

// Finite product probability space (Omega, pi)^n.  Atom labels are reals; the
// monotonicity order is their numeric order, while tables and bases follow the
// stored atom order.  Points of Omega^n are enumerated lexicographically with
// coordinate 1 most significant.
class FiniteSpace {
public:
    FiniteSpace(std::vector<double> omega, std::vector<double> pi, int n)
        : omega_(std::move(omega)), pi_(std::move(pi)), n_(n) {
        const int m = static_cast<int>(omega_.size());
        if (m < 2) throw std::invalid_argument("FiniteSpace: need at least 2 atoms");
        if (static_cast<int>(pi_.size()) != m) throw std::invalid_argument("FiniteSpace: omega/pi size mismatch");
        if (n_ < 1) throw std::invalid_argument("FiniteSpace: n must be >= 1");
        double total = 0.0;
        for (double p : pi_) {
            if (p < 1e-12) throw std::invalid_argument("FiniteSpace: probabilities below 1e-12 rejected (full support)");
            total += p;
        }
        if (std::fabs(total - 1.0) > 1e-12) throw std::invalid_argument("FiniteSpace: probabilities must sum to 1");
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (omega_[i] == omega_[j]) throw std::invalid_argument("FiniteSpace: duplicate atom labels");
        if (m == 2 && n_ > 12) throw std::invalid_argument("FiniteSpace: n capped at 12 for m = 2");
        double sz = std::pow(static_cast<double>(m), n_);
        if (sz > 250000.0) throw std::invalid_argument("FiniteSpace: m^n capped at 250000");
        size_ = 1;
        strides_.assign(n_, 0);
        for (int i = n_ - 1; i >= 0; --i) {
            strides_[i] = size_;
            size_ *= m;
        }
        // rank[r] = atom index of the r-th smallest label
        rank_to_atom_.resize(m);
        std::iota(rank_to_atom_.begin(), rank_to_atom_.end(), 0);
        std::sort(rank_to_atom_.begin(), rank_to_atom_.end(),
                  [this](int a, int b) { return omega_[a] < omega_[b]; });
        atom_to_rank_.assign(m, 0);
        for (int r = 0; r < m; ++r) atom_to_rank_[rank_to_atom_[r]] = r;
        weights_.resize(size_);
        for (std::size_t idx = 0; idx < size_; ++idx) {
            double w = 1.0;
            for (int i = 0; i < n_; ++i) w *= pi_[digit(idx, i)];
            weights_[idx] = w;
        }
    }

    int m() const { return static_cast<int>(omega_.size()); }
    int n() const { return n_; }
    std::size_t size() const { return size_; }
    const std::vector<double>& omega() const { return omega_; }
    const std::vector<double>& pi() const { return pi_; }
    const std::vector<double>& point_weights() const { return weights_; }

    int digit(std::size_t idx, int coord) const {
        return static_cast<int>((idx / strides_[coord]) % omega_.size());
    }
    std::size_t stride(int coord) const { return strides_[coord]; }
    int rank_of_atom(int atom) const { return atom_to_rank_[atom]; }
    int atom_of_rank(int r) const { return rank_to_atom_[r]; }

    bool same_as(const FiniteSpace& o) const {
        return n_ == o.n_ && omega_ == o.omega_ && pi_ == o.pi_;
    }

    static std::shared_ptr<const FiniteSpace> uniform(int m, int n) {
        std::vector<double> omega(m), pi(m, 1.0 / m);
        for (int i = 0; i < m; ++i) omega[i] = i;
        return std::make_shared<const FiniteSpace>(std::move(omega), std::move(pi), n);
    }

    // two-point space on {-1,+1} with pi(-1) = p
    static std::shared_ptr<const FiniteSpace> p_biased(double p, int n) {
        if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p_biased: p must be in (0,1)");
        return std::make_shared<const FiniteSpace>(std::vector<double>{-1.0, 1.0},
                                                   std::vector<double>{p, 1.0 - p}, n);
    }

private:
    std::vector<double> omega_, pi_;
    int n_;
    std::size_t size_ = 0;
    std::vector<std::size_t> strides_;
    std::vector<int> rank_to_atom_, atom_to_rank_;
    std::vector<double> weights_;
};

using SpacePtr = std::shared_ptr<const FiniteSpace>;

struct MultiIndex {
    std::vector<int> entries;

    std::vector<int> support() const {
        std::vector<int> s;
        for (int i = 0; i < static_cast<int>(entries.size()); ++i)
            if (entries[i] != 0) s.push_back(i);
        return s;
    }
    int cardinality() const {  // #alpha
        int c = 0;
        for (int e : entries) c += e != 0;
        return c;
    }
    int degree() const {  // |alpha|
        int d = 0;
        for (int e : entries) d += e;
        return d;
    }
};

namespace detail {
inline int packed_cardinality(const FiniteSpace& sp, std::size_t idx) {
    int c = 0;
    for (int i = 0; i < sp.n(); ++i) c += sp.digit(idx, i) != 0;
    return c;
}
inline int packed_degree(const FiniteSpace& sp, std::size_t idx) {
    int d = 0;
    for (int i = 0; i < sp.n(); ++i) d += sp.digit(idx, i);
    return d;
}
inline std::uint32_t packed_support_mask(const FiniteSpace& sp, std::size_t idx) {
    std::uint32_t m = 0;
    for (int i = 0; i < sp.n(); ++i)
        if (sp.digit(idx, i) != 0) m |= 1u << i;
    return m;
}
}  // namespace detail

struct TabulatedFunction {
    SpacePtr space;
    std::vector<double> values;

    TabulatedFunction() = default;
    TabulatedFunction(SpacePtr sp, std::vector<double> v) : space(std::move(sp)), values(std::move(v)) {
        if (values.size() != space->size()) throw std::invalid_argument("TabulatedFunction: table size mismatch");
        for (double x : values)
            if (!std::isfinite(x)) throw std::invalid_argument("TabulatedFunction: non-finite value");
    }

    double expectation() const {
        double s = 0.0;
        const auto& w = space->point_weights();
        for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i];
        return s;
    }
    double inner(const TabulatedFunction& g) const {
        if (!space->same_as(*g.space)) throw std::invalid_argument("inner: space mismatch");
        double s = 0.0;
        const auto& w = space->point_weights();
        for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i] * g.values[i];
        return s;
    }
    double norm() const { return std::sqrt(std::max(0.0, inner(*this))); }
};

// Orthonormal basis phi_0, ..., phi_{m-1} for L^2(Omega, pi), phi_0 = 1.
// Built by modified Gram-Schmidt with one re-orthogonalization pass on the
// monomials 1, x, ..., x^{m-1} (atom labels as reals).  The optional flag
// feeds the non-constant monomials in reverse degree order, which yields a
// different orthonormal basis over the same flag of subspaces.
struct Basis {
    int m = 0;
    std::vector<double> phi;  // phi[j*m + w] = phi_j(omega_w)
    std::vector<double> omega, pi;  // the one-coordinate space the basis was built on

    double value(int j, int atom) const { return phi[static_cast<std::size_t>(j) * m + atom]; }

    bool matches(const FiniteSpace& space) const {
        return m == space.m() && omega == space.omega() && pi == space.pi();
    }
};

inline Basis build_basis(const FiniteSpace& space, bool reverse_monomials = false) {
    const int m = space.m();
    std::vector<int> degrees(m);
    degrees[0] = 0;
    for (int j = 1; j < m; ++j) degrees[j] = reverse_monomials ? m - j : j;

    Basis b;
    b.m = m;
    b.omega = space.omega();
    b.pi = space.pi();
    b.phi.assign(static_cast<std::size_t>(m) * m, 0.0);
    const auto& pi = space.pi();
    auto dot = [&](const double* u, const double* v) {
        double s = 0.0;
        for (int w = 0; w < m; ++w) s += pi[w] * u[w] * v[w];
        return s;
    };

    std::vector<double> cur(m);
    for (int j = 0; j < m; ++j) {
        for (int w = 0; w < m; ++w) cur[w] = std::pow(space.omega()[w], degrees[j]);
        for (int pass = 0; pass < 2; ++pass) {
            for (int l = 0; l < j; ++l) {
                const double* prev = &b.phi[static_cast<std::size_t>(l) * m];
                double proj = dot(cur.data(), prev);
                for (int w = 0; w < m; ++w) cur[w] -= proj * prev[w];
            }
        }
        double nrm = std::sqrt(dot(cur.data(), cur.data()));
        if (nrm < 1e-12) throw std::invalid_argument("build_basis: degenerate Gram matrix");
        for (int w = 0; w < m; ++w) b.phi[static_cast<std::size_t>(j) * m + w] = cur[w] / nrm;
    }
    // pin phi_0 to exactly 1
    for (int w = 0; w < m; ++w) b.phi[w] = 1.0;
    return b;
}

namespace detail {
// In-place tensor contraction along one coordinate: out[.., j, ..] =
// sum_w mat[j*m + w] * in[.., w, ..].
inline void axis_apply(std::vector<double>& values, const FiniteSpace& sp, int coord,
                       const std::vector<double>& mat) {
    const int m = sp.m();
    const std::size_t stride = sp.stride(coord);
    const std::size_t block = stride * m;
    std::vector<double> tmp(m);
    for (std::size_t base = 0; base < values.size(); base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
            double* slot = &values[base + off];
            for (int j = 0; j < m; ++j) {
                double s = 0.0;
                for (int w = 0; w < m; ++w) s += mat[static_cast<std::size_t>(j) * m + w] * slot[w * stride];
                tmp[j] = s;
            }
            for (int j = 0; j < m; ++j) slot[j * stride] = tmp[j];
        }
    }
}
}  // namespace detail

// Coefficients fhat(alpha) = E[f phi_alpha], packed over multi-indices in the
// same mixed-radix order as points.
struct FourierExpansion {
    SpacePtr space;
    Basis basis;
    std::vector<double> coeffs;

    double coeff(const MultiIndex& alpha) const {
        if (static_cast<int>(alpha.entries.size()) != space->n())
            throw std::invalid_argument("coeff: multi-index length mismatch");
        std::size_t idx = 0;
        for (int i = 0; i < space->n(); ++i) {
            if (alpha.entries[i] < 0 || alpha.entries[i] >= space->m())
                throw std::invalid_argument("coeff: multi-index entry out of range");
            idx += static_cast<std::size_t>(alpha.entries[i]) * space->stride(i);
        }
        return coeffs[idx];
    }
};

inline FourierExpansion fourier(const TabulatedFunction& f, const Basis& basis) {
    if (!basis.matches(*f.space)) throw std::invalid_argument("fourier: basis/space mismatch");
    FourierExpansion e;
    e.space = f.space;
    e.basis = basis;
    e.coeffs = f.values;
    const int m = basis.m;
    std::vector<double> analysis(static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j)
        for (int w = 0; w < m; ++w)
            analysis[static_cast<std::size_t>(j) * m + w] = basis.value(j, w) * f.space->pi()[w];
    for (int i = 0; i < f.space->n(); ++i) detail::axis_apply(e.coeffs, *f.space, i, analysis);
    return e;
}

inline TabulatedFunction inverse_fourier(const FourierExpansion& e) {
    TabulatedFunction f;
    f.space = e.space;
    f.values = e.coeffs;
    const int m = e.basis.m;
    std::vector<double> synthesis(static_cast<std::size_t>(m) * m);
    for (int w = 0; w < m; ++w)
        for (int j = 0; j < m; ++j)
            synthesis[static_cast<std::size_t>(w) * m + j] = e.basis.value(j, w);
    for (int i = 0; i < e.space->n(); ++i) detail::axis_apply(f.values, *e.space, i, synthesis);
    return f;
}

// f^{=S} components keyed by the coordinate bitmask of S; only components with
// a nonzero coefficient are materialized.
struct EfronSteinDecomposition {
    SpacePtr space;
    std::map<std::uint32_t, TabulatedFunction> components;

    const TabulatedFunction* component(std::uint32_t mask) const {
        auto it = components.find(mask);
        return it == components.end() ? nullptr : &it->second;
    }
};

inline EfronSteinDecomposition efron_stein(const TabulatedFunction& f, const Basis& basis) {
    FourierExpansion e = fourier(f, basis);
    const auto& sp = *f.space;
    EfronSteinDecomposition d;
    d.space = f.space;
    std::map<std::uint32_t, std::vector<double>> grouped;
    for (std::size_t idx = 0; idx < e.coeffs.size(); ++idx) {
        if (e.coeffs[idx] == 0.0) continue;
        auto mask = detail::packed_support_mask(sp, idx);
        auto [it, inserted] = grouped.try_emplace(mask);
        if (inserted) it->second.assign(sp.size(), 0.0);
        it->second[idx] = e.coeffs[idx];
    }
    for (auto& [mask, coeffs] : grouped) {
        FourierExpansion part;
        part.space = f.space;
        part.basis = basis;
        part.coeffs = std::move(coeffs);
        d.components.emplace(mask, inverse_fourier(part));
    }
    return d;
}

// Spectral noise: multiplier rho^{#alpha}.
inline TabulatedFunction noise_spectral(const TabulatedFunction& f, const Basis& basis, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("noise_spectral: rho must be in [0,1]");
    FourierExpansion e = fourier(f, basis);
    for (std::size_t idx = 0; idx < e.coeffs.size(); ++idx)
        e.coeffs[idx] *= std::pow(rho, detail::packed_cardinality(*f.space, idx));
    return inverse_fourier(e);
}

// Replacement noise on coordinate i only: keep x_i with probability rho, else
// resample it from pi.  Exact expectation, no sampling.
inline TabulatedFunction coordinate_noise(const TabulatedFunction& f, int coord, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("coordinate_noise: rho must be in [0,1]");
    if (coord < 0 || coord >= f.space->n()) throw std::invalid_argument("coordinate_noise: bad coordinate");
    const auto& sp = *f.space;
    const int m = sp.m();
    std::vector<double> mat(static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j)
        for (int w = 0; w < m; ++w)
            mat[static_cast<std::size_t>(j) * m + w] = (1.0 - rho) * sp.pi()[w] + (j == w ? rho : 0.0);
    TabulatedFunction out = f;
    detail::axis_apply(out.values, sp, coord, mat);
    return out;
}

// Full replacement noise as the composition of the per-coordinate operators.
inline TabulatedFunction noise_definitional(const TabulatedFunction& f, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("noise_definitional: rho must be in [0,1]");
    TabulatedFunction out = f;
    for (int i = 0; i < f.space->n(); ++i) out = coordinate_noise(out, i, rho);
    return out;
}

// f_i: the one-coordinate average with coordinate i pinned.
inline TabulatedFunction project_fi(const TabulatedFunction& f, int coord) {
    if (coord < 0 || coord >= f.space->n()) throw std::invalid_argument("project_fi: bad coordinate");
    const auto& sp = *f.space;
    const int m = sp.m();
    std::vector<double> acc(m, 0.0);
    for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
        int w = sp.digit(idx, coord);
        // weight of the other coordinates
        double others = sp.point_weights()[idx] / sp.pi()[w];
        acc[w] += others * f.values[idx];
    }
    auto one = std::make_shared<const FiniteSpace>(sp.omega(), sp.pi(), 1);
    return TabulatedFunction(one, std::move(acc));
}

// Monotone w.r.t. the numeric order on atom labels, checked over covering pairs.
inline bool is_monotone(const TabulatedFunction& f) {
    const auto& sp = *f.space;
    const int m = sp.m();
    for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
        for (int i = 0; i < sp.n(); ++i) {
            int atom = sp.digit(idx, i);
            int r = sp.rank_of_atom(atom);
            if (r + 1 >= m) continue;
            int next_atom = sp.atom_of_rank(r + 1);
            std::ptrdiff_t delta = (static_cast<std::ptrdiff_t>(next_atom) - atom) *
                                   static_cast<std::ptrdiff_t>(sp.stride(i));
            std::size_t up = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + delta);
            if (f.values[idx] > f.values[up]) return false;
        }
    }
    return true;
}

}  // namespace corrlab
