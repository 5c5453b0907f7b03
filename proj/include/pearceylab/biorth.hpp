#pragma once
// Biorthogonal polynomial pairs for the two-exponential quartic weight: the
// bimoment table <x^j, x^{2k}>, the monic families p_k, q_k with their norms
// h_k, the type-I / type-II polyorthogonal combinations assembled from them,
// and the right-half-plane Cauchy transform whose jump reproduces the weight.
// The finite-m kernel module consumes the BiorthSystem built here.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "model.hpp"
#include "quadrature.hpp"
#include "scalar.hpp"

namespace pearceylab::biorth {

using model::ModelParams;
using numerics::Complex;
using numerics::Matrix;
using numerics::PrecisionPolicy;
using numerics::QuadResult;
using numerics::Real;
using numerics::ScopedPrecision;

// Pairing of monomials against the gamma-weighted line weight, folded onto
// the half-line:
//   <x^j, x^{2k}> = Int_0^inf x^{j+2k+alpha}
//                   (e^{2nax} + gamma (-1)^j e^{-2nax}) e^{-n Vhat(x)} dx,
// with Vhat(x) = x^4/2 - t x^2.  Entries are immutable after construction and
// safe for concurrent reads; construction is sequential because the precision
// scope is process-global.
struct BimomentTable {
    std::vector<std::vector<Real>> B;    // B[j][k], 0 <= j, k <= degree_cap
    std::vector<std::vector<Real>> err;  // per-entry quadrature error bounds
    ModelParams params;
    PrecisionPolicy policy;
    int degree_cap = 0;

    const Real& at(int j, int k) const {
        if (j < 0 || k < 0 || j > degree_cap || k > degree_cap)
            throw std::out_of_range("BimomentTable::at: index beyond degree cap");
        return B[static_cast<size_t>(j)][static_cast<size_t>(k)];
    }
};

namespace detail {

// Decay scale of x^{power} e^{+-2nax - n Vhat}: the quartic term takes over
// past the larger of 1, |2a|^{1/3} and sqrt(t); the support scan of the
// half-line rule extends outward from there on its own.
inline Real moment_decay_scale(const ModelParams& p) {
    Real s(1);
    if (p.t > 0) s = (std::max)(s, sqrt(p.t));
    return (std::max)(s, pow(2 * abs(p.a), Real(1) / 3));
}

}  // namespace detail

// Builds the full (deg+1) x (deg+1) table.  The drift and potential exponents
// are combined inside a single exp per branch, so 2nax values far beyond the
// double-precision overflow threshold stay representable.
//
// The a > 0 regime is the one the existence theory covers; a < 0 is admitted
// as well because the table obeys the reflection B^{-a}[j][k] = +-(-1)^j
// B^{a}[j][k] (sign by gamma = +-1), which transports solvability.  a = 0 is
// refused: the drift split that defines the folded form degenerates.
inline BimomentTable build_bimoments(const ModelParams& p, int deg,
                                     const PrecisionPolicy& policy) {
    p.validate();
    if (p.a == 0)
        throw std::invalid_argument("build_bimoments: requires a != 0");
    if (deg < 0) throw std::invalid_argument("build_bimoments: negative degree cap");

    BimomentTable table;
    table.params = p;
    table.policy = policy;
    table.degree_cap = deg;
    table.B.assign(static_cast<size_t>(deg) + 1,
                   std::vector<Real>(static_cast<size_t>(deg) + 1));
    table.err = table.B;

    const Real scale = detail::moment_decay_scale(p);
    for (int j = 0; j <= deg; ++j) {
        const Real sgn = (j % 2 == 0) ? p.gamma : -p.gamma;
        for (int k = 0; k <= deg; ++k) {
            const Real power = j + 2 * k + p.alpha;
            auto f = [&](const Real& x) -> Real {
                const Real x2 = x * x;
                const Real vh = p.n * (x2 * x2 / 2 - p.t * x2);
                const Real drift = 2 * p.n * p.a * x;
                Real combo = exp(drift - vh);
                if (sgn != 0) combo += sgn * exp(-drift - vh);
                return pow(x, power) * combo;
            };
            QuadResult<Real> r = numerics::integrate_halfline_t<Real>(f, scale, policy);
            if (!r.converged)
                throw std::runtime_error("build_bimoments: quadrature failed at (j,k)=(" +
                                         std::to_string(j) + "," + std::to_string(k) + ")");
            table.B[static_cast<size_t>(j)][static_cast<size_t>(k)] = r.value;
            table.err[static_cast<size_t>(j)][static_cast<size_t>(k)] = r.err;
        }
    }
    return table;
}

// Monic coefficient vectors, ascending powers; p_coeffs[k] has degree k in x,
// q_coeffs[k] degree k in the squared variable.  h[k] = <p_k, q_k(x^2)>.
// The construction table rides along so the polyorthogonal combinations and
// kernel formulas can form monomial brackets without fresh quadrature.
struct BiorthSystem {
    std::vector<std::vector<Real>> p_coeffs;
    std::vector<std::vector<Real>> q_coeffs;
    std::vector<Real> h;
    Real residual_report{0};  // max |<p_j, q_k(x^2)>| over j != k
    BimomentTable table;

    int kmax() const { return static_cast<int>(h.size()) - 1; }
    const ModelParams& params() const { return table.params; }
};

template <class T>
T poly_eval(const std::vector<Real>& coeffs, const T& x) {
    T acc{};
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

// <p(x), q(x^2)> from the table: a double contraction over the coefficient
// vectors.  Degrees must fit under the table's cap.
inline Real table_bracket(const BimomentTable& table, const std::vector<Real>& pc,
                          const std::vector<Real>& qc) {
    Real acc(0);
    for (size_t i = 0; i < pc.size(); ++i) {
        if (pc[i] == 0) continue;
        Real row(0);
        for (size_t s = 0; s < qc.size(); ++s)
            if (qc[s] != 0) row += qc[s] * table.at(static_cast<int>(i), static_cast<int>(s));
        acc += pc[i] * row;
    }
    return acc;
}

// <x^j, q(x^2)> from the table.
inline Real table_mono_bracket(const BimomentTable& table, int j,
                               const std::vector<Real>& qc) {
    Real acc(0);
    for (size_t s = 0; s < qc.size(); ++s)
        if (qc[s] != 0) acc += qc[s] * table.at(j, static_cast<int>(s));
    return acc;
}

// Solves the two monic families degree by degree.  p_k kills the even powers
// below 2k, q_k kills the monomial brackets below k:
//   sum_i p_{k,i} B[i][j] = 0   (j < k),   sum_s q_{k,s} B[j][s] = 0  (j < k).
// A numerically singular elimination escalates the working precision once
// (same table entries, finer arithmetic) before failing.
inline BiorthSystem biorth_system(const BimomentTable& table, int kmax) {
    if (kmax < 0 || kmax > table.degree_cap)
        throw std::invalid_argument("biorth_system: kmax must lie in [0, degree cap]");

    auto attempt = [&](BiorthSystem& sys) -> bool {
        sys.p_coeffs.assign(static_cast<size_t>(kmax) + 1, {});
        sys.q_coeffs.assign(static_cast<size_t>(kmax) + 1, {});
        sys.h.assign(static_cast<size_t>(kmax) + 1, Real(0));
        for (int k = 0; k <= kmax; ++k) {
            std::vector<Real> p(static_cast<size_t>(k) + 1), q(static_cast<size_t>(k) + 1);
            p.back() = Real(1);
            q.back() = Real(1);
            if (k > 0) {
                Matrix<Real> Ap(k, k), Aq(k, k), bp(k, 1), bq(k, 1);
                for (int j = 0; j < k; ++j) {
                    for (int i = 0; i < k; ++i) {
                        Ap(j, i) = table.at(i, j);
                        Aq(j, i) = table.at(j, i);
                    }
                    bp(j, 0) = -table.at(k, j);
                    bq(j, 0) = -table.at(j, k);
                }
                auto sp = numerics::lu_solve(Ap, bp);
                auto sq = numerics::lu_solve(Aq, bq);
                if (!sp.ok || !sq.ok) return false;
                for (int i = 0; i < k; ++i) {
                    p[static_cast<size_t>(i)] = sp.x(i, 0);
                    q[static_cast<size_t>(i)] = sq.x(i, 0);
                }
            }
            sys.h[static_cast<size_t>(k)] = table_bracket(table, p, q);
            sys.p_coeffs[static_cast<size_t>(k)] = std::move(p);
            sys.q_coeffs[static_cast<size_t>(k)] = std::move(q);
        }
        return true;
    };

    BiorthSystem sys;
    sys.table = table;
    const unsigned bits = (std::max)(table.policy.bits, numerics::current_bits());
    bool ok = false;
    {
        ScopedPrecision work(bits);
        ok = attempt(sys);
    }
    if (!ok) {
        ScopedPrecision deep(bits * 2);
        ok = attempt(sys);
    }
    if (!ok) throw std::runtime_error("biorth_system: singular bimoment system");

    for (int k = 0; k <= kmax; ++k)
        if (sys.h[static_cast<size_t>(k)] == 0)
            throw std::runtime_error("biorth_system: vanishing norm h[" +
                                     std::to_string(k) + "]");
    for (int j = 0; j <= kmax; ++j)
        for (int k = 0; k <= kmax; ++k) {
            if (j == k) continue;
            const Real r = abs(table_bracket(table, sys.p_coeffs[static_cast<size_t>(j)],
                                             sys.q_coeffs[static_cast<size_t>(k)]));
            sys.residual_report = (std::max)(sys.residual_report, r);
        }
    return sys;
}

// Multiple weights in the squared coordinate (xi = x^2), against which the
// type-I polynomials integrate:
//   W1(xi) = (e^{2na sqrt(xi)} + gamma e^{-2na sqrt(xi)}) xi^{-1/2} What(sqrt xi),
//   W2(xi) = (e^{2na sqrt(xi)} - gamma e^{-2na sqrt(xi)})          What(sqrt xi).
inline Real weight_W1(const Real& xi, const ModelParams& p) {
    if (!(xi > 0)) throw std::domain_error("weight_W1: requires xi > 0");
    const Real r = sqrt(xi);
    const Real vh = p.n * (xi * xi / 2 - p.t * xi);
    const Real drift = 2 * p.n * p.a * r;
    return pow(r, p.alpha) * (exp(drift - vh) + p.gamma * exp(-drift - vh)) / r;
}

inline Real weight_W2(const Real& xi, const ModelParams& p) {
    if (!(xi > 0)) throw std::domain_error("weight_W2: requires xi > 0");
    const Real r = sqrt(xi);
    const Real vh = p.n * (xi * xi / 2 - p.t * xi);
    const Real drift = 2 * p.n * p.a * r;
    return pow(r, p.alpha) * (exp(drift - vh) - p.gamma * exp(-drift - vh));
}

// One polyorthogonal pair: P (type II, coefficient vector in xi) and the
// type-I density Q(xi) = A(xi) W1(xi) + B(xi) W2(xi), stored through A and B.
struct PolyPair {
    int k1 = 0, k2 = 0;
    std::vector<Real> P_coeffs;
    std::vector<Real> A_coeffs;
    std::vector<Real> B_coeffs;

    Real Q_eval(const Real& xi, const ModelParams& p) const {
        return poly_eval(A_coeffs, xi) * weight_W1(xi, p) +
               poly_eval(B_coeffs, xi) * weight_W2(xi, p);
    }
};

namespace detail {

// p(sqrt xi) e^{a sqrt xi} + gamma p(-sqrt xi) e^{-a sqrt xi} splits over the
// even/odd parts of p: even -> multiplies W1 (after the xi^{-1/2} What factor),
// odd -> multiplies W2.
inline void even_odd_split(const std::vector<Real>& c, std::vector<Real>& even,
                           std::vector<Real>& odd) {
    even.clear();
    odd.clear();
    for (size_t i = 0; i < c.size(); ++i)
        (i % 2 == 0 ? even : odd).push_back(c[i]);
}

inline std::vector<Real> scaled(std::vector<Real> c, const Real& s) {
    for (auto& x : c) x *= s;
    return c;
}

// ptilde_m = p_m - a1^{(m)} p_{m-1}, the subleading-coefficient combination
// the (k,k+1) and (k+2,k) type-I pairs are built from.
inline std::vector<Real> tilde_p(const BiorthSystem& sys, int m) {
    const auto& pm = sys.p_coeffs[static_cast<size_t>(m)];
    const auto& pm1 = sys.p_coeffs[static_cast<size_t>(m - 1)];
    const Real a1 = pm[static_cast<size_t>(m - 1)];
    std::vector<Real> out = pm;
    for (size_t i = 0; i < pm1.size(); ++i) out[i] -= a1 * pm1[i];
    return out;
}

inline void require_degree(const BiorthSystem& sys, int m, const char* who) {
    if (m < 0 || m > sys.kmax())
        throw std::invalid_argument(std::string(who) +
                                    ": system does not carry degree " + std::to_string(m));
}

}  // namespace detail

// The four index families the construction defines.  P for (k,k) and (k+1,k)
// is the monic q_m; for (k,k+1) and (k+2,k) it is the bracket-weighted
// difference of adjacent q's.  A/B come from the even/odd split of p_{m-1}
// over 2 h_{m-1} in the monic cases and of ptilde_m unnormalized otherwise.
// Index (0,0) carries no type-I density (it would need a degree -1
// polynomial); its A/B vectors are empty.
inline PolyPair poly_pair(const BiorthSystem& sys, int k1, int k2) {
    const int diff = k1 - k2;
    if (k1 < 0 || k2 < 0 || diff < -1 || diff > 2)
        throw std::invalid_argument("poly_pair: unsupported index (" +
                                    std::to_string(k1) + "," + std::to_string(k2) + ")");
    PolyPair pair;
    pair.k1 = k1;
    pair.k2 = k2;

    if (diff == 0 || diff == 1) {
        const int m = k1 + k2;  // 2k or 2k+1
        detail::require_degree(sys, m, "poly_pair");
        pair.P_coeffs = sys.q_coeffs[static_cast<size_t>(m)];
        if (m == 0) return pair;  // (0,0): no type-I side
        const auto& pm1 = sys.p_coeffs[static_cast<size_t>(m - 1)];
        std::vector<Real> even, odd;
        detail::even_odd_split(pm1, even, odd);
        const Real norm = 1 / (2 * sys.h[static_cast<size_t>(m - 1)]);
        pair.A_coeffs = detail::scaled(even, norm);
        pair.B_coeffs = detail::scaled(odd, norm);
        return pair;
    }

    // diff == -1: (k, k+1) from m = 2k+1;  diff == 2: (k+2, k) from m = 2k+2.
    const int k = (diff == -1) ? k1 : k2;
    const int m = (diff == -1) ? 2 * k + 1 : 2 * k + 2;
    detail::require_degree(sys, m, "poly_pair");
    if (m > sys.table.degree_cap)
        throw std::invalid_argument("poly_pair: bracket row beyond table cap");

    const auto& qlo = sys.q_coeffs[static_cast<size_t>(m - 1)];
    const auto& qhi = sys.q_coeffs[static_cast<size_t>(m)];
    const Real clo = table_mono_bracket(sys.table, m, qlo);   // <q_{m-1}(x^2), x^m>
    const Real chi = table_mono_bracket(sys.table, m, qhi);   // <q_m(x^2), x^m>
    pair.P_coeffs.assign(qhi.size(), Real(0));
    for (size_t i = 0; i < qhi.size(); ++i) pair.P_coeffs[i] = clo * qhi[i];
    for (size_t i = 0; i < qlo.size(); ++i) pair.P_coeffs[i] -= chi * qlo[i];

    std::vector<Real> even, odd;
    detail::even_odd_split(detail::tilde_p(sys, m), even, odd);
    pair.A_coeffs = std::move(even);
    pair.B_coeffs = std::move(odd);
    return pair;
}

namespace detail {

// Weighted combination g(x) = x^alpha (p(x) e^{2nax} + gamma p(-x) e^{-2nax})
// e^{-n Vhat(x)} and its analytic continuation off the half-line (principal
// power), the density whose Cauchy transform the boundary-value problem needs.
template <class T>
T cauchy_density(const std::vector<Real>& pk, const ModelParams& p, const T& x) {
    const T x2 = x * x;
    const T vh = p.n * (x2 * x2 / 2 - p.t * x2);
    const T drift = 2 * p.n * p.a * x;
    const T combo = poly_eval(pk, x) * exp(drift - vh) +
                    p.gamma * poly_eval(pk, T(-x)) * exp(-drift - vh);
    return exp(p.alpha * log(x)) * combo;
}

template <>
inline Real cauchy_density<Real>(const std::vector<Real>& pk, const ModelParams& p,
                                 const Real& x) {
    const Real x2 = x * x;
    const Real vh = p.n * (x2 * x2 / 2 - p.t * x2);
    const Real drift = 2 * p.n * p.a * x;
    const Real combo = poly_eval(pk, x) * exp(drift - vh) +
                       p.gamma * poly_eval(pk, Real(-x)) * exp(-drift - vh);
    return pow(x, p.alpha) * combo;
}

}  // namespace detail

// Right-half-plane Cauchy transform of the weighted polynomial combination,
//   Cp_k(z) = (1/2 pi i) Int_0^inf x^alpha (p_k(x) e^{2nax} +
//             gamma p_k(-x) e^{-2nax}) e^{-n Vhat(x)} / (x^2 - z^2) dx,
// the second component of the vector boundary-value problem that p_k solves.
// Defined for Re z >= 0 off the positive real axis; points within 1e-8 of
// the axis are refused (the caller should use cauchy_p_jump there).
//
// Close to the axis the pole at x = z sits near the integration contour and
// a bare double-exponential rule cannot resolve it, so the singular part is
// subtracted:  Int g/(x^2-z^2) = Int (g(x)-g(z))/(x^2-z^2) + g(z) I0(z) with
// I0(z) = Int_0^inf dx/(x^2-z^2) = +-i pi/(2z)  (sign of Im z).
inline Complex cauchy_p(const BiorthSystem& sys, int k, const Complex& z,
                        const PrecisionPolicy& pol = {}) {
    detail::require_degree(sys, k, "cauchy_p");
    if (z.real() < 0)
        throw std::domain_error("cauchy_p: defined on the right half-plane only");
    const Real dist = z.real() > 0 ? abs(z.imag()) : abs(z);
    if (dist < Real("1e-8"))
        throw std::runtime_error("cauchy_p: z within 1e-8 of the positive real axis; "
                                 "use the jump form");

    const ModelParams& p = sys.params();
    const auto& pk = sys.p_coeffs[static_cast<size_t>(k)];
    const Complex z2 = z * z;
    const Real scale = detail::moment_decay_scale(p);
    const bool near_axis = z.real() > 0 && abs(z.imag()) < z.real() / 4;

    QuadResult<Complex> r;
    Complex closed{};
    if (near_axis) {
        const Complex gz = detail::cauchy_density<Complex>(pk, p, z);
        auto f = [&](const Real& x) -> Complex {
            const Complex g = detail::cauchy_density<Real>(pk, p, x);
            return (g - gz) / (x * x - z2);
        };
        r = numerics::integrate_halfline_t<Complex>(f, scale, pol);
        const Real half_pi = numerics::pi_r() / 2;
        const Complex i0 = Complex(Real(0), z.imag() > 0 ? half_pi : -half_pi) / z;
        closed = gz * i0;
    } else {
        auto f = [&](const Real& x) -> Complex {
            return detail::cauchy_density<Real>(pk, p, x) / (x * x - z2);
        };
        r = numerics::integrate_halfline_t<Complex>(f, scale, pol);
    }
    if (!r.converged)
        throw std::runtime_error("cauchy_p: quadrature did not converge");
    const Real two_pi = 2 * numerics::pi_r();
    return (r.value + closed) / Complex(Real(0), two_pi);
}

// Additive jump of Cp_k across the positive axis:
//   Cp_{k,+}(x) - Cp_{k,-}(x)
//     = (x^alpha / 2x) (p_k(x) e^{n(2ax - Vhat)} + gamma p_k(-x) e^{n(-2ax - Vhat)}).
inline Real cauchy_p_jump(const BiorthSystem& sys, int k, const Real& x) {
    detail::require_degree(sys, k, "cauchy_p_jump");
    if (!(x > 0)) throw std::domain_error("cauchy_p_jump: requires x > 0");
    const ModelParams& p = sys.params();
    const auto& pk = sys.p_coeffs[static_cast<size_t>(k)];
    const Real x2 = x * x;
    const Real vh = p.n * (x2 * x2 / 2 - p.t * x2);
    const Real drift = 2 * p.n * p.a * x;
    const Real combo = poly_eval(pk, x) * exp(drift - vh) +
                       p.gamma * poly_eval(pk, -x) * exp(-drift - vh);
    return pow(x, p.alpha) / (2 * x) * combo;
}

}  // namespace pearceylab::biorth
