#pragma once
// Finite-truncation reproducing kernels over the two-exponential quartic
// weight: the direct sum K_m, its symmetrization Khat_m, the external-source
// kernel assembled from the even/odd subsystems, and two independent
// re-evaluations of Khat -- a three-term recombination in the squared
// variable whose coefficients reduce to h-ratios, and a 3x3 boundary-value
// matrix contraction.  All public kernels take the physical (un-squared)
// coordinates; the squared-variable substitution happens internally.

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "biorth.hpp"
#include "linalg.hpp"
#include "model.hpp"
#include "quadrature.hpp"
#include "scalar.hpp"

namespace pearceylab::kernels {

using biorth::BiorthSystem;
using biorth::poly_eval;
using biorth::poly_pair;
using biorth::PolyPair;
using model::ModelParams;
using numerics::Complex;
using numerics::Matrix;
using numerics::PrecisionPolicy;
using numerics::QuadResult;
using numerics::Real;

// K_m(x, y) = sum_{k<m} p_k(x) q_k(y^2) ind_gamma(x) W(x) / h_k, the
// reproducing kernel of the biorthogonal family at truncation m.
inline Real kernel_K(const BiorthSystem& sys, int m, const Real& x, const Real& y) {
    if (m < 1 || m - 1 > sys.kmax())
        throw std::invalid_argument("kernel_K: truncation must lie in [1, kmax+1]");
    const ModelParams& p = sys.params();
    const Real w = model::weight_W(x, p).value * model::gamma_step(x, p.gamma);
    if (w == 0) return Real(0);
    const Real y2 = y * y;
    Real s(0);
    for (int k = 0; k < m; ++k) {
        const auto ku = static_cast<size_t>(k);
        s += poly_eval(sys.p_coeffs[ku], x) * poly_eval(sys.q_coeffs[ku], y2) / sys.h[ku];
    }
    return s * w;
}

// Symmetrization over the first argument: Khat_m(x, y) = K_m(x,y) + K_m(-x,y).
inline Real kernel_Khat(const BiorthSystem& sys, int m, const Real& x, const Real& y) {
    return kernel_K(sys, m, x, y) + kernel_K(sys, m, -x, y);
}

// The even/odd subsystem pair behind the external-source kernel at matrix
// size 2n: the base weight with gamma = +1 and the |x|-multiplied weight
// (alpha -> alpha + 1) with gamma = -1, both at the same (n, t, a).
struct ExtKernelContext {
    BiorthSystem even_sys;
    BiorthSystem odd_sys;
    long n = 0;
};

inline ExtKernelContext make_ext_context(const ModelParams& base,
                                         const PrecisionPolicy& pol) {
    ModelParams pe = base;
    pe.gamma = Real(1);
    ModelParams po = base;
    po.gamma = Real(-1);
    po.alpha = base.alpha + 1;
    const int kmax = static_cast<int>(base.n) - 1;
    ExtKernelContext ctx;
    ctx.n = base.n;
    ctx.even_sys = biorth::biorth_system(biorth::build_bimoments(pe, kmax, pol), kmax);
    ctx.odd_sys = biorth::biorth_system(biorth::build_bimoments(po, kmax, pol), kmax);
    return ctx;
}

// K^ext_{2n}(x, y) = (1/2) Khat^{even}_n(x, y) + (y/2x) Khat^{odd}_n(x, y).
inline Real kernel_ext(const ExtKernelContext& ctx, const Real& x, const Real& y) {
    if (x == 0) throw std::domain_error("kernel_ext: x = 0 hits the y/(2x) factor");
    const int m = static_cast<int>(ctx.n);
    return kernel_Khat(ctx.even_sys, m, x, y) / 2 +
           y / (2 * x) * kernel_Khat(ctx.odd_sys, m, x, y);
}

// One-shot convenience form.  The truncation is tied to base.n because the
// subsystem weights carry n; a mismatched pair has no meaning here.
inline Real kernel_ext(long n, const Real& x, const Real& y, const ModelParams& base,
                       const PrecisionPolicy& pol = {}) {
    if (n != base.n)
        throw std::invalid_argument("kernel_ext: truncation must equal base.n");
    return kernel_ext(make_ext_context(base, pol), x, y);
}

// Khat_m via the three-term recombination in xi = x^2.  With u = x^2,
// v = y^2 and r = m/2 the squared-variable kernel obeys
//   (v - u) (1/2|x|) Khat_m(x, y) =
//     m even:  P_{r,r}(v) Q_{r,r}(u)
//              + (h_{2r}/(h_{2r-1} h_{2r-2})) P_{r-1,r}(v) Q_{r+1,r}(u)
//              - (1/(2 h_{2r-1}))            P_{r,r-1}(v) Q_{r,r+1}(u)
//     m odd:   P_{r+1,r}(v) Q_{r+1,r}(u)
//              - (1/(2 h_{2r}))              P_{r,r}(v)   Q_{r+2,r}(u)
//              + (h_{2r+1}/(h_{2r} h_{2r-1})) P_{r+1,r-1}(v) Q_{r+1,r+1}(u),
// the normalization ratios having collapsed to the h products shown.
// Near the diagonal (and at x = 0, and for m = 1 where the shifted indices
// would go negative) the numerator cancels and the direct sum is used.
inline Real kernel_cd(const BiorthSystem& sys, int m, const Real& x, const Real& y) {
    if (m < 1) throw std::invalid_argument("kernel_cd: truncation must be >= 1");
    if (m == 1 || x == 0 || abs(y - x) < Real("1e-6") || abs(y + x) < Real("1e-6"))
        return kernel_Khat(sys, m, x, y);
    if (sys.kmax() < m + 1)
        throw std::invalid_argument("kernel_cd: system must carry degrees through m+1");

    const ModelParams& p = sys.params();
    const Real u = x * x, v = y * y;
    const int r = m / 2;
    const auto h = [&](int i) -> const Real& { return sys.h[static_cast<size_t>(i)]; };

    PolyPair main_pp, pb, pc, qb, qc;
    Real coef_b, coef_c;
    if (m % 2 == 0) {
        main_pp = poly_pair(sys, r, r);
        pb = poly_pair(sys, r - 1, r);
        qb = poly_pair(sys, r + 1, r);
        pc = poly_pair(sys, r, r - 1);
        qc = poly_pair(sys, r, r + 1);
        const Real d = h(2 * r - 1) * h(2 * r - 2);
        if (d == 0 || h(2 * r - 1) == 0)
            throw std::runtime_error("kernel_cd: degenerate normalization ratio");
        coef_b = h(2 * r) / d;
        coef_c = -1 / (2 * h(2 * r - 1));
    } else {
        main_pp = poly_pair(sys, r + 1, r);
        pb = poly_pair(sys, r, r);
        qb = poly_pair(sys, r + 2, r);
        pc = poly_pair(sys, r + 1, r - 1);
        qc = poly_pair(sys, r + 1, r + 1);
        const Real d = h(2 * r) * h(2 * r - 1);
        if (d == 0 || h(2 * r) == 0)
            throw std::runtime_error("kernel_cd: degenerate normalization ratio");
        coef_b = -1 / (2 * h(2 * r));
        coef_c = h(2 * r + 1) / d;
    }
    const Real s = poly_eval(main_pp.P_coeffs, v) * main_pp.Q_eval(u, p) +
                   coef_b * poly_eval(pb.P_coeffs, v) * qb.Q_eval(u, p) +
                   coef_c * poly_eval(pc.P_coeffs, v) * qc.Q_eval(u, p);
    return 2 * abs(x) * s / (v - u);
}

namespace detail {

// Principal value of int_0^inf f(s)/(s - u) ds for u > 0: a symmetric window
// of radius rho around the pole (difference quotient, finite at w -> 0) plus
// the two outer pieces.
template <class F>
Real pv_halfline(F&& f, const Real& u, const Real& decay_scale,
                 const PrecisionPolicy& pol) {
    const Real rho = (std::min)(u / 2, Real(1));
    auto win = [&](const Real& w) -> Real { return (f(u + w) - f(u - w)) / w; };
    auto left = [&](const Real& s) -> Real { return f(s) / (s - u); };
    auto right = [&](const Real& tau) -> Real { return f(u + rho + tau) / (rho + tau); };
    QuadResult<Real> rw = numerics::integrate_finite_t<Real>(win, Real(0), rho, pol);
    QuadResult<Real> rl = numerics::integrate_finite_t<Real>(left, Real(0), u - rho, pol);
    QuadResult<Real> rr = numerics::integrate_halfline_t<Real>(right, decay_scale, pol);
    if (!rw.converged || !rl.converged || !rr.converged)
        throw std::runtime_error("pv_halfline: quadrature did not converge");
    return rw.value + rl.value + rr.value;
}

inline Real wj_eval(int j, const Real& xi, const ModelParams& p) {
    return j == 1 ? biorth::weight_W1(xi, p) : biorth::weight_W2(xi, p);
}

struct RowSpec {
    int k1, k2;
};

// P-polynomial row indices of the first boundary-value matrix and the row
// prefactors that undo its normalization constants (which reduce to h
// products; the middle/bottom scales are purely imaginary).
inline std::array<RowSpec, 3> xtilde_rows(int m) {
    const int r = m / 2;
    if (m % 2 == 0) return {{{r, r}, {r - 1, r}, {r, r - 1}}};
    return {{{r + 1, r}, {r, r}, {r + 1, r - 1}}};
}

inline std::array<Complex, 3> xtilde_row_scales(const BiorthSystem& sys, int m) {
    const int r = m / 2;
    const Real pi = numerics::pi_r();
    const auto h = [&](int i) -> const Real& { return sys.h[static_cast<size_t>(i)]; };
    if (m % 2 == 0)
        return {Complex(Real(1)), Complex(Real(0), pi / (h(2 * r - 1) * h(2 * r - 2))),
                Complex(Real(0), -pi / h(2 * r - 1))};
    return {Complex(Real(1)), Complex(Real(0), -pi / h(2 * r)),
            Complex(Real(0), pi / (h(2 * r) * h(2 * r - 1)))};
}

// Q-side row indices and scales of the second (dual) matrix.
inline std::array<RowSpec, 3> xdual_rows(int m) {
    const int r = m / 2;
    if (m % 2 == 0) return {{{r, r}, {r + 1, r}, {r, r + 1}}};
    return {{{r + 1, r}, {r + 2, r}, {r + 1, r + 1}}};
}

inline std::array<Complex, 3> xdual_row_scales(const BiorthSystem& sys, int m) {
    const Real two_pi = 2 * numerics::pi_r();
    const Real hm = sys.h[static_cast<size_t>(m)];
    if (m % 2 == 0)
        return {Complex(Real(0), two_pi), Complex(2 * hm), Complex(Real(1))};
    return {Complex(Real(0), two_pi), Complex(Real(1)), Complex(2 * hm)};
}

inline void require_off_cut(const Complex& zeta, const char* who) {
    const Real dist = zeta.real() > 0 ? abs(zeta.imag()) : abs(zeta);
    if (dist < Real("1e-6"))
        throw std::domain_error(std::string(who) +
                                ": point too close to [0, inf); use the boundary form");
}

}  // namespace detail

// First boundary-value matrix off the cut: column 0 the P-polynomials,
// columns 1..2 their weighted Cauchy transforms against W1, W2.
inline Matrix<Complex> xtilde_matrix(const BiorthSystem& sys, int m, const Complex& zeta,
                                     const PrecisionPolicy& pol = {}) {
    if (m < 2) throw std::invalid_argument("xtilde_matrix: m >= 2 (m = 1 degenerates)");
    if (sys.kmax() < m)
        throw std::invalid_argument("xtilde_matrix: system must carry degrees through m");
    detail::require_off_cut(zeta, "xtilde_matrix");
    const ModelParams& p = sys.params();
    const auto rows = detail::xtilde_rows(m);
    const auto scales = detail::xtilde_row_scales(sys, m);
    const Complex inv_2pii = Complex(Real(0), Real(-1)) / (2 * numerics::pi_r());
    Matrix<Complex> X(3, 3);
    for (int j = 0; j < 3; ++j) {
        const PolyPair pp = poly_pair(sys, rows[static_cast<size_t>(j)].k1,
                                      rows[static_cast<size_t>(j)].k2);
        X(j, 0) = scales[static_cast<size_t>(j)] * Complex(poly_eval(pp.P_coeffs, zeta));
        for (int wsel : {1, 2}) {
            auto f = [&](const Real& s) -> Complex {
                const Real num = poly_eval(pp.P_coeffs, s) * detail::wj_eval(wsel, s, p);
                return Complex(num) / (s - zeta);
            };
            QuadResult<Complex> r = numerics::integrate_halfline_t<Complex>(f, Real(2), pol);
            if (!r.converged)
                throw std::runtime_error("xtilde_matrix: quadrature did not converge");
            X(j, wsel) = scales[static_cast<size_t>(j)] * inv_2pii * r.value;
        }
    }
    return X;
}

// The same matrix's boundary value from above on the cut (the two one-sided
// limits produce the same kernel; the + side is used): principal value plus
// half the residue.
inline Matrix<Complex> xtilde_matrix_plus(const BiorthSystem& sys, int m, const Real& u,
                                          const PrecisionPolicy& pol = {}) {
    if (m < 2)
        throw std::invalid_argument("xtilde_matrix_plus: m >= 2 (m = 1 degenerates)");
    if (sys.kmax() < m)
        throw std::invalid_argument(
            "xtilde_matrix_plus: system must carry degrees through m");
    if (!(u > 0)) throw std::domain_error("xtilde_matrix_plus: requires u > 0");
    const ModelParams& p = sys.params();
    const auto rows = detail::xtilde_rows(m);
    const auto scales = detail::xtilde_row_scales(sys, m);
    const Real two_pi = 2 * numerics::pi_r();
    Matrix<Complex> X(3, 3);
    for (int j = 0; j < 3; ++j) {
        const PolyPair pp = poly_pair(sys, rows[static_cast<size_t>(j)].k1,
                                      rows[static_cast<size_t>(j)].k2);
        X(j, 0) = scales[static_cast<size_t>(j)] * Complex(poly_eval(pp.P_coeffs, u));
        for (int wsel : {1, 2}) {
            auto f = [&](const Real& s) -> Real {
                return poly_eval(pp.P_coeffs, s) * detail::wj_eval(wsel, s, p);
            };
            const Real pv = detail::pv_halfline(f, u, Real(2), pol);
            const Complex bv(f(u) / 2, -pv / two_pi);
            X(j, wsel) = scales[static_cast<size_t>(j)] * bv;
        }
    }
    return X;
}

// Second (dual) matrix off the cut: column 0 the negated Cauchy transforms
// of the type-I densities, columns 1..2 their A and B polynomial parts.  Its
// transpose inverts xtilde_matrix at the same point.
inline Matrix<Complex> x_matrix(const BiorthSystem& sys, int m, const Complex& zeta,
                                const PrecisionPolicy& pol = {}) {
    if (m < 2) throw std::invalid_argument("x_matrix: m >= 2 (m = 1 degenerates)");
    if (sys.kmax() < m + 1)
        throw std::invalid_argument("x_matrix: system must carry degrees through m+1");
    detail::require_off_cut(zeta, "x_matrix");
    const ModelParams& p = sys.params();
    const auto rows = detail::xdual_rows(m);
    const auto scales = detail::xdual_row_scales(sys, m);
    const Complex inv_2pii = Complex(Real(0), Real(-1)) / (2 * numerics::pi_r());
    Matrix<Complex> X(3, 3);
    for (int j = 0; j < 3; ++j) {
        const PolyPair pp = poly_pair(sys, rows[static_cast<size_t>(j)].k1,
                                      rows[static_cast<size_t>(j)].k2);
        auto f = [&](const Real& s) -> Complex {
            return Complex(pp.Q_eval(s, p)) / (s - zeta);
        };
        QuadResult<Complex> r = numerics::integrate_halfline_t<Complex>(f, Real(2), pol);
        if (!r.converged)
            throw std::runtime_error("x_matrix: quadrature did not converge");
        const Complex& sc = scales[static_cast<size_t>(j)];
        X(j, 0) = sc * (-(inv_2pii * r.value));
        X(j, 1) = sc * Complex(poly_eval(pp.A_coeffs, zeta));
        X(j, 2) = sc * Complex(poly_eval(pp.B_coeffs, zeta));
    }
    return X;
}

// Khat_m from the boundary-value matrices: with u = x^2, v = y^2,
//   (1/2|x|) Khat_m(x, y) = [1/(2 pi i (v-u))] (1,0,0) Xt^T(v) (Xt^T(u))^{-1}
//                            (0, W1(u), W2(u))^T,
// where only the polynomial column of Xt(v) enters the contraction.  A
// numerically singular boundary matrix escalates the working precision once.
inline Real kernel_matrix_rhp(const BiorthSystem& sys, int m, const Real& x,
                              const Real& y, const PrecisionPolicy& pol = {}) {
    if (m < 1) throw std::invalid_argument("kernel_matrix_rhp: truncation must be >= 1");
    if (m == 1) return kernel_Khat(sys, m, x, y);  // single-term closed form
    if (x == 0) throw std::domain_error("kernel_matrix_rhp: x = 0");
    const Real u = x * x, v = y * y;
    if (abs(v - u) < Real("1e-10"))
        throw std::invalid_argument("kernel_matrix_rhp: requires y^2 != x^2");
    const ModelParams& p = sys.params();

    auto attempt = [&](const PrecisionPolicy& use, Complex& out) -> bool {
        const Matrix<Complex> Xu = xtilde_matrix_plus(sys, m, u, use);
        Matrix<Complex> A(3, 3), b(3, 1);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) A(i, j) = Xu(j, i);
        b(0, 0) = Complex(Real(0));
        b(1, 0) = Complex(biorth::weight_W1(u, p));
        b(2, 0) = Complex(biorth::weight_W2(u, p));
        auto sol = numerics::lu_solve(A, b);
        if (!sol.ok) return false;
        const auto rows = detail::xtilde_rows(m);
        const auto scales = detail::xtilde_row_scales(sys, m);
        out = Complex(Real(0));
        for (int j = 0; j < 3; ++j) {
            const PolyPair pp = poly_pair(sys, rows[static_cast<size_t>(j)].k1,
                                          rows[static_cast<size_t>(j)].k2);
            out += scales[static_cast<size_t>(j)] * Complex(poly_eval(pp.P_coeffs, v)) *
                   sol.x(j, 0);
        }
        return true;
    };

    Complex val;
    bool ok = attempt(pol, val);
    if (!ok) {
        PrecisionPolicy deep = pol;
        deep.bits *= 2;
        ok = attempt(deep, val);
    }
    if (!ok) throw std::runtime_error("kernel_matrix_rhp: singular boundary matrix");
    const Complex khat =
        2 * abs(x) * val / (Complex(Real(0), 2 * numerics::pi_r()) * (v - u));
    return khat.real();
}

}  // namespace pearceylab::kernels
