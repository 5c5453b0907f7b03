#pragma once
// Third-order Lax system with polynomial coefficient matrices in the spectral
// variable: the tau/sigma/rho flow generators built from a (u, v) jet, the
// Boussinesq-hierarchy flow substitutions and their zero-curvature residuals,
// the self-similarity reductions, the two first integrals fixed by the
// spectrum at spectral argument zero, the cubic and second-order Chazy forms,
// and the elementary polynomial solution pair.
//
// Every evaluator consumes explicit jets (a value plus its tau-derivatives),
// never function objects: polynomial data stays exact, and identity error is
// cleanly separated from whatever discretization error a caller accepts when
// producing jets by finite differences (recommended centered step for a
// residual of differential order k: machine_eps^(1/(k+2))).

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "scalar.hpp"

namespace pearceylab::integrable {

using numerics::Complex;
using numerics::Matrix;
using numerics::Real;

// ---------------------------------------------------------------------------
// Jets

// (u, v) and their tau-derivatives at one parameter point: u through order 5
// and v through order 4, exactly what the degree-two flow matrix and its
// tau-derivative consume.  tau/sigma/rho locate the jet in parameter space.
// Operations read entries through du()/dv(), so a shorter jet is accepted by
// any operation that needs less and rejected with a clear error otherwise.
struct LaxJet {
    Real tau{0};
    Real sigma{0};
    Real rho{0};
    std::vector<Real> u;  // u, u', ..., up to order 5 (length 6)
    std::vector<Real> v;  // v, v', ..., up to order 4 (length 5)

    static LaxJet zero() {
        LaxJet j;
        j.u.assign(6, Real(0));
        j.v.assign(5, Real(0));
        return j;
    }

    const Real& du(int k) const {
        if (k < 0 || static_cast<size_t>(k) >= u.size())
            throw std::invalid_argument("LaxJet: u-derivative of order " +
                                        std::to_string(k) + " not supplied");
        return u[static_cast<size_t>(k)];
    }
    const Real& dv(int k) const {
        if (k < 0 || static_cast<size_t>(k) >= v.size())
            throw std::invalid_argument("LaxJet: v-derivative of order " +
                                        std::to_string(k) + " not supplied");
        return v[static_cast<size_t>(k)];
    }

    void validate() const {
        if (u.size() != 6 || v.size() != 5)
            throw std::invalid_argument(
                "LaxJet: expected u-jet of length 6 and v-jet of length 5");
        auto finite = [](const Real& x) { return !isnan(x) && !isinf(x); };
        if (!finite(tau) || !finite(sigma) || !finite(rho))
            throw std::invalid_argument("LaxJet: non-finite parameter");
        for (const auto& x : u)
            if (!finite(x)) throw std::invalid_argument("LaxJet: non-finite u entry");
        for (const auto& x : v)
            if (!finite(x)) throw std::invalid_argument("LaxJet: non-finite v entry");
    }
};

namespace detail {

inline long binom(int n, int r) {
    long b = 1;
    for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
    return b;
}

// k-th tau-derivative of the products the flows need, by Leibniz on the jet.
inline Real d_u2(const LaxJet& j, int k) {
    Real s(0);
    for (int i = 0; i <= k; ++i) s += binom(k, i) * j.du(i) * j.du(k - i);
    return s;
}
inline Real d_uv(const LaxJet& j, int k) {
    Real s(0);
    for (int i = 0; i <= k; ++i) s += binom(k, i) * j.du(i) * j.dv(k - i);
    return s;
}
inline Real d_uv1(const LaxJet& j, int k) {  // derivative of u * v'
    Real s(0);
    for (int i = 0; i <= k; ++i) s += binom(k, i) * j.du(i) * j.dv(k - i + 1);
    return s;
}
inline Real d_v2(const LaxJet& j, int k) {
    Real s(0);
    for (int i = 0; i <= k; ++i) s += binom(k, i) * j.dv(i) * j.dv(k - i);
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Matrix polynomials in the spectral variable

// Ascending coefficient lists of 3x3 real matrices.  "Vanishes for all xi"
// becomes finitely checkable on the coefficients, so the zero-curvature
// residuals never sample.
using MatPoly = std::vector<Matrix<Real>>;

inline MatPoly poly_zero(size_t degree_plus_one) {
    return MatPoly(degree_plus_one, Matrix<Real>(3, 3));
}

inline MatPoly poly_add(MatPoly p, const MatPoly& q) {
    if (q.size() > p.size()) p.resize(q.size(), Matrix<Real>(3, 3));
    for (size_t d = 0; d < q.size(); ++d) p[d] += q[d];
    return p;
}

inline MatPoly poly_sub(MatPoly p, const MatPoly& q) {
    if (q.size() > p.size()) p.resize(q.size(), Matrix<Real>(3, 3));
    for (size_t d = 0; d < q.size(); ++d) p[d] -= q[d];
    return p;
}

inline MatPoly poly_scale(MatPoly p, const Real& s) {
    for (auto& m : p) m *= s;
    return p;
}

inline MatPoly poly_mul(const MatPoly& p, const MatPoly& q) {
    MatPoly r = poly_zero(p.size() + q.size() - 1);
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t k = 0; k < q.size(); ++k) r[i + k] += p[i] * q[k];
    return r;
}

inline MatPoly poly_commutator(const MatPoly& p, const MatPoly& q) {
    return poly_sub(poly_mul(p, q), poly_mul(q, p));
}

inline Real poly_max_abs(const MatPoly& p) {
    Real mx(0);
    for (const auto& m : p) mx = (std::max)(mx, numerics::max_abs(m));
    return mx;
}

inline Matrix<Complex> poly_eval(const MatPoly& p, const Complex& xi) {
    Matrix<Complex> m(3, 3);
    Complex w(1);
    for (const auto& coeff : p) {
        for (long i = 0; i < 3; ++i)
            for (long k = 0; k < 3; ++k) m(i, k) += Complex(coeff(i, k)) * w;
        w *= xi;
    }
    return m;
}

// ---------------------------------------------------------------------------
// The flow generators

// A, B, C generate translation in tau, sigma, rho; L generates the scaling of
// the spectral variable and is the fixed combination
//   L = -(1/3) diag(0,1,2) + (tau/3) A + (2 sigma/3) B + (4 rho/3) C.
struct LaxPolys {
    MatPoly A;  // degree 1
    MatPoly B;  // degree 1
    MatPoly C;  // degree 2
    MatPoly L;  // degree 2
};

inline MatPoly poly_flow_tau(const LaxJet& j) {
    MatPoly A = poly_zero(2);
    A[0](0, 1) = 1;
    A[0](1, 2) = 1;
    A[0](2, 0) = j.dv(0);
    A[0](2, 1) = -j.du(0);
    A[1](2, 0) = 1;
    return A;
}

inline MatPoly poly_flow_sigma(const LaxJet& j) {
    const Real u = j.du(0), u1 = j.du(1), u2 = j.du(2);
    const Real v = j.dv(0), v1 = j.dv(1);
    MatPoly B = poly_zero(2);
    B[0](0, 0) = 2 * u / 3;
    B[0](0, 2) = 1;
    B[0](1, 0) = v - 2 * u1 / 3;
    B[0](1, 1) = -u / 3;
    B[0](2, 0) = -v1 + 2 * u2 / 3;
    B[0](2, 1) = v - u1 / 3;
    B[0](2, 2) = -u / 3;
    B[1](1, 0) = 1;
    B[1](2, 1) = 1;
    return B;
}

inline MatPoly poly_flow_rho(const LaxJet& j) {
    using detail::d_u2;
    using detail::d_uv;
    const Real u = j.du(0), u1 = j.du(1), u2 = j.du(2), u3 = j.du(3), u4 = j.du(4);
    const Real v = j.dv(0), v1 = j.dv(1), v2 = j.dv(2), v3 = j.dv(3);
    MatPoly C = poly_zero(3);
    C[0](0, 0) = (2 * u2 - 3 * v1 + 2 * u * u) / 9;
    C[0](0, 1) = -(v - u1) / 3;
    C[0](0, 2) = u / 3;
    C[0](1, 0) = (-2 * u3 + 3 * v2 - 2 * d_u2(j, 1) + 3 * u * v) / 9;
    C[0](1, 1) = (-u2 - u * u) / 9;
    C[0](1, 2) = -v / 3;
    C[0](2, 0) = (2 * u4 - 3 * v3 + 2 * d_u2(j, 2) - 3 * d_uv(j, 1) - 3 * v * v) / 9;
    C[0](2, 1) = (-u3 - d_u2(j, 1) + 3 * v2 + 6 * u * v) / 9;
    C[0](2, 2) = (-u2 + 3 * v1 - u * u) / 9;
    C[1](0, 1) = 1;
    C[1](1, 0) = u / 3;
    C[1](1, 2) = 1;
    C[1](2, 0) = -u1 / 3 + 2 * v / 3;
    C[1](2, 1) = -2 * u / 3;
    C[2](2, 0) = 1;
    return C;
}

inline LaxPolys lax_polys(const LaxJet& j) {
    LaxPolys p;
    p.A = poly_flow_tau(j);
    p.B = poly_flow_sigma(j);
    p.C = poly_flow_rho(j);
    p.L = poly_zero(1);
    p.L[0](1, 1) = Real(-1) / 3;
    p.L[0](2, 2) = Real(-2) / 3;
    p.L = poly_add(p.L, poly_scale(p.A, j.tau / 3));
    p.L = poly_add(p.L, poly_scale(p.B, 2 * j.sigma / 3));
    p.L = poly_add(p.L, poly_scale(p.C, 4 * j.rho / 3));
    return p;
}

struct LaxMatrices {
    Matrix<Complex> A, B, C, L;
};

inline LaxMatrices lax_matrices(const Complex& xi, const LaxJet& j) {
    const LaxPolys p = lax_polys(j);
    return {poly_eval(p.A, xi), poly_eval(p.B, xi), poly_eval(p.C, xi),
            poly_eval(p.L, xi)};
}

// ---------------------------------------------------------------------------
// Hierarchy flows and zero curvature

// sigma- and rho-derivatives of (u, v) defined by the first and second
// hierarchy flows, as functions of the tau-jet alone.
struct FlowDerivatives {
    Real u_sigma, v_sigma;
    Real u_rho, v_rho;
};

inline FlowDerivatives hierarchy_flows(const LaxJet& j) {
    using detail::d_u2;
    using detail::d_uv;
    using detail::d_uv1;
    using detail::d_v2;
    FlowDerivatives d;
    d.u_sigma = j.du(2) - 2 * j.dv(1);
    d.v_sigma = -j.dv(2) + 2 * j.du(3) / 3 + 2 * j.du(0) * j.du(1) / 3;
    d.u_rho = (j.du(4) - 2 * j.dv(3) + d_u2(j, 2) - 4 * d_uv(j, 1)) / 3;
    d.v_rho = (2 * j.du(5) - 3 * j.dv(4) + 2 * d_u2(j, 3) + 2 * j.du(0) * j.du(3) -
               6 * d_uv1(j, 1) - 6 * d_v2(j, 1) + 4 * j.du(0) * j.du(0) * j.du(1)) /
              9;
    return d;
}

namespace detail {

// Entrywise tau-derivatives of the sigma- and rho-flow matrices; each uses
// one jet order more than the matrix itself.
inline MatPoly dtau_flow_sigma(const LaxJet& j) {
    const Real u1 = j.du(1), u2 = j.du(2), u3 = j.du(3);
    const Real v1 = j.dv(1), v2 = j.dv(2);
    MatPoly dB = poly_zero(2);
    dB[0](0, 0) = 2 * u1 / 3;
    dB[0](1, 0) = v1 - 2 * u2 / 3;
    dB[0](1, 1) = -u1 / 3;
    dB[0](2, 0) = -v2 + 2 * u3 / 3;
    dB[0](2, 1) = v1 - u2 / 3;
    dB[0](2, 2) = -u1 / 3;
    return dB;
}

inline MatPoly dtau_flow_rho(const LaxJet& j) {
    const Real u1 = j.du(1), u2 = j.du(2), u3 = j.du(3), u4 = j.du(4), u5 = j.du(5);
    const Real v1 = j.dv(1), v2 = j.dv(2), v3 = j.dv(3), v4 = j.dv(4);
    MatPoly dC = poly_zero(3);
    dC[0](0, 0) = (2 * u3 - 3 * v2 + 2 * d_u2(j, 1)) / 9;
    dC[0](0, 1) = -(v1 - u2) / 3;
    dC[0](0, 2) = u1 / 3;
    dC[0](1, 0) = (-2 * u4 + 3 * v3 - 2 * d_u2(j, 2) + 3 * d_uv(j, 1)) / 9;
    dC[0](1, 1) = (-u3 - d_u2(j, 1)) / 9;
    dC[0](1, 2) = -v1 / 3;
    dC[0](2, 0) = (2 * u5 - 3 * v4 + 2 * d_u2(j, 3) - 3 * d_uv(j, 2) - 3 * d_v2(j, 1)) / 9;
    dC[0](2, 1) = (-u4 - d_u2(j, 2) + 3 * v3 + 6 * d_uv(j, 1)) / 9;
    dC[0](2, 2) = (-u3 + 3 * v2 - d_u2(j, 1)) / 9;
    dC[1](1, 0) = u1 / 3;
    dC[1](2, 0) = -u2 / 3 + 2 * v1 / 3;
    dC[1](2, 1) = -2 * u1 / 3;
    return dC;
}

}  // namespace detail

// Zero-curvature residuals of the two flow pairs, checked on polynomial
// coefficients (no sampling in the spectral variable).  When no
// sigma-derivatives are supplied they are substituted from the first flow,
// making the first-flow residuals zero by construction; rho-derivatives are
// always substituted from the second flow.  scale is the largest entry among
// the products entering the commutators, for relative tolerance checks.
struct HierarchyResiduals {
    bool sigma_supplied = false;
    Real first_u{0};   // |u_sigma - (first flow)|, zero when substituted
    Real first_v{0};
    Real zc_sigma{0};  // max coefficient entry of dA/dsigma - dB/dtau - [A, B]
    Real zc_rho{0};    // max coefficient entry of dA/drho  - dC/dtau - [A, C]
    Real scale{1};
};

namespace detail {

inline HierarchyResiduals hierarchy_impl(const LaxJet& j, const Real* u_sigma,
                                         const Real* v_sigma) {
    const FlowDerivatives flows = hierarchy_flows(j);
    HierarchyResiduals out;
    out.sigma_supplied = u_sigma != nullptr;
    const Real us = u_sigma ? *u_sigma : flows.u_sigma;
    const Real vs = v_sigma ? *v_sigma : flows.v_sigma;
    if (u_sigma) {
        out.first_u = abs(*u_sigma - flows.u_sigma);
        out.first_v = abs(*v_sigma - flows.v_sigma);
    }

    const MatPoly A = poly_flow_tau(j);
    const MatPoly B = poly_flow_sigma(j);
    const MatPoly C = poly_flow_rho(j);

    MatPoly dA_dsigma = poly_zero(1);
    dA_dsigma[0](2, 0) = vs;
    dA_dsigma[0](2, 1) = -us;
    MatPoly dA_drho = poly_zero(1);
    dA_drho[0](2, 0) = flows.v_rho;
    dA_drho[0](2, 1) = -flows.u_rho;

    const MatPoly AB = poly_mul(A, B), BA = poly_mul(B, A);
    const MatPoly AC = poly_mul(A, C), CA = poly_mul(C, A);
    const MatPoly R1 = poly_sub(poly_sub(dA_dsigma, dtau_flow_sigma(j)), poly_sub(AB, BA));
    const MatPoly R2 = poly_sub(poly_sub(dA_drho, dtau_flow_rho(j)), poly_sub(AC, CA));
    out.zc_sigma = poly_max_abs(R1);
    out.zc_rho = poly_max_abs(R2);
    out.scale = (std::max)({Real(1), poly_max_abs(AB), poly_max_abs(BA),
                            poly_max_abs(AC), poly_max_abs(CA)});
    return out;
}

}  // namespace detail

inline HierarchyResiduals residual_hierarchy(const LaxJet& j) {
    return detail::hierarchy_impl(j, nullptr, nullptr);
}

inline HierarchyResiduals residual_hierarchy(const LaxJet& j, const Real& u_sigma,
                                             const Real& v_sigma) {
    return detail::hierarchy_impl(j, &u_sigma, &v_sigma);
}

// ---------------------------------------------------------------------------
// Self-similarity reductions

// Residuals of the coupled similarity system and, at rho = 0, of the single
// fourth-order reduction in u alone.  The single form is only defined on the
// rho = 0 slice, so it stays disengaged otherwise and single() refuses.
struct SimilarityResiduals {
    Real r1{0};
    Real r2{0};
    std::optional<Real> r_single;

    const Real& single() const {
        if (!r_single)
            throw std::invalid_argument(
                "SimilarityResiduals: the single-equation reduction requires rho = 0");
        return *r_single;
    }
};

inline SimilarityResiduals residual_similarity(const LaxJet& j, const Real& sigma,
                                               const Real& rho) {
    using detail::d_u2;
    using detail::d_uv;
    using detail::d_uv1;
    using detail::d_v2;
    const Real& tau = j.tau;
    SimilarityResiduals out;
    out.r1 = 2 * sigma * (2 * j.dv(1) - j.du(2)) - tau * j.du(1) - 2 * j.du(0);
    out.r2 = 2 * sigma * (j.dv(2) - 2 * j.du(3) / 3 - d_u2(j, 1) / 3) -
             tau * j.dv(1) - 3 * j.dv(0);
    if (rho == 0) {
        out.r_single = 4 * sigma * sigma * (-j.du(4) - 2 * d_u2(j, 2)) -
                       3 * tau * tau * j.du(2) - 21 * tau * j.du(1) - 24 * j.du(0);
    } else {
        out.r1 += 4 * rho / 3 *
                  (-j.du(4) + 2 * j.dv(3) - d_u2(j, 2) + 4 * d_uv(j, 1));
        out.r2 += 4 * rho / 9 *
                  (-2 * j.du(5) + 3 * j.dv(4) - 2 * d_u2(j, 3) -
                   2 * j.du(0) * j.du(3) + 6 * d_uv1(j, 1) + 6 * d_v2(j, 1) -
                   4 * j.du(0) * j.du(0) * j.du(1));
    }
    return out;
}

inline SimilarityResiduals residual_similarity(const LaxJet& j) {
    return residual_similarity(j, j.sigma, j.rho);
}

// ---------------------------------------------------------------------------
// First integrals and Chazy forms (rho = 0, sigma = 3/2 convention)

// Left sides and residuals of the two polynomial invariants fixed by the
// characteristic polynomial of the generator at spectral argument zero.
struct FirstIntegralValues {
    Real I1_left, I2_left;
    Real I1_residual, I2_residual;
};

inline FirstIntegralValues first_integrals(const LaxJet& j, const Real& tau,
                                           const Real& alpha) {
    const Real u = j.du(0), u1 = j.du(1), u2 = j.du(2);
    const Real v = j.dv(0), v1 = j.dv(1);
    FirstIntegralValues out;
    out.I1_left = 3 * (-2 * u2 + 3 * v1 - tau * v) -
                  tau * (-3 * u1 - tau * u + 6 * v) - 3 * u * u - 3 * u;
    out.I2_left = (-2 * u1 - 2 * tau * u / 3 + 3 * v) *
                      (-u1 - 2 * tau * u / 3 + 3 * v + 2 * tau / 3) -
                  (-u - tau * tau / 3 - 1) *
                      (2 * u2 - 3 * v1 + 2 * u * u / 3 + 4 * u / 3 + tau * v);
    out.I1_residual = out.I1_left - (1 + 3 * alpha - 3 * alpha * alpha) / 4;
    out.I2_residual = out.I2_left - (alpha * alpha * alpha / 12 +
                                     alpha * alpha / 8 - 3 * alpha / 8);
    return out;
}

// Residuals of the cubic Chazy form in y = f + tau^3/108 and of the
// second-order form in ytilde(x) = sqrt2 f(sqrt2 x) + (4/27) x^3, the latter
// evaluated at the mapped point x = tau/sqrt2 so that one f-jet serves both.
// f_jet holds f and tau-derivatives through order 3.
struct ChazyResiduals {
    Real third_order;
    Real second_order;
};

inline ChazyResiduals residual_chazy(const std::array<Real, 4>& f_jet,
                                     const Real& tau, const Real& alpha) {
    ChazyResiduals out;
    const Real t2 = tau * tau;
    const Real y = f_jet[0] + t2 * tau / 108;
    const Real y1 = f_jet[1] + t2 / 36;
    const Real y3 = f_jet[3] + Real(1) / 18;
    out.third_order =
        y3 + 6 * y1 * y1 + tau * y - t2 * t2 / 72 + (alpha - alpha * alpha) / 6;

    const Real sqrt2 = sqrt(Real(2));
    const Real T = tau / sqrt2;
    const Real yt = sqrt2 * f_jet[0] + 4 * T * T * T / 27;
    const Real yt1 = 2 * f_jet[1] + 4 * T * T / 9;
    const Real yt2 = 2 * sqrt2 * f_jet[2] + 8 * T / 9;
    const Real lin = T * yt1 - yt;
    out.second_order = yt2 * yt2 + 4 * yt1 * yt1 * yt1 - 4 * lin * lin -
                       4 * (alpha * alpha - alpha + 1) * yt1 / 3 +
                       4 * (alpha + 1) * (2 * alpha - 1) * (alpha - 2) / 27;
    return out;
}

// ---------------------------------------------------------------------------
// Elementary polynomial pair

// Two parameter choices admit a polynomial solution: the "plus" case
// (alpha = 0, gamma = +1) and the "minus" case (alpha = 1, gamma = -1), with
// f = -tau^3/27 +- tau/6.
enum class ElementaryCase { plus, minus };

inline int elementary_sign(ElementaryCase c) {
    return c == ElementaryCase::plus ? 1 : -1;
}
inline Real elementary_alpha(ElementaryCase c) {
    return c == ElementaryCase::plus ? Real(0) : Real(1);
}
inline Real elementary_gamma(ElementaryCase c) {
    return c == ElementaryCase::plus ? Real(1) : Real(-1);
}

// f and tau-derivatives through order 3 (the cubic's jet closes with
// constant third derivative -2/9).
inline std::array<Real, 4> elementary_f_jet(ElementaryCase c, const Real& tau) {
    const int s = elementary_sign(c);
    const Real t2 = tau * tau;
    return {-t2 * tau / 27 + s * tau / 6, -t2 / 9 + Real(s) / 6, -2 * tau / 9,
            Real(-2) / 9};
}

// u = 3 f'; v from the linear combination v = (tau f)'/2 + (3/2) f'';
// y = f + tau^3/108; ytilde evaluated literally as sqrt2 f(sqrt2 tau)
// + (4/27) tau^3 (its collapse to +-tau/3 is a test assertion, not an input).
struct ElementaryValues {
    Real f, u, v, y, ytilde;
};

inline ElementaryValues elementary_solution(ElementaryCase c, const Real& tau) {
    const int s = elementary_sign(c);
    const auto f = elementary_f_jet(c, tau);
    ElementaryValues e;
    e.f = f[0];
    e.u = 3 * f[1];
    e.v = (f[0] + tau * f[1]) / 2 + 3 * f[2] / 2;
    e.y = f[0] + tau * tau * tau / 108;
    const Real sqrt2 = sqrt(Real(2));
    const Real xs = sqrt2 * tau;
    e.ytilde = sqrt2 * (-xs * xs * xs / 27 + s * xs / 6) + 4 * tau * tau * tau / 27;
    return e;
}

// Full-depth jet at (sigma, rho) = (3/2, 0).  u-derivatives come from
// u = 3 f'; v-derivatives from the closed recursion
//   v^(k) = ((k+1) f^(k) + tau f^(k+1))/2 + (3/2) f^(k+2),
// which is v = (tau f)'/2 + (3/2) f'' differentiated k times.
inline LaxJet elementary_jet(ElementaryCase c, const Real& tau) {
    LaxJet j = LaxJet::zero();
    j.tau = tau;
    j.sigma = Real(3) / 2;
    j.rho = 0;
    std::array<Real, 8> f{};  // cubic's jet padded with zeros
    const auto f4 = elementary_f_jet(c, tau);
    for (int k = 0; k < 4; ++k) f[static_cast<size_t>(k)] = f4[static_cast<size_t>(k)];
    for (int k = 0; k < 6; ++k)
        j.u[static_cast<size_t>(k)] = 3 * f[static_cast<size_t>(k + 1)];
    for (int k = 0; k < 5; ++k)
        j.v[static_cast<size_t>(k)] =
            ((k + 1) * f[static_cast<size_t>(k)] + tau * f[static_cast<size_t>(k + 1)]) / 2 +
            3 * f[static_cast<size_t>(k + 2)] / 2;
    return j;
}

// ---------------------------------------------------------------------------
// Spectral structure at spectral argument zero

// Eigenvalues of minus the generator L(0) on the elementary pair, plus rank
// probes of the shifted matrix L(0) + shift*I (shift 1/2 in the plus case,
// 1/6 in the minus case, where the shifted matrix drops to rank one).
struct SpectralReport {
    std::array<Complex, 3> eigenvalues;  // of -L(0)
    Real shift;
    Real rank_defect;  // largest relative 2x2 minor of the shifted matrix
    long rank;         // pivot count at relative threshold 1e-10
};

inline SpectralReport L0_structure(ElementaryCase c, const Real& tau) {
    const LaxJet j = elementary_jet(c, tau);
    const LaxPolys p = lax_polys(j);
    const Matrix<Real>& L0 = p.L[0];
    Matrix<Complex> minus_L0(3, 3);
    for (long i = 0; i < 3; ++i)
        for (long k = 0; k < 3; ++k) minus_L0(i, k) = Complex(-L0(i, k));
    SpectralReport rep;
    rep.eigenvalues = numerics::eigenvalues_3x3(minus_L0);
    rep.shift = c == ElementaryCase::plus ? Real(1) / 2 : Real(1) / 6;
    Matrix<Real> shifted = L0 + rep.shift * Matrix<Real>::identity(3);
    rep.rank_defect = numerics::rank_one_defect(shifted);
    rep.rank = numerics::numerical_rank(shifted, Real("1e-10"));
    return rep;
}

// ---------------------------------------------------------------------------
// Residual scans

// One grid-scan summary per residual evaluator; feeds the JSON reports.
struct ResidualReport {
    std::string equation_id;
    Real max_abs_residual{0};
    std::string grid;
};

// Runs every residual evaluator on the elementary pair over an equally spaced
// tau-grid and reports per-equation maxima.
inline std::vector<ResidualReport> elementary_residual_scan(ElementaryCase c,
                                                            const Real& tau_lo,
                                                            const Real& tau_hi,
                                                            long n_points) {
    if (n_points < 1)
        throw std::invalid_argument("elementary_residual_scan: need n_points >= 1");
    if (!(tau_hi >= tau_lo))
        throw std::invalid_argument("elementary_residual_scan: need tau_hi >= tau_lo");
    const Real alpha = elementary_alpha(c);
    std::vector<ResidualReport> reports = {
        {"similarity-coupled-u", Real(0), ""},  {"similarity-coupled-v", Real(0), ""},
        {"similarity-single", Real(0), ""},     {"first-integral-1", Real(0), ""},
        {"first-integral-2", Real(0), ""},      {"chazy-third-order", Real(0), ""},
        {"chazy-second-order", Real(0), ""},    {"zero-curvature-sigma-flow", Real(0), ""},
        {"zero-curvature-rho-flow", Real(0), ""}};
    const std::string grid = "tau in [" + numerics::fmt(tau_lo) + ", " +
                             numerics::fmt(tau_hi) + "], " +
                             std::to_string(n_points) + " points";
    for (auto& r : reports) r.grid = grid;
    auto bump = [&](size_t i, const Real& val) {
        reports[i].max_abs_residual = (std::max)(reports[i].max_abs_residual, abs(val));
    };
    for (long i = 0; i < n_points; ++i) {
        const Real tau =
            n_points == 1 ? tau_lo
                          : tau_lo + (tau_hi - tau_lo) * i / (n_points - 1);
        const LaxJet jet = elementary_jet(c, tau);
        const SimilarityResiduals sim = residual_similarity(jet);
        bump(0, sim.r1);
        bump(1, sim.r2);
        bump(2, sim.single());
        const FirstIntegralValues fi = first_integrals(jet, tau, alpha);
        bump(3, fi.I1_residual);
        bump(4, fi.I2_residual);
        const ChazyResiduals ch = residual_chazy(elementary_f_jet(c, tau), tau, alpha);
        bump(5, ch.third_order);
        bump(6, ch.second_order);
        const HierarchyResiduals hr = residual_hierarchy(jet);
        bump(7, hr.zc_sigma);
        bump(8, hr.zc_rho);
    }
    return reports;
}

}  // namespace pearceylab::integrable
