#pragma once
// Model parameters, weight functions, and the critical-curve parametrizations
// of the (t, a) plane: the dashed curve t = 6c^2 - 1/c^2, a = -2c^3 + 1/c, its
// tau-perturbed Pearcey form, the multi-critical n-dependent c, and inversion
// of the quartic identity 10c^4 - 2tc^2 - ac = 1.

#include <stdexcept>

#include "scalar.hpp"

namespace pearceylab::model {

using numerics::Real;

struct ModelParams {
    long n = 1;        // half matrix dimension
    Real alpha{0};     // |x|^alpha singularity strength, > -1
    Real t{0};
    Real a{0};
    Real gamma{1};     // weighting of the negative half-line, in [-1, 1]

    void validate() const {
        if (n < 1) throw std::domain_error("ModelParams: n must be >= 1");
        if (!(alpha > -1)) throw std::domain_error("ModelParams: alpha must be > -1");
        if (!(gamma >= -1 && gamma <= 1))
            throw std::domain_error("ModelParams: gamma must lie in [-1, 1]");
    }
};

enum class Regime { pearcey, multicritical };

struct CriticalPoint {
    Real c;
    Real tau{0};
    Real sigma{0};  // multicritical only
    Regime regime = Regime::pearcey;
};

// Quartic potential in the convention the asymptotic formulas use:
// V(x) = x^4/2 - t x^2 - 2 a x, weight |x|^alpha e^{-n V}.
inline Real potential_V(const Real& x, const Real& t, const Real& a) {
    const Real x2 = x * x;
    return x2 * x2 / 2 - t * x2 - 2 * a * x;
}

// Equivalent intro-normalization potential: e^{-2n(V_intro - a x)} with
// V_intro = x^4/4 - t x^2/2; the exponents agree identically.
inline Real potential_intro(const Real& x, const Real& t) {
    const Real x2 = x * x;
    return x2 * x2 / 4 - t * x2 / 2;
}

struct WeightValue {
    Real value{0};
    bool underflowed = false;  // nonzero in exact arithmetic but rounded to 0
};

inline WeightValue weight_W(const Real& x, const ModelParams& p) {
    WeightValue w;
    const Real expo = -p.n * potential_V(x, p.t, p.a);
    if (x == 0) {
        // |0|^alpha: 1 for alpha = 0, 0 for alpha > 0 (alpha < 0 diverges and
        // never reaches here through the integrators).
        w.value = p.alpha == 0 ? exp(expo) : Real(0);
        return w;
    }
    w.value = pow(abs(x), p.alpha) * exp(expo);
    w.underflowed = (w.value == 0);
    return w;
}

inline WeightValue weight_Wodd(const Real& x, const ModelParams& p) {
    WeightValue w = weight_W(x, p);
    w.value *= abs(x);
    return w;
}

// The indicator-with-gamma factor of the bilinear pairing: 1 on x >= 0,
// gamma on x < 0.
inline Real gamma_step(const Real& x, const Real& gamma) {
    return x >= 0 ? Real(1) : gamma;
}

inline Real upper_c_bound() { return pow(Real(3), -Real(1) / 4); }

struct CurvePoint {
    Real t;
    Real a;
};

// Dashed curve of the phase diagram: density vanishes like |x|^{1/3} along
// it, like |x|^{5/3} at the endpoint c = 3^{-1/4} (the multi-critical point,
// (t, a) = (sqrt 3, 3^{-3/4})).
inline CurvePoint dashed_curve(const Real& c) {
    if (!(c > 0) || c > upper_c_bound() * (1 + ldexp(Real(1), -48)))
        throw std::domain_error("dashed_curve: c must lie in (0, 3^{-1/4}]");
    return {6 * c * c - 1 / (c * c), -2 * c * c * c + 1 / c};
}

// Pearcey-regime parameters: the dashed curve plus a tau-perturbation of
// size sqrt((1 - 3c^4)/(2n)).
inline CurvePoint pearcey_params(const Real& c, const Real& tau, long n) {
    if (!(c > 0) || !(c < upper_c_bound()))
        throw std::domain_error("pearcey_params: c must lie in (0, 3^{-1/4})");
    if (n < 1) throw std::domain_error("pearcey_params: n must be >= 1");
    const Real c2 = c * c;
    const Real dev = sqrt((1 - 3 * c2 * c2) / (2 * n)) * tau;
    return {6 * c2 - 1 / c2 - 2 / (3 * c2) * dev, -2 * c2 * c + 1 / c + 4 / (3 * c) * dev};
}

struct MulticritPoint {
    Real t;
    Real a;
    Real c;
};

// Multi-critical parameters: c approaches 3^{-1/4} like (1 - sigma/sqrt n)^{1/4}
// and the tau-perturbation shrinks like n^{-3/4}.
inline MulticritPoint multicrit_params(const Real& sigma, const Real& tau, long n) {
    if (n < 1) throw std::domain_error("multicrit_params: n must be >= 1");
    const Real base = 1 - sigma / sqrt(Real(n));
    if (!(base > 0))
        throw std::domain_error("multicrit_params: 1 - sigma/sqrt(n) must be positive");
    const Real c = upper_c_bound() * pow(base, Real(1) / 4);
    const Real c2 = c * c;
    const Real dev = pow(Real(n), -Real(3) / 4) * tau;
    return {6 * c2 - 1 / c2 - dev / (3 * c2), -2 * c2 * c + 1 / c + 2 * dev / (3 * c), c};
}

// Residual of the quartic identity both regimes satisfy.
inline Real c_identity_residual(const Real& c, const Real& t, const Real& a) {
    const Real c2 = c * c;
    return 10 * c2 * c2 - 2 * t * c2 - a * c - 1;
}

// Recovers c from (t, a): smallest root of 10c^4 - 2tc^2 - ac - 1 in (0, 1],
// located by a 10^-3 bracket scan and polished by Newton.  The physical
// branch for on-curve parameters lies in (0, 3^{-1/4}] and is unique there.
inline Real solve_c(const Real& t, const Real& a) {
    if (!(a > 0)) throw std::domain_error("solve_c: requires a > 0");
    auto f = [&](const Real& c) { return c_identity_residual(c, t, a); };
    const Real step("1e-3");
    Real lo(0), hi;
    Real flo = -1;  // f(0) = -1
    bool bracketed = false;
    for (hi = step; hi <= Real(1) + step / 2; hi += step) {
        const Real fhi = f(hi);
        if ((flo < 0 && fhi >= 0) || (flo > 0 && fhi <= 0)) {
            bracketed = true;
            break;
        }
        lo = hi;
        flo = fhi;
    }
    if (!bracketed)
        throw std::domain_error("solve_c: no root in (0, 1]; parameters outside the "
                                "supported critical region");
    Real c = (lo + hi) / 2;
    for (int it = 0; it < 80; ++it) {
        const Real fc = f(c);
        const Real dfc = 40 * c * c * c - 4 * t * c - a;
        if (dfc == 0) break;
        const Real delta = fc / dfc;
        c -= delta;
        if (c < lo) c = lo;  // keep Newton inside the bracket
        if (c > hi) c = hi;
        if (abs(delta) < Real("1e-40") * (std::max)(Real(1), abs(c))) break;
    }
    if (abs(f(c)) > Real("1e-14"))
        throw std::domain_error("solve_c: Newton failed to reach residual 1e-14");
    return c;
}

}  // namespace pearceylab::model
