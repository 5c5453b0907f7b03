#pragma once
// Double-exponential (tanh-sinh / exp-sinh) quadrature engines.  One trapezoid
// refinement driver serves three wrappers: the half-line integrator behind all
// moment integrals, oriented contour-ray integration for the Pearcey and Airy
// integrals, and a finite-interval rule used by the equilibrium module.

#include <algorithm>
#include <functional>
#include <utility>

#include "scalar.hpp"

namespace pearceylab::numerics {

template <class T>
struct QuadResult {
    T value{};
    Real err{0};
    bool converged = false;
    int levels = 0;
    Real effective_target{0};  // tolerance actually enforced (abs vs rel * |I|)
};

namespace detail {

// Trapezoid sums of g over [t_lo, t_hi] with halving steps.  Summation is
// strictly left-to-right at every level, so results are bit-reproducible for
// fixed inputs regardless of the caller's environment.
template <class T, class G>
QuadResult<T> trapezoid_refine(G&& g, const Real& t_lo, const Real& t_hi,
                               const PrecisionPolicy& pol) {
    QuadResult<T> res;
    const Real h0 = Real(1) / 2;
    T prev{};
    for (int level = 0; level <= pol.max_refinements; ++level) {
        const Real h = ldexp(h0, -level);
        const long n = ceil((t_hi - t_lo) / h).template convert_to<long>();
        T sum{};
        for (long k = 0; k <= n; ++k) {
            Real t = t_lo + h * k;
            if (t > t_hi) t = t_hi;
            T term = g(t);
            sum += (k == 0 || k == n) ? term / 2 : term;
        }
        sum *= h;
        res.value = sum;
        res.levels = level + 1;
        if (level > 0) {
            res.err = abs(sum - prev);
            res.effective_target = (std::max)(pol.target_abs_err,
                                              Real(pol.target_rel_err) * abs(sum));
            if (res.err <= res.effective_target) {
                res.converged = true;
                return res;
            }
        }
        prev = sum;
    }
    return res;  // not converged; best estimate + last gap as error
}

// Extends [lo, hi] outward until |g| stays below cutoff for two consecutive
// probes (the truncation rule: |log integrand| >= log(1/target) + margin).
// Bounds are always written back, clamped to +-cap; the return value reports
// whether both tails actually decayed before the cap was hit.
template <class G>
bool find_support(G&& absg, Real& lo, Real& hi, const Real& cutoff, const Real& cap) {
    const Real step = Real(1) / 2;
    bool decayed = true;
    for (int side = 0; side < 2; ++side) {
        const Real dir = side == 0 ? step : -step;
        Real t = side == 0 ? hi : lo;
        int below = 0;
        while (below < 2 && abs(t) <= cap) {
            below = absg(t) < cutoff ? below + 1 : 0;
            t += dir;
        }
        if (below < 2) decayed = false;
        (side == 0 ? hi : lo) = side == 0 ? (std::min)(t, cap) : (std::max)(t, -cap);
    }
    return decayed;
}

}  // namespace detail

// integral over (0, inf) of f, where f is analytic on the open half-line and
// decays super-exponentially beyond decay_scale; an endpoint behaviour x^alpha
// with alpha > -1 is absorbed by the exp-sinh substitution x = s * e^(sinh t).
// T is Real or Complex.  The working precision is max(pol.bits, ambient);
// escalation on non-convergence doubles it once (global precision switch --
// single-threaded callers only).
template <class T, class F>
QuadResult<T> integrate_halfline_t(F&& f, const Real& decay_scale,
                                   const PrecisionPolicy& pol) {
    auto attempt = [&]() -> QuadResult<T> {
        const Real s = decay_scale > 0 ? decay_scale : Real(1);
        auto term = [&](const Real& t) -> T {
            const Real sh = sinh(t);
            const Real x = s * exp(sh);
            return f(x) * (x * cosh(t));
        };
        const Real cutoff = pol.target_abs_err * exp(Real(-10));
        Real lo(-4), hi(4);
        auto absterm = [&](const Real& t) { return abs(term(t)); };
        if (!detail::find_support(absterm, lo, hi, cutoff, Real(8)))
            return QuadResult<T>{};  // tail does not decay: flagged failure
        return detail::trapezoid_refine<T>(term, lo, hi, pol);
    };
    const unsigned eff = (std::max)(pol.bits, current_bits());
    {
        ScopedPrecision work(eff);
        QuadResult<T> r = attempt();
        if (r.converged) return r;
    }
    ScopedPrecision deep(eff * 2);
    return attempt();
}

inline QuadResult<Real> integrate_halfline(const std::function<Real(const Real&)>& f,
                                           const Real& decay_scale,
                                           const PrecisionPolicy& pol) {
    return integrate_halfline_t<Real>(f, decay_scale, pol);
}

// One oriented ray of a contour: arg in (-pi, pi], traversed toward or away
// from the origin, with a truncation/decay scale set by the integrand.
struct ContourRay {
    Real angle{0};
    bool toward_origin = false;
    Real truncation{1};
};

// Oriented line integral of a complex integrand along the ray.  The rotation
// s = e^(i angle) u reduces it to the half-line engine; orientation flips the
// sign.  Decay along the ray (after rotation) is the caller's precondition.
template <class F>
QuadResult<Complex> integrate_ray(F&& f, const ContourRay& ray,
                                  const PrecisionPolicy& pol) {
    // The rotation factor must carry the full working precision, not the
    // ambient default, or it caps the accuracy of the rotated result.
    ScopedPrecision work((std::max)(pol.bits, current_bits()));
    const Complex dir = exp(Complex(Real(0), ray.angle));
    auto g = [&](const Real& u) -> Complex { return f(Complex(dir * u)); };
    QuadResult<Complex> r = integrate_halfline_t<Complex>(g, ray.truncation, pol);
    r.value *= dir;
    if (ray.toward_origin) r.value = -r.value;
    return r;
}

// integral over (a, b) via tanh-sinh: x = mid + half * tanh((pi/2) sinh t).
// The abscissa is produced as a stable distance from the nearer endpoint
// (1 -+ tanh u in terms of e^(-2|u|)), so integrable endpoint singularities
// see accurate small x - a / b - x instead of cancellation noise.
template <class T, class F>
QuadResult<T> integrate_finite_t(F&& f, const Real& a, const Real& b,
                                 const PrecisionPolicy& pol) {
    auto attempt = [&]() -> QuadResult<T> {
        const Real half = (b - a) / 2;
        const Real piq = pi_r() / 2;
        auto term = [&](const Real& t) -> T {
            const Real u = piq * sinh(t);
            const Real e2 = exp(-2 * abs(u));
            const Real dist = half * 2 * e2 / (1 + e2);  // to the nearer endpoint
            const Real x = u <= 0 ? a + dist : b - dist;
            const Real sech = 2 * exp(-abs(u)) / (1 + e2);
            return f(x) * (half * piq * cosh(t) * sech * sech);
        };
        const Real cutoff = pol.target_abs_err * exp(Real(-10));
        Real lo(-3), hi(3);
        auto absterm = [&](const Real& t) { return abs(term(t)); };
        // Geometry is bounded here, so a capped scan is fine: beyond the cap
        // the weight is already far below any realistic target.  (At extreme t
        // the abscissa can round onto an endpoint; integrands must be finite
        // there, which every density/trace integrand in this project is.)
        detail::find_support(absterm, lo, hi, cutoff, Real(6));
        return detail::trapezoid_refine<T>(term, lo, hi, pol);
    };
    const unsigned eff = (std::max)(pol.bits, current_bits());
    {
        ScopedPrecision work(eff);
        QuadResult<T> r = attempt();
        if (r.converged) return r;
    }
    ScopedPrecision deep(eff * 2);
    return attempt();
}

inline QuadResult<Real> integrate_finite(const std::function<Real(const Real&)>& f,
                                         const Real& a, const Real& b,
                                         const PrecisionPolicy& pol) {
    return integrate_finite_t<Real>(f, a, b, pol);
}

}  // namespace pearceylab::numerics
