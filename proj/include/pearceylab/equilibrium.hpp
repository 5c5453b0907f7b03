#pragma once
// Equilibrium-measure machinery for the quartic model: the rational-square
// conformal map J_c(s) = c (s+1)^{3/2} s^{-1/2}, its outer and inner
// inverses, the spectral data N/U, the resolvent-type functions G and
// Gtilde, and the density psi on the support (0, b).
//
// Geometry.  J_c maps the exterior of a bounded loop (through -1 and 1/2)
// univalently onto the plane minus [0, b], and the loop's interior minus
// [-1, 0] onto the right half-plane minus [0, b]; b is the critical value
// J_c(1/2) = 3^{3/2} c / 2.  Conjugation symmetry gives the branch test the
// inverter relies on: for Im z != 0, the outer preimage has Im s of the same
// sign as Im z and the inner preimage the opposite sign.
//
// Boundary values.  psi(x) = -Im G(x + i eps)/pi with the base offset
// eps = 1e-8 * b, shrunk to min(x, b-x)/8 near the endpoints so the Taylor
// expansion in eps stays inside the disk of analyticity, and Richardson-
// extrapolated to eps -> 0 through four halvings.
//
// The two printed forms of N_outside, and the closed form of G, agree only
// on parameter triples (c, t, a) satisfying 10c^4 - 2tc^2 - ac = 1; both are
// kept so tests can cross them (and detect off-constraint inputs).

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadrature.hpp"
#include "scalar.hpp"

namespace pearceylab::equilibrium {

using numerics::Complex;
using numerics::PrecisionPolicy;
using numerics::QuadResult;
using numerics::Real;
using numerics::ScopedPrecision;

// Right endpoint of the support: the critical value J_c(1/2).
inline Real endpoint_b(const Real& c) { return 3 * sqrt(Real(3)) * c / 2; }

// c (s+1)^{3/2} s^{-1/2} with principal square roots.  The two factor cuts
// cancel on (-inf, -1), leaving a single branch cut on [-1, 0]; s = -1 is a
// removable endpoint (value 0), s = 0 a pole.
inline Complex map_J(const Complex& s, const Real& c) {
    if (s.imag() == 0 && s.real() >= -1 && s.real() <= 0) {
        if (s.real() == -1) return Complex(0);
        throw std::domain_error("map_J: s on the branch cut [-1, 0]");
    }
    const Complex w = s + 1;
    return c * w * sqrt(w) / sqrt(s);
}

inline Complex map_J_prime(const Complex& s, const Real& c) {
    const Complex w = s + 1;
    return c / 2 * sqrt(w) * (2 * s - 1) / (s * sqrt(s));
}

inline Complex map_J_second(const Complex& s, const Real& c) {
    const Complex w = s + 1;
    const Complex rs = sqrt(s);
    const Complex rw = sqrt(w);
    return c / 2 *
           ((2 * s - 1) / (2 * rw) - Real(3) / 2 * rw * (2 * s - 1) / s + 2 * rw) /
           (s * rs);
}

enum class Branch { outer, inner };

namespace detail {

inline Complex omega_cbrt() { return Complex(Real(-1) / 2, sqrt(Real(3)) / 2); }

// Principal (z/c)^{2/3}.
inline Complex frac_pow23(const Complex& z, const Real& c) {
    const Complex zc = z / c;
    return exp(Real(2) / 3 * log(zc));
}

// Four-term expansion of the inverse at z = 0.  The cube-root direction
// depends on the branch and on the side of the real axis.
inline Complex inverse_seed_series(const Complex& z, const Real& c, Branch branch) {
    const Complex om = omega_cbrt();
    const Complex r = frac_pow23(z, c);
    const bool up = z.imag() >= 0;
    const Complex rot = (branch == Branch::outer) == up ? om * om : om;
    const Complex w = rot * r;
    const Complex zc2 = (z / c) * (z / c);
    return -1 - w * (1 + w / 3 - zc2 / 81);
}

// One inverse-map refinement pass: Newton with a second-order correction so
// the vanishing of J' at s = 1/2 (the support endpoint preimage) does not
// stall the iteration.  Returns true when the residual reaches the target.
inline bool polish_root(Complex& s, const Complex& z, const Real& c,
                        const Real& target, int max_iter) {
    Real best = abs(map_J(s, c) - z);
    Complex best_s = s;
    for (int it = 0; it < max_iter; ++it) {
        const Complex F = map_J(s, c) - z;
        const Real resid = abs(F);
        if (resid < best) {
            best = resid;
            best_s = s;
        }
        if (resid <= target) return true;
        const Complex d1 = map_J_prime(s, c);
        const Complex d2 = map_J_second(s, c);
        const Complex disc = sqrt(d1 * d1 - 2 * d2 * F);
        const Complex den =
            abs(d1 + disc) >= abs(d1 - disc) ? d1 + disc : d1 - disc;
        if (abs(den) == 0) break;
        const Complex step = -2 * F / den;
        if (abs(step) > 10 * (1 + abs(s))) break;  // escaped the basin
        s += step;
        if (s.imag() == 0 && s.real() >= -1 && s.real() <= 0)
            s += Complex(0, ldexp(abs(s.real()) + 1, -20));  // nudge off the cut
    }
    s = best_s;
    return best <= target;
}

// Branch membership via the half-plane rule (see header comment).  Real
// targets have real preimages: outside [-1, 1/2] for the outer branch,
// inside (0, 1/2) for the inner one.  Within a hair of the two critical
// preimages s = 1/2 and s = -1 the outer and inner roots coincide to all
// useful digits (their separation is ~sqrt(|z - b|) resp. ~|z/c|^{2/3}),
// so either is accepted there rather than trusting an unresolvable sign.
inline bool branch_consistent(const Complex& s, const Complex& z, Branch branch) {
    if (abs(2 * s - 1) < Real("1e-18") || abs(s + 1) < Real("1e-18")) return true;
    const Real real_slack =
        ldexp(Real(1 + abs(s)), -long(numerics::current_bits()) / 2);
    if (abs(s.imag()) <= real_slack) {
        if (z.imag() != 0) return false;
        return branch == Branch::outer
                   ? (s.real() <= -1 + real_slack || s.real() >= Real(1) / 2 - real_slack)
                   : (s.real() > 0 && s.real() < Real(1) / 2);
    }
    if (z.imag() == 0) return false;
    const bool same_side = (z.imag() > 0) == (s.imag() > 0);
    return branch == Branch::outer ? same_side : !same_side;
}

}  // namespace detail

// Inverse of the conformal map.  branch == outer inverts on the exterior
// domain (z anywhere off [0, b]); branch == inner on the interior one
// (z in the open right half-plane, off [0, b]).  Newton is seeded by the
// series near 0, by z/c far out (outer), or by the rotated series (inner);
// in between, the root is continued along a constant-argument radial path
// from a converged anchor, bisecting any step whose refinement fails.  An
// optional hint warm-starts the iteration (used when sweeping grids).
inline Complex invert_J(const Complex& z, const Real& c, Branch branch,
                        const Complex* hint = nullptr,
                        const PrecisionPolicy& pol = {}) {
    // Domain verdicts are taken at the caller's precision, before the work
    // scope opens: the endpoint comparison z.real() <= b must see the same
    // rounding of b the caller can compute.
    if (z.imag() == 0 && z.real() >= 0 && z.real() <= endpoint_b(c))
        throw std::domain_error("invert_J: z on the support [0, b]");
    if (branch == Branch::inner && !(z.real() > 0))
        throw std::domain_error("invert_J: inner branch needs Re z > 0");
    ScopedPrecision work((std::max)(pol.bits, numerics::current_bits()));
    const Real b = endpoint_b(c);

    const Real scale = (std::max)(Real(1), abs(z));
    const Real target_fine =
        scale * ldexp(Real(1), -long(numerics::current_bits()) + 8);
    const Real target_ok = Real("1e-13") * scale;

    // J(s)^2 = z^2 has a third solution with J = -z; the relative form of
    // this filter keeps it out even when |z| itself is tiny.
    auto right_half = [&](const Complex& s) {
        const Complex Jv = map_J(s, c);
        return abs(Jv - z) < abs(Jv + z);
    };
    auto polished = [&](Complex s, int iters) -> std::optional<Complex> {
        const bool fine = detail::polish_root(s, z, c, target_fine, iters);
        if ((fine || abs(map_J(s, c) - z) <= target_ok) && right_half(s) &&
            detail::branch_consistent(s, z, branch))
            return s;
        return std::nullopt;
    };

    if (hint != nullptr)
        if (auto s = polished(*hint, 24)) return *s;

    const Real r_series = Real(3) / 10 * c;
    const Real az = abs(z);
    if (az <= r_series)
        if (auto s = polished(detail::inverse_seed_series(z, c, branch), 60))
            return *s;
    if (branch == Branch::outer && az >= 8 * b)
        if (auto s = polished(z / c, 60)) return *s;

    // Continuation: anchor where the direct seed is reliable, then walk the
    // radius at fixed argument.  A real inner target (z > b) is reached by a
    // quarter arc down from arg pi/4 after the radial leg, so the path never
    // touches the jump locus [0, b].
    const bool from_far = branch == Branch::outer && az > r_series;
    const Real r_anchor = from_far ? 8 * b : Real(1) / 4 * c;
    const bool inner_real = branch == Branch::inner && z.imag() == 0;
    const Complex dir =
        inner_real ? exp(Complex(0, numerics::pi_r() / 4)) : Complex(z / az);
    Complex cur_z = r_anchor * dir;
    Complex s;
    auto step_ok = [&](const Complex& root, const Complex& at) {
        const Complex Jv = map_J(root, c);
        return abs(Jv - at) < abs(Jv + at) &&
               detail::branch_consistent(root, at, branch);
    };
    {
        const Complex seed = from_far ? cur_z / c
                                      : detail::inverse_seed_series(cur_z, c, branch);
        bool ok = detail::polish_root(s = seed, cur_z, c, target_fine, 60);
        if (!ok || !step_ok(s, cur_z))
            throw std::runtime_error("invert_J: anchor inversion failed");
    }
    auto walk_to = [&](const Complex& goal) {
        int splits = 0;
        Complex from = cur_z;
        Complex to = goal;
        while (true) {
            Complex trial = s;
            if (detail::polish_root(trial, to, c, target_fine, 40) &&
                step_ok(trial, to)) {
                s = trial;
                cur_z = to;
                from = to;
                if (to == goal) return;
                to = goal;
            } else {
                if (++splits > 60)
                    throw std::runtime_error("invert_J: continuation failed");
                to = from + (to - from) / 2;
            }
        }
    };
    const Real ratio = from_far ? Real(5) / 7 : Real(7) / 5;
    for (Real r = r_anchor;
         from_far ? r * ratio > az : r * ratio < az; ) {
        r *= ratio;
        walk_to(r * dir);
    }
    walk_to(az * dir);
    if (inner_real) {
        // quarter arc: halve the remaining angle until the axis is reached
        Real ang = numerics::pi_r() / 4;
        while (ang > 0) {
            ang /= 2;
            walk_to(az * exp(Complex(0, ang)));
            if (ang < ldexp(Real(1), -40)) break;
        }
        walk_to(Complex(az));
    }
    return s;
}

// V'(J_c(s)) J_c(s): the potential-weighted image of the map.
inline Complex spectral_U(const Complex& s, const Real& c, const Real& t,
                          const Real& a) {
    const Complex J = map_J(s, c);
    const Complex J2 = J * J;
    return 2 * J2 * J2 - 2 * t * J2 - 2 * a * J;
}

// Exterior spectral datum, first printed form (Cauchy-transform route).
inline Complex N_outside(const Complex& s, const Real& c, const Real& t,
                         const Real& a) {
    const Real c2 = c * c;
    const Complex w = s + 1;
    return 2 * c2 * c2 * (6 * s + 1) / (s * s) - 2 * t * c2 / s +
           2 * a * c * (Real(3) / 2 + s - w * sqrt(w) / sqrt(s)) + 1;
}

// Same quantity rearranged through the quartic constraint
// 10c^4 - 2tc^2 - ac = 1; differs from N_outside off the constraint.
inline Complex N_outside_alt(const Complex& s, const Real& c, const Real& /*t*/,
                             const Real& a) {
    const Real c2 = c * c;
    const Complex w = s + 1;
    return -2 * a * map_J(s, c) + 2 * c2 * c2 * w / (s * s) +
           a * c * (2 * s + 1) * w / s + w / s;
}

inline Complex N_inside(const Complex& s, const Real& c, const Real& t,
                        const Real& a) {
    return spectral_U(s, c, t, a) - N_outside(s, c, t, a);
}

// Resolvent-type function on the exterior: G(z) = N_outside(I_outer(z))/z.
// Behaves like 1/z at infinity, so its jump across (0, b) carries unit mass.
inline Complex stieltjes_G(const Complex& z, const Real& c, const Real& t,
                           const Real& a, const Complex* hint = nullptr,
                           const PrecisionPolicy& pol = {}) {
    return N_outside(invert_J(z, c, Branch::outer, hint, pol), c, t, a) / z;
}

// Closed form of the same function (valid on the quartic constraint).
inline Complex stieltjes_G_closed(const Complex& z, const Real& c,
                                  const Real& /*t*/, const Real& a,
                                  const PrecisionPolicy& pol = {}) {
    const Complex s = invert_J(z, c, Branch::outer, nullptr, pol);
    const Complex w = s + 1;
    return -2 * a +
           z / (w * w) * (2 * c * c / s + a / c * (2 * s + 1) + 1 / (c * c));
}

// Companion function on the right half-plane: N_inside(I_inner(z))/z.
inline Complex stieltjes_Gtilde(const Complex& z, const Real& c, const Real& t,
                                const Real& a, const Complex* hint = nullptr,
                                const PrecisionPolicy& pol = {}) {
    return N_inside(invert_J(z, c, Branch::inner, hint, pol), c, t, a) / z;
}

namespace detail {

// Warm-start slots for the repeated inversions of a density sweep: one per
// Richardson level, and a second bank for the lower-side inner evaluations.
struct InversionHints {
    std::array<std::optional<Complex>, 8> slot;
};

inline Real epsilon_base(const Real& x, const Real& b) {
    return (std::min)(b * Real("1e-8"), (std::min)(x, b - x) / 8);
}

template <class F>
Real richardson4(F&& value_at) {
    std::array<Real, 4> row{};
    for (int k = 0; k < 4; ++k) {
        row[k] = value_at(k);
        Real pow2 = 1;
        for (int j = 1; j <= k; ++j) {
            pow2 *= 2;
            row[k - j] = (pow2 * row[k - j + 1] - row[k - j]) / (pow2 - 1);
        }
    }
    return row[0];
}

inline Real density_core(const Real& x, const Real& c, const Real& t,
                         const Real& a, InversionHints* hints, bool inner_route,
                         const PrecisionPolicy& pol) {
    const Real b = endpoint_b(c);
    if (!(x > 0) || !(x < b))
        throw std::domain_error("density_psi: x must lie in (0, b)");
    ScopedPrecision work((std::max)(pol.bits, numerics::current_bits()));
    const Real eps0 = epsilon_base(x, b);
    InversionHints local;
    InversionHints* h = hints != nullptr ? hints : &local;
    auto inv = [&](const Complex& z, Branch br, int slot) {
        const Complex* hp =
            h->slot[slot].has_value() ? &*h->slot[slot] : nullptr;
        const Complex s = invert_J(z, c, br, hp, pol);
        h->slot[slot] = s;
        return s;
    };
    const Real pi = numerics::pi_r();
    auto level = [&](int k) -> Real {
        const Real ek = ldexp(eps0, -k);
        if (!inner_route) {
            const Complex z(x, ek);
            const Complex G = N_outside(inv(z, Branch::outer, k), c, t, a) / z;
            return -G.imag() / pi;
        }
        const Complex zp(x, ek);
        const Complex zm(x, -ek);
        const Complex up = N_inside(inv(zp, Branch::inner, k), c, t, a) / zp;
        const Complex dn = N_inside(inv(zm, Branch::inner, k + 4), c, t, a) / zm;
        const Complex diff = (dn - up) / Complex(0, 2 * pi);
        return diff.real();
    };
    return richardson4(level);
}

}  // namespace detail

// Density of the limiting measure at x in (0, b), from the boundary values
// of G just above the support.
inline Real density_psi(const Real& x, const Real& c, const Real& t,
                        const Real& a, const PrecisionPolicy& pol = {}) {
    return detail::density_core(x, c, t, a, nullptr, false, pol);
}

// Same density through the interior route: the two-sided jump of Gtilde.
// Agreement with density_psi is a cross-check of the whole construction.
inline Real density_psi_inner_route(const Real& x, const Real& c, const Real& t,
                                    const Real& a,
                                    const PrecisionPolicy& pol = {}) {
    return detail::density_core(x, c, t, a, nullptr, true, pol);
}

// The three fractional coefficients of psi at the origin:
// psi(x) = coef_m13 (x/c)^{-1/3} + coef_p13 (x/c)^{1/3} + coef_p53 (x/c)^{5/3}
//          + O(x^{7/3}).
// t enters only through the constraint, not the displayed coefficients.
struct SeriesCoeffs {
    Real coef_m13;
    Real coef_p13;
    Real coef_p53;
};

inline SeriesCoeffs psi_series0(const Real& c, [[maybe_unused]] const Real& t,
                                const Real& a) {
    const Real c3 = c * c * c;
    const Real pref = sqrt(Real(3)) / (2 * numerics::pi_r());
    return {pref * (-2 * c3 - a + 1 / c),
            -pref * (10 * c3 - 4 * a - 2 / c) / 3,
            pref * (200 * c3 - 8 * a - 10 / c) / 81};
}

inline Real psi_series_eval(const SeriesCoeffs& s, const Real& x, const Real& c) {
    if (!(x > 0)) throw std::domain_error("psi_series_eval: x must be positive");
    const Real r = pow(x / c, Real(1) / 3);
    const Real r2 = r * r;
    return s.coef_m13 / r + r * (s.coef_p13 + s.coef_p53 * r2 * r2);
}

// Fractional (z/c)^{2/3}, (z/c)^{4/3}, (z/c)^2, (z/c)^{8/3} coefficients of
// the two log-potentials and of their combination phi, per half-plane,
// excluding additive constants and the elementary parts (-2az for g;
// V(z) + 2az for gtilde).  Lower-half tables are the conjugates of the
// upper ones.  phi's entries follow their own display; tests cross them
// against g + gtilde.
struct GSeriesTable {
    std::array<Complex, 4> g_upper, g_lower;
    std::array<Complex, 4> gtilde_upper, gtilde_lower;
    std::array<Complex, 4> phi_upper, phi_lower;
};

inline GSeriesTable g_series0(const Real& c, [[maybe_unused]] const Real& t,
                              const Real& a) {
    const Real c4 = c * c * c * c;
    const Real ac = a * c;
    const Real q1 = Real(3) / 2 * (-2 * c4 - ac + 1);
    const Real q2 = Real(1) / 4 * (10 * c4 - 4 * ac - 2);
    const Real q3 = Real(1) / 6 * (-10 * c4 + ac + 1);
    const Real q4 = Real(1) / 216 * (200 * c4 - 8 * ac - 10);
    const Complex om = detail::omega_cbrt();
    const Complex om2 = om * om;
    GSeriesTable tab;
    tab.g_upper = {q1 * om2, q2 * om, Complex(q3), q4 * om2};
    tab.g_lower = {q1 * om, q2 * om2, Complex(q3), q4 * om};
    tab.gtilde_upper = {-q1 * om, -q2 * om2, Complex(-q3), -q4 * om};
    tab.gtilde_lower = {-q1 * om2, -q2 * om, Complex(-q3), -q4 * om2};
    const Complex i3 = Complex(0, sqrt(Real(3)));
    tab.phi_upper = {i3 * -q1, i3 * q2, Complex(0), i3 * -q4};
    tab.phi_lower = {i3 * q1, i3 * -q2, Complex(0), i3 * q4};
    return tab;
}

struct PsiSample {
    Real x;
    Real psi;
};

struct EquilibriumProfile {
    Real c;
    Real t;
    Real a;
    Real b;
    std::vector<PsiSample> psi_samples;
    Real mass;
    SeriesCoeffs series0;
};

// Total integral of psi over (0, b).  The support endpoints see algebraic
// singularities (x^{+-1/3} at 0, (b-x)^{1/2} at b), which the double-
// exponential rule absorbs; abscissas that round onto an endpoint are
// treated as zero contribution, as their true weight is far below any
// target used here.
inline QuadResult<Real> mass_integral(const Real& c, const Real& t,
                                      const Real& a,
                                      const PrecisionPolicy& pol = {}) {
    ScopedPrecision work((std::max)(pol.bits, numerics::current_bits()));
    const Real b = endpoint_b(c);
    detail::InversionHints hints;
    auto f = [&](const Real& x) -> Real {
        if (!(x > 0) || !(x < b)) return Real(0);
        return detail::density_core(x, c, t, a, &hints, false, pol);
    };
    return numerics::integrate_finite_t<Real>(f, Real(0), b, pol);
}

// Samples psi on the given abscissas (each in (0, b)), computes the mass,
// and records the origin-series coefficients.
inline EquilibriumProfile build_profile(const Real& c, const Real& t,
                                        const Real& a, std::vector<Real> xs,
                                        const PrecisionPolicy& pol = {}) {
    ScopedPrecision work((std::max)(pol.bits, numerics::current_bits()));
    EquilibriumProfile prof;
    prof.c = c;
    prof.t = t;
    prof.a = a;
    prof.b = endpoint_b(c);
    std::sort(xs.begin(), xs.end());
    detail::InversionHints hints;
    prof.psi_samples.reserve(xs.size());
    for (const Real& x : xs) {
        const Real p = detail::density_core(x, c, t, a, &hints, false, pol);
        if (isnan(p) || isinf(p))
            throw std::runtime_error("build_profile: non-finite density sample");
        prof.psi_samples.push_back({x, p});
    }
    const QuadResult<Real> m = mass_integral(c, t, a, pol);
    if (!m.converged)
        throw std::runtime_error("build_profile: mass quadrature did not converge");
    prof.mass = m.value;
    prof.series0 = psi_series0(c, t, a);
    return prof;
}

// Geometric ladder plus uniform interior points: a default sampling grid
// reaching close enough to 0 for exponent fits.
inline std::vector<Real> default_profile_grid(const Real& b) {
    std::vector<Real> xs;
    const Real lo = b * Real("1e-9");
    const Real hi = b * Real("1e-1");
    const int n_log = 33;
    for (int k = 0; k < n_log; ++k)
        xs.push_back(lo * pow(hi / lo, Real(k) / (n_log - 1)));
    const int n_lin = 24;
    for (int k = 1; k <= n_lin; ++k)
        xs.push_back(b * (Real(1) / 10 + (Real(889) / 1000) * k / n_lin));
    return xs;
}

// Least-squares slope of log psi against log x over the in-window samples.
// A sign change (or zero) of psi inside the window is an error: the fit
// would silently mix the two lobes.
inline Real exponent_fit(const EquilibriumProfile& prof, const Real& x_lo,
                         const Real& x_hi) {
    if (!(x_lo > 0) || !(x_hi > x_lo))
        throw std::invalid_argument("exponent_fit: need 0 < x_lo < x_hi");
    int sign = 0;
    long n = 0;
    Real sx{0}, sy{0}, sxx{0}, sxy{0};
    for (const PsiSample& smp : prof.psi_samples) {
        if (smp.x < x_lo || smp.x > x_hi) continue;
        if (smp.psi == 0)
            throw std::invalid_argument("exponent_fit: psi vanishes in the window");
        const int s = smp.psi > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        if (s != sign)
            throw std::invalid_argument("exponent_fit: psi changes sign in the window");
        const Real lx = log(smp.x);
        const Real ly = log(abs(smp.psi));
        ++n;
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    if (n < 2)
        throw std::invalid_argument("exponent_fit: fewer than two samples in window");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Outer-inverse boundary trace just above the support: the loop these
// points draw bounds the range of the inner inverse.
inline std::vector<Complex> trace_support_preimage(const Real& c, long n_points,
                                                   const PrecisionPolicy& pol = {}) {
    if (n_points < 1)
        throw std::invalid_argument("trace_support_preimage: need n_points >= 1");
    ScopedPrecision work((std::max)(pol.bits, numerics::current_bits()));
    const Real b = endpoint_b(c);
    const Real eps = b * Real("1e-12");
    std::vector<Complex> pts;
    pts.reserve(n_points);
    std::optional<Complex> hint;
    for (long k = 1; k <= n_points; ++k) {
        const Complex z(b * k / (n_points + 1), eps);
        const Complex s =
            invert_J(z, c, Branch::outer, hint.has_value() ? &*hint : nullptr, pol);
        hint = s;
        pts.push_back(s);
    }
    return pts;
}

}  // namespace pearceylab::equilibrium
