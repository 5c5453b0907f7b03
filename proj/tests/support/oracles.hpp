#pragma once
// Independent numerical oracles for the test suite.  Nothing here shares code
// with the library's double-exponential engine: Gauss-Legendre panels (nodes
// from Newton's method on the Legendre recurrence), an adaptive Simpson rule,
// and Richardson finite differences.  Tests compare library results against
// these routes; the oracles are deliberately simple and slow.

#include <functional>
#include <utility>
#include <vector>

#include <pearceylab/scalar.hpp>

namespace oracles {

using pearceylab::numerics::Complex;
using pearceylab::numerics::Real;

// Legendre nodes/weights on [-1, 1] at the current working precision.
inline std::pair<std::vector<Real>, std::vector<Real>> gl_nodes(int n) {
    std::vector<Real> x(static_cast<size_t>(n)), w(static_cast<size_t>(n));
    const Real pi = pearceylab::numerics::pi_r();
    for (int i = 0; i < n; ++i) {
        Real t = cos(pi * (i + Real(3) / 4) / (n + Real(1) / 2));
        Real dp(0);
        for (int it = 0; it < 80; ++it) {
            Real p0(1), p1 = t;
            for (int k = 2; k <= n; ++k) {
                Real p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1);
            Real dt = p1 / dp;
            t -= dt;
            if (abs(dt) < pearceylab::numerics::machine_eps() * 4) break;
        }
        x[static_cast<size_t>(i)] = t;
        w[static_cast<size_t>(i)] = 2 / ((1 - t * t) * dp * dp);
    }
    return {x, w};
}

template <class T, class F>
T gl_panel(F&& f, const Real& a, const Real& b, const std::vector<Real>& x,
           const std::vector<Real>& w) {
    const Real mid = (a + b) / 2, half = (b - a) / 2;
    T s{};
    for (size_t i = 0; i < x.size(); ++i) s += w[i] * f(Real(mid + half * x[i]));
    return s * half;
}

template <class T, class F>
T gl_composite(F&& f, const Real& a, const Real& b, int panels, int n) {
    auto [x, w] = gl_nodes(n);
    T s{};
    for (int k = 0; k < panels; ++k) {
        Real pa = a + (b - a) * k / panels;
        Real pb = a + (b - a) * (k + 1) / panels;
        s += gl_panel<T>(f, pa, pb, x, w);
    }
    return s;
}

// (x_min, x_max) split into dyadic octaves so endpoint behaviour x^alpha
// (alpha > -1) costs nothing: each panel stays away from 0 in relative terms.
// Truncation below x_min is the caller's responsibility.
template <class T, class F>
T gl_geometric(F&& f, const Real& x_min, const Real& x_max, int n) {
    auto [x, w] = gl_nodes(n);
    T s{};
    std::vector<std::pair<Real, Real>> panels;
    for (Real hi = x_max; hi > x_min * 2; hi /= 2) panels.emplace_back(hi / 2, hi);
    panels.emplace_back(x_min, panels.empty() ? x_max : panels.back().first);
    for (auto it = panels.rbegin(); it != panels.rend(); ++it)
        s += gl_panel<T>(f, it->first, it->second, x, w);
    return s;
}

// Same idea along a rotated ray from the origin; returns the oriented complex
// line integral of f over {r e^(i angle) : r_min < r < r_max}.
template <class F>
Complex gl_ray(F&& f, const Real& angle, const Real& r_min, const Real& r_max, int n) {
    const Complex dir = exp(Complex(Real(0), angle));
    auto g = [&](const Real& r) { return f(Complex(dir * r)); };
    return dir * gl_geometric<Complex>(g, r_min, r_max, n);
}

namespace detail {
template <class F>
Real simpson_step(F&& f, const Real& a, const Real& b, const Real& fa, const Real& fm,
                  const Real& fb, const Real& whole, const Real& tol, int depth) {
    const Real m = (a + b) / 2;
    const Real lm = (a + m) / 2, rm = (m + b) / 2;
    const Real flm = f(lm), frm = f(rm);
    const Real left = (m - a) / 6 * (fa + 4 * flm + fm);
    const Real right = (b - m) / 6 * (fm + 4 * frm + fb);
    const Real delta = left + right - whole;
    if (depth <= 0 || abs(delta) <= 15 * tol) return left + right + delta / 15;
    return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
}  // namespace detail

template <class F>
Real adaptive_simpson(F&& f, const Real& a, const Real& b, const Real& tol,
                      int max_depth = 60) {
    const Real m = (a + b) / 2;
    const Real fa = f(a), fm = f(m), fb = f(b);
    const Real whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Central differences with one Richardson sweep; h should be ~eps^(1/3) of
// the scale of interest (first derivative) for a crude check, far tighter at
// multiprecision step sizes.
template <class F>
Real central_diff1(F&& f, const Real& x, const Real& h) {
    const Real d1 = (f(x + h) - f(x - h)) / (2 * h);
    const Real d2 = (f(x + h / 2) - f(x - h / 2)) / h;
    return (4 * d2 - d1) / 3;
}

template <class F>
Real central_diff2(F&& f, const Real& x, const Real& h) {
    auto second = [&](const Real& s) { return (f(x + s) - 2 * f(x) + f(x - s)) / (s * s); };
    const Real d1 = second(h), d2 = second(h / 2);
    return (4 * d2 - d1) / 3;
}

}  // namespace oracles
