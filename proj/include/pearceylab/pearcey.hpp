#pragma once
// Pearcey-type special functions and kernels.  p and q are the entire
// solutions of the third-order ODEs p''' = tau p' + x p and q''' = tau q' - x q
// given by contour integrals:
//
//   p(x; tau) = (1/2pi) Int_R     exp(-s^4/4 - (tau/2) s^2 + i s x) ds
//   q(x; tau) = (1/2pi) Int_Sigma exp(+s^4/4 + (tau/2) s^2 + i s x) ds
//
// where Sigma is the union of the four rays arg s in {pi/4, 3pi/4, 5pi/4,
// 7pi/4}, the first and third traversed from infinity toward the origin and
// the second and fourth outward.  On every ray of Sigma the quartic term
// decays like e^(-t^4/4), which is what makes the oriented-ray engine
// applicable.  Derivatives insert (i s)^d under the integral.
//
// On top of p and q sit the classical Pearcey kernel
//   K(xi, eta; tau) = [p(xi)q''(eta) - p'(xi)q'(eta) + p''(xi)q(eta)
//                      - tau p(xi)q(eta)] / (xi - eta)
// and the two "folded" kernels in squared variables that appear as scaling
// limits on the half-line (p evaluated at sqrt(eta2), q at sqrt(xi2), with
// doubled parameter).  The kernel numerator vanishes identically on the
// diagonal -- its value W(x) = p q'' - p' q' + p'' q - tau p q has W' = 0 by
// the two ODEs and W(0) = 0 by parity -- so diagonal values use the analytic
// derivative of the numerator (see pearcey_kernel_full).

#include <algorithm>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "quadrature.hpp"
#include "scalar.hpp"

namespace pearceylab::pearcey {

using numerics::Complex;
using numerics::ContourRay;
using numerics::PrecisionPolicy;
using numerics::QuadResult;
using numerics::Real;
using numerics::fmt;

// One evaluated function value with its quadrature error estimate.
struct PearceyValue {
    Real value{0};
    Real err{0};
    bool converged = true;
};

namespace detail {

// Outward ray integral of (i s)^d exp(sgn (s^4/4 + (tau/2) s^2) + i s x) with
// s = e^(i theta) t, t in (0, inf).  sgn = -1 gives the p-integrand, +1 the
// q-integrand.
inline QuadResult<Complex> moment_ray(const Real& theta, int sgn, int d,
                                      const Real& x, const Real& tau,
                                      const PrecisionPolicy& pol) {
    const Complex i_unit(Real(0), Real(1));
    auto f = [&](const Complex& s) -> Complex {
        const Complex s2 = s * s;
        Complex val = exp(Real(sgn) * (s2 * s2 / 4 + tau * s2 / 2) + i_unit * s * x);
        for (int k = 0; k < d; ++k) val *= i_unit * s;
        return val;
    };
    return integrate_ray(f, ContourRay{theta, false, Real(1)}, pol);
}

// Shared core for p and q: assembles the oriented rays, checks that the
// imaginary residue is at the quadrature-noise level, and discards it.
inline PearceyValue pearcey_moment(bool is_q, const Real& x, const Real& tau,
                                   int d, const PrecisionPolicy& pol) {
    if (d < 0 || d > 3)
        throw std::domain_error("pearcey: derivative order must be 0..3");
    // Parity: p is even and q is odd, so at x = 0 the derivatives of the
    // opposite parity vanish identically; return the exact zero.
    if (x == 0 && (d % 2 == (is_q ? 0 : 1)))
        return PearceyValue{Real(0), Real(0), true};

    // The ray sum and the realness check must run at the policy's working
    // precision even when the ambient default is lower.
    numerics::ScopedPrecision work((std::max)(pol.bits, numerics::current_bits()));
    Complex total{};
    Real err{0}, mag{0};
    bool conv = true;
    auto add = [&](const Real& theta, int orient_sign) {
        QuadResult<Complex> r = moment_ray(theta, is_q ? +1 : -1, d, x, tau, pol);
        total += Real(orient_sign) * r.value;
        err += r.err;
        mag += abs(r.value);
        conv = conv && r.converged;
    };
    const Real pi = numerics::pi_r();
    if (is_q) {
        // -R(pi/4) + R(3pi/4) - R(5pi/4) + R(7pi/4): the toward-origin
        // traversal of rays one and three is the sign flip.
        add(pi / 4, -1);
        add(3 * pi / 4, +1);
        add(5 * pi / 4, -1);
        add(7 * pi / 4, +1);
    } else {
        // Int_R = outward ray at angle 0 plus the angle-pi ray traversed
        // toward the origin; the latter is -R_out(pi) = +Int_0^inf f(-u) du.
        add(Real(0), +1);
        add(pi, -1);
    }
    total /= 2 * pi;
    err /= 2 * pi;
    mag /= 2 * pi;

    // The ray contributions pair into conjugates, so the imaginary part must
    // sit at the noise floor: quadrature error or accumulated roundoff,
    // whichever is larger.  Exceeding ten times that level means the contour
    // bookkeeping is broken, which is not a recoverable condition.
    const Real floor_r = numerics::machine_eps() * 1024 * (mag + 1);
    const Real err_eff = (std::max)(err, floor_r);
    const Real imag_part = abs(Real(total.imag()));
    if (imag_part > 10 * err_eff)
        throw std::runtime_error(
            std::string("pearcey ") + (is_q ? "q" : "p") + "(x=" + fmt(x) +
            ", tau=" + fmt(tau) + ", d=" + std::to_string(d) +
            "): imaginary residue " + fmt(imag_part) +
            " exceeds 10x quadrature error " + fmt(err_eff));
    return PearceyValue{Real(total.real()), (std::max)(err, imag_part), conv};
}

}  // namespace detail

inline PearceyValue pearcey_p_full(const Real& x, const Real& tau, int d = 0,
                                   const PrecisionPolicy& pol = {}) {
    return detail::pearcey_moment(false, x, tau, d, pol);
}

inline PearceyValue pearcey_q_full(const Real& x, const Real& tau, int d = 0,
                                   const PrecisionPolicy& pol = {}) {
    return detail::pearcey_moment(true, x, tau, d, pol);
}

inline Real pearcey_p(const Real& x, const Real& tau, int d = 0,
                      const PrecisionPolicy& pol = {}) {
    PearceyValue v = pearcey_p_full(x, tau, d, pol);
    if (!v.converged)
        throw std::runtime_error("pearcey p(x=" + fmt(x) + ", tau=" + fmt(tau) +
                                 "): quadrature did not converge");
    return v.value;
}

inline Real pearcey_q(const Real& x, const Real& tau, int d = 0,
                      const PrecisionPolicy& pol = {}) {
    PearceyValue v = pearcey_q_full(x, tau, d, pol);
    if (!v.converged)
        throw std::runtime_error("pearcey q(x=" + fmt(x) + ", tau=" + fmt(tau) +
                                 "): quadrature did not converge");
    return v.value;
}

// ODE residuals with the third derivative computed as the (i s)^3 moment --
// an independent route, since integration by parts (not differentiation of a
// stored value) is what makes these identities hold.
inline Real ode_residual_p(const Real& x, const Real& tau,
                           const PrecisionPolicy& pol = {}) {
    return abs(pearcey_p(x, tau, 3, pol) - tau * pearcey_p(x, tau, 1, pol) -
               x * pearcey_p(x, tau, 0, pol));
}

inline Real ode_residual_q(const Real& x, const Real& tau,
                           const PrecisionPolicy& pol = {}) {
    return abs(pearcey_q(x, tau, 3, pol) - tau * pearcey_q(x, tau, 1, pol) +
               x * pearcey_q(x, tau, 0, pol));
}

// Per-tau cache of p/q values keyed by (which, derivative order, x).  Entries
// are filled on first query and never recomputed, so repeated queries return
// the stored value bit-for-bit.  The mutex serialises fills; after a grid has
// been walked once the evaluator is effectively read-only and concurrent
// lookups are safe.  (The global-precision caveat of scalar.hpp still
// applies: only the computing thread may change working precision.)
class PearceyEvaluator {
  public:
    explicit PearceyEvaluator(Real tau, PrecisionPolicy pol = {})
        : tau_(std::move(tau)), pol_(std::move(pol)) {}
    PearceyEvaluator(const PearceyEvaluator&) = delete;
    PearceyEvaluator& operator=(const PearceyEvaluator&) = delete;

    const Real& tau() const { return tau_; }
    const PrecisionPolicy& policy() const { return pol_; }

    PearceyValue p(const Real& x, int d = 0) const { return fetch(false, x, d); }
    PearceyValue q(const Real& x, int d = 0) const { return fetch(true, x, d); }

    std::size_t cache_size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return cache_.size();
    }

  private:
    using Key = std::tuple<bool, int, Real>;

    PearceyValue fetch(bool is_q, const Real& x, int d) const {
        std::lock_guard<std::mutex> lock(mu_);
        const Key key{is_q, d, x};
        auto it = cache_.find(key);
        if (it == cache_.end())
            it = cache_.emplace(key, detail::pearcey_moment(is_q, x, tau_, d, pol_)).first;
        return it->second;
    }

    Real tau_;
    PrecisionPolicy pol_;
    mutable std::mutex mu_;
    mutable std::map<Key, PearceyValue> cache_;
};

// A kernel value, its first-order error propagation, and whether the
// removable-singularity (diagonal) path was taken.
struct KernelValue {
    Real value{0};
    Real err{0};
    bool diagonal_path = false;
    bool converged = true;
};

namespace detail {

// p-derivatives 0..2 at xp and q-derivatives 0..2 at xq, at p/q parameter
// tau_pq, pulled either straight from quadrature or through a cache.
struct PQDerivs {
    PearceyValue p[3], q[3];
    bool converged() const {
        bool c = true;
        for (int d = 0; d < 3; ++d) c = c && p[d].converged && q[d].converged;
        return c;
    }
};

inline PQDerivs pq_at(const Real& xp, const Real& xq, const Real& tau_pq,
                      const PrecisionPolicy& pol) {
    PQDerivs out;
    for (int d = 0; d < 3; ++d) {
        out.p[d] = pearcey_moment(false, xp, tau_pq, d, pol);
        out.q[d] = pearcey_moment(true, xq, tau_pq, d, pol);
    }
    return out;
}

inline PQDerivs pq_at(const PearceyEvaluator& ev, const Real& xp, const Real& xq) {
    PQDerivs out;
    for (int d = 0; d < 3; ++d) {
        out.p[d] = ev.p(xp, d);
        out.q[d] = ev.q(xq, d);
    }
    return out;
}

// Bilinear combination sum_i c_i * p[a_i] * q[b_i] with propagated error.
struct Bilinear {
    Real value{0}, err{0};
    void add(const Real& coeff, const PearceyValue& pv, const PearceyValue& qv) {
        value += coeff * pv.value * qv.value;
        err += abs(coeff) * (abs(pv.value) * qv.err + abs(qv.value) * pv.err +
                             pv.err * qv.err);
    }
};

// Off-diagonal kernel numerator over denominator, shared by the classical and
// folded kernels: [p q'' - w p' q' + p'' q - tpar p q] / denom.
inline KernelValue kernel_ratio(const PQDerivs& pq, const Real& w,
                                const Real& tpar, const Real& denom) {
    Bilinear num;
    num.add(Real(1), pq.p[0], pq.q[2]);
    num.add(-w, pq.p[1], pq.q[1]);
    num.add(Real(1), pq.p[2], pq.q[0]);
    num.add(-tpar, pq.p[0], pq.q[0]);
    return KernelValue{num.value / denom, num.err / abs(denom), false,
                       pq.converged()};
}

// Diagonal of the classical kernel at x (p/q parameter tpar):
// K(x, x) = x p q + p' q'' - p'' q', from L'Hopital on the numerator, using
// the ODE q''' = tpar q' - x q to eliminate the third derivative.
inline KernelValue kernel_diagonal(const PQDerivs& pq, const Real& x) {
    Bilinear num;
    num.add(x, pq.p[0], pq.q[0]);
    num.add(Real(1), pq.p[1], pq.q[2]);
    num.add(Real(-1), pq.p[2], pq.q[1]);
    return KernelValue{num.value, num.err, true, pq.converged()};
}

// |xi - eta| below this uses the diagonal form at the midpoint (flagged).
inline const Real& diagonal_switch() {
    static const Real eps("1e-8");
    return eps;
}

}  // namespace detail

// Classical Pearcey kernel K(xi, eta; tau).  Within 1e-8 of the diagonal the
// removable singularity is evaluated by the derivative of the numerator at
// the midpoint; the O(|xi - eta|) displacement is added to the error bound.
inline KernelValue pearcey_kernel_full(const Real& xi, const Real& eta,
                                       const Real& tau,
                                       const PrecisionPolicy& pol = {}) {
    numerics::ScopedPrecision work((std::max)(pol.bits, numerics::current_bits()));
    if (abs(xi - eta) < detail::diagonal_switch()) {
        const Real m = (xi + eta) / 2;
        detail::PQDerivs pq = detail::pq_at(m, m, tau, pol);
        KernelValue kv = detail::kernel_diagonal(pq, m);
        kv.err += abs(xi - eta) * (1 + abs(kv.value));
        return kv;
    }
    detail::PQDerivs pq = detail::pq_at(xi, eta, tau, pol);
    return detail::kernel_ratio(pq, Real(1), tau, xi - eta);
}

// Cached variant: ev.tau() is the kernel parameter.
inline KernelValue pearcey_kernel_full(const PearceyEvaluator& ev,
                                       const Real& xi, const Real& eta) {
    numerics::ScopedPrecision work(
        (std::max)(ev.policy().bits, numerics::current_bits()));
    if (abs(xi - eta) < detail::diagonal_switch()) {
        const Real m = (xi + eta) / 2;
        KernelValue kv = detail::kernel_diagonal(detail::pq_at(ev, m, m), m);
        kv.err += abs(xi - eta) * (1 + abs(kv.value));
        return kv;
    }
    return detail::kernel_ratio(detail::pq_at(ev, xi, eta), Real(1), ev.tau(),
                                xi - eta);
}

inline Real pearcey_kernel(const Real& xi, const Real& eta, const Real& tau,
                           const PrecisionPolicy& pol = {}) {
    KernelValue kv = pearcey_kernel_full(xi, eta, tau, pol);
    if (!kv.converged)
        throw std::runtime_error("pearcey kernel(" + fmt(xi) + ", " + fmt(eta) +
                                 "; " + fmt(tau) + "): quadrature did not converge");
    return kv.value;
}

namespace detail {

// Shared folded-kernel core.  In the folded kernels K^(...)(xi2, eta2) the
// function p is evaluated at sqrt(eta2), q at sqrt(xi2), the p/q parameter is
// 2 tau, and the cross term carries sqrt(eta2/xi2) (plus variant) or
// sqrt(xi2/eta2) (minus variant); the denominator is eta2 - xi2.  Near equal
// arguments the diagonal reduces to
//   K_diag(s)/(2 s) -+ p'(s) q'(s) / (2 m),   s = sqrt(m), m the midpoint,
// (- for plus, + for minus), by the same L'Hopital computation plus the
// constant-Wronskian identity p q'' + p' q' + p'' q - 2 tau p q = 2 p' q'.
template <class PQFetch>
KernelValue folded_impl(PQFetch&& fetch, bool plus_variant, const Real& xi2,
                        const Real& eta2, const Real& tau) {
    if (!(xi2 > 0) || !(eta2 > 0))
        throw std::domain_error("folded kernel: arguments must be positive");
    if (abs(xi2 - eta2) < diagonal_switch()) {
        const Real m = (xi2 + eta2) / 2;
        const Real s = sqrt(m);
        PQDerivs pq = fetch(s, s);
        KernelValue kv = kernel_diagonal(pq, s);
        Bilinear cross;
        cross.add(Real(plus_variant ? -1 : 1), pq.p[1], pq.q[1]);
        kv.value = kv.value / (2 * s) + cross.value / (2 * m);
        kv.err = kv.err / (2 * s) + cross.err / (2 * m) +
                 abs(xi2 - eta2) * (1 + abs(kv.value));
        return kv;
    }
    const Real sx = sqrt(xi2), sy = sqrt(eta2);
    const Real w = plus_variant ? sy / sx : sx / sy;
    return kernel_ratio(fetch(sy, sx), w, 2 * tau, eta2 - xi2);
}

}  // namespace detail

inline KernelValue folded_plus_full(const Real& xi2, const Real& eta2,
                                    const Real& tau,
                                    const PrecisionPolicy& pol = {}) {
    numerics::ScopedPrecision work((std::max)(pol.bits, numerics::current_bits()));
    auto fetch = [&](const Real& xp, const Real& xq) {
        return detail::pq_at(xp, xq, 2 * tau, pol);
    };
    return detail::folded_impl(fetch, true, xi2, eta2, tau);
}

inline KernelValue folded_minus_full(const Real& xi2, const Real& eta2,
                                     const Real& tau,
                                     const PrecisionPolicy& pol = {}) {
    numerics::ScopedPrecision work((std::max)(pol.bits, numerics::current_bits()));
    auto fetch = [&](const Real& xp, const Real& xq) {
        return detail::pq_at(xp, xq, 2 * tau, pol);
    };
    return detail::folded_impl(fetch, false, xi2, eta2, tau);
}

// Cached variants.  The evaluator holds p/q at the doubled parameter, so it
// must have been built with tau equal to 2 * the folded-kernel parameter;
// this is checked rather than silently assumed.
inline KernelValue folded_plus_full(const PearceyEvaluator& ev, const Real& xi2,
                                    const Real& eta2, const Real& tau) {
    if (!(ev.tau() == 2 * tau))
        throw std::invalid_argument(
            "folded_plus: evaluator parameter must equal 2*tau (got " +
            fmt(ev.tau()) + ", need " + fmt(2 * tau) + ")");
    numerics::ScopedPrecision work(
        (std::max)(ev.policy().bits, numerics::current_bits()));
    auto fetch = [&](const Real& xp, const Real& xq) {
        return detail::pq_at(ev, xp, xq);
    };
    return detail::folded_impl(fetch, true, xi2, eta2, tau);
}

inline KernelValue folded_minus_full(const PearceyEvaluator& ev, const Real& xi2,
                                     const Real& eta2, const Real& tau) {
    if (!(ev.tau() == 2 * tau))
        throw std::invalid_argument(
            "folded_minus: evaluator parameter must equal 2*tau (got " +
            fmt(ev.tau()) + ", need " + fmt(2 * tau) + ")");
    numerics::ScopedPrecision work(
        (std::max)(ev.policy().bits, numerics::current_bits()));
    auto fetch = [&](const Real& xp, const Real& xq) {
        return detail::pq_at(ev, xp, xq);
    };
    return detail::folded_impl(fetch, false, xi2, eta2, tau);
}

inline Real folded_plus(const Real& xi2, const Real& eta2, const Real& tau,
                        const PrecisionPolicy& pol = {}) {
    return folded_plus_full(xi2, eta2, tau, pol).value;
}

inline Real folded_minus(const Real& xi2, const Real& eta2, const Real& tau,
                         const PrecisionPolicy& pol = {}) {
    return folded_minus_full(xi2, eta2, tau, pol).value;
}

}  // namespace pearceylab::pearcey
