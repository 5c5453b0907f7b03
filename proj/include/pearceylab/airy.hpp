#pragma once
// Complex Airy function by contour integration and the standard 2x2 Airy
// model problem built from it: sector-wise matrix, jump relations on the
// rays arg = 0, +-2pi/3, pi, and the large-argument normalization.  Used as a
// self-test target for the quadrature engines.

#include <stdexcept>

#include "linalg.hpp"
#include "quadrature.hpp"

namespace pearceylab::numerics {

struct AiryValue {
    Complex ai;    // Ai(z)
    Complex aip;   // Ai'(z)
    bool converged = false;
};

// Ai(z) = (1/(2 pi i)) Int_C e^{t^3/3 - z t} dt over the contour running from
// infinity * e^{-i pi/3} through 0 to infinity * e^{+i pi/3}; the derivative
// inserts -t.  Both rays decay like e^{-u^3/3} regardless of z, at the price
// of cancellation ~ e^{c |z|^{3/2}}, so the working precision must carry that
// headroom (fine for |z| up to ~40 at a few hundred bits).
template <class F>
Complex airy_contour_pair(F&& insert, const Complex& z, const PrecisionPolicy& pol,
                          bool* converged) {
    const Real pi = pi_r();
    const Real trunc = 2 + sqrt(3 * (abs(z) + 1));
    auto f = [&](const Complex& t) { return insert(t) * exp(t * t * t / 3 - z * t); };
    ContourRay up{pi / 3, false, trunc}, down{-pi / 3, false, trunc};
    auto ru = integrate_ray(f, up, pol);
    auto rd = integrate_ray(f, down, pol);
    if (converged) *converged = *converged && ru.converged && rd.converged;
    return (ru.value - rd.value) / (Complex(Real(0), 2 * pi));
}

inline AiryValue airy_ai(const Complex& z, const PrecisionPolicy& pol) {
    AiryValue v;
    v.converged = true;
    v.ai = airy_contour_pair([](const Complex&) { return Complex(1, 0); }, z, pol,
                             &v.converged);
    v.aip = airy_contour_pair([](const Complex& t) { return -t; }, z, pol,
                              &v.converged);
    return v;
}

// The three solutions y_k(z) = sqrt(2 pi) e^{-i pi/4} omega^k Ai(omega^k z)
// of y'' = z y, omega = e^{2 pi i/3}, together with their z-derivatives.
// They satisfy y0 + y1 + y2 = 0 identically.
struct AirySolutionTriple {
    Complex y[3];
    Complex dy[3];
    bool converged = false;
};

inline AirySolutionTriple airy_triple(const Complex& z, const PrecisionPolicy& pol) {
    const Real pi = pi_r();
    const Complex pref = sqrt(2 * pi) * exp(Complex(Real(0), -pi / 4));
    const Complex omega = exp(Complex(Real(0), 2 * pi / 3));
    AirySolutionTriple t;
    t.converged = true;
    Complex rot(1, 0);
    for (int k = 0; k < 3; ++k) {
        AiryValue v = airy_ai(rot * z, pol);
        t.converged = t.converged && v.converged;
        t.y[k] = pref * rot * v.ai;
        t.dy[k] = pref * rot * rot * v.aip;  // chain rule through omega^k z
        rot *= omega;
    }
    return t;
}

// Which branch to take for points lying on (or within angular tolerance of)
// one of the four jump rays.  plus picks the boundary value from the sector
// on the + side of the ray's left-to-right orientation, minus from the other.
enum class RaySide { off_ray, plus, minus };

namespace detail {

// Sector indices: 0: (0, 2pi/3), 1: (2pi/3, pi), 2: (-pi, -2pi/3),
// 3: (-2pi/3, 0).  Rays: 0: arg 0, 1: arg 2pi/3, 2: arg pi, 3: arg -2pi/3.
inline int airy_sector(const Complex& zeta, RaySide which) {
    const Real pi = pi_r();
    const Real th = arg(zeta);
    const Real tol = ldexp(Real(1), -40);
    const Real ray_angle[4] = {Real(0), 2 * pi / 3, pi, -2 * pi / 3};
    // + side sectors per ray (rays in the left half-plane run toward the
    // origin under the left-to-right convention):
    const int plus_sector[4] = {0, 0, 1, 2};
    const int minus_sector[4] = {3, 1, 2, 3};
    for (int r = 0; r < 4; ++r) {
        Real d = abs(th - ray_angle[r]);
        if (r == 2) d = (std::min)(d, Real(abs(th + pi)));  // arg pi == arg -pi
        if (d < tol) {
            if (which == RaySide::plus) return plus_sector[r];
            if (which == RaySide::minus) return minus_sector[r];
            throw std::invalid_argument(
                "airy_parametrix: point lies on a jump ray; pass RaySide::plus "
                "or RaySide::minus");
        }
    }
    if (th > 0) return th < 2 * pi / 3 ? 0 : 1;
    return th > -2 * pi / 3 ? 3 : 2;
}

}  // namespace detail

// The sector-dependent 2x2 matrix built from the y_k: rows (function;
// derivative), columns per sector -- (y0, -y2), (-y1, -y2), (-y2, y1),
// (y0, y1).  det == 1 identically.
inline Matrix<Complex> airy_parametrix(const Complex& zeta, RaySide which,
                                       const PrecisionPolicy& pol) {
    const int sector = detail::airy_sector(zeta, which);
    AirySolutionTriple t = airy_triple(zeta, pol);
    static const int col_fn[4][2] = {{0, 2}, {1, 2}, {2, 1}, {0, 1}};
    static const int col_sg[4][2] = {{1, -1}, {-1, -1}, {-1, 1}, {1, 1}};
    Matrix<Complex> m(2, 2);
    for (int c = 0; c < 2; ++c) {
        const int k = col_fn[sector][c];
        const Real s(col_sg[sector][c]);
        m(0, c) = s * t.y[k];
        m(1, c) = s * t.dy[k];
    }
    return m;
}

// Jump matrix J on each ray, with rays oriented left to right: the boundary
// values satisfy (matrix on + side) = (matrix on - side) * J.
inline Matrix<Complex> airy_jump(int ray) {
    Matrix<Complex> j(2, 2);
    switch (ray) {
        case 0:  // arg 0: upper triangular with 1
            j(0, 0) = 1; j(0, 1) = 1; j(1, 1) = 1;
            break;
        case 1:
        case 3:  // arg +-2pi/3: lower triangular with 1
            j(0, 0) = 1; j(1, 0) = 1; j(1, 1) = 1;
            break;
        case 2:  // arg pi: off-diagonal involution
            j(0, 1) = 1; j(1, 0) = -1;
            break;
        default:
            throw std::invalid_argument("airy_jump: ray index 0..3");
    }
    return j;
}

// zeta^{-sigma3/4} * (1/sqrt 2) [[1,1],[-1,1]] * e^{-i pi sigma3/4}, the
// outer factor of the large-zeta behaviour (principal branches).
inline Matrix<Complex> airy_parametrix_infinity(const Complex& zeta) {
    const Real pi = pi_r();
    const Complex q = exp(-log(zeta) / 4);  // zeta^{-1/4}
    const Complex e = exp(Complex(Real(0), -pi / 4));
    const Real rt2 = sqrt(Real(2));
    Matrix<Complex> m(2, 2);
    m(0, 0) = q * e / rt2;
    m(0, 1) = q / (e * rt2);
    m(1, 0) = -e / (q * rt2);
    m(1, 1) = 1 / (e * q * rt2);
    return m;
}

// Max-entry deviation of Psi(zeta) e^{(2/3) zeta^{3/2} sigma3} PsiInf^{-1}
// from the identity.  The true decay rate of this quantity is O(1/zeta): the
// outer zeta^{-sigma3/4} conjugation costs a half power against the raw
// O(zeta^{-3/2}) of the sandwiched expansion.
inline Real airy_normalization_defect(const Complex& zeta, const PrecisionPolicy& pol) {
    const Matrix<Complex> psi = airy_parametrix(zeta, RaySide::off_ray, pol);
    const Complex zeta32 = exp(Real(3) / 2 * log(zeta));  // principal zeta^{3/2}
    const Complex w = exp(Real(2) / 3 * zeta32);
    Matrix<Complex> scaled(2, 2);
    scaled(0, 0) = psi(0, 0) * w;
    scaled(1, 0) = psi(1, 0) * w;
    scaled(0, 1) = psi(0, 1) / w;
    scaled(1, 1) = psi(1, 1) / w;
    const Matrix<Complex> pinf = airy_parametrix_infinity(zeta);
    const Complex det = pinf(0, 0) * pinf(1, 1) - pinf(0, 1) * pinf(1, 0);
    Matrix<Complex> inv(2, 2);
    inv(0, 0) = pinf(1, 1) / det;
    inv(0, 1) = -pinf(0, 1) / det;
    inv(1, 0) = -pinf(1, 0) / det;
    inv(1, 1) = pinf(0, 0) / det;
    return max_abs(scaled * inv - Matrix<Complex>::identity(2));
}

}  // namespace pearceylab::numerics
