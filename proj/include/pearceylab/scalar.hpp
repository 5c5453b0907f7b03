#pragma once
// Multiprecision scalar layer shared by every module: dynamically sized MPFR
// reals and complexes, the precision policy threaded through all quadrature,
// and a scope guard for switching working precision.

#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/complex_adaptor.hpp>
#include <mpfr.h>

#include <cmath>
#include <sstream>
#include <string>

namespace pearceylab::numerics {

namespace mp = boost::multiprecision;

// Expression templates off: dynamic-precision temporaries are hard to reason
// about with et_on, and these sizes make the copies cheap.
using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;
using Complex = mp::number<mp::complex_adaptor<mp::mpfr_float_backend<0>>, mp::et_off>;

inline unsigned bits_to_digits10(unsigned bits) {
    return static_cast<unsigned>(bits * 0.30102999566398120) + 2;
}

// The backend's default precision is process-global (not thread-local) in this
// Boost version.  Scopes must therefore only be opened from a single thread;
// worker threads inherit whatever is current and must not change it.
class ScopedPrecision {
  public:
    explicit ScopedPrecision(unsigned bits)
        : saved_digits10_(Real::default_precision()) {
        Real::default_precision(bits_to_digits10(bits));
    }
    ~ScopedPrecision() { Real::default_precision(saved_digits10_); }
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

  private:
    unsigned saved_digits10_;
};

// Constants are computed fresh at the current precision.  Never cache a Real
// constant across precision scopes: it would silently freeze the old mantissa.
inline Real pi_r() {
    Real x;
    mpfr_const_pi(x.backend().data(), MPFR_RNDN);
    return x;
}

inline Real machine_eps() {
    // 2^(1-p) at the current working precision.
    Real one(1);
    return ldexp(one, 1 - static_cast<long>(mpfr_get_prec(one.backend().data())));
}

// The working precision implied by the process-global default, in bits
// (rounded up).  Numerical entry points scope themselves to
// max(policy bits, current_bits()), so a policy can raise the precision of a
// computation but a caller-opened ScopedPrecision is never silently undone.
inline unsigned current_bits() {
    return static_cast<unsigned>(
        std::ceil(Real::default_precision() * 3.3219280948873623));
}

struct PrecisionPolicy {
    unsigned bits = 128;          // working mantissa bits (>= 64)
    Real target_abs_err = Real("1e-30");
    double target_rel_err = 1e-30;  // quadrature also accepts err <= rel * |value|
    int max_refinements = 9;      // trapezoid halvings per attempt

    // Degree-indexed policy for the biorthogonal solves: the bimoment matrices
    // are exponentially ill-conditioned, so precision grows linearly in the
    // polynomial degree and the residual check validates it a posteriori.
    static PrecisionPolicy for_degree(int m) {
        PrecisionPolicy pol;
        pol.bits = 64 + 12 * static_cast<unsigned>(m < 0 ? 0 : m);
        const int digits = static_cast<int>(pol.bits * 0.30102999566398120);
        pol.target_rel_err = std::pow(10.0, -(digits - 8));
        pol.target_abs_err = pow(Real(10), -(digits - 8));
        return pol;
    }
};

// Round-trip decimal formatting: enough digits to reconstruct the mantissa.
inline std::string fmt(const Real& x) {
    const unsigned digits =
        static_cast<unsigned>(mpfr_get_prec(x.backend().data()) * 0.30102999566398120) + 2;
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace pearceylab::numerics
