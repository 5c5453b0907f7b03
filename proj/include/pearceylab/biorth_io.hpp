#pragma once
// Serialization for the bimoment layer: an opaque cache of BimomentTable
// keyed by (parameter hash, degree cap, working precision) so repeated runs
// skip the quadrature, and a plain CSV dump of the solved coefficients.
// Values are written with round-trip digits, so a cache hit reproduces the
// table bit for bit at the recorded precision.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "biorth.hpp"
#include "scalar.hpp"

namespace pearceylab::biorth {

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string cache_key_string(const ModelParams& p, int deg, unsigned bits) {
    std::ostringstream os;
    os << p.n << '|' << numerics::fmt(p.alpha) << '|' << numerics::fmt(p.t) << '|'
       << numerics::fmt(p.a) << '|' << numerics::fmt(p.gamma) << '|' << deg << '|'
       << bits;
    return os.str();
}

}  // namespace detail

// Stable content key for naming and validating cache files.
inline std::uint64_t bimoment_cache_key(const ModelParams& p, int deg, unsigned bits) {
    return detail::fnv1a(detail::cache_key_string(p, deg, bits));
}

inline void save_bimoments(std::ostream& os, const BimomentTable& t) {
    os << "PLBM1\n";
    os << bimoment_cache_key(t.params, t.degree_cap, t.policy.bits) << '\n';
    os << t.degree_cap << ' ' << t.policy.bits << '\n';
    for (int j = 0; j <= t.degree_cap; ++j)
        for (int k = 0; k <= t.degree_cap; ++k)
            os << numerics::fmt(t.B[static_cast<size_t>(j)][static_cast<size_t>(k)])
               << ' '
               << numerics::fmt(t.err[static_cast<size_t>(j)][static_cast<size_t>(k)])
               << '\n';
}

// Returns the cached table when the stream carries exactly the requested
// (params, degree, precision) combination; anything else is a miss.
inline std::optional<BimomentTable> load_bimoments(std::istream& is,
                                                   const ModelParams& p, int deg,
                                                   const PrecisionPolicy& policy) {
    std::string magic;
    if (!std::getline(is, magic) || magic != "PLBM1") return std::nullopt;
    std::uint64_t key = 0;
    int stored_deg = -1;
    unsigned stored_bits = 0;
    if (!(is >> key >> stored_deg >> stored_bits)) return std::nullopt;
    if (key != bimoment_cache_key(p, deg, policy.bits) || stored_deg != deg ||
        stored_bits != policy.bits)
        return std::nullopt;

    ScopedPrecision scope((std::max)(policy.bits, numerics::current_bits()));
    BimomentTable t;
    t.params = p;
    t.policy = policy;
    t.degree_cap = deg;
    t.B.assign(static_cast<size_t>(deg) + 1,
               std::vector<Real>(static_cast<size_t>(deg) + 1));
    t.err = t.B;
    std::string bval, eval;
    for (int j = 0; j <= deg; ++j)
        for (int k = 0; k <= deg; ++k) {
            if (!(is >> bval >> eval)) return std::nullopt;
            t.B[static_cast<size_t>(j)][static_cast<size_t>(k)] = Real(bval);
            t.err[static_cast<size_t>(j)][static_cast<size_t>(k)] = Real(eval);
        }
    return t;
}

// Columns: family (p|q|h), degree k, coefficient index i (0 for h), value.
// Trailing #key=value lines carry the weight parameters.
inline void write_coefficients_csv(std::ostream& os, const BiorthSystem& sys) {
    os << "family,degree,index,value\n";
    for (int k = 0; k <= sys.kmax(); ++k) {
        const auto ku = static_cast<size_t>(k);
        for (size_t i = 0; i < sys.p_coeffs[ku].size(); ++i)
            os << "p," << k << ',' << i << ',' << numerics::fmt(sys.p_coeffs[ku][i])
               << '\n';
        for (size_t i = 0; i < sys.q_coeffs[ku].size(); ++i)
            os << "q," << k << ',' << i << ',' << numerics::fmt(sys.q_coeffs[ku][i])
               << '\n';
        os << "h," << k << ",0," << numerics::fmt(sys.h[ku]) << '\n';
    }
    const ModelParams& p = sys.params();
    os << "#n=" << p.n << '\n';
    os << "#alpha=" << numerics::fmt(p.alpha) << '\n';
    os << "#t=" << numerics::fmt(p.t) << '\n';
    os << "#a=" << numerics::fmt(p.a) << '\n';
    os << "#gamma=" << numerics::fmt(p.gamma) << '\n';
    os << "#residual=" << numerics::fmt(sys.residual_report) << '\n';
}

}  // namespace pearceylab::biorth
