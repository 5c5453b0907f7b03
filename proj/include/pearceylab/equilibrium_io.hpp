#pragma once
// Serialization of density profiles: CSV for the sampled curve (with the
// origin-series truncation alongside each sample) and a JSON summary.
// Split from equilibrium.hpp so the numerical header does not pull in the
// JSON parser.

#include <json.hpp>

#include <ostream>

#include "equilibrium.hpp"

namespace pearceylab::equilibrium {

// Columns: x, psi, series_truncation, abs_diff.  The truncation is the
// three-term fractional series at the origin evaluated at x, informative for
// small x and wildly off near b by design.  Values are printed with
// round-trip digits so identical inputs give byte-identical files; run
// parameters trail the table as #key=value lines.
inline void write_profile_csv(std::ostream& os, const EquilibriumProfile& prof) {
    os << "x,psi,series_truncation,abs_diff\n";
    for (const PsiSample& s : prof.psi_samples) {
        const Real trunc = psi_series_eval(prof.series0, s.x, prof.c);
        os << numerics::fmt(s.x) << ',' << numerics::fmt(s.psi) << ','
           << numerics::fmt(trunc) << ',' << numerics::fmt(abs(s.psi - trunc))
           << '\n';
    }
    os << "#c=" << numerics::fmt(prof.c) << '\n';
    os << "#t=" << numerics::fmt(prof.t) << '\n';
    os << "#a=" << numerics::fmt(prof.a) << '\n';
    os << "#b=" << numerics::fmt(prof.b) << '\n';
    os << "#mass=" << numerics::fmt(prof.mass) << '\n';
}

inline nlohmann::json profile_to_json(const EquilibriumProfile& prof,
                                      const Real& fitted_exponent) {
    return {{"c", static_cast<double>(prof.c)},
            {"b", static_cast<double>(prof.b)},
            {"mass", static_cast<double>(prof.mass)},
            {"exponent_fit", static_cast<double>(fitted_exponent)}};
}

}  // namespace pearceylab::equilibrium
