#pragma once
// Serialization for limiting-kernel work: CSV grids of kernel values with
// their propagated quadrature-error estimates, and a JSON summary of a
// finite-vs-limit comparison run.  Split from limits.hpp so the numerical
// header does not pull in the JSON parser.

#include <json.hpp>

#include <ostream>
#include <utility>
#include <vector>

#include "limits.hpp"

namespace pearceylab::limits {

struct PearceyGridRow {
    Real xi{0};
    Real eta{0};
    Real tau{0};
    Real value{0};
    Real err_estimate{0};
};

// Kernel values over the product grid xs x ys at the evaluator's parameter.
// The tau column records the kernel parameter (the evaluator's own tau).
inline std::vector<PearceyGridRow> pearcey_kernel_grid(const PearceyEvaluator& ev,
                                                       const std::vector<Real>& xs,
                                                       const std::vector<Real>& ys) {
    std::vector<PearceyGridRow> rows;
    rows.reserve(xs.size() * ys.size());
    for (const Real& xi : xs)
        for (const Real& eta : ys) {
            const PearceyValue v = pearcey_kernel_est(ev, xi, eta);
            rows.push_back({xi, eta, ev.tau(), v.value, v.err});
        }
    return rows;
}

// Values are printed with round-trip digits so identical inputs give
// byte-identical files.
inline void write_pearcey_grid_csv(std::ostream& os,
                                   const std::vector<PearceyGridRow>& rows) {
    os << "xi,eta,tau,value,err_estimate\n";
    for (const PearceyGridRow& r : rows)
        os << numerics::fmt(r.xi) << ',' << numerics::fmt(r.eta) << ','
           << numerics::fmt(r.tau) << ',' << numerics::fmt(r.value) << ','
           << numerics::fmt(r.err_estimate) << '\n';
    if (!rows.empty()) os << "#tau=" << numerics::fmt(rows.front().tau) << '\n';
}

inline nlohmann::json limit_report_to_json(const LimitReport& rep) {
    nlohmann::json grid = nlohmann::json::array();
    for (const auto& [xi, eta] : rep.grid)
        grid.push_back({static_cast<double>(xi), static_cast<double>(eta)});
    nlohmann::json errs = nlohmann::json::array();
    for (const Real& e : rep.max_abs_err) errs.push_back(static_cast<double>(e));
    return {{"n", rep.ns},
            {"c1", static_cast<double>(rep.c1)},
            {"grid", grid},
            {"max_abs_err", errs},
            {"trend", rep.trend},
            {"kind", rep.kind == LimitKind::symmetrized ? "symmetrized" : "external"}};
}

inline void write_limit_report_json(std::ostream& os, const LimitReport& rep) {
    os << limit_report_to_json(rep).dump(2) << '\n';
}

}  // namespace pearceylab::limits
