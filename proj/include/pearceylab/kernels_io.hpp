#pragma once
// CSV emission for the kernel cross-checks: the direct sum against the
// three-term recombination and the boundary-matrix route at each requested
// point, with the absolute differences alongside.

#include <ostream>
#include <utility>
#include <vector>

#include "kernels_finite.hpp"
#include "scalar.hpp"

namespace pearceylab::kernels {

struct KernelComparisonRow {
    Real x, y;
    Real k_direct, k_cd, k_matrix;
};

inline std::vector<KernelComparisonRow> compare_kernels(
    const BiorthSystem& sys, int m, const std::vector<std::pair<Real, Real>>& points,
    const PrecisionPolicy& pol = {}) {
    std::vector<KernelComparisonRow> rows;
    rows.reserve(points.size());
    for (const auto& [x, y] : points) {
        KernelComparisonRow r;
        r.x = x;
        r.y = y;
        r.k_direct = kernel_Khat(sys, m, x, y);
        r.k_cd = kernel_cd(sys, m, x, y);
        r.k_matrix = kernel_matrix_rhp(sys, m, x, y, pol);
        rows.push_back(std::move(r));
    }
    return rows;
}

// Values are printed with round-trip digits so identical inputs give
// byte-identical files; run parameters trail the table as #key=value lines.
inline void write_kernel_comparison_csv(std::ostream& os,
                                        const std::vector<KernelComparisonRow>& rows,
                                        const ModelParams& p, int m) {
    os << "x,y,K_direct,K_cd,K_matrix,abs_diff_cd,abs_diff_matrix\n";
    for (const auto& r : rows)
        os << numerics::fmt(r.x) << ',' << numerics::fmt(r.y) << ','
           << numerics::fmt(r.k_direct) << ',' << numerics::fmt(r.k_cd) << ','
           << numerics::fmt(r.k_matrix) << ',' << numerics::fmt(abs(r.k_cd - r.k_direct))
           << ',' << numerics::fmt(abs(r.k_matrix - r.k_direct)) << '\n';
    os << "#m=" << m << '\n';
    os << "#n=" << p.n << '\n';
    os << "#alpha=" << numerics::fmt(p.alpha) << '\n';
    os << "#t=" << numerics::fmt(p.t) << '\n';
    os << "#a=" << numerics::fmt(p.a) << '\n';
    os << "#gamma=" << numerics::fmt(p.gamma) << '\n';
}

}  // namespace pearceylab::kernels
