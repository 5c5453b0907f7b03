#pragma once
// JSON serialization of residual-scan reports.  Split from integrable.hpp so
// the numerical header does not pull in the JSON parser.

#include <json.hpp>

#include "integrable.hpp"

namespace pearceylab::integrable {

inline nlohmann::json report_to_json(const ResidualReport& r) {
    return {{"equation_id", r.equation_id},
            {"max_abs_residual", static_cast<double>(r.max_abs_residual)},
            {"grid", r.grid}};
}

inline nlohmann::json reports_to_json(const std::vector<ResidualReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    return arr;
}

}  // namespace pearceylab::integrable
