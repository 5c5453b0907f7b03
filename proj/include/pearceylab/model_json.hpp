#pragma once
// JSON ingestion for model parameters.  Three accepted shapes:
//   {"n":int,"alpha":f,"t":f,"a":f,"gamma":f}               direct parameters
//   {"curve":"pearcey","c":f,"tau":f,"n":int,...}           Pearcey regime
//   {"curve":"multicritical","sigma":f,"tau":f,"n":int,...} multicritical
// Curve forms accept optional "alpha" (default 0) and "gamma" (default 1).
// Split from model.hpp so numerical code does not pull in the JSON parser.

#include <json.hpp>

#include "model.hpp"

namespace pearceylab::model {

inline Real real_from_json(const nlohmann::json& j) {
    // Strings round-trip exactly at any precision; numbers go through double.
    if (j.is_string()) return Real(j.get<std::string>());
    return Real(j.get<double>());
}

inline ModelParams params_from_json(const nlohmann::json& j) {
    ModelParams p;
    if (j.contains("curve")) {
        const std::string curve = j.at("curve").get<std::string>();
        p.n = j.at("n").get<long>();
        if (j.contains("alpha")) p.alpha = real_from_json(j.at("alpha"));
        if (j.contains("gamma")) p.gamma = real_from_json(j.at("gamma"));
        const Real tau = j.contains("tau") ? real_from_json(j.at("tau")) : Real(0);
        if (curve == "pearcey") {
            const auto pt = pearcey_params(real_from_json(j.at("c")), tau, p.n);
            p.t = pt.t;
            p.a = pt.a;
        } else if (curve == "dashed") {
            const auto pt = dashed_curve(real_from_json(j.at("c")));
            p.t = pt.t;
            p.a = pt.a;
        } else if (curve == "multicritical") {
            const auto pt =
                multicrit_params(real_from_json(j.at("sigma")), tau, p.n);
            p.t = pt.t;
            p.a = pt.a;
        } else {
            throw std::domain_error("params_from_json: unknown curve '" + curve + "'");
        }
    } else {
        p.n = j.at("n").get<long>();
        p.alpha = real_from_json(j.at("alpha"));
        p.t = real_from_json(j.at("t"));
        p.a = real_from_json(j.at("a"));
        p.gamma = real_from_json(j.at("gamma"));
    }
    p.validate();
    return p;
}

}  // namespace pearceylab::model
