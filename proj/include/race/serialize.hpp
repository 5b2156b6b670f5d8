#pragma once

#include "race/bounds.hpp"
#include "race/dynamics.hpp"
#include "race/exact_small.hpp"
#include "race/lp_opt.hpp"
#include "race/meanfield.hpp"

#include <json.hpp>

namespace race {

using nlohmann::json;

inline json to_json(const SpeedEstimate& e) {
    return json{{"mean", e.mean},       {"stderr", e.std_error}, {"steps", e.steps},
                {"burn_in", e.burn_in}, {"seed", e.seed}};
}

inline json to_json(const TailMeasurement& tm) {
    json points = json::array();
    for (size_t ti = 0; ti < tm.times.size(); ++ti)
        for (size_t ki = 0; ki < tm.levels.size(); ++ki)
            points.push_back(json{{"k", tm.levels[ki]}, {"t", tm.times[ti]},
                                  {"value", tm.values[ti][ki]}});
    return json{{"n", tm.n}, {"seed", tm.seed}, {"values", points}};
}

inline json to_json(const BoundReport& r) {
    json j{{"direction", r.direction == BoundReport::Direction::upper ? "upper" : "lower"},
           {"value", r.value},
           {"witness", r.witness},
           {"method", r.method}};
    j["n"] = r.n ? json(*r.n) : json("asymptotic");
    if (r.exact) j["exact"] = r.exact->to_string();
    return j;
}

inline json to_json(const StationaryN3& s) {
    return json{{"pi0", s.pi0.to_string()},
                {"tail_rate", s.tail_rate.to_string()},
                {"speed", s.speed.to_string()},
                {"speed_value", s.speed.to_double()}};
}

inline json to_json(const StationaryN4& s) {
    return json{{"L", s.truncation},
                {"speed", s.speed},
                {"residual", s.residual},
                {"pi0", s.regions[0]},
                {"Pi", {s.regions[0], s.regions[1], s.regions[2], s.regions[3]}},
                {"balance_residuals", {s.balance1, s.balance2}},
                {"iterations", s.iterations}};
}

inline json to_json(const LpSolution& s) {
    json j{{"status", s.status == LpStatus::optimal
                          ? "optimal"
                          : (s.status == LpStatus::infeasible ? "infeasible" : "unbounded")}};
    if (s.status == LpStatus::optimal) {
        j["bound"] = s.bound;
        j["bound_exact"] = s.bound_exact.to_string();
        j["h"] = s.h_values;
        j["active_set"] = s.active_set;
        j["exact_verified"] = s.exact_verified;
        j["iterations"] = s.iterations;
    }
    return j;
}

inline json to_json(const WaveEstimate& w) {
    json crossings = json::array();
    for (double t : w.crossing_times)
        crossings.push_back(std::isnan(t) ? json() : json(t));
    return json{{"speed_psi", w.speed_psi},
                {"speed_native", w.speed_native},
                {"spacing_last", w.spacing_last},
                {"spacing_drift", w.spacing_drift},
                {"crossing_times", crossings}};
}

}  // namespace race
