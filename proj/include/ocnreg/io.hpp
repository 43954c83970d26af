#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ocnreg/analysis.hpp"
#include "ocnreg/protocol.hpp"
#include "ocnreg/scenario.hpp"

namespace ocnreg {

// shortest text that reads back to the same double; NaN prints as nan
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/**
 * One row per recorded state. eta and rate_bound belong to the update
 * leaving the row's state, so the last row carries nan in both: no
 * update left it.
 */
inline void write_trace_csv(std::ostream& out, const RunTrace& tr) {
    const std::size_t n = tr.states.front().size();
    out << "k,eta,rate_bound,x_min,x_max,spread";
    for (std::size_t i = 0; i < n; ++i) out << ",x" << i;
    out << "\n";
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
        const Vec& x = tr.states[k];
        const bool has_update = k < tr.etas.size();
        out << k << ',' << format_double(has_update ? tr.etas[k] : std::nan(""));
        out << ',' << format_double(has_update ? tr.rate_bounds[k] : std::nan(""));
        out << ',' << format_double(min_element(x));
        out << ',' << format_double(max_element(x));
        out << ',' << format_double(spread(x));
        for (double v : x) out << ',' << format_double(v);
        out << "\n";
    }
}

inline void write_trace_csv_file(const std::string& path, const RunTrace& tr) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_trace_csv(out, tr);
}

// static facts about a scenario's network, weights and spectrum
inline nlohmann::json topology_report(const Scenario& sc, const Workspace& ws) {
    nlohmann::json j;
    j["scenario"] = sc.name;
    j["junctions"] = sc.network.junction_count;
    j["channels"] = ws.graph.size();
    j["coordination_edges"] = ws.graph.edge_count();
    j["coordination_edges_by_degree_formula"] = coordination_edge_count(sc.network);
    j["degree_min"] = ws.graph.min_degree();
    j["degree_max"] = ws.graph.max_degree();
    j["radius"] = ws.graph.radius();
    j["diameter"] = ws.graph.diameter();
    j["weight_floor"] = ws.weights.weight_floor();
    j["weight_ceiling"] = ws.weights.weight_ceiling();
    j["gain_bound"] = ws.weights.shift_gain_bound();
    j["gain_actual"] = ws.weights.shift_gain();
    j["stochastic_residual"] = ws.weights.stochastic_residual();
    j["lambda_second"] = ws.spectrum.lambda_second;
    j["lambda_min"] = ws.spectrum.lambda_min;
    j["spectral_midpoint"] = ws.spectrum.midpoint;
    j["blend_floor_raw"] = ws.spectrum.blend_floor_raw;
    j["blend_floor"] = ws.blend_floor;
    return j;
}

struct ReportContext {
    std::string engine;
    std::uint64_t seed = 0;
    double blend_ceiling_nominal = 0.0;
    double blend_ceiling_active = 0.0;
};

inline nlohmann::json run_report(const Scenario& sc, const Workspace& ws, const RunTrace& tr,
                                 const RunAudit& audit, const ContractionBounds& bounds,
                                 const ReportContext& ctx) {
    nlohmann::json j;
    j["topology"] = topology_report(sc, ws);
    j["engine"] = ctx.engine;
    j["seed"] = ctx.seed;

    nlohmann::json run;
    run["converged"] = tr.converged;
    run["steps"] = tr.steps;
    run["k_max"] = sc.k_max;
    run["gamma"] = sc.gamma;
    run["initial_infnorm"] = infinity_norm(tr.states.front());
    run["final_spread"] = spread(tr.states.back());
    run["messages"] = tr.messages;
    run["faults_active"] = sc.has_faults;
    j["run"] = run;

    nlohmann::json b;
    b["blend_ceiling_nominal"] = ctx.blend_ceiling_nominal;
    b["blend_ceiling_active"] = ctx.blend_ceiling_active;
    b["entry_low"] = bounds.eps_low;
    b["entry_high"] = bounds.eps_high;
    b["rate_upper"] = bounds.rate_upper;
    b["rate_lower"] = bounds.rate_lower;
    b["rate_degree_only"] = bounds.rate_degree_only;
    b["settling_bound"] = bounds.settling_bound;
    j["bounds"] = b;

    nlohmann::json c;
    c["mean_drift"] = audit.mean_drift;
    c["infnorm_rise"] = audit.infnorm_rise;
    c["rate_excess_down"] = audit.rate_excess_down;
    c["rate_excess_up"] = audit.rate_excess_up;
    c["rate_limits_ok"] =
        audit.rate_excess_down <= 1e-12 && audit.rate_excess_up <= 1e-12;
    c["eta_min_seen"] = audit.eta_min_seen;
    c["eta_max_seen"] = audit.eta_max_seen;
    c["eta_below_floor"] = audit.eta_below_floor;
    c["eta_above_nominal_ceiling"] = audit.eta_above_nominal;
    c["entry_min_seen"] = audit.eps_min_seen;
    c["entry_max_seen"] = audit.eps_max_seen;
    c["service_band_violations"] = audit.service_band_violations;
    c["final_consensus_gap"] = audit.final_consensus_gap;
    j["checks"] = c;

    j["eta"] = tr.etas;
    return j;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace ocnreg
