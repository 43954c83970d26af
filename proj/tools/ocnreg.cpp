// Command line front end for planning shared reference levels across an
// open-channel network.
//
// Exit codes: 0 the run converged (or the query succeeded), 2 the run
// ended without convergence, 1 anything failed.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ocnreg/analysis.hpp"
#include "ocnreg/distributed.hpp"
#include "ocnreg/io.hpp"
#include "ocnreg/protocol.hpp"
#include "ocnreg/scenario.hpp"

namespace {

struct LoadedRun {
    ocnreg::Scenario scenario;
    ocnreg::Vec x0;
};

LoadedRun prepare(const std::string& scenario_path, std::uint64_t seed) {
    LoadedRun lr{ocnreg::load_scenario_file(scenario_path), {}};
    lr.x0 = ocnreg::initial_offsets(lr.scenario, seed);
    if (lr.scenario.embed_requested) {
        auto [embedded, mapped] = ocnreg::embed_into_complete(lr.scenario, lr.x0);
        lr.scenario = std::move(embedded);
        lr.x0 = std::move(mapped);
    }
    return lr;
}

void print_topology(const nlohmann::json& t) {
    for (auto it = t.begin(); it != t.end(); ++it) {
        std::string value;
        if (it->is_number_float())
            value = ocnreg::format_double(it->get<double>());
        else
            value = it->dump();
        std::printf("%-36s %s\n", it.key().c_str(), value.c_str());
    }
}

int cmd_report_topology(const std::string& scenario_path) {
    const ocnreg::Scenario sc = ocnreg::load_scenario_file(scenario_path);
    const ocnreg::Workspace ws(sc);
    print_topology(ocnreg::topology_report(sc, ws));
    return 0;
}

ocnreg::RunTrace run_engine(const ocnreg::Scenario& sc, const ocnreg::Workspace& ws,
                            const ocnreg::Vec& x0, const std::string& mode) {
    if (mode == "central") return ocnreg::run_planner(ws.weights, sc.active, x0, ws.settings);
    ocnreg::SyncNetwork net(ws.graph, ws.weights, sc.active, ws.settings, sc.shared_profiles);
    return net.run(x0);
}

nlohmann::json make_run_report(const ocnreg::Scenario& sc, const ocnreg::Workspace& ws,
                               const ocnreg::RunTrace& tr, const std::string& mode,
                               std::uint64_t seed) {
    const double x0_inf = ocnreg::infinity_norm(tr.states.front());
    ocnreg::ReportContext ctx;
    ctx.engine = mode;
    ctx.seed = seed;
    ctx.blend_ceiling_nominal = ocnreg::blend_ceiling(sc.nominal, ws.settings.gain_bound, x0_inf,
                                                      ws.blend_floor, sc.k_max);
    ctx.blend_ceiling_active = ocnreg::blend_ceiling(sc.active, ws.settings.gain_bound, x0_inf,
                                                     ws.blend_floor, sc.k_max);

    ocnreg::AuditInputs ai;
    ai.trace = &tr;
    ai.active_limits = &sc.active;
    ai.weights = &ws.weights;
    ai.blend_floor = ws.blend_floor;
    ai.blend_ceiling_nominal = ctx.blend_ceiling_nominal;
    ai.service_bands = sc.service_bands();
    const ocnreg::RunAudit audit = ocnreg::audit_run(ai);

    const ocnreg::ContractionBounds bounds = ocnreg::contraction_bounds(
        ws.graph.min_degree(), ws.graph.max_degree(), ws.graph.radius(), ws.graph.diameter(),
        ws.weights.weight_floor(), ws.weights.weight_ceiling(), ctx.blend_ceiling_active);

    return ocnreg::run_report(sc, ws, tr, audit, bounds, ctx);
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir, std::uint64_t seed,
            const std::string& mode) {
    LoadedRun lr = prepare(scenario_path, seed);
    const ocnreg::Workspace ws(lr.scenario);
    const ocnreg::RunTrace tr = run_engine(lr.scenario, ws, lr.x0, mode);

    std::filesystem::create_directories(out_dir);
    ocnreg::write_trace_csv_file(out_dir + "/trace.csv", tr);
    ocnreg::write_json_file(out_dir + "/report.json",
                            make_run_report(lr.scenario, ws, tr, mode, seed));

    std::printf("%s: %s after %d steps (spread %s, gamma %s)\n", lr.scenario.name.c_str(),
                tr.converged ? "converged" : "not converged", tr.steps,
                ocnreg::format_double(ocnreg::spread(tr.states.back())).c_str(),
                ocnreg::format_double(lr.scenario.gamma).c_str());
    return tr.converged ? 0 : 2;
}

int cmd_compare(const std::string& scenario_path, const std::string& out_dir,
                std::uint64_t seed) {
    LoadedRun lr = prepare(scenario_path, seed);
    const ocnreg::Workspace ws(lr.scenario);

    const ocnreg::RunTrace central = run_engine(lr.scenario, ws, lr.x0, "central");
    const ocnreg::RunTrace distributed = run_engine(lr.scenario, ws, lr.x0, "distributed");

    double state_diff = 0.0;
    double eta_diff = 0.0;
    bool shape_match = central.states.size() == distributed.states.size() &&
                       central.etas.size() == distributed.etas.size() &&
                       central.converged == distributed.converged &&
                       central.steps == distributed.steps;
    if (shape_match) {
        for (std::size_t k = 0; k < central.states.size(); ++k)
            for (std::size_t i = 0; i < central.states[k].size(); ++i)
                state_diff = std::max(
                    state_diff, std::fabs(central.states[k][i] - distributed.states[k][i]));
        for (std::size_t k = 0; k < central.etas.size(); ++k)
            eta_diff = std::max(eta_diff, std::fabs(central.etas[k] - distributed.etas[k]));
    }
    const bool agree = shape_match && state_diff <= 1e-12 && eta_diff <= 1e-12;

    std::filesystem::create_directories(out_dir);
    ocnreg::write_trace_csv_file(out_dir + "/trace_central.csv", central);
    ocnreg::write_trace_csv_file(out_dir + "/trace_distributed.csv", distributed);
    nlohmann::json cj;
    cj["scenario"] = lr.scenario.name;
    cj["seed"] = seed;
    cj["agree"] = agree;
    cj["shape_match"] = shape_match;
    cj["max_state_diff"] = state_diff;
    cj["max_eta_diff"] = eta_diff;
    cj["steps_central"] = central.steps;
    cj["steps_distributed"] = distributed.steps;
    cj["converged"] = central.converged;
    cj["messages_distributed"] = distributed.messages;
    ocnreg::write_json_file(out_dir + "/compare.json", cj);

    if (!agree) {
        std::fprintf(stderr, "engines disagree: max state diff %s, max eta diff %s\n",
                     ocnreg::format_double(state_diff).c_str(),
                     ocnreg::format_double(eta_diff).c_str());
        return 1;
    }
    std::printf("engines agree (max state diff %s); %s after %d steps\n",
                ocnreg::format_double(state_diff).c_str(),
                central.converged ? "converged" : "not converged", central.steps);
    return central.converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shared reference level planning for open-channel networks"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    std::uint64_t seed = 1;
    std::string mode = "distributed";

    auto* topo = app.add_subcommand("report-topology",
                                    "print network, weight and spectrum facts for a scenario");
    topo->add_option("--scenario", scenario_path, "scenario file")->required();

    auto* run = app.add_subcommand("run", "plan reference levels and write trace and report");
    run->add_option("--scenario", scenario_path, "scenario file")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--seed", seed, "seed for random initial offsets");
    run->add_option("--mode", mode, "engine to use")
        ->check(CLI::IsMember({"central", "distributed"}));

    auto* cmp = app.add_subcommand(
        "compare", "run both engines on the same start and require identical traces");
    cmp->add_option("--scenario", scenario_path, "scenario file")->required();
    cmp->add_option("--out", out_dir, "output directory")->required();
    cmp->add_option("--seed", seed, "seed for random initial offsets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (topo->parsed()) return cmd_report_topology(scenario_path);
        if (run->parsed()) return cmd_run(scenario_path, out_dir, seed, mode);
        if (cmp->parsed()) return cmd_compare(scenario_path, out_dir, seed);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
