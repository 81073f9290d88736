// wedge_cli.cpp -- batch front-end: classify | solve | sweep | value |
// simulate | verify. Emits plot-ready CSV/JSON; never plots.
//
// Exit codes: 0 success, 2 invalid input, 3 ill-posed, 4 below critical
// cost, 5 numerical failure, 6 verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wedge/json_io.hpp"
#include "wedge/version.hpp"

namespace fs = std::filesystem;
using wedge::ProblemInput;

namespace {

struct Options {
    std::string params_path;
    std::string out_dir = ".";
    double tol = 0.0;       // 0 = library default
    long long seed = -1;    // -1 = from params/default
    std::string grid;       // "param:lo:hi:points[:log]"
    int dump_paths = 0;
};

wedge::SweepSpec parse_grid_flag(const std::string& s) {
    wedge::SweepSpec spec;
    std::stringstream ss(s);
    std::string item;
    std::vector<std::string> parts;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 4) throw wedge::InvalidParams("--grid expects param:lo:hi:points[:log]");
    spec.param = parts[0];
    spec.lo = std::stod(parts[1]);
    spec.hi = std::stod(parts[2]);
    spec.points = std::stoi(parts[3]);
    spec.log_scale = parts.size() > 4 && parts[4] == "log";
    if (spec.points < 1) throw wedge::InvalidParams("--grid: empty grid");
    return spec;
}

ProblemInput load(const Options& o) {
    if (o.params_path.empty())
        throw wedge::InvalidParams("--params <file> is required (use '-' for stdin)");
    ProblemInput in = wedge::parse_problem_file(o.params_path);
    if (o.tol > 0.0) {
        in.tol.rel = o.tol;
        in.tol.abs = o.tol * 1e-2;
    }
    if (o.seed >= 0) in.sim.seed = static_cast<std::uint64_t>(o.seed);
    if (!o.grid.empty()) in.sweep = parse_grid_flag(o.grid);
    return in;
}

std::ofstream open_out(const Options& o, const std::string& name) {
    fs::create_directories(o.out_dir);
    const fs::path p = fs::path(o.out_dir) / name;
    std::ofstream f(p);
    if (!f) throw wedge::InvalidParams("cannot write output file: " + p.string());
    return f;
}

wedge::PolicySurface build_surface(const ProblemInput& in) {
    wedge::FreeBoundarySolution sol = wedge::solve_boundaries(in.aux, in.costs, in.tol);
    return wedge::PolicySurface(std::move(sol), in.aux, in.costs);
}

int cmd_classify(const Options& o) {
    ProblemInput in = load(o);
    const wedge::CaseReport rep = wedge::classify(in.aux);
    std::cout << wedge::to_json(rep).dump(2) << "\n";
    return 0;
}

int cmd_solve(const Options& o) {
    ProblemInput in = load(o);
    wedge::PolicySurface surface = build_surface(in);
    const nlohmann::json summary = wedge::solution_summary_json(surface);
    auto fj = open_out(o, "boundaries.json");
    fj << summary.dump(2) << "\n";
    auto fc = open_out(o, "path.csv");
    wedge::write_path_csv(fc, surface.solution(), in.aux);
    auto fsurf = open_out(o, "surface.csv");
    wedge::write_surface_csv(fsurf, surface, 2001);
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const Options& o) {
    ProblemInput in = load(o);
    if (!in.sweep) throw wedge::InvalidParams("sweep: provide a sweep spec (JSON or --grid)");
    const wedge::Position ref{1.0, 1.0, 1.0};
    auto rows = wedge::sweep_parameter(in.aux, in.costs, *in.sweep, ref, true);
    auto f = open_out(o, "sweep.csv");
    wedge::write_sweep_csv(f, rows, *in.sweep, in.aux);
    wedge::write_sweep_csv(std::cout, rows, *in.sweep, in.aux);
    return 0;
}

int cmd_value(const Options& o) {
    ProblemInput in = load(o);
    if (!in.position) throw wedge::InvalidParams("value: 'position' block is required");
    wedge::PolicySurface surface = build_surface(in);
    const wedge::Position pos = *in.position;

    nlohmann::json j;
    j["p"] = pos.fraction();
    j["paper_wealth"] = pos.paper_wealth();
    j["value"] = surface.value(pos);
    j["certainty_equivalent"] = surface.certainty_equivalent(pos);
    const wedge::Region reg = surface.region(pos.fraction());
    j["region"] = reg == wedge::Region::buy ? "buy" : reg == wedge::Region::wedge ? "wedge" : "sell";
    const auto trade = surface.rebalance_to_wedge(pos);
    j["rebalance_units"] = trade.units;
    const wedge::MarketParams market = wedge::effective_market(in);
    const auto ctl = surface.feedback_controls(trade.after, market);
    j["consumption"] = ctl.consumption;
    j["liquid_exposure"] = ctl.liquid_exposure;
    if (pos.paper_wealth() > 0.0)
        j["merton_value_paper_wealth"] = wedge::merton_value(pos.paper_wealth(), in.aux);
    j["version"] = wedge::kVersion;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_simulate(const Options& o) {
    ProblemInput in = load(o);
    if (!in.position) throw wedge::InvalidParams("simulate: 'position' block is required");
    wedge::PolicySurface surface = build_surface(in);
    const wedge::MarketParams market = wedge::effective_market(in);
    const wedge::SimResult res = wedge::simulate_policy(*in.position, surface, market, in.sim);
    nlohmann::json j = wedge::to_json(res);
    j["value_candidate"] = surface.value(surface.rebalance_to_wedge(*in.position).after);
    auto f = open_out(o, "simresult.json");
    f << j.dump(2) << "\n";
    std::cout << j.dump(2) << "\n";
    if (o.dump_paths > 0) {
        auto fd = open_out(o, "paths.csv");
        wedge::dump_paths_csv(fd, *in.position, surface, market, in.sim, o.dump_paths);
    }
    return 0;
}

int cmd_verify(const Options& o) {
    ProblemInput in = load(o);
    std::vector<wedge::CheckReport> reports =
        wedge::run_identity_suite(wedge::FieldContext::from_aux(in.aux));

    bool solvable = true;
    try {
        wedge::PolicySurface surface = build_surface(in);
        const wedge::MarketParams market = wedge::effective_market(in);
        auto hjb = wedge::run_hjb_suite(surface, market);
        reports.insert(reports.end(), hjb.begin(), hjb.end());
        auto statics = wedge::run_statics_suite(in.aux, in.costs);
        reports.insert(reports.end(), statics.begin(), statics.end());
    } catch (const wedge::IllPosed&) {
        solvable = false;
    } catch (const wedge::BelowCriticalCost&) {
        solvable = false;
    }

    nlohmann::json j;
    j["checks"] = wedge::to_json(reports);
    j["all_pass"] = wedge::all_pass(reports);
    j["solvable"] = solvable;
    j["version"] = wedge::kVersion;
    auto f = open_out(o, "verify.json");
    f << j.dump(2) << "\n";
    std::cout << j.dump(2) << "\n";
    return wedge::all_pass(reports) ? 0 : 6;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"no-transaction wedge solver for the two-risky-asset "
                 "investment/consumption problem with proportional costs on one asset"};
    app.set_version_flag("--version", wedge::kVersion);
    app.require_subcommand(1);

    Options o;
    app.add_option("--params", o.params_path, "parameter JSON file ('-' for stdin)");
    app.add_option("--out", o.out_dir, "output directory (default '.')");
    app.add_option("--tol", o.tol, "relative solver tolerance override");
    app.add_option("--seed", o.seed, "simulation RNG seed override");
    app.add_option("--grid", o.grid, "sweep grid: param:lo:hi:points[:log]");
    app.add_option("--dump", o.dump_paths, "simulate: dump the first N paths as CSV");

    auto* c_classify = app.add_subcommand("classify", "well-posedness classification");
    auto* c_solve = app.add_subcommand("solve", "solve the free boundary problem");
    auto* c_sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    auto* c_value = app.add_subcommand("value", "evaluate value function and controls");
    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo policy verification");
    auto* c_verify = app.add_subcommand("verify", "run the verification suite");
    for (auto* sub : {c_classify, c_solve, c_sweep, c_value, c_sim, c_verify})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (const char* env = std::getenv("WEDGE_SOLVER_THREADS")) {
#ifdef _OPENMP
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
#else
        (void)env;
#endif
    }

    try {
        if (c_classify->parsed()) return cmd_classify(o);
        if (c_solve->parsed()) return cmd_solve(o);
        if (c_sweep->parsed()) return cmd_sweep(o);
        if (c_value->parsed()) return cmd_value(o);
        if (c_sim->parsed()) return cmd_simulate(o);
        if (c_verify->parsed()) return cmd_verify(o);
    } catch (const wedge::BelowCriticalCost& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const wedge::IllPosed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const wedge::NumericalFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const wedge::InvalidParams& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const wedge::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
    return 0;
}
