// json_io.cpp -- JSON schema parsing with strict key validation, plus the
// CSV/JSON exporters.

#include "wedge/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wedge/field.hpp"
#include "wedge/version.hpp"

namespace wedge {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) throw InvalidParams(where + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw InvalidParams(where + ": unknown key '" + it.key() + "'");
    }
}

double need_num(const json& j, const std::string& where, const std::string& key) {
    if (!j.contains(key)) throw InvalidParams(where + ": missing key '" + key + "'");
    if (!j[key].is_number()) throw InvalidParams(where + ": key '" + key + "' must be a number");
    return j[key].get<double>();
}

double opt_num(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    return j[key].get<double>();
}

std::string g17(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

}  // namespace

ProblemInput parse_problem(const json& j) {
    require_keys(j, "problem",
                 {"market", "aux", "position", "sweep", "sim", "tol"});
    if (j.contains("market") == j.contains("aux"))
        throw InvalidParams("problem: exactly one of 'market' or 'aux' is required");

    ProblemInput in;
    if (j.contains("market")) {
        const json& m = j["market"];
        require_keys(m, "market",
                     {"r", "mu", "sigma", "alpha", "eta", "rho", "delta", "R", "lambda", "gamma"});
        MarketParams p;
        p.r = need_num(m, "market", "r");
        p.mu = need_num(m, "market", "mu");
        p.sigma = need_num(m, "market", "sigma");
        p.alpha = need_num(m, "market", "alpha");
        p.eta = need_num(m, "market", "eta");
        p.rho = need_num(m, "market", "rho");
        p.delta = need_num(m, "market", "delta");
        p.R = need_num(m, "market", "R");
        p.costs.lambda_buy = opt_num(m, "lambda", 0.0);
        p.costs.gamma_sell = opt_num(m, "gamma", 0.0);
        in.market = p;
        in.costs = p.costs;
        in.aux = derive_aux(p);
    } else {
        const json& a = j["aux"];
        require_keys(a, "aux", {"R", "b1", "b2", "b3", "b4", "xi", "lambda", "gamma"});
        const double R = need_num(a, "aux", "R");
        const double b1 = need_num(a, "aux", "b1");
        const double b2 = need_num(a, "aux", "b2");
        const double b3 = need_num(a, "aux", "b3");
        // b4 scales value, not boundaries; default 1 when only geometry matters
        const double b4 = opt_num(a, "b4", 1.0);
        Costs c;
        if (a.contains("xi")) {
            if (a.contains("lambda") || a.contains("gamma"))
                throw InvalidParams("aux: give either 'xi' or 'lambda'/'gamma', not both");
            // canonical split: all of the round-trip cost on the purchase side
            c.lambda_buy = need_num(a, "aux", "xi");
            c.gamma_sell = 0.0;
        } else {
            c.lambda_buy = opt_num(a, "lambda", 0.0);
            c.gamma_sell = opt_num(a, "gamma", 0.0);
        }
        c.validate();
        in.costs = c;
        in.aux = aux_from_values(R, b1, b2, b3, b4, c.round_trip());
    }

    if (j.contains("position")) {
        const json& p = j["position"];
        require_keys(p, "position", {"x", "y", "theta"});
        in.position = Position{need_num(p, "position", "x"), need_num(p, "position", "y"),
                               need_num(p, "position", "theta")};
    }
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        require_keys(s, "sweep", {"param", "min", "max", "points", "scale"});
        SweepSpec spec;
        if (!s.contains("param") || !s["param"].is_string())
            throw InvalidParams("sweep: 'param' (string) is required");
        spec.param = s["param"].get<std::string>();
        spec.lo = need_num(s, "sweep", "min");
        spec.hi = need_num(s, "sweep", "max");
        spec.points = static_cast<int>(need_num(s, "sweep", "points"));
        if (s.contains("scale")) {
            const std::string sc = s["scale"].get<std::string>();
            if (sc != "lin" && sc != "log") throw InvalidParams("sweep: scale must be lin|log");
            spec.log_scale = (sc == "log");
        }
        if (spec.points < 1) throw InvalidParams("sweep: empty grid");
        in.sweep = spec;
    }
    if (j.contains("sim")) {
        const json& s = j["sim"];
        require_keys(s, "sim",
                     {"T", "dt", "paths", "seed", "antithetic", "tail_target"});
        in.sim.horizon_years = opt_num(s, "T", 0.0);
        in.sim.dt = opt_num(s, "dt", in.sim.dt);
        in.sim.paths = static_cast<std::int64_t>(opt_num(s, "paths", double(in.sim.paths)));
        in.sim.seed = static_cast<std::uint64_t>(opt_num(s, "seed", double(in.sim.seed)));
        if (s.contains("antithetic")) in.sim.antithetic = s["antithetic"].get<bool>();
        in.sim.tail_target = opt_num(s, "tail_target", in.sim.tail_target);
    }
    if (j.contains("tol")) {
        const json& t = j["tol"];
        require_keys(t, "tol", {"rel", "abs"});
        in.tol.rel = opt_num(t, "rel", in.tol.rel);
        in.tol.abs = opt_num(t, "abs", in.tol.abs);
    }
    return in;
}

ProblemInput parse_problem_file(const std::string& path) {
    json j;
    try {
        if (path == "-") {
            std::cin >> j;
        } else {
            std::ifstream f(path);
            if (!f) throw InvalidParams("cannot open parameter file: " + path);
            f >> j;
        }
    } catch (const json::exception& e) {
        throw InvalidParams(std::string("JSON parse error: ") + e.what());
    }
    return parse_problem(j);
}

MarketParams effective_market(const ProblemInput& in) {
    if (in.market) return *in.market;
    return market_from_aux(in.aux, in.costs);
}

json to_json(const CaseReport& rep) {
    json j;
    j["label"] = to_string(rep.label);
    j["q_M"] = rep.q_M;
    j["m_M"] = rep.m_M;
    j["m_at_1"] = rep.m_at_1;
    j["ell_at_1"] = rep.ell_at_1;
    j["xi"] = rep.xi;
    j["posed_for_given_xi"] = rep.posed_for_given_xi;
    if (rep.p_minus) j["p_minus"] = *rep.p_minus;
    if (rep.p_plus) j["p_plus"] = *rep.p_plus;
    if (rep.xi_bar) j["xi_bar"] = *rep.xi_bar;
    j["version"] = kVersion;
    return j;
}

json to_json(const SimResult& res) {
    json j;
    j["estimate"] = res.estimate;
    j["std_error"] = res.std_error;
    j["ci95"] = {res.ci95_lo, res.ci95_hi};
    j["truncation_bound"] = res.truncation_bound;
    j["horizon_years"] = res.horizon_years;
    j["paths"] = res.paths;
    j["steps_per_path"] = res.steps_per_path;
    j["boundary_hits_buy"] = res.boundary_hits_buy;
    j["boundary_hits_sell"] = res.boundary_hits_sell;
    j["solvency_violations"] = res.solvency_violations;
    j["version"] = kVersion;
    return j;
}

json to_json(const std::vector<CheckReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        json j;
        j["name"] = r.name;
        j["pass"] = r.pass;
        j["worst"] = r.worst;
        j["location"] = r.location;
        if (!r.detail.empty()) j["detail"] = r.detail;
        arr.push_back(std::move(j));
    }
    return arr;
}

json solution_summary_json(const PolicySurface& surface) {
    const FreeBoundarySolution& sol = surface.solution();
    const AuxParams& aux = surface.aux();
    json j;
    j["params"] = {{"R", aux.R}, {"b1", aux.b1}, {"b2", aux.b2},
                   {"b3", aux.b3}, {"b4", aux.b4}};
    j["xi"] = sol.xi;
    j["q_star"] = sol.q_star;
    j["q_upper"] = sol.q_upper;
    j["p_star"] = surface.p_star();
    j["p_upper"] = surface.p_upper();
    j["A_star"] = sol.A_star;
    j["A_upper"] = sol.A_upper;
    if (sol.a_const) j["a"] = *sol.a_const;
    j["n_at_q_star"] = sol.path.samples.front().n;
    j["n_at_q_upper"] = sol.path.samples.back().n;
    j["lambda"] = surface.costs().lambda_buy;
    j["gamma"] = surface.costs().gamma_sell;
    j["version"] = kVersion;
    return j;
}

namespace {
void echo_header(std::ostream& os, const AuxParams& aux) {
    os << "# wedge " << kVersion << "\n";
    os << "# R=" << g17(aux.R) << " b1=" << g17(aux.b1) << " b2=" << g17(aux.b2)
       << " b3=" << g17(aux.b3) << " b4=" << g17(aux.b4) << " xi=" << g17(aux.xi) << "\n";
}
}  // namespace

void write_path_csv(std::ostream& os, const FreeBoundarySolution& sol, const AuxParams& aux) {
    echo_header(os, aux);
    os << "# q_star=" << g17(sol.q_star) << " q_upper=" << g17(sol.q_upper) << "\n";
    os << "q,n,m_of_q,ell_of_q,I\n";
    for (const auto& s : sol.path.samples) {
        os << g17(s.q) << ',' << g17(s.n) << ',' << g17(m_of(s.q, aux)) << ','
           << g17(ell_of(s.q, aux)) << ',' << g17(s.I) << "\n";
    }
}

void write_surface_csv(std::ostream& os, const PolicySurface& surface, int points) {
    const AuxParams& aux = surface.aux();
    echo_header(os, aux);
    os << "# lambda=" << g17(surface.costs().lambda_buy)
       << " gamma=" << g17(surface.costs().gamma_sell) << " p_star=" << g17(surface.p_star())
       << " p_upper=" << g17(surface.p_upper()) << "\n";
    os << "p,q,G,G1,G2,region\n";
    const double lo = surface.costs().lambda_buy > 0.0
                          ? -0.5 / surface.costs().lambda_buy
                          : surface.p_star() - 0.5;
    const double hi = surface.costs().gamma_sell > 0.0 ? 0.99 / surface.costs().gamma_sell
                                                       : surface.p_upper() + 0.5;
    for (int i = 0; i < points; ++i) {
        const double p = lo + (hi - lo) * i / (points - 1.0);
        const Region reg = surface.region(p);
        const double q = reg == Region::wedge ? surface.q_of_p(p)
                                              : std::numeric_limits<double>::quiet_NaN();
        os << g17(p) << ',' << g17(q) << ',' << g17(surface.G(p)) << ',' << g17(surface.G1(p))
           << ',' << g17(surface.G2(p)) << ','
           << (reg == Region::buy ? "buy" : reg == Region::wedge ? "wedge" : "sell") << "\n";
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, const SweepSpec& spec,
                     const AuxParams& base) {
    echo_header(os, base);
    os << "# sweep param=" << spec.param << " lo=" << g17(spec.lo) << " hi=" << g17(spec.hi)
       << " points=" << spec.points << " scale=" << (spec.log_scale ? "log" : "lin") << "\n";
    const bool have_xi_col = spec.param != "xi";
    os << spec.param << (have_xi_col ? ",xi" : "") << ",q_star,q_upper,p_star,p_upper,ce,reason\n";
    for (const auto& r : rows) {
        os << g17(r.param_value);
        if (have_xi_col) os << ',' << g17(r.xi);
        os << ',' << g17(r.q_star) << ',' << g17(r.q_upper) << ',' << g17(r.p_star) << ','
           << g17(r.p_upper) << ',' << g17(r.ce) << ',' << r.reason << "\n";
    }
}

}  // namespace wedge
