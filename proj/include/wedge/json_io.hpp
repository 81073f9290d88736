// json_io.hpp -- the JSON parameter schema (both input forms), report
// serialization and the CSV writers. Unknown keys are rejected everywhere.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "wedge/fbp.hpp"
#include "wedge/params.hpp"
#include "wedge/policy.hpp"
#include "wedge/simulate.hpp"
#include "wedge/verify.hpp"

namespace wedge {

// Parsed problem description. Exactly one of the "market" / "aux" blocks is
// required; when only "aux" is given a market is synthesized on demand.
struct ProblemInput {
    AuxParams aux;
    Costs costs;
    std::optional<MarketParams> market;
    std::optional<Position> position;
    std::optional<SweepSpec> sweep;
    SimConfig sim;
    ShootTol tol;
};

ProblemInput parse_problem(const nlohmann::json& j);
ProblemInput parse_problem_file(const std::string& path);  // "-" reads stdin

// market if given, else calibrated from aux
MarketParams effective_market(const ProblemInput& in);

nlohmann::json to_json(const CaseReport& rep);
nlohmann::json to_json(const SimResult& res);
nlohmann::json to_json(const std::vector<CheckReport>& reports);
nlohmann::json solution_summary_json(const PolicySurface& surface);

// CSV writers; every file starts with a '# key=value' echo block.
void write_path_csv(std::ostream& os, const FreeBoundarySolution& sol, const AuxParams& aux);
void write_surface_csv(std::ostream& os, const PolicySurface& surface, int points);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, const SweepSpec& spec,
                     const AuxParams& base);

}  // namespace wedge
