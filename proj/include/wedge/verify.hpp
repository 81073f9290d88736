// verify.hpp -- callable verification suite packaging the testable claims:
// closed-form identity oracles, HJB residual and variational-inequality
// checks, smoothness pasting, and comparative-statics sweeps.
#pragma once

#include <string>
#include <vector>

#include "wedge/policy.hpp"

namespace wedge {

struct CheckReport {
    std::string name;
    bool pass;
    double worst;       // worst violation magnitude (relative where sensible)
    double location;    // q, n or p of the worst case
    std::string detail;
};

bool all_pass(const std::vector<CheckReport>& reports);

// Closed-form identities of the field functions plus the dual-form oracle
// equivalence, scanned on grid_n points. Deterministic for fixed inputs;
// `parallel` only changes the schedule, never the result.
std::vector<CheckReport> run_identity_suite(const FieldContext& ctx, int grid_n = 1000,
                                            bool parallel = true);

// HJB residual on the wedge, variational-inequality signs per region, the
// closed-form N-operator value on the buy region, and C^2 pasting at
// p_star, p_upper and p = 1.
std::vector<CheckReport> run_hjb_suite(const PolicySurface& surface, const MarketParams& market,
                                       int grid_n = 2001, bool parallel = true);

// --- parameter sweeps ------------------------------------------------------

struct SweepSpec {
    std::string param;  // xi | b1 | b2 | b3 | delta | alpha | lambda | gamma
    double lo = 0.0;
    double hi = 0.0;
    int points = 10;
    bool log_scale = false;
};

struct SweepRow {
    double param_value;
    double xi;
    bool posed;
    double q_star, q_upper, p_star, p_upper, ce;
    std::string reason;  // non-empty when unposed
};

// One solve per grid point; unposed points are reported, not fatal. The
// certainty equivalent is evaluated at ref_pos.
std::vector<SweepRow> sweep_parameter(const AuxParams& base, const Costs& costs,
                                      const SweepSpec& spec, const Position& ref_pos,
                                      bool parallel = true);

// Comparative-statics monotonicity assertions, run on
// 10-point grids around `base` at fixed xi. The b2 sweep is reported as a
// diagnostic only (numerical evidence, no assertion).
std::vector<CheckReport> run_statics_suite(const AuxParams& base, const Costs& costs,
                                           int points = 10, bool parallel = true);

}  // namespace wedge
