// simulate.hpp -- Monte Carlo verification of the optimal policy: consume C*,
// hold Pi* in the liquid asset, and reflect the illiquid fraction at the
// wedge boundaries by exact projection trades. Paths are embarrassingly
// parallel; for a fixed seed any scheduling yields the same result.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "wedge/policy.hpp"

namespace wedge {

struct SimConfig {
    double horizon_years = 0.0;     // 0 => sized from the truncation bound
    double dt = 5e-4;               // Euler step (years)
    std::int64_t paths = 100000;    // total paths (antithetic: must be even)
    std::uint64_t seed = 1;
    bool antithetic = true;
    double tail_target = 1e-3;      // auto-sizing: bound < tail_target * |V^C|

    // Overrides used to simulate deliberately suboptimal admissible policies
    // (testing only): consume a fixed fraction of paper wealth / hold a fixed
    // liquid fraction instead of the feedback controls.
    std::optional<double> const_consumption_frac;
    std::optional<double> const_liquid_frac;

    void validate() const;
};

struct SimResult {
    double estimate;          // mean discounted utility over [0, T]
    double std_error;
    double ci95_lo, ci95_hi;
    double truncation_bound;  // analytic bound on the discarded tail
    double horizon_years;
    std::int64_t paths;
    std::int64_t steps_per_path;
    std::int64_t boundary_hits_buy;
    std::int64_t boundary_hits_sell;
    std::int64_t solvency_violations;  // must be 0

    bool operator==(const SimResult&) const = default;
};

// Bound on |E[e^{-delta T} V^C(state_T)]| for a start at `pos`:
//   bound(T) = |V^C(pos)| * exp(-kappa_lb T),
//   kappa_lb = (b1/(R b4)) * min(n(q_star), n(q_upper)),
// from the pathwise factorisation of e^{-delta t} V^C under the optimal
// policy (see README). Used only to size T.
double truncation_bound(const PolicySurface& surface, const Position& pos, double T);

// Smallest horizon (rounded up to a multiple of dt) with
// truncation_bound(surface, pos, T) <= frac * |V^C(pos)|.
double size_horizon(const PolicySurface& surface, const Position& pos, double frac, double dt);

// OpenMP over path pairs. Deterministic for fixed (cfg.seed, cfg.paths).
SimResult simulate_policy(const Position& pos, const PolicySurface& surface,
                          const MarketParams& market, const SimConfig& cfg);

// Plain-loop reference implementation; bit-identical to simulate_policy.
SimResult simulate_policy_serial(const Position& pos, const PolicySurface& surface,
                                 const MarketParams& market, const SimConfig& cfg);

// CSV dump (t, X, Y, Theta, P, Cstar) for the first `max_paths` paths.
void dump_paths_csv(std::ostream& os, const Position& pos, const PolicySurface& surface,
                    const MarketParams& market, const SimConfig& cfg, int max_paths);

}  // namespace wedge
