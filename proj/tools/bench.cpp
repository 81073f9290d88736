// bench.cpp -- timing comparison of the OpenMP kernels against their serial
// reference implementations: identity-grid scans, parameter sweeps and the
// Monte Carlo path loop.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wedge/json_io.hpp"
#include "wedge/simulate.hpp"
#include "wedge/verify.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double time_of(F&& f) {
    const auto t0 = Clock::now();
    f();
    return seconds(t0, Clock::now());
}

}  // namespace

int main() {
    using namespace wedge;
#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    std::printf("threads: %d\n", threads);
    std::printf("%-28s %12s %12s %9s\n", "kernel", "serial [s]", "parallel [s]", "speedup");

    const AuxParams aux = aux_from_values(0.5, 0.25, 1.75, 0.85, 13.0, 0.2);
    const Costs costs{1.0 / 11.0, 1.0 / 11.0};
    const FieldContext ctx = FieldContext::from_aux(aux);

    {
        const double ts = time_of([&] { run_identity_suite(ctx, 200000, false); });
        const double tp = time_of([&] { run_identity_suite(ctx, 200000, true); });
        std::printf("%-28s %12.4f %12.4f %8.2fx\n", "identity_scan(200k)", ts, tp, ts / tp);
    }
    {
        const Position ref{1.0, 1.0, 1.0};
        const SweepSpec spec{"xi", 1e-3, 2.0, 24, true};
        const double ts = time_of([&] { sweep_parameter(aux, costs, spec, ref, false); });
        const double tp = time_of([&] { sweep_parameter(aux, costs, spec, ref, true); });
        std::printf("%-28s %12.4f %12.4f %8.2fx\n", "xi_sweep(24 solves)", ts, tp, ts / tp);
    }
    {
        FreeBoundarySolution sol = solve_boundaries(aux, costs);
        PolicySurface surface(std::move(sol), aux, costs);
        const MarketParams market = market_from_aux(aux, costs);
        const Position pos{2.0, 1.0, 2.0};
        SimConfig cfg;
        cfg.paths = 2000;
        cfg.horizon_years = 2.0;
        cfg.dt = 5e-4;
        SimResult rs, rp;
        const double ts = time_of([&] { rs = simulate_policy_serial(pos, surface, market, cfg); });
        const double tp = time_of([&] { rp = simulate_policy(pos, surface, market, cfg); });
        std::printf("%-28s %12.4f %12.4f %8.2fx\n", "mc_paths(2000 x 4000)", ts, tp, ts / tp);
        std::printf("mc bit-identical: %s\n", rs == rp ? "yes" : "NO");
        const double steps = 2000.0 * 4000.0;
        std::printf("mc ns/path-step: serial %.1f, parallel %.1f\n", ts / steps * 1e9,
                    tp / steps * 1e9);
    }
    return 0;
}
