// simulate.cpp -- Euler-Maruyama on (X, ln Z) with Z = Y*Theta, projection
// trades at the wedge boundaries, antithetic pairs and per-pair RNG streams.
//
// Between trades theta is constant, so only the illiquid wealth Z = Y*Theta
// is simulated; a boundary trade moves cash between X and Z with the exact
// transaction-cost bookkeeping of the rebalancing formulas.

#include "wedge/simulate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "wedge/numerics.hpp"

namespace wedge {

namespace {

// splitmix64: seeds the per-path xoshiro state from (seed, path index).
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ (public-domain algorithm by Blackman & Vigna).
struct Xoshiro256pp {
    std::uint64_t s[4];

    explicit Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        for (auto& w : s) w = splitmix64(x);
    }
    static inline std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }
    std::uint64_t next() {
        const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }
    double uniform() {  // (0,1)
        return (next() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }
};

// Marsaglia polar method with one cached value.
struct NormalDraw {
    Xoshiro256pp rng;
    double cache = 0.0;
    bool has_cache = false;

    explicit NormalDraw(std::uint64_t seed, std::uint64_t stream) : rng(seed, stream) {}

    double operator()() {
        if (has_cache) {
            has_cache = false;
            return cache;
        }
        double u, v, s;
        do {
            u = 2.0 * rng.uniform() - 1.0;
            v = 2.0 * rng.uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cache = v * f;
        has_cache = true;
        return u * f;
    }
};

// Uniform-grid linear interpolation tables for the feedback controls as
// fractions of paper wealth.
struct ControlTables {
    double p_lo, p_hi, inv_dp;
    std::vector<double> c_frac;   // C*/s
    std::vector<double> pi_frac;  // Pi*/s
    int n;

    ControlTables(const PolicySurface& surface, const MarketParams& market, int n_points)
        : p_lo(surface.p_star()), p_hi(surface.p_upper()), n(n_points) {
        inv_dp = (n - 1) / (p_hi - p_lo);
        c_frac.resize(n);
        pi_frac.resize(n);
        for (int i = 0; i < n; ++i) {
            const double p = p_lo + (p_hi - p_lo) * i / (n - 1);
            const Position unit{1.0 - p, 1.0, p};  // paper wealth 1, fraction p
            const auto ctl = surface.feedback_controls(unit, market);
            c_frac[i] = ctl.consumption;
            pi_frac[i] = ctl.liquid_exposure;
        }
    }

    inline void lookup(double p, double& c, double& pi) const {
        double t = (p - p_lo) * inv_dp;
        if (t <= 0.0) {
            c = c_frac.front();
            pi = pi_frac.front();
            return;
        }
        if (t >= n - 1) {
            c = c_frac.back();
            pi = pi_frac.back();
            return;
        }
        const int i = static_cast<int>(t);
        const double w = t - i;
        c = c_frac[i] + w * (c_frac[i + 1] - c_frac[i]);
        pi = pi_frac[i] + w * (pi_frac[i + 1] - pi_frac[i]);
    }
};

struct PathStats {
    double utility = 0.0;
    std::int64_t hits_buy = 0;
    std::int64_t hits_sell = 0;
    std::int64_t violations = 0;
};

struct SimKernel {
    const ControlTables& tab;
    double r, beta_sigma, sigma, eta, rho, rho_bar, delta, R;
    double lam, gam;
    double dt, sqdt, disc_factor, z_drift_dt;
    std::int64_t n_steps;
    bool half_power;  // R == 0.5: use sqrt for the utility power

    SimKernel(const ControlTables& tables, const MarketParams& m, const Costs& costs, double dt_,
              std::int64_t steps)
        : tab(tables),
          r(m.r),
          beta_sigma(m.mu - m.r),
          sigma(m.sigma),
          eta(m.eta),
          rho(m.rho),
          rho_bar(std::sqrt(1.0 - m.rho * m.rho)),
          delta(m.delta),
          R(m.R),
          lam(costs.lambda_buy),
          gam(costs.gamma_sell),
          dt(dt_),
          sqdt(std::sqrt(dt_)),
          disc_factor(std::exp(-m.delta * dt_)),
          z_drift_dt((m.alpha - 0.5 * m.eta * m.eta) * dt_),
          n_steps(steps),
          half_power(m.R == 0.5) {}

    struct PathState {
        double X, Z;
        bool alive = true;

        // Projection trade plus one Euler step; returns the utility increment.
        inline double step(const SimKernel& k, double disc, double dB, double dW,
                           PathStats& st) {
            if (!alive) return 0.0;
            double s = X + Z;
            double p = Z / s;
            if (p < k.tab.p_lo) {
                const double d = (k.tab.p_lo * s - Z) / (1.0 + k.lam * k.tab.p_lo);
                Z += d;
                X -= (1.0 + k.lam) * d;
                s = X + Z;
                p = k.tab.p_lo;
                ++st.hits_buy;
            } else if (p > k.tab.p_hi) {
                const double d = (Z - k.tab.p_hi * s) / (1.0 - k.gam * k.tab.p_hi);
                Z -= d;
                X += (1.0 - k.gam) * d;
                s = X + Z;
                p = k.tab.p_hi;
                ++st.hits_sell;
            }
            if (!(s > 0.0) || !std::isfinite(s)) {
                ++st.violations;
                alive = false;
                return 0.0;
            }
            double c, pi;
            k.tab.lookup(p, c, pi);
            const double C = c * s;
            const double u_term = k.half_power ? std::sqrt(C) : std::pow(C, 1.0 - k.R);
            const double Pi = pi * s;
            X += (k.r * X + k.beta_sigma * Pi - C) * k.dt + k.sigma * Pi * dB;
            Z *= std::exp(k.z_drift_dt + k.eta * dW);
            return disc * u_term * k.dt;
        }
    };

    // One antithetic pair in lockstep sharing the draw stream. When
    // `mirror` is false only the first path is advanced (plain MC).
    void run_pair(double x0, double z0, NormalDraw& normals, bool mirror, PathStats& a,
                  PathStats& b) const {
        PathState A{x0, z0}, B{x0, z0};
        double disc = 1.0;
        double ua = 0.0, ub = 0.0;
        for (std::int64_t k = 0; k < n_steps; ++k) {
            const double z1 = normals();
            const double z2 = normals();
            const double dB = sqdt * z1;
            const double dW = sqdt * (rho * z1 + rho_bar * z2);
            ua += A.step(*this, disc, dB, dW, a);
            if (mirror) ub += B.step(*this, disc, -dB, -dW, b);
            disc *= disc_factor;
        }
        const double inv_1mR = 1.0 / (1.0 - R);
        a.utility = ua * inv_1mR;
        b.utility = ub * inv_1mR;
    }
};

SimResult run_simulation(const Position& pos, const PolicySurface& surface,
                         const MarketParams& market, const SimConfig& cfg, bool parallel) {
    cfg.validate();

    // consistency between the surface's reduced parameters and the market
    const AuxParams check = derive_aux(market);
    const AuxParams& aux = surface.aux();
    if (std::abs(check.b1 - aux.b1) > 1e-8 * std::max(1.0, std::abs(aux.b1)) ||
        std::abs(check.b2 - aux.b2) > 1e-8 || std::abs(check.b3 - aux.b3) > 1e-8 ||
        std::abs(check.b4 - aux.b4) > 1e-8 * std::max(1.0, aux.b4) || market.R != aux.R)
        throw InvalidParams("simulate: market parameters are inconsistent with the surface");

    // initial rebalancing trade if the start lies outside the wedge
    const Position start = surface.rebalance_to_wedge(pos).after;

    double T = cfg.horizon_years;
    if (T <= 0.0) T = size_horizon(surface, start, cfg.tail_target, cfg.dt);
    const std::int64_t n_steps = static_cast<std::int64_t>(std::llround(T / cfg.dt));

    ControlTables tab(surface, market, 4096);
    if (cfg.const_consumption_frac) {
        std::fill(tab.c_frac.begin(), tab.c_frac.end(), *cfg.const_consumption_frac);
    }
    if (cfg.const_liquid_frac) {
        std::fill(tab.pi_frac.begin(), tab.pi_frac.end(), *cfg.const_liquid_frac);
    }
    SimKernel kernel(tab, market, surface.costs(), cfg.dt, n_steps);

    const bool anti = cfg.antithetic;
    const std::int64_t n_jobs = anti ? cfg.paths / 2 : cfg.paths;
    std::vector<double> slot(n_jobs);
    std::vector<std::int64_t> hb(n_jobs), hs(n_jobs), sv(n_jobs);

    const double x0 = start.x, z0 = start.y * start.theta;

#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t j = 0; j < n_jobs; ++j) {
        NormalDraw normals(cfg.seed, static_cast<std::uint64_t>(j));
        PathStats a, b;
        kernel.run_pair(x0, z0, normals, anti, a, b);
        slot[j] = anti ? 0.5 * (a.utility + b.utility) : a.utility;
        hb[j] = a.hits_buy + b.hits_buy;
        hs[j] = a.hits_sell + b.hits_sell;
        sv[j] = a.violations + b.violations;
    }

    const double mean = num::pairwise_sum(slot) / static_cast<double>(n_jobs);
    std::vector<double> dev2(n_jobs);
    for (std::int64_t j = 0; j < n_jobs; ++j) {
        const double d = slot[j] - mean;
        dev2[j] = d * d;
    }
    const double var =
        n_jobs > 1 ? num::pairwise_sum(dev2) / static_cast<double>(n_jobs - 1) : 0.0;
    const double se = std::sqrt(var / static_cast<double>(n_jobs));

    SimResult res;
    res.estimate = mean;
    res.std_error = se;
    res.ci95_lo = mean - 1.959963984540054 * se;
    res.ci95_hi = mean + 1.959963984540054 * se;
    res.truncation_bound = truncation_bound(surface, start, T);
    res.horizon_years = T;
    res.paths = anti ? 2 * n_jobs : n_jobs;
    res.steps_per_path = n_steps;
    std::int64_t tb = 0, ts = 0, tv = 0;
    for (std::int64_t j = 0; j < n_jobs; ++j) {
        tb += hb[j];
        ts += hs[j];
        tv += sv[j];
    }
    res.boundary_hits_buy = tb;
    res.boundary_hits_sell = ts;
    res.solvency_violations = tv;
    if (tv > 0) throw NumericalFailure("simulate: path state became non-finite or insolvent");
    return res;
}

}  // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw InvalidParams("sim: dt must be > 0");
    if (paths < 1) throw InvalidParams("sim: paths must be >= 1");
    if (antithetic && paths % 2 != 0)
        throw InvalidParams("sim: antithetic requires an even path count");
    if (horizon_years > 0.0) {
        const double ratio = horizon_years / dt;
        if (std::abs(ratio - std::llround(ratio)) > 1e-9 * std::max(1.0, ratio))
            throw InvalidParams("sim: horizon must be an integral multiple of dt");
    }
    if (!(tail_target > 0.0)) throw InvalidParams("sim: tail_target must be > 0");
}

namespace {
// Lower bound on the decay rate of |E[e^{-delta t} V^C]| under the optimal
// policy. Along optimal paths e^{-delta t} V^C(state_t) factorises as
// V^C(0) exp(-int_0^t kappa(q_s) ds) H_t with H a positive unit-mean
// martingale and kappa(q) = (b1/(R b4)) n(q), the optimal consumption-to-
// wealth rate; n attains its minimum over the wedge at a boundary.
double decay_rate(const PolicySurface& surface) {
    const AuxParams& aux = surface.aux();
    const auto& samples = surface.solution().path.samples;
    const double n_min = std::min(samples.front().n, samples.back().n);
    return aux.b1 / (aux.R * aux.b4) * n_min;
}
}  // namespace

double truncation_bound(const PolicySurface& surface, const Position& pos, double T) {
    return std::abs(surface.value(pos)) * std::exp(-decay_rate(surface) * T);
}

double size_horizon(const PolicySurface& surface, const Position&, double frac, double dt) {
    // the start cancels: bound(T) <= frac * |V| iff exp(-rate T) <= frac
    const double T = std::log(1.0 / frac) / decay_rate(surface);
    return std::ceil(T / dt) * dt;
}

SimResult simulate_policy(const Position& pos, const PolicySurface& surface,
                          const MarketParams& market, const SimConfig& cfg) {
    return run_simulation(pos, surface, market, cfg, /*parallel=*/true);
}

SimResult simulate_policy_serial(const Position& pos, const PolicySurface& surface,
                                 const MarketParams& market, const SimConfig& cfg) {
    return run_simulation(pos, surface, market, cfg, /*parallel=*/false);
}

void dump_paths_csv(std::ostream& os, const Position& pos, const PolicySurface& surface,
                    const MarketParams& market, const SimConfig& cfg, int max_paths) {
    cfg.validate();
    const Position start = surface.rebalance_to_wedge(pos).after;
    double T = cfg.horizon_years;
    if (T <= 0.0) T = size_horizon(surface, start, cfg.tail_target, cfg.dt);
    const std::int64_t n_steps = static_cast<std::int64_t>(std::llround(T / cfg.dt));

    ControlTables tab(surface, market, 4096);
    const double rho_bar = std::sqrt(1.0 - market.rho * market.rho);
    const double sqdt = std::sqrt(cfg.dt);
    const double y_drift = (market.alpha - 0.5 * market.eta * market.eta) * cfg.dt;

    os << "path,t,X,Y,Theta,P,Cstar\n";
    char line[256];
    for (int j = 0; j < max_paths; ++j) {
        NormalDraw normals(cfg.seed, static_cast<std::uint64_t>(j));
        double X = start.x, Y = start.y, Th = start.theta;
        for (std::int64_t k = 0; k <= n_steps; ++k) {
            double Z = Y * Th;
            double s = X + Z;
            double p = Z / s;
            if (p < tab.p_lo) {
                const double d = (tab.p_lo * s - Z) / (1.0 + surface.costs().lambda_buy * tab.p_lo);
                Th += d / Y;
                X -= (1.0 + surface.costs().lambda_buy) * d;
                s = X + Y * Th;
                p = tab.p_lo;
            } else if (p > tab.p_hi) {
                const double d = (Z - tab.p_hi * s) / (1.0 - surface.costs().gamma_sell * tab.p_hi);
                Th -= d / Y;
                X += (1.0 - surface.costs().gamma_sell) * d;
                s = X + Y * Th;
                p = tab.p_hi;
            }
            double c, pi;
            tab.lookup(p, c, pi);
            std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", j,
                          k * cfg.dt, X, Y, Th, p, c * s);
            os << line;
            if (k == n_steps) break;
            const double z1 = normals();
            const double z2 = normals();
            const double dB = sqdt * z1;
            const double dW = sqdt * (market.rho * z1 + rho_bar * z2);
            const double Pi = pi * s;
            X += (market.r * X + (market.mu - market.r) * Pi - c * s) * cfg.dt +
                 market.sigma * Pi * dB;
            Y *= std::exp(y_drift + market.eta * dW);
        }
    }
}

}  // namespace wedge
