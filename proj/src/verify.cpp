// verify.cpp -- grid scans for the identity, HJB and statics suites.
//
// Every scan maps point evaluations into a slot array (OpenMP when asked)
// and reduces serially in index order, so verdicts and worst-case locations
// are identical under any schedule.

#include "wedge/verify.hpp"

#include <algorithm>
#include <set>
#include <cmath>
#include <sstream>

#include "wedge/fbp.hpp"
#include "wedge/numerics.hpp"

namespace wedge {

namespace {

struct Scan {
    double worst = -std::numeric_limits<double>::infinity();
    double location = 0.0;
};

// Evaluate f(i) for i in [0,n) into slots, then reduce to (max, argmax-location).
template <typename F>
Scan scan_max(int n, bool parallel, F&& f) {
    std::vector<std::pair<double, double>> slots(n);  // (violation, location)
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) slots[i] = f(i);
    Scan s;
    for (int i = 0; i < n; ++i) {
        if (slots[i].first > s.worst) {
            s.worst = slots[i].first;
            s.location = slots[i].second;
        }
    }
    return s;
}

CheckReport report(std::string name, const Scan& s, double tol, std::string detail = {}) {
    return {std::move(name), s.worst <= tol, s.worst, s.location, std::move(detail)};
}

double rel_gap(double a, double b) {
    const double scale = std::max({1e-300, std::abs(a), std::abs(b)});
    return std::abs(a - b) / scale;
}

}  // namespace

bool all_pass(const std::vector<CheckReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

std::vector<CheckReport> run_identity_suite(const FieldContext& ctx, int grid_n, bool parallel) {
    std::vector<CheckReport> out;
    const double R = ctx.R, omr = ctx.one_mR, b1 = ctx.b1, b2 = ctx.b2;
    const double q_lo = 0.05, q_hi = (R > 1.0) ? std::min(2.5, 0.9 * ctx.pole) : 2.5;
    auto q_at = [&](int i) { return q_lo + (q_hi - q_lo) * i / (grid_n - 1); };

    out.push_back(report(
        "phi_at_m", scan_max(grid_n, parallel, [&](int i) {
            const double q = q_at(i);
            const double lhs = ctx.phi(q, ctx.m(q));
            const double rhs = R * omr * ((1.0 - q) * (1.0 - q) - (b2 - 1.0));
            return std::make_pair(std::abs(lhs - rhs), q);
        }),
        1e-12));

    out.push_back(report(
        "phi_at_ell", scan_max(grid_n, parallel, [&](int i) {
            const double q = q_at(i);
            const double s = ctx.s_of(q);
            const double lhs = ctx.phi(q, ctx.ell(q));
            const double rhs = omr * (1.0 - q) * (s - (b2 - 1.0) * R * R / s);
            return std::make_pair(std::abs(lhs - rhs), q);
        }),
        1e-12));

    const double ell1 = ctx.ell(1.0);
    out.push_back(report(
        "phi_at_one", scan_max(grid_n, parallel, [&](int i) {
            const double n = 0.01 + 2.0 * i / (grid_n - 1.0);
            const double lhs = ctx.phi(1.0, n);
            const double rhs = b1 * (n - ell1);
            return std::make_pair(std::abs(lhs - rhs), n);
        }),
        1e-12));

    out.push_back(report(
        "v_at_m", scan_max(grid_n, parallel, [&](int i) {
            const double q = q_at(i);
            const double lhs = ctx.v(q, ctx.m(q));
            const double rhs = -2.0 * R * omr * (b2 - 1.0);
            return std::make_pair(std::abs(lhs - rhs), q);
        }),
        1e-12));

    out.push_back(report(
        "v_at_ell", scan_max(grid_n, parallel, [&](int i) {
            const double q = q_at(i);
            const double s = ctx.s_of(q);
            const double regime = (1.0 - q) * s;
            if (std::abs(regime) < 1e-6) return std::make_pair(0.0, q);  // regime boundary
            const double lhs = ctx.v(q, ctx.ell(q));
            const double rhs = (regime > 0.0)
                                   ? -2.0 * R * R * omr * (1.0 - q) * (b2 - 1.0) / s
                                   : 2.0 * omr * (1.0 - q) * s;
            return std::make_pair(std::abs(lhs - rhs), q);
        }),
        1e-12));

    out.push_back(report(
        "v_at_one", scan_max(grid_n, parallel, [&](int i) {
            const double n = 0.01 + 2.0 * i / (grid_n - 1.0);
            const double p = ctx.phi(1.0, n);
            const double lhs = ctx.v(1.0, n);
            const double rhs = p - ctx.sgn * std::abs(p);
            return std::make_pair(std::abs(lhs - rhs), n);
        }),
        1e-12));

    out.push_back(report(
        "D_at_m", scan_max(grid_n, parallel, [&](int i) {
            const double q = q_at(i);
            return std::make_pair(std::abs(ctx.D(q, ctx.m(q))), q);
        }),
        1e-12));

    // dual-form oracle: the D-based evaluation path against the direct display
    out.push_back(report(
        "O_form_equivalence", scan_max(grid_n, parallel, [&](int i) {
            // deterministic low-discrepancy points in (q, n)
            const double q = q_lo + (q_hi - q_lo) * std::fmod(0.6180339887498949 * (i + 1), 1.0);
            const double n = 0.02 + 1.8 * std::fmod(0.7548776662466927 * (i + 1), 1.0);
            if (std::abs(q - 1.0) < 1e-3) return std::make_pair(0.0, q);
            if (R > 1.0 && std::abs(q - ctx.pole) < 1e-3) return std::make_pair(0.0, q);
            if (R < 1.0 && q < 1.0 && n > ctx.ell(q) - 1e-3) return std::make_pair(0.0, q);
            if (R > 1.0 && q < 1.0 && n < ctx.ell(q) + 1e-3) return std::make_pair(0.0, q);
            const FieldValue alt = o_field(q, n, ctx);
            if (alt.branch != Branch::regular) return std::make_pair(0.0, q);
            return std::make_pair(rel_gap(alt.value, o_direct(q, n, ctx)), q);
        }),
        1e-10));

    return out;
}

namespace {

// The transformed HJB expression whose interior zero defines G; outside the
// wedge its sign (times sgn(1-R)) is the L* inequality.
double hjb2_expr(double p, double g, double g1, double g2, const AuxParams& aux,
                 const MarketParams& m) {
    const double R = aux.R, omr = 1.0 - aux.R;
    const double beta = (m.mu - m.r) / m.sigma;
    const double t1 = aux.b1 / aux.b4 * std::pow(g - p * g1 / omr, 1.0 - 1.0 / R);
    const double t2 = -m.delta * g;
    const double t3 = m.r * (1.0 - p) * (omr * g - p * g1);
    const double t4 = m.alpha * (omr * p * g + p * (1.0 - p) * g1);
    const double t5 = 0.5 * m.eta * m.eta *
                      (p * p * (1.0 - p) * (1.0 - p) * g2 - 2.0 * R * p * p * (1.0 - p) * g1 -
                       R * omr * p * p * g);
    const double num = beta * (omr * g - p * g1) +
                       m.eta * m.rho *
                           (-R * omr * p * g + R * p * (2.0 * p - 1.0) * g1 -
                            p * p * (1.0 - p) * g2);
    const double den = p * p * g2 + 2.0 * R * p * g1 - R * omr * g;
    return t1 + t2 + t3 + t4 + t5 - num * num / (2.0 * den);
}

}  // namespace

std::vector<CheckReport> run_hjb_suite(const PolicySurface& surface, const MarketParams& market,
                                       int grid_n, bool parallel) {
    std::vector<CheckReport> out;
    const AuxParams& aux = surface.aux();
    const double R = aux.R, omr = 1.0 - R;
    const double lam = surface.costs().lambda_buy, gam = surface.costs().gamma_sell;
    const double ps = surface.p_star(), pu = surface.p_upper();
    const double margin = 1e-7 * (pu - ps);

    auto p_at = [&](int i) { return ps + margin + (pu - ps - 2 * margin) * i / (grid_n - 1.0); };

    // residual of the transformed HJB inside the wedge, relative to delta*G
    out.push_back(report(
        "hjb_residual_wedge", scan_max(grid_n, parallel, [&](int i) {
            const double p = p_at(i);
            const double g = surface.G(p);
            const double res =
                hjb2_expr(p, g, surface.G1(p), surface.G2(p), aux, market) / (market.delta * g);
            return std::make_pair(std::abs(res), p);
        }),
        1e-6));

    // M V^C <= 0 and N V^C <= 0 on the wedge (reduced positive-factor form)
    out.push_back(report(
        "M_slack_wedge", scan_max(grid_n, parallel, [&](int i) {
            const double p = p_at(i);
            const double g = surface.G(p), g1 = surface.G1(p);
            const double m_hat = (-lam * omr * g + (1.0 + lam * p) * g1) / omr;
            return std::make_pair(m_hat / g, p);
        }),
        1e-8));
    out.push_back(report(
        "N_slack_wedge", scan_max(grid_n, parallel, [&](int i) {
            const double p = p_at(i);
            const double g = surface.G(p), g1 = surface.G1(p);
            const double n_hat = -(gam * omr * g + (1.0 - gam * p) * g1) / omr;
            return std::make_pair(n_hat / g, p);
        }),
        1e-8));

    // L* V^C <= 0 outside the wedge; sgn(L*) = sgn(1-R) * sgn(hjb2)
    const double p_min = lam > 0.0 ? -1.0 / lam * 0.999 : ps - 2.0;
    out.push_back(report(
        "Lstar_buy_region", scan_max(grid_n, parallel, [&](int i) {
            const double p = p_min + (ps - 1e-9 - p_min) * i / (grid_n - 1.0);
            const double g = surface.G(p);
            const double v =
                (R < 1.0 ? 1.0 : -1.0) *
                hjb2_expr(p, g, surface.G1(p), surface.G2(p), aux, market) / (market.delta * g);
            return std::make_pair(v, p);
        }),
        1e-8));
    const double p_max = gam > 0.0 ? 1.0 / gam * 0.999 : pu + 2.0;
    out.push_back(report(
        "Lstar_sell_region", scan_max(grid_n, parallel, [&](int i) {
            const double p = pu + 1e-9 + (p_max - pu - 1e-9) * i / (grid_n - 1.0);
            const double g = surface.G(p);
            const double v =
                (R < 1.0 ? 1.0 : -1.0) *
                hjb2_expr(p, g, surface.G1(p), surface.G2(p), aux, market) / (market.delta * g);
            return std::make_pair(v, p);
        }),
        1e-8));

    // oracle: L* sign on the buy/sell regions from the quadratic m comparison
    out.push_back(report(
        "Lstar_m_comparison", scan_max(grid_n, parallel, [&](int i) {
            const double sgn = (R < 1.0) ? 1.0 : -1.0;
            double worst = -1e300, loc = 0.0;
            {
                const double p = p_min + (ps - 1e-9 - p_min) * i / (grid_n - 1.0);
                const double chi = (1.0 + lam) * p / (1.0 + lam * p);
                const double v = sgn * (m_of(surface.q_star(), aux) - m_of(chi, aux));
                if (v > worst) {
                    worst = v;
                    loc = p;
                }
            }
            {
                const double p = pu + 1e-9 + (p_max - pu - 1e-9) * i / (grid_n - 1.0);
                const double chi = (1.0 - gam) * p / (1.0 - gam * p);
                const double v = sgn * (m_of(surface.q_upper(), aux) - m_of(chi, aux));
                if (v > worst) {
                    worst = v;
                    loc = p;
                }
            }
            return std::make_pair(worst, loc);
        }),
        1e-10));

    // N V^C on the buy region equals its closed form (and is <= 0)
    const double a_star = std::pow(surface.solution().path.samples.front().n, -R);
    out.push_back(report(
        "N_buy_closed_form", scan_max(grid_n, parallel, [&](int i) {
            const double p = p_min + (ps - 1e-9 - p_min) * i / (grid_n - 1.0);
            const double g = surface.G(p), g1 = surface.G1(p);
            const double n_hat = -(gam * omr * g + (1.0 - gam * p) * g1) / omr;
            const double closed = -(lam + gam) * a_star * std::pow(1.0 + lam * p, -R);
            return std::make_pair(rel_gap(n_hat, closed), p);
        }),
        1e-10));

    // C^2 pasting: one-sided 2nd-order finite differences from each side.
    // Gaps are measured relative to the larger of the derivative magnitudes
    // and |G(b)| -- both G' and G'' legitimately vanish at the boundaries
    // (smooth fit), where a pure ratio would be ill-defined.
    auto pasting = [&](double b, const char* name) {
        const double h0 = 4e-3 * std::max(1.0, std::abs(b));
        auto d1 = [&](double sgn, double h) {
            return sgn * (-3.0 * surface.G(b) + 4.0 * surface.G(b + sgn * h) -
                          surface.G(b + 2.0 * sgn * h)) /
                   (2.0 * h);
        };
        auto d2 = [&](double sgn, double h) {
            return (2.0 * surface.G(b) - 5.0 * surface.G(b + sgn * h) +
                    4.0 * surface.G(b + 2.0 * sgn * h) - surface.G(b + 3.0 * sgn * h)) /
                   (h * h);
        };
        // Richardson-extrapolated one-sided stencils (both are O(h^2))
        auto rd1 = [&](double sgn) {
            return (4.0 * d1(sgn, 0.5 * h0) - d1(sgn, h0)) / 3.0;
        };
        auto rd2 = [&](double sgn) {
            return (4.0 * d2(sgn, 0.5 * h0) - d2(sgn, h0)) / 3.0;
        };
        const double g1p = rd1(+1.0), g1m = rd1(-1.0);
        const double g2p = rd2(+1.0), g2m = rd2(-1.0);
        const double gb = std::abs(surface.G(b));
        const double w1 = std::abs(g1p - g1m) / std::max({gb, std::abs(g1p), std::abs(g1m)});
        const double w2 = std::abs(g2p - g2m) / std::max({gb, std::abs(g2p), std::abs(g2m)});
        Scan s;
        s.worst = std::max(w1, w2);
        s.location = b;
        std::ostringstream os;
        os << "G'+-=" << g1p << "/" << g1m << " G''+-=" << g2p << "/" << g2m;
        out.push_back(report(name, s, 1e-4, os.str()));
    };
    pasting(ps, "C2_pasting_p_star");
    pasting(pu, "C2_pasting_p_upper");
    if (ps < 1.0 && 1.0 < pu) pasting(1.0, "C2_pasting_p_one");

    return out;
}

// --- sweeps ----------------------------------------------------------------

namespace {

SweepRow solve_row(double value, const AuxParams& aux, const Costs& costs,
                   const Position& ref_pos) {
    SweepRow row;
    row.param_value = value;
    row.xi = costs.round_trip();
    try {
        FreeBoundarySolution sol = solve_boundaries(aux, costs);
        PolicySurface surf(std::move(sol), aux, costs);
        row.posed = true;
        row.q_star = surf.q_star();
        row.q_upper = surf.q_upper();
        row.p_star = surf.p_star();
        row.p_upper = surf.p_upper();
        row.ce = surf.certainty_equivalent(ref_pos);
    } catch (const BelowCriticalCost& e) {
        row.posed = false;
        row.reason = "below_critical_cost";
        row.q_star = row.q_upper = row.p_star = row.p_upper = row.ce =
            std::numeric_limits<double>::quiet_NaN();
    } catch (const IllPosed&) {
        row.posed = false;
        row.reason = "ill_posed";
        row.q_star = row.q_upper = row.p_star = row.p_upper = row.ce =
            std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

}  // namespace

std::vector<SweepRow> sweep_parameter(const AuxParams& base, const Costs& costs,
                                      const SweepSpec& spec, const Position& ref_pos,
                                      bool parallel) {
    if (spec.points < 1) throw InvalidParams("sweep: points must be >= 1");
    if (spec.log_scale && !(spec.lo > 0.0))
        throw InvalidParams("sweep: log scale requires positive bounds");
    static const std::set<std::string> kParams = {"xi", "b1", "b2",    "b3",
                                                  "lambda", "gamma", "delta", "alpha"};
    if (!kParams.count(spec.param))
        throw InvalidParams("sweep: unknown parameter '" + spec.param + "'");
    std::vector<double> grid(spec.points);
    for (int i = 0; i < spec.points; ++i) {
        const double t = spec.points == 1 ? 0.0 : static_cast<double>(i) / (spec.points - 1);
        grid[i] = spec.log_scale ? spec.lo * std::pow(spec.hi / spec.lo, t)
                                 : spec.lo + (spec.hi - spec.lo) * t;
    }

    std::vector<SweepRow> rows(spec.points);
    // market anchor for raw-parameter sweeps
    const bool raw = (spec.param == "delta" || spec.param == "alpha");
    MarketParams anchor;
    if (raw) anchor = market_from_aux(base, costs);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int i = 0; i < spec.points; ++i) {
        const double v = grid[i];
        try {
            if (spec.param == "xi") {
                Costs c{v, 0.0};
                AuxParams a = base;
                a.xi = v;
                rows[i] = solve_row(v, a, c, ref_pos);
            } else if (spec.param == "lambda") {
                Costs c{v, costs.gamma_sell};
                AuxParams a = base;
                a.xi = c.round_trip();
                rows[i] = solve_row(v, a, c, ref_pos);
            } else if (spec.param == "gamma") {
                Costs c{costs.lambda_buy, v};
                AuxParams a = base;
                a.xi = c.round_trip();
                rows[i] = solve_row(v, a, c, ref_pos);
            } else if (spec.param == "b1" || spec.param == "b2" || spec.param == "b3") {
                AuxParams a = base;
                (spec.param == "b1" ? a.b1 : spec.param == "b2" ? a.b2 : a.b3) = v;
                a.validate();
                rows[i] = solve_row(v, a, costs, ref_pos);
            } else if (raw) {
                MarketParams m = anchor;
                (spec.param == "delta" ? m.delta : m.alpha) = v;
                rows[i] = solve_row(v, derive_aux(m), costs, ref_pos);
            } else {
                throw InvalidParams("sweep: unknown parameter '" + spec.param + "'");
            }
        } catch (const InvalidParams&) {
            rows[i].param_value = v;
            rows[i].posed = false;
            rows[i].reason = "invalid_params";
            rows[i].q_star = rows[i].q_upper = rows[i].p_star = rows[i].p_upper = rows[i].ce =
                std::numeric_limits<double>::quiet_NaN();
        }
    }
    return rows;
}

namespace {

// Strict monotonicity of a column across posed rows; dir=+1 increasing.
CheckReport monotone_check(const std::string& name, const std::vector<SweepRow>& rows,
                           double SweepRow::* column, int dir) {
    Scan s;
    s.worst = -std::numeric_limits<double>::infinity();
    const SweepRow* prev = nullptr;
    for (const auto& r : rows) {
        if (!r.posed) continue;
        if (prev) {
            const double step = dir * (r.*column - prev->*column);
            const double viol = -step;  // positive when monotonicity is violated
            if (viol > s.worst) {
                s.worst = viol;
                s.location = r.param_value;
            }
        }
        prev = &r;
    }
    if (!std::isfinite(s.worst)) s.worst = 0.0;  // fewer than two posed rows
    return {name, s.worst < 0.0, s.worst, s.location, {}};
}

}  // namespace

std::vector<CheckReport> run_statics_suite(const AuxParams& base, const Costs& costs, int points,
                                           bool parallel) {
    std::vector<CheckReport> out;
    const Position ref{1.0, 1.0, 1.0};
    const double R = base.R;

    // xi sweep: q_star strictly down, q_upper strictly up
    {
        SweepSpec spec{"xi", 1e-4, 10.0, 60, true};
        auto rows = sweep_parameter(base, costs, spec, ref, parallel);
        out.push_back(monotone_check("xi_sweep_q_star_decreasing", rows, &SweepRow::q_star, -1));
        out.push_back(monotone_check("xi_sweep_q_upper_increasing", rows, &SweepRow::q_upper, +1));
    }

    // b1 sweep: boundaries decreasing; (1-R)G pointwise decreasing
    {
        SweepSpec spec{"b1", base.b1 * 0.8, base.b1 * 1.2, points, false};
        auto rows = sweep_parameter(base, costs, spec, ref, parallel);
        out.push_back(monotone_check("b1_sweep_q_star_decreasing", rows, &SweepRow::q_star, -1));
        out.push_back(monotone_check("b1_sweep_q_upper_decreasing", rows, &SweepRow::q_upper, -1));
        out.push_back(monotone_check("b1_sweep_p_star_decreasing", rows, &SweepRow::p_star, -1));
        out.push_back(monotone_check("b1_sweep_p_upper_decreasing", rows, &SweepRow::p_upper, -1));
    }
    {
        // pointwise (1-R)G monotone in b1 on a p grid
        Scan s;
        s.worst = -std::numeric_limits<double>::infinity();
        std::vector<double> b1s(points);
        for (int i = 0; i < points; ++i)
            b1s[i] = base.b1 * (0.8 + 0.4 * i / std::max(1, points - 1));
        std::vector<PolicySurface> surfaces;
        surfaces.reserve(points);
        bool ok = true;
        for (double b1v : b1s) {
            AuxParams a = base;
            a.b1 = b1v;
            try {
                surfaces.emplace_back(solve_boundaries(a, costs), a, costs);
            } catch (const Error&) {
                ok = false;
                break;
            }
        }
        if (ok) {
            for (int k = 0; k < 101; ++k) {
                const double p = 0.02 + (1.3 - 0.02) * k / 100.0;
                for (std::size_t j = 1; j < surfaces.size(); ++j) {
                    const double lo = (1.0 - R) * surfaces[j - 1].G(p);
                    const double hi = (1.0 - R) * surfaces[j].G(p);
                    const double viol = hi - lo;  // should be <= 0 (decreasing in b1)
                    if (viol > s.worst) {
                        s.worst = viol;
                        s.location = p;
                    }
                }
            }
            out.push_back(report("b1_sweep_G_pointwise_decreasing", s, 1e-10));
        } else {
            out.push_back({"b1_sweep_G_pointwise_decreasing", false, 0.0, 0.0,
                           "sweep point failed to solve"});
        }
    }

    // b3 sweep (R<1): boundaries increasing
    if (R < 1.0) {
        SweepSpec spec{"b3", base.b3 * 0.9, base.b3 * 1.1, points, false};
        auto rows = sweep_parameter(base, costs, spec, ref, parallel);
        out.push_back(monotone_check("b3_sweep_q_star_increasing", rows, &SweepRow::q_star, +1));
        out.push_back(monotone_check("b3_sweep_q_upper_increasing", rows, &SweepRow::q_upper, +1));
        out.push_back(monotone_check("b3_sweep_p_star_increasing", rows, &SweepRow::p_star, +1));
        out.push_back(monotone_check("b3_sweep_p_upper_increasing", rows, &SweepRow::p_upper, +1));
    }

    // raw-parameter sweeps: delta down, alpha up (R<1)
    {
        MarketParams anchor = market_from_aux(base, costs);
        SweepSpec spec{"delta", anchor.delta * 0.95, anchor.delta * 1.05, points, false};
        auto rows = sweep_parameter(base, costs, spec, ref, parallel);
        out.push_back(monotone_check("delta_sweep_p_star_decreasing", rows, &SweepRow::p_star, -1));
        out.push_back(
            monotone_check("delta_sweep_p_upper_decreasing", rows, &SweepRow::p_upper, -1));
        out.push_back(monotone_check("delta_sweep_ce_decreasing", rows, &SweepRow::ce, -1));
    }
    if (R < 1.0) {
        MarketParams anchor = market_from_aux(base, costs);
        SweepSpec spec{"alpha", anchor.alpha * 0.97, anchor.alpha * 1.03, points, false};
        auto rows = sweep_parameter(base, costs, spec, ref, parallel);
        out.push_back(monotone_check("alpha_sweep_p_star_increasing", rows, &SweepRow::p_star, +1));
        out.push_back(
            monotone_check("alpha_sweep_p_upper_increasing", rows, &SweepRow::p_upper, +1));
        out.push_back(monotone_check("alpha_sweep_ce_increasing", rows, &SweepRow::ce, +1));
    }

    // dp_star/dgamma < 0 at fixed lambda
    {
        SweepSpec spec{"gamma", 0.02, 0.2, points, false};
        Costs c{costs.lambda_buy > 0.0 ? costs.lambda_buy : 0.05, 0.0};
        auto rows = sweep_parameter(base, c, spec, ref, parallel);
        out.push_back(
            monotone_check("gamma_sweep_p_star_decreasing", rows, &SweepRow::p_star, -1));
    }

    // b2 sweep: diagnostic only, never asserted
    {
        SweepSpec spec{"b2", base.b2 * 0.95, base.b2 * 1.05, points, false};
        auto rows = sweep_parameter(base, costs, spec, ref, parallel);
        std::ostringstream os;
        os << "q_star ";
        for (const auto& r : rows) os << (r.posed ? r.q_star : std::nan("")) << " ";
        out.push_back({"b2_sweep_diagnostic_only", true, 0.0, 0.0, os.str()});
    }

    return out;
}

}  // namespace wedge
