// fbp.cpp -- shooting solver for the free boundary value problem.
//
// The augmented state is y = (n, I) with
//   n'(q) = O(q, n) = n F(q, n)
//   I'(q) = -R/(q(1-R)) F(q, n)
// integrated from (u, m(u), 0) until (1-R)(n - m(q)) changes sign. The
// crossing zeta(u) is located by bisecting the offending step. Since the
// solution is monotone and pinned to m at both ends, zeta(u) < 2 q_M - u,
// which doubles as the runaway guard.

#include "wedge/fbp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wedge/numerics.hpp"

namespace wedge {

namespace {

using num::State2;

struct RhsEval {
    const FieldContext& ctx;
    State2 operator()(double q, const State2& y) const {
        const FieldValue f = f_field(q, y[0], ctx);
        return {y[0] * f.value, -ctx.R / (q * ctx.one_mR) * f.value};
    }
};

// Controlled integration from (q0,y0) to q1 without event logic; used for
// step bisection when locating the crossing.
State2 integrate_to(const RhsEval& rhs, double q0, const State2& y0, double q1,
                    const ShootTol& tol, double h_max) {
    if (q1 <= q0) return y0;
    return num::dopri5_integrate(rhs, q0, y0, q1, tol.rel, tol.abs, h_max,
                                 [](double, const State2&) {});
}

void check_start(double u, const FieldContext& ctx, const ShootTol& tol) {
    const double q_M = ctx.b3 / (2.0 * ctx.R);
    if (!(u >= tol.u_min))
        throw OutOfDomain("shoot: start abscissa below domain guard u_min");
    if (!(u < q_M)) throw OutOfDomain("shoot: start abscissa must lie in (0, q_M)");
    if (!(ctx.m(u) > 0.0))
        throw OutOfDomain("shoot: m(u) <= 0; start must lie left of the lower root of m");
}

}  // namespace

namespace {

OdePath shoot_core(double u, const FieldContext& ctx, const ShootTol& tol, bool dense) {
    check_start(u, ctx, tol);
    const RhsEval rhs{ctx};
    const double q_M = ctx.b3 / (2.0 * ctx.R);
    const double q_stop = 2.0 * q_M - u + 1e-6 * std::max(1.0, q_M);
    const double span_cap = (q_stop - u) / 200.0;
    const double arm_eps = 10.0 * tol.abs;

    auto g_of = [&](double q, const State2& y) { return ctx.sgn * (y[0] - ctx.m(q)); };

    double q = u;
    State2 y = {ctx.m(u), 0.0};
    double h = std::min(span_cap, 1e-3 * (q_stop - u));
    bool armed = false;
    double zeta = -1.0;
    State2 y_zeta{};

    int rejects = 0;
    while (q < q_stop) {
        h = std::min(h, q_stop - q);
        num::StepResult s = num::dopri5_step(rhs, q, y, h, tol.rel, tol.abs);
        if (!std::isfinite(s.err) || !std::isfinite(s.y[0]) || !std::isfinite(s.y[1])) {
            h *= 0.25;
            if (h < 1e-15 * std::max(1.0, q))
                throw OutOfDomain("shoot: field blow-up reached; inputs appear ill-posed");
            continue;
        }
        if (s.err > 1.0) {
            h *= std::clamp(0.9 * std::pow(s.err, -0.2), 0.2, 0.9);
            if (++rejects > 200) throw NumericalFailure("shoot: persistent step rejection");
            continue;
        }
        rejects = 0;
        const double q_new = q + h;
        const double g_new = g_of(q_new, s.y);

        if (armed && g_new < 0.0) {
            // crossing inside (q, q_new): bisect trial targets re-integrated
            // from the last accepted state.
            double lo = q, hi = q_new;
            State2 y_hi = s.y;
            for (int it = 0; it < 80 && (hi - lo) > tol.event_q; ++it) {
                const double mid = 0.5 * (lo + hi);
                const State2 ym = integrate_to(rhs, q, y, mid, tol, span_cap);
                if (g_of(mid, ym) >= 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                    y_hi = ym;
                }
            }
            zeta = hi;
            y_zeta = y_hi;
            break;
        }
        if (!armed && g_new > arm_eps) armed = true;

        // low n with m already negative is the ill-posed signature: the
        // trajectory slides to (ell_0, 0) and never recrosses m.
        if (s.y[0] < 1e-12 && ctx.m(q_new) < 0.0 && !armed)
            throw OutOfDomain("shoot: n driven to 0 before recrossing m (ill-posed inputs)");
        if (s.y[0] < 1e-300)
            throw OutOfDomain("shoot: n underflowed to 0; inputs appear ill-posed");

        q = q_new;
        y = s.y;
        h = std::min({h * std::clamp(0.9 * std::pow(std::max(s.err, 1e-10), -0.2), 0.2, 5.0),
                      span_cap});
    }
    if (zeta < 0.0)
        throw NumericalFailure("shoot: no crossing of m before the 2 q_M - u guard");

    OdePath path;
    path.u = u;
    path.zeta = zeta;
    path.tol = tol;

    auto push_sample = [&](double qq, const State2& yy) {
        const FieldValue f = f_field(qq, yy[0], ctx);
        path.samples.push_back(
            {qq, yy[0], yy[1], yy[0] * f.value, -ctx.R / (qq * ctx.one_mR) * f.value});
    };

    // Dense pass: re-integrate with a step cap so Hermite interpolation of
    // (q, n, I) meets the policy layer's error budget.
    push_sample(u, {ctx.m(u), 0.0});
    if (dense) {
        const double h_max = (zeta - u) / std::max(50, tol.path_samples);
        State2 yf = num::dopri5_integrate(rhs, u, {ctx.m(u), 0.0}, zeta, tol.rel, tol.abs, h_max,
                                          [&](double qq, const State2& yy) {
                                              if (qq < zeta) push_sample(qq, yy);
                                          });
        push_sample(zeta, yf);
    } else {
        push_sample(zeta, y_zeta);
    }
    return path;
}

}  // namespace

OdePath shoot(double u, const FieldContext& ctx, const ShootTol& tol) {
    return shoot_core(u, ctx, tol, /*dense=*/true);
}

double sigma_of(double u, const FieldContext& ctx, const ShootTol& tol) {
    const OdePath p = shoot_core(u, ctx, tol, /*dense=*/false);
    return std::expm1(p.I_total());
}

double OdePath::n_at(double q) const {
    const auto& s = samples;
    if (q <= s.front().q) return s.front().n;
    if (q >= s.back().q) return s.back().n;
    std::size_t lo = 0, hi = s.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (s[mid].q <= q ? lo : hi) = mid;
    }
    return num::hermite_value(s[lo].q, s[lo + 1].q, s[lo].n, s[lo + 1].n, s[lo].dn, s[lo + 1].dn,
                              q);
}

double OdePath::I_at(double q) const {
    const auto& s = samples;
    if (q <= s.front().q) return s.front().I;
    if (q >= s.back().q) return s.back().I;
    std::size_t lo = 0, hi = s.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (s[mid].q <= q ? lo : hi) = mid;
    }
    return num::hermite_value(s[lo].q, s[lo + 1].q, s[lo].I, s[lo + 1].I, s[lo].dI, s[lo + 1].dI,
                              q);
}

double OdePath::n_prime_at(double q) const {
    const auto& s = samples;
    if (q <= s.front().q) return s.front().dn;
    if (q >= s.back().q) return s.back().dn;
    std::size_t lo = 0, hi = s.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (s[mid].q <= q ? lo : hi) = mid;
    }
    return num::hermite_deriv(s[lo].q, s[lo + 1].q, s[lo].n, s[lo + 1].n, s[lo].dn, s[lo + 1].dn,
                              q);
}

double critical_xi(const FieldContext& ctx, double tol, int scheme) {
    if (!(ctx.R < 1.0)) throw OutOfDomain("critical_xi: defined only for R < 1");
    const double m_M = 1.0 - ctx.b3 * ctx.b3 * ctx.one_mR / (4.0 * ctx.b1 * ctx.R);
    if (!(m_M < 0.0)) throw OutOfDomain("critical_xi: requires m_M < 0");
    const double ell1 = ctx.m(1.0) + ctx.zq_c;
    if (!(ell1 > 0.0)) throw OutOfDomain("critical_xi: requires ell(1) > 0 (Case 3)");

    // roots of m(q) = 0, stable form
    const double A = ctx.cm2, B = -ctx.cm1;
    const double sd = std::sqrt(B * B - 4.0 * A);
    const double t = -0.5 * (B - sd);
    const double pm = std::min(t / A, 1.0 / t), pp = std::max(t / A, 1.0 / t);

    auto integrand = [&](double q) {
        return -ctx.R / (q * ctx.one_mR) * f_field(q, 0.0, ctx).value;
    };
    double I;
    if (scheme == 0) {
        I = num::adaptive_simpson(integrand, pm, pp, tol);
    } else {
        I = num::gauss_legendre(integrand, pm, pp, 64);
    }
    return std::expm1(I);
}

namespace {

struct SolveDomain {
    double u_hi;                     // q_M (Cases 1/4) or p_- (Case 3)
    std::optional<double> xi_bar;    // Case 3 only
};

SolveDomain solve_domain(double xi, const FieldContext& ctx) {
    const double q_M = ctx.b3 / (2.0 * ctx.R);
    if (ctx.R > 1.0) return {q_M, std::nullopt};
    const double m_M = 1.0 - ctx.b3 * ctx.b3 * ctx.one_mR / (4.0 * ctx.b1 * ctx.R);
    if (m_M > 0.0) return {q_M, std::nullopt};
    const double ell1 = ctx.m(1.0) + ctx.zq_c;
    if (ell1 <= 0.0)
        throw IllPosed("there is no solution to the free boundary value problem: "
                       "ill-posed for all transaction cost levels (Case 2)");
    const double xb = critical_xi(ctx);
    if (!(xi > xb)) {
        std::ostringstream os;
        os << "round-trip cost xi = " << xi << " is at or below the critical cost xi_bar = " << xb;
        throw BelowCriticalCost(os.str(), xi, xb);
    }
    const double sd = std::sqrt(ctx.cm1 * ctx.cm1 - 4.0 * ctx.cm2);
    const double t = 0.5 * (ctx.cm1 + sd);
    const double pm = std::min(t / ctx.cm2, 1.0 / t);
    return {pm, xb};
}

}  // namespace

FreeBoundarySolution solve_boundaries(double xi, const FieldContext& ctx, double lambda_buy,
                                      const ShootTol& tol) {
    if (!(xi > 0.0)) throw InvalidParams("solve_boundaries: xi must be > 0");
    const SolveDomain dom = solve_domain(xi, ctx);

    const double stop_abs = std::max(1e-10, 1e-8 * xi);
    double lo = tol.u_min, hi = dom.u_hi;
    double sig_lo = sigma_of(lo, ctx, tol);
    if (sig_lo < xi) {
        std::ostringstream os;
        os << "xi = " << xi << " exceeds the achievable range (Sigma(u_min) = " << sig_lo << ")";
        throw NumericalFailure(os.str());
    }
    // Sigma(u_hi) = 0 (Cases 1/4) or xi_bar < xi (Case 3): no evaluation
    // needed. Bisect to interval exhaustion: the residual |Sigma(u) - xi|
    // also sets the consistency of the p <-> q boundary anchoring, so the
    // extra iterations past the stopping rule are not wasted.
    double u_root = lo, best = std::abs(sig_lo - xi);
    double f_lo = sig_lo - xi;
    for (int it = 0; it < tol.root_max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // machine precision reached
        const double f_mid = sigma_of(mid, ctx, tol) - xi;
        if (std::abs(f_mid) < best) {
            best = std::abs(f_mid);
            u_root = mid;
        }
        if ((f_mid > 0) == (f_lo > 0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    if (best > stop_abs)
        throw NumericalFailure("solve_boundaries: Sigma(u) = xi root finding did not converge");

    FreeBoundarySolution sol;
    sol.xi = xi;
    sol.path = shoot_core(u_root, ctx, tol, /*dense=*/true);
    sol.q_star = sol.path.u;
    sol.q_upper = sol.path.zeta;
    sol.A_star = std::pow(sol.path.samples.front().n, -ctx.R);
    sol.A_upper = std::pow(sol.path.samples.back().n, -ctx.R);
    if (sol.q_star <= 1.0 && 1.0 <= sol.q_upper)
        sol.a_const = sol.path.I_at(1.0) - std::log1p(lambda_buy);
    return sol;
}

FreeBoundarySolution solve_boundaries(const AuxParams& aux, const Costs& costs,
                                      const ShootTol& tol) {
    costs.validate();
    return solve_boundaries(costs.round_trip(), FieldContext::from_aux(aux), costs.lambda_buy,
                            tol);
}

}  // namespace wedge
