// policy.cpp -- candidate value function and feedback controls.
//
// Inside the wedge everything reduces to the pair (q(p), n(q)) through
//   G(p)  = |1-p|^{1-R} |1-q|^{R-1} n(q)^{-R}
//   G'(p) = (1-R) G(p) (q - p) / (p (1-p))
// with q(p) obtained by inverting  I(q) + ln(q/|1-q|) = ln(p/|1-p|) + ln(1+lambda)
// on each side of 1 separately (p = 1 maps to q = 1 with slope e^a).

#include "wedge/policy.hpp"

#include <cmath>

#include "wedge/numerics.hpp"

namespace wedge {

namespace {
constexpr double kOneWindow = 1e-9;   // |p-1| below this uses the p=1 branch
}

PolicySurface::PolicySurface(FreeBoundarySolution sol, AuxParams aux, Costs costs)
    : sol_(std::move(sol)), aux_(std::move(aux)), costs_(std::move(costs)) {
    const double lam = costs_.lambda_buy, gam = costs_.gamma_sell;
    p_star_ = sol_.q_star / (1.0 + lam * (1.0 - sol_.q_star));
    p_upper_ = sol_.q_upper / (1.0 - gam * (1.0 - sol_.q_upper));
    upsilon_ = std::pow(aux_.b1 / (aux_.R * aux_.b4), -aux_.R);
    straddles_one_ = sol_.a_const.has_value();
    if (straddles_one_) {
        const double R = aux_.R;
        const FieldContext ctx = FieldContext::from_aux(aux_);
        a_ = *sol_.a_const;
        n1_ = sol_.path.n_at(1.0);
        const double ea = std::exp(a_);
        const double nd1 = o_field(1.0, n1_, ctx).value;
        G_at_1_ = std::pow(n1_, -R) * std::exp(-(1.0 - R) * a_);
        G1_at_1_ = (1.0 - R) * (1.0 - ea) * G_at_1_;
        G2_at_1_ = G_at_1_ * R *
                   (ea * ea * (nd1 / n1_ - (1.0 - R)) - 2.0 * (1.0 - R) * (1.0 - ea) +
                    (1.0 - R));
    }
}

Region PolicySurface::region(double p) const {
    if (p < p_star_) return Region::buy;
    if (p > p_upper_) return Region::sell;
    return Region::wedge;
}

void PolicySurface::check_p_domain(double p) const {
    const double lo = costs_.lambda_buy > 0.0 ? -1.0 / costs_.lambda_buy
                                              : -std::numeric_limits<double>::infinity();
    const double hi = costs_.gamma_sell > 0.0 ? 1.0 / costs_.gamma_sell
                                              : std::numeric_limits<double>::infinity();
    if (!(p >= lo && p <= hi))
        throw OutOfDomain("fraction p outside the solvency range [-1/lambda, 1/gamma]");
}

double PolicySurface::tau_of_p(double p) const {
    return std::log(p / std::abs(1.0 - p)) + std::log1p(costs_.lambda_buy);
}

double PolicySurface::big_t(double q) const {
    return sol_.path.I_at(q) + std::log(q / std::abs(1.0 - q));
}

double PolicySurface::q_of_p(double p) const {
    const double qs = sol_.q_star, qu = sol_.q_upper;
    if (p < p_star_ || p > p_upper_)
        throw OutOfDomain("q_of_p: p outside the no-transaction wedge");
    if (p <= p_star_) return qs;
    if (p >= p_upper_) return qu;
    if (std::abs(p - 1.0) < kOneWindow) return 1.0;

    const double tau = tau_of_p(p);
    if (p < 1.0) {
        // T increasing on [q_star, 1)
        double lo = qs, hi = std::min(qu, 1.0 - 1e-14);
        auto g = [&](double q) { return big_t(q) - tau; };
        const double g_lo = g(lo);
        if (g_lo >= 0.0) return qs;
        return num::bisect(g, lo, hi, g_lo, std::numeric_limits<double>::infinity(), 200,
                           1e-15 * std::max(1.0, qu));
    }
    // T decreasing on (1, q_upper]
    double lo = std::max(qs, 1.0 + 1e-14), hi = qu;
    auto g = [&](double q) { return tau - big_t(q); };  // increasing in q
    const double g_hi = g(hi);
    if (g_hi <= 0.0) return qu;
    return num::bisect(g, lo, hi, -std::numeric_limits<double>::infinity(), g_hi, 200,
                       1e-15 * std::max(1.0, qu));
}

double PolicySurface::p_of_q(double q) const {
    if (q < sol_.q_star - 1e-12 || q > sol_.q_upper + 1e-12)
        throw OutOfDomain("p_of_q: q outside [q_star, q_upper]");
    if (std::abs(q - 1.0) < kOneWindow) return 1.0;
    const double w = std::exp(big_t(q) - std::log1p(costs_.lambda_buy));
    return (q < 1.0) ? w / (1.0 + w) : w / (w - 1.0);
}

double PolicySurface::G(double p) const {
    check_p_domain(p);
    const double R = aux_.R;
    if (p < p_star_) return sol_.A_star * std::pow(1.0 + costs_.lambda_buy * p, 1.0 - R);
    if (p > p_upper_) return sol_.A_upper * std::pow(1.0 - costs_.gamma_sell * p, 1.0 - R);
    if (straddles_one_ && std::abs(p - 1.0) < kOneWindow) return G_at_1_;
    const double q = q_of_p(p);
    const double n = sol_.path.n_at(q);
    return std::pow(std::abs(1.0 - p), 1.0 - R) * std::pow(std::abs(1.0 - q), R - 1.0) *
           std::pow(n, -R);
}

double PolicySurface::G1(double p) const {
    check_p_domain(p);
    const double R = aux_.R;
    if (p < p_star_) {
        const double lam = costs_.lambda_buy;
        return (1.0 - R) * lam * sol_.A_star * std::pow(1.0 + lam * p, -R);
    }
    if (p > p_upper_) {
        const double gam = costs_.gamma_sell;
        return -(1.0 - R) * gam * sol_.A_upper * std::pow(1.0 - gam * p, -R);
    }
    if (straddles_one_ && std::abs(p - 1.0) < kOneWindow) return G1_at_1_;
    const double q = q_of_p(p);
    return (1.0 - R) * G(p) * (q - p) / (p * (1.0 - p));
}

double PolicySurface::G2(double p) const {
    check_p_domain(p);
    const double R = aux_.R;
    if (p < p_star_) {
        const double lam = costs_.lambda_buy;
        return -R * (1.0 - R) * lam * lam * sol_.A_star * std::pow(1.0 + lam * p, -R - 1.0);
    }
    if (p > p_upper_) {
        const double gam = costs_.gamma_sell;
        return -R * (1.0 - R) * gam * gam * sol_.A_upper * std::pow(1.0 - gam * p, -R - 1.0);
    }
    if (straddles_one_ && std::abs(p - 1.0) < kOneWindow) return G2_at_1_;

    const double q = q_of_p(p);
    const double n = sol_.path.n_at(q);
    const FieldContext ctx = FieldContext::from_aux(aux_);
    const double f = f_field(q, n, ctx).value;
    // dq/dp through the defining integral relation
    const double denom = 1.0 - aux_.R * (1.0 - q) * f / (1.0 - aux_.R);
    const double dq_dp = q * (1.0 - q) / (p * (1.0 - p)) / denom;
    const double g = G(p), g1 = G1(p);
    return (1.0 - R) / (p * (1.0 - p)) *
           (g1 * (q - p) + g * (dq_dp - 1.0) - g * (q - p) * (1.0 - 2.0 * p) / (p * (1.0 - p)));
}

double PolicySurface::value(const Position& pos) const {
    if (pos.liquidation_value(costs_) < 0.0) throw Insolvent("position violates solvency");
    const double s = pos.paper_wealth();
    const double R = aux_.R;
    if (s <= 0.0) {
        // solvency boundary: zero consumption forever
        return (R < 1.0) ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    const double p = pos.y * pos.theta / s;
    return upsilon_ * std::pow(s, 1.0 - R) * G(p) / (1.0 - R);
}

double PolicySurface::certainty_equivalent(const Position& pos) const {
    if (pos.liquidation_value(costs_) < 0.0) throw Insolvent("position violates solvency");
    const double s = pos.paper_wealth();
    if (s <= 0.0) return -pos.x;
    const double p = pos.y * pos.theta / s;
    return s * std::pow(G(p), 1.0 / (1.0 - aux_.R)) - pos.x;
}

PolicySurface::Controls PolicySurface::feedback_controls(const Position& pos,
                                                         const MarketParams& market) const {
    const double s = pos.paper_wealth();
    if (!(s > 0.0)) throw Insolvent("paper wealth must be positive");
    const double p = pos.y * pos.theta / s;
    if (p < p_star_ - 1e-12 || p > p_upper_ + 1e-12)
        throw OutOfDomain("feedback controls are defined on the closed wedge; rebalance first");

    const double R = aux_.R;
    const double g = G(p), g1 = G1(p), g2 = G2(p);
    // C* = (V_x)^{-1/R}; Upsilon^{-1/R} = b1/(R b4)
    const double vx_core = g - p * g1 / (1.0 - R);  // > 0
    const double consumption = aux_.b1 / (aux_.R * aux_.b4) * std::pow(vx_core, -1.0 / R) * s;

    const double beta = (market.mu - market.r) / market.sigma;
    const double num =
        beta * ((1.0 - R) * g - p * g1) +
        market.eta * market.rho *
            (-R * (1.0 - R) * p * g + R * p * (2.0 * p - 1.0) * g1 - p * p * (1.0 - p) * g2);
    const double den = p * p * g2 + 2.0 * R * p * g1 - R * (1.0 - R) * g;
    const double pi = -s * num / (market.sigma * den);
    return {consumption, pi};
}

PolicySurface::Trade PolicySurface::rebalance_to_wedge(const Position& pos) const {
    if (pos.liquidation_value(costs_) < 0.0) throw Insolvent("position violates solvency");
    const double s = pos.paper_wealth();
    if (!(s > 0.0)) throw Insolvent("paper wealth must be positive to rebalance");
    const double p = pos.y * pos.theta / s;
    if (p >= p_star_ && p <= p_upper_) return {0.0, pos};

    if (p < p_star_) {
        const double ps = p_star_;
        const double phi =
            (pos.x * ps - (1.0 - ps) * pos.y * pos.theta) / (pos.y * (1.0 + costs_.lambda_buy * ps));
        Position after{pos.x - pos.y * (1.0 + costs_.lambda_buy) * phi, pos.y, pos.theta + phi};
        return {phi, after};
    }
    const double pu = p_upper_;
    const double psi =
        ((1.0 - pu) * pos.y * pos.theta - pos.x * pu) / (pos.y * (1.0 - costs_.gamma_sell * pu));
    Position after{pos.x + pos.y * (1.0 - costs_.gamma_sell) * psi, pos.y, pos.theta - psi};
    return {-psi, after};
}

double merton_value(double x, const AuxParams& aux) {
    if (!(x > 0.0)) throw InvalidParams("merton_value: wealth must be positive");
    if (!(aux.b1 > 0.0)) throw InvalidParams("merton_value: requires b1 > 0");
    return std::pow(aux.b1 / (aux.b4 * aux.R), -aux.R) * std::pow(x, 1.0 - aux.R) /
           (1.0 - aux.R);
}

double merton_liquid_weight(const MarketParams& market) {
    const double beta = (market.mu - market.r) / market.sigma;
    const double nu = (market.alpha - market.r) / market.eta;
    return (beta - market.rho * nu) / (market.R * market.sigma * (1.0 - market.rho * market.rho));
}

}  // namespace wedge
