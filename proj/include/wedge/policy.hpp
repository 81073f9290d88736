// policy.hpp -- reverse the transformation chain: from a FreeBoundarySolution
// build the wedge limits in the original fraction p, the candidate value
// function V^C via G^C and its first two derivatives, the Merton benchmark,
// certainty equivalents and the feedback controls.
#pragma once

#include <optional>

#include "wedge/fbp.hpp"
#include "wedge/params.hpp"

namespace wedge {

// Liquid wealth x, illiquid unit price y, illiquid units theta.
struct Position {
    double x;
    double y;
    double theta;

    double paper_wealth() const { return x + y * theta; }
    double fraction() const { return y * theta / paper_wealth(); }
    // instantaneous liquidation value (solvency requires >= 0)
    double liquidation_value(const Costs& c) const {
        const double pos = std::max(theta, 0.0), neg = std::max(-theta, 0.0);
        return x + pos * y * (1.0 - c.gamma_sell) - neg * y * (1.0 + c.lambda_buy);
    }
};

enum class Region { buy, wedge, sell };

// Immutable once built; all evaluators are pure.
class PolicySurface {
  public:
    PolicySurface(FreeBoundarySolution sol, AuxParams aux, Costs costs);

    double p_star() const { return p_star_; }
    double p_upper() const { return p_upper_; }
    double q_star() const { return sol_.q_star; }
    double q_upper() const { return sol_.q_upper; }
    const FreeBoundarySolution& solution() const { return sol_; }
    const AuxParams& aux() const { return aux_; }
    const Costs& costs() const { return costs_; }
    double upsilon() const { return upsilon_; }
    std::optional<double> a_const() const { return sol_.a_const; }

    Region region(double p) const;

    // Monotone maps between the original fraction p and the transformed q on
    // the wedge. p_of_q is explicit; q_of_p inverts the stored cost integral.
    double q_of_p(double p) const;
    double p_of_q(double q) const;

    // G^C and derivatives on (-1/lambda, 1/gamma). Closed forms outside the
    // wedge, chain rule through q_of_p inside, dedicated branch at p = 1.
    double G(double p) const;
    double G1(double p) const;
    double G2(double p) const;

    // V^C(x,y,theta) = Upsilon (x+y theta)^{1-R} G^C(p) / (1-R).
    double value(const Position& pos) const;

    // Cash amount solving W(x + C) = V(x,y,theta).
    double certainty_equivalent(const Position& pos) const;

    struct Controls {
        double consumption;      // C* > 0
        double liquid_exposure;  // Pi*, cash value held in the liquid risky asset
    };
    // Requires p inside the closed wedge; market supplies (beta, eta, rho, sigma).
    Controls feedback_controls(const Position& pos, const MarketParams& market) const;

    struct Trade {
        double units;    // > 0 buy, < 0 sell, 0 if already inside
        Position after;
    };
    Trade rebalance_to_wedge(const Position& pos) const;

  private:
    void check_p_domain(double p) const;
    double tau_of_p(double p) const;   // ln(p/|1-p|) + ln(1+lambda)
    double big_t(double q) const;      // I(q) + ln(q/|1-q|)

    FreeBoundarySolution sol_;
    AuxParams aux_;
    Costs costs_;
    double p_star_, p_upper_;
    double upsilon_;
    bool straddles_one_;
    // precomputed p = 1 branch values (valid iff straddles_one_)
    double n1_ = 0.0, a_ = 0.0, G_at_1_ = 0.0, G1_at_1_ = 0.0, G2_at_1_ = 0.0;
};

// Classical Merton value without the illiquid asset:
// W(x) = (b1/(b4 R))^{-R} x^{1-R} / (1-R).
double merton_value(double x, const AuxParams& aux);

// Frictionless two-asset Merton weight of the liquid risky asset (fraction of
// wealth); the lambda,gamma -> 0 limit of Pi*/wealth at the Merton line.
double merton_liquid_weight(const MarketParams& market);

}  // namespace wedge
