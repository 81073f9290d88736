// params.hpp -- raw market inputs, reduction to the auxiliary parameter set,
// standing-assumption validation and the four-way case classification.
#pragma once

#include <optional>
#include <string>

#include "wedge/errors.hpp"

namespace wedge {

// Proportional transaction costs on the illiquid asset.
struct Costs {
    double lambda_buy = 0.0;   // charged on purchases, >= 0
    double gamma_sell = 0.0;   // charged on sales, in [0,1)

    double round_trip() const { return (lambda_buy + gamma_sell) / (1.0 - gamma_sell); }
    void validate() const;
};

// Raw economic inputs. Rates are per year, volatilities per sqrt(year).
struct MarketParams {
    double r;        // risk-free rate
    double mu;       // liquid-asset drift
    double sigma;    // liquid-asset volatility, > 0
    double alpha;    // illiquid-asset drift
    double eta;      // illiquid-asset volatility, > 0
    double rho;      // correlation, in (-1,1)
    double delta;    // subjective discount rate
    double R;        // relative risk aversion, > 0, != 1
    Costs costs;

    void validate() const;
};

// The reduced parameter set the whole problem depends on. The free boundary
// problem sees only (R, b1, b2, b3); b4 scales the value function and xi is
// the only cost combination the transformed problem sees.
struct AuxParams {
    double R;
    double b1;   // normalised discount factor, > 0
    double b2;   // multi-asset nonlinearity factor, > 1
    double b3;   // effective Sharpe ratio per unit idiosyncratic vol, > 0
    double b4;   // 2 / (eta^2 (1-rho^2))
    double xi;   // round-trip cost (lambda+gamma)/(1-gamma), > 0

    double beta = 0.0;  // liquid Sharpe ratio (informational; 0 when aux-given)
    double nu = 0.0;    // illiquid Sharpe ratio (informational)

    double q_merton() const { return b3 / (2.0 * R); }
    double m_vertex() const { return 1.0 - b3 * b3 * (1.0 - R) / (4.0 * b1 * R); }

    void validate(double b2_tol = 1e-9) const;
};

enum class Case { Case1_W, Case2_I, Case3_CW, Case4_W };

const char* to_string(Case c);

// Classification record. p_minus/p_plus are the roots of m(q)=0 and are only
// present when m_M <= 0; xi_bar only in the conditionally well-posed case.
struct CaseReport {
    Case label;
    double q_M;
    double m_M;
    double m_at_1;
    double ell_at_1;
    std::optional<double> p_minus;
    std::optional<double> p_plus;
    std::optional<double> xi_bar;
    bool posed_for_given_xi;
    double xi;  // the cost level the verdict refers to
};

// Reduction formulas. Throws InvalidParams naming the violated assumption.
AuxParams derive_aux(const MarketParams& params);

// Build AuxParams directly from (R, b1, b2, b3, b4, xi); validates the
// standing assumptions the same way derive_aux does.
AuxParams aux_from_values(double R, double b1, double b2, double b3, double b4, double xi);

// The quadratic m and the algebraic barrier ell.
double m_of(double q, const AuxParams& aux);
double ell_of(double q, const AuxParams& aux);  // throws OutOfDomain at the pole (R>1)

// Four-way case decision tree. Total on valid aux; computes xi_bar (Case 3 only)
// by delegating to the free boundary solver's quadrature.
CaseReport classify(const AuxParams& aux);

// Synthesize a MarketParams consistent with the given auxiliary parameters.
// The map b -> market is underdetermined; (r, rho, sigma) are free choices.
// Useful when inputs give only the reduced set (R, b1..b4).
MarketParams market_from_aux(const AuxParams& aux, const Costs& costs, double r = 0.02,
                             double rho = 0.0, double sigma = 0.2);

}  // namespace wedge
