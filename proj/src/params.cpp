// params.cpp -- parameter validation, reduction and calibration.

#include "wedge/params.hpp"

#include <cmath>
#include <sstream>

namespace wedge {

namespace {
constexpr double kB2Tol = 1e-9;

[[noreturn]] void fail(const std::string& what) { throw InvalidParams(what); }
}  // namespace

void Costs::validate() const {
    if (!(lambda_buy >= 0.0)) fail("lambda must be >= 0");
    if (!(gamma_sell >= 0.0 && gamma_sell < 1.0)) fail("gamma must be in [0,1)");
    if (!(lambda_buy + gamma_sell > 0.0)) fail("not both lambda and gamma may be zero");
}

void MarketParams::validate() const {
    if (!(sigma > 0.0)) fail("sigma must be > 0");
    if (!(eta > 0.0)) fail("eta must be > 0");
    if (!(rho > -1.0 && rho < 1.0)) fail("rho must be in (-1,1)");
    if (!(R > 0.0)) fail("R must be > 0");
    if (R == 1.0) fail("R = 1 (log utility) is not supported");
    costs.validate();
}

void AuxParams::validate(double b2_tol) const {
    if (!(R > 0.0) || R == 1.0) fail("R must be > 0 and != 1");
    if (!(b1 > 0.0)) fail("standing assumption violated: b1 <= 0");
    if (!(b3 > 0.0)) fail("standing assumption violated: b3 <= 0");
    if (!(b2 > 1.0)) fail("standing assumption violated: b2 <= 1");
    if (b2 - 1.0 <= b2_tol) fail("b2 = 1 within tolerance; this case is excluded");
    if (!(b4 > 0.0)) fail("b4 must be > 0");
    if (!(xi > 0.0)) fail("round-trip cost xi must be > 0");
}

AuxParams derive_aux(const MarketParams& p) {
    p.validate();
    const double R = p.R;
    const double beta = (p.mu - p.r) / p.sigma;
    const double nu = (p.alpha - p.r) / p.eta;
    const double rr = 1.0 - p.rho * p.rho;
    const double e2 = p.eta * p.eta;

    AuxParams a;
    a.R = R;
    a.beta = beta;
    a.nu = nu;
    a.b1 = 2.0 * (p.delta - p.r * (1.0 - R) - beta * beta * (1.0 - R) / (2.0 * R)) / (e2 * rr);
    a.b2 = (beta * beta - 2.0 * R * p.eta * p.rho * beta + e2 * R * R) / (e2 * R * R * rr);
    a.b3 = 2.0 * (nu - beta * p.rho) / (p.eta * rr);
    a.b4 = 2.0 / (e2 * rr);
    a.xi = p.costs.round_trip();
    a.validate(kB2Tol);
    return a;
}

AuxParams aux_from_values(double R, double b1, double b2, double b3, double b4, double xi) {
    AuxParams a;
    a.R = R;
    a.b1 = b1;
    a.b2 = b2;
    a.b3 = b3;
    a.b4 = b4;
    a.xi = xi;
    a.validate(kB2Tol);
    return a;
}

double m_of(double q, const AuxParams& aux) {
    const double omr = 1.0 - aux.R;
    return (aux.R * omr / aux.b1 * q - aux.b3 * omr / aux.b1) * q + 1.0;
}

double ell_of(double q, const AuxParams& aux) {
    const double R = aux.R, omr = 1.0 - R;
    const double s = omr * q + R;
    if (s == 0.0) throw OutOfDomain("ell(q): pole at q = R/(R-1)");
    return m_of(q, aux) + omr / aux.b1 * q * (1.0 - q) + (aux.b2 - 1.0) * R * omr / aux.b1 * q / s;
}

const char* to_string(Case c) {
    switch (c) {
        case Case::Case1_W: return "Case1-W";
        case Case::Case2_I: return "Case2-I";
        case Case::Case3_CW: return "Case3-CW";
        case Case::Case4_W: return "Case4-W";
    }
    return "?";
}

MarketParams market_from_aux(const AuxParams& aux, const Costs& costs, double r, double rho,
                             double sigma) {
    const double R = aux.R;
    const double rr = 1.0 - rho * rho;
    const double eta = std::sqrt(2.0 / (aux.b4 * rr));
    // b2 = 1 + (beta/(eta R) - rho)^2 / (1-rho^2); take the positive branch.
    const double beta = eta * R * (rho + std::sqrt((aux.b2 - 1.0) * rr));
    const double nu = aux.b3 * eta * rr / 2.0 + beta * rho;

    MarketParams p;
    p.r = r;
    p.rho = rho;
    p.sigma = sigma;
    p.eta = eta;
    p.mu = r + beta * sigma;
    p.alpha = r + nu * eta;
    p.delta = aux.b1 / aux.b4 + r * (1.0 - R) + beta * beta * (1.0 - R) / (2.0 * R);
    p.R = R;
    p.costs = costs;
    p.validate();
    return p;
}

}  // namespace wedge
