// fbp.hpp -- the free boundary value problem: shoot n_u from (u, m(u)),
// detect the recrossing zeta(u), accumulate the cost integral, evaluate
// Sigma(u), invert Sigma(u)=xi and compute the critical cost xi_bar.
#pragma once

#include <optional>
#include <vector>

#include "wedge/field.hpp"
#include "wedge/params.hpp"

namespace wedge {

struct ShootTol {
    double rel = 1e-10;        // relative ODE tolerance
    double abs = 1e-12;        // absolute ODE tolerance
    double event_q = 1e-12;    // bisection width for locating zeta in q
    double u_min = 1e-8;       // domain guard: Sigma(u) -> +inf as u -> 0
    int root_max_iter = 200;   // bisection cap for Sigma(u) = xi
    int path_samples = 400;    // minimum sample density of the stored path
};

// One accepted sample of the augmented system (n, I) at abscissa q, with the
// derivatives used for Hermite interpolation between samples.
struct PathSample {
    double q;
    double n;
    double I;       // I(q) = int_u^q -R/(s(1-R)) F(s, n(s)) ds
    double dn;      // n'(q) = O(q, n(q))
    double dI;      // I'(q)
};

// A monotone sampled solution of the shooting ODE.
struct OdePath {
    double u = 0.0;       // left boundary (start abscissa)
    double zeta = 0.0;    // right crossing zeta(u)
    std::vector<PathSample> samples;
    ShootTol tol;

    double n_at(double q) const;         // Hermite interpolation
    double I_at(double q) const;
    double n_prime_at(double q) const;   // O(q, n_at(q)) through the field
    double I_total() const { return samples.back().I; }
};

// (q_star, q_upper, path, pre-exponents, and the constant a when the wedge
// straddles q = 1) -- everything the policy layer needs.
struct FreeBoundarySolution {
    double q_star;
    double q_upper;
    OdePath path;
    double A_star;    // n(q_star)^{-R}
    double A_upper;   // n(q_upper)^{-R}
    std::optional<double> a_const;  // I(1) - ln(1+lambda), iff q_star <= 1 <= q_upper
    double xi;
};

// Integrate the augmented system from (u, m(u), 0) until (1-R)(n - m) changes
// sign; zeta located by step bisection. Throws NumericalFailure if no
// crossing occurs before the 2 q_M - u guard, OutOfDomain on field blow-up.
OdePath shoot(double u, const FieldContext& ctx, const ShootTol& tol = {});

// exp(I(zeta(u))) - 1; strictly decreasing in u.
double sigma_of(double u, const FieldContext& ctx, const ShootTol& tol = {});

// Critical round-trip cost for the conditionally well-posed case:
//   xi_bar = exp(-int_{p-}^{p+} R/(q(1-R)) F(q,0) dq) - 1.
// scheme 0: adaptive Simpson; scheme 1: composite Gauss-Legendre (oracle).
double critical_xi(const FieldContext& ctx, double tol = 1e-12, int scheme = 0);

// Invert Sigma over (u_min, q_M] (Cases 1/4) or (u_min, p_-] (Case 3).
// lambda_buy is needed only to attach a_const; pass the cost split in use.
FreeBoundarySolution solve_boundaries(double xi, const FieldContext& ctx, double lambda_buy,
                                      const ShootTol& tol = {});

// Convenience: classify-and-solve from AuxParams (checks posedness first).
FreeBoundarySolution solve_boundaries(const AuxParams& aux, const Costs& costs,
                                      const ShootTol& tol = {});

}  // namespace wedge
