// field.hpp -- exact evaluation of the first-order ODE right-hand side
// O(q,n), its normalized form F = O/n, and the supporting algebraic
// functions (phi, E^2, v, D, A) including every removable singularity.
//
// Everything here is pure and allocation-free; the ODE integrator calls
// f_field in its inner loop. The primary evaluation path is the D-based
// form of O with the barrier term cleared of its pole:
//
//   F(q,n) = -(1-R) (n - m(q)) K(q,n) / (2 R (1-q) Z(q,n))
//
// where D(q,n) = b1 (n - m(q)) K(q,n) and Z(q,n) = [(1-R)q + R][ell(q) - n]
// expanded into a polynomial with no pole at q = R/(R-1). The direct form
// (o_direct) is kept as an oracle; it cancels catastrophically near the
// barrier and must not be used for integration.
#pragma once

#include <cmath>
#include <limits>

#include "wedge/params.hpp"

namespace wedge {

enum class Branch { regular, limit_q1, limit_pole, limit_n_ell };

struct FieldValue {
    double value;
    Branch branch;
};

// Reduced parameters plus the constants the inner loop needs.
struct FieldContext {
    double R, b1, b2, b3;

    // derived
    double one_mR;     // 1 - R
    double sgn;        // sgn(1-R)
    double cm2, cm1;   // m(q) = cm2 q^2 - cm1 q + 1
    double e2c;        // E^2 = e2c (1-q)^2
    double phi_qc;     // phi = b1(n-1) + phi_qc q + phi_c
    double phi_c;
    double lhat_c;     // lhat = m + lhat_c q (1-q)
    double zq_c;       // Z = s_q (lhat - n) + zq_c q
    double pole;       // R/(R-1) for R>1, else +inf

    FieldContext(double R_, double b1_, double b2_, double b3_) : R(R_), b1(b1_), b2(b2_), b3(b3_) {
        one_mR = 1.0 - R;
        sgn = (R < 1.0) ? 1.0 : -1.0;
        cm2 = R * one_mR / b1;
        cm1 = b3 * one_mR / b1;
        e2c = 4.0 * R * R * one_mR * one_mR * (b2 - 1.0);
        phi_qc = one_mR * (b3 - 2.0 * R);
        phi_c = (2.0 - b2) * R * one_mR;
        lhat_c = one_mR / b1;
        zq_c = (b2 - 1.0) * R * one_mR / b1;
        pole = (R > 1.0) ? R / (R - 1.0) : std::numeric_limits<double>::infinity();
    }

    static FieldContext from_aux(const AuxParams& a) { return {a.R, a.b1, a.b2, a.b3}; }

    double m(double q) const { return (cm2 * q - cm1) * q + 1.0; }
    double m_prime(double q) const { return 2.0 * cm2 * q - cm1; }
    double e2(double q) const { return e2c * (1.0 - q) * (1.0 - q); }
    double phi(double q, double n) const { return b1 * (n - 1.0) + phi_qc * q + phi_c; }
    double s_of(double q) const { return one_mR * q + R; }

    double ell(double q) const {
        const double s = s_of(q);
        if (s == 0.0) throw OutOfDomain("ell(q): pole at q = R/(R-1)");
        return m(q) + lhat_c * q * (1.0 - q) + zq_c * q / s;
    }

    // [(1-R)q + R] * (ell(q) - n), as a pole-free polynomial expression.
    double z_of(double q, double n) const {
        return s_of(q) * (m(q) + lhat_c * q * (1.0 - q) - n) + zq_c * q;
    }

    double v(double q, double n) const {
        const double p = phi(q, n);
        return p - sgn * std::sqrt(p * p + e2(q));
    }

    // sqrt(phi^2+E^2) + sgn(1-R)*phi, computed without cancellation.
    double v_residual(double q, double n) const {
        const double p = phi(q, n);
        const double sp = sgn * p;
        const double root = std::sqrt(p * p + e2(q));
        return (sp >= 0.0) ? root + sp : e2(q) / (root - sp);
    }

    // D(q,n) = b1 (n - m(q)) K(q,n); K is the exact bracket
    //   2R(1-q) + q * (t_n + t_m) / (sqrt_n + sqrt_m)
    // with t_k = sqrt(phi_k^2+E^2) + sgn*phi_k evaluated stably.
    double k_factor(double q, double n) const {
        const double E2 = e2(q);
        const double pn = phi(q, n), pm = phi(q, m(q));
        const double rn = std::sqrt(pn * pn + E2), rm = std::sqrt(pm * pm + E2);
        const double tn = (sgn * pn >= 0.0) ? rn + sgn * pn : E2 / (rn - sgn * pn);
        const double tm = (sgn * pm >= 0.0) ? rm + sgn * pm : E2 / (rm - sgn * pm);
        return 2.0 * R * (1.0 - q) + q * (tn + tm) / (rn + rm);
    }

    double D(double q, double n) const { return b1 * (n - m(q)) * k_factor(q, n); }

    // A(q,n) from the dF/dn analysis; test-facing only (pole of ell applies).
    double A(double q, double n) const {
        const double p = phi(q, n);
        const double root = std::sqrt(p * p + e2(q));
        const double dv_dn = b1 * (1.0 - sgn * p / root);
        return (ell(q) - n) * (2.0 * b1 * s_of(q) - q * dv_dn) + D(q, n);
    }
};

namespace detail {
constexpr double kBranchWindow = 1e-9;  // activation window for analytic limits
}

// F(q,n) = O(q,n)/n, defined also at n = 0. Returns a signed-infinity
// sentinel where the limit genuinely does not exist (R<1, q<=1, n -> ell(q)).
inline FieldValue f_field(double q, double n, const FieldContext& c) {
    const double R = c.R, omr = c.one_mR;

    // q = 1: E vanishes; use the closed-form limit.
    if (std::abs(q - 1.0) < detail::kBranchWindow) {
        const double ell1 = c.m(1.0) + c.zq_c;  // s(1) = 1
        const double gap = ell1 - n;
        if (c.sgn * gap <= 0.0) {
            // no finite limit from the feasible side
            return {-c.sgn * std::numeric_limits<double>::infinity(), Branch::limit_q1};
        }
        return {-omr * (n - c.m(1.0)) / gap, Branch::limit_q1};
    }

    // q = R/(R-1) (R>1): denominator tends to the constant 2R^3(b2-1)/(R-1).
    if (R > 1.0 && std::abs(q - c.pole) < detail::kBranchWindow) {
        const double den = 2.0 * R * R * R * (c.b2 - 1.0) / (R - 1.0);
        return {-omr * c.D(q, n) / den, Branch::limit_pole};
    }

    const double z = c.z_of(q, n);
    const double s = c.s_of(q);

    // n = ell(q) where D(q,ell)=0 (q>1 for R<1; 1<q<pole for R>1): 0/0,
    // finite limit from l'Hopital.
    const bool removable = (R < 1.0) ? (q > 1.0) : (q > 1.0 && q < c.pole);
    if (removable && std::abs(z) < detail::kBranchWindow * (1.0 + std::abs(s) * (1.0 + std::abs(n)))) {
        const double den = s * s + (c.b2 - 1.0) * R * R;
        const double val = -omr / (R * (1.0 - q)) * (q * s / den - 1.0);
        return {val, Branch::limit_n_ell};
    }

    const double f = -omr * (n - c.m(q)) * c.k_factor(q, n) / (2.0 * R * (1.0 - q) * z);
    if (!std::isfinite(f)) {
        return {-c.sgn * std::numeric_limits<double>::infinity(), Branch::regular};
    }
    return {f, Branch::regular};
}

// O(q,n) = n * F(q,n).
inline FieldValue o_field(double q, double n, const FieldContext& c) {
    FieldValue f = f_field(q, n, c);
    return {n * f.value, f.branch};
}

// The direct form of O as displayed alongside the transformation; oracle only.
inline double o_direct(double q, double n, const FieldContext& c) {
    const double omr = c.one_mR;
    const double p = c.phi(q, n);
    const double den = 2.0 * omr * (1.0 - q) * c.s_of(q) - p - c.sgn * std::sqrt(p * p + c.e2(q));
    return omr * n / (c.R * (1.0 - q)) - 2.0 * omr * omr * q * n / c.R / den;
}

}  // namespace wedge
