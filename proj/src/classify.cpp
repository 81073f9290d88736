// classify.cpp -- the four-way case decision tree on (sgn(1-R), m_M, ell(1)),
// with the critical cost attached in the conditionally well-posed case.

#include <cmath>

#include "wedge/fbp.hpp"
#include "wedge/params.hpp"

namespace wedge {

namespace {

// Roots of m(q) = 0 by the cancellation-safe quadratic formula.
// m(q) = A q^2 + B q + 1 with A = R(1-R)/b1, B = -b3(1-R)/b1.
std::pair<double, double> m_roots(const AuxParams& aux) {
    const double A = aux.R * (1.0 - aux.R) / aux.b1;
    const double B = -aux.b3 * (1.0 - aux.R) / aux.b1;
    const double disc = B * B - 4.0 * A;
    const double sd = std::sqrt(std::max(0.0, disc));
    // B < 0 for R<1 where this is used, so -B + sd avoids cancellation.
    const double t = -0.5 * (B - sd);
    const double r1 = t / A;
    const double r2 = 1.0 / t;
    return {std::min(r1, r2), std::max(r1, r2)};
}

}  // namespace

CaseReport classify(const AuxParams& aux) {
    aux.validate();
    CaseReport rep;
    rep.q_M = aux.q_merton();
    rep.m_M = aux.m_vertex();
    rep.m_at_1 = m_of(1.0, aux);
    rep.ell_at_1 = ell_of(1.0, aux);
    rep.xi = aux.xi;

    if (aux.R > 1.0) {
        rep.label = Case::Case4_W;
        rep.posed_for_given_xi = true;
    } else if (rep.m_M > 0.0) {
        rep.label = Case::Case1_W;
        rep.posed_for_given_xi = true;
    } else {
        auto [pm, pp] = m_roots(aux);
        rep.p_minus = pm;
        rep.p_plus = pp;
        if (rep.ell_at_1 <= 0.0) {
            rep.label = Case::Case2_I;
            rep.posed_for_given_xi = false;
        } else {
            rep.label = Case::Case3_CW;
            rep.xi_bar = critical_xi(FieldContext::from_aux(aux));
            rep.posed_for_given_xi = aux.xi > *rep.xi_bar;
        }
    }

    // m_M == 0 exactly: boundary of Case 1; still well-posed for xi > 0.
    if (aux.R < 1.0 && rep.m_M == 0.0) {
        auto [pm, pp] = m_roots(aux);
        rep.p_minus = pm;
        rep.p_plus = pp;
    }
    return rep;
}

}  // namespace wedge
