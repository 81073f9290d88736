// Parameter reduction, validation and case classification.
#include <doctest.h>

#include <cmath>

#include "wedge/params.hpp"

using namespace wedge;

namespace {
MarketParams sample_market() {
    MarketParams p;
    p.r = 0.02; p.mu = 0.06; p.sigma = 0.3; p.alpha = 0.05; p.eta = 0.4;
    p.rho = 0.2; p.delta = 0.05; p.R = 0.5;
    p.costs = {0.01, 0.01};
    return p;
}
}  // namespace

TEST_CASE("derive_aux reproduces the hand-computed reduction") {
    const AuxParams a = derive_aux(sample_market());
    // frozen from independent arithmetic on the four displayed formulas
    CHECK(a.beta == doctest::Approx(0.13333333333333333).epsilon(1e-12));
    CHECK(a.nu == doctest::Approx(0.075).epsilon(1e-12));
    CHECK(a.b1 == doctest::Approx(0.405092592592593).epsilon(1e-10));
    CHECK(a.b2 == doctest::Approx(1.22685185185185).epsilon(1e-10));
    CHECK(a.b3 == doctest::Approx(0.251736111111111).epsilon(1e-10));
    CHECK(a.b4 == doctest::Approx(13.0208333333333).epsilon(1e-10));
    CHECK(a.xi == doctest::Approx(0.0202020202020202).epsilon(1e-12));
}

TEST_CASE("b2 always satisfies the algebraic lower bound") {
    const AuxParams a = derive_aux(sample_market());
    const MarketParams p = sample_market();
    const double bound =
        1.0 + std::pow(a.beta / (p.eta * p.R) - p.rho, 2) / (1.0 - p.rho * p.rho);
    CHECK(a.b2 == doctest::Approx(bound).epsilon(1e-12));
}

TEST_CASE("xi is trivial when gamma = 0") {
    Costs c{0.01, 0.0};
    CHECK(c.round_trip() == doctest::Approx(0.01));
}

TEST_CASE("q_M follows b3/(2R)") {
    const AuxParams a = aux_from_values(0.5, 0.25, 1.75, 0.85, 1.0, 0.1);
    CHECK(a.q_merton() == doctest::Approx(0.85));
}

TEST_CASE("standing assumption violations are named") {
    CHECK_THROWS_WITH_AS(aux_from_values(0.5, -0.1, 1.75, 0.85, 1.0, 0.1),
                         doctest::Contains("b1"), InvalidParams);
    CHECK_THROWS_WITH_AS(aux_from_values(0.5, 0.25, 0.9, 0.85, 1.0, 0.1),
                         doctest::Contains("b2"), InvalidParams);
    CHECK_THROWS_WITH_AS(aux_from_values(0.5, 0.25, 1.75, -0.85, 1.0, 0.1),
                         doctest::Contains("b3"), InvalidParams);
    CHECK_THROWS_AS(aux_from_values(0.5, 0.25, 1.0 + 1e-12, 0.85, 1.0, 0.1), InvalidParams);
    CHECK_THROWS_AS(aux_from_values(1.0, 0.25, 1.75, 0.85, 1.0, 0.1), InvalidParams);
}

TEST_CASE("m and ell evaluations") {
    const AuxParams a = aux_from_values(0.5, 0.25, 1.75, 1.2, 1.0, 0.5);
    CHECK(m_of(0.0, a) == doctest::Approx(1.0));                  // constant term
    CHECK(m_of(a.q_merton(), a) == doctest::Approx(a.m_vertex()));
    CHECK(ell_of(0.0, a) == doctest::Approx(1.0));
    CHECK(ell_of(1.0, a) == doctest::Approx(0.35).epsilon(1e-12));

    const AuxParams c2 = aux_from_values(0.5, 0.25, 1.75, 1.5, 1.0, 0.5);
    CHECK(m_of(1.0, c2) == doctest::Approx(-1.0).epsilon(1e-12));

    // ell > m on (0,1] for R<1
    for (int i = 1; i <= 40; ++i) {
        const double q = i / 40.0;
        CHECK(ell_of(q, a) > m_of(q, a));
    }
}

TEST_CASE("m crosses ell exactly once above 1 for R<1 (root of P)") {
    // crossings away from 0 are the roots of P(q) = R b2 + (1-2R) q - (1-R) q^2
    for (double b3 : {0.85, 1.2}) {
        const AuxParams a = aux_from_values(0.5, 0.25, 1.75, b3, 1.0, 0.5);
        auto P = [&](double q) {
            return a.R * a.b2 + (1 - 2 * a.R) * q - (1 - a.R) * q * q;
        };
        int sign_changes = 0;
        double prev = P(1.0);
        CHECK(prev > 0.0);  // P(1) = R(b2-1) > 0
        for (double q = 1.0; q < 12.0; q += 0.01) {
            const double cur = P(q + 0.01);
            if ((cur > 0) != (prev > 0)) ++sign_changes;
            prev = cur;
        }
        CHECK(sign_changes == 1);
        // and the gap ell - m flips sign exactly there
        int flips = 0;
        double g_prev = ell_of(1.0, a) - m_of(1.0, a);
        for (double q = 1.0; q < 12.0; q += 0.01) {
            const double g = ell_of(q + 0.01, a) - m_of(q + 0.01, a);
            if ((g > 0) != (g_prev > 0)) ++flips;
            g_prev = g;
        }
        CHECK(flips == 1);
    }
}

TEST_CASE("ell pole for R>1") {
    const AuxParams a = aux_from_values(1.25, 1.5, 1.25, 2.0, 1.0, 0.5);
    CHECK_THROWS_AS(ell_of(1.25 / 0.25, a), OutOfDomain);
    // m > ell on (0,1] for R>1
    for (int i = 1; i <= 40; ++i) {
        const double q = i / 40.0;
        CHECK(m_of(q, a) > ell_of(q, a));
    }
}

TEST_CASE("classification labels the four canonical parameter sets") {
    // classification consumes only (R, b1, b2, b3)
    const CaseReport r1 = classify(aux_from_values(0.5, 0.25, 1.75, 0.85, 1.0, 0.1));
    CHECK(r1.label == Case::Case1_W);
    CHECK(r1.m_M == doctest::Approx(0.2775).epsilon(1e-12));
    CHECK(r1.posed_for_given_xi);

    const CaseReport r2 = classify(aux_from_values(0.5, 0.25, 1.75, 1.5, 1.0, 0.1));
    CHECK(r2.label == Case::Case2_I);
    CHECK(r2.m_at_1 == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r2.ell_at_1 == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK_FALSE(r2.posed_for_given_xi);
    REQUIRE(r2.p_minus.has_value());
    // roots of q^2 - 3q + 1
    CHECK(*r2.p_minus == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(*r2.p_plus == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));

    const CaseReport r3 = classify(aux_from_values(0.5, 0.25, 1.75, 1.2, 1.0, 0.5));
    CHECK(r3.label == Case::Case3_CW);
    CHECK(r3.ell_at_1 == doctest::Approx(0.35).epsilon(1e-12));
    REQUIRE(r3.xi_bar.has_value());
    CHECK(r3.posed_for_given_xi == (0.5 > *r3.xi_bar));

    const CaseReport r4 = classify(aux_from_values(1.25, 1.5, 1.25, 2.0, 1.0, 0.1));
    CHECK(r4.label == Case::Case4_W);
    CHECK(r4.posed_for_given_xi);
}

TEST_CASE("classification is scale invariant: only (R,b1,b2,b3) matter") {
    const CaseReport a = classify(aux_from_values(0.5, 0.25, 1.75, 0.85, 1.0, 0.1));
    const CaseReport b = classify(aux_from_values(0.5, 0.25, 1.75, 0.85, 250.0, 0.1));
    CHECK(a.label == b.label);
    CHECK(a.m_M == b.m_M);
}

TEST_CASE("market calibration round-trips through derive_aux") {
    const AuxParams a = aux_from_values(0.5, 0.25, 1.75, 0.85, 13.0, 0.2);
    const MarketParams m = market_from_aux(a, Costs{0.2, 0.0});
    const AuxParams back = derive_aux(m);
    CHECK(back.b1 == doctest::Approx(a.b1).epsilon(1e-12));
    CHECK(back.b2 == doctest::Approx(a.b2).epsilon(1e-12));
    CHECK(back.b3 == doctest::Approx(a.b3).epsilon(1e-12));
    CHECK(back.b4 == doctest::Approx(a.b4).epsilon(1e-12));
}
