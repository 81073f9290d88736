// Policy surface: wedge maps, G and derivatives, value function, certainty
// equivalent, feedback controls and the rebalancing trade.
#include <doctest.h>

#include <cmath>

#include "wedge/policy.hpp"

using namespace wedge;

namespace {

// Canonical Case-1 parameters with a symmetric cost split so the wedge
// straddles p = 1 (frozen reference values from the independent integrator).
struct Fixture {
    AuxParams aux = aux_from_values(0.5, 0.25, 1.75, 0.85, 13.0, 0.2);
    Costs costs{1.0 / 11.0, 1.0 / 11.0};
    PolicySurface surface{solve_boundaries(aux, costs), aux, costs};
};

const Fixture& fix() {
    static Fixture f;
    return f;
}

}  // namespace

TEST_CASE("wedge limits in p match the Moebius maps and the frozen reference") {
    const auto& s = fix().surface;
    CHECK(s.q_star() == doctest::Approx(0.351639688813).epsilon(1e-8));
    CHECK(s.q_upper() == doctest::Approx(1.27847104662).epsilon(1e-8));
    CHECK(s.p_star() == doctest::Approx(0.332067044082).epsilon(1e-8));
    CHECK(s.p_upper() == doctest::Approx(1.24690496209).epsilon(1e-8));
    REQUIRE(s.a_const().has_value());
    CHECK(*s.a_const() == doctest::Approx(0.0776956946487).epsilon(1e-7));
    // p_star <= q_star iff q_star <= 1; p_upper <= q_upper iff q_upper >= 1
    CHECK(s.p_star() <= s.q_star());
    CHECK(s.q_star() < 0.85);
    CHECK(0.85 < s.q_upper());
    CHECK(s.p_upper() <= s.q_upper());  // q_upper > 1 here
}

TEST_CASE("zero-cost sides collapse the p/q maps to the identity") {
    const AuxParams aux = aux_from_values(0.5, 0.25, 1.75, 0.85, 13.0, 0.1);
    {
        Costs c{0.1, 0.0};  // gamma = 0: p_upper = q_upper
        PolicySurface s(solve_boundaries(aux, c), aux, c);
        CHECK(s.p_upper() == doctest::Approx(s.q_upper()).epsilon(1e-14));
        CHECK(s.p_star() < s.q_star());
    }
    {
        Costs c{0.0, 0.1 / 1.1};  // lambda = 0: p_star = q_star; xi = 0.1
        PolicySurface s(solve_boundaries(aux, c), aux, c);
        CHECK(s.p_star() == doctest::Approx(s.q_star()).epsilon(1e-14));
        // q_upper > 1 for this xi, so the sale map pulls p_upper below q_upper
        CHECK(s.q_upper() > 1.0);
        CHECK(s.p_upper() < s.q_upper());
    }
}

TEST_CASE("q_of_p anchors the boundaries and round-trips") {
    const auto& s = fix().surface;
    CHECK(s.q_of_p(s.p_star()) == doctest::Approx(s.q_star()).epsilon(1e-12));
    CHECK(s.q_of_p(s.p_upper()) == doctest::Approx(s.q_upper()).epsilon(1e-12));
    for (double t : {0.05, 0.3, 0.47, 0.52, 0.8, 0.97}) {
        const double p = s.p_star() + t * (s.p_upper() - s.p_star());
        const double q = s.q_of_p(p);
        CHECK(s.p_of_q(q) == doctest::Approx(p).epsilon(1e-9));
    }
    CHECK_THROWS_AS(s.q_of_p(s.p_star() - 0.01), OutOfDomain);
}

TEST_CASE("slope of the q map at p = 1 is e^a") {
    const auto& s = fix().surface;
    const double ea = std::exp(*s.a_const());
    const double h = 1e-5;
    CHECK((1.0 - s.q_of_p(1.0 - h)) / h == doctest::Approx(ea).epsilon(1e-4));
    CHECK((s.q_of_p(1.0 + h) - 1.0) / h == doctest::Approx(ea).epsilon(1e-4));
}

TEST_CASE("G takes the closed form off the wedge and pastes continuously") {
    const auto& s = fix().surface;
    const double lam = s.costs().lambda_buy, gam = s.costs().gamma_sell;
    const double A_star = s.solution().A_star, A_upper = s.solution().A_upper;
    for (double p : {-0.5, 0.0, 0.2, s.p_star() - 1e-9}) {
        CHECK(s.G(p) == doctest::Approx(A_star * std::pow(1 + lam * p, 0.5)).epsilon(1e-12));
    }
    for (double p : {s.p_upper() + 1e-9, 2.0, 5.0}) {
        CHECK(s.G(p) == doctest::Approx(A_upper * std::pow(1 - gam * p, 0.5)).epsilon(1e-12));
    }
    CHECK(s.G(s.p_star() - 1e-12) == doctest::Approx(s.G(s.p_star() + 1e-12)).epsilon(1e-9));
    CHECK(s.G(s.p_upper() - 1e-12) == doctest::Approx(s.G(s.p_upper() + 1e-12)).epsilon(1e-9));
    // G > 0 across the solvency interval
    for (double p = -5.0; p <= 10.0; p += 0.25) CHECK(s.G(p) > 0.0);
}

TEST_CASE("G(0) = n(q_star)^{-R} exceeds 1 for R < 1") {
    const auto& s = fix().surface;
    const double n_star = s.solution().path.samples.front().n;
    CHECK(s.G(0.0) == doctest::Approx(std::pow(n_star, -0.5)).epsilon(1e-12));
    CHECK(s.G(0.0) > 1.0);
}

TEST_CASE("analytic G1/G2 match central finite differences") {
    const auto& s = fix().surface;
    // separate steps: second differences amplify evaluation noise by 1/h^2
    const double h1 = 1e-6, h2 = 1e-4;
    for (double p : {0.45, 0.7, 0.95, 1.05, 1.2, fix().surface.p_star() + 1e-3,
                     fix().surface.p_upper() - 1e-3}) {
        const double fd1 = (s.G(p + h1) - s.G(p - h1)) / (2 * h1);
        const double fd2 = (s.G(p + h2) - 2 * s.G(p) + s.G(p - h2)) / (h2 * h2);
        CHECK(s.G1(p) == doctest::Approx(fd1).epsilon(1e-6));
        CHECK(s.G2(p) == doctest::Approx(fd2).epsilon(2e-3));
    }
}

TEST_CASE("dedicated p = 1 branch matches one-sided limits") {
    const auto& s = fix().surface;
    CHECK(s.G(1.0) == doctest::Approx(1.403089253997).epsilon(1e-7));   // frozen
    CHECK(s.G2(1.0) == doctest::Approx(-0.1223754890477).epsilon(1e-5));
    for (double h : {1e-4, 1e-5}) {
        CHECK(std::abs(s.G(1.0 + h) - s.G(1.0)) < 1e-3);
        CHECK(std::abs(s.G1(1.0 + h) - s.G1(1.0)) < 1e-3);
        CHECK(std::abs(s.G2(1.0 + h) - s.G2(1.0)) < 5e-3);
    }
}

TEST_CASE("value function: homothety, theta = 0 plug-in, buy-trade invariance") {
    const auto& s = fix().surface;
    const Position pos{2.0, 1.0, 2.0};
    const double v = s.value(pos);
    for (double k : {0.5, 2.0, 7.0}) {
        CHECK(s.value({k * pos.x, pos.y, k * pos.theta}) ==
              doctest::Approx(std::pow(k, 0.5) * v).epsilon(1e-12));
    }
    // theta = 0: V = Upsilon x^{1-R} G(0) / (1-R)
    CHECK(s.value({4.0, 1.0, 0.0}) ==
          doctest::Approx(s.upsilon() * 2.0 * s.G(0.0) / 0.5).epsilon(1e-12));
    // buy region: the initial rebalancing trade leaves the value unchanged
    const Position low{10.0, 1.0, 0.5};  // p ~ 0.048 < p_star
    const auto trade = s.rebalance_to_wedge(low);
    CHECK(trade.units > 0.0);
    CHECK(s.value(trade.after) == doctest::Approx(s.value(low)).epsilon(1e-10));
    CHECK(trade.after.fraction() == doctest::Approx(s.p_star()).epsilon(1e-12));
}

TEST_CASE("sell-side rebalance hits the upper boundary exactly") {
    const auto& s = fix().surface;
    const Position high{-0.5, 1.0, 2.0};  // p = 4/3 > p_upper, still solvent
    REQUIRE(high.liquidation_value(s.costs()) > 0.0);
    const auto trade = s.rebalance_to_wedge(high);
    CHECK(trade.units < 0.0);
    CHECK(trade.after.fraction() == doctest::Approx(s.p_upper()).epsilon(1e-12));
    CHECK(s.value(trade.after) == doctest::Approx(s.value(high)).epsilon(1e-10));
    // inside: zero trade
    const Position in{2.0, 1.0, 2.0};
    CHECK(s.rebalance_to_wedge(in).units == 0.0);
}

TEST_CASE("negative theta solvent positions are bought back into the wedge") {
    const auto& s = fix().surface;
    const Position shortpos{3.0, 1.0, -0.5};
    REQUIRE(shortpos.liquidation_value(s.costs()) > 0.0);
    const auto trade = s.rebalance_to_wedge(shortpos);
    CHECK(trade.units > 0.5);  // buys back through zero
    CHECK(trade.after.fraction() == doctest::Approx(s.p_star()).epsilon(1e-12));
}

TEST_CASE("insolvent positions are rejected") {
    const auto& s = fix().surface;
    CHECK_THROWS_AS(s.value({-3.0, 1.0, 1.0}), Insolvent);
    CHECK_THROWS_AS(s.certainty_equivalent({-3.0, 1.0, 1.0}), Insolvent);
    CHECK_THROWS_AS(s.rebalance_to_wedge({1.0, 1.0, -2.0}), Insolvent);
}

TEST_CASE("merton benchmark") {
    MarketParams p;
    p.r = 0.02; p.mu = 0.06; p.sigma = 0.3; p.alpha = 0.05; p.eta = 0.4;
    p.rho = 0.2; p.delta = 0.05; p.R = 0.5;
    p.costs = {0.01, 0.01};
    const AuxParams aux = derive_aux(p);
    CHECK(merton_value(1.0, aux) == doctest::Approx(8.01783725737273).epsilon(1e-10));
    CHECK(merton_value(4.0, aux) == doctest::Approx(2.0 * 8.01783725737273).epsilon(1e-12));
    CHECK_THROWS_AS(merton_value(0.0, aux), InvalidParams);
}

TEST_CASE("market access premium: V(x, theta=0) = W(x) G(0) > W(x) for R < 1") {
    const auto& s = fix().surface;
    const double x = 3.0;
    const double w = merton_value(x, s.aux());
    CHECK(s.value({x, 1.0, 0.0}) == doctest::Approx(w * s.G(0.0)).epsilon(1e-12));
    CHECK(s.value({x, 1.0, 0.0}) > w);
}

TEST_CASE("certainty equivalent: positivity at theta = 0, homogeneity, consistency") {
    const auto& s = fix().surface;
    const double x = 2.0;
    const double ce0 = s.certainty_equivalent({x, 1.0, 0.0});
    CHECK(ce0 == doctest::Approx(x * (std::pow(s.G(0.0), 2.0) - 1.0)).epsilon(1e-12));
    CHECK(ce0 > 0.0);  // option value of market access
    const Position pos{2.0, 1.0, 2.0};
    const double ce = s.certainty_equivalent(pos);
    for (double k : {0.5, 3.0}) {
        CHECK(s.certainty_equivalent({k * pos.x, pos.y, k * pos.theta}) ==
              doctest::Approx(k * ce).epsilon(1e-12));
    }
    // definition W(x + C) = V(x,y,theta)
    CHECK(merton_value(pos.x + ce, s.aux()) == doctest::Approx(s.value(pos)).epsilon(1e-12));
}

TEST_CASE("feedback controls: positivity, homothety, domain guard") {
    const auto& f = fix();
    const MarketParams market = market_from_aux(f.aux, f.costs);
    const auto& s = f.surface;
    for (double t : {0.0, 0.3, 0.5, 0.8, 1.0}) {
        const double p = s.p_star() + t * (s.p_upper() - s.p_star());
        const Position pos{(1.0 - p) * 5.0, 1.0, p * 5.0};
        const auto ctl = s.feedback_controls(pos, market);
        CHECK(ctl.consumption > 0.0);
        const auto scaled = s.feedback_controls({2 * pos.x, pos.y, 2 * pos.theta}, market);
        CHECK(scaled.consumption == doctest::Approx(2.0 * ctl.consumption).epsilon(1e-10));
        CHECK(scaled.liquid_exposure == doctest::Approx(2.0 * ctl.liquid_exposure).epsilon(1e-9));
    }
    CHECK_THROWS_AS(s.feedback_controls({10.0, 1.0, 0.1}, market), OutOfDomain);
}

TEST_CASE("vanishing-cost limit of Pi* approaches the frictionless Merton weight") {
    const AuxParams aux = aux_from_values(0.5, 0.25, 1.75, 0.85, 13.0, 1e-6);
    const Costs costs{1e-6, 0.0};
    PolicySurface s(solve_boundaries(aux, costs), aux, costs);
    const MarketParams market = market_from_aux(aux, costs);
    // position on the Merton line q_M = p (tiny wedge straddles it)
    const double p = 0.5 * (s.p_star() + s.p_upper());
    const Position pos{(1.0 - p) * 3.0, 1.0, p * 3.0};
    const auto ctl = s.feedback_controls(pos, market);
    const double w_liquid = merton_liquid_weight(market);
    CHECK(ctl.liquid_exposure / pos.paper_wealth() ==
          doctest::Approx(w_liquid).epsilon(5e-3));
}

TEST_CASE("V is increasing and concave in x across the wedge") {
    const auto& s = fix().surface;
    const double h = 1e-4;
    for (double x : {0.5, 1.0, 2.0, 4.0}) {
        for (double ytheta : {0.5, 1.5, 3.0}) {
            const Position pos{x, 1.0, ytheta};
            if (s.region(pos.fraction()) != Region::wedge) continue;
            const double vm = s.value({x - h, 1.0, ytheta});
            const double v0 = s.value(pos);
            const double vp = s.value({x + h, 1.0, ytheta});
            CHECK((vp - vm) / (2 * h) > 0.0);
            CHECK((vp - 2 * v0 + vm) / (h * h) < 0.0);
        }
    }
}

TEST_CASE("transformation round trip reproduces the solver's n(q)") {
    const auto& s = fix().surface;
    const double R = s.aux().R;
    const auto& path = s.solution().path;
    for (std::size_t i = 5; i + 5 < path.samples.size(); i += 23) {
        const double q = path.samples[i].q;
        if (std::abs(q - 1.0) < 1e-3) continue;
        const double p = s.p_of_q(q);
        const double g = s.G(p), g1 = s.G1(p);
        // h = sgn(1-p)|1-p|^{R-1} G; w = p(1-p) dh/dp; W = w/((1-R)h) = q
        const double sgn = (p < 1.0) ? 1.0 : -1.0;
        const double h = sgn * std::pow(std::abs(1 - p), R - 1.0) * g;
        const double dh =
            sgn * std::pow(std::abs(1 - p), R - 1.0) * (g1 + (1.0 - R) * g / (1.0 - p));
        const double w = p * (1.0 - p) * dh;
        const double W = w / ((1.0 - R) * h);
        CHECK(W == doctest::Approx(q).epsilon(1e-8));
        const double n = std::pow(std::abs(h), -1.0 / R) * std::pow(std::abs(1 - q), 1.0 - 1.0 / R);
        CHECK(n == doctest::Approx(path.samples[i].n).epsilon(1e-8));
    }
}
