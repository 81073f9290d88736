// Verification suites: identity oracles, HJB/VI checks, statics sweeps,
// determinism under scheduling and verdict stability under grid refinement.
#include <doctest.h>

#include <cmath>

#include "wedge/verify.hpp"

using namespace wedge;

namespace {

const AuxParams kAux = aux_from_values(0.5, 0.25, 1.75, 0.85, 13.0, 0.2);
const Costs kCosts{1.0 / 11.0, 1.0 / 11.0};

PolicySurface make_surface(const AuxParams& aux, const Costs& costs) {
    return PolicySurface(solve_boundaries(aux, costs), aux, costs);
}

}  // namespace

TEST_CASE("identity suite passes for both risk-aversion regimes") {
    for (auto ctx : {FieldContext{0.5, 0.25, 1.75, 0.85}, FieldContext{0.5, 0.25, 1.75, 1.2},
                     FieldContext{1.25, 1.5, 1.25, 2.0}}) {
        const auto reports = run_identity_suite(ctx, 1000);
        CHECK(all_pass(reports));
        CHECK(reports.size() >= 8);
    }
}

TEST_CASE("identity suite: parallel and serial agree exactly") {
    const FieldContext ctx{0.5, 0.25, 1.75, 0.85};
    const auto a = run_identity_suite(ctx, 2000, true);
    const auto b = run_identity_suite(ctx, 2000, false);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        CHECK(a[i].worst == b[i].worst);
        CHECK(a[i].location == b[i].location);
    }
}

TEST_CASE("grid refinement does not flip identity verdicts") {
    const FieldContext ctx{0.5, 0.25, 1.75, 0.85};
    const auto coarse = run_identity_suite(ctx, 1000);
    const auto fine = run_identity_suite(ctx, 2000);
    REQUIRE(coarse.size() == fine.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) CHECK(coarse[i].pass == fine[i].pass);
}

TEST_CASE("HJB suite passes on a wedge straddling p = 1") {
    const auto surface = make_surface(kAux, kCosts);
    const MarketParams market = market_from_aux(kAux, kCosts);
    const auto reports = run_hjb_suite(surface, market, 801);
    for (const auto& r : reports) {
        INFO(r.name, " worst=", r.worst, " at ", r.location, " ", r.detail);
        CHECK(r.pass);
    }
    // p = 1 pasting must be among the checks for this geometry
    bool has_p1 = false;
    for (const auto& r : reports) has_p1 |= (r.name == "C2_pasting_p_one");
    CHECK(has_p1);
}

TEST_CASE("HJB suite passes on a wedge strictly inside (0,1)") {
    const AuxParams aux = aux_from_values(0.5, 0.25, 1.75, 0.85, 13.0, 1e-3);
    const Costs costs{1e-3, 0.0};
    const auto surface = make_surface(aux, costs);
    const MarketParams market = market_from_aux(aux, costs);
    CHECK(surface.q_upper() < 1.0);
    const auto reports = run_hjb_suite(surface, market, 801);
    for (const auto& r : reports) {
        INFO(r.name, " worst=", r.worst, " at ", r.location, " ", r.detail);
        CHECK(r.pass);
    }
}

TEST_CASE("HJB suite passes for R > 1") {
    const AuxParams aux = aux_from_values(1.25, 1.5, 1.25, 2.0, 13.0, 0.2);
    const Costs costs{0.2, 0.0};
    const auto surface = make_surface(aux, costs);
    const MarketParams market = market_from_aux(aux, costs);
    const auto reports = run_hjb_suite(surface, market, 801);
    for (const auto& r : reports) {
        INFO(r.name, " worst=", r.worst, " at ", r.location, " ", r.detail);
        CHECK(r.pass);
    }
}

TEST_CASE("grid refinement does not flip HJB verdicts") {
    const auto surface = make_surface(kAux, kCosts);
    const MarketParams market = market_from_aux(kAux, kCosts);
    const auto coarse = run_hjb_suite(surface, market, 501);
    const auto fine = run_hjb_suite(surface, market, 1001);
    REQUIRE(coarse.size() == fine.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) CHECK(coarse[i].pass == fine[i].pass);
}

TEST_CASE("statics suite passes on the Case-1 base") {
    const AuxParams base = aux_from_values(0.5, 0.25, 1.75, 0.85, 13.0, 0.1);
    const Costs costs{0.1, 0.0};
    const auto reports = run_statics_suite(base, costs, 10);
    for (const auto& r : reports) {
        INFO(r.name, " worst=", r.worst, " at ", r.location);
        CHECK(r.pass);
    }
}

TEST_CASE("sweep handles unposed points with NaN rows and reasons") {
    // Case 3 parameters: xi grid straddles the critical cost
    const AuxParams base = aux_from_values(0.5, 0.25, 1.75, 1.2, 13.0, 0.5);
    const SweepSpec spec{"xi", 0.1, 1.0, 12, false};
    const auto rows = sweep_parameter(base, Costs{0.5, 0.0}, spec, Position{1, 1, 1});
    int posed = 0, unposed = 0;
    for (const auto& r : rows) {
        if (r.posed) {
            ++posed;
            CHECK(std::isfinite(r.q_star));
        } else {
            ++unposed;
            CHECK(r.reason == "below_critical_cost");
            CHECK(std::isnan(r.q_star));
        }
    }
    CHECK(posed > 0);
    CHECK(unposed > 0);  // xi_bar ~ 0.406 sits inside [0.1, 1.0]
}

TEST_CASE("sweep on an ill-posed base reports every row unposed") {
    const AuxParams base = aux_from_values(0.5, 0.25, 1.75, 1.5, 13.0, 0.5);
    const SweepSpec spec{"xi", 0.1, 2.0, 5, false};
    const auto rows = sweep_parameter(base, Costs{0.5, 0.0}, spec, Position{1, 1, 1});
    for (const auto& r : rows) {
        CHECK_FALSE(r.posed);
        CHECK(r.reason == "ill_posed");
    }
}

TEST_CASE("sweep rejects bad specs") {
    CHECK_THROWS_AS(
        sweep_parameter(kAux, kCosts, SweepSpec{"nope", 0.1, 1.0, 5, false}, Position{1, 1, 1}),
        InvalidParams);
    CHECK_THROWS_AS(
        sweep_parameter(kAux, kCosts, SweepSpec{"xi", 0.1, 1.0, 0, false}, Position{1, 1, 1}),
        InvalidParams);
    CHECK_THROWS_AS(
        sweep_parameter(kAux, kCosts, SweepSpec{"xi", -0.1, 1.0, 5, true}, Position{1, 1, 1}),
        InvalidParams);
}

TEST_CASE("sweep: parallel equals serial") {
    const SweepSpec spec{"xi", 0.01, 1.0, 8, true};
    const auto a = sweep_parameter(kAux, kCosts, spec, Position{1, 1, 1}, true);
    const auto b = sweep_parameter(kAux, kCosts, spec, Position{1, 1, 1}, false);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].q_star == b[i].q_star);
        CHECK(a[i].ce == b[i].ce);
    }
}
