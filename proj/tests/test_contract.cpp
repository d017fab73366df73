#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cyberins/contract.hpp"
#include "oracles.hpp"

using namespace cyberins;

namespace {

MarketModel baseline() { return MarketModel{}; }

SolverOptions fair() {
    SolverOptions o;
    o.mode = Mode::fair_premium;
    return o;
}

double profit_at(const oracle::ProbFn& p, const Contract& k, double x) {
    const double q = p(x);
    return (1.0 - q) * k.z - q * k.c;
}

}  // namespace

TEST_CASE("insurer profit and fair premium arithmetic") {
    const RiskFunction hc(RiskClassSpec{0.8, 1.0, 0.0});
    const double p1 = oracle::class_probability({0.8, 1.0, 0.0})(1.0);
    CHECK(insurer_profit(Contract{1.0, 3.0}, hc, 1.0) == doctest::Approx((1 - p1) - 3 * p1).epsilon(1e-14));
    CHECK(insurer_profit(Contract{1.0, 3.0}, hc, 1.0) == doctest::Approx(-0.17720).epsilon(1e-4));
    CHECK(insurer_profit(Contract{0.7, 0.0}, hc, 0.3) >= 0.0);

    CHECK(fair_premium(hc, 0.0, 1.0) == 0.0);
    const double z = fair_premium(hc, 3.0, 1.0);
    CHECK(z == doctest::Approx(p1 * 3 / (1 - p1)).epsilon(1e-14));
    CHECK(z == doctest::Approx(1.25112).epsilon(1e-5));
    CHECK(std::abs(insurer_profit(Contract{z, 3.0}, hc, 1.0)) <= 1e-12);

    const RiskFunction half(RiskClassSpec{0.5, 1.0, 0.0});
    CHECK(insurer_profit(Contract{1.0, 1.0}, half, 0.0) == 0.0);
    CHECK(fair_premium(half, 2.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("value of information") {
    MarketModel m = baseline();
    const Contract k{1.0, 3.0};
    for (double theta : {0.0, 1.0}) {
        m.mix.theta = theta;
        CHECK(std::abs(value_of_information(m, k)) <= 1e-12);
    }
    m.mix.theta = 0.5;
    const double vi = value_of_information(m, k);
    const double ref = oracle::value_of_information(m.utility, m.mix, m.wealth, 0.0, k, k);
    MESSAGE("VI(1,3) = " << vi << ", oracle " << ref);
    CHECK(vi > 0.0);
    CHECK(std::abs(vi - ref) <= 1e-8);

    std::mt19937_64 rng(9);
    for (int i = 0; i < 25; ++i) {
        const double c = oracle::uniform(rng, 0.0, 5.0);
        const Contract kk{oracle::uniform(rng, 0.0, 5.0 - c), c};
        m.s_nbr = oracle::uniform(rng, 0.0, 5.0);
        CHECK(value_of_information(m, kk) >= -1e-12);
    }
}

TEST_CASE("scenario A reduces to the single-class problem at theta = 0") {
    MarketModel m = baseline();
    m.mix.theta = 0.0;
    MarketModel lc_only = m;
    lc_only.mix.hc = lc_only.mix.lc;
    const auto a = optimize_scenario_A(m);
    const auto b = optimize_scenario_A(lc_only);
    CHECK(a.contract_lc.z == b.contract_lc.z);
    CHECK(a.contract_lc.c == b.contract_lc.c);
    CHECK(a.insurer_profit == b.insurer_profit);
}

TEST_CASE("scenario A monopoly against grid oracles") {
    const MarketModel m = baseline();
    const auto sol = optimize_scenario_A(m);
    REQUIRE(sol.feasible);
    CHECK(verify_solution(m, sol).empty());
    CHECK(sol.contract_hc.z == sol.contract_lc.z);
    CHECK(sol.contract_hc.c == sol.contract_lc.c);

    const oracle::ProbFn pa = oracle::blended_probability(m.mix);
    const auto lifted = oracle::pooled_lifted_grid(m.utility, pa, m.wealth, 0.0, 200);
    REQUIRE(lifted.found);
    MESSAGE("solver c = " << sol.contract_lc.c << " z = " << sol.contract_lc.z << " profit "
                          << sol.insurer_profit << "; oracle c = " << lifted.best.c << " z = "
                          << lifted.best.z << " profit " << lifted.profit);
    CHECK(sol.insurer_profit >= lifted.profit - 1e-9);
    CHECK(std::abs(sol.contract_lc.c - lifted.best.c) <= m.wealth.r / 200 + 1e-3 * m.wealth.r);
    CHECK(sol.contract_lc.gross() < m.wealth.r);

    const auto literal = oracle::pooled_contract_grid(m.utility, pa, m.wealth, 0.0, 200);
    REQUIRE(literal.found);
    CHECK(sol.insurer_profit >= literal.profit - 1e-9);

    const auto& o = sol.classes.front();
    CHECK(o.ir_slack >= -1e-9);
    CHECK(o.profit == doctest::Approx(profit_at(pa, o.contract, o.x)).epsilon(1e-12));
}

TEST_CASE("scenario A with costly investment has an interior optimum") {
    MarketModel m = baseline();
    m.utility.gamma = 0.0;
    m.mix.hc.beta = 4.0;
    m.mix.lc.beta = 4.0;
    const auto sol = optimize_scenario_A(m);
    REQUIRE(sol.feasible);
    CHECK(verify_solution(m, sol).empty());
    const oracle::ProbFn pa = oracle::blended_probability(m.mix);
    const auto lifted = oracle::pooled_lifted_grid(m.utility, pa, m.wealth, 0.0, 200);
    MESSAGE("solver c = " << sol.contract_lc.c << " profit " << sol.insurer_profit
                          << "; oracle c = " << lifted.best.c << " profit " << lifted.profit);
    CHECK(sol.market);
    CHECK(sol.insurer_profit >= lifted.profit - 1e-9);
    CHECK(std::abs(sol.contract_lc.c - lifted.best.c) <= m.wealth.r / 200 + 1e-3 * m.wealth.r);
}

TEST_CASE("scenario B") {
    MarketModel m = baseline();
    SUBCASE("one contract for both classes") {
        const auto sol = optimize_scenario_B(m);
        REQUIRE(sol.feasible);
        CHECK(verify_solution(m, sol).empty());
        CHECK(sol.contract_hc.z == sol.contract_lc.z);
        CHECK(sol.contract_hc.c == sol.contract_lc.c);
        REQUIRE(sol.vi.has_value());
        CHECK(*sol.vi >= -1e-12);
    }
    SUBCASE("single class at fair premiums is fully covered") {
        m.mix.theta = 1.0;
        const auto sol = optimize_scenario_B(m, fair());
        REQUIRE(sol.feasible);
        CHECK(verify_solution(m, sol).empty());
        CHECK(std::abs(sol.contract_lc.gross() - m.wealth.r) <= 1e-3 * m.wealth.r);
        CHECK(std::abs(sol.insurer_profit) <= 1e-6 * m.wealth.r);
        REQUIRE(sol.vi.has_value());
        CHECK(std::abs(*sol.vi) <= 1e-12);
    }
}

TEST_CASE("fair premium mode breaks even") {
    const MarketModel m = baseline();
    for (Scenario s : {Scenario::A, Scenario::B, Scenario::C}) {
        const auto sol = optimize(s, m, fair());
        REQUIRE(sol.feasible);
        CHECK(verify_solution(m, sol).empty());
        CHECK(std::abs(sol.insurer_profit) <= 1e-6 * m.wealth.r);
        for (const auto& o : sol.classes) CHECK(std::abs(o.profit) <= 1e-6 * m.wealth.r);
    }
}

TEST_CASE("scenario C collapses with a single class") {
    for (double theta : {0.0, 1.0}) {
        MarketModel m = baseline();
        m.mix.theta = theta;
        const auto sol = optimize_scenario_C(m);
        REQUIRE(sol.feasible);
        CHECK(verify_solution(m, sol).empty());
        CHECK(sol.classes.size() == 1);

        MarketModel single = m;
        const RiskClassSpec present = theta == 1.0 ? m.mix.hc : m.mix.lc;
        single.mix.hc = present;
        single.mix.lc = present;
        const auto ref = optimize_scenario_A(single);
        const Contract& k = theta == 1.0 ? sol.contract_hc : sol.contract_lc;
        CHECK(std::abs(k.c - ref.contract_lc.c) <= 1e-3 * m.wealth.r);
        CHECK(std::abs(k.z - ref.contract_lc.z) <= 1e-3 * m.wealth.r);
        CHECK(sol.insurer_profit >= ref.insurer_profit - 1e-9);
    }
}

TEST_CASE("scenario C separating menu against the coarse menu oracle") {
    const MarketModel m = baseline();
    const auto sol = optimize_scenario_C(m);
    REQUIRE(sol.feasible);
    CHECK(verify_solution(m, sol).empty());
    const bool differ = std::abs(sol.contract_hc.z - sol.contract_lc.z) > 1e-3 * m.wealth.r ||
                        std::abs(sol.contract_hc.c - sol.contract_lc.c) > 1e-3 * m.wealth.r;
    CHECK(differ);
    REQUIRE(sol.ic_slack_hc.has_value());
    REQUIRE(sol.ic_slack_lc.has_value());
    CHECK(*sol.ic_slack_hc >= -1e-9);
    CHECK(*sol.ic_slack_lc >= -1e-9);
    CHECK(sol.contract_hc.gross() < m.wealth.r);
    CHECK(sol.contract_lc.gross() < m.wealth.r);

    const auto grid = oracle::menu_grid(m.utility, m.mix, m.wealth, 0.0, 40);
    REQUIRE(grid.found);
    MESSAGE("menu profit " << sol.insurer_profit << ", oracle " << grid.profit);
    CHECK(sol.insurer_profit >= grid.profit - 1e-9);
}

TEST_CASE("mandatory flag reports a missing market") {
    MarketModel m = baseline();
    SolverOptions o;
    o.mandatory = true;
    const auto sol = optimize_scenario_A(m, o);
    CHECK(sol.mandatory_contradiction == !sol.market);
}

TEST_CASE("verification catches tampering") {
    const MarketModel m = baseline();
    auto sol = optimize_scenario_B(m);
    REQUIRE(verify_solution(m, sol).empty());
    sol.classes.front().eu += 1e-3;
    CHECK_FALSE(verify_solution(m, sol).empty());
}

TEST_CASE("parsing helpers") {
    CHECK(parse_scenario("B") == Scenario::B);
    CHECK(parse_mode("fair_premium") == Mode::fair_premium);
    CHECK(to_string(Mode::monopoly) == "monopoly");
    CHECK_THROWS_AS(parse_scenario("D"), std::invalid_argument);
}
