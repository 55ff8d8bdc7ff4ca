#include <catch2/catch_amalgamated.hpp>

#include "recopt/lp_builder.hpp"
#include "recopt/simplex.hpp"

#include "fixtures.hpp"

using namespace recopt;
using Catch::Approx;

namespace {

double balance_residual(const YearLp& built, const LpSolution& sol) {
    double worst = 0.0;
    for (const auto& c : built.lp.constraints) {
        if (c.name.rfind("balance|", 0) != 0) continue;
        double lhs = 0.0;
        for (const auto& e : c.row)
            lhs += e.coeff * sol.primal.at(built.lp.variables[static_cast<size_t>(e.var)].name);
        worst = std::max(worst, std::fabs(lhs - c.rhs));
    }
    return worst;
}

}  // namespace

TEST_CASE("single-technology problem has the expected shape") {
    SystemGraph g;
    g.commodities["iron_ore"] = testing::commodity("iron_ore", CommodityKind::Material, true, 100.0);
    g.commodities["steel"] = testing::commodity("steel", CommodityKind::Material);
    g.technologies["furnace"] =
        testing::technology("furnace", {{"iron_ore", 1.6}}, {{"steel", 1.0}}, "steel", 365.0, 1.42);
    g.demands.add("steel", 2020, 40.0);
    auto ts = TypicalPeriodSet::uniform(8760);

    YearProblem p;
    p.year = 2020;
    p.graph = &g;
    p.periods = &ts;
    auto built = build_year_lp(p);

    CHECK(built.lp.has_variable("cap|furnace"));
    CHECK(built.lp.has_variable("act|furnace|0|0"));
    CHECK(built.lp.has_variable("imp|iron_ore|0|0"));
    CHECK(built.lp.variables.size() == 3);

    int balances = 0;
    bool has_cap_row = false;
    for (const auto& c : built.lp.constraints) {
        if (c.name.rfind("balance|", 0) == 0) {
            ++balances;
            CHECK(c.rel == Relation::Equal);
        }
        if (c.name == "co2_cap") has_cap_row = true;
    }
    CHECK(balances == 2);     // one per commodity and step
    CHECK_FALSE(has_cap_row);  // no cap requested

    // Demand row of the demanded commodity carries the annual demand as rhs
    // (single uniform step representing the whole year).
    for (const auto& c : built.lp.constraints)
        if (c.name == "balance|steel|0|0") CHECK(c.rhs == Approx(40.0 / 8760.0));
}

TEST_CASE("scrap route is bounded by forecast availability, row by row") {
    testing::MicroProblem fix;
    auto built = build_year_lp(fix.problem(2020, std::nullopt));

    const LinearProgram& lp = built.lp;
    bool found_avail = false;
    for (const auto& c : lp.constraints) {
        if (c.name == "scrapavail|steel_scrap") {
            found_avail = true;
            CHECK(c.rel == Relation::LessEqual);
            CHECK(c.rhs == Approx(30.0));
            REQUIRE(c.row.size() == 1);
            CHECK(lp.variables[static_cast<size_t>(c.row[0].var)].name == "scrap|steel_scrap|0|0");
            CHECK(c.row[0].coeff == Approx(8760.0));  // annual weighting
        }
    }
    CHECK(found_avail);

    // Capacity link: act - availability/steps * cap <= 0.
    for (const auto& c : lp.constraints) {
        if (c.name == "caplink|eaf_scrap|0|0") {
            REQUIRE(c.row.size() == 2);
            CHECK(lp.variables[static_cast<size_t>(c.row[0].var)].name == "act|eaf_scrap|0|0");
            CHECK(c.row[0].coeff == 1.0);
            CHECK(lp.variables[static_cast<size_t>(c.row[1].var)].name == "cap|eaf_scrap");
            CHECK(c.row[1].coeff == Approx(-1.0 / 8760.0));
        }
    }

    // Scrap balance: supply minus the arc furnace's specific consumption.
    for (const auto& c : lp.constraints) {
        if (c.name == "balance|steel_scrap|0|0") {
            REQUIRE(c.row.size() == 2);
            std::map<std::string, double> by_name;
            for (const auto& e : c.row)
                by_name[lp.variables[static_cast<size_t>(e.var)].name] = e.coeff;
            CHECK(by_name.at("act|eaf_scrap|0|0") == Approx(-1.1));
            CHECK(by_name.at("scrap|steel_scrap|0|0") == Approx(1.0));
            CHECK(c.rhs == 0.0);
        }
    }
}

TEST_CASE("piecewise invest costs interpolate the band endpoints") {
    auto two = piecewise_invest_costs(100.0, 0.2, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == Approx(90.0));
    CHECK(two[1] == Approx(110.0));
    auto four = piecewise_invest_costs(100.0, 0.1, 4);
    REQUIRE(four.size() == 4);
    CHECK(four.front() == Approx(92.5));
    CHECK(four.back() == Approx(107.5));
    CHECK((four[0] + four[1] + four[2] + four[3]) / 4.0 == Approx(100.0));
    CHECK(piecewise_invest_costs(100.0, 0.3, 1) == std::vector<double>{100.0});
    CHECK_THROWS_AS(piecewise_invest_costs(100.0, -0.1, 2), std::domain_error);
    CHECK_THROWS_AS(piecewise_invest_costs(100.0, 0.1, 0), std::domain_error);
}

TEST_CASE("zero band reproduces the flat invest objective exactly") {
    testing::MicroProblem fix;
    auto banded = fix.problem(2020, 60.0);
    auto flat = banded;
    auto sol_banded_band0 = [&] {
        for (auto& [tid, t] : fix.graph.technologies) t.invest_cost_band = 0.0;
        auto built = build_year_lp(banded);
        return solve(built.lp);
    }();
    auto sol_flat = [&] {
        flat.pwl.segments = 1;
        auto built = build_year_lp(flat);
        return solve(built.lp);
    }();
    REQUIRE(sol_banded_band0.status == LpSolution::Status::Optimal);
    REQUIRE(sol_flat.status == LpSolution::Status::Optimal);
    CHECK(sol_banded_band0.objective ==
          Approx(sol_flat.objective).epsilon(1e-9));
}

TEST_CASE("cost band prevents penny switching between near-identical routes") {
    SystemGraph g;
    g.commodities["ore"] = testing::commodity("ore", CommodityKind::Material, true, 10.0);
    g.commodities["metal"] = testing::commodity("metal", CommodityKind::Material);
    g.technologies["plant_a"] =
        testing::technology("plant_a", {{"ore", 1.0}}, {{"metal", 1.0}}, "metal", 100.0, 0.0, 0.2);
    g.technologies["plant_b"] =
        testing::technology("plant_b", {{"ore", 1.0}}, {{"metal", 1.0}}, "metal", 101.0, 0.0, 0.2);
    g.demands.add("metal", 2020, 100.0);
    auto ts = TypicalPeriodSet::uniform(8760);
    YearProblem p;
    p.year = 2020;
    p.graph = &g;
    p.periods = &ts;

    auto built = build_year_lp(p);
    auto sol = solve(built.lp);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    CHECK(built.capacity(sol, "plant_a") > 1.0);
    CHECK(built.capacity(sol, "plant_b") > 1.0);

    for (auto& [tid, t] : g.technologies) t.invest_cost_band = 0.0;
    auto built0 = build_year_lp(p);
    auto sol0 = solve(built0.lp);
    REQUIRE(sol0.status == LpSolution::Status::Optimal);
    CHECK(built0.capacity(sol0, "plant_a") == Approx(100.0).epsilon(1e-6));
    CHECK(built0.capacity(sol0, "plant_b") == Approx(0.0).margin(1e-8));
}

TEST_CASE("forbidden policy pins every recycling route to zero") {
    testing::MicroProblem fix;
    RecyclingPolicy forbidden;
    forbidden.mode = RecyclingPolicy::Mode::Forbidden;
    auto built = build_year_lp(fix.problem(2020, std::nullopt, forbidden));
    for (const auto& v : built.lp.variables) {
        if (v.name.rfind("act|eaf_scrap|", 0) == 0 || v.name.rfind("scrap|", 0) == 0)
            CHECK(v.upper == 0.0);
    }
    auto sol = solve(built.lp);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    CHECK(built.annual_secondary_production(sol, "steel") == Approx(0.0).margin(1e-9));
}

TEST_CASE("fixed rate at zero matches the forbidden feasible set") {
    testing::MicroProblem fix;
    RecyclingPolicy zero;
    zero.mode = RecyclingPolicy::Mode::FixedAtRate;
    zero.rates["steel"] = 0.0;
    auto sol_zero = solve(build_year_lp(fix.problem(2020, 60.0, zero)).lp);
    RecyclingPolicy forbidden;
    forbidden.mode = RecyclingPolicy::Mode::Forbidden;
    auto sol_forbidden = solve(build_year_lp(fix.problem(2020, 60.0, forbidden)).lp);
    REQUIRE(sol_zero.status == LpSolution::Status::Optimal);
    REQUIRE(sol_forbidden.status == LpSolution::Status::Optimal);
    CHECK(sol_zero.objective == Approx(sol_forbidden.objective).epsilon(1e-9));
}

TEST_CASE("bounded policy with zero availability kills recycling activity") {
    testing::MicroProblem fix;
    auto built = build_year_lp(fix.problem(2020, std::nullopt, {}, 0.0));
    auto sol = solve(built.lp);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    CHECK(built.annual_activity(sol, "eaf_scrap") == Approx(0.0).margin(1e-9));
}

TEST_CASE("fixed rate forces the exact secondary share") {
    testing::MicroProblem fix;
    RecyclingPolicy fixed;
    fixed.mode = RecyclingPolicy::Mode::FixedAtRate;
    fixed.rates["steel"] = 0.45;
    auto built = build_year_lp(fix.problem(2020, std::nullopt, fixed));
    auto sol = solve(built.lp);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    const double total = built.annual_production(sol, "steel");
    const double secondary = built.annual_secondary_production(sol, "steel");
    CHECK(secondary == Approx(0.45 * total).epsilon(1e-9));
    CHECK(built.recycling_rate(sol, "steel") == Approx(0.45).epsilon(1e-9));
}

TEST_CASE("policy feasible sets nest in the objective") {
    testing::MicroProblem fix;
    const double cap = 40.0;
    auto obj = [&](RecyclingPolicy policy) {
        auto sol = solve(build_year_lp(fix.problem(2020, cap, policy)).lp);
        REQUIRE(sol.status == LpSolution::Status::Optimal);
        return sol.objective;
    };
    RecyclingPolicy bounded;
    RecyclingPolicy fixed;
    fixed.mode = RecyclingPolicy::Mode::FixedAtRate;
    fixed.rates["steel"] = 0.30;
    RecyclingPolicy forbidden;
    forbidden.mode = RecyclingPolicy::Mode::Forbidden;
    const double b = obj(bounded), f = obj(fixed), n = obj(forbidden);
    CHECK(b <= f * (1.0 + 1e-9));
    CHECK(b <= n * (1.0 + 1e-9));
}

TEST_CASE("solved balances conserve commodity flows to 1e-8") {
    testing::MicroProblem fix;
    auto built = build_year_lp(fix.problem(2020, 45.0));
    auto sol = solve(built.lp);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    CHECK(balance_residual(built, sol) <= 1e-8);
}

TEST_CASE("cap-row dual matches a finite-difference re-solve") {
    testing::MicroProblem fix;
    const double cap = 30.0;
    auto p = fix.problem(2020, cap);
    auto built = build_year_lp(p);
    auto sol = solve(built.lp);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    const double dual = dual_of(sol, "co2_cap");
    REQUIRE(dual < 0.0);  // tightening a binding cap raises the optimum

    const double eps = 1e-4 * cap;
    auto p2 = fix.problem(2020, cap - eps);
    auto sol2 = solve(build_year_lp(p2).lp);
    REQUIRE(sol2.status == LpSolution::Status::Optimal);
    const double fd = (sol2.objective - sol.objective) / (-eps);
    CHECK(fd == Approx(dual).epsilon(1e-3));
}

TEST_CASE("demand-row dual equals the marginal supply cost") {
    testing::MicroProblem fix;
    // Flat costs so the objective is exactly linear in demand; the band's
    // demand-proportional segment widths would otherwise bend the response.
    for (auto& [tid, t] : fix.graph.technologies) t.invest_cost_band = 0.0;
    auto p = fix.problem(2020, std::nullopt);
    auto built = build_year_lp(p);
    auto sol = solve(built.lp);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    const double dual = dual_of(sol, "balance|steel|0|0");

    const double eps = 1e-3;
    fix.graph.demands.add("steel", 2020, eps);  // raise annual demand by eps
    auto sol2 = solve(build_year_lp(p).lp);
    const double fd = (sol2.objective - sol.objective) / (eps / 8760.0);
    CHECK(fd == Approx(dual).epsilon(1e-3));
}

TEST_CASE("novel recycling routes follow the policy's availability year") {
    testing::MicroProblem fix;
    fix.graph.technologies["eaf_scrap"].first_available_year = 2040;
    RecyclingPolicy policy;
    policy.effective_from = 2035;
    CHECK(effective_first_year(fix.graph.technologies["eaf_scrap"], policy, fix.graph, 2020) == 2035);
    CHECK(effective_first_year(fix.graph.technologies["eaf_sponge"], policy, fix.graph, 2020) == 0);

    auto built_2030 = build_year_lp(fix.problem(2030, std::nullopt, policy));
    CHECK(built_2030.lp.variables[static_cast<size_t>(built_2030.capacity_var.at("eaf_scrap"))].upper == 0.0);
    auto built_2035 = build_year_lp(fix.problem(2035, std::nullopt, policy));
    CHECK(built_2035.lp.variables[static_cast<size_t>(built_2035.capacity_var.at("eaf_scrap"))].upper == kInf);
}

TEST_CASE("configuration errors surface at build time") {
    testing::MicroProblem fix;
    auto p = fix.problem(2020, std::nullopt);
    p.scrap_availability.clear();
    CHECK_THROWS_AS(build_year_lp(p), ConfigError);

    auto p2 = fix.problem(2020, std::nullopt);
    RecyclingPolicy bad;
    bad.mode = RecyclingPolicy::Mode::FixedAtRate;
    bad.rates["steel"] = 1.5;
    p2.policy = bad;
    CHECK_THROWS_AS(build_year_lp(p2), std::domain_error);

    auto p3 = fix.problem(2020, std::nullopt);
    RecyclingPolicy empty;
    empty.mode = RecyclingPolicy::Mode::FixedAtRate;
    p3.policy = empty;
    CHECK_THROWS_AS(build_year_lp(p3), ConfigError);
}

TEST_CASE("feedstock flows carry configurable emission factors") {
    SystemGraph g;
    g.commodities["natural_gas"] = testing::commodity("natural_gas", CommodityKind::Energy, true, 30.0);
    g.commodities["ammonia"] = testing::commodity("ammonia", CommodityKind::Material);
    Technology t = testing::technology("haber_bosch", {}, {{"ammonia", 1.0}}, "ammonia", 670.0, 1.2);
    t.feedstocks["natural_gas"] = 5.83;
    g.technologies["haber_bosch"] = t;
    g.demands.add("ammonia", 2020, 10.0);
    auto ts = TypicalPeriodSet::uniform(8760);
    YearProblem p;
    p.year = 2020;
    p.graph = &g;
    p.periods = &ts;
    p.cap = 1000.0;

    auto plain = build_year_lp(p);
    CHECK(plain.effective_emission_factor.at("haber_bosch") == Approx(1.2));

    p.feedstock_emission_factors["natural_gas"] = 0.2;
    auto taxed = build_year_lp(p);
    CHECK(taxed.effective_emission_factor.at("haber_bosch") == Approx(1.2 + 5.83 * 0.2));

    // The feedstock still participates in the commodity balance.
    auto sol = solve(taxed.lp);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    CHECK(taxed.annual_import(sol, "natural_gas") == Approx(5.83 * 10.0).epsilon(1e-6));
    CHECK(taxed.annual_emissions(sol) == Approx((1.2 + 5.83 * 0.2) * 10.0).epsilon(1e-6));
}
