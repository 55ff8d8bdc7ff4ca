#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "recopt/system_model.hpp"

using namespace recopt;
using Catch::Approx;

namespace {

SystemGraph steel_demand_graph(bool with_producer) {
    SystemGraph g;
    g.commodities["steel"] = {"steel", CommodityKind::Material, Unit::Tonne, false, {}, {}, {}};
    g.commodities["iron_ore"] = {"iron_ore", CommodityKind::Material, Unit::Tonne, true, 100.0, {}, {}};
    if (with_producer) {
        Technology t;
        t.id = "furnace";
        t.inputs = {{"iron_ore", 1.5}};
        t.outputs = {{"steel", 1.0}};
        t.reference_commodity = "steel";
        t.invest_cost = 365.0;
        g.technologies["furnace"] = t;
    }
    g.demands.add("steel", 2020, 40.0);
    return g;
}

}  // namespace

TEST_CASE("empty graph validates vacuously") {
    CHECK(validate_system(SystemGraph{}).empty());
}

TEST_CASE("unsatisfiable demand is diagnosed") {
    auto g = steel_demand_graph(false);
    auto diags = validate_system(g);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == "unsatisfiable_demand");

    CHECK(validate_system(steel_demand_graph(true)).empty());
}

TEST_CASE("validation is idempotent and side-effect free") {
    auto g = steel_demand_graph(false);
    auto d1 = validate_system(g);
    auto d2 = validate_system(g);
    REQUIRE(d1.size() == d2.size());
    for (size_t i = 0; i < d1.size(); ++i) {
        CHECK(d1[i].code == d2[i].code);
        CHECK(d1[i].message == d2[i].message);
    }
}

TEST_CASE("broken type invariants are reported, not thrown") {
    auto g = steel_demand_graph(true);
    g.commodities["steel"].import_price = 5.0;  // importable flag still false
    g.technologies["furnace"].fixed_om_share = 1.5;
    g.technologies["furnace"].lifetime = 0;
    g.technologies["furnace"].outputs.erase("steel");
    auto diags = validate_system(g);
    std::set<std::string> codes;
    for (const auto& d : diags) codes.insert(d.code);
    CHECK(codes.count("import_price"));
    CHECK(codes.count("fixed_om"));
    CHECK(codes.count("lifetime"));
    CHECK(codes.count("reference"));
}

TEST_CASE("chained intermediates count as reachable") {
    auto g = steel_demand_graph(true);
    // furnace now needs sponge, produced from ore by a second technology.
    g.commodities["sponge"] = {"sponge", CommodityKind::Material, Unit::Tonne, false, {}, {}, {}};
    g.technologies["furnace"].inputs = {{"sponge", 1.1}};
    Technology dr;
    dr.id = "direct_reduction";
    dr.inputs = {{"iron_ore", 1.4}};
    dr.outputs = {{"sponge", 1.0}};
    dr.reference_commodity = "sponge";
    g.technologies["direct_reduction"] = dr;
    CHECK(validate_system(g).empty());

    g.commodities["iron_ore"].importable = false;
    g.commodities["iron_ore"].import_price.reset();
    auto diags = validate_system(g);
    REQUIRE_FALSE(diags.empty());
}

TEST_CASE("annualized cost: straight line, annuity, continuity at r -> 0") {
    CHECK(annualized_cost(1000.0, 20, 0.0) == Approx(50.0));
    CHECK(annualized_cost(1000.0, 20, 0.05) == Approx(80.24).margin(0.01));
    CHECK(annualized_cost(365.0, 20, 0.0) == Approx(18.25));
    CHECK_THROWS_AS(annualized_cost(1000.0, 0, 0.05), std::domain_error);
    CHECK_THROWS_AS(annualized_cost(1000.0, 20, -0.1), std::domain_error);
    const double at_zero = annualized_cost(1000.0, 20, 0.0);
    const double near_zero = annualized_cost(1000.0, 20, 1e-9);
    CHECK(std::fabs(near_zero - at_zero) / at_zero < 1e-6);
}

TEST_CASE("direct emissions: examples and linearity") {
    SystemGraph g;
    g.commodities["x"] = {"x", CommodityKind::Material, Unit::Tonne, false, {}, {}, {}};
    Technology bf;
    bf.id = "blast_furnace";
    bf.outputs = {{"x", 1.0}};
    bf.reference_commodity = "x";
    bf.emission_factor = 1.42;
    g.technologies["blast_furnace"] = bf;
    Technology a = bf, b = bf;
    a.id = "a";
    a.emission_factor = 0.5;
    b.id = "b";
    b.emission_factor = 0.25;
    g.technologies["a"] = a;
    g.technologies["b"] = b;

    CHECK(direct_emissions(g, {}) == 0.0);
    CHECK(direct_emissions(g, {{"blast_furnace", 0.0}, {"a", 0.0}}) == 0.0);
    CHECK(direct_emissions(g, {{"blast_furnace", 1.0}}) == Approx(1.42));
    CHECK(direct_emissions(g, {{"a", 2.0}, {"b", 4.0}}) == Approx(2.0));
    CHECK_THROWS_AS(direct_emissions(g, {{"nope", 1.0}}), std::out_of_range);
    CHECK_THROWS_AS(direct_emissions(g, {{"a", -1.0}}), std::domain_error);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> qty(0.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::map<std::string, double> u, v, w;
        for (const char* id : {"blast_furnace", "a", "b"}) {
            u[id] = qty(rng);
            v[id] = qty(rng);
            w[id] = u[id] + v[id];
        }
        CHECK(direct_emissions(g, w) ==
              Approx(direct_emissions(g, u) + direct_emissions(g, v)).epsilon(1e-12));
    }
}

TEST_CASE("demand interpolation between tabulated years") {
    DemandSet d;
    d.add("steel", 2020, 40.0);
    d.add("steel", 2030, 40.0);
    d.add("steel", 2040, 39.0);
    d.add("steel", 2050, 39.0);
    CHECK(d.at("steel", 2020) == 40.0);
    CHECK(d.at("steel", 2035) == Approx(39.5));
    CHECK(d.at("steel", 2050) == 39.0);
    CHECK(d.at("steel", 2000) == 40.0);   // clamped
    CHECK(d.at("steel", 2060) == 39.0);   // clamped
    CHECK(d.at("unknown", 2030) == 0.0);
    // Rows for the same key add up.
    d.add("steel", 2020, 2.0);
    CHECK(d.at("steel", 2020) == 42.0);
}
