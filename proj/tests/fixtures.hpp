#pragma once

// Miniature steel system shared across builder/pathway/scenario tests:
// a fossil route (ore smelting, emitting), a clean primary route (hydrogen
// direct reduction plus melting) and a scrap route (electric arc furnace)
// compete for a fixed steel demand under a CO2 cap.

#include <map>
#include <string>

#include "recopt/lp_builder.hpp"
#include "recopt/mfa.hpp"
#include "recopt/pathway.hpp"
#include "recopt/system_model.hpp"
#include "recopt/time_aggregation.hpp"

namespace recopt::testing {

inline Commodity commodity(const std::string& id, CommodityKind kind, bool importable = false,
                           double price = 0.0) {
    Commodity c;
    c.id = id;
    c.kind = kind;
    c.unit = kind == CommodityKind::Energy ? Unit::MWh : Unit::Tonne;
    c.importable = importable;
    if (importable) c.import_price = price;
    return c;
}

inline Technology technology(const std::string& id, std::map<std::string, double> inputs,
                             std::map<std::string, double> outputs, const std::string& ref,
                             double invest, double ef = 0.0, double band = 0.0) {
    Technology t;
    t.id = id;
    t.inputs = std::move(inputs);
    t.outputs = std::move(outputs);
    t.reference_commodity = ref;
    t.invest_cost = invest;
    t.invest_cost_band = band;
    t.fixed_om_share = 0.05;
    t.emission_factor = ef;
    t.lifetime = 20;
    return t;
}

inline SystemGraph micro_steel_graph() {
    SystemGraph g;
    g.commodities["electricity"] = commodity("electricity", CommodityKind::Energy, true, 60.0);
    g.commodities["hydrogen"] = commodity("hydrogen", CommodityKind::Energy, true, 100.0);
    g.commodities["iron_ore"] = commodity("iron_ore", CommodityKind::Material, true, 100.0);
    g.commodities["iron_sponge"] = commodity("iron_sponge", CommodityKind::Material);
    g.commodities["steel"] = commodity("steel", CommodityKind::Material);
    Commodity scrap = commodity("steel_scrap", CommodityKind::Material);
    scrap.scrap_of = "steel";
    scrap.default_scrap_price = 240.0;
    g.commodities["steel_scrap"] = scrap;

    g.technologies["ore_smelter"] = technology(
        "ore_smelter", {{"electricity", 0.14}, {"iron_ore", 1.6}}, {{"steel", 1.0}}, "steel",
        493.0, 1.44, 0.1);
    g.technologies["h2_reduction"] = technology(
        "h2_reduction", {{"hydrogen", 1.808}, {"electricity", 0.127}, {"iron_ore", 1.5}},
        {{"iron_sponge", 1.0}}, "iron_sponge", 220.0, 0.0, 0.1);
    g.technologies["eaf_scrap"] = technology(
        "eaf_scrap", {{"steel_scrap", 1.1}, {"electricity", 0.576}}, {{"steel", 1.0}}, "steel",
        184.0, 0.0, 0.1);
    g.technologies["eaf_sponge"] = technology(
        "eaf_sponge", {{"iron_sponge", 1.1}, {"electricity", 0.576}}, {{"steel", 1.0}}, "steel",
        184.0, 0.0, 0.1);

    g.demands.add("steel", 2020, 40.0);
    g.demands.add("steel", 2030, 40.0);
    g.demands.add("steel", 2040, 39.0);
    g.demands.add("steel", 2050, 39.0);
    g.base_year_emissions = 120.0;
    return g;
}

struct MicroProblem {
    SystemGraph graph = micro_steel_graph();
    TypicalPeriodSet periods = TypicalPeriodSet::uniform(8760);

    YearProblem problem(int year, std::optional<double> cap,
                        RecyclingPolicy policy = {}, double steel_availability = 30.0) {
        YearProblem p;
        p.year = year;
        p.cap = cap;
        p.graph = &graph;
        p.periods = &periods;
        p.scrap_availability["steel"] = steel_availability;
        p.policy = std::move(policy);
        p.first_path_year = 2020;
        return p;
    }
};

inline MfaModel micro_mfa() {
    MfaModel mfa;
    MaterialStocks steel;
    steel.material = "steel";
    steel.stocks = {
        StockProfile{"transport", 13.0, 3.9, 0.30, 0.82, 0.0, 1.0},
        StockProfile{"mechanical", 20.0, 6.0, 0.10, 0.87, 0.0, 1.0},
        StockProfile{"construction", 50.0, 15.0, 0.47, 0.82, 0.1, 1.0},
        StockProfile{"other", 10.0, 3.0, 0.13, 0.58, 0.0, 1.0},
    };
    steel.validate();
    mfa.stocked["steel"] = steel;
    return mfa;
}

/// Constant production history long enough to cover the residence horizon.
inline InflowLedger micro_history(const MfaModel& mfa, int first_path_year = 2020,
                                  double production = 40.0) {
    std::map<int, double> history;
    for (int year = 1890; year < first_path_year; ++year) history[year] = production;
    return backfill_prepath("steel", history, mfa.stocked.at("steel").stocks, first_path_year);
}

inline PathwayConfig micro_pathway_config() {
    PathwayConfig cfg;
    cfg.caps.base = 120.0;
    cfg.caps.anchors = {{2020, 0.35}, {2030, 0.55}, {2050, 0.95}};
    cfg.first_step = 2020;
    cfg.last_step = 2050;
    cfg.step_length = 5;
    cfg.corridor_rate = kInf;
    return cfg;
}

}  // namespace recopt::testing
