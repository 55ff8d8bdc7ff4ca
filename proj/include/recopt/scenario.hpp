#pragma once

// Scenario runs, comparison metrics and parameter sweeps.
//
// Cumulative quantities integrate the step-year annual values with a
// rectangle rule (annual value times step width). The counterfactual behind
// "CO2 saved" and "transformation cost" is the scenario's own first path
// step frozen over the horizon; both conventions are deliberate artifact
// choices and documented in the README.

#include <cmath>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "recopt/core.hpp"
#include "recopt/dataset.hpp"
#include "recopt/lp_builder.hpp"
#include "recopt/mfa.hpp"
#include "recopt/pathway.hpp"
#include "recopt/simplex.hpp"
#include "recopt/system_model.hpp"
#include "recopt/time_aggregation.hpp"

namespace recopt {

struct TsaSettings {
    int k = 1;
    int period_length = 24;
};

struct ScenarioSpec {
    std::string name;
    std::string dataset_path;  // resolved relative to the config file
    TsaSettings tsa;
    PathwayConfig pathway;  // caps, policy, prices, steps, corridor, discounting

    void validate() const {
        if (name.empty()) throw ConfigError("scenario needs a name");
        for (const auto& [k, v] : pathway.scrap_prices)
            if (v < 0.0) throw ConfigError("negative scrap price for " + k);
        for (const auto& [k, v] : pathway.import_prices)
            if (v < 0.0) throw ConfigError("negative import price for " + k);
        pathway.caps.validate();
        const int first_anchor = pathway.caps.anchors.begin()->first;
        const int last_anchor = std::prev(pathway.caps.anchors.end())->first;
        if (pathway.first_step < first_anchor || pathway.last_step > last_anchor)
            throw ConfigError("cap schedule anchors must span the pathway steps " +
                              std::to_string(pathway.first_step) + ".." +
                              std::to_string(pathway.last_step));
    }
};

struct AbatementMetrics {
    double average = 0.0;            // money per tCO2 over the horizon
    double marginal_terminal = 0.0;  // shadow price of the terminal cap row
};

/// Average specific abatement cost plus the terminal-year marginal cost read
/// from the cap-row duals (keyed by year; the latest year is terminal).
inline AbatementMetrics abatement_metrics(double cost_delta, double co2_saved,
                                          const std::map<int, double>& cap_duals = {}) {
    if (co2_saved <= 0.0)
        throw std::domain_error("abatement_metrics: undefined for nonpositive CO2 savings");
    AbatementMetrics m;
    m.average = cost_delta / co2_saved;
    if (!cap_duals.empty()) m.marginal_terminal = std::max(0.0, -cap_duals.rbegin()->second);
    return m;
}

struct ScenarioResult {
    ScenarioSpec spec;
    PathwayResult pathway;
    double cumulative_cost = 0.0;      // sum of annual cost x step width
    double baseline_annual_cost = 0.0; // frozen first-step annual cost
    double baseline_emissions = 0.0;   // frozen first-step emissions
    double transformation_cost = 0.0;  // cumulative cost above the frozen baseline
    double co2_saved = 0.0;            // cumulative emissions below the frozen baseline
    double avg_abatement = 0.0;
    double marginal_abatement_terminal = 0.0;
};

namespace detail {

inline TypicalPeriodSet aggregate_for(const SystemGraph& g, const TsaSettings& tsa) {
    if (g.profiles.empty()) return TypicalPeriodSet::uniform(8760);
    return aggregate(g.profiles, tsa.k, tsa.period_length);
}

}  // namespace detail

/// Run a scenario on pre-loaded data.
inline ScenarioResult run_scenario_on(const Dataset& ds, const ScenarioSpec& spec) {
    spec.validate();
    const TypicalPeriodSet periods = detail::aggregate_for(ds.graph, spec.tsa);
    const InflowLedger history = ds.history_ledger(spec.pathway.first_step);

    ScenarioResult result;
    result.spec = spec;
    try {
        result.pathway = run_pathway(ds.graph, ds.mfa, history, periods, spec.pathway);
    } catch (const PathwayInfeasible& e) {
        throw PathwayInfeasible(e.step_year, e.binding_constraints,
                                "scenario " + spec.name + ": " + e.what());
    }

    const double width = static_cast<double>(spec.pathway.step_length);
    const auto& steps = result.pathway.steps;
    result.baseline_annual_cost = steps.front().annual_cost;
    result.baseline_emissions = steps.front().emissions;
    std::map<int, double> cap_duals;
    for (const auto& s : steps) {
        result.cumulative_cost += s.annual_cost * width;
        result.transformation_cost += (s.annual_cost - result.baseline_annual_cost) * width;
        result.co2_saved += (result.baseline_emissions - s.emissions) * width;
        cap_duals[s.year] = s.cap_dual;
    }
    if (result.co2_saved > 0.0) {
        const auto m = abatement_metrics(result.transformation_cost, result.co2_saved, cap_duals);
        result.avg_abatement = m.average;
        result.marginal_abatement_terminal = m.marginal_terminal;
    } else {
        result.marginal_abatement_terminal = std::max(0.0, -cap_duals.rbegin()->second);
    }
    return result;
}

/// Load the dataset named by the spec, then run.
inline ScenarioResult run_scenario(const ScenarioSpec& spec) {
    const Dataset ds = load_dataset(spec.dataset_path);
    const auto diags = validate_system(ds.graph);
    if (!diags.empty())
        throw ConfigError("dataset " + spec.dataset_path + " invalid: " + diags.front().message);
    return run_scenario_on(ds, spec);
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepSpec {
    std::string name;
    ScenarioSpec base;
    std::string parameter_path;  // "scrap_prices.<material>" or "import_prices.<commodity>"
    std::vector<double> grid;    // strictly increasing
    bool full_pathway = false;   // default: re-solve the target year only

    void validate() const {
        base.validate();
        if (grid.empty()) throw ConfigError("sweep grid is empty");
        for (size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1])) throw ConfigError("sweep grid must be strictly increasing");
        if (parameter_kind() == ParamKind::Unknown)
            throw ConfigError("unsupported sweep parameter: " + parameter_path);
    }

    enum class ParamKind { ScrapPrice, ImportPrice, Unknown };
    ParamKind parameter_kind() const {
        if (parameter_path.rfind("scrap_prices.", 0) == 0) return ParamKind::ScrapPrice;
        if (parameter_path.rfind("import_prices.", 0) == 0) return ParamKind::ImportPrice;
        return ParamKind::Unknown;
    }
    std::string parameter_target() const {
        return parameter_path.substr(parameter_path.find('.') + 1);
    }
};

struct SweepPoint {
    double value = 0.0;
    bool feasible = false;
    std::string status;  // optimal | infeasible | unbounded
    double objective = 0.0;
    std::map<std::string, double> secondary_share;     // material -> share of production
    std::map<std::string, double> activities;          // tech -> annual output
    std::map<std::string, double> energy_by_carrier;   // carrier -> use by the swept
                                                       // material's producers (or system-wide)
};

struct SweepResult {
    std::string name;
    std::string parameter_path;
    int year = 0;
    std::vector<SweepPoint> points;
    std::vector<std::string> monotonicity_violations;
};

namespace detail {

inline void apply_sweep_value(ScenarioSpec& spec, const SweepSpec& sweep, double value) {
    switch (sweep.parameter_kind()) {
        case SweepSpec::ParamKind::ScrapPrice:
            spec.pathway.scrap_prices[sweep.parameter_target()] = value;
            break;
        case SweepSpec::ParamKind::ImportPrice:
            spec.pathway.import_prices[sweep.parameter_target()] = value;
            break;
        case SweepSpec::ParamKind::Unknown:
            throw ConfigError("unsupported sweep parameter: " + sweep.parameter_path);
    }
}

/// Energy consumption by the technologies producing a given material, per
/// carrier; with an empty material, system-wide consumption.
inline std::map<std::string, double> energy_by_carrier(const SystemGraph& g,
                                                       const std::map<std::string, double>& activities,
                                                       const std::string& material) {
    std::map<std::string, double> out;
    for (const auto& [tid, t] : g.technologies) {
        if (!material.empty()) {
            auto it = t.outputs.find(material);
            if (it == t.outputs.end() || it->second <= 0.0) continue;
        }
        auto act = activities.find(tid);
        if (act == activities.end() || act->second <= 0.0) continue;
        for (const auto* flows : {&t.inputs, &t.feedstocks})
            for (const auto& [cid, coeff] : *flows) {
                if (g.commodity(cid).kind != CommodityKind::Energy) continue;
                out[cid] += coeff * act->second;
            }
    }
    return out;
}

struct TargetYearOutcome {
    LpSolution::Status status = LpSolution::Status::Infeasible;
    double objective = 0.0;
    std::map<std::string, double> activities;
    std::map<std::string, double> secondary_share;
};

/// Stand-alone target-year solve under a spec (availability from the
/// demand-implied proxy ledger, no corridors).
inline TargetYearOutcome solve_target_year(const Dataset& ds, const TypicalPeriodSet& periods,
                                           const ScenarioSpec& spec) {
    const InflowLedger history = ds.history_ledger(spec.pathway.first_step);
    const InflowLedger proxy = proxy_ledger(ds.graph, ds.mfa, history, spec.pathway);
    const int year = spec.pathway.last_step;

    YearProblem p;
    p.year = year;
    p.cap = interpolate_caps(spec.pathway.caps, year);
    p.graph = &ds.graph;
    p.periods = &periods;
    p.scrap_availability = detail::availability_for(ds.graph, ds.mfa, proxy, year);
    p.policy = spec.pathway.policy;
    p.scrap_prices = spec.pathway.scrap_prices;
    p.import_prices = spec.pathway.import_prices;
    p.feedstock_emission_factors = spec.pathway.feedstock_emission_factors;
    p.first_path_year = spec.pathway.first_step;
    p.discount_rate = spec.pathway.discount_rate;
    p.pwl = spec.pathway.pwl;

    auto built = build_year_lp(p);
    auto sol = solve(built.lp, spec.pathway.solver);
    TargetYearOutcome out;
    out.status = sol.status;
    if (sol.status != LpSolution::Status::Optimal) return out;
    out.objective = sol.objective;
    out.activities = built.annual_activities(sol);
    for (const std::string& m : detail::scrap_materials(ds.graph)) {
        const double total = built.annual_production(sol, m);
        out.secondary_share[m] =
            total > 0.0 ? built.annual_secondary_production(sol, m) / total : 0.0;
    }
    return out;
}

}  // namespace detail

/// Run the grid on pre-loaded data. Points execute concurrently; each owns
/// its problem data. Infeasible points are recorded and the sweep continues.
/// The monotonicity of the swept material's secondary share along an
/// increasing price grid is checked on every run and violations reported.
inline SweepResult sweep_on(const Dataset& ds, const SweepSpec& spec) {
    spec.validate();
    const TypicalPeriodSet periods = detail::aggregate_for(ds.graph, spec.base.tsa);

    SweepResult result;
    result.name = spec.name;
    result.parameter_path = spec.parameter_path;
    result.year = spec.base.pathway.last_step;

    const std::string swept_material =
        spec.parameter_kind() == SweepSpec::ParamKind::ScrapPrice ? spec.parameter_target() : "";

    auto run_point = [&](double value) {
        ScenarioSpec point_spec = spec.base;
        detail::apply_sweep_value(point_spec, spec, value);
        SweepPoint pt;
        pt.value = value;
        if (spec.full_pathway) {
            try {
                auto res = run_scenario_on(ds, point_spec);
                const auto& last = res.pathway.steps.back();
                pt.feasible = true;
                pt.status = "optimal";
                pt.objective = last.annual_cost;
                pt.activities = last.activities;
                for (const auto& [m, sec] : last.secondary_production) {
                    const double total = last.total_production.at(m);
                    pt.secondary_share[m] = total > 0.0 ? sec / total : 0.0;
                }
            } catch (const PathwayInfeasible&) {
                pt.status = "infeasible";
            }
        } else {
            auto out = detail::solve_target_year(ds, periods, point_spec);
            pt.status = to_string(out.status);
            pt.feasible = out.status == LpSolution::Status::Optimal;
            pt.objective = out.objective;
            pt.activities = std::move(out.activities);
            pt.secondary_share = std::move(out.secondary_share);
        }
        if (pt.feasible)
            pt.energy_by_carrier = detail::energy_by_carrier(ds.graph, pt.activities, swept_material);
        return pt;
    };

    std::vector<std::future<SweepPoint>> futures;
    futures.reserve(spec.grid.size());
    for (double value : spec.grid)
        futures.push_back(std::async(std::launch::async, run_point, value));
    for (auto& f : futures) result.points.push_back(f.get());

    if (!swept_material.empty()) {
        const SweepPoint* prev = nullptr;
        for (const auto& pt : result.points) {
            if (!pt.feasible) continue;
            if (prev) {
                const double before = prev->secondary_share.count(swept_material)
                                          ? prev->secondary_share.at(swept_material)
                                          : 0.0;
                const double now = pt.secondary_share.count(swept_material)
                                       ? pt.secondary_share.at(swept_material)
                                       : 0.0;
                if (now > before + 1e-9)
                    result.monotonicity_violations.push_back(strformat(
                        "secondary share of %s rose from %.9g to %.9g between %.6g and %.6g",
                        swept_material.c_str(), before, now, prev->value, pt.value));
            }
            prev = &pt;
        }
    }
    return result;
}

/// Load the dataset named by the base scenario, then run the grid.
inline SweepResult sweep(const SweepSpec& spec) {
    spec.validate();
    const Dataset ds = load_dataset(spec.base.dataset_path);
    const auto diags = validate_system(ds.graph);
    if (!diags.empty())
        throw ConfigError("dataset " + spec.base.dataset_path + " invalid: " +
                          diags.front().message);
    return sweep_on(ds, spec);
}

// ---------------------------------------------------------------------------
// Comparison

/// The comparison-facing digest of a scenario run; JSON round-trippable so
/// completed runs can be compared from disk.
struct ScenarioSummary {
    std::string name;
    std::vector<int> years;
    std::map<int, double> annual_cost;
    std::map<int, double> emissions;
    std::map<int, double> cap;
    std::map<int, double> marginal_abatement;                       // -cap dual
    std::map<int, std::map<std::string, double>> recycling_rate;    // year -> material -> share
    std::map<int, std::map<std::string, double>> energy_use;        // year -> carrier -> quantity
    std::map<int, std::map<std::string, double>> energy_imports;    // year -> carrier -> quantity
    std::map<int, std::map<std::string, double>> primary_supply;    // year -> carrier -> quantity
    double cumulative_cost = 0.0;
    double transformation_cost = 0.0;
    double co2_saved = 0.0;
    double avg_abatement = 0.0;
    double marginal_abatement_terminal = 0.0;
};

inline ScenarioSummary summarize(const ScenarioResult& result, const SystemGraph& g) {
    ScenarioSummary s;
    s.name = result.spec.name;
    for (const auto& step : result.pathway.steps) {
        s.years.push_back(step.year);
        s.annual_cost[step.year] = step.annual_cost;
        s.emissions[step.year] = step.emissions;
        s.cap[step.year] = step.cap;
        s.marginal_abatement[step.year] = std::max(0.0, -step.cap_dual);
        s.recycling_rate[step.year] = step.recycling_rate;
        s.energy_use[step.year] = detail::energy_by_carrier(g, step.activities, "");
        // Exogenous final demands count as use too.
        for (const auto& [cid, c] : g.commodities) {
            if (c.kind != CommodityKind::Energy) continue;
            const double d = g.demands.at(cid, step.year);
            if (d > 0.0) s.energy_use[step.year][cid] += d;
        }
        std::map<std::string, double> imports, primary;
        for (const auto& [cid, qty] : step.imports) {
            if (g.commodity(cid).kind != CommodityKind::Energy) continue;
            imports[cid] = qty;
            primary[cid] += qty;
        }
        // Domestic primary production: output of source technologies (no inputs).
        for (const auto& [tid, t] : g.technologies) {
            if (!t.inputs.empty() || !t.feedstocks.empty()) continue;
            auto act = step.activities.find(tid);
            if (act == step.activities.end()) continue;
            for (const auto& [cid, coeff] : t.outputs)
                if (g.commodity(cid).kind == CommodityKind::Energy)
                    primary[cid] += coeff * act->second;
        }
        s.energy_imports[step.year] = std::move(imports);
        s.primary_supply[step.year] = std::move(primary);
    }
    s.cumulative_cost = result.cumulative_cost;
    s.transformation_cost = result.transformation_cost;
    s.co2_saved = result.co2_saved;
    s.avg_abatement = result.avg_abatement;
    s.marginal_abatement_terminal = result.marginal_abatement_terminal;
    return s;
}

struct ComparisonRow {
    std::string name;
    bool is_reference = false;
    double cumulative_cost = 0.0;
    double transformation_cost = 0.0;
    double delta_cost_vs_reference = 0.0;
    double co2_saved = 0.0;
    double avg_abatement = 0.0;
    double delta_avg_abatement = 0.0;
    double marginal_abatement_terminal = 0.0;
    double delta_marginal = 0.0;
    std::map<std::string, double> terminal_recycling_rate;
    std::map<std::string, double> delta_energy_use_terminal;      // carrier -> vs reference
    std::map<std::string, double> delta_primary_supply_terminal;  // carrier -> vs reference
};

struct ComparisonReport {
    std::string reference;
    std::vector<int> years;
    std::vector<ComparisonRow> rows;  // input order; reference flagged
};

/// Mirror scenario results against a named reference. Horizons must match.
inline ComparisonReport compare(const std::vector<ScenarioSummary>& results,
                                const std::string& reference_name) {
    const ScenarioSummary* ref = nullptr;
    for (const auto& r : results)
        if (r.name == reference_name) ref = &r;
    if (ref == nullptr) throw ComparisonError("reference scenario not found: " + reference_name);
    for (const auto& r : results)
        if (r.years != ref->years)
            throw ComparisonError("scenario " + r.name + " has a different horizon than the reference");

    ComparisonReport report;
    report.reference = reference_name;
    report.years = ref->years;
    const int terminal = ref->years.back();
    for (const auto& r : results) {
        ComparisonRow row;
        row.name = r.name;
        row.is_reference = (r.name == reference_name);
        row.cumulative_cost = r.cumulative_cost;
        row.transformation_cost = r.transformation_cost;
        row.delta_cost_vs_reference = r.transformation_cost - ref->transformation_cost;
        row.co2_saved = r.co2_saved;
        row.avg_abatement = r.avg_abatement;
        row.delta_avg_abatement = r.avg_abatement - ref->avg_abatement;
        row.marginal_abatement_terminal = r.marginal_abatement_terminal;
        row.delta_marginal = r.marginal_abatement_terminal - ref->marginal_abatement_terminal;
        if (auto it = r.recycling_rate.find(terminal); it != r.recycling_rate.end())
            row.terminal_recycling_rate = it->second;
        auto deltas = [&](const std::map<int, std::map<std::string, double>>& mine,
                          const std::map<int, std::map<std::string, double>>& theirs) {
            std::map<std::string, double> out;
            std::set<std::string> carriers;
            if (auto it = mine.find(terminal); it != mine.end())
                for (const auto& [c, v] : it->second) carriers.insert(c);
            if (auto it = theirs.find(terminal); it != theirs.end())
                for (const auto& [c, v] : it->second) carriers.insert(c);
            for (const auto& c : carriers) {
                double a = 0.0, b = 0.0;
                if (auto it = mine.find(terminal); it != mine.end() && it->second.count(c))
                    a = it->second.at(c);
                if (auto it = theirs.find(terminal); it != theirs.end() && it->second.count(c))
                    b = it->second.at(c);
                out[c] = a - b;
            }
            return out;
        };
        row.delta_energy_use_terminal = deltas(r.energy_use, ref->energy_use);
        row.delta_primary_supply_terminal = deltas(r.primary_supply, ref->primary_supply);
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace recopt
