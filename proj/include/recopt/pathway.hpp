#pragma once

// Myopic transformation path: the target year is solved first as a
// stand-alone reference, then the path years are optimized in ascending
// steps. Each step chooses the capacity to keep in service, bounded above
// by live vintages plus an expansion corridor; new builds are committed into
// the vintage stock, realized production is committed into the inflow ledger
// feeding future scrap availability. Capacity in service pays its annuity in
// the step's objective; idled vintages carry no cost.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "recopt/core.hpp"
#include "recopt/lp_builder.hpp"
#include "recopt/mfa.hpp"
#include "recopt/simplex.hpp"
#include "recopt/system_model.hpp"
#include "recopt/time_aggregation.hpp"

namespace recopt {

/// Emission cap per year: the 1990 reference scaled by linearly interpolated
/// reduction targets between anchor years.
struct CapSchedule {
    double base = 0.0;  // reference-year emissions (tCO2)
    std::map<int, double> anchors = {{2030, 0.55}, {2050, 0.95}};  // year -> reduction fraction

    void validate() const {
        if (base < 0.0) throw std::domain_error("cap schedule: negative base emissions");
        if (anchors.empty()) throw std::domain_error("cap schedule: no anchors");
        double prev = -1.0;
        for (const auto& [year, frac] : anchors) {
            if (frac < 0.0 || frac > 1.0)
                throw std::domain_error("cap schedule: reduction fraction outside [0,1]");
            if (frac < prev)
                throw std::domain_error("cap schedule: reduction fractions must be nondecreasing");
            prev = frac;
        }
    }
};

inline double interpolate_caps(const CapSchedule& sched, int year) {
    sched.validate();
    const auto first = sched.anchors.begin();
    const auto last = std::prev(sched.anchors.end());
    if (year < first->first || year > last->first)
        throw std::domain_error("cap schedule: year " + std::to_string(year) +
                                " outside the anchor span");
    double reduction;
    if (auto it = sched.anchors.find(year); it != sched.anchors.end()) {
        reduction = it->second;
    } else {
        auto hi = sched.anchors.upper_bound(year);
        auto lo = std::prev(hi);
        const double t = static_cast<double>(year - lo->first) /
                         static_cast<double>(hi->first - lo->first);
        reduction = lo->second + t * (hi->second - lo->second);
    }
    return sched.base * (1.0 - reduction);
}

/// Built capacity by construction year; vintages retire at build + lifetime
/// and are never removed otherwise.
struct CapacityVintage {
    struct Vintage {
        int build_year = 0;
        double capacity = 0.0;
    };
    std::map<std::string, std::vector<Vintage>> by_tech;

    void commit(const std::string& tech, int year, double capacity) {
        if (capacity < 0.0) throw std::domain_error("vintage: negative capacity");
        if (capacity == 0.0) return;
        by_tech[tech].push_back({year, capacity});
    }
};

struct RetireBound {
    double available = 0.0;  // unretired in-service ceiling from vintages
    double build_ub = 0.0;   // additional capacity the step may construct
};

/// Live capacity and the step's expansion corridor for one technology.
inline RetireBound retire_and_bound(const CapacityVintage& vintages, const Technology& tech,
                                    int year, double max_build_per_step,
                                    std::optional<int> first_available_override = std::nullopt) {
    if (max_build_per_step < 0.0)
        throw std::domain_error("retire_and_bound: negative build rate");
    RetireBound out;
    if (!(tech.phase_out_year && year >= *tech.phase_out_year)) {
        if (auto it = vintages.by_tech.find(tech.id); it != vintages.by_tech.end()) {
            for (const auto& v : it->second)
                if (v.build_year <= year && year < v.build_year + tech.lifetime)
                    out.available += v.capacity;
        }
        const int first = first_available_override.value_or(tech.first_available_year);
        out.build_ub = (year < first) ? 0.0 : max_build_per_step;
    }
    return out;
}

struct PathwayConfig {
    CapSchedule caps;
    RecyclingPolicy policy;
    std::map<std::string, double> scrap_prices;
    std::map<std::string, double> import_prices;
    std::map<std::string, double> feedstock_emission_factors;
    int first_step = 2020;
    int last_step = 2050;
    int step_length = 5;
    // Corridor: per 5-year step a technology may add at most corridor_rate
    // times the larger of its reference-year capacity and its current market
    // size. Infinity disables the corridor.
    double corridor_rate = kInf;
    double discount_rate = 0.07;
    PwlSettings pwl;
    SolverOptions solver;

    std::vector<int> steps() const {
        if (step_length < 1 || last_step < first_step)
            throw std::domain_error("pathway: bad step grid");
        std::vector<int> out;
        for (int y = first_step; y <= last_step; y += step_length) out.push_back(y);
        if (out.back() != last_step) out.push_back(last_step);
        return out;
    }
};

struct PathwayStep {
    int year = 0;
    LpSolution solution;
    double annual_cost = 0.0;  // LP objective: in-service annuities plus operation
    double emissions = 0.0;
    double cap = 0.0;
    double cap_dual = 0.0;  // d(cost)/d(cap); <= 0 when the cap binds
    std::map<std::string, double> activities;        // tech -> annual reference output
    std::map<std::string, double> in_service;        // tech -> capacity chosen
    std::map<std::string, double> new_build;         // tech -> committed this step
    std::map<std::string, double> available_before;  // tech -> live vintages at step start
    std::map<std::string, double> imports;           // commodity -> annual quantity
    std::map<std::string, double> scrap_supply;      // scrap commodity -> annual quantity
    std::map<std::string, double> scrap_availability;  // material -> effective bound
    std::map<std::string, double> recycling_rate;    // material -> secondary share
    std::map<std::string, double> secondary_production;
    std::map<std::string, double> total_production;
};

struct PathwayResult {
    std::vector<PathwayStep> steps;
    LpSolution reference_solution;  // stand-alone target-year solve
    double reference_objective = 0.0;
    std::map<std::string, double> reference_capacity;
    CapacityVintage vintages;
    InflowLedger ledger{0};

    const PathwayStep& step(int year) const {
        for (const auto& s : steps)
            if (s.year == year) return s;
        throw std::out_of_range("pathway has no step " + std::to_string(year));
    }
};

namespace detail {

/// Materials whose scrap commodities are actually consumed somewhere; those
/// are the ones that need availability figures.
inline std::set<std::string> scrap_materials(const SystemGraph& g) {
    std::set<std::string> out;
    for (const auto& [cid, c] : g.commodities) {
        if (!c.scrap_of) continue;
        for (const auto& [tid, t] : g.technologies)
            if (t.input_coefficient(cid) > 0.0) out.insert(*c.scrap_of);
    }
    return out;
}

inline std::map<std::string, double> availability_for(const SystemGraph& g, const MfaModel& mfa,
                                                      const InflowLedger& ledger, int year) {
    std::map<std::string, double> out;
    for (const std::string& m : scrap_materials(g)) {
        if (!mfa.covers(m))
            throw ConfigError("no availability rule (stocks or exogenous series) for material " + m);
        out[m] = mfa.availability(ledger, m, year).effective;
    }
    return out;
}

/// Annual quantity of a material entering use, i.e. what the anthropogenic
/// stocks absorb: production plus imports net of intermediate consumption.
/// By the balance rows this equals the exogenous demand.
inline double material_supply(const YearLp& built, const LpSolution& sol, const std::string& m) {
    return built.annual_production(sol, m) + built.annual_import(sol, m) -
           built.annual_consumption(sol, m);
}

}  // namespace detail

/// Ledger used for the stand-alone reference solve: history plus
/// demand-implied inflows for the path years. Because the balance rows force
/// supply to equal demand year by year, this reproduces what the steps will
/// commit.
inline InflowLedger proxy_ledger(const SystemGraph& g, const MfaModel& mfa,
                                 const InflowLedger& historical, const PathwayConfig& cfg) {
    InflowLedger ledger = historical;
    const std::vector<int> steps = cfg.steps();
    for (const std::string& m : detail::scrap_materials(g)) {
        auto it = mfa.stocked.find(m);
        if (it == mfa.stocked.end()) continue;
        for (int year = cfg.first_step; year < cfg.last_step; ++year) {
            const int step_year = cfg.first_step +
                                  ((year - cfg.first_step) / cfg.step_length) * cfg.step_length;
            const double supply = g.demands.at(m, step_year);
            for (const auto& s : it->second.stocks)
                ledger.add_path_entry(m, s.stock_id, year, supply * s.sector_share);
        }
    }
    return ledger;
}

/// Run the myopic transformation path. The historical ledger must hold
/// pre-path inflows for every residence-time material in play.
inline PathwayResult run_pathway(const SystemGraph& g, const MfaModel& mfa,
                                 const InflowLedger& historical, const TypicalPeriodSet& periods,
                                 const PathwayConfig& cfg) {
    {
        const auto diags = validate_system(g);
        if (!diags.empty())
            throw ConfigError("system graph invalid: " + diags.front().message +
                              (diags.size() > 1 ? strformat(" (+%zu more)", diags.size() - 1) : ""));
    }
    cfg.caps.validate();
    const std::vector<int> steps = cfg.steps();

    auto make_problem = [&](int year, const std::map<std::string, double>& availability) {
        YearProblem p;
        p.year = year;
        p.cap = interpolate_caps(cfg.caps, year);
        p.graph = &g;
        p.periods = &periods;
        p.scrap_availability = availability;
        p.policy = cfg.policy;
        p.scrap_prices = cfg.scrap_prices;
        p.import_prices = cfg.import_prices;
        p.feedstock_emission_factors = cfg.feedstock_emission_factors;
        p.first_path_year = cfg.first_step;
        p.discount_rate = cfg.discount_rate;
        p.pwl = cfg.pwl;
        return p;
    };

    PathwayResult result;
    result.ledger = historical;

    // Back-cast: the target year solved stand-alone defines the reference
    // design and sizes the expansion corridors.
    const InflowLedger proxy = proxy_ledger(g, mfa, historical, cfg);
    {
        auto availability = detail::availability_for(g, mfa, proxy, cfg.last_step);
        auto problem = make_problem(cfg.last_step, availability);
        auto built = build_year_lp(problem);
        auto sol = solve(built.lp, cfg.solver);
        if (sol.status != LpSolution::Status::Optimal)
            throw PathwayInfeasible(cfg.last_step, sol.infeasible_rows,
                                    "reference target-year solve is " +
                                        std::string(to_string(sol.status)));
        result.reference_objective = sol.objective;
        for (const auto& [tid, var] : built.capacity_var)
            result.reference_capacity[tid] = built.capacity(sol, tid);
        result.reference_solution = std::move(sol);
    }

    for (int year : steps) {
        auto availability = detail::availability_for(g, mfa, result.ledger, year);
        auto problem = make_problem(year, availability);
        problem.use_capacity_ub = true;

        PathwayStep step;
        step.year = year;
        step.scrap_availability = availability;
        for (const auto& [tid, t] : g.technologies) {
            double per_step = kInf;
            if (std::isfinite(cfg.corridor_rate)) {
                const double market = pwl_scale(g, t, year);
                per_step = cfg.corridor_rate * std::max(result.reference_capacity[tid], market);
            }
            const int first = effective_first_year(t, cfg.policy, g, cfg.first_step);
            const auto rb = retire_and_bound(result.vintages, t, year, per_step, first);
            step.available_before[tid] = rb.available;
            problem.capacity_ub[tid] = rb.available + rb.build_ub;
        }

        auto built = build_year_lp(problem);
        auto sol = solve(built.lp, cfg.solver);
        if (sol.status != LpSolution::Status::Optimal) {
            throw PathwayInfeasible(year, sol.infeasible_rows,
                                    "pathway step " + std::to_string(year) + " is " +
                                        std::string(to_string(sol.status)));
        }

        step.annual_cost = sol.objective;
        step.emissions = built.annual_emissions(sol);
        step.cap = *problem.cap;
        step.cap_dual = sol.dual.count("co2_cap") ? sol.dual.at("co2_cap") : 0.0;
        step.activities = built.annual_activities(sol);
        for (const auto& [tid, var] : built.capacity_var) {
            const double in_service = built.capacity(sol, tid);
            step.in_service[tid] = in_service;
            const double added = std::max(0.0, in_service - step.available_before[tid]);
            step.new_build[tid] = added;
            result.vintages.commit(tid, year, added);
        }
        for (const auto& [cid, vars] : built.import_vars)
            step.imports[cid] = built.annual_import(sol, cid);
        for (const auto& [cid, vars] : built.scrap_vars)
            step.scrap_supply[cid] = built.annual_scrap_supply(sol, cid);
        for (const std::string& m : detail::scrap_materials(g)) {
            step.recycling_rate[m] = built.recycling_rate(sol, m);
            step.secondary_production[m] = built.annual_secondary_production(sol, m);
            step.total_production[m] = built.annual_production(sol, m);
        }

        // Commit realized supply into the stocks for the whole step window.
        for (const auto& [m, stocks] : mfa.stocked) {
            if (!detail::scrap_materials(g).count(m)) continue;
            const double supply = detail::material_supply(built, sol, m);
            for (int y = year; y < year + cfg.step_length; ++y)
                for (const auto& s : stocks.stocks)
                    result.ledger.add_path_entry(m, s.stock_id, y, supply * s.sector_share);
        }

        step.solution = std::move(sol);
        result.steps.push_back(std::move(step));
    }
    return result;
}

}  // namespace recopt
