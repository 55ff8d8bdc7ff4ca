#pragma once

// Assembles the single-year linear program: per-technology capacity and
// per-period activity variables, commodity balances, the CO2 cap, secondary
// raw material supply bounded by forecast availability, the recycling policy
// rows, and the convex piecewise-linear investment-cost surrogate that keeps
// near-identical technologies from penny-switching.
//
// Capacity is the annual reference-output capability in service; activity is
// reference output per timestep of a representative period. Weighted sums
// over representative steps recover annual quantities.

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "recopt/core.hpp"
#include "recopt/lp.hpp"
#include "recopt/simplex.hpp"
#include "recopt/system_model.hpp"
#include "recopt/time_aggregation.hpp"

namespace recopt {

struct RecyclingPolicy {
    enum class Mode { FixedAtRate, Forbidden, BoundedByAvailability };
    Mode mode = Mode::BoundedByAvailability;
    std::map<std::string, double> rates;  // material -> fixed share, FixedAtRate only
    std::optional<int> effective_from;    // availability year for novel recycling routes
};

inline const char* to_string(RecyclingPolicy::Mode m) {
    switch (m) {
        case RecyclingPolicy::Mode::FixedAtRate: return "fixed";
        case RecyclingPolicy::Mode::Forbidden: return "forbidden";
        case RecyclingPolicy::Mode::BoundedByAvailability: return "bounded";
    }
    return "?";
}

struct PwlSettings {
    int segments = 4;
};

struct YearProblem {
    int year = 2050;
    std::optional<double> cap;  // tCO2; absent = no emission row
    const SystemGraph* graph = nullptr;
    const TypicalPeriodSet* periods = nullptr;
    std::map<std::string, double> scrap_availability;  // material -> effective tonnes/a
    RecyclingPolicy policy;
    std::map<std::string, double> scrap_prices;    // material -> money/tonne
    std::map<std::string, double> import_prices;   // commodity -> override of dataset price
    std::map<std::string, double> feedstock_emission_factors;  // commodity -> tCO2/unit
    std::map<std::string, double> capacity_ub;  // tech -> in-service ceiling
    bool use_capacity_ub = false;  // when set, the map above is authoritative (pathway mode)
    int first_path_year = 2020;    // recycling routes first available after this year count
                                   // as novel and follow policy.effective_from
    double discount_rate = 0.07;
    PwlSettings pwl;
};

/// Segment investment costs of the convex surrogate: the band
/// [invest*(1-band), invest*(1+band)] is cut into n equal intervals and each
/// segment pays the interval's midpoint marginal cost, so segment costs rise
/// linearly across the band, average to invest, and n = 1 degenerates to the
/// flat cost.
inline std::vector<double> piecewise_invest_costs(double invest, double band, int segments) {
    if (segments < 1) throw std::domain_error("piecewise_invest_costs: segments must be >= 1");
    if (band < 0.0) throw std::domain_error("piecewise_invest_costs: negative band");
    std::vector<double> out;
    for (int i = 0; i < segments; ++i) {
        const double mid = (static_cast<double>(i) + 0.5) / static_cast<double>(segments);
        out.push_back(invest * (1.0 - band + 2.0 * band * mid));
    }
    return out;
}

/// The LP plus the bookkeeping needed to read a solution back in model terms.
struct YearLp {
    LinearProgram lp;
    const SystemGraph* graph = nullptr;
    int year = 0;
    int steps_per_year = 8760;
    std::vector<double> step_weight;                     // per flattened representative step
    std::map<std::string, int> capacity_var;             // tech -> var id
    std::map<std::string, std::vector<int>> activity_vars;
    std::map<std::string, std::vector<int>> import_vars;  // commodity -> per-step supply
    std::map<std::string, std::vector<int>> scrap_vars;   // scrap commodity -> per-step supply
    std::map<std::string, double> effective_emission_factor;  // tech -> ef incl. feedstock term
    std::set<std::string> recycling_techs;

    double annual_activity(const LpSolution& sol, const std::string& tech) const {
        double total = 0.0;
        const auto& vars = activity_vars.at(tech);
        for (size_t f = 0; f < vars.size(); ++f)
            total += step_weight[f] * sol.primal.at(lp.variables[static_cast<size_t>(vars[f])].name);
        return total;
    }
    double annual_supply_of(const LpSolution& sol, const std::map<std::string, std::vector<int>>& vars,
                            const std::string& commodity) const {
        auto it = vars.find(commodity);
        if (it == vars.end()) return 0.0;
        double total = 0.0;
        for (size_t f = 0; f < it->second.size(); ++f)
            total += step_weight[f] *
                     sol.primal.at(lp.variables[static_cast<size_t>(it->second[f])].name);
        return total;
    }
    double annual_import(const LpSolution& sol, const std::string& commodity) const {
        return annual_supply_of(sol, import_vars, commodity);
    }
    double annual_scrap_supply(const LpSolution& sol, const std::string& commodity) const {
        return annual_supply_of(sol, scrap_vars, commodity);
    }
    double capacity(const LpSolution& sol, const std::string& tech) const {
        return sol.primal.at(lp.variables[static_cast<size_t>(capacity_var.at(tech))].name);
    }
    std::map<std::string, double> annual_activities(const LpSolution& sol) const {
        std::map<std::string, double> out;
        for (const auto& [tech, vars] : activity_vars) out[tech] = annual_activity(sol, tech);
        return out;
    }
    /// Emissions as constrained by the cap row (includes feedstock factors).
    double annual_emissions(const LpSolution& sol) const {
        double total = 0.0;
        for (const auto& [tech, ef] : effective_emission_factor)
            total += ef * annual_activity(sol, tech);
        return total;
    }
    /// Production of a commodity across all technologies.
    double annual_production(const LpSolution& sol, const std::string& commodity) const {
        double total = 0.0;
        for (const auto& [tid, t] : graph->technologies) {
            auto it = t.outputs.find(commodity);
            if (it != t.outputs.end() && it->second > 0.0)
                total += it->second * annual_activity(sol, tid);
        }
        return total;
    }
    /// Production via scrap-consuming routes.
    double annual_secondary_production(const LpSolution& sol, const std::string& commodity) const {
        double total = 0.0;
        for (const std::string& tid : recycling_techs) {
            const auto& t = graph->technologies.at(tid);
            auto it = t.outputs.find(commodity);
            if (it != t.outputs.end() && it->second > 0.0)
                total += it->second * annual_activity(sol, tid);
        }
        return total;
    }
    double recycling_rate(const LpSolution& sol, const std::string& material) const {
        const double total = annual_production(sol, material);
        if (total <= 0.0) return 0.0;
        return annual_secondary_production(sol, material) / total;
    }
    /// Annual consumption of a commodity across technologies (inputs plus
    /// feedstocks), for energy-by-carrier reporting.
    double annual_consumption(const LpSolution& sol, const std::string& commodity) const {
        double total = 0.0;
        for (const auto& [tid, t] : graph->technologies) {
            const double coeff = t.input_coefficient(commodity);
            if (coeff > 0.0) total += coeff * annual_activity(sol, tid);
        }
        return total;
    }
};

namespace detail {

inline std::string step_name(int p, int s) {
    return std::to_string(p) + "|" + std::to_string(s);
}

}  // namespace detail

/// Year of first availability for a technology under the scenario policy:
/// novel recycling routes (first available after the path start) follow the
/// policy's effective_from override.
inline int effective_first_year(const Technology& t, const RecyclingPolicy& policy,
                                const SystemGraph& g, int first_path_year) {
    if (policy.effective_from && t.first_available_year > first_path_year &&
        t.consumes_scrap(g.commodities))
        return *policy.effective_from;
    return t.first_available_year;
}

/// Split a technology's capacity into cost segments with linearly rising
/// marginal invest costs. Capacity above segments*width stays purchasable at
/// the top marginal cost (the last segment is unbounded).
inline void add_piecewise_invest_cost(LinearProgram& lp, const Technology& tech, int cap_var,
                                      int segments, double scale, double discount_rate) {
    const std::vector<double> invests = piecewise_invest_costs(tech.invest_cost,
                                                               tech.invest_cost_band, segments);
    if (segments == 1 || tech.invest_cost_band == 0.0 || scale <= 0.0) {
        lp.variables[static_cast<size_t>(cap_var)].objective =
            annualized_cost(tech.invest_cost, tech.lifetime, discount_rate) +
            tech.fixed_om_share * tech.invest_cost;
        return;
    }
    const double width = scale / static_cast<double>(segments);
    std::vector<LinearProgram::Entry> link{{cap_var, 1.0}};
    lp.variables[static_cast<size_t>(cap_var)].objective = 0.0;
    for (int i = 0; i < segments; ++i) {
        const double ub = (i + 1 == segments) ? kInf : width;
        const double cost = annualized_cost(invests[static_cast<size_t>(i)], tech.lifetime,
                                            discount_rate) +
                            tech.fixed_om_share * invests[static_cast<size_t>(i)];
        const int seg = lp.add_variable("capseg|" + tech.id + "|" + std::to_string(i), 0.0, ub, cost);
        link.push_back({seg, -1.0});
    }
    lp.add_constraint("pwl|" + tech.id, std::move(link), Relation::Equal, 0.0);
}

/// Policy rows: a fixed-rate equality per material, a hard zero on recycling
/// routes, or nothing beyond the availability caps.
inline void add_recycling_policy(LinearProgram& lp, YearLp& built, const YearProblem& p) {
    const SystemGraph& g = *p.graph;
    switch (p.policy.mode) {
        case RecyclingPolicy::Mode::Forbidden: {
            for (const std::string& tid : built.recycling_techs) {
                auto zero = [&](int var) {
                    lp.variables[static_cast<size_t>(var)].upper = 0.0;
                };
                zero(built.capacity_var.at(tid));
                for (int v : built.activity_vars.at(tid)) zero(v);
            }
            for (const auto& [cid, vars] : built.scrap_vars)
                for (int v : vars) lp.variables[static_cast<size_t>(v)].upper = 0.0;
            break;
        }
        case RecyclingPolicy::Mode::FixedAtRate: {
            if (p.policy.rates.empty())
                throw ConfigError("fixed-rate policy requires base-year rates");
            for (const auto& [material, rate] : p.policy.rates) {
                if (rate < 0.0 || rate > 1.0)
                    throw std::domain_error("recycling rate outside [0,1] for " + material);
                std::map<int, double> coeffs;
                for (const auto& [tid, t] : g.technologies) {
                    auto out = t.outputs.find(material);
                    if (out == t.outputs.end() || out->second <= 0.0) continue;
                    const bool secondary = built.recycling_techs.count(tid) > 0;
                    const double factor = (secondary ? 1.0 : 0.0) - rate;
                    const auto& act = built.activity_vars.at(tid);
                    for (size_t f = 0; f < act.size(); ++f)
                        coeffs[act[f]] += factor * out->second * built.step_weight[f];
                }
                std::vector<LinearProgram::Entry> row;
                for (const auto& [var, c] : coeffs) row.push_back({var, c});
                lp.add_constraint("policy_rate|" + material, std::move(row), Relation::Equal, 0.0);
            }
            break;
        }
        case RecyclingPolicy::Mode::BoundedByAvailability:
            break;  // availability caps alone; rates stay free
    }
}

/// Capacity scale for the cost surrogate: the explicit bound when present,
/// otherwise the annual demand the technology's reference output could serve.
/// Without either, the band degenerates to the flat cost.
inline double pwl_scale(const SystemGraph& g, const Technology& t, int year) {
    if (t.max_capacity) return *t.max_capacity;
    auto out = t.outputs.find(t.reference_commodity);
    const double coeff = (out != t.outputs.end()) ? out->second : 1.0;
    if (coeff <= 0.0) return 0.0;
    return g.demands.at(t.reference_commodity, year) / coeff;
}

/// Build the full standard-form LP for one optimization year.
inline YearLp build_year_lp(const YearProblem& p) {
    if (p.graph == nullptr || p.periods == nullptr)
        throw std::invalid_argument("build_year_lp: graph and periods are required");
    const SystemGraph& g = *p.graph;
    const TypicalPeriodSet& ts = *p.periods;
    if (p.cap && *p.cap < 0.0) throw std::domain_error("build_year_lp: negative emission cap");

    YearLp built;
    built.graph = p.graph;
    built.year = p.year;
    built.steps_per_year = ts.steps_per_year;
    LinearProgram& lp = built.lp;

    const int L = ts.period_length;
    const int nsteps = ts.k * L;
    built.step_weight.reserve(static_cast<size_t>(nsteps));
    for (int per = 0; per < ts.k; ++per)
        for (int s = 0; s < L; ++s)
            built.step_weight.push_back(static_cast<double>(ts.weights[static_cast<size_t>(per)]));

    auto rep_value = [&](const std::string& profile_id, int flat) -> double {
        const auto& reps = ts.representatives.at(profile_id);
        return reps[static_cast<size_t>(flat / L)][static_cast<size_t>(flat % L)];
    };

    for (const auto& [tid, t] : g.technologies)
        if (t.consumes_scrap(g.commodities)) built.recycling_techs.insert(tid);

    // Effective emission factor: direct plus configured feedstock terms.
    for (const auto& [tid, t] : g.technologies) {
        double ef = t.emission_factor;
        for (const auto& [cid, coeff] : t.feedstocks) {
            auto it = p.feedstock_emission_factors.find(cid);
            if (it != p.feedstock_emission_factors.end()) ef += coeff * it->second;
        }
        built.effective_emission_factor[tid] = ef;
    }

    // Capacity and activity variables.
    for (const auto& [tid, t] : g.technologies) {
        double ub = t.max_capacity.value_or(kInf);
        if (p.use_capacity_ub) {
            auto it = p.capacity_ub.find(tid);
            ub = std::min(ub, it != p.capacity_ub.end() ? it->second : kInf);
        } else {
            if (p.year < effective_first_year(t, p.policy, g, p.first_path_year)) ub = 0.0;
            if (t.phase_out_year && p.year >= *t.phase_out_year) ub = 0.0;
        }
        const int cap_var = lp.add_variable("cap|" + tid, 0.0, ub, 0.0);
        built.capacity_var[tid] = cap_var;
        add_piecewise_invest_cost(lp, t, cap_var, p.pwl.segments, pwl_scale(g, t, p.year), p.discount_rate);

        auto& act = built.activity_vars[tid];
        for (int f = 0; f < nsteps; ++f)
            act.push_back(lp.add_variable("act|" + tid + "|" + detail::step_name(f / L, f % L), 0.0,
                                          kInf,
                                          built.step_weight[static_cast<size_t>(f)] * t.variable_cost));
        // Activity limited by in-service capacity and availability.
        for (int f = 0; f < nsteps; ++f) {
            double af = t.availability;
            if (t.availability_profile) af = std::max(0.0, rep_value(*t.availability_profile, f));
            lp.add_constraint("caplink|" + tid + "|" + detail::step_name(f / L, f % L),
                              {{act[static_cast<size_t>(f)], 1.0},
                               {cap_var, -af / static_cast<double>(ts.steps_per_year)}},
                              Relation::LessEqual, 0.0);
        }
    }

    // Import and scrap-supply variables.
    for (const auto& [cid, c] : g.commodities) {
        if (c.importable) {
            double price = c.import_price.value_or(0.0);
            if (auto it = p.import_prices.find(cid); it != p.import_prices.end()) price = it->second;
            if (price < 0.0) throw std::domain_error("negative import price for " + cid);
            auto& vars = built.import_vars[cid];
            for (int f = 0; f < nsteps; ++f)
                vars.push_back(lp.add_variable("imp|" + cid + "|" + detail::step_name(f / L, f % L),
                                               0.0, kInf,
                                               built.step_weight[static_cast<size_t>(f)] * price));
        }
        if (c.scrap_of) {
            bool consumed = false;
            for (const auto& [tid, t] : g.technologies)
                if (t.input_coefficient(cid) > 0.0) consumed = true;
            if (!consumed) continue;
            auto ait = p.scrap_availability.find(*c.scrap_of);
            if (ait == p.scrap_availability.end())
                throw ConfigError("no scrap availability for material " + *c.scrap_of +
                                  " consumed via " + cid);
            double price = 0.0;
            if (auto it = p.scrap_prices.find(*c.scrap_of); it != p.scrap_prices.end())
                price = it->second;
            else if (c.default_scrap_price)
                price = *c.default_scrap_price;
            else
                throw ConfigError("no scrap price for material " + *c.scrap_of);
            if (price < 0.0) throw std::domain_error("negative scrap price for " + *c.scrap_of);
            auto& vars = built.scrap_vars[cid];
            std::vector<LinearProgram::Entry> availability_row;
            for (int f = 0; f < nsteps; ++f) {
                const int v = lp.add_variable("scrap|" + cid + "|" + detail::step_name(f / L, f % L),
                                              0.0, kInf,
                                              built.step_weight[static_cast<size_t>(f)] * price);
                vars.push_back(v);
                availability_row.push_back({v, built.step_weight[static_cast<size_t>(f)]});
            }
            lp.add_constraint("scrapavail|" + cid, std::move(availability_row),
                              Relation::LessEqual, ait->second);
        }
    }

    // Commodity balances: production + imports + scrap supply - consumption
    // equals the demand share in every representative step. Rows are emitted
    // for every commodity, demanded or not, so the LP shape is data-independent.
    for (const auto& [cid, c] : g.commodities) {
        const double annual_demand = g.demands.at(cid, p.year);
        const auto demand_profile = g.demands.profile_of(cid);
        for (int f = 0; f < nsteps; ++f) {
            std::map<int, double> coeffs;
            for (const auto& [tid, t] : g.technologies) {
                double net = 0.0;
                if (auto it = t.outputs.find(cid); it != t.outputs.end()) net += it->second;
                net -= t.input_coefficient(cid);
                if (net != 0.0) coeffs[built.activity_vars.at(tid)[static_cast<size_t>(f)]] += net;
            }
            if (auto it = built.import_vars.find(cid); it != built.import_vars.end())
                coeffs[it->second[static_cast<size_t>(f)]] += 1.0;
            if (auto it = built.scrap_vars.find(cid); it != built.scrap_vars.end())
                coeffs[it->second[static_cast<size_t>(f)]] += 1.0;
            double share = 1.0 / static_cast<double>(ts.steps_per_year);
            if (demand_profile) share = rep_value(*demand_profile, f);
            std::vector<LinearProgram::Entry> row;
            for (const auto& [var, coeff] : coeffs) row.push_back({var, coeff});
            lp.add_constraint("balance|" + cid + "|" + detail::step_name(f / L, f % L),
                              std::move(row), Relation::Equal, annual_demand * share);
        }
    }

    // System-wide CO2 cap over annualized activity.
    if (p.cap) {
        std::vector<LinearProgram::Entry> row;
        for (const auto& [tid, t] : g.technologies) {
            const double ef = built.effective_emission_factor.at(tid);
            if (ef == 0.0) continue;
            const auto& act = built.activity_vars.at(tid);
            for (size_t f = 0; f < act.size(); ++f)
                row.push_back({act[f], ef * built.step_weight[f]});
        }
        lp.add_constraint("co2_cap", std::move(row), Relation::LessEqual, *p.cap);
    }

    add_recycling_policy(lp, built, p);

    // All cost coefficients are nonnegative and all variables bounded below,
    // so the LP is bounded; a violation here is a data error worth stopping on.
    for (const auto& v : lp.variables)
        if (v.objective < 0.0)
            throw std::logic_error("negative objective coefficient on " + v.name);
    return built;
}

}  // namespace recopt
