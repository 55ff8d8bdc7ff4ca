#pragma once

// Commodities, technologies, demands and emission accounting: the network
// over which all year problems are assembled. Everything here is immutable
// value data after construction and safe to share across concurrent runs.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "recopt/core.hpp"

namespace recopt {

enum class CommodityKind { Energy, Material };
enum class Unit { MWh, Tonne };

inline const char* to_string(CommodityKind k) {
    return k == CommodityKind::Energy ? "energy" : "material";
}
inline const char* to_string(Unit u) { return u == Unit::MWh ? "MWh" : "tonne"; }

struct Commodity {
    std::string id;
    CommodityKind kind = CommodityKind::Energy;
    Unit unit = Unit::MWh;
    bool importable = false;
    std::optional<double> import_price;   // money per unit, present iff importable
    std::optional<std::string> scrap_of;  // set on secondary raw materials: the
                                          // product material they substitute
    std::optional<double> default_scrap_price;  // money per tonne, scenario-overridable
};

struct Technology {
    std::string id;
    std::map<std::string, double> inputs;     // commodity -> units per unit of reference output
    std::map<std::string, double> feedstocks; // non-energetic inputs, same convention;
                                              // balance-relevant, separately taxable
    std::map<std::string, double> outputs;    // commodity -> units per unit of reference output
    std::string reference_commodity;
    double invest_cost = 0.0;       // money per unit of annual capacity
    double invest_cost_band = 0.0;  // fractional half-width of the convex cost surrogate
    double fixed_om_share = 0.05;   // fraction of invest per year
    double variable_cost = 0.0;     // money per unit of reference output
    double emission_factor = 0.0;   // tCO2 per unit of reference output
    int lifetime = 20;              // years
    std::optional<double> max_capacity;
    double availability = 1.0;                  // used when availability_profile is empty
    std::optional<std::string> availability_profile;
    int first_available_year = 0;
    std::optional<int> phase_out_year;  // capacity forced to zero from this year on

    bool consumes_scrap(const std::map<std::string, Commodity>& commodities) const {
        for (const auto& [cid, coeff] : inputs) {
            auto it = commodities.find(cid);
            if (it != commodities.end() && it->second.scrap_of && coeff > 0.0) return true;
        }
        return false;
    }
    double input_coefficient(const std::string& commodity) const {
        double c = 0.0;
        if (auto it = inputs.find(commodity); it != inputs.end()) c += it->second;
        if (auto it = feedstocks.find(commodity); it != feedstocks.end()) c += it->second;
        return c;
    }
};

enum class ProfileNormalization { SumsToOne, CapacityFactor };

struct Profile {
    std::string id;
    std::vector<double> values;  // one value per timestep of the year
    ProfileNormalization normalization = ProfileNormalization::CapacityFactor;
};

struct DemandEntry {
    double quantity = 0.0;
    std::optional<std::string> profile;  // normalized intra-year shape
};

struct DemandSet {
    // (commodity, year) -> demand. Multiple dataset rows for the same key are
    // summed at ingestion.
    std::map<std::pair<std::string, int>, DemandEntry> entries;

    void add(const std::string& commodity, int year, double quantity,
             std::optional<std::string> profile = std::nullopt) {
        auto& e = entries[{commodity, year}];
        e.quantity += quantity;
        if (profile) e.profile = profile;
    }

    std::set<std::string> commodities() const {
        std::set<std::string> out;
        for (const auto& [key, e] : entries) out.insert(key.first);
        return out;
    }

    std::vector<int> years(const std::string& commodity) const {
        std::vector<int> out;
        for (const auto& [key, e] : entries)
            if (key.first == commodity) out.push_back(key.second);
        return out;
    }

    /// Demand in an arbitrary year: linear interpolation between the tabulated
    /// years, clamped at both ends. Commodities without entries demand zero.
    double at(const std::string& commodity, int year) const {
        const std::vector<int> ys = years(commodity);
        if (ys.empty()) return 0.0;
        if (year <= ys.front()) return entries.at({commodity, ys.front()}).quantity;
        if (year >= ys.back()) return entries.at({commodity, ys.back()}).quantity;
        auto hi = std::upper_bound(ys.begin(), ys.end(), year);
        const int y1 = *hi;
        const int y0 = *std::prev(hi);
        const double q0 = entries.at({commodity, y0}).quantity;
        const double q1 = entries.at({commodity, y1}).quantity;
        const double t = static_cast<double>(year - y0) / static_cast<double>(y1 - y0);
        return q0 + t * (q1 - q0);
    }

    std::optional<std::string> profile_of(const std::string& commodity) const {
        for (const auto& [key, e] : entries)
            if (key.first == commodity && e.profile) return e.profile;
        return std::nullopt;
    }
};

struct SystemGraph {
    std::map<std::string, Commodity> commodities;
    std::map<std::string, Technology> technologies;
    DemandSet demands;
    std::map<std::string, Profile> profiles;
    double base_year_emissions = 0.0;  // the 1990 reference the cap schedule scales

    const Commodity& commodity(const std::string& id) const {
        auto it = commodities.find(id);
        if (it == commodities.end()) throw std::out_of_range("unknown commodity: " + id);
        return it->second;
    }
    const Technology& technology(const std::string& id) const {
        auto it = technologies.find(id);
        if (it == technologies.end()) throw std::out_of_range("unknown technology: " + id);
        return it->second;
    }
};

struct Diagnostic {
    std::string code;
    std::string message;
};

/// Structural validation. Returns diagnostics instead of throwing; an empty
/// list means every type invariant holds and every demanded commodity is
/// reachable from sources or imports through technology chains.
inline std::vector<Diagnostic> validate_system(const SystemGraph& g) {
    std::vector<Diagnostic> out;
    auto fail = [&](const std::string& code, const std::string& msg) {
        out.push_back({code, msg});
    };

    for (const auto& [id, c] : g.commodities) {
        if (c.importable != c.import_price.has_value())
            fail("import_price", "commodity " + id + ": import_price present iff importable");
        if ((c.kind == CommodityKind::Energy) != (c.unit == Unit::MWh))
            fail("unit_kind", "commodity " + id + ": unit inconsistent with kind");
        if (c.scrap_of && !g.commodities.count(*c.scrap_of))
            fail("scrap_of", "commodity " + id + ": unknown material " + *c.scrap_of);
        if (c.import_price && *c.import_price < 0.0)
            fail("import_price", "commodity " + id + ": negative import price");
    }

    for (const auto& [id, t] : g.technologies) {
        auto check_flows = [&](const std::map<std::string, double>& m, const char* what) {
            for (const auto& [cid, coeff] : m) {
                if (!g.commodities.count(cid))
                    fail("flow_commodity", "technology " + id + ": unknown " + what + " " + cid);
                if (coeff < 0.0)
                    fail("flow_sign", "technology " + id + ": negative " + what + " coefficient for " + cid);
            }
        };
        check_flows(t.inputs, "input");
        check_flows(t.feedstocks, "feedstock");
        check_flows(t.outputs, "output");
        if (!t.outputs.count(t.reference_commodity))
            fail("reference", "technology " + id + ": reference commodity not among outputs");
        if (t.fixed_om_share < 0.0 || t.fixed_om_share > 1.0)
            fail("fixed_om", "technology " + id + ": fixed_om_share outside [0,1]");
        if (t.lifetime < 1) fail("lifetime", "technology " + id + ": lifetime < 1");
        if (t.emission_factor < 0.0) fail("emission", "technology " + id + ": negative emission factor");
        if (t.invest_cost < 0.0) fail("invest", "technology " + id + ": negative invest cost");
        if (t.invest_cost_band < 0.0) fail("band", "technology " + id + ": negative invest cost band");
        if (t.availability_profile) {
            if (!g.profiles.count(*t.availability_profile))
                fail("availability", "technology " + id + ": unknown profile " + *t.availability_profile);
        } else if (t.availability < 0.0 || t.availability > 1.0) {
            fail("availability", "technology " + id + ": availability outside [0,1]");
        }
    }

    for (const auto& [key, e] : g.demands.entries) {
        if (!g.commodities.count(key.first))
            fail("demand_commodity", "demand references unknown commodity " + key.first);
        if (e.quantity < 0.0)
            fail("demand_sign", "negative demand for " + key.first + " in " + std::to_string(key.second));
        if (e.profile && !g.profiles.count(*e.profile))
            fail("demand_profile", "demand for " + key.first + ": unknown profile " + *e.profile);
    }

    for (const auto& [id, p] : g.profiles) {
        double sum = 0.0;
        bool finite = true;
        for (double v : p.values) {
            if (!std::isfinite(v)) finite = false;
            sum += v;
        }
        if (!finite) fail("profile_values", "profile " + id + ": non-finite values");
        if (p.normalization == ProfileNormalization::SumsToOne && !nearly_equal(sum, 1.0, 1e-9, 1e-9))
            fail("profile_sum", "profile " + id + ": values do not sum to 1");
    }

    // Reachability: a commodity is sourced if importable, a secondary raw
    // material (supplied from the anthropogenic stock), or producible by a
    // technology whose inputs are all sourced. Fixed point over the graph.
    std::set<std::string> sourced;
    for (const auto& [id, c] : g.commodities)
        if (c.importable || c.scrap_of) sourced.insert(id);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [tid, t] : g.technologies) {
            bool ok = true;
            for (const auto& [cid, coeff] : t.inputs)
                if (coeff > 0.0 && !sourced.count(cid)) { ok = false; break; }
            if (ok)
                for (const auto& [cid, coeff] : t.feedstocks)
                    if (coeff > 0.0 && !sourced.count(cid)) { ok = false; break; }
            if (!ok) continue;
            for (const auto& [cid, coeff] : t.outputs) {
                if (coeff > 0.0 && !sourced.count(cid) && g.commodities.count(cid)) {
                    sourced.insert(cid);
                    changed = true;
                }
            }
        }
    }
    for (const std::string& cid : g.demands.commodities()) {
        if (g.commodities.count(cid) && !sourced.count(cid))
            fail("unsatisfiable_demand", "demanded commodity " + cid +
                                             " is not reachable from any source or import");
    }
    return out;
}

/// Capital recovery per unit of capacity and year: annuity at discount rate r,
/// straight-line in the r = 0 limit.
inline double annualized_cost(double invest, int lifetime, double discount_rate) {
    if (lifetime < 1) throw std::domain_error("annualized_cost: lifetime must be >= 1");
    if (discount_rate < 0.0) throw std::domain_error("annualized_cost: negative discount rate");
    if (discount_rate == 0.0) return invest / static_cast<double>(lifetime);
    const double r = discount_rate;
    return invest * r / (1.0 - std::pow(1.0 + r, -static_cast<double>(lifetime)));
}

/// Direct emissions of an activity mix: sum of output quantity times the
/// technology's emission factor. Linear in the activity map.
inline double direct_emissions(const SystemGraph& g, const std::map<std::string, double>& activity) {
    double total = 0.0;
    for (const auto& [tid, qty] : activity) {
        if (qty < 0.0) throw std::domain_error("direct_emissions: negative activity for " + tid);
        total += qty * g.technology(tid).emission_factor;
    }
    return total;
}

}  // namespace recopt
