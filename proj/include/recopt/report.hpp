#pragma once

// Result serialization: one directory per scenario with per-year tabular
// files, a machine-readable summary (JSON) and a human-readable text report.
// All numbers are written with fixed "%.10g" formatting and map-ordered keys,
// so identical runs produce byte-identical files.

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "recopt/core.hpp"
#include "recopt/scenario.hpp"

namespace recopt {

namespace detail {

inline std::string fmt(double v) { return strformat("%.10g", v); }

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
}

}  // namespace detail

inline nlohmann::json to_json(const ScenarioSummary& s) {
    nlohmann::json j;
    j["name"] = s.name;
    j["years"] = s.years;
    auto series = [](const std::map<int, double>& m) {
        nlohmann::json out;
        for (const auto& [year, v] : m) out[std::to_string(year)] = v;
        return out;
    };
    auto nested = [](const std::map<int, std::map<std::string, double>>& m) {
        nlohmann::json out;
        for (const auto& [year, inner] : m) out[std::to_string(year)] = inner;
        return out;
    };
    j["annual_cost"] = series(s.annual_cost);
    j["emissions"] = series(s.emissions);
    j["cap"] = series(s.cap);
    j["marginal_abatement"] = series(s.marginal_abatement);
    j["recycling_rate"] = nested(s.recycling_rate);
    j["energy_use"] = nested(s.energy_use);
    j["energy_imports"] = nested(s.energy_imports);
    j["primary_supply"] = nested(s.primary_supply);
    j["cumulative_cost"] = s.cumulative_cost;
    j["transformation_cost"] = s.transformation_cost;
    j["co2_saved"] = s.co2_saved;
    j["avg_abatement"] = s.avg_abatement;
    j["marginal_abatement_terminal"] = s.marginal_abatement_terminal;
    return j;
}

inline ScenarioSummary summary_from_json(const nlohmann::json& j) {
    ScenarioSummary s;
    s.name = j.at("name").get<std::string>();
    s.years = j.at("years").get<std::vector<int>>();
    auto series = [&](const char* key, std::map<int, double>& out) {
        for (const auto& [year, v] : j.at(key).items()) out[std::stoi(year)] = v.get<double>();
    };
    auto nested = [&](const char* key, std::map<int, std::map<std::string, double>>& out) {
        for (const auto& [year, inner] : j.at(key).items())
            out[std::stoi(year)] = inner.get<std::map<std::string, double>>();
    };
    series("annual_cost", s.annual_cost);
    series("emissions", s.emissions);
    series("cap", s.cap);
    series("marginal_abatement", s.marginal_abatement);
    nested("recycling_rate", s.recycling_rate);
    nested("energy_use", s.energy_use);
    nested("energy_imports", s.energy_imports);
    nested("primary_supply", s.primary_supply);
    s.cumulative_cost = j.at("cumulative_cost").get<double>();
    s.transformation_cost = j.at("transformation_cost").get<double>();
    s.co2_saved = j.at("co2_saved").get<double>();
    s.avg_abatement = j.at("avg_abatement").get<double>();
    s.marginal_abatement_terminal = j.at("marginal_abatement_terminal").get<double>();
    return s;
}

inline std::string render_text_report(const ScenarioResult& r) {
    std::ostringstream os;
    os << "scenario " << r.spec.name << "\n";
    os << "dataset  " << r.spec.dataset_path << "\n";
    os << "policy   " << to_string(r.spec.pathway.policy.mode) << "\n\n";
    os << "year  annual_cost      emissions        cap              marg_abatement  \n";
    for (const auto& step : r.pathway.steps)
        os << step.year << "  " << strformat("%-15.8g", step.annual_cost) << "  "
           << strformat("%-15.8g", step.emissions) << "  " << strformat("%-15.8g", step.cap)
           << "  " << strformat("%-15.8g", std::max(0.0, -step.cap_dual)) << "\n";
    os << "\nrecycling rates (terminal year " << r.pathway.steps.back().year << ")\n";
    for (const auto& [m, rate] : r.pathway.steps.back().recycling_rate)
        os << "  " << m << " = " << detail::fmt(rate) << "\n";
    os << "\ncumulative cost        " << detail::fmt(r.cumulative_cost) << "\n";
    os << "transformation cost    " << detail::fmt(r.transformation_cost) << "\n";
    os << "co2 saved              " << detail::fmt(r.co2_saved) << "\n";
    os << "avg abatement          " << detail::fmt(r.avg_abatement) << "\n";
    os << "marginal abatement     " << detail::fmt(r.marginal_abatement_terminal) << "\n";
    return os.str();
}

/// Write the full per-scenario output directory.
inline void write_scenario_outputs(const std::filesystem::path& dir, const ScenarioResult& r,
                                   const SystemGraph& g) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    {
        std::ostringstream os;
        os << "year,technology,available_before,new_build,in_service,annual_output\n";
        for (const auto& step : r.pathway.steps)
            for (const auto& [tid, in_service] : step.in_service)
                os << step.year << "," << tid << "," << detail::fmt(step.available_before.at(tid))
                   << "," << detail::fmt(step.new_build.at(tid)) << "," << detail::fmt(in_service)
                   << "," << detail::fmt(step.activities.at(tid)) << "\n";
        detail::write_file(dir / "capacity.csv", os.str());
    }
    {
        std::ostringstream os;
        os << "year,technology,commodity,direction,quantity\n";
        for (const auto& step : r.pathway.steps) {
            for (const auto& [tid, act] : step.activities) {
                const Technology& t = g.technologies.at(tid);
                for (const auto& [cid, coeff] : t.outputs)
                    os << step.year << "," << tid << "," << cid << ",production,"
                       << detail::fmt(coeff * act) << "\n";
                for (const auto* flows : {&t.inputs, &t.feedstocks})
                    for (const auto& [cid, coeff] : *flows)
                        os << step.year << "," << tid << "," << cid << ",consumption,"
                           << detail::fmt(coeff * act) << "\n";
            }
            for (const auto& [cid, qty] : step.imports)
                os << step.year << ",(import)," << cid << ",production," << detail::fmt(qty) << "\n";
            for (const auto& [cid, qty] : step.scrap_supply)
                os << step.year << ",(stock)," << cid << ",production," << detail::fmt(qty) << "\n";
        }
        detail::write_file(dir / "flows.csv", os.str());
    }
    {
        std::ostringstream os;
        os << "year,emissions,cap,cap_dual,marginal_abatement\n";
        for (const auto& step : r.pathway.steps)
            os << step.year << "," << detail::fmt(step.emissions) << "," << detail::fmt(step.cap)
               << "," << detail::fmt(step.cap_dual) << ","
               << detail::fmt(std::max(0.0, -step.cap_dual)) << "\n";
        detail::write_file(dir / "emissions.csv", os.str());
    }
    {
        std::ostringstream os;
        os << "year,material,rate,secondary,total,availability\n";
        for (const auto& step : r.pathway.steps)
            for (const auto& [m, rate] : step.recycling_rate)
                os << step.year << "," << m << "," << detail::fmt(rate) << ","
                   << detail::fmt(step.secondary_production.at(m)) << ","
                   << detail::fmt(step.total_production.at(m)) << ","
                   << detail::fmt(step.scrap_availability.at(m)) << "\n";
        detail::write_file(dir / "recycling.csv", os.str());
    }
    {
        // Shadow prices: the cap row, scrap availability rows, and the
        // annual-average marginal supply cost per commodity from the balance
        // rows (duals are per unit and step; averaging over the original
        // year's steps gives the flat-annual marginal price).
        std::ostringstream os;
        os << "year,row,key,value\n";
        for (const auto& step : r.pathway.steps) {
            os << step.year << ",co2_cap,," << detail::fmt(step.cap_dual) << "\n";
            std::map<std::string, double> price_sum;
            for (const auto& [name, dual] : step.solution.dual) {
                if (name.rfind("scrapavail|", 0) == 0) {
                    os << step.year << ",scrap_availability," << name.substr(11) << ","
                       << detail::fmt(dual) << "\n";
                } else if (name.rfind("balance|", 0) == 0) {
                    const auto rest = name.substr(8);
                    price_sum[rest.substr(0, rest.find('|'))] += dual;
                }
            }
            for (const auto& [cid, total] : price_sum)
                os << step.year << ",avg_marginal_price," << cid << ","
                   << detail::fmt(total / 8760.0) << "\n";
        }
        detail::write_file(dir / "duals.csv", os.str());
    }
    detail::write_file(dir / "summary.json", to_json(summarize(r, g)).dump(2) + "\n");
    detail::write_file(dir / "report.txt", render_text_report(r));
}

inline void write_sweep_outputs(const std::filesystem::path& dir, const SweepResult& r) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::set<std::string> materials, carriers;
    for (const auto& pt : r.points) {
        for (const auto& [m, v] : pt.secondary_share) materials.insert(m);
        for (const auto& [c, v] : pt.energy_by_carrier) carriers.insert(c);
    }
    std::ostringstream os;
    os << "value,status,objective";
    for (const auto& m : materials) os << ",share_" << m;
    for (const auto& c : carriers) os << ",energy_" << c;
    os << "\n";
    for (const auto& pt : r.points) {
        os << detail::fmt(pt.value) << "," << pt.status << "," << detail::fmt(pt.objective);
        for (const auto& m : materials)
            os << "," << detail::fmt(pt.secondary_share.count(m) ? pt.secondary_share.at(m) : 0.0);
        for (const auto& c : carriers)
            os << ","
               << detail::fmt(pt.energy_by_carrier.count(c) ? pt.energy_by_carrier.at(c) : 0.0);
        os << "\n";
    }
    detail::write_file(dir / "sweep.csv", os.str());

    nlohmann::json j;
    j["name"] = r.name;
    j["parameter"] = r.parameter_path;
    j["year"] = r.year;
    j["monotonicity_violations"] = r.monotonicity_violations;
    nlohmann::json points = nlohmann::json::array();
    for (const auto& pt : r.points) {
        nlohmann::json p;
        p["value"] = pt.value;
        p["status"] = pt.status;
        p["objective"] = pt.objective;
        p["secondary_share"] = pt.secondary_share;
        p["activities"] = pt.activities;
        p["energy_by_carrier"] = pt.energy_by_carrier;
        points.push_back(std::move(p));
    }
    j["points"] = std::move(points);
    detail::write_file(dir / "summary.json", j.dump(2) + "\n");

    std::ostringstream txt;
    txt << "sweep " << r.name << " over " << r.parameter_path << " (year " << r.year << ")\n\n";
    txt << os.str();
    if (!r.monotonicity_violations.empty()) {
        txt << "\nmonotonicity violations:\n";
        for (const auto& v : r.monotonicity_violations) txt << "  " << v << "\n";
    }
    detail::write_file(dir / "report.txt", txt.str());
}

inline std::string render_comparison(const ComparisonReport& report) {
    std::ostringstream os;
    os << "comparison against reference '" << report.reference << "'\n";
    os << "horizon:";
    for (int y : report.years) os << " " << y;
    os << "\n\n";
    for (const auto& row : report.rows) {
        os << row.name << (row.is_reference ? "  [reference]" : "") << "\n";
        os << "  cumulative cost        " << detail::fmt(row.cumulative_cost) << "\n";
        os << "  transformation cost    " << detail::fmt(row.transformation_cost);
        if (!row.is_reference) os << "  (" << detail::fmt(row.delta_cost_vs_reference) << ")";
        os << "\n";
        os << "  co2 saved              " << detail::fmt(row.co2_saved) << "\n";
        os << "  avg abatement          " << detail::fmt(row.avg_abatement);
        if (!row.is_reference) os << "  (" << detail::fmt(row.delta_avg_abatement) << ")";
        os << "\n";
        os << "  marginal abatement     " << detail::fmt(row.marginal_abatement_terminal);
        if (!row.is_reference) os << "  (" << detail::fmt(row.delta_marginal) << ")";
        os << "\n";
        if (!row.terminal_recycling_rate.empty()) {
            os << "  terminal recycling rates:";
            for (const auto& [m, rate] : row.terminal_recycling_rate)
                os << " " << m << "=" << detail::fmt(rate);
            os << "\n";
        }
        if (!row.is_reference && !row.delta_energy_use_terminal.empty()) {
            os << "  terminal energy use deltas:";
            for (const auto& [c, v] : row.delta_energy_use_terminal)
                os << " " << c << "=" << detail::fmt(v);
            os << "\n";
        }
        os << "\n";
    }
    return os.str();
}

inline void write_comparison_outputs(const std::filesystem::path& dir,
                                     const ComparisonReport& report) {
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["reference"] = report.reference;
    j["years"] = report.years;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json r;
        r["name"] = row.name;
        r["is_reference"] = row.is_reference;
        r["cumulative_cost"] = row.cumulative_cost;
        r["transformation_cost"] = row.transformation_cost;
        r["delta_cost_vs_reference"] = row.delta_cost_vs_reference;
        r["co2_saved"] = row.co2_saved;
        r["avg_abatement"] = row.avg_abatement;
        r["delta_avg_abatement"] = row.delta_avg_abatement;
        r["marginal_abatement_terminal"] = row.marginal_abatement_terminal;
        r["delta_marginal"] = row.delta_marginal;
        r["terminal_recycling_rate"] = row.terminal_recycling_rate;
        r["delta_energy_use_terminal"] = row.delta_energy_use_terminal;
        r["delta_primary_supply_terminal"] = row.delta_primary_supply_terminal;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    detail::write_file(dir / "comparison.json", j.dump(2) + "\n");
    detail::write_file(dir / "comparison.txt", render_comparison(report));
}

}  // namespace recopt
