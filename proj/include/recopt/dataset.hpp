#pragma once

// Dataset ingestion. A dataset is a directory of comma-separated text files
// with fixed headers, '.' decimal separators and '#' comment lines:
//
//   commodities.csv   id,kind,unit,importable,import_price,scrap_of,default_scrap_price
//   technologies.csv  id,reference_commodity,inputs,outputs,feedstocks,invest_cost,
//                     invest_cost_band,fixed_om_share,variable_cost,emission_factor,
//                     lifetime,max_capacity,availability,first_available_year,phase_out_year
//   demands.csv       commodity,year,quantity,profile
//   profiles.csv      profile_id,normalization,step,value            (optional)
//   stocks.csv        material,stock_id,mu,sigma,sector_share,recovery_rate,
//                     obsolete_share,collection_rate                 (optional)
//   history.csv       material,year,quantity_tonnes                  (optional)
//   exogenous.csv     material,base_year,base_quantity_tonnes,growth_rate,
//                     recovery_rate                                  (optional)
//
// Flow maps use "commodity:coeff;commodity:coeff". The availability column
// holds either a fraction or a profile id. Rows for the same demand key add.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "recopt/core.hpp"
#include "recopt/mfa.hpp"
#include "recopt/system_model.hpp"

namespace recopt {

struct Dataset {
    SystemGraph graph;
    MfaModel mfa;
    std::map<std::string, std::map<int, double>> history;  // material -> year -> tonnes

    /// Pre-path ledger over every material with both stocks and history.
    InflowLedger history_ledger(int first_path_year) const {
        InflowLedger ledger(first_path_year);
        for (const auto& [material, years] : history) {
            auto it = mfa.stocked.find(material);
            if (it == mfa.stocked.end())
                throw ConfigError("history for " + material + " has no stock profiles");
            for (const auto& [year, qty] : years) {
                if (year >= first_path_year) continue;  // path years are endogenous
                if (qty < 0.0) throw ConfigError("negative history for " + material);
                for (const auto& s : it->second.stocks)
                    ledger.add_historical(material, s.stock_id, year, qty * s.sector_share);
            }
        }
        return ledger;
    }
};

namespace detail {

struct CsvRow {
    std::map<std::string, std::string> fields;
    std::string file;
    int line = 0;

    bool has(const std::string& key) const {
        auto it = fields.find(key);
        return it != fields.end() && !it->second.empty();
    }
    const std::string& str(const std::string& key) const {
        auto it = fields.find(key);
        if (it == fields.end())
            throw ConfigError(file + ":" + std::to_string(line) + ": missing column " + key);
        return it->second;
    }
    double num(const std::string& key) const {
        const std::string& s = str(key);
        try {
            size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(file + ":" + std::to_string(line) + ": bad number '" + s +
                              "' in column " + key);
        }
    }
    int integer(const std::string& key) const { return static_cast<int>(num(key)); }
    std::optional<double> opt_num(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return num(key);
    }
};

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<CsvRow> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::vector<CsvRow> rows;
    std::vector<std::string> header;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto cells = split(t, ',');
        for (auto& c : cells) c = trim(c);
        if (header.empty()) {
            header = cells;
            continue;
        }
        if (cells.size() > header.size())
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": too many cells");
        CsvRow row;
        row.file = path.filename().string();
        row.line = lineno;
        for (size_t i = 0; i < cells.size(); ++i) row.fields[header[i]] = cells[i];
        rows.push_back(std::move(row));
    }
    if (header.empty()) throw ConfigError(path.string() + ": empty file");
    return rows;
}

/// "a:1.5;b:0.3" -> {a: 1.5, b: 0.3}
inline std::map<std::string, double> parse_flows(const CsvRow& row, const std::string& key) {
    std::map<std::string, double> out;
    if (!row.has(key)) return out;
    for (const std::string& part : split(row.str(key), ';')) {
        const std::string p = trim(part);
        if (p.empty()) continue;
        const auto kv = split(p, ':');
        if (kv.size() != 2)
            throw ConfigError(row.file + ":" + std::to_string(row.line) + ": bad flow term '" + p + "'");
        try {
            out[trim(kv[0])] = std::stod(trim(kv[1]));
        } catch (const std::exception&) {
            throw ConfigError(row.file + ":" + std::to_string(row.line) + ": bad flow coefficient in '" + p + "'");
        }
    }
    return out;
}

inline bool parse_bool(const CsvRow& row, const std::string& key) {
    const std::string& s = row.str(key);
    if (s == "1" || s == "true" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "no") return false;
    throw ConfigError(row.file + ":" + std::to_string(row.line) + ": bad boolean '" + s + "'");
}

inline bool numeric_field(const std::string& s) {
    try {
        size_t pos = 0;
        std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace detail

inline Dataset load_dataset(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ConfigError("dataset directory not found: " + dir.string());
    Dataset ds;

    for (const auto& row : detail::read_csv(dir / "commodities.csv")) {
        Commodity c;
        c.id = row.str("id");
        const std::string kind = row.str("kind");
        if (kind == "energy") c.kind = CommodityKind::Energy;
        else if (kind == "material") c.kind = CommodityKind::Material;
        else throw ConfigError(row.file + ":" + std::to_string(row.line) + ": bad kind " + kind);
        const std::string unit = row.str("unit");
        if (unit == "MWh") c.unit = Unit::MWh;
        else if (unit == "tonne") c.unit = Unit::Tonne;
        else throw ConfigError(row.file + ":" + std::to_string(row.line) + ": bad unit " + unit);
        c.importable = detail::parse_bool(row, "importable");
        c.import_price = row.opt_num("import_price");
        if (row.has("scrap_of")) c.scrap_of = row.str("scrap_of");
        c.default_scrap_price = row.opt_num("default_scrap_price");
        if (ds.graph.commodities.count(c.id))
            throw ConfigError("duplicate commodity " + c.id);
        ds.graph.commodities[c.id] = std::move(c);
    }

    for (const auto& row : detail::read_csv(dir / "technologies.csv")) {
        Technology t;
        t.id = row.str("id");
        t.reference_commodity = row.str("reference_commodity");
        t.inputs = detail::parse_flows(row, "inputs");
        t.outputs = detail::parse_flows(row, "outputs");
        t.feedstocks = detail::parse_flows(row, "feedstocks");
        t.invest_cost = row.num("invest_cost");
        t.invest_cost_band = row.opt_num("invest_cost_band").value_or(0.0);
        t.fixed_om_share = row.opt_num("fixed_om_share").value_or(0.05);
        t.variable_cost = row.opt_num("variable_cost").value_or(0.0);
        t.emission_factor = row.opt_num("emission_factor").value_or(0.0);
        t.lifetime = static_cast<int>(row.opt_num("lifetime").value_or(20));
        t.max_capacity = row.opt_num("max_capacity");
        if (row.has("availability")) {
            const std::string& a = row.str("availability");
            if (detail::numeric_field(a)) t.availability = row.num("availability");
            else t.availability_profile = a;
        }
        t.first_available_year = static_cast<int>(row.opt_num("first_available_year").value_or(0));
        if (row.has("phase_out_year")) t.phase_out_year = row.integer("phase_out_year");
        if (ds.graph.technologies.count(t.id))
            throw ConfigError("duplicate technology " + t.id);
        ds.graph.technologies[t.id] = std::move(t);
    }

    for (const auto& row : detail::read_csv(dir / "demands.csv")) {
        std::optional<std::string> profile;
        if (row.has("profile")) profile = row.str("profile");
        ds.graph.demands.add(row.str("commodity"), row.integer("year"), row.num("quantity"),
                             profile);
    }

    if (fs::exists(dir / "profiles.csv")) {
        for (const auto& row : detail::read_csv(dir / "profiles.csv")) {
            const std::string id = row.str("profile_id");
            auto& p = ds.graph.profiles[id];
            if (p.id.empty()) {
                p.id = id;
                const std::string norm = row.str("normalization");
                if (norm == "sums_to_one") p.normalization = ProfileNormalization::SumsToOne;
                else if (norm == "capacity_factor") p.normalization = ProfileNormalization::CapacityFactor;
                else throw ConfigError(row.file + ":" + std::to_string(row.line) + ": bad normalization " + norm);
            }
            const size_t step = static_cast<size_t>(row.integer("step"));
            if (step != p.values.size())
                throw ConfigError(row.file + ":" + std::to_string(row.line) +
                                  ": profile steps must be contiguous from 0");
            p.values.push_back(row.num("value"));
        }
    }

    if (fs::exists(dir / "stocks.csv")) {
        for (const auto& row : detail::read_csv(dir / "stocks.csv")) {
            const std::string material = row.str("material");
            auto& ms = ds.mfa.stocked[material];
            ms.material = material;
            StockProfile s;
            s.stock_id = row.str("stock_id");
            s.mu = row.num("mu");
            s.sigma = row.has("sigma") ? row.num("sigma") : 0.3 * s.mu;
            s.sector_share = row.num("sector_share");
            s.recovery_rate = row.opt_num("recovery_rate").value_or(1.0);
            s.obsolete_share = row.opt_num("obsolete_share").value_or(0.0);
            s.collection_rate = row.opt_num("collection_rate").value_or(1.0);
            ms.stocks.push_back(std::move(s));
        }
        for (const auto& [material, ms] : ds.mfa.stocked) {
            try {
                ms.validate();
            } catch (const std::exception& e) {
                throw ConfigError(std::string("stocks.csv: ") + e.what());
            }
        }
    }

    if (fs::exists(dir / "history.csv")) {
        for (const auto& row : detail::read_csv(dir / "history.csv"))
            ds.history[row.str("material")][row.integer("year")] += row.num("quantity_tonnes");
    }

    if (fs::exists(dir / "exogenous.csv")) {
        for (const auto& row : detail::read_csv(dir / "exogenous.csv")) {
            ExogenousSeries s;
            s.material = row.str("material");
            s.base_year = row.integer("base_year");
            s.base_quantity = row.num("base_quantity_tonnes");
            s.growth_rate = row.opt_num("growth_rate").value_or(0.0);
            s.recovery_rate = row.opt_num("recovery_rate").value_or(1.0);
            if (ds.mfa.stocked.count(s.material))
                throw ConfigError("material " + s.material + " has both stocks and an exogenous series");
            ds.mfa.exogenous[s.material] = std::move(s);
        }
    }

    return ds;
}

}  // namespace recopt
