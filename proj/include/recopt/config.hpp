#pragma once

// Scenario and sweep configuration files: line-oriented plain text with
// nested sections. Grammar (documented in the README):
//
//   # comment                        full-line comments with '#'
//   key = value                      top-level entry
//   [section]                        section header
//   key = value                      entry inside the section
//   key token = value                keyed map entry ("anchor 2030 = 0.55")
//
// Values are plain tokens; lists are whitespace-separated ("grid = 1 2 3");
// "inf" is accepted where a rate may be unbounded. File paths are resolved
// relative to the config file.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "recopt/core.hpp"
#include "recopt/scenario.hpp"

namespace recopt {

struct ConfigFile {
    struct Entry {
        std::string key;      // first token of the left-hand side
        std::string subkey;   // remaining tokens, empty for plain keys
        std::string value;
        int line = 0;
    };
    std::filesystem::path path;
    std::map<std::string, std::vector<Entry>> sections;  // "" holds top-level keys

    bool has(const std::string& section, const std::string& key) const {
        return find(section, key) != nullptr;
    }
    const Entry* find(const std::string& section, const std::string& key) const {
        auto it = sections.find(section);
        if (it == sections.end()) return nullptr;
        for (const auto& e : it->second)
            if (e.key == key && e.subkey.empty()) return &e;
        return nullptr;
    }
    std::string str(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        if (!e)
            throw ConfigError(path.string() + ": missing '" + key + "'" +
                              (section.empty() ? "" : " in [" + section + "]"));
        return e->value;
    }
    std::string str_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const {
        const Entry* e = find(section, key);
        return e ? e->value : fallback;
    }
    double num(const std::string& section, const std::string& key) const {
        return parse_number(str(section, key), key);
    }
    double num_or(const std::string& section, const std::string& key, double fallback) const {
        const Entry* e = find(section, key);
        return e ? parse_number(e->value, key) : fallback;
    }
    /// All "key token = value" entries of a section for a given key.
    std::map<std::string, double> keyed_numbers(const std::string& section,
                                                const std::string& key) const {
        std::map<std::string, double> out;
        auto it = sections.find(section);
        if (it == sections.end()) return out;
        for (const auto& e : it->second)
            if (e.key == key && !e.subkey.empty()) out[e.subkey] = parse_number(e.value, key);
        return out;
    }

    double parse_number(const std::string& s, const std::string& context) const {
        if (s == "inf") return kInf;
        try {
            size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(path.string() + ": bad number '" + s + "' for " + context);
        }
    }
};

inline ConfigFile parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    ConfigFile cfg;
    cfg.path = path;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (auto hash = t.find('#'); hash != std::string::npos) t = detail::trim(t.substr(0, hash));
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": bad section header");
            section = detail::trim(t.substr(1, t.size() - 2));
            cfg.sections[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        std::string lhs = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (lhs.empty() || value.empty())
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": empty key or value");
        ConfigFile::Entry e;
        e.line = lineno;
        e.value = value;
        if (auto space = lhs.find_first_of(" \t"); space != std::string::npos) {
            e.key = lhs.substr(0, space);
            e.subkey = detail::trim(lhs.substr(space + 1));
        } else {
            e.key = lhs;
        }
        cfg.sections[section].push_back(std::move(e));
    }
    return cfg;
}

inline ScenarioSpec scenario_from_config(const ConfigFile& cfg) {
    ScenarioSpec spec;
    spec.name = cfg.str("", "name");
    const std::filesystem::path base = cfg.path.parent_path();
    spec.dataset_path = (base / cfg.str("", "dataset")).lexically_normal().string();

    spec.pathway.caps.base = cfg.num("caps", "base_emissions");
    const auto anchors = cfg.keyed_numbers("caps", "anchor");
    if (!anchors.empty()) {
        spec.pathway.caps.anchors.clear();
        for (const auto& [year, frac] : anchors)
            spec.pathway.caps.anchors[static_cast<int>(cfg.parse_number(year, "anchor year"))] = frac;
    }

    const std::string mode = cfg.str_or("policy", "mode", "bounded");
    if (mode == "bounded") spec.pathway.policy.mode = RecyclingPolicy::Mode::BoundedByAvailability;
    else if (mode == "forbidden") spec.pathway.policy.mode = RecyclingPolicy::Mode::Forbidden;
    else if (mode == "fixed") spec.pathway.policy.mode = RecyclingPolicy::Mode::FixedAtRate;
    else throw ConfigError(cfg.path.string() + ": unknown policy mode '" + mode + "'");
    spec.pathway.policy.rates = cfg.keyed_numbers("policy", "rate");
    if (cfg.has("policy", "effective_from"))
        spec.pathway.policy.effective_from = static_cast<int>(cfg.num("policy", "effective_from"));

    spec.pathway.scrap_prices = cfg.keyed_numbers("prices", "scrap");
    spec.pathway.import_prices = cfg.keyed_numbers("prices", "import");
    spec.pathway.feedstock_emission_factors = cfg.keyed_numbers("emissions", "feedstock");

    spec.tsa.k = static_cast<int>(cfg.num_or("tsa", "k", 1));
    spec.tsa.period_length = static_cast<int>(cfg.num_or("tsa", "period_length", 24));

    spec.pathway.first_step = static_cast<int>(cfg.num_or("pathway", "first_step", 2020));
    spec.pathway.last_step = static_cast<int>(cfg.num_or("pathway", "last_step", 2050));
    spec.pathway.step_length = static_cast<int>(cfg.num_or("pathway", "step_length", 5));
    spec.pathway.corridor_rate = cfg.num_or("pathway", "corridor_rate", kInf);
    spec.pathway.discount_rate = cfg.num_or("pathway", "discount_rate", 0.07);
    spec.pathway.pwl.segments = static_cast<int>(cfg.num_or("pathway", "pwl_segments", 4));
    return spec;
}

inline ScenarioSpec load_scenario(const std::filesystem::path& path) {
    return scenario_from_config(parse_config(path));
}

inline SweepSpec load_sweep(const std::filesystem::path& path) {
    const ConfigFile cfg = parse_config(path);
    SweepSpec spec;
    spec.name = cfg.str("", "name");
    const std::filesystem::path base = cfg.path.parent_path();
    spec.base = load_scenario((base / cfg.str("", "scenario")).lexically_normal());
    spec.parameter_path = cfg.str("", "parameter");
    std::istringstream grid(cfg.str("", "grid"));
    double v;
    while (grid >> v) spec.grid.push_back(v);
    const std::string full = cfg.str_or("", "full_pathway", "false");
    spec.full_pathway = (full == "true" || full == "1" || full == "yes");
    spec.validate();
    return spec;
}

}  // namespace recopt
