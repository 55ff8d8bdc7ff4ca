#pragma once

// Linear program container: named variables with bounds and objective
// coefficients, named constraints as sparse rows. The debug text format
// documented in the README is emitted by to_text().

#include <cmath>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "recopt/core.hpp"

namespace recopt {

enum class Relation { LessEqual, Equal, GreaterEqual };

inline const char* to_string(Relation r) {
    switch (r) {
        case Relation::LessEqual: return "<=";
        case Relation::Equal: return "=";
        case Relation::GreaterEqual: return ">=";
    }
    return "?";
}

struct LinearProgram {
    struct Variable {
        std::string name;
        double lower = 0.0;
        double upper = kInf;
        double objective = 0.0;
    };
    struct Entry {
        int var = -1;
        double coeff = 0.0;
    };
    struct Constraint {
        std::string name;
        std::vector<Entry> row;
        Relation rel = Relation::LessEqual;
        double rhs = 0.0;
    };

    std::vector<Variable> variables;
    std::vector<Constraint> constraints;

    int add_variable(const std::string& name, double lower, double upper, double objective) {
        if (index_.count(name)) throw std::invalid_argument("duplicate variable: " + name);
        if (!(lower <= upper)) throw std::invalid_argument("bounds lower>upper on " + name);
        if (!std::isfinite(objective)) throw std::invalid_argument("non-finite objective on " + name);
        variables.push_back(Variable{name, lower, upper, objective});
        const int id = static_cast<int>(variables.size()) - 1;
        index_.emplace(name, id);
        return id;
    }

    int variable_index(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw std::out_of_range("unknown variable: " + name);
        return it->second;
    }

    bool has_variable(const std::string& name) const { return index_.count(name) > 0; }

    void add_constraint(const std::string& name, std::vector<Entry> row, Relation rel, double rhs) {
        for (const Entry& e : row) {
            if (e.var < 0 || e.var >= static_cast<int>(variables.size()))
                throw std::invalid_argument("constraint " + name + " references unknown variable");
        }
        constraints.push_back(Constraint{name, std::move(row), rel, rhs});
    }

    /// Line-oriented debug dump; grammar documented in the README.
    std::string to_text() const {
        std::ostringstream os;
        os << "# lp 1\nmin\n";
        for (const auto& v : variables) {
            os << "var " << v.name << " lb=" << strformat("%.17g", v.lower)
               << " ub=" << strformat("%.17g", v.upper)
               << " obj=" << strformat("%.17g", v.objective) << "\n";
        }
        for (const auto& c : constraints) {
            os << "row " << c.name << " " << to_string(c.rel) << " "
               << strformat("%.17g", c.rhs) << " :";
            for (const auto& e : c.row)
                os << " " << variables[static_cast<size_t>(e.var)].name << "*"
                   << strformat("%.17g", e.coeff);
            os << "\n";
        }
        return os.str();
    }

  private:
    std::unordered_map<std::string, int> index_;
};

}  // namespace recopt
