#pragma once

// Test-only oracles, independent of the solver implementation.
//
// The LP oracle enumerates candidate vertices as intersections of n active
// hyperplanes (constraint rows taken as equalities plus finite variable
// bounds), keeps the feasible ones, and minimizes the objective over them.
// Valid for small bounded instances only, which is exactly what the random
// generator below produces.

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "recopt/lp.hpp"

namespace recopt::testing {

struct OracleResult {
    bool feasible = false;
    double objective = 0.0;
    std::vector<double> x;
};

inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a,
                                                       std::vector<double> b) {
    const size_t n = b.size();
    for (size_t k = 0; k < n; ++k) {
        size_t p = k;
        for (size_t i = k + 1; i < n; ++i)
            if (std::fabs(a[i][k]) > std::fabs(a[p][k])) p = i;
        if (std::fabs(a[p][k]) < 1e-10) return std::nullopt;
        std::swap(a[p], a[k]);
        std::swap(b[p], b[k]);
        for (size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            if (f == 0.0) continue;
            for (size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (size_t j = ii + 1; j < n; ++j) s -= a[ii][j] * x[j];
        x[ii] = s / a[ii][ii];
    }
    return x;
}

inline OracleResult vertex_enumeration_oracle(const LinearProgram& lp, double feas_tol = 1e-7) {
    const size_t n = lp.variables.size();
    struct Plane {
        std::vector<double> a;
        double b;
    };
    std::vector<Plane> planes;
    for (const auto& c : lp.constraints) {
        Plane p{std::vector<double>(n, 0.0), c.rhs};
        for (const auto& e : c.row) p.a[static_cast<size_t>(e.var)] += e.coeff;
        planes.push_back(std::move(p));
    }
    for (size_t j = 0; j < n; ++j) {
        if (std::isfinite(lp.variables[j].lower)) {
            Plane p{std::vector<double>(n, 0.0), lp.variables[j].lower};
            p.a[j] = 1.0;
            planes.push_back(std::move(p));
        }
        if (std::isfinite(lp.variables[j].upper)) {
            Plane p{std::vector<double>(n, 0.0), lp.variables[j].upper};
            p.a[j] = 1.0;
            planes.push_back(std::move(p));
        }
    }
    auto feasible_point = [&](const std::vector<double>& x) {
        for (size_t j = 0; j < n; ++j) {
            if (x[j] < lp.variables[j].lower - feas_tol) return false;
            if (x[j] > lp.variables[j].upper + feas_tol) return false;
        }
        for (const auto& c : lp.constraints) {
            double lhs = 0.0;
            for (const auto& e : c.row) lhs += e.coeff * x[static_cast<size_t>(e.var)];
            switch (c.rel) {
                case Relation::LessEqual:
                    if (lhs > c.rhs + feas_tol) return false;
                    break;
                case Relation::GreaterEqual:
                    if (lhs < c.rhs - feas_tol) return false;
                    break;
                case Relation::Equal:
                    if (std::fabs(lhs - c.rhs) > feas_tol) return false;
                    break;
            }
        }
        return true;
    };

    OracleResult best;
    std::vector<size_t> pick(n);
    const size_t h = planes.size();
    // Enumerate all n-subsets of hyperplanes.
    std::vector<size_t> idx(n);
    auto consider = [&]() {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (size_t t = 0; t < n; ++t) {
            a.push_back(planes[idx[t]].a);
            b.push_back(planes[idx[t]].b);
        }
        auto x = solve_square(std::move(a), std::move(b));
        if (!x || !feasible_point(*x)) return;
        double obj = 0.0;
        for (size_t j = 0; j < n; ++j) obj += lp.variables[j].objective * (*x)[j];
        if (!best.feasible || obj < best.objective) {
            best.feasible = true;
            best.objective = obj;
            best.x = *x;
        }
    };
    // Iterative combination walk.
    if (h >= n) {
        for (size_t t = 0; t < n; ++t) idx[t] = t;
        while (true) {
            consider();
            size_t t = n;
            while (t-- > 0) {
                if (idx[t] != t + h - n) {
                    ++idx[t];
                    for (size_t u = t + 1; u < n; ++u) idx[u] = idx[u - 1] + 1;
                    break;
                }
                if (t == 0) return best;
            }
        }
    }
    return best;
}

/// Random bounded-feasible instance: every variable gets a finite box, and
/// each row's rhs is placed on the feasible side of a random interior point.
inline LinearProgram random_bounded_lp(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> nvars_d(1, 6), nrows_d(1, 6), rel_d(0, 9);
    std::uniform_real_distribution<double> coef_d(-1.0, 1.0), ub_d(0.5, 8.0),
        margin_d(0.01, 1.0), frac_d(0.0, 1.0);
    const int n = nvars_d(rng), m = nrows_d(rng);
    LinearProgram lp;
    std::vector<double> x0(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double ub = ub_d(rng);
        lp.add_variable("x" + std::to_string(j), 0.0, ub, coef_d(rng));
        x0[static_cast<size_t>(j)] = frac_d(rng) * ub;
    }
    for (int i = 0; i < m; ++i) {
        std::vector<LinearProgram::Entry> row;
        double at_x0 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double a = coef_d(rng);
            row.push_back({j, a});
            at_x0 += a * x0[static_cast<size_t>(j)];
        }
        const int r = rel_d(rng);
        Relation rel = r < 4 ? Relation::LessEqual : r < 8 ? Relation::GreaterEqual : Relation::Equal;
        double rhs = at_x0;
        if (rel == Relation::LessEqual) rhs += margin_d(rng);
        if (rel == Relation::GreaterEqual) rhs -= margin_d(rng);
        lp.add_constraint("r" + std::to_string(i), std::move(row), rel, rhs);
    }
    return lp;
}

/// Certificate checks every optimal solution must satisfy: bounds and rows
/// within the stated feasibility tolerance, complementary slackness, strong
/// duality.
inline void check_certificates(const LinearProgram& lp, const LpSolution& sol,
                               double feas_tol = 1e-8, double cs_tol = 1e-6,
                               double duality_rel = 1e-7) {
    if (sol.status != LpSolution::Status::Optimal)
        throw std::logic_error("check_certificates: not optimal");
    double scale = 1.0;
    for (const auto& c : lp.constraints) scale = std::max(scale, std::fabs(c.rhs));
    for (const auto& v : lp.variables) {
        const double x = sol.primal.at(v.name);
        if (x < v.lower - feas_tol * scale || x > v.upper + feas_tol * scale)
            throw std::logic_error("bounds violated on " + v.name);
    }
    for (const auto& c : lp.constraints) {
        double lhs = 0.0;
        for (const auto& e : c.row) lhs += e.coeff * sol.primal.at(lp.variables[static_cast<size_t>(e.var)].name);
        const double slack = (c.rel == Relation::LessEqual)      ? c.rhs - lhs
                             : (c.rel == Relation::GreaterEqual) ? lhs - c.rhs
                                                                 : std::fabs(lhs - c.rhs);
        if (slack < -feas_tol * scale) throw std::logic_error("row violated: " + c.name);
        if (c.rel != Relation::Equal) {
            const double y = sol.dual.at(c.name);
            if (std::fabs(y) * std::max(0.0, slack) > cs_tol * std::max(1.0, std::fabs(sol.objective)))
                throw std::logic_error("complementary slackness violated: " + c.name);
        }
    }
    const double gap = std::fabs(sol.objective - sol.dual_objective);
    if (gap > duality_rel * std::max(1.0, std::fabs(sol.objective)))
        throw std::logic_error("strong duality gap too large");
}

}  // namespace recopt::testing
