#pragma once

// Shared basics: error types, numeric constants, small formatting helpers.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace recopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Input files or scenario configuration are inconsistent or incomplete.
/// CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The LP kernel could not certify a result (singular basis, pivot limit).
/// Distinct from an Infeasible/Unbounded status. CLI exit code 3.
struct SolverFailure : std::runtime_error {
    explicit SolverFailure(const std::string& msg) : std::runtime_error(msg) {}
};

/// A transformation-path step has no feasible solution. Carries the step
/// year and the names of the constraints certified as conflicting.
/// CLI exit code 1.
struct PathwayInfeasible : std::runtime_error {
    int step_year;
    std::vector<std::string> binding_constraints;
    PathwayInfeasible(int year, std::vector<std::string> binding, const std::string& msg)
        : std::runtime_error(msg), step_year(year), binding_constraints(std::move(binding)) {}
};

/// Scenario results cannot be compared (mismatched horizons etc.).
struct ComparisonError : std::runtime_error {
    explicit ComparisonError(const std::string& msg) : std::runtime_error(msg) {}
};

/// printf-style formatting into std::string with the classic locale
/// ('.' decimal separator regardless of environment).
inline std::string strformat(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    va_list args2;
    va_copy(args2, args);
    const int n = std::vsnprintf(nullptr, 0, fmt, args);
    va_end(args);
    std::string out(static_cast<size_t>(n), '\0');
    std::vsnprintf(out.data(), out.size() + 1, fmt, args2);
    va_end(args2);
    return out;
}

inline bool nearly_equal(double a, double b, double rel_tol, double abs_tol = 0.0) {
    const double diff = std::fabs(a - b);
    if (diff <= abs_tol) return true;
    return diff <= rel_tol * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace recopt
