#pragma once

// Two-phase primal simplex on a dense tableau.
//
// General bounds are reduced to the nonnegative standard form: finite lower
// bounds are shifted out, upper bounds become explicit rows, free variables
// are split. Dantzig pricing by default; Bland's rule engages after a run of
// degenerate pivots (guaranteeing termination) and disengages once the
// objective moves again. After the pivot loop the final basis is
// refactorized from the original data (dense LU), so reported primal and
// dual values do not carry accumulated tableau round-off.
//
// Dual sign convention: dual(row) = d(optimal objective)/d(rhs). For a
// binding <= cap in a minimization this is negative; tightening the cap by
// eps raises the optimum by |dual|*eps.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "recopt/core.hpp"
#include "recopt/lp.hpp"

namespace recopt {

struct SolverOptions {
    double feasibility_tol = 1e-8;
    double optimality_tol = 1e-9;
    double pivot_tol = 1e-9;
    int degeneracy_streak_threshold = 50;  // pivots before Bland's rule engages
    long max_iterations = 500000;
};

struct LpSolution {
    enum class Status { Optimal, Infeasible, Unbounded };

    Status status = Status::Infeasible;
    double objective = 0.0;
    double dual_objective = 0.0;  // equals objective at Optimal up to round-off
    std::map<std::string, double> primal;
    std::map<std::string, double> dual;
    long iterations = 0;
    std::vector<int> basis;  // internal basis signature, sorted; argmin structure
    std::vector<std::string> infeasible_rows;  // rows left unsatisfied by phase 1
    std::map<std::string, double> ray;         // unbounded direction, if any
};

inline const char* to_string(LpSolution::Status s) {
    switch (s) {
        case LpSolution::Status::Optimal: return "optimal";
        case LpSolution::Status::Infeasible: return "infeasible";
        case LpSolution::Status::Unbounded: return "unbounded";
    }
    return "?";
}

/// Shadow price of a named constraint. Requires an optimal solution.
inline double dual_of(const LpSolution& sol, const std::string& constraint_name) {
    if (sol.status != LpSolution::Status::Optimal)
        throw std::logic_error("dual_of requires an optimal solution");
    auto it = sol.dual.find(constraint_name);
    if (it == sol.dual.end()) throw std::out_of_range("unknown constraint: " + constraint_name);
    return it->second;
}

namespace detail {

class SimplexInstance {
  public:
    SimplexInstance(const LinearProgram& lp, const SolverOptions& opts) : lp_(lp), opts_(opts) {
        transform_variables();
        build_rows();
        build_tableau();
    }

    LpSolution run() {
        LpSolution sol;
        // Phase 1: minimize the artificial sum.
        if (n_artificial_ > 0) {
            Pivot p1 = optimize(cost1_);
            if (p1 == Pivot::IterationLimit)
                throw SolverFailure("simplex: phase 1 iteration limit reached");
            const double infeas = -cost1_[ncols_];
            if (infeas > opts_.feasibility_tol * std::max(1.0, rhs_scale_)) {
                sol.status = LpSolution::Status::Infeasible;
                sol.iterations = iterations_;
                for (int i = 0; i < m_; ++i) {
                    const int b = basis_[i];
                    if (b >= art_begin_ && tab(i, ncols_) > opts_.feasibility_tol)
                        sol.infeasible_rows.push_back(row_names_[static_cast<size_t>(i)]);
                }
                return sol;
            }
            drive_out_artificials();
        }
        // Phase 2.
        Pivot p2 = optimize(cost2_);
        if (p2 == Pivot::IterationLimit)
            throw SolverFailure("simplex: phase 2 iteration limit reached");
        if (p2 == Pivot::Unbounded) {
            sol.status = LpSolution::Status::Unbounded;
            sol.iterations = iterations_;
            extract_ray(sol);
            return sol;
        }
        sol.status = LpSolution::Status::Optimal;
        sol.iterations = iterations_;
        refine_and_extract(sol);
        return sol;
    }

  private:
    enum class Pivot { Optimal, Unbounded, IterationLimit };
    enum class Kind { Shift, Flip, SplitPos, SplitNeg };

    struct Column {                // internal structural column -> user variable
        int user_var = -1;
        Kind kind = Kind::Shift;
    };
    struct Row {                   // internal row in original (unnormalized) orientation
        std::vector<LinearProgram::Entry> entries;  // over internal structural columns
        Relation rel = Relation::LessEqual;
        double rhs = 0.0;
        double sign = 1.0;  // -1 if the row was negated to make rhs nonnegative
        std::string name;
        int user_constraint = -1;  // -1 for bound rows
    };

    const LinearProgram& lp_;
    const SolverOptions& opts_;

    std::vector<Column> columns_;          // internal structural columns
    std::vector<double> cint_;             // internal objective per structural column
    std::vector<int> first_col_;           // user var -> first internal column
    double objective_shift_ = 0.0;
    std::vector<Row> rows_;
    std::vector<std::string> row_names_;

    int m_ = 0;                 // rows
    int nstruct_ = 0;           // structural columns
    int slack_begin_ = 0, art_begin_ = 0, ncols_ = 0;
    int n_artificial_ = 0;
    std::vector<int> slack_of_row_, art_of_row_;  // column id or -1
    std::vector<double> slack_sign_;
    std::vector<double> T_;      // m x (ncols+1), row-major; last column is rhs
    std::vector<double> cost1_, cost2_;  // reduced-cost rows, size ncols+1
    std::vector<int> basis_;
    double rhs_scale_ = 1.0;
    long iterations_ = 0;
    int degenerate_streak_ = 0;
    bool bland_ = false;

    double& tab(int i, int j) { return T_[static_cast<size_t>(i) * (ncols_ + 1) + j]; }
    double tab(int i, int j) const { return T_[static_cast<size_t>(i) * (ncols_ + 1) + j]; }

    void transform_variables() {
        first_col_.assign(lp_.variables.size(), -1);
        for (size_t j = 0; j < lp_.variables.size(); ++j) {
            const auto& v = lp_.variables[j];
            first_col_[j] = static_cast<int>(columns_.size());
            const bool lb_fin = std::isfinite(v.lower);
            const bool ub_fin = std::isfinite(v.upper);
            if (lb_fin) {
                columns_.push_back({static_cast<int>(j), Kind::Shift});
                cint_.push_back(v.objective);
                objective_shift_ += v.objective * v.lower;
            } else if (ub_fin) {
                columns_.push_back({static_cast<int>(j), Kind::Flip});
                cint_.push_back(-v.objective);
                objective_shift_ += v.objective * v.upper;
            } else {
                columns_.push_back({static_cast<int>(j), Kind::SplitPos});
                cint_.push_back(v.objective);
                columns_.push_back({static_cast<int>(j), Kind::SplitNeg});
                cint_.push_back(-v.objective);
            }
        }
        nstruct_ = static_cast<int>(columns_.size());
    }

    // Coefficient of user variable j expressed over internal columns, and the
    // rhs adjustment its substitution induces.
    void append_user_term(std::vector<double>& dense, double& rhs, int j, double a) const {
        const auto& v = lp_.variables[static_cast<size_t>(j)];
        const int c = first_col_[static_cast<size_t>(j)];
        switch (columns_[static_cast<size_t>(c)].kind) {
            case Kind::Shift:
                dense[static_cast<size_t>(c)] += a;
                rhs -= a * v.lower;
                break;
            case Kind::Flip:
                dense[static_cast<size_t>(c)] -= a;
                rhs -= a * v.upper;
                break;
            case Kind::SplitPos:
                dense[static_cast<size_t>(c)] += a;
                dense[static_cast<size_t>(c) + 1] -= a;
                break;
            case Kind::SplitNeg:
                break;  // unreachable: first_col_ points at SplitPos
        }
    }

    void build_rows() {
        for (size_t r = 0; r < lp_.constraints.size(); ++r) {
            const auto& c = lp_.constraints[r];
            std::vector<double> dense(static_cast<size_t>(nstruct_), 0.0);
            double rhs = c.rhs;
            for (const auto& e : c.row) append_user_term(dense, rhs, e.var, e.coeff);
            Row row;
            row.rel = c.rel;
            row.rhs = rhs;
            row.name = c.name;
            row.user_constraint = static_cast<int>(r);
            for (int j = 0; j < nstruct_; ++j)
                if (dense[static_cast<size_t>(j)] != 0.0)
                    row.entries.push_back({j, dense[static_cast<size_t>(j)]});
            rows_.push_back(std::move(row));
        }
        // Upper bounds of shifted variables become explicit rows.
        for (size_t j = 0; j < lp_.variables.size(); ++j) {
            const auto& v = lp_.variables[j];
            const int c = first_col_[j];
            if (columns_[static_cast<size_t>(c)].kind == Kind::Shift && std::isfinite(v.upper)) {
                Row row;
                row.rel = Relation::LessEqual;
                row.rhs = v.upper - v.lower;
                row.name = "bound(" + v.name + ")";
                row.entries.push_back({c, 1.0});
                rows_.push_back(std::move(row));
            }
        }
        for (auto& row : rows_) {
            if (row.rhs < 0.0) {
                row.sign = -1.0;
                row.rhs = -row.rhs;
                for (auto& e : row.entries) e.coeff = -e.coeff;
                if (row.rel == Relation::LessEqual) row.rel = Relation::GreaterEqual;
                else if (row.rel == Relation::GreaterEqual) row.rel = Relation::LessEqual;
            }
            row_names_.push_back(row.name);
            rhs_scale_ = std::max(rhs_scale_, row.rhs);
        }
        m_ = static_cast<int>(rows_.size());
    }

    void build_tableau() {
        slack_of_row_.assign(static_cast<size_t>(m_), -1);
        art_of_row_.assign(static_cast<size_t>(m_), -1);
        slack_sign_.assign(static_cast<size_t>(m_), 0.0);
        int next = nstruct_;
        slack_begin_ = next;
        for (int i = 0; i < m_; ++i) {
            const Relation rel = rows_[static_cast<size_t>(i)].rel;
            if (rel == Relation::LessEqual || rel == Relation::GreaterEqual) {
                slack_of_row_[static_cast<size_t>(i)] = next++;
                slack_sign_[static_cast<size_t>(i)] = (rel == Relation::LessEqual) ? 1.0 : -1.0;
            }
        }
        art_begin_ = next;
        for (int i = 0; i < m_; ++i) {
            const Relation rel = rows_[static_cast<size_t>(i)].rel;
            if (rel == Relation::Equal || rel == Relation::GreaterEqual) {
                art_of_row_[static_cast<size_t>(i)] = next++;
                ++n_artificial_;
            }
        }
        ncols_ = next;

        T_.assign(static_cast<size_t>(m_) * (ncols_ + 1), 0.0);
        basis_.assign(static_cast<size_t>(m_), -1);
        for (int i = 0; i < m_; ++i) {
            const Row& row = rows_[static_cast<size_t>(i)];
            for (const auto& e : row.entries) tab(i, e.var) = e.coeff;
            if (slack_of_row_[static_cast<size_t>(i)] >= 0)
                tab(i, slack_of_row_[static_cast<size_t>(i)]) = slack_sign_[static_cast<size_t>(i)];
            if (art_of_row_[static_cast<size_t>(i)] >= 0)
                tab(i, art_of_row_[static_cast<size_t>(i)]) = 1.0;
            tab(i, ncols_) = row.rhs;
            basis_[static_cast<size_t>(i)] =
                (art_of_row_[static_cast<size_t>(i)] >= 0) ? art_of_row_[static_cast<size_t>(i)]
                                                           : slack_of_row_[static_cast<size_t>(i)];
        }
        // Reduced-cost rows for both phases. Initial basic costs are zero in
        // phase 2; in phase 1 the basic artificials cost 1 each.
        cost1_.assign(static_cast<size_t>(ncols_) + 1, 0.0);
        cost2_.assign(static_cast<size_t>(ncols_) + 1, 0.0);
        for (int j = 0; j < nstruct_; ++j) cost2_[static_cast<size_t>(j)] = cint_[static_cast<size_t>(j)];
        for (int j = art_begin_; j < ncols_; ++j) cost1_[static_cast<size_t>(j)] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (art_of_row_[static_cast<size_t>(i)] < 0) continue;
            for (int j = 0; j <= ncols_; ++j) cost1_[static_cast<size_t>(j)] -= tab(i, j);
        }
    }

    void pivot(int r, int s, std::vector<double>& active_cost, std::vector<double>& other_cost) {
        const int w = ncols_ + 1;
        double* prow = &T_[static_cast<size_t>(r) * w];
        const double inv = 1.0 / prow[s];
        for (int j = 0; j < w; ++j) prow[j] *= inv;
        prow[s] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            double* irow = &T_[static_cast<size_t>(i) * w];
            const double f = irow[s];
            if (f == 0.0) continue;
            for (int j = 0; j < w; ++j) irow[j] -= f * prow[j];
            irow[s] = 0.0;
        }
        for (std::vector<double>* cost : {&active_cost, &other_cost}) {
            const double f = (*cost)[static_cast<size_t>(s)];
            if (f == 0.0) continue;
            for (int j = 0; j < w; ++j) (*cost)[static_cast<size_t>(j)] -= f * prow[j];
            (*cost)[static_cast<size_t>(s)] = 0.0;
        }
        basis_[static_cast<size_t>(r)] = s;
        ++iterations_;
    }

    bool column_allowed(int j, bool phase2) const {
        return !(phase2 && j >= art_begin_);
    }

    Pivot optimize(std::vector<double>& cost) {
        const bool phase2 = (&cost == &cost2_);
        std::vector<double>& other = phase2 ? cost1_ : cost2_;
        while (true) {
            if (iterations_ >= opts_.max_iterations) return Pivot::IterationLimit;
            // Entering column.
            int s = -1;
            if (bland_) {
                for (int j = 0; j < ncols_; ++j) {
                    if (!column_allowed(j, phase2)) continue;
                    if (cost[static_cast<size_t>(j)] < -opts_.optimality_tol) { s = j; break; }
                }
            } else {
                double best = -opts_.optimality_tol;
                for (int j = 0; j < ncols_; ++j) {
                    if (!column_allowed(j, phase2)) continue;
                    if (cost[static_cast<size_t>(j)] < best) {
                        best = cost[static_cast<size_t>(j)];
                        s = j;
                    }
                }
            }
            if (s < 0) return Pivot::Optimal;
            // Ratio test; ties resolved toward the smallest basic variable index.
            int r = -1;
            double best_ratio = kInf;
            for (int i = 0; i < m_; ++i) {
                const double a = tab(i, s);
                if (a <= opts_.pivot_tol) continue;
                const double ratio = std::max(0.0, tab(i, ncols_)) / a;
                if (ratio < best_ratio ||
                    (ratio == best_ratio && r >= 0 &&
                     basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(r)])) {
                    best_ratio = ratio;
                    r = i;
                }
            }
            if (r < 0) return Pivot::Unbounded;
            if (best_ratio <= 1e-12) {
                if (++degenerate_streak_ >= opts_.degeneracy_streak_threshold) bland_ = true;
            } else {
                degenerate_streak_ = 0;
                bland_ = false;
            }
            pivot(r, s, cost, other);
        }
    }

    // After phase 1, pivot basic artificials (at level zero) out of the basis
    // wherever a nonzero non-artificial entry exists. Rows with no such entry
    // are redundant and stay pinned at zero.
    void drive_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[static_cast<size_t>(i)] < art_begin_) continue;
            int s = -1;
            for (int j = 0; j < art_begin_; ++j) {
                if (std::fabs(tab(i, j)) > opts_.pivot_tol) { s = j; break; }
            }
            if (s >= 0) pivot(i, s, cost1_, cost2_);
        }
    }

    void extract_ray(LpSolution& sol) const {
        // Recover the improving direction from the last priced column: the
        // entering variable increases while basic variables move by -column.
        // Report it over user variables.
        int s = -1;
        double best = -opts_.optimality_tol;
        for (int j = 0; j < ncols_; ++j) {
            if (j >= art_begin_) continue;
            if (cost2_[static_cast<size_t>(j)] < best) { best = cost2_[static_cast<size_t>(j)]; s = j; }
        }
        if (s < 0) return;
        auto add = [&](int internal_col, double delta) {
            if (internal_col >= nstruct_) return;  // slack direction: not a user variable
            const Column& col = columns_[static_cast<size_t>(internal_col)];
            const auto& name = lp_.variables[static_cast<size_t>(col.user_var)].name;
            double sgn = (col.kind == Kind::Flip || col.kind == Kind::SplitNeg) ? -1.0 : 1.0;
            sol.ray[name] += sgn * delta;
        };
        add(s, 1.0);
        for (int i = 0; i < m_; ++i) add(basis_[static_cast<size_t>(i)], -tab(i, s));
    }

    // Dense LU with partial pivoting; solves B x = b and B^T y = c.
    struct Lu {
        int n = 0;
        std::vector<double> a;  // n x n row-major, factored in place
        std::vector<int> perm;

        void factor(std::vector<double> mat, int dim) {
            n = dim;
            a = std::move(mat);
            perm.resize(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
            for (int k = 0; k < n; ++k) {
                int p = k;
                double best = std::fabs(a[static_cast<size_t>(k) * n + k]);
                for (int i = k + 1; i < n; ++i) {
                    const double v = std::fabs(a[static_cast<size_t>(i) * n + k]);
                    if (v > best) { best = v; p = i; }
                }
                if (best < 1e-13)
                    throw SolverFailure("simplex: singular basis during refactorization");
                if (p != k) {
                    for (int j = 0; j < n; ++j)
                        std::swap(a[static_cast<size_t>(p) * n + j], a[static_cast<size_t>(k) * n + j]);
                    std::swap(perm[static_cast<size_t>(p)], perm[static_cast<size_t>(k)]);
                }
                const double inv = 1.0 / a[static_cast<size_t>(k) * n + k];
                for (int i = k + 1; i < n; ++i) {
                    const double f = a[static_cast<size_t>(i) * n + k] * inv;
                    a[static_cast<size_t>(i) * n + k] = f;
                    if (f == 0.0) continue;
                    for (int j = k + 1; j < n; ++j)
                        a[static_cast<size_t>(i) * n + j] -= f * a[static_cast<size_t>(k) * n + j];
                }
            }
        }
        std::vector<double> solve(const std::vector<double>& b) const {
            std::vector<double> x(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = b[static_cast<size_t>(perm[static_cast<size_t>(i)])];
            for (int i = 1; i < n; ++i) {
                double s = x[static_cast<size_t>(i)];
                for (int j = 0; j < i; ++j) s -= a[static_cast<size_t>(i) * n + j] * x[static_cast<size_t>(j)];
                x[static_cast<size_t>(i)] = s;
            }
            for (int i = n - 1; i >= 0; --i) {
                double s = x[static_cast<size_t>(i)];
                for (int j = i + 1; j < n; ++j) s -= a[static_cast<size_t>(i) * n + j] * x[static_cast<size_t>(j)];
                x[static_cast<size_t>(i)] = s / a[static_cast<size_t>(i) * n + i];
            }
            return x;
        }
        std::vector<double> solve_transposed(const std::vector<double>& c) const {
            // Solve (P A)^T z = c with A = L U: first U^T w = c, then L^T z = w,
            // then y = P^T z.
            std::vector<double> w(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) {
                double s = c[static_cast<size_t>(i)];
                for (int j = 0; j < i; ++j) s -= a[static_cast<size_t>(j) * n + i] * w[static_cast<size_t>(j)];
                w[static_cast<size_t>(i)] = s / a[static_cast<size_t>(i) * n + i];
            }
            for (int i = n - 1; i >= 0; --i) {
                double s = w[static_cast<size_t>(i)];
                for (int j = i + 1; j < n; ++j) s -= a[static_cast<size_t>(j) * n + i] * w[static_cast<size_t>(j)];
                w[static_cast<size_t>(i)] = s;
            }
            std::vector<double> y(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) y[static_cast<size_t>(perm[static_cast<size_t>(i)])] = w[static_cast<size_t>(i)];
            return y;
        }
    };

    void refine_and_extract(LpSolution& sol) {
        // Rebuild the basis matrix column by column from the original rows.
        std::vector<double> B(static_cast<size_t>(m_) * m_, 0.0);
        std::vector<double> cB(static_cast<size_t>(m_), 0.0);
        for (int k = 0; k < m_; ++k) {
            const int col = basis_[static_cast<size_t>(k)];
            if (col < nstruct_) {
                for (int i = 0; i < m_; ++i) {
                    for (const auto& e : rows_[static_cast<size_t>(i)].entries)
                        if (e.var == col) B[static_cast<size_t>(i) * m_ + k] = e.coeff;
                }
                cB[static_cast<size_t>(k)] = cint_[static_cast<size_t>(col)];
            } else if (col < art_begin_) {
                for (int i = 0; i < m_; ++i)
                    if (slack_of_row_[static_cast<size_t>(i)] == col)
                        B[static_cast<size_t>(i) * m_ + k] = slack_sign_[static_cast<size_t>(i)];
            } else {
                for (int i = 0; i < m_; ++i)
                    if (art_of_row_[static_cast<size_t>(i)] == col)
                        B[static_cast<size_t>(i) * m_ + k] = 1.0;
            }
        }
        Lu lu;
        lu.factor(std::move(B), m_);
        std::vector<double> b(static_cast<size_t>(m_));
        for (int i = 0; i < m_; ++i) b[static_cast<size_t>(i)] = rows_[static_cast<size_t>(i)].rhs;
        const std::vector<double> xB = lu.solve(b);
        const std::vector<double> y = lu.solve_transposed(cB);

        std::vector<double> xint(static_cast<size_t>(ncols_), 0.0);
        for (int k = 0; k < m_; ++k)
            xint[static_cast<size_t>(basis_[static_cast<size_t>(k)])] = xB[static_cast<size_t>(k)];

        // Untransform primal values.
        for (size_t j = 0; j < lp_.variables.size(); ++j) {
            const auto& v = lp_.variables[j];
            const int c = first_col_[j];
            double x = 0.0;
            switch (columns_[static_cast<size_t>(c)].kind) {
                case Kind::Shift: x = v.lower + xint[static_cast<size_t>(c)]; break;
                case Kind::Flip: x = v.upper - xint[static_cast<size_t>(c)]; break;
                case Kind::SplitPos:
                    x = xint[static_cast<size_t>(c)] - xint[static_cast<size_t>(c) + 1];
                    break;
                case Kind::SplitNeg: break;
            }
            sol.primal[v.name] = x;
        }
        // Objective from the user data, not the tableau.
        double obj = 0.0;
        for (const auto& v : lp_.variables) obj += v.objective * sol.primal[v.name];
        sol.objective = obj;
        // Duals per user constraint; bound-row duals fold into the dual
        // objective but are not reported by name.
        double dual_obj = objective_shift_;
        for (int i = 0; i < m_; ++i) {
            const Row& row = rows_[static_cast<size_t>(i)];
            dual_obj += y[static_cast<size_t>(i)] * row.rhs;
            if (row.user_constraint >= 0)
                sol.dual[lp_.constraints[static_cast<size_t>(row.user_constraint)].name] =
                    row.sign * y[static_cast<size_t>(i)];
        }
        sol.dual_objective = dual_obj;
        sol.basis = basis_;
        std::sort(sol.basis.begin(), sol.basis.end());
        verify(sol);
    }

    // Sanity net: a solution badly violating its own certificates is a solver
    // failure, not a usable optimum.
    void verify(const LpSolution& sol) const {
        const double tol = 1e4 * opts_.feasibility_tol * std::max(1.0, rhs_scale_);
        for (const auto& v : lp_.variables) {
            const double x = sol.primal.at(v.name);
            if (x < v.lower - tol || x > v.upper + tol)
                throw SolverFailure("simplex: refined solution violates bounds on " + v.name);
        }
        for (const auto& c : lp_.constraints) {
            double lhs = 0.0;
            for (const auto& e : c.row)
                lhs += e.coeff * sol.primal.at(lp_.variables[static_cast<size_t>(e.var)].name);
            const double viol = (c.rel == Relation::LessEqual)    ? lhs - c.rhs
                                : (c.rel == Relation::GreaterEqual) ? c.rhs - lhs
                                                                    : std::fabs(lhs - c.rhs);
            if (viol > tol)
                throw SolverFailure("simplex: refined solution violates row " + c.name);
        }
    }
};

}  // namespace detail

/// Solve to proven optimality; returns primal values, shadow prices, and a
/// status certificate. Pure function of its input.
inline LpSolution solve(const LinearProgram& lp, const SolverOptions& opts = SolverOptions{}) {
    detail::SimplexInstance instance(lp, opts);
    return instance.run();
}

}  // namespace recopt
