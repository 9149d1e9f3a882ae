#pragma once

#include "cbwk/types.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace cbwk {

/// maximize c'x  subject to  A x <= b,  E x = f,  x >= 0.
template <typename Scalar>
struct LpProblem {
    Vec<Scalar> objective;
    Mat<Scalar> ineq_lhs;
    Vec<Scalar> ineq_rhs;
    Mat<Scalar> eq_lhs;
    Vec<Scalar> eq_rhs;

    explicit LpProblem(Index n = 0)
        : objective(Vec<Scalar>::Zero(n)), ineq_lhs(0, n), ineq_rhs(0), eq_lhs(0, n), eq_rhs(0) {}

    Index variables() const { return objective.size(); }
    Index inequalities() const { return ineq_lhs.rows(); }
    Index equalities() const { return eq_lhs.rows(); }

    void add_inequality(const Vec<Scalar>& row, Scalar rhs) { append(ineq_lhs, ineq_rhs, row, rhs); }
    void add_equality(const Vec<Scalar>& row, Scalar rhs) { append(eq_lhs, eq_rhs, row, rhs); }

    void validate() const {
        const Index n = variables();
        require_shape(ineq_lhs.cols() == n && ineq_lhs.rows() == ineq_rhs.size(),
                      "inequality system shape mismatch");
        require_shape(eq_lhs.cols() == n && eq_lhs.rows() == eq_rhs.size(),
                      "equality system shape mismatch");
        const bool finite = objective.allFinite() && ineq_lhs.allFinite() && ineq_rhs.allFinite() &&
                            eq_lhs.allFinite() && eq_rhs.allFinite();
        if (!finite) throw ConfigError("LP data must be finite");
    }

private:
    static void append(Mat<Scalar>& lhs, Vec<Scalar>& rhs, const Vec<Scalar>& row, Scalar value) {
        require_shape(row.size() == lhs.cols(), "constraint row length != variable count");
        lhs.conservativeResize(lhs.rows() + 1, Eigen::NoChange);
        lhs.row(lhs.rows() - 1) = row.transpose();
        rhs.conservativeResize(rhs.size() + 1);
        rhs(rhs.size() - 1) = value;
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

template <typename Scalar>
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Scalar value = Scalar(0);
    Vec<Scalar> x;
    // Multipliers of the inequality rows followed by the equality rows.
    Vec<Scalar> duals;
    long iterations = 0;

    bool optimal() const { return status == LpStatus::Optimal; }
};

struct SimplexOptions {
    double pivot_tolerance = 1e-9;
    long max_iterations = 1'000'000;
};

namespace detail {

// Dense tableau: rows 0..m-1 are constraints, the last column is the rhs.
template <typename Scalar>
class Tableau {
public:
    Mat<Scalar> t;
    std::vector<Index> basis;
    Scalar tol;
    long iterations = 0;
    long max_iterations;

    void pivot(Index r, Index col) {
        t.row(r) /= t(r, col);
        for (Index i = 0; i < t.rows(); ++i) {
            if (i == r) continue;
            const Scalar f = t(i, col);
            if (f != Scalar(0)) t.row(i) -= f * t.row(r);
        }
        basis[static_cast<std::size_t>(r)] = col;
        ++iterations;
    }

    // Maximizes cost'x over the columns flagged in `allowed`. Bland's rule for
    // both the entering column and ties in the ratio test.
    LpStatus optimize(const Vec<Scalar>& cost, const std::vector<bool>& allowed) {
        const Index m = t.rows();
        const Index ncols = t.cols() - 1;
        while (true) {
            if (iterations >= max_iterations) return LpStatus::IterationLimit;
            Vec<Scalar> cb(m);
            for (Index i = 0; i < m; ++i) cb(i) = cost(basis[static_cast<std::size_t>(i)]);
            Index enter = -1;
            for (Index j = 0; j < ncols; ++j) {
                if (!allowed[static_cast<std::size_t>(j)]) continue;
                const Scalar reduced = cost(j) - cb.dot(t.col(j));
                if (reduced > tol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return LpStatus::Optimal;

            Index leave = -1;
            Scalar best = std::numeric_limits<Scalar>::infinity();
            for (Index i = 0; i < m; ++i) {
                const Scalar a = t(i, enter);
                if (a <= tol) continue;
                const Scalar ratio = t(i, ncols) / a;
                if (leave < 0 || ratio < best - tol ||
                    (ratio <= best + tol &&
                     basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                    best = std::min(best, ratio);
                    leave = i;
                }
            }
            if (leave < 0) return LpStatus::Unbounded;
            pivot(leave, enter);
        }
    }
};

}  // namespace detail

/// Two-phase primal simplex with Bland's anti-cycling rule.
template <typename Scalar>
LpSolution<Scalar> solve_lp(const LpProblem<Scalar>& problem, const SimplexOptions& opts = {}) {
    problem.validate();
    const Index n = problem.variables();
    const Index p = problem.inequalities();
    const Index q = problem.equalities();
    const Index m = p + q;

    // Columns: [x (n) | slacks (p) | artificials (m)] then rhs.
    const Index slack0 = n;
    const Index art0 = n + p;
    const Index total = n + p + m;

    detail::Tableau<Scalar> tab;
    tab.tol = static_cast<Scalar>(opts.pivot_tolerance);
    tab.max_iterations = opts.max_iterations;
    tab.t = Mat<Scalar>::Zero(m, total + 1);
    tab.basis.assign(static_cast<std::size_t>(m), -1);

    for (Index i = 0; i < p; ++i) {
        tab.t.row(i).head(n) = problem.ineq_lhs.row(i);
        tab.t(i, slack0 + i) = Scalar(1);
        tab.t(i, total) = problem.ineq_rhs(i);
    }
    for (Index i = 0; i < q; ++i) {
        tab.t.row(p + i).head(n) = problem.eq_lhs.row(i);
        tab.t(p + i, total) = problem.eq_rhs(i);
    }
    std::vector<bool> needs_art(static_cast<std::size_t>(m), false);
    for (Index i = 0; i < m; ++i) {
        if (tab.t(i, total) < Scalar(0)) tab.t.row(i) *= Scalar(-1);
        if (i < p && tab.t(i, slack0 + i) > Scalar(0)) {
            tab.basis[static_cast<std::size_t>(i)] = slack0 + i;
        } else {
            tab.t(i, art0 + i) = Scalar(1);
            tab.basis[static_cast<std::size_t>(i)] = art0 + i;
            needs_art[static_cast<std::size_t>(i)] = true;
        }
    }

    LpSolution<Scalar> sol;
    std::vector<bool> allowed(static_cast<std::size_t>(total), true);
    for (Index i = 0; i < m; ++i)
        if (!needs_art[static_cast<std::size_t>(i)]) allowed[static_cast<std::size_t>(art0 + i)] = false;

    // Phase one: maximize -(sum of artificials).
    Vec<Scalar> phase1 = Vec<Scalar>::Zero(total);
    bool any_art = false;
    for (Index i = 0; i < m; ++i)
        if (needs_art[static_cast<std::size_t>(i)]) {
            phase1(art0 + i) = Scalar(-1);
            any_art = true;
        }
    if (any_art) {
        const LpStatus s1 = tab.optimize(phase1, allowed);
        sol.iterations = tab.iterations;
        if (s1 == LpStatus::IterationLimit) {
            sol.status = s1;
            return sol;
        }
        Scalar infeas = Scalar(0);
        for (Index i = 0; i < m; ++i)
            if (tab.basis[static_cast<std::size_t>(i)] >= art0) infeas += tab.t(i, total);
        const Scalar scale = std::max<Scalar>(Scalar(1), problem.ineq_rhs.cwiseAbs().sum() +
                                                             problem.eq_rhs.cwiseAbs().sum());
        if (infeas > Scalar(1e3) * tab.tol * scale) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
    }

    // Drive zero-level artificials out of the basis; rows that cannot be
    // pivoted are redundant and are removed.
    std::vector<bool> row_active(static_cast<std::size_t>(m), true);
    for (Index i = 0; i < m; ++i) {
        if (tab.basis[static_cast<std::size_t>(i)] < art0) continue;
        Index col = -1;
        for (Index j = 0; j < art0; ++j)
            if (std::abs(tab.t(i, j)) > tab.tol) {
                col = j;
                break;
            }
        if (col >= 0) {
            tab.pivot(i, col);
        } else {
            row_active[static_cast<std::size_t>(i)] = false;
        }
    }
    std::vector<Index> keep;
    for (Index i = 0; i < m; ++i)
        if (row_active[static_cast<std::size_t>(i)]) keep.push_back(i);
    if (static_cast<Index>(keep.size()) != m) {
        Mat<Scalar> reduced(static_cast<Index>(keep.size()), total + 1);
        std::vector<Index> basis;
        for (std::size_t k = 0; k < keep.size(); ++k) {
            reduced.row(static_cast<Index>(k)) = tab.t.row(keep[k]);
            basis.push_back(tab.basis[static_cast<std::size_t>(keep[k])]);
        }
        tab.t = std::move(reduced);
        tab.basis = std::move(basis);
    }
    for (Index j = art0; j < total; ++j) allowed[static_cast<std::size_t>(j)] = false;

    Vec<Scalar> phase2 = Vec<Scalar>::Zero(total);
    phase2.head(n) = problem.objective;
    const LpStatus s2 = tab.optimize(phase2, allowed);
    sol.iterations = tab.iterations;
    sol.status = s2;
    if (s2 != LpStatus::Optimal) return sol;

    sol.x = Vec<Scalar>::Zero(n);
    for (std::size_t i = 0; i < tab.basis.size(); ++i)
        if (tab.basis[i] < n) sol.x(tab.basis[i]) = std::max(Scalar(0), tab.t(static_cast<Index>(i), total));
    sol.value = problem.objective.dot(sol.x);

    // Duals from the optimal basis of the original (unflipped) system:
    // B' y = c_B over the active rows.
    const Index r = static_cast<Index>(keep.size());
    sol.duals = Vec<Scalar>::Zero(m);
    if (r > 0) {
        Mat<Scalar> basis_mat = Mat<Scalar>::Zero(r, r);
        Vec<Scalar> cb(r);
        for (Index k = 0; k < r; ++k) {
            const Index col = tab.basis[static_cast<std::size_t>(k)];
            cb(k) = col < n ? problem.objective(col) : Scalar(0);
            for (Index row = 0; row < r; ++row) {
                const Index orig = keep[static_cast<std::size_t>(row)];
                Scalar v;
                if (col < n) {
                    v = orig < p ? problem.ineq_lhs(orig, col) : problem.eq_lhs(orig - p, col);
                } else {
                    v = (col - slack0 == orig) ? Scalar(1) : Scalar(0);
                }
                basis_mat(row, k) = v;
            }
        }
        const Vec<Scalar> y = basis_mat.transpose().fullPivLu().solve(cb);
        for (Index row = 0; row < r; ++row) sol.duals(keep[static_cast<std::size_t>(row)]) = y(row);
    }
    return sol;
}

/// Largest violation of A x <= b, E x = f, x >= 0.
template <typename Scalar>
Scalar constraint_violation(const LpProblem<Scalar>& problem, const Vec<Scalar>& x) {
    Scalar worst = std::max(Scalar(0), -x.minCoeff());
    if (problem.inequalities() > 0)
        worst = std::max(worst, (problem.ineq_lhs * x - problem.ineq_rhs).maxCoeff());
    if (problem.equalities() > 0)
        worst = std::max(worst, (problem.eq_lhs * x - problem.eq_rhs).cwiseAbs().maxCoeff());
    return worst;
}

/// Largest complementary-slackness product |x_j * reduced_j|, |slack_i * y_i|.
template <typename Scalar>
Scalar complementary_slackness_residual(const LpProblem<Scalar>& problem,
                                        const LpSolution<Scalar>& sol) {
    const Index p = problem.inequalities();
    const Index q = problem.equalities();
    Vec<Scalar> y_ineq = sol.duals.head(p);
    Vec<Scalar> y_eq = sol.duals.tail(q);
    Vec<Scalar> reduced = problem.objective;
    if (p > 0) reduced -= problem.ineq_lhs.transpose() * y_ineq;
    if (q > 0) reduced -= problem.eq_lhs.transpose() * y_eq;
    Scalar worst = reduced.cwiseProduct(sol.x).cwiseAbs().maxCoeff();
    if (p > 0) {
        const Vec<Scalar> slack = problem.ineq_rhs - problem.ineq_lhs * sol.x;
        worst = std::max(worst, slack.cwiseProduct(y_ineq).cwiseAbs().maxCoeff());
    }
    return worst;
}

/// Per-round optimum of the static relaxation when the context is a point
/// mass: maximize p'f over the simplex subject to sum_a p_a g_a <= rate.
/// `costs` is K x d. Returns nullopt when the program is infeasible.
template <typename Scalar>
std::optional<Scalar> exact_opt_fixed_context(const Vec<Scalar>& rewards, const Mat<Scalar>& costs,
                                              Scalar budget_rate) {
    require_shape(costs.rows() == rewards.size(), "cost rows != number of arms");
    const Index K = rewards.size();
    LpProblem<Scalar> lp(K);
    lp.objective = rewards;
    for (Index j = 0; j < costs.cols(); ++j) lp.add_inequality(costs.col(j), budget_rate);
    lp.add_equality(Vec<Scalar>::Ones(K), Scalar(1));
    const auto sol = solve_lp(lp);
    if (!sol.optimal()) return std::nullopt;
    return sol.value;
}

}  // namespace cbwk
