#pragma once

#include "cbwk/types.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <optional>
#include <vector>

namespace cbwk {

// Independent reference for the fixed-context static program. Evaluates the
// objective on a regular grid over the simplex and on every vertex of the
// feasible polytope, obtained by intersecting K-1 of the K + d inequality
// hyperplanes with the simplex equality. No pivoting is involved.
//
// Returns nullopt when no candidate point is feasible.
inline std::optional<double> brute_force_opt(const VectorXd& rewards, const MatrixXd& costs,
                                             double budget_rate, int grid_resolution = 20) {
    const Index K = rewards.size();
    const Index d = costs.cols();
    require_shape(costs.rows() == K, "cost rows != number of arms");
    if (K > 3 || d > 2) throw ConfigError("brute_force_opt supports K <= 3 and d <= 2 only");
    if (grid_resolution < 1) throw ConfigError("grid resolution must be positive");

    constexpr double feas_tol = 1e-9;
    std::optional<double> best;
    auto consider = [&](const VectorXd& p) {
        if (p.minCoeff() < -feas_tol) return;
        if (std::abs(p.sum() - 1.0) > feas_tol) return;
        for (Index j = 0; j < d; ++j)
            if (costs.col(j).dot(p) > budget_rate + feas_tol) return;
        const double v = rewards.dot(p);
        if (!best || v > *best) best = v;
    };

    // Grid points p = counts / resolution.
    const int n = grid_resolution;
    if (K == 1) {
        consider(VectorXd::Ones(1));
    } else if (K == 2) {
        for (int i = 0; i <= n; ++i) {
            VectorXd p(2);
            p << double(i) / n, double(n - i) / n;
            consider(p);
        }
    } else {
        for (int i = 0; i <= n; ++i)
            for (int j = 0; i + j <= n; ++j) {
                VectorXd p(3);
                p << double(i) / n, double(j) / n, double(n - i - j) / n;
                consider(p);
            }
    }

    // Hyperplanes: rows 0..K-1 are p_a = 0, rows K..K+d-1 are g_j'p = rate.
    const Index h = K + d;
    MatrixXd planes = MatrixXd::Zero(h, K);
    VectorXd rhs = VectorXd::Zero(h);
    planes.topRows(K).setIdentity();
    for (Index j = 0; j < d; ++j) {
        planes.row(K + j) = costs.col(j).transpose();
        rhs(K + j) = budget_rate;
    }
    const Index pick = K - 1;
    std::vector<bool> mask(static_cast<std::size_t>(h), false);
    std::fill(mask.begin(), mask.begin() + pick, true);
    do {
        MatrixXd sys(K, K);
        VectorXd b(K);
        sys.row(0).setOnes();
        b(0) = 1.0;
        Index r = 1;
        for (Index k = 0; k < h; ++k)
            if (mask[static_cast<std::size_t>(k)]) {
                sys.row(r) = planes.row(k);
                b(r) = rhs(k);
                ++r;
            }
        Eigen::FullPivLU<MatrixXd> lu(sys);
        if (lu.rank() < K) continue;
        consider(lu.solve(b));
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return best;
}

}  // namespace cbwk
