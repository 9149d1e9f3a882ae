#pragma once

#include "cbwk/dual.hpp"
#include "cbwk/environment.hpp"

#include <optional>

namespace cbwk {

/// Ridge-regression confidence ellipsoid for one feature map, shared by all
/// targets that use that map (reward, or the d cost coordinates).
class RidgeEllipsoid {
public:
    RidgeEllipsoid(Index dim, Index targets, double ridge = 1.0);

    Index dim() const { return v_inv_.rows(); }
    /// Column k is the ridge estimate of target k.
    const MatrixXd& estimates() const { return theta_; }
    const MatrixXd& covariance_inverse() const { return v_inv_; }

    /// sqrt(phi' V^{-1} phi).
    double width(const VectorXd& phi) const;
    void update(const VectorXd& phi, const VectorXd& targets);

private:
    MatrixXd v_inv_;
    MatrixXd moment_;  // sum of phi * y', dim x targets
    MatrixXd theta_;
};

struct LinUcbConfig {
    double multiplier = 1.0;       // scales beta_t = sqrt(m log(1 + t))
    std::optional<double> radius;  // dual radius, default T/B
    bool record_features = false;
};

/// Optimistic reward, optimistic (lower-bound) cost, same dual prices and
/// stopping rule as SquareCBwK. Picks argmax of UCB_r + lambda'(B/T - LCB_c).
RunTrace run_linucb(const EnvironmentSpec& env, const LinUcbConfig& config, Rng& rng);

}  // namespace cbwk
