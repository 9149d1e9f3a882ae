#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cbwk {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Invalid parameters, violated preconditions on problem sizes or budgets.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Dimension mismatch between vectors/matrices handed to an operation.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Arm index outside [0, K).
class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

inline void require_shape(bool ok, const std::string& what) {
    if (!ok) throw ShapeError(what);
}

/// T rounds, budget B shared by d resources, K arms.
struct ProblemInstance {
    int T = 1;
    double B = 1.0;
    int d = 1;
    int K = 2;

    double budget_rate() const { return B / static_cast<double>(T); }

    void validate() const {
        if (T < 1) throw ConfigError("T >= 1 violated");
        if (!(B >= 1.0)) throw ConfigError("B >= 1 violated");
        if (B > static_cast<double>(T)) throw ConfigError("B <= T violated");
        if (d < 1) throw ConfigError("d >= 1 violated");
        if (K < 2) throw ConfigError("K >= 2 violated");
    }
};

/// Realized reward and d-dimensional consumption of one pull.
struct RoundOutcome {
    double reward = 0.0;
    VectorXd cost;
};

}  // namespace cbwk
