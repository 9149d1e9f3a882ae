#pragma once

#include "cbwk/rng.hpp"
#include "cbwk/types.hpp"

#include <chrono>
#include <vector>

namespace cbwk {

enum class Link { Identity, Logistic };

/// Per-arm feature vectors for one round, one column per arm.
/// `reward` feeds the reward model and `cost` the cost model; in the linear
/// replication environment both are the same matrix.
struct ArmFeatures {
    MatrixXd reward;  // m1 x K
    MatrixXd cost;    // m2 x K

    Index arms() const { return reward.cols(); }
};

/// Generative model of a CBwK instance.
///
/// Contexts are drawn uniformly from `contexts` (a single entry is the
/// fixed-context setting). Expected outcomes are link(<theta, phi>); realized
/// outcomes add Gaussian noise (identity link) or are Bernoulli draws
/// (logistic link). With `bounded` set, realized outcomes are clipped to
/// [0, 1]. With `null_arm` set, arm K-1 yields zero reward and zero cost.
struct EnvironmentSpec {
    ProblemInstance instance;
    Link link = Link::Identity;
    VectorXd reward_param;  // m1
    MatrixXd cost_param;    // m2 x d, column j is the parameter of resource j
    std::vector<ArmFeatures> contexts;
    double noise_variance = 0.0;
    bool bounded = false;
    bool null_arm = false;
    double feature_bound = 1.0;

    Index reward_dim() const { return reward_param.size(); }
    Index cost_dim() const { return cost_param.rows(); }
    bool fixed_context() const { return contexts.size() == 1; }

    /// Throws ConfigError on any inconsistency.
    void validate() const;
};

/// Fixed-context linear environment used by the scaling experiments: arm a
/// has features e_1/sqrt(2) + e_{a+1}.
/// Requires 4 <= d <= m-1 and 2 <= K <= m-1.
EnvironmentSpec make_basis_env(int m, int K, int d, double noise_variance, int T = 2000,
                               double B = 2000.0);

/// Generalized linear environment with Bernoulli outcomes. All parameter
/// columns and all context features must lie in the unit ball.
EnvironmentSpec make_glm_env(const ProblemInstance& instance, const VectorXd& reward_param,
                             const MatrixXd& cost_param, std::vector<ArmFeatures> contexts,
                             Link link = Link::Logistic);

double apply_link(Link link, double z);
double link_derivative(Link link, double z);

const ArmFeatures& draw_context(const EnvironmentSpec& env, Rng& rng);

double expected_reward(const EnvironmentSpec& env, const ArmFeatures& features, Index arm);
VectorXd expected_cost(const EnvironmentSpec& env, const ArmFeatures& features, Index arm);

RoundOutcome sample_outcome(const EnvironmentSpec& env, const ArmFeatures& features, Index arm,
                            Rng& rng);

/// One round of a policy run. Prediction fields are empty for rounds where
/// the policy does not predict (forced exploration).
struct RoundRecord {
    VectorXd reward_pred;  // K
    MatrixXd cost_pred;    // K x d
    VectorXd lambda;       // d
    VectorXd scores;       // K
    VectorXd probs;        // K
    Index arm = 0;
    RoundOutcome outcome;
};

struct RunTrace {
    std::vector<RoundRecord> rounds;
    std::vector<ArmFeatures> features;  // only filled when full recording is requested
    int tau = 0;
    double total_reward = 0.0;
    VectorXd cumulative_cost;
    std::chrono::nanoseconds duration{0};
    bool aborted = false;  // budget ran out before adaptive play started
    int exploration_rounds = 0;
    long reward_oracle_updates = 0;
    int reinitializations = 0;
    double radius = 0.0;  // dual radius used by the adaptive phase
};

/// T * opt_per_round minus the reward collected up to the stopping time.
double realized_regret(const RunTrace& trace, double opt_per_round, int T);

}  // namespace cbwk
