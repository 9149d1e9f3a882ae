#pragma once

#include "cbwk/dual.hpp"
#include "cbwk/environment.hpp"
#include "cbwk/oracles.hpp"

#include <cmath>
#include <optional>

namespace cbwk {

struct PolicyConfig {
    OracleKind oracle = OracleKind::GlmtronNewton;
    double eta_scale = 1.0;       // OGD step multiplier
    double bound_constant = 1.0;  // leading constant of the oracle regret rates
    std::optional<double> gamma;  // overrides the default exploration parameter
    std::optional<double> radius; // dual radius Z, default T/B
    bool record_features = false;

    void validate() const;
};

/// sqrt(K T / (Reg_r + (Z + 1)^2 Reg_c + 4 log(2T))).
inline double gamma_default(double K, double T, double reward_rate, double cost_rate, double Z) {
    const double denom = reward_rate + (Z + 1.0) * (Z + 1.0) * cost_rate + 4.0 * std::log(2.0 * T);
    return std::sqrt(K * T / denom);
}

inline double gamma_default(double K, double T, const OracleBoundSpec& bounds, double Z) {
    return gamma_default(K, T, bounds.reward_rate(T), bounds.cost_rate(T), Z);
}

/// score_a = r_a + <lambda, rate * 1 - c_a>.
template <typename Scalar>
Vec<Scalar> lagrangian_scores(const Vec<Scalar>& reward_pred, const Mat<Scalar>& cost_pred,
                              const Vec<Scalar>& lambda, Scalar budget_rate) {
    require_shape(cost_pred.rows() == reward_pred.size(), "cost prediction rows != K");
    require_shape(cost_pred.cols() == lambda.size(), "cost prediction columns != d");
    Vec<Scalar> scores = reward_pred - cost_pred * lambda;
    scores.array() += budget_rate * lambda.sum();
    return scores;
}

/// First index attaining the maximum.
template <typename Derived>
Index argmax_lowest(const Eigen::MatrixBase<Derived>& v) {
    Index best = 0;
    for (Index i = 1; i < v.size(); ++i)
        if (v(i) > v(best)) best = i;
    return best;
}

/// Inverse-gap weighting: p_a = 1 / (K + gamma (s_b - s_a)) off the greedy
/// arm b, remaining mass on b.
template <typename Scalar>
Vec<Scalar> igw_distribution(const Vec<Scalar>& scores, Scalar gamma) {
    const Index K = scores.size();
    require_shape(K >= 1, "empty score vector");
    const Index b = argmax_lowest(scores);
    Vec<Scalar> p(K);
    Scalar rest = Scalar(0);
    for (Index a = 0; a < K; ++a) {
        if (a == b) continue;
        p(a) = Scalar(1) / (static_cast<Scalar>(K) + gamma * (scores(b) - scores(a)));
        rest += p(a);
    }
    p(b) = Scalar(1) - rest;
    return p;
}

/// Inverse-CDF draw from a probability vector.
Index sample_arm(const VectorXd& probs, Rng& rng);

/// Algorithm state shared by the plain run and the adaptive phase of the
/// two-stage variant: oracles are fresh, the dual has radius Z.
struct AdaptivePhase {
    int horizon = 0;       // rounds available to this phase
    double budget = 0.0;   // budget available to this phase
    double radius = 0.0;   // Z
    double gamma = 0.0;
};

/// Runs the adaptive loop, appending to `trace`; cumulative cost in the trace
/// counts everything spent so far, the exit test uses this phase's budget.
void run_adaptive_phase(const EnvironmentSpec& env, const PolicyConfig& config,
                        const AdaptivePhase& phase, Rng& rng, RunTrace& trace);

/// Default exploration parameter for `config` over `horizon` rounds.
double policy_gamma(const EnvironmentSpec& env, const PolicyConfig& config, double horizon,
                    double radius);

RunTrace run_squarecbwk(const EnvironmentSpec& env, const PolicyConfig& config, Rng& rng);

}  // namespace cbwk
