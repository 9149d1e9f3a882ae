#pragma once

#include "cbwk/policy.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace cbwk {

/// The empirical program over the exploration contexts has no feasible point.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class T0Family { Linear, Nonparametric };
enum class FillerPull { Auto, NullArm, UniformRandom };

struct TwoStageConfig {
    std::optional<int> t0;          // exploration rounds per arm
    double error_constant = 1.0;    // leading constant of the estimation-error rates
    FillerPull filler = FillerPull::Auto;
};

/// Exploration length per arm: ceil((m d)^{1/3} sqrt(T/K)) for linear
/// classes, ceil(d^{(2+p)/(6+2p)} K^{-1/(2+p)} T^{(1+p)/(2+p)}) for
/// nonparametric ones. Throws ConfigError when (K+1) T0 >= T.
int t0_default(T0Family family, double m, double d, double K, double T, double p = 1.0);

/// sqrt(K (E_F + d E_G) + 4 log(T d) / T0).
double m_t0(double T0, double K, double d, double err_f, double err_g, double T);

/// Online-to-batch estimation errors at confidence 1/T:
/// constant * Reg(T0) * log(T) / T0 for reward and cost rates.
struct EstimationErrors {
    double reward = 0.0;
    double cost = 0.0;
};
EstimationErrors estimation_errors(const OracleBoundSpec& bounds, double T0, double T);

/// Data gathered by the exploration phase.
struct ExplorationData {
    std::vector<MatrixXd> reward_features;  // per arm, m1 x T0
    std::vector<VectorXd> rewards;          // per arm, T0
    std::vector<MatrixXd> cost_features;    // per arm, m2 x T0
    std::vector<MatrixXd> costs;            // per arm, T0 x d
    std::vector<ArmFeatures> contexts;      // the last T0 rounds
    VectorXd consumed;
    bool aborted = false;
};

/// Pulls every arm T0 times in order, then T0 filler rounds whose contexts
/// are kept. Appends the rounds to `trace`; stops early (aborted) if some
/// resource reaches B - 1.
ExplorationData explore(const EnvironmentSpec& env, int T0, FillerPull filler, Rng& rng,
                        RunTrace& trace);

/// Optimal value of the relaxed program over (simplex)^T0:
/// max (1/T0) sum_t sum_a p_ta f_ta  s.t.  (1/T0) sum_t sum_a p_ta g_ta <= rate + 2 M.
/// `reward_hat` is T0 x K; `cost_hat[t]` is K x d.
double empirical_opt(const MatrixXd& reward_hat, const std::vector<MatrixXd>& cost_hat,
                     double budget_rate, double m_radius);

/// Z = (T / B) (opt_hat + M).
inline double z_estimate(double opt_hat, double m_radius, double T, double B) {
    return (T / B) * (opt_hat + m_radius);
}

struct TwoStageResult {
    RunTrace trace;
    int t0 = 0;
    double opt_hat = 0.0;
    double m_radius = 0.0;
    double z = 0.0;
    bool precondition_met = true;  // B > max{(K+2) T0, T M}
};

/// Exploration, estimation of the dual radius and SquareCBwK on the rest.
/// The exploration and estimation steps alone are `run_twostage_phase_one`.
TwoStageResult run_twostage(const EnvironmentSpec& env, const TwoStageConfig& ts,
                            const PolicyConfig& policy, Rng& rng);
TwoStageResult run_twostage_phase_one(const EnvironmentSpec& env, const TwoStageConfig& ts,
                                      const PolicyConfig& policy, Rng& rng);

}  // namespace cbwk
