#include "cbwk/twostage.hpp"

#include "cbwk/lp.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace cbwk {

int t0_default(T0Family family, double m, double d, double K, double T, double p) {
    if (!(m > 0 && d > 0 && K > 0 && T > 0 && p > 0))
        throw ConfigError("exploration length parameters must be positive");
    double raw;
    if (family == T0Family::Linear) {
        raw = std::cbrt(m * d) * std::sqrt(T / K);
    } else {
        raw = std::pow(d, (2.0 + p) / (6.0 + 2.0 * p)) * std::pow(K, -1.0 / (2.0 + p)) *
              std::pow(T, (1.0 + p) / (2.0 + p));
    }
    const int t0 = static_cast<int>(std::ceil(raw - 1e-9));
    if ((K + 1.0) * t0 >= T)
        throw ConfigError("(K+1) T0 = " + std::to_string(int((K + 1) * t0)) + " >= T = " +
                          std::to_string(int(T)) + "; use a smaller T0 or a larger T");
    return t0;
}

double m_t0(double T0, double K, double d, double err_f, double err_g, double T) {
    return std::sqrt(K * (err_f + d * err_g) + 4.0 * std::log(T * d) / T0);
}

EstimationErrors estimation_errors(const OracleBoundSpec& bounds, double T0, double T) {
    const double conf = std::log(T);
    return {bounds.reward_rate(T0) * conf / T0, bounds.cost_rate(T0) * conf / T0};
}

ExplorationData explore(const EnvironmentSpec& env, int T0, FillerPull filler, Rng& rng,
                        RunTrace& trace) {
    const int K = env.instance.K;
    const int d = env.instance.d;
    if (T0 < 1) throw ConfigError("T0 >= 1 violated");
    if ((K + 1) * T0 > env.instance.T) throw ConfigError("(K+1) T0 <= T violated");
    if (filler == FillerPull::Auto) filler = env.null_arm ? FillerPull::NullArm : FillerPull::UniformRandom;
    if (filler == FillerPull::NullArm && !env.null_arm)
        throw ConfigError("null-arm filler requested but the environment has no null arm");

    ExplorationData data;
    data.consumed = VectorXd::Zero(d);
    if (trace.cumulative_cost.size() != d) trace.cumulative_cost = VectorXd::Zero(d);

    auto play = [&](const ArmFeatures& ctx, Index arm, const VectorXd& probs) {
        RoundRecord rec;
        rec.arm = arm;
        rec.probs = probs;
        rec.outcome = sample_outcome(env, ctx, arm, rng);
        trace.total_reward += rec.outcome.reward;
        trace.cumulative_cost += rec.outcome.cost;
        data.consumed += rec.outcome.cost;
        ++trace.tau;
        ++trace.exploration_rounds;
        const RoundOutcome out = rec.outcome;
        trace.rounds.push_back(std::move(rec));
        if ((data.consumed.array() >= env.instance.B - 1.0).any()) data.aborted = true;
        return out;
    };

    for (int a = 0; a < K && !data.aborted; ++a) {
        MatrixXd rf(env.reward_dim(), T0), cf(env.cost_dim(), T0), c(T0, d);
        VectorXd r(T0);
        const VectorXd onehot = VectorXd::Unit(K, a);
        int n = 0;
        for (; n < T0; ++n) {
            const ArmFeatures& ctx = draw_context(env, rng);
            const RoundOutcome out = play(ctx, a, onehot);
            rf.col(n) = ctx.reward.col(a);
            cf.col(n) = ctx.cost.col(a);
            r(n) = out.reward;
            c.row(n) = out.cost.transpose();
            if (data.aborted) {
                ++n;
                break;
            }
        }
        data.reward_features.push_back(rf.leftCols(n));
        data.rewards.push_back(r.head(n));
        data.cost_features.push_back(cf.leftCols(n));
        data.costs.push_back(c.topRows(n));
    }

    const VectorXd uniform = VectorXd::Constant(K, 1.0 / K);
    for (int t = 0; t < T0 && !data.aborted; ++t) {
        const ArmFeatures& ctx = draw_context(env, rng);
        data.contexts.push_back(ctx);
        if (filler == FillerPull::NullArm) {
            play(ctx, K - 1, VectorXd::Unit(K, K - 1));
        } else {
            play(ctx, sample_arm(uniform, rng), uniform);
        }
    }
    if (data.aborted) trace.aborted = true;
    return data;
}

double empirical_opt(const MatrixXd& reward_hat, const std::vector<MatrixXd>& cost_hat,
                     double budget_rate, double m_radius) {
    const Index T0 = reward_hat.rows();
    const Index K = reward_hat.cols();
    if (T0 < 1) throw ConfigError("empirical program needs T0 >= 1 contexts");
    require_shape(static_cast<Index>(cost_hat.size()) == T0, "cost predictions per context != T0");
    const Index d = cost_hat.front().cols();

    LpProblem<double> lp(T0 * K);
    const double w = 1.0 / static_cast<double>(T0);
    for (Index t = 0; t < T0; ++t) {
        require_shape(cost_hat[static_cast<std::size_t>(t)].rows() == K &&
                          cost_hat[static_cast<std::size_t>(t)].cols() == d,
                      "cost prediction block must be K x d");
        lp.objective.segment(t * K, K) = w * reward_hat.row(t).transpose();
    }
    for (Index j = 0; j < d; ++j) {
        VectorXd row(T0 * K);
        for (Index t = 0; t < T0; ++t) row.segment(t * K, K) = w * cost_hat[static_cast<std::size_t>(t)].col(j);
        lp.add_inequality(row, budget_rate + 2.0 * m_radius);
    }
    for (Index t = 0; t < T0; ++t) {
        VectorXd row = VectorXd::Zero(T0 * K);
        row.segment(t * K, K).setOnes();
        lp.add_equality(row, 1.0);
    }
    const auto sol = solve_lp(lp);
    if (sol.status == LpStatus::Infeasible)
        throw InfeasibleError("empirical program is infeasible; the environment lacks a cheap enough arm");
    if (!sol.optimal()) throw std::runtime_error("empirical program: simplex did not reach optimality");
    return sol.value;
}

TwoStageResult run_twostage_phase_one(const EnvironmentSpec& env, const TwoStageConfig& ts,
                                      const PolicyConfig& policy, Rng& rng) {
    env.validate();
    policy.validate();
    const auto& inst = env.instance;
    const int K = inst.K;
    const int d = inst.d;

    TwoStageResult res;
    res.trace.cumulative_cost = VectorXd::Zero(d);
    res.t0 = ts.t0 ? *ts.t0
                   : t0_default(T0Family::Linear, double(env.reward_dim()), d, K, inst.T);
    if (res.t0 < 1 || (K + 1) * res.t0 > inst.T) throw ConfigError("(K+1) T0 <= T violated");

    ExplorationData data = explore(env, res.t0, ts.filler, rng, res.trace);
    if (data.aborted) return res;

    std::vector<BatchPredictor<double>> f_hat;
    std::vector<std::vector<BatchPredictor<double>>> g_hat(static_cast<std::size_t>(K));
    for (int a = 0; a < K; ++a) {
        const auto ia = static_cast<std::size_t>(a);
        f_hat.push_back(otb_convert<double>(policy.oracle, data.reward_features[ia], data.rewards[ia],
                                            env.link, policy.eta_scale));
        for (int j = 0; j < d; ++j)
            g_hat[ia].push_back(otb_convert<double>(policy.oracle, data.cost_features[ia],
                                                    data.costs[ia].col(j), env.link, policy.eta_scale));
    }

    const Index T0 = static_cast<Index>(data.contexts.size());
    MatrixXd reward_hat(T0, K);
    std::vector<MatrixXd> cost_hat;
    for (Index t = 0; t < T0; ++t) {
        const ArmFeatures& ctx = data.contexts[static_cast<std::size_t>(t)];
        MatrixXd c(K, d);
        for (int a = 0; a < K; ++a) {
            const auto ia = static_cast<std::size_t>(a);
            reward_hat(t, a) = f_hat[ia].predict(ctx.reward.col(a));
            for (int j = 0; j < d; ++j) c(a, j) = g_hat[ia][static_cast<std::size_t>(j)].predict(ctx.cost.col(a));
        }
        cost_hat.push_back(std::move(c));
    }

    auto bounds = OracleBoundSpec::for_oracle(policy.oracle, double(env.reward_dim()),
                                              double(env.cost_dim()), double(d));
    bounds.constant = ts.error_constant;
    const auto errs = estimation_errors(bounds, double(res.t0), double(inst.T));
    res.m_radius = m_t0(double(res.t0), K, d, errs.reward, errs.cost, double(inst.T));
    res.opt_hat = empirical_opt(reward_hat, cost_hat, inst.budget_rate(), res.m_radius);
    res.z = z_estimate(res.opt_hat, res.m_radius, double(inst.T), inst.B);
    res.precondition_met = inst.B > std::max((K + 2.0) * res.t0, inst.T * res.m_radius);
    return res;
}

TwoStageResult run_twostage(const EnvironmentSpec& env, const TwoStageConfig& ts,
                            const PolicyConfig& policy, Rng& rng) {
    const auto start = std::chrono::steady_clock::now();
    TwoStageResult res = run_twostage_phase_one(env, ts, policy, rng);
    if (!res.trace.aborted) {
        const auto& inst = env.instance;
        AdaptivePhase phase;
        phase.horizon = inst.T - (inst.K + 1) * res.t0;
        phase.budget = inst.B - double((inst.K + 1) * res.t0);
        phase.radius = policy.radius.value_or(res.z);
        if (phase.radius <= 0.0) phase.radius = double(inst.T) / inst.B;
        if (phase.horizon > 0) phase.gamma = policy_gamma(env, policy, double(phase.horizon), phase.radius);
        res.trace.radius = phase.radius;
        run_adaptive_phase(env, policy, phase, rng, res.trace);
    }
    res.trace.duration = std::chrono::steady_clock::now() - start;
    return res;
}

}  // namespace cbwk
