#include "cbwk/policy.hpp"

#include <chrono>

namespace cbwk {

void PolicyConfig::validate() const {
    if (gamma && !(*gamma >= 0.0)) throw ConfigError("gamma must be nonnegative");
    if (radius && !(*radius > 0.0)) throw ConfigError("dual radius Z must be positive");
    if (!(eta_scale > 0.0)) throw ConfigError("oracle.eta_scale must be positive");
    if (!(bound_constant > 0.0)) throw ConfigError("oracle.bound_constant must be positive");
}

Index sample_arm(const VectorXd& probs, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = u(rng);
    double acc = 0.0;
    for (Index a = 0; a < probs.size(); ++a) {
        acc += probs(a);
        if (x < acc) return a;
    }
    // Rounding left x above the total; take the last arm with positive mass.
    for (Index a = probs.size() - 1; a > 0; --a)
        if (probs(a) > 0.0) return a;
    return 0;
}

double policy_gamma(const EnvironmentSpec& env, const PolicyConfig& config, double horizon,
                    double radius) {
    if (config.gamma) return *config.gamma;
    auto bounds = OracleBoundSpec::for_oracle(config.oracle, double(env.reward_dim()),
                                              double(env.cost_dim()), double(env.instance.d));
    bounds.constant = config.bound_constant;
    return gamma_default(double(env.instance.K), horizon, bounds, radius);
}

void run_adaptive_phase(const EnvironmentSpec& env, const PolicyConfig& config,
                        const AdaptivePhase& phase, Rng& rng, RunTrace& trace) {
    if (phase.horizon <= 0 || phase.budget < 1.0) return;
    const int K = env.instance.K;
    const int d = env.instance.d;
    const double rate = phase.budget / phase.horizon;

    OnlinePredictor<double> reward_oracle(config.oracle, env.reward_dim(), env.link, config.eta_scale);
    auto cost_oracle = lift_vector<double>(config.oracle, env.cost_dim(), d, env.link, config.eta_scale);
    DualState<double> dual(d, phase.radius, phase.horizon);

    VectorXd spent = VectorXd::Zero(d);
    for (int t = 0; t < phase.horizon; ++t) {
        const ArmFeatures& ctx = draw_context(env, rng);
        RoundRecord rec;
        rec.reward_pred.resize(K);
        rec.cost_pred.resize(K, d);
        for (int a = 0; a < K; ++a) {
            rec.reward_pred(a) = reward_oracle.predict(ctx.reward.col(a));
            rec.cost_pred.row(a) = cost_oracle.predict(ctx.cost.col(a)).transpose();
        }
        rec.lambda = dual.lambda();
        rec.scores = lagrangian_scores<double>(rec.reward_pred, rec.cost_pred, rec.lambda, rate);
        rec.probs = igw_distribution<double>(rec.scores, phase.gamma);
        rec.arm = sample_arm(rec.probs, rng);
        rec.outcome = sample_outcome(env, ctx, rec.arm, rng);

        trace.total_reward += rec.outcome.reward;
        trace.cumulative_cost += rec.outcome.cost;
        spent += rec.outcome.cost;
        ++trace.tau;

        reward_oracle.update(ctx.reward.col(rec.arm), rec.outcome.reward);
        cost_oracle.update(ctx.cost.col(rec.arm), rec.outcome.cost);
        ++trace.reward_oracle_updates;
        dual.update(rec.outcome.cost, rate);

        if (config.record_features) trace.features.push_back(ctx);
        trace.rounds.push_back(std::move(rec));
        if ((spent.array() >= phase.budget - 1.0).any()) break;
    }
    trace.reinitializations += reward_oracle.reinitializations() + cost_oracle.reinitializations();
}

RunTrace run_squarecbwk(const EnvironmentSpec& env, const PolicyConfig& config, Rng& rng) {
    env.validate();
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto& inst = env.instance;

    RunTrace trace;
    trace.cumulative_cost = VectorXd::Zero(inst.d);
    trace.rounds.reserve(static_cast<std::size_t>(inst.T));

    AdaptivePhase phase;
    phase.horizon = inst.T;
    phase.budget = inst.B;
    phase.radius = config.radius.value_or(double(inst.T) / inst.B);
    phase.gamma = policy_gamma(env, config, double(inst.T), phase.radius);
    trace.radius = phase.radius;
    run_adaptive_phase(env, config, phase, rng, trace);

    trace.duration = std::chrono::steady_clock::now() - start;
    return trace;
}

}  // namespace cbwk
