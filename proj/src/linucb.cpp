#include "cbwk/linucb.hpp"

#include "cbwk/policy.hpp"

#include <chrono>
#include <cmath>

namespace cbwk {

RidgeEllipsoid::RidgeEllipsoid(Index dim, Index targets, double ridge)
    : v_inv_(MatrixXd::Identity(dim, dim) / ridge),
      moment_(MatrixXd::Zero(dim, targets)),
      theta_(MatrixXd::Zero(dim, targets)) {
    if (!(ridge > 0.0)) throw ConfigError("ridge parameter must be positive");
}

double RidgeEllipsoid::width(const VectorXd& phi) const {
    return std::sqrt(std::max(0.0, phi.dot(v_inv_ * phi)));
}

void RidgeEllipsoid::update(const VectorXd& phi, const VectorXd& targets) {
    require_shape(phi.size() == dim() && targets.size() == moment_.cols(), "ridge update shape mismatch");
    const VectorXd u = v_inv_ * phi;
    v_inv_.noalias() -= (u / (1.0 + phi.dot(u))) * u.transpose();
    moment_.noalias() += phi * targets.transpose();
    theta_.noalias() = v_inv_ * moment_;
}

RunTrace run_linucb(const EnvironmentSpec& env, const LinUcbConfig& config, Rng& rng) {
    env.validate();
    if (!(config.multiplier >= 0.0)) throw ConfigError("confidence multiplier must be nonnegative");
    if (env.link != Link::Identity) throw ConfigError("LinUCB requires a linear environment");
    const auto start = std::chrono::steady_clock::now();
    const auto& inst = env.instance;
    const int K = inst.K;
    const int d = inst.d;
    const double rate = inst.budget_rate();
    const double radius = config.radius.value_or(double(inst.T) / inst.B);

    RidgeEllipsoid reward_model(env.reward_dim(), 1);
    RidgeEllipsoid cost_model(env.cost_dim(), d);
    DualState<double> dual(d, radius, inst.T);

    RunTrace trace;
    trace.cumulative_cost = VectorXd::Zero(d);
    trace.radius = radius;
    trace.rounds.reserve(static_cast<std::size_t>(inst.T));
    const double m = double(std::max(env.reward_dim(), env.cost_dim()));

    for (int t = 1; t <= inst.T; ++t) {
        const ArmFeatures& ctx = draw_context(env, rng);
        const double beta = config.multiplier * std::sqrt(m * std::log(1.0 + t));
        RoundRecord rec;
        rec.reward_pred.resize(K);
        rec.cost_pred.resize(K, d);
        for (int a = 0; a < K; ++a) {
            const VectorXd phi_r = ctx.reward.col(a);
            const VectorXd phi_c = ctx.cost.col(a);
            rec.reward_pred(a) = reward_model.estimates().col(0).dot(phi_r) + beta * reward_model.width(phi_r);
            rec.cost_pred.row(a) =
                (cost_model.estimates().transpose() * phi_c).array() - beta * cost_model.width(phi_c);
        }
        rec.lambda = dual.lambda();
        rec.scores = lagrangian_scores<double>(rec.reward_pred, rec.cost_pred, rec.lambda, rate);
        rec.arm = argmax_lowest(rec.scores);
        rec.probs = VectorXd::Unit(K, rec.arm);
        rec.outcome = sample_outcome(env, ctx, rec.arm, rng);

        trace.total_reward += rec.outcome.reward;
        trace.cumulative_cost += rec.outcome.cost;
        ++trace.tau;

        reward_model.update(ctx.reward.col(rec.arm), VectorXd::Constant(1, rec.outcome.reward));
        cost_model.update(ctx.cost.col(rec.arm), rec.outcome.cost);
        ++trace.reward_oracle_updates;
        dual.update(rec.outcome.cost, rate);

        if (config.record_features) trace.features.push_back(ctx);
        trace.rounds.push_back(std::move(rec));
        if ((trace.cumulative_cost.array() >= inst.B - 1.0).any()) break;
    }
    trace.duration = std::chrono::steady_clock::now() - start;
    return trace;
}

}  // namespace cbwk
