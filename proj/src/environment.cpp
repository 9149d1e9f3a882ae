#include "cbwk/environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cbwk {

namespace {

void check_arm(const EnvironmentSpec& env, Index arm) {
    if (arm < 0 || arm >= env.instance.K)
        throw IndexError("arm " + std::to_string(arm) + " outside [0, " +
                         std::to_string(env.instance.K) + ")");
}

bool is_null(const EnvironmentSpec& env, Index arm) {
    return env.null_arm && arm == env.instance.K - 1;
}

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

void EnvironmentSpec::validate() const {
    instance.validate();
    if (cost_param.cols() != instance.d)
        throw ConfigError("cost parameter count " + std::to_string(cost_param.cols()) +
                          " != d = " + std::to_string(instance.d));
    if (contexts.empty()) throw ConfigError("environment has no contexts");
    if (!(noise_variance >= 0.0)) throw ConfigError("noise_variance >= 0 violated");
    for (const auto& ctx : contexts) {
        if (ctx.reward.cols() != instance.K || ctx.cost.cols() != instance.K)
            throw ConfigError("context arm count != K");
        if (ctx.reward.rows() != reward_dim() || ctx.cost.rows() != cost_dim())
            throw ConfigError("context feature dimension does not match parameters");
        for (Index a = 0; a < instance.K; ++a) {
            if (ctx.reward.col(a).norm() > feature_bound + 1e-12 ||
                ctx.cost.col(a).norm() > feature_bound + 1e-12)
                throw ConfigError("feature norm exceeds declared bound " +
                                  std::to_string(feature_bound));
        }
    }
}

EnvironmentSpec make_basis_env(int m, int K, int d, double noise_variance, int T, double B) {
    if (m < 5) throw ConfigError("m >= 5 violated (m = " + std::to_string(m) + ")");
    if (K > m - 1)
        throw ConfigError("K <= m-1 violated (K = " + std::to_string(K) +
                          ", m = " + std::to_string(m) + ")");
    if (d < 4) throw ConfigError("d >= 4 violated (d = " + std::to_string(d) + ")");
    if (d > m - 1)
        throw ConfigError("d <= m-1 violated (d = " + std::to_string(d) +
                          ", m = " + std::to_string(m) + ")");

    const double r2 = 1.0 / std::sqrt(2.0);
    EnvironmentSpec env;
    env.instance = ProblemInstance{T, B, d, K};
    env.link = Link::Identity;
    env.noise_variance = noise_variance;
    env.feature_bound = std::sqrt(2.0);

    // Basis vector e_i (1-based) is coordinate i-1.
    env.reward_param = VectorXd::Zero(m);
    env.reward_param(0) = r2;
    env.reward_param(1) = r2;

    env.cost_param = MatrixXd::Zero(m, d);
    env.cost_param(0, 0) = r2;
    env.cost_param(2, 0) = r2;
    for (int i = 1; i <= 4; ++i) env.cost_param(i, 1) = 0.5;
    for (int i = 3; i <= d; ++i) env.cost_param(i, i - 1) = 1.0;

    ArmFeatures ctx;
    ctx.reward = MatrixXd::Zero(m, K);
    for (int a = 0; a < K; ++a) {
        ctx.reward(0, a) = r2;
        ctx.reward(a + 1, a) = 1.0;
    }
    ctx.cost = ctx.reward;
    env.contexts.push_back(std::move(ctx));
    env.validate();
    return env;
}

EnvironmentSpec make_glm_env(const ProblemInstance& instance, const VectorXd& reward_param,
                             const MatrixXd& cost_param, std::vector<ArmFeatures> contexts,
                             Link link) {
    if (reward_param.norm() > 1.0 + 1e-12)
        throw ConfigError("reward parameter norm " + std::to_string(reward_param.norm()) +
                          " exceeds 1");
    for (Index j = 0; j < cost_param.cols(); ++j)
        if (cost_param.col(j).norm() > 1.0 + 1e-12)
            throw ConfigError("cost parameter " + std::to_string(j) + " norm exceeds 1");
    EnvironmentSpec env;
    env.instance = instance;
    env.link = link;
    env.reward_param = reward_param;
    env.cost_param = cost_param;
    env.contexts = std::move(contexts);
    env.feature_bound = 1.0;
    env.bounded = true;
    env.validate();
    return env;
}

double apply_link(Link link, double z) {
    switch (link) {
        case Link::Logistic:
            return 1.0 / (1.0 + std::exp(-z));
        case Link::Identity:
        default:
            return z;
    }
}

double link_derivative(Link link, double z) {
    if (link == Link::Logistic) {
        const double s = apply_link(link, z);
        return s * (1.0 - s);
    }
    return 1.0;
}

const ArmFeatures& draw_context(const EnvironmentSpec& env, Rng& rng) {
    if (env.contexts.size() == 1) return env.contexts.front();
    std::uniform_int_distribution<std::size_t> pick(0, env.contexts.size() - 1);
    return env.contexts[pick(rng)];
}

double expected_reward(const EnvironmentSpec& env, const ArmFeatures& features, Index arm) {
    check_arm(env, arm);
    if (is_null(env, arm)) return 0.0;
    return apply_link(env.link, features.reward.col(arm).dot(env.reward_param));
}

VectorXd expected_cost(const EnvironmentSpec& env, const ArmFeatures& features, Index arm) {
    check_arm(env, arm);
    if (is_null(env, arm)) return VectorXd::Zero(env.instance.d);
    VectorXd lin = env.cost_param.transpose() * features.cost.col(arm);
    return lin.unaryExpr([&](double z) { return apply_link(env.link, z); });
}

RoundOutcome sample_outcome(const EnvironmentSpec& env, const ArmFeatures& features, Index arm,
                            Rng& rng) {
    check_arm(env, arm);
    const int d = env.instance.d;
    RoundOutcome out{0.0, VectorXd::Zero(d)};
    if (is_null(env, arm)) return out;

    const double mean_r = expected_reward(env, features, arm);
    const VectorXd mean_c = expected_cost(env, features, arm);
    if (env.link == Link::Identity) {
        if (env.noise_variance > 0.0) {
            std::normal_distribution<double> noise(0.0, std::sqrt(env.noise_variance));
            out.reward = mean_r + noise(rng);
            for (int j = 0; j < d; ++j) out.cost(j) = mean_c(j) + noise(rng);
        } else {
            out.reward = mean_r;
            out.cost = mean_c;
        }
    } else {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        out.reward = u(rng) < mean_r ? 1.0 : 0.0;
        for (int j = 0; j < d; ++j) out.cost(j) = u(rng) < mean_c(j) ? 1.0 : 0.0;
    }
    if (env.bounded) {
        out.reward = clip01(out.reward);
        out.cost = out.cost.unaryExpr([](double v) { return clip01(v); });
    }
    return out;
}

double realized_regret(const RunTrace& trace, double opt_per_round, int T) {
    return static_cast<double>(T) * opt_per_round - trace.total_reward;
}

}  // namespace cbwk
