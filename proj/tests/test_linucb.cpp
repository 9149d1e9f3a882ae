#include "cbwk/linucb.hpp"
#include "cbwk/lp.hpp"
#include "cbwk/policy.hpp"

#include <Eigen/Cholesky>

#include <doctest.h>

#include <random>

using namespace cbwk;

TEST_CASE("ridge ellipsoid matches the closed form") {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> n(0.0, 1.0);
    RidgeEllipsoid e(3, 2);
    MatrixXd V = MatrixXd::Identity(3, 3);
    MatrixXd S = MatrixXd::Zero(3, 2);
    for (int t = 0; t < 50; ++t) {
        const Eigen::Vector3d phi(n(rng), n(rng), n(rng));
        const Eigen::Vector2d y(n(rng), n(rng));
        V += phi * phi.transpose();
        S += phi * y.transpose();
        e.update(phi, y);
    }
    CHECK((e.estimates() - V.ldlt().solve(S)).norm() < 1e-9);
    const Eigen::Vector3d probe(0.3, -0.1, 0.7);
    CHECK(e.width(probe) == doctest::Approx(std::sqrt(probe.dot(V.ldlt().solve(probe)))));
    CHECK_THROWS_AS(RidgeEllipsoid(2, 1, 0.0), ConfigError);
}

TEST_CASE("zero noise: settles on the optimal arm") {
    // B = T: the budget is slack and the optimum is the highest-reward arm 0.
    const auto env = make_basis_env(10, 3, 4, 0.0, 4000, 4000);
    LinUcbConfig cfg;
    Rng rng = make_rng(62);
    const auto trace = run_linucb(env, cfg, rng);
    REQUIRE(trace.tau == 4000);
    int best = 0;
    for (int t = 3600; t < 4000; ++t) best += trace.rounds[static_cast<std::size_t>(t)].arm == 0;
    CHECK(best >= 360);
}

TEST_CASE("costless environment runs the full horizon") {
    auto env = make_basis_env(10, 3, 4, 0.2, 500, 500);
    env.cost_param.setZero();
    Rng rng = make_rng(63);
    const auto trace = run_linucb(env, LinUcbConfig{}, rng);
    CHECK(trace.tau == 500);
    CHECK(trace.reward_oracle_updates == 500);
}

TEST_CASE("zero multiplier is greedy ridge regression") {
    const auto env = make_basis_env(10, 3, 4, 0.2, 300, 300);
    LinUcbConfig cfg;
    cfg.multiplier = 0.0;
    Rng rng = make_rng(64);
    const auto trace = run_linucb(env, cfg, rng);
    RidgeEllipsoid r(10, 1), c(10, 4);
    DualState<double> dual(4, 1.0, 300);
    const auto& ctx = env.contexts.front();
    for (const auto& rec : trace.rounds) {
        VectorXd reward(3);
        MatrixXd cost(3, 4);
        for (int a = 0; a < 3; ++a) {
            reward(a) = r.estimates().col(0).dot(ctx.reward.col(a));
            cost.row(a) = (c.estimates().transpose() * ctx.cost.col(a)).transpose();
        }
        const VectorXd s = lagrangian_scores<double>(reward, cost, dual.lambda(), 1.0);
        REQUIRE(rec.arm == argmax_lowest(s));
        r.update(ctx.reward.col(rec.arm), VectorXd::Constant(1, rec.outcome.reward));
        c.update(ctx.cost.col(rec.arm), rec.outcome.cost);
        dual.update(rec.outcome.cost, 1.0);
    }
}

TEST_CASE("budget safety and linear-only guard") {
    auto env = make_basis_env(10, 3, 4, 0.2, 2000, 500);
    env.bounded = true;
    for (int s = 0; s < 5; ++s) {
        Rng rng = make_rng(65 + s);
        const auto trace = run_linucb(env, LinUcbConfig{}, rng);
        CHECK(trace.cumulative_cost.maxCoeff() < 500.0);
    }
    EnvironmentSpec glm = make_glm_env(ProblemInstance{10, 10, 1, 2}, VectorXd::Zero(1), MatrixXd::Zero(1, 1),
                                       {ArmFeatures{MatrixXd::Ones(1, 2), MatrixXd::Ones(1, 2)}});
    Rng rng = make_rng(66);
    CHECK_THROWS_AS(run_linucb(glm, LinUcbConfig{}, rng), ConfigError);
    LinUcbConfig bad;
    bad.multiplier = -1.0;
    CHECK_THROWS_AS(run_linucb(env, bad, rng), ConfigError);
}
