#include "cbwk/policy.hpp"

#include <doctest.h>

#include <random>

using namespace cbwk;

namespace {

// Every arm has feature e1; reward and every cost equal `value` exactly.
EnvironmentSpec constant_env(int T, double B, int K, int d, double reward, double cost) {
    EnvironmentSpec env;
    env.instance = ProblemInstance{T, B, d, K};
    env.reward_param = reward * VectorXd::Unit(2, 0);
    env.cost_param = MatrixXd::Zero(2, d);
    env.cost_param.row(0).setConstant(cost);
    ArmFeatures ctx;
    ctx.reward = MatrixXd::Zero(2, K);
    ctx.reward.row(0).setOnes();
    ctx.cost = ctx.reward;
    env.contexts = {ctx};
    env.validate();
    return env;
}

}  // namespace

TEST_CASE("gamma default") {
    const double r = 5.0 * std::log(1e4);
    CHECK(gamma_default(4, 1e4, r, r, 1.0) == doctest::Approx(12.17).epsilon(1e-3));
    auto bounds = OracleBoundSpec::for_oracle(OracleKind::GlmtronNewton, 5, 5, 1);
    CHECK(gamma_default(4, 1e4, bounds, 1.0) == doctest::Approx(gamma_default(4, 1e4, r, r, 1.0)));
    CHECK(gamma_default(3, 1e4, 1e12, 1e12, 1.0) < 1e-3);
    CHECK(gamma_default(1, 100, 1.0, 1.0, 1.0) > 0.0);
}

TEST_CASE("lagrangian scores") {
    const VectorXd r = Eigen::Vector3d(0.6, 0.2, 0.9);
    MatrixXd c(3, 1);
    c << 0.9, 0.1, 0.5;
    CHECK(lagrangian_scores<double>(r, c, VectorXd::Zero(1), 0.5).isApprox(r));
    const VectorXd s = lagrangian_scores<double>(r, c, VectorXd::Constant(1, 2.0), 0.5);
    CHECK(s(0) == doctest::Approx(-0.2));
    const MatrixXd balanced = MatrixXd::Constant(3, 2, 0.3);
    CHECK(lagrangian_scores<double>(r, balanced, Eigen::Vector2d(1.5, 4.0), 0.3).isApprox(r));
    CHECK_THROWS_AS(lagrangian_scores<double>(r, MatrixXd::Zero(2, 1), VectorXd::Zero(1), 0.5), ShapeError);
}

TEST_CASE("inverse gap weighting") {
    SUBCASE("no exploitation gives uniform") {
        const VectorXd p = igw_distribution<double>(Eigen::Vector4d(0.1, 0.9, 0.3, 0.2), 0.0);
        CHECK(p.isApprox(VectorXd::Constant(4, 0.25)));
    }
    SUBCASE("hand instance") {
        const VectorXd p = igw_distribution<double>(Eigen::Vector3d(1.0, 0.5, 0.0), 4.0);
        CHECK(p(1) == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(p(2) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
        CHECK(p(0) == doctest::Approx(23.0 / 35.0).epsilon(1e-12));
    }
    SUBCASE("equal scores give uniform with the first arm greedy") {
        const VectorXd p = igw_distribution<double>(VectorXd::Constant(5, 0.3), 100.0);
        CHECK((p.array() - 0.2).abs().maxCoeff() < 1e-15);
        CHECK(argmax_lowest(VectorXd::Constant(5, 0.3)) == 0);
    }
    SUBCASE("large gamma concentrates on the greedy arm") {
        const VectorXd p = igw_distribution<double>(Eigen::Vector3d(0.2, 0.8, 0.5), 1e6);
        CHECK(p(1) >= 1.0 - 2.0 / (3.0 + 1e6 * 0.3));
    }
    SUBCASE("shift invariance and validity on random scores") {
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (int t = 0; t < 2000; ++t) {
            VectorXd s(2 + t % 6);
            for (auto& v : s) v = u(rng);
            const double g = 50.0 * (u(rng) + 3.0);
            const VectorXd p = igw_distribution<double>(s, g);
            CHECK(std::abs(p.sum() - 1.0) < 1e-12);
            CHECK(p.minCoeff() >= 0.0);
            const VectorXd q = igw_distribution<double>((s.array() + 7.5).matrix().eval(), g);
            CHECK((p - q).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("sample_arm follows the distribution") {
    Rng rng = make_rng(42);
    const Eigen::Vector3d p(0.2, 0.5, 0.3);
    Eigen::Vector3d counts = Eigen::Vector3d::Zero();
    const int n = 100000;
    for (int i = 0; i < n; ++i) counts(sample_arm(p, rng)) += 1.0;
    for (int a = 0; a < 3; ++a) CHECK(std::abs(counts(a) / n - p(a)) < 4.0 * std::sqrt(p(a) * (1 - p(a)) / n));
    CHECK(sample_arm(Eigen::Vector3d(0, 0, 1), rng) == 2);
}

TEST_CASE("stopping rule boundary: unit costs") {
    // cumulative cost after round t is t; the exit fires at the first t with t >= B - 1 = 9.
    const auto env = constant_env(100, 10.0, 2, 1, 0.5, 1.0);
    PolicyConfig cfg;
    Rng rng = make_rng(43);
    const auto trace = run_squarecbwk(env, cfg, rng);
    CHECK(trace.tau == 9);
    CHECK(trace.cumulative_cost(0) == doctest::Approx(9.0));
    CHECK(trace.cumulative_cost(0) < 10.0);
}

TEST_CASE("nonbinding budget runs the full horizon") {
    const auto env = constant_env(500, 500.0, 3, 1, 0.7, 0.0);
    PolicyConfig cfg;
    Rng rng = make_rng(44);
    const auto trace = run_squarecbwk(env, cfg, rng);
    CHECK(trace.tau == 500);
    CHECK(trace.reward_oracle_updates == 500);
    CHECK(trace.total_reward == doctest::Approx(350.0));
}

TEST_CASE("trace invariants on the replication env") {
    for (const auto kind : {OracleKind::GlmtronNewton, OracleKind::OnlineGradientDescent}) {
        auto env = make_basis_env(10, 3, 4, 0.2, 600, 300);
        env.bounded = true;
        PolicyConfig cfg;
        cfg.oracle = kind;
        Rng rng = make_rng(45);
        const auto trace = run_squarecbwk(env, cfg, rng);
        CHECK(trace.tau <= 600);
        CHECK(trace.reward_oracle_updates == trace.tau);
        CHECK(static_cast<int>(trace.rounds.size()) == trace.tau);
        VectorXd spent = VectorXd::Zero(4);
        double reward = 0.0;
        for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
            const auto& r = trace.rounds[t];
            REQUIRE(std::abs(r.probs.sum() - 1.0) < 1e-12);
            REQUIRE(r.probs.minCoeff() >= 0.0);
            REQUIRE(r.lambda.minCoeff() >= 0.0);
            REQUIRE(r.lambda.sum() <= 2.0 + 1e-9);
            REQUIRE(r.reward_pred.minCoeff() >= 0.0);
            REQUIRE(r.reward_pred.maxCoeff() <= 1.0);
            if (t + 1 < trace.rounds.size()) REQUIRE((spent + r.outcome.cost).maxCoeff() < 299.0);
            spent += r.outcome.cost;
            reward += r.outcome.reward;
        }
        CHECK((spent - trace.cumulative_cost).norm() < 1e-9);
        CHECK(reward == doctest::Approx(trace.total_reward));
        CHECK(trace.cumulative_cost.maxCoeff() < 300.0);
        CHECK(trace.radius == doctest::Approx(2.0));
    }
}

TEST_CASE("runs are reproducible from the seed") {
    const auto env = make_basis_env(10, 3, 4, 0.2, 300, 300);
    PolicyConfig cfg;
    Rng a = make_rng(46), b = make_rng(46);
    const auto ta = run_squarecbwk(env, cfg, a);
    const auto tb = run_squarecbwk(env, cfg, b);
    CHECK(ta.total_reward == tb.total_reward);
    CHECK(ta.tau == tb.tau);
}

TEST_CASE("gamma override and config validation") {
    const auto env = make_basis_env(10, 3, 4, 0.0, 2000, 2000);
    PolicyConfig cfg;
    cfg.gamma = 1e6;
    Rng rng = make_rng(47);
    const auto trace = run_squarecbwk(env, cfg, rng);
    // Noiseless, near-greedy: the last rounds pull arm 0, the reward-maximizing arm.
    int best = 0;
    for (int t = 1800; t < 2000; ++t) best += trace.rounds[static_cast<std::size_t>(t)].arm == 0;
    CHECK(best >= 190);

    PolicyConfig bad;
    bad.gamma = -1.0;
    CHECK_THROWS_AS(run_squarecbwk(env, bad, rng), ConfigError);
    bad = PolicyConfig{};
    bad.radius = 0.0;
    CHECK_THROWS_AS(run_squarecbwk(env, bad, rng), ConfigError);
}
