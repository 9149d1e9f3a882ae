#include "cbwk/environment.hpp"

#include <doctest.h>

#include <cmath>

using namespace cbwk;

namespace {

// Hand inner products, written out independently of the environment builder.
const double kHalfPlusRoot = 0.5 + 1.0 / std::sqrt(2.0);

}  // namespace

TEST_CASE("replication env: expected rewards and costs match hand inner products") {
    const auto env = make_basis_env(10, 3, 4, 0.2);
    const auto& ctx = env.contexts.front();
    CHECK(env.fixed_context());
    CHECK(env.reward_dim() == 10);
    CHECK(env.cost_param.cols() == 4);

    // arm 1 (0-based 0): x = e1/sqrt2 + e2, theta0 = (e1+e2)/sqrt2
    CHECK(expected_reward(env, ctx, 0) == doctest::Approx(kHalfPlusRoot).epsilon(1e-12));
    CHECK(expected_reward(env, ctx, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(expected_reward(env, ctx, 2) == doctest::Approx(0.5).epsilon(1e-12));

    // arm 2 under theta1 = (e1+e3)/sqrt2
    CHECK(expected_cost(env, ctx, 1)(0) == doctest::Approx(kHalfPlusRoot).epsilon(1e-12));
    CHECK(expected_cost(env, ctx, 0)(0) == doctest::Approx(0.5).epsilon(1e-12));

    // theta_i = e_{i+1} for i >= 3: cost of arm a is 1 iff a == i
    for (int a = 0; a < 3; ++a) {
        const VectorXd c = expected_cost(env, ctx, a);
        CHECK(c(2) == doctest::Approx(a + 1 == 3 ? 1.0 : 0.0));
        CHECK(c(3) == doctest::Approx(a + 1 == 4 ? 1.0 : 0.0));
    }
}

TEST_CASE("replication env: parameter norms and feature bound") {
    const auto env = make_basis_env(12, 5, 7, 0.2);
    CHECK(env.reward_param.norm() == doctest::Approx(1.0));
    for (Index j = 0; j < env.cost_param.cols(); ++j) CHECK(env.cost_param.col(j).norm() == doctest::Approx(1.0));
    for (Index a = 0; a < 5; ++a)
        CHECK(env.contexts.front().reward.col(a).norm() == doctest::Approx(std::sqrt(1.5)));
    CHECK(env.feature_bound >= std::sqrt(1.5));
}

TEST_CASE("replication env: dimension errors name the inequality") {
    auto message = [](int m, int K, int d) -> std::string {
        try {
            make_basis_env(m, K, d, 0.2);
        } catch (const ConfigError& e) {
            return e.what();
        }
        return "";
    };
    CHECK(message(5, 3, 5).find("d <= m-1") != std::string::npos);
    CHECK(message(10, 10, 4).find("K <= m-1") != std::string::npos);
    CHECK(message(10, 3, 3).find("d >= 4") != std::string::npos);
    CHECK(message(4, 2, 4).find("m >= 5") != std::string::npos);
    CHECK(message(5, 3, 4).empty());
}

TEST_CASE("glm env: logistic means and parameter norm guard") {
    const ProblemInstance inst{100, 50.0, 1, 2};
    ArmFeatures ctx;
    ctx.reward = MatrixXd::Zero(3, 2);
    ctx.reward(0, 0) = 1.0;
    ctx.reward(1, 1) = 1.0;
    ctx.cost = ctx.reward;

    SUBCASE("zero parameter gives one half everywhere") {
        const auto env = make_glm_env(inst, VectorXd::Zero(3), MatrixXd::Zero(3, 1), {ctx});
        for (int a = 0; a < 2; ++a) {
            CHECK(expected_reward(env, ctx, a) == doctest::Approx(0.5));
            CHECK(expected_cost(env, ctx, a)(0) == doctest::Approx(0.5));
        }
    }
    SUBCASE("inner product one") {
        const auto env = make_glm_env(inst, VectorXd::Unit(3, 0), MatrixXd::Zero(3, 1), {ctx});
        CHECK(expected_reward(env, ctx, 0) == doctest::Approx(0.7310585786300049).epsilon(1e-12));
    }
    SUBCASE("norm above one is rejected") {
        CHECK_THROWS_AS(make_glm_env(inst, 1.5 * VectorXd::Unit(3, 0), MatrixXd::Zero(3, 1), {ctx}), ConfigError);
        CHECK_THROWS_AS(make_glm_env(inst, VectorXd::Zero(3), 1.5 * MatrixXd::Ones(3, 1) / std::sqrt(3.0), {ctx}),
                        ConfigError);
    }
    SUBCASE("bernoulli outcomes stay in {0,1}") {
        const auto env = make_glm_env(inst, VectorXd::Unit(3, 0), MatrixXd::Zero(3, 1), {ctx});
        Rng rng = make_rng(3);
        double sum = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) {
            const auto o = sample_outcome(env, ctx, 0, rng);
            CHECK((o.reward == 0.0 || o.reward == 1.0));
            sum += o.reward;
        }
        const double p = 0.7310585786300049;
        CHECK(std::abs(sum / n - p) < 4.0 * std::sqrt(p * (1 - p) / n));
    }
}

TEST_CASE("sample_outcome: null arm is identically zero") {
    auto env = make_basis_env(10, 3, 4, 0.2);
    env.null_arm = true;
    env.bounded = true;
    Rng rng = make_rng(1);
    for (int i = 0; i < 10000; ++i) {
        const auto o = sample_outcome(env, env.contexts.front(), 2, rng);
        REQUIRE(o.reward == 0.0);
        REQUIRE(o.cost.isZero(0.0));
    }
}

TEST_CASE("sample_outcome: noiseless draws equal the analytic means") {
    const auto env = make_basis_env(10, 3, 4, 0.0);
    const auto& ctx = env.contexts.front();
    Rng rng = make_rng(2);
    const auto o1 = sample_outcome(env, ctx, 1, rng);
    CHECK(o1.reward == doctest::Approx(0.5).epsilon(1e-12));
    const auto o0 = sample_outcome(env, ctx, 0, rng);
    CHECK(std::abs(o0.cost(0) - 0.5) < 1e-12);
    for (int a = 0; a < 3; ++a) {
        const auto o = sample_outcome(env, ctx, a, rng);
        CHECK(std::abs(o.reward - ctx.reward.col(a).dot(env.reward_param)) < 1e-12);
        CHECK((o.cost - env.cost_param.transpose() * ctx.cost.col(a)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("sample_outcome: Monte Carlo mean within four standard errors") {
    const double var = 0.2;
    const auto env = make_basis_env(10, 3, 4, var);
    Rng rng = make_rng(4);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += sample_outcome(env, env.contexts.front(), 0, rng).reward;
    CHECK(std::abs(sum / n - kHalfPlusRoot) < 4.0 * std::sqrt(var / n));
}

TEST_CASE("sample_outcome: bounded mode clips, replication mode does not") {
    auto env = make_basis_env(10, 3, 4, 0.2);
    Rng rng = make_rng(5);
    bool above = false;
    for (int i = 0; i < 1000; ++i) above = above || sample_outcome(env, env.contexts.front(), 0, rng).reward > 1.0;
    CHECK(above);
    env.bounded = true;
    for (int i = 0; i < 1000; ++i) {
        const auto o = sample_outcome(env, env.contexts.front(), 0, rng);
        REQUIRE(o.reward >= 0.0);
        REQUIRE(o.reward <= 1.0);
        REQUIRE(o.cost.minCoeff() >= 0.0);
        REQUIRE(o.cost.maxCoeff() <= 1.0);
    }
}

TEST_CASE("sample_outcome: arm out of range") {
    const auto env = make_basis_env(10, 3, 4, 0.2);
    Rng rng = make_rng(6);
    CHECK_THROWS_AS(sample_outcome(env, env.contexts.front(), 3, rng), IndexError);
    CHECK_THROWS_AS(sample_outcome(env, env.contexts.front(), -1, rng), IndexError);
}

TEST_CASE("problem instance invariants") {
    CHECK_NOTHROW(ProblemInstance{10, 10.0, 1, 2}.validate());
    CHECK_THROWS_AS((ProblemInstance{0, 1.0, 1, 2}.validate()), ConfigError);
    CHECK_THROWS_AS((ProblemInstance{10, 11.0, 1, 2}.validate()), ConfigError);
    CHECK_THROWS_AS((ProblemInstance{10, 0.5, 1, 2}.validate()), ConfigError);
    CHECK_THROWS_AS((ProblemInstance{10, 5.0, 0, 2}.validate()), ConfigError);
    CHECK_THROWS_AS((ProblemInstance{10, 5.0, 1, 1}.validate()), ConfigError);
}

TEST_CASE("realized regret") {
    RunTrace t;
    t.total_reward = 500.0;
    CHECK(realized_regret(t, 0.55, 1000) == doctest::Approx(50.0));
    RunTrace empty;
    CHECK(realized_regret(empty, 0.55, 1000) == doctest::Approx(550.0));
    RunTrace exact;
    exact.total_reward = 550.0;
    CHECK(realized_regret(exact, 0.55, 1000) == doctest::Approx(0.0));
}

TEST_CASE("rng streams are reproducible and distinct") {
    Rng a = split_rng(7, 0), b = split_rng(7, 0), c = split_rng(7, 1);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(make_rng(1)() != make_rng(2)());
}
