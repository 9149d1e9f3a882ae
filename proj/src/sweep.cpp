#include "cbwk/sweep.hpp"

#include "cbwk/lp.hpp"

#include <atomic>
#include <thread>

namespace cbwk {

double environment_opt(const EnvironmentSpec& env) {
    if (!env.fixed_context()) throw ConfigError("exact OPT needs a fixed-context environment");
    const ArmFeatures& ctx = env.contexts.front();
    const int K = env.instance.K;
    VectorXd f(K);
    MatrixXd g(K, env.instance.d);
    for (int a = 0; a < K; ++a) {
        f(a) = expected_reward(env, ctx, a);
        g.row(a) = expected_cost(env, ctx, a).transpose();
    }
    const auto opt = exact_opt_fixed_context<double>(f, g, env.instance.budget_rate());
    if (!opt) throw InfeasibleError("static program is infeasible for this environment");
    return *opt;
}

SweepRow run_cell(const ExperimentConfig& cfg, const AlgorithmSpec& algo, double value,
                  std::uint64_t seed, std::uint64_t stream) {
    SweepRow row;
    row.algorithm = algo.name();
    row.sweep_param = cfg.param_name();
    row.sweep_value = value;
    row.seed = seed;
    try {
        const ExperimentConfig c = cfg.sweep_param.empty() ? cfg : cfg.at(value);
        const EnvironmentSpec env = c.environment();
        const double opt = environment_opt(env);
        Rng rng = split_rng(cfg.base_seed, stream);
        RunTrace trace;
        switch (algo.kind) {
            case AlgorithmKind::LinUcb:
                trace = run_linucb(env, c.linucb(), rng);
                break;
            case AlgorithmKind::TwoStage:
                trace = run_twostage(env, c.twostage(), c.policy(algo.oracle), rng).trace;
                break;
            case AlgorithmKind::SquareCBwK:
            default:
                trace = run_squarecbwk(env, c.policy(algo.oracle), rng);
                break;
        }
        row.regret = realized_regret(trace, opt, env.instance.T);
        row.tau = trace.tau;
        row.total_reward = trace.total_reward;
        row.runtime_ms = std::chrono::duration<double, std::milli>(trace.duration).count();
    } catch (const std::exception& e) {
        row.error = e.what();
        row.regret = std::numeric_limits<double>::quiet_NaN();
        row.total_reward = std::numeric_limits<double>::quiet_NaN();
        row.tau = -1;
    }
    return row;
}

SweepResult run_sweep(const ExperimentConfig& cfg, int parallelism) {
    cfg.validate();
    struct Job {
        const AlgorithmSpec* algo;
        double value;
    };
    std::vector<Job> jobs;
    const auto values = cfg.values();
    for (const auto& algo : cfg.algorithms)
        for (const double v : values)
            for (int s = 0; s < cfg.seed_count; ++s) jobs.push_back({&algo, v});

    SweepResult result;
    result.rows.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++)
            result.rows[i] = run_cell(cfg, *jobs[i].algo, jobs[i].value, cfg.base_seed + i, i);
    };
    const int workers = std::max(1, std::min<int>(parallelism, static_cast<int>(jobs.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return result;
}

std::vector<SweepCell> SweepResult::aggregate() const {
    std::vector<SweepCell> cells;
    std::vector<std::vector<double>> samples;
    for (const auto& row : rows) {
        if (!row.error.empty()) continue;
        if (cells.empty() || cells.back().algorithm != row.algorithm ||
            cells.back().sweep_value != row.sweep_value) {
            cells.push_back({row.algorithm, row.sweep_value, 0, 0.0, 0.0});
            samples.emplace_back();
        }
        samples.back().push_back(row.regret);
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& x = samples[i];
        const auto n = static_cast<double>(x.size());
        double mean = 0.0;
        for (const double v : x) mean += v;
        mean /= n;
        double ss = 0.0;
        for (const double v : x) ss += (v - mean) * (v - mean);
        cells[i].n = static_cast<int>(x.size());
        cells[i].mean_regret = mean;
        cells[i].std_regret = x.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    }
    return cells;
}

}  // namespace cbwk
