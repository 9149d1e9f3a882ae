// Command-line driver: run experiments, sweeps, exact optima and plots.
//
//   cbwk run <config> [--out DIR] [--seeds N] [--parallelism P] [--timing]
//   cbwk sweep <config> --param {m|K|T} --values a,b,c [--out DIR] ...
//   cbwk opt <config>
//   cbwk plot <csv> --out FILE
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include "cbwk/config.hpp"
#include "cbwk/sweep.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace {

struct RunArgs {
    std::string config;
    std::string out;
    int seeds = 0;
    int parallelism = 1;
    bool timing = false;
    std::string param;
    std::string values;
};

int execute(cbwk::ExperimentConfig cfg, const RunArgs& args) {
    if (!args.out.empty()) cfg.output_dir = args.out;
    if (args.seeds > 0) cfg.seed_count = args.seeds;
    cfg.validate();

    const auto result = cbwk::run_sweep(cfg, args.parallelism);
    std::filesystem::create_directories(cfg.output_dir);
    const std::filesystem::path dir(cfg.output_dir);
    cbwk::write_csv(result, (dir / "results.csv").string(), {args.timing});
    cbwk::write_summary(result, (dir / "summary.csv").string());

    int failed = 0;
    for (const auto& row : result.rows)
        if (!row.error.empty()) {
            ++failed;
            std::cerr << "cell " << row.algorithm << " " << row.sweep_param << "=" << row.sweep_value
                      << " seed " << row.seed << " failed: " << row.error << "\n";
        }
    if (failed < static_cast<int>(result.rows.size())) cbwk::render_plot(result, (dir / "regret.svg").string());

    for (const auto& c : result.aggregate())
        std::printf("%-20s %s=%-8g n=%-3d regret %.3f +- %.3f\n", c.algorithm.c_str(), cfg.param_name().c_str(),
                    c.sweep_value, c.n, c.mean_regret, c.std_regret);
    std::printf("wrote %s\n", (dir / "results.csv").string().c_str());
    return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contextual bandits with knapsacks: experiments and exact optima"};
    app.require_subcommand(1);

    RunArgs args;
    auto* run = app.add_subcommand("run", "run the configured experiment");
    run->add_option("config", args.config, "config file")->required();
    run->add_option("--out", args.out, "output directory");
    run->add_option("--seeds", args.seeds, "seed count override");
    run->add_option("--parallelism", args.parallelism, "worker threads")->check(CLI::PositiveNumber);
    run->add_flag("--timing", args.timing, "record wall-clock runtimes in the CSV");

    auto* sweep = app.add_subcommand("sweep", "sweep one parameter");
    sweep->add_option("config", args.config, "config file")->required();
    sweep->add_option("--param", args.param, "m, K or T")->required()->check(CLI::IsMember({"m", "K", "T"}));
    sweep->add_option("--values", args.values, "comma-separated values")->required();
    sweep->add_option("--out", args.out, "output directory");
    sweep->add_option("--seeds", args.seeds, "seed count override");
    sweep->add_option("--parallelism", args.parallelism, "worker threads")->check(CLI::PositiveNumber);
    sweep->add_flag("--timing", args.timing, "record wall-clock runtimes in the CSV");

    auto* opt = app.add_subcommand("opt", "print the exact per-round optimum");
    opt->add_option("config", args.config, "config file")->required();

    std::string csv_path, plot_out;
    auto* plot = app.add_subcommand("plot", "render a results CSV as SVG");
    plot->add_option("csv", csv_path, "results CSV")->required();
    plot->add_option("--out", plot_out, "SVG file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*plot) {
            cbwk::render_plot(cbwk::read_csv(csv_path), plot_out);
            std::printf("wrote %s\n", plot_out.c_str());
            return 0;
        }
        auto cfg = cbwk::load_config(args.config);
        if (*opt) {
            for (const double v : cfg.values()) {
                const auto env = (cfg.sweep_param.empty() ? cfg : cfg.at(v)).environment();
                std::printf("%s=%g OPT=%.12f T*OPT=%.6f\n", cfg.param_name().c_str(), v, cbwk::environment_opt(env),
                            env.instance.T * cbwk::environment_opt(env));
            }
            return 0;
        }
        if (*sweep) {
            cfg.sweep_param = args.param;
            cfg.sweep_values = cbwk::parse_value_list(args.values);
        }
        return execute(cfg, args);
    } catch (const cbwk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
