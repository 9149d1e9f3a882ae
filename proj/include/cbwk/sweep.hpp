#pragma once

#include "cbwk/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cbwk {

struct SweepRow {
    std::string algorithm;
    std::string sweep_param;
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    double regret = 0.0;
    int tau = 0;
    double total_reward = 0.0;
    double runtime_ms = 0.0;
    std::string error;  // empty when the cell ran
};

struct SweepCell {
    std::string algorithm;
    double sweep_value = 0.0;
    int n = 0;
    double mean_regret = 0.0;
    double std_regret = 0.0;  // sample standard deviation, 0 for a single row
};

struct SweepResult {
    std::vector<SweepRow> rows;  // ordered by (algorithm, value, seed index)

    /// Per-(algorithm, value) aggregates over successful rows, in row order.
    std::vector<SweepCell> aggregate() const;
};

/// Exact per-round optimum of the static program for a fixed-context env.
double environment_opt(const EnvironmentSpec& env);

/// Runs one algorithm on one environment; returns (regret, trace).
SweepRow run_cell(const ExperimentConfig& cfg, const AlgorithmSpec& algo, double value,
                  std::uint64_t seed, std::uint64_t stream);

/// Every (algorithm, value, seed) cell; cell i uses seed base_seed + i.
/// Output is independent of `parallelism`.
SweepResult run_sweep(const ExperimentConfig& cfg, int parallelism = 1);

struct CsvOptions {
    bool timing = false;  // write measured runtimes; otherwise runtime_ms is 0
};

void write_csv(const SweepResult& result, const std::string& path, const CsvOptions& opts = {});
std::string format_csv(const SweepResult& result, const CsvOptions& opts = {});
SweepResult read_csv(const std::string& path);

/// Aggregates plus the RNG identifier, one line per (algorithm, value).
void write_summary(const SweepResult& result, const std::string& path);

/// Standalone SVG: mean regret against the swept value, +-1 std band, one
/// series per algorithm.
void render_plot(const SweepResult& result, const std::string& path);
std::string format_svg(const SweepResult& result);

}  // namespace cbwk
