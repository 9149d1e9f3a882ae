#pragma once

#include "cbwk/environment.hpp"
#include "cbwk/linucb.hpp"
#include "cbwk/policy.hpp"
#include "cbwk/twostage.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbwk {

/// All problems found while parsing or validating a configuration document.
class ConfigErrors : public ConfigError {
public:
    explicit ConfigErrors(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

enum class AlgorithmKind { SquareCBwK, TwoStage, LinUcb };

/// One series of an experiment, e.g. "squarecbwk-glmtron".
struct AlgorithmSpec {
    AlgorithmKind kind = AlgorithmKind::SquareCBwK;
    OracleKind oracle = OracleKind::GlmtronNewton;

    std::string name() const;
    static AlgorithmSpec parse(const std::string& token, OracleKind default_oracle);
};

enum class EnvFamily { Basis, GlmFixed };

struct ExperimentConfig {
    // environment
    EnvFamily family = EnvFamily::Basis;
    int m = 10;
    int K = 3;
    int d = 4;
    int T = 2000;
    std::optional<double> budget;        // environment.B
    std::optional<double> budget_ratio;  // environment.budget_ratio, B = ratio * T
    double noise_variance = 0.2;
    bool bounded = false;
    bool null_arm = false;

    // algorithms
    std::vector<AlgorithmSpec> algorithms;
    OracleKind oracle = OracleKind::GlmtronNewton;
    double eta_scale = 1.0;
    double bound_constant = 1.0;
    std::optional<double> gamma;
    std::optional<double> radius;
    std::optional<int> t0;
    double error_constant = 1.0;
    double linucb_multiplier = 1.0;

    // sweep
    std::string sweep_param;       // empty, "m", "K" or "T"
    std::vector<double> sweep_values;

    int seed_count = 10;
    std::uint64_t base_seed = 0;
    std::string output_dir = "out";

    /// Values iterated by a sweep; the single current value when no sweep is set.
    std::vector<double> values() const;
    std::string param_name() const { return sweep_param.empty() ? "m" : sweep_param; }

    /// Copy with the swept parameter set to `value`.
    ExperimentConfig at(double value) const;
    double budget_for(int T) const;

    EnvironmentSpec environment() const;
    PolicyConfig policy(OracleKind kind) const;
    TwoStageConfig twostage() const;
    LinUcbConfig linucb() const;

    /// Throws ConfigErrors listing every violation.
    void validate() const;
};

/// key = value lines, '#' comments, dotted section prefixes. Unknown keys and
/// malformed values are all reported together.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::vector<double> parse_value_list(const std::string& text);

}  // namespace cbwk
