#include "cbwk/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cbwk {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_number(const std::string& v) {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
}

int to_int(const std::string& v) {
    const double x = to_number(v);
    if (x != std::floor(x) || std::abs(x) > 2e9) throw std::invalid_argument(v);
    return static_cast<int>(x);
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument(v);
}

OracleKind to_oracle(const std::string& v) {
    if (v == "glmtron") return OracleKind::GlmtronNewton;
    if (v == "ogd") return OracleKind::OnlineGradientDescent;
    throw std::invalid_argument(v);
}

}  // namespace

ConfigErrors::ConfigErrors(std::vector<std::string> problems)
    : ConfigError("invalid configuration: " + join(problems, "; ")), problems_(std::move(problems)) {}

std::string AlgorithmSpec::name() const {
    switch (kind) {
        case AlgorithmKind::LinUcb:
            return "linucb";
        case AlgorithmKind::TwoStage:
            return std::string("twostage-") + to_string(oracle);
        case AlgorithmKind::SquareCBwK:
        default:
            return std::string("squarecbwk-") + to_string(oracle);
    }
}

AlgorithmSpec AlgorithmSpec::parse(const std::string& token, OracleKind default_oracle) {
    AlgorithmSpec spec;
    spec.oracle = default_oracle;
    const auto dash = token.find('-');
    const std::string head = token.substr(0, dash);
    if (head == "linucb" && dash == std::string::npos) {
        spec.kind = AlgorithmKind::LinUcb;
        return spec;
    }
    if (head == "squarecbwk")
        spec.kind = AlgorithmKind::SquareCBwK;
    else if (head == "twostage")
        spec.kind = AlgorithmKind::TwoStage;
    else
        throw std::invalid_argument(token);
    if (dash != std::string::npos) spec.oracle = to_oracle(token.substr(dash + 1));
    return spec;
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) out.push_back(to_number(item));
    if (out.empty()) throw std::invalid_argument("empty value list");
    return out;
}

std::vector<double> ExperimentConfig::values() const {
    if (!sweep_param.empty()) return sweep_values;
    return {double(m)};
}

ExperimentConfig ExperimentConfig::at(double value) const {
    ExperimentConfig c = *this;
    const int v = static_cast<int>(std::lround(value));
    if (sweep_param == "m")
        c.m = v;
    else if (sweep_param == "K")
        c.K = v;
    else if (sweep_param == "T")
        c.T = v;
    return c;
}

double ExperimentConfig::budget_for(int horizon) const {
    if (budget_ratio) return *budget_ratio * horizon;
    if (budget) return *budget;
    return double(horizon);
}

EnvironmentSpec ExperimentConfig::environment() const {
    const double B = budget_for(T);
    EnvironmentSpec env = make_basis_env(m, K, d, noise_variance, T, B);
    if (family == EnvFamily::GlmFixed) {
        const double scale = 1.0 / std::sqrt(1.5);
        ArmFeatures ctx = env.contexts.front();
        ctx.reward *= scale;
        ctx.cost *= scale;
        env = make_glm_env(env.instance, env.reward_param, env.cost_param, {ctx}, Link::Logistic);
    }
    env.bounded = env.bounded || bounded;
    env.null_arm = null_arm;
    env.validate();
    return env;
}

PolicyConfig ExperimentConfig::policy(OracleKind kind) const {
    PolicyConfig p;
    p.oracle = kind;
    p.eta_scale = eta_scale;
    p.bound_constant = bound_constant;
    p.gamma = gamma;
    p.radius = radius;
    return p;
}

TwoStageConfig ExperimentConfig::twostage() const {
    TwoStageConfig ts;
    ts.t0 = t0;
    ts.error_constant = error_constant;
    return ts;
}

LinUcbConfig ExperimentConfig::linucb() const {
    LinUcbConfig c;
    c.multiplier = linucb_multiplier;
    c.radius = radius;
    return c;
}

void ExperimentConfig::validate() const {
    std::vector<std::string> problems;
    if (algorithms.empty()) problems.push_back("algorithm.names must list at least one algorithm");
    if (seed_count < 1) problems.push_back("seeds.count >= 1 violated");
    if (budget && budget_ratio) problems.push_back("set only one of environment.B and environment.budget_ratio");
    if (!(noise_variance >= 0.0)) problems.push_back("environment.noise_variance >= 0 violated");
    if (!sweep_param.empty() && sweep_param != "m" && sweep_param != "K" && sweep_param != "T")
        problems.push_back("sweep.param must be one of m, K, T");
    if (!sweep_param.empty() && sweep_values.empty()) problems.push_back("sweep.values is empty");
    for (const double v : values()) {
        if (v != std::floor(v) || v < 1) {
            problems.push_back("sweep value " + std::to_string(v) + " must be a positive integer");
            continue;
        }
        const ExperimentConfig c = at(v);
        try {
            c.environment();
        } catch (const ConfigError& e) {
            problems.push_back((sweep_param.empty() ? std::string() : sweep_param + " = " + std::to_string(int(v)) + ": ") +
                               e.what());
        }
    }
    if (!problems.empty()) throw ConfigErrors(std::move(problems));
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::vector<std::string> problems;
    std::map<std::string, std::string> kv;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        if (kv.count(key)) problems.push_back("duplicate key " + key);
        kv[key] = trim(line.substr(eq + 1));
    }

    using Setter = std::function<void(const std::string&)>;
    std::string algorithm_names;
    const std::map<std::string, Setter> setters = {
        {"environment.family",
         [&](const std::string& v) {
             if (v == "basis")
                 cfg.family = EnvFamily::Basis;
             else if (v == "glm_fixed")
                 cfg.family = EnvFamily::GlmFixed;
             else
                 throw std::invalid_argument(v);
         }},
        {"environment.m", [&](const std::string& v) { cfg.m = to_int(v); }},
        {"environment.K", [&](const std::string& v) { cfg.K = to_int(v); }},
        {"environment.d", [&](const std::string& v) { cfg.d = to_int(v); }},
        {"environment.T", [&](const std::string& v) { cfg.T = to_int(v); }},
        {"environment.B", [&](const std::string& v) { cfg.budget = to_number(v); }},
        {"environment.budget_ratio", [&](const std::string& v) { cfg.budget_ratio = to_number(v); }},
        {"environment.noise_variance", [&](const std::string& v) { cfg.noise_variance = to_number(v); }},
        {"environment.bounded", [&](const std::string& v) { cfg.bounded = to_bool(v); }},
        {"environment.null_arm", [&](const std::string& v) { cfg.null_arm = to_bool(v); }},
        {"algorithm.names", [&](const std::string& v) { algorithm_names = v; }},
        {"algorithm.gamma", [&](const std::string& v) { cfg.gamma = to_number(v); }},
        {"algorithm.radius", [&](const std::string& v) { cfg.radius = to_number(v); }},
        {"algorithm.t0", [&](const std::string& v) { cfg.t0 = to_int(v); }},
        {"algorithm.linucb_multiplier", [&](const std::string& v) { cfg.linucb_multiplier = to_number(v); }},
        {"algorithm.error_constant", [&](const std::string& v) { cfg.error_constant = to_number(v); }},
        {"oracle.kind", [&](const std::string& v) { cfg.oracle = to_oracle(v); }},
        {"oracle.eta_scale", [&](const std::string& v) { cfg.eta_scale = to_number(v); }},
        {"oracle.bound_constant", [&](const std::string& v) { cfg.bound_constant = to_number(v); }},
        {"sweep.param", [&](const std::string& v) { cfg.sweep_param = v; }},
        {"sweep.values", [&](const std::string& v) { cfg.sweep_values = parse_value_list(v); }},
        {"seeds.count", [&](const std::string& v) { cfg.seed_count = to_int(v); }},
        {"seeds.base",
         [&](const std::string& v) {
             std::size_t used = 0;
             cfg.base_seed = std::stoull(v, &used);
             if (used != v.size()) throw std::invalid_argument(v);
         }},
        {"output.dir", [&](const std::string& v) { cfg.output_dir = v; }},
    };

    const std::vector<std::string> required = {"environment.family", "environment.m", "environment.K",
                                               "environment.d", "environment.T", "algorithm.names"};
    std::vector<std::string> missing;
    for (const auto& key : required)
        if (!kv.count(key)) missing.push_back(key);
    if (!missing.empty()) problems.push_back("missing required keys: " + join(missing, ", "));

    for (const auto& [key, value] : kv) {
        const auto it = setters.find(key);
        if (it == setters.end()) {
            problems.push_back("unknown key " + key);
            continue;
        }
        try {
            it->second(value);
        } catch (const std::exception&) {
            problems.push_back("invalid value for " + key + ": '" + value + "'");
        }
    }
    // oracle.kind must be known before algorithm names are resolved
    for (const auto& token : split(algorithm_names, ',')) {
        try {
            cfg.algorithms.push_back(AlgorithmSpec::parse(token, cfg.oracle));
        } catch (const std::exception&) {
            problems.push_back("unknown algorithm '" + token +
                               "' (expected squarecbwk[-glmtron|-ogd], twostage[-glmtron|-ogd] or linucb)");
        }
    }

    if (!problems.empty()) throw ConfigErrors(std::move(problems));
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace cbwk
