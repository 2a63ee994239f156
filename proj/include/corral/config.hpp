#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "corral/bases.hpp"
#include "corral/bound.hpp"
#include "corral/environments.hpp"
#include "corral/smoothing.hpp"

namespace corral {

struct EnvironmentSpec {
    enum class Kind { kKArmed, kLinear, kMisspecifiedLinear, kNonlinear };
    Kind kind = Kind::kKArmed;

    // k_armed
    std::vector<double> means;
    Noise noise = Noise::gaussian(1.0);

    // linear / misspecified_linear / nonlinear
    std::size_t num_arms = 50;
    std::size_t dim = 2;
    ActionSetMode mode = ActionSetMode::kFixed;
    double noise_sigma = 1.0;
    std::optional<std::vector<double>> theta;
    std::optional<std::vector<std::vector<double>>> arms;
    double eps_star = 0.0;
    std::optional<std::vector<double>> perturbation;
    double mu_max = 10.0;
    std::optional<std::vector<double>> mu;
};

struct BaseSpec {
    BaseKind kind = BaseKind::kUcb;
    double c = 1.0;                          // egreedy
    double reg_lambda = 1.0;                 // linucb
    std::optional<double> conf_delta;        // linucb; defaults to the run delta
    double misspec_eps = 0.0;                // linucb
    std::optional<BoundDescriptor> bound;    // overrides the per-kind descriptor
    double step2_reward_bias = 0.0;
    std::string label;                       // empty: learner's own label
};

struct MasterSpec {
    enum class Kind { kCorral, kExp3p, kSingle };
    Kind kind = Kind::kCorral;
    std::optional<double> eta;
    std::optional<double> eta_over_sqrt_t;   // eta = value / sqrt(T)
    std::optional<double> p_explore;
    std::size_t single_base = 0;
};

struct RunFlags {
    bool audit_term2 = false;
    bool resample_replay = false;
    bool drop_test = true;
};

struct ExperimentConfig {
    std::string label;
    EnvironmentSpec environment;
    MasterSpec master;
    std::vector<BaseSpec> bases;
    std::size_t horizon = 1000;  // master rounds; 2 environment steps each
    std::size_t reps = 1;
    std::uint64_t seed = 1;
    std::optional<double> delta;
    RunFlags flags;
    bool include_baselines = false;
    bool trace = true;
    std::size_t threads = 0;  // 0: hardware concurrency

    double delta_value() const { return delta ? *delta : 1.0 / static_cast<double>(horizon); }
    double master_eta() const;
    std::string master_label() const;
};

// Throws ConfigError on unknown keys, missing fields or inconsistent settings.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
void validate(const ExperimentConfig& config);

std::unique_ptr<Environment> build_environment(const EnvironmentSpec& spec, Rng& setup_rng);
std::unique_ptr<BaseAlgorithm> build_base(const BaseSpec& spec, const Environment& env, double delta);
BoundDescriptor base_bound(const BaseSpec& spec, const Environment& env, double delta, std::size_t horizon);

// Display labels for the configured bases, made unique.
std::vector<std::string> base_labels(const ExperimentConfig& config);

}  // namespace corral
