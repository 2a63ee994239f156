#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "corral/analysis.hpp"
#include "corral/config.hpp"

namespace corral {

struct TraceRow {
    std::size_t master_round;
    std::size_t env_step;
    std::uint8_t step_kind;
    std::size_t base_id;
    std::size_t action_id;
    double reward;
    double mean_reward;
    double step_optimum;
    double cum_pseudo_regret;
};

struct MasterEvent {
    enum class Kind { kRestart, kDrop, kProbability };
    std::size_t master_round;
    Kind kind;
    std::size_t base;
    double value;  // drop: diff statistic; probability: p_j after the round
};

std::string to_string(MasterEvent::Kind kind);

// One step played by an unselected base while auditing the replay regret.
struct AuditRow {
    std::size_t master_round;
    std::size_t base_id;
    std::uint8_t step_kind;
    std::size_t action_id;
    double mean_reward;
    double step_optimum;
};

struct RunRecord {
    std::size_t rep = 0;
    std::vector<TraceRow> trace;  // empty unless tracing is enabled
    std::vector<double> checkpoint_regret;
    std::vector<std::vector<double>> baseline_regret;  // per base, at the same checkpoints
    std::vector<MasterEvent> events;
    std::vector<AuditRow> audit;
    std::vector<std::size_t> selections;
    std::vector<std::size_t> restart_counts;
    std::vector<std::optional<std::size_t>> drop_rounds;
    std::vector<double> final_probs;
    std::size_t restart_cap = 0;
    std::size_t env_steps = 0;
    double final_regret = 0.0;
};

// Master rounds at which cumulative regret is recorded: every max(1, T/100) rounds and T.
std::vector<std::size_t> checkpoint_rounds(std::size_t horizon);

std::uint64_t repetition_seed(std::uint64_t root, std::size_t rep);

// Master rewards: clip the modified feedback to [-1, 1] and map it onto [0, 1].
double map_feedback(double modified_reward);

// Runs the master (or the single configured base) for repetition rep. Baselines are
// added when config.include_baselines is set.
RunRecord run_once(const ExperimentConfig& config, std::size_t rep);

// Cumulative regret of raw base `base` over 2T environment steps, recorded at
// 2 * checkpoint_rounds(T). Appends trace rows when trace is non-null.
std::vector<double> run_base_alone(const ExperimentConfig& config, std::size_t base, const Environment& env,
                                   std::uint64_t rep_seed, std::vector<TraceRow>* trace = nullptr);

enum class RunMode { kMaster, kBasesOnly };

struct MonteCarloResult {
    std::vector<std::size_t> checkpoint_steps;  // environment steps
    std::vector<SeriesStats> series;            // master first (kMaster), then the bases run alone
    std::vector<std::size_t> max_restarts;
    std::vector<std::size_t> drop_counts;
    std::size_t restart_cap = 0;
};

// Runs config.reps repetitions in parallel. on_record sees every record in repetition order.
MonteCarloResult run_monte_carlo(const ExperimentConfig& config, RunMode mode,
                                 const std::function<void(const RunRecord&)>& on_record = {});

// Runs and writes trace.csv, summary.csv, final.csv, events.csv and, when auditing,
// audit.csv into out_dir.
MonteCarloResult run_to_directory(const ExperimentConfig& config, RunMode mode, const std::filesystem::path& out_dir);

}  // namespace corral
