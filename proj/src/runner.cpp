#include "corral/runner.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <variant>

#include "corral/corral_master.hpp"
#include "corral/csv_writer.hpp"
#include "corral/errors.hpp"
#include "corral/exp3p_master.hpp"

namespace corral {

namespace {

constexpr double kRegretTolerance = 1e-12;

// Tracks cumulative pseudo-regret over environment steps and rejects negative gaps.
class RegretMeter {
public:
    double add(const RoundLog& log) {
        const double gap = log.pseudo_regret();
        if (gap < -kRegretTolerance) throw InvariantViolation("chosen arm has a mean above the per-step optimum");
        total_ += std::max(gap, 0.0);
        ++steps_;
        return total_;
    }
    double total() const { return total_; }
    std::size_t steps() const { return steps_; }

private:
    double total_ = 0.0;
    std::size_t steps_ = 0;
};

TraceRow make_row(std::size_t round, std::size_t step, std::size_t base, const RoundLog& log, double cum) {
    return TraceRow{round, step, log.step_kind, base, log.arm, log.reward, log.mean_reward, log.step_optimum, cum};
}

struct RunContext {
    std::uint64_t seed;
    std::unique_ptr<Environment> env;
};

RunContext make_context(const ExperimentConfig& config, std::size_t rep) {
    const std::uint64_t seed = repetition_seed(config.seed, rep);
    Rng setup(seed, streams::kEnvironmentSetup);
    return RunContext{seed, build_environment(config.environment, setup)};
}

void run_master(const ExperimentConfig& config, const Environment& env, std::uint64_t seed, RunRecord& record) {
    const std::size_t horizon = config.horizon;
    const std::size_t m = config.bases.size();
    const double delta = config.delta_value();

    std::vector<SmoothedBase> bases;
    bases.reserve(m);
    std::optional<double> max_alpha;
    for (std::size_t j = 0; j < m; ++j) {
        const BaseSpec& spec = config.bases[j];
        const BoundDescriptor bound = base_bound(spec, env, delta, horizon);
        max_alpha = std::max(max_alpha.value_or(0.0), bound.alpha());
        SmoothingOptions options{config.flags.resample_replay, spec.step2_reward_bias};
        bases.emplace_back(build_base(spec, env, delta), bound, Rng(seed, streams::kBaseFirst + j), options);
    }

    std::variant<CorralMaster, Exp3pMaster> master = [&]() -> std::variant<CorralMaster, Exp3pMaster> {
        if (config.master.kind == MasterSpec::Kind::kCorral) return CorralMaster(m, config.master_eta(), horizon);
        const double p = config.master.p_explore.value_or(Exp3pMaster::default_exploration(horizon, m, max_alpha));
        return Exp3pMaster(m, p);
    }();
    auto* corral = std::get_if<CorralMaster>(&master);
    auto* exp3p = std::get_if<Exp3pMaster>(&master);
    record.restart_cap = corral ? corral->restart_cap() : 0;

    Rng master_rng(seed, streams::kMaster);
    EnvStreams env_rng{Rng(seed, streams::kActionSets), Rng(seed, streams::kRewardNoise)};
    EnvStreams audit_rng{Rng(seed, streams::kAudit), Rng(seed, streams::kAuditNoise)};
    std::vector<Rng> audit_policy;
    if (config.flags.audit_term2) {
        for (std::size_t j = 0; j < m; ++j) audit_policy.emplace_back(seed, streams::kAuditPolicyFirst + j);
    }

    record.selections.assign(m, 0);
    record.restart_counts.assign(m, 0);
    record.drop_rounds.assign(m, std::nullopt);
    const auto checkpoints = checkpoint_rounds(horizon);
    std::size_t next_checkpoint = 0;
    RegretMeter meter;
    if (config.trace) record.trace.reserve(2 * horizon);

    for (std::size_t round = 1; round <= horizon; ++round) {
        const std::size_t chosen = corral ? corral->sample(master_rng) : exp3p->sample(master_rng);
        SmoothedBase& base = bases[chosen];
        ++record.selections[chosen];

        std::array<RoundLog, 2> steps{};
        double reward = 0.0;
        if (!base.dropped()) {
            const auto outcome = base.selected_round(env, env_rng);
            steps = outcome.steps;
            reward = map_feedback(outcome.modified_reward);
            if (config.flags.drop_test && base.base_test(horizon, m, delta) == BaseVerdict::kDrop) {
                base.drop();
                record.drop_rounds[chosen] = round;
                record.events.push_back({round, MasterEvent::Kind::kDrop, chosen, base.diff_stat()});
            }
        } else {
            steps = base.idle_round(env, env_rng);
        }
        for (const RoundLog& log : steps) {
            const double cum = meter.add(log);
            if (config.trace) record.trace.push_back(make_row(round, meter.steps(), chosen, log, cum));
        }

        if (corral) {
            for (std::size_t j : corral->update(chosen, 1.0 - reward)) {
                bases[j].restart();
                ++record.restart_counts[j];
                record.events.push_back({round, MasterEvent::Kind::kRestart, j, 0.0});
            }
        } else {
            exp3p->update(chosen, reward);
        }

        if (config.flags.audit_term2) {
            for (std::size_t j = 0; j < m; ++j) {
                if (j == chosen || bases[j].dropped()) continue;
                for (const RoundLog& log : bases[j].idle_round(env, audit_rng, audit_policy[j])) {
                    if (log.pseudo_regret() < -kRegretTolerance)
                        throw InvariantViolation("audit step has a mean above the per-step optimum");
                    record.audit.push_back({round, j, log.step_kind, log.arm, log.mean_reward, log.step_optimum});
                }
            }
        }

        if (next_checkpoint < checkpoints.size() && round == checkpoints[next_checkpoint]) {
            ++next_checkpoint;
            record.checkpoint_regret.push_back(meter.total());
            const auto& probs = corral ? corral->probabilities() : exp3p->probabilities();
            for (std::size_t j = 0; j < m; ++j)
                record.events.push_back({round, MasterEvent::Kind::kProbability, j, probs[j]});
        }
    }
    record.final_probs = corral ? corral->probabilities() : exp3p->probabilities();
    record.env_steps = meter.steps();
    record.final_regret = meter.total();
}

}  // namespace

std::string to_string(MasterEvent::Kind kind) {
    switch (kind) {
        case MasterEvent::Kind::kRestart: return "restart";
        case MasterEvent::Kind::kDrop: return "drop";
        case MasterEvent::Kind::kProbability: return "probability";
    }
    return "unknown";
}

std::vector<std::size_t> checkpoint_rounds(std::size_t horizon) {
    const std::size_t every = std::max<std::size_t>(1, horizon / 100);
    std::vector<std::size_t> rounds;
    for (std::size_t r = every; r < horizon; r += every) rounds.push_back(r);
    rounds.push_back(horizon);
    return rounds;
}

std::uint64_t repetition_seed(std::uint64_t root, std::size_t rep) {
    return derive_seed(root, streams::kRepetition, rep);
}

double map_feedback(double modified_reward) {
    if (std::isnan(modified_reward)) throw InvariantViolation("modified feedback is NaN");
    return (std::clamp(modified_reward, -1.0, 1.0) + 1.0) / 2.0;
}

std::vector<double> run_base_alone(const ExperimentConfig& config, std::size_t base, const Environment& env,
                                   std::uint64_t rep_seed, std::vector<TraceRow>* trace) {
    const std::uint64_t key = derive_seed(rep_seed, streams::kBaselineRun, base);
    auto learner = build_base(config.bases.at(base), env, config.delta_value());
    EnvStreams env_rng{Rng(key, streams::kActionSets), Rng(key, streams::kRewardNoise)};
    Rng policy_rng(key, streams::kBaseFirst);

    const auto checkpoints = checkpoint_rounds(config.horizon);
    std::vector<double> regret;
    regret.reserve(checkpoints.size());
    std::size_t next_checkpoint = 0;
    RegretMeter meter;
    if (trace) trace->reserve(trace->size() + 2 * config.horizon);
    for (std::size_t round = 1; round <= config.horizon; ++round) {
        for (std::uint8_t kind = 1; kind <= 2; ++kind) {
            const ActionSetPtr set = env.sample_action_set(env_rng.action_sets);
            const RoundLog log = play_on_set(env, *set, env_rng.noise, learner->propose(*set), policy_rng, kind);
            learner->observe(*set, log.arm, log.reward);
            const double cum = meter.add(log);
            if (trace) trace->push_back(make_row(round, meter.steps(), base, log, cum));
        }
        if (next_checkpoint < checkpoints.size() && round == checkpoints[next_checkpoint]) {
            ++next_checkpoint;
            regret.push_back(meter.total());
        }
    }
    return regret;
}

RunRecord run_once(const ExperimentConfig& config, std::size_t rep) {
    validate(config);
    RunContext ctx = make_context(config, rep);
    RunRecord record;
    record.rep = rep;
    if (config.master.kind == MasterSpec::Kind::kSingle) {
        const std::size_t j = config.master.single_base;
        record.checkpoint_regret =
            run_base_alone(config, j, *ctx.env, ctx.seed, config.trace ? &record.trace : nullptr);
        const std::size_t m = config.bases.size();
        record.selections.assign(m, 0);
        record.selections[j] = config.horizon;
        record.restart_counts.assign(m, 0);
        record.drop_rounds.assign(m, std::nullopt);
        record.final_probs.assign(m, 0.0);
        record.final_probs[j] = 1.0;
        record.env_steps = 2 * config.horizon;
        record.final_regret = record.checkpoint_regret.back();
    } else {
        run_master(config, *ctx.env, ctx.seed, record);
    }
    if (config.include_baselines) {
        for (std::size_t j = 0; j < config.bases.size(); ++j)
            record.baseline_regret.push_back(run_base_alone(config, j, *ctx.env, ctx.seed));
    }
    return record;
}

namespace {

RunRecord run_repetition(const ExperimentConfig& config, RunMode mode, std::size_t rep) {
    if (mode == RunMode::kMaster) return run_once(config, rep);
    RunContext ctx = make_context(config, rep);
    RunRecord record;
    record.rep = rep;
    for (std::size_t j = 0; j < config.bases.size(); ++j)
        record.baseline_regret.push_back(run_base_alone(config, j, *ctx.env, ctx.seed));
    return record;
}

// Runs repetitions on a worker pool and hands them to `consume` in repetition order.
// Workers never run more than a bounded number of repetitions ahead of the consumer.
void for_each_repetition(const ExperimentConfig& config, RunMode mode,
                         const std::function<void(RunRecord&&)>& consume) {
    std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, config.reps);
    const std::size_t window = 2 * threads;

    std::mutex mu;
    std::condition_variable cv;
    std::map<std::size_t, RunRecord> ready;
    std::size_t next_claim = 0;
    std::size_t consumed = 0;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            std::size_t rep;
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return failure || next_claim >= config.reps || next_claim < consumed + window; });
                if (failure || next_claim >= config.reps) return;
                rep = next_claim++;
            }
            try {
                RunRecord record = run_repetition(config, mode, rep);
                std::lock_guard lock(mu);
                ready.emplace(rep, std::move(record));
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    try {
        while (consumed < config.reps) {
            RunRecord record;
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return failure || ready.contains(consumed); });
                if (failure) break;
                auto node = ready.extract(consumed);
                record = std::move(node.mapped());
            }
            consume(std::move(record));
            {
                std::lock_guard lock(mu);
                ++consumed;
            }
            cv.notify_all();
        }
    } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
    }
    cv.notify_all();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<std::size_t> to_env_steps(const std::vector<std::size_t>& rounds) {
    std::vector<std::size_t> steps;
    for (std::size_t r : rounds) steps.push_back(2 * r);
    return steps;
}

}  // namespace

MonteCarloResult run_monte_carlo(const ExperimentConfig& config, RunMode mode,
                                 const std::function<void(const RunRecord&)>& on_record) {
    validate(config);
    const std::size_t m = config.bases.size();
    const bool with_master = mode == RunMode::kMaster;
    const bool with_baselines = mode == RunMode::kBasesOnly || config.include_baselines;

    MonteCarloResult result;
    result.checkpoint_steps = to_env_steps(checkpoint_rounds(config.horizon));
    result.max_restarts.assign(m, 0);
    result.drop_counts.assign(m, 0);

    std::vector<std::vector<double>> master_series;
    std::vector<std::vector<std::vector<double>>> base_series(with_baselines ? m : 0);

    for_each_repetition(config, mode, [&](RunRecord&& record) {
        if (on_record) on_record(record);
        if (with_master) {
            master_series.push_back(std::move(record.checkpoint_regret));
            for (std::size_t j = 0; j < m; ++j) {
                result.max_restarts[j] = std::max(result.max_restarts[j], record.restart_counts[j]);
                if (record.drop_rounds[j]) ++result.drop_counts[j];
            }
            result.restart_cap = record.restart_cap;
        }
        for (std::size_t j = 0; j < base_series.size(); ++j) base_series[j].push_back(std::move(record.baseline_regret[j]));
    });

    if (with_master) result.series.push_back(aggregate_series(config.master_label(), result.checkpoint_steps, master_series));
    const auto labels = base_labels(config);
    for (std::size_t j = 0; j < base_series.size(); ++j) {
        std::string label = labels[j];
        if (with_master && label == result.series.front().label) label += "(alone)";
        result.series.push_back(aggregate_series(label, result.checkpoint_steps, base_series[j]));
    }
    return result;
}

MonteCarloResult run_to_directory(const ExperimentConfig& config, RunMode mode, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());

    const bool with_master = mode == RunMode::kMaster;
    std::optional<CsvWriter> trace;
    std::optional<CsvWriter> events;
    std::optional<CsvWriter> audit;
    if (with_master && config.trace) {
        trace.emplace(out_dir / "trace.csv",
                      std::initializer_list<std::string_view>{"rep", "master_round", "env_step", "step_kind", "base_id",
                                                              "action_id", "reward", "mean_reward", "step_optimum",
                                                              "cum_pseudo_regret"});
    }
    if (with_master) {
        events.emplace(out_dir / "events.csv",
                       std::initializer_list<std::string_view>{"rep", "master_round", "event", "base_id", "value"});
    }
    if (with_master && config.flags.audit_term2) {
        audit.emplace(out_dir / "audit.csv",
                      std::initializer_list<std::string_view>{"rep", "master_round", "base_id", "step_kind", "action_id",
                                                              "mean_reward", "step_optimum", "pseudo_regret"});
    }

    auto sink = [&](const RunRecord& record) {
        if (trace) {
            for (const TraceRow& row : record.trace) {
                trace->field(record.rep).field(row.master_round).field(row.env_step).field(row.step_kind);
                trace->field(row.base_id).field(row.action_id).field(row.reward).field(row.mean_reward);
                trace->field(row.step_optimum).field(row.cum_pseudo_regret).end_row();
            }
        }
        if (events) {
            for (const MasterEvent& e : record.events) {
                events->field(record.rep).field(e.master_round).field(to_string(e.kind)).field(e.base).field(e.value);
                events->end_row();
            }
        }
        if (audit) {
            for (const AuditRow& row : record.audit) {
                audit->field(record.rep).field(row.master_round).field(row.base_id).field(row.step_kind);
                audit->field(row.action_id).field(row.mean_reward).field(row.step_optimum);
                audit->field(row.step_optimum - row.mean_reward).end_row();
            }
        }
    };
    MonteCarloResult result = run_monte_carlo(config, mode, sink);
    if (trace) trace->flush();
    if (events) events->flush();
    if (audit) audit->flush();

    CsvWriter summary(out_dir / "summary.csv", {"label", "checkpoint_step", "mean_regret", "std_regret"});
    for (const SeriesStats& s : result.series) {
        for (std::size_t c = 0; c < s.steps.size(); ++c)
            summary.field(s.label).field(s.steps[c]).field(s.mean[c]).field(s.std[c]).end_row();
    }
    summary.flush();

    CsvWriter final_csv(out_dir / "final.csv",
                        {"label", "reps", "mean_regret", "std_regret", "q05", "q25", "q50", "q75", "q95"});
    for (const SeriesStats& s : result.series) {
        final_csv.field(s.label).field(s.finals.size()).field(s.final_mean()).field(s.final_std());
        for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) final_csv.field(s.final_quantile(q));
        final_csv.end_row();
    }
    final_csv.flush();
    return result;
}

}  // namespace corral
