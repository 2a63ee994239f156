#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "corral/analysis.hpp"
#include "corral/config.hpp"
#include "corral/corral_master.hpp"
#include "corral/errors.hpp"
#include "corral/exp3p_master.hpp"
#include "corral/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct RunArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    std::optional<std::size_t> threads;
    bool audit_term2 = false;
    bool no_drop_test = false;
    bool no_trace = false;
};

corral::ExperimentConfig prepare(const RunArgs& args) {
    corral::ExperimentConfig config = corral::load_config(args.config);
    if (args.seed) config.seed = *args.seed;
    if (args.reps) config.reps = *args.reps;
    if (args.threads) config.threads = *args.threads;
    if (args.audit_term2) config.flags.audit_term2 = true;
    if (args.no_drop_test) config.flags.drop_test = false;
    if (args.no_trace) config.trace = false;
    corral::validate(config);
    return config;
}

void print_result(const corral::MonteCarloResult& result) {
    for (const auto& s : result.series) {
        std::printf("%-28s final mean regret %12.4f  std %10.4f  (%zu reps)\n", s.label.c_str(), s.final_mean(),
                    s.final_std(), s.finals.size());
    }
    for (std::size_t j = 0; j < result.max_restarts.size(); ++j) {
        if (result.max_restarts[j] || result.drop_counts[j])
            std::printf("base %zu: max restarts %zu (cap %zu), dropped in %zu reps\n", j, result.max_restarts[j],
                        result.restart_cap, result.drop_counts[j]);
    }
}

void print_oracles() {
    const double root = (3.0 - std::sqrt(5.0)) / 2.0;
    const auto omd = corral::log_barrier_omd(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 0.0},
                                             std::vector<double>{1.0, 1.0});
    std::printf("log_barrier_omd([1/2,1/2],[1,0],[1,1]): lambda closed form %.12f, computed %.12f\n", root, omd.lambda);
    std::printf("  probabilities closed form [%.9f, %.9f], computed [%.9f, %.9f], residual %.3g\n", 1.0 / (3.0 - root),
                1.0 / (2.0 - root), omd.probs[0], omd.probs[1], omd.residual);

    const double e2 = std::exp(2.0);
    corral::Exp3pMaster exp3p(2, 0.1);
    exp3p.update(0, 1.0);
    std::printf("EXP3.P M=2 p=0.1 chosen=0 reward=1: gains (2.1, 0.1); probs_0 = 0.8*e^2/(e^2+1) + 0.1 = %.9f, "
                "computed %.9f\n",
                0.8 * e2 / (e2 + 1.0) + 0.1, exp3p.probabilities()[0]);

    const double threshold = 10.0 + 2.0 * std::sqrt(200.0 * std::log(4.0 * 1e4 * 4.0 / 1e-4));
    std::printf("base test threshold l=100 T=1e4 M=4 delta=1e-4 U(100)=10: %.6f\n", threshold);
    std::printf("smoothing feedback alpha=1/2 coeff=1 s=4 r2=0.8: %.6f\n", 0.8 - std::sqrt(4.0) / 4.0);
    std::printf("geometric grid [1, 2T] factor 2 at T=50000: %zu values\n", corral::make_geometric_grid(1, 1e5, 2).size());
    std::printf("uniform policy on means (0.5, 0.45): expected pseudo-regret slope %.6f per step\n", 0.05 / 2.0);
    std::printf("sublinearity slope of c*t, c*sqrt(t), c*t^(2/3): 1, 0.5, %.6f\n", 2.0 / 3.0);
    std::printf("epsilon-greedy c = 5k/gap^2 for k=2, gap=0.05: %.1f\n", 5.0 * 2.0 / (0.05 * 0.05));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CORRAL model-selection bandit simulator"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto add_run_options = [&](CLI::App* cmd) {
        cmd->add_option("--config", run_args.config, "JSON experiment config")->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", run_args.out, "output directory")->required();
        cmd->add_option("--seed", run_args.seed, "root seed (overrides the config)");
        cmd->add_option("--reps", run_args.reps, "number of repetitions (overrides the config)");
        cmd->add_option("--threads", run_args.threads, "worker threads (0: all cores)");
        cmd->add_flag("--no-trace", run_args.no_trace, "skip trace.csv");
    };
    CLI::App* run = app.add_subcommand("run", "run the configured master and write CSV results");
    add_run_options(run);
    run->add_flag("--audit-term2", run_args.audit_term2, "let unselected bases replay their frozen policy");
    run->add_flag("--no-drop-test", run_args.no_drop_test, "disable the base test");
    CLI::App* sweep = app.add_subcommand("sweep", "run every configured base alone over 2T steps");
    add_run_options(sweep);
    CLI::App* oracle = app.add_subcommand("oracle", "print reference values used by the tests");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (oracle->parsed()) {
            print_oracles();
            return 0;
        }
        const auto config = prepare(run_args);
        const auto mode = run->parsed() ? corral::RunMode::kMaster : corral::RunMode::kBasesOnly;
        print_result(corral::run_to_directory(config, mode, run_args.out));
        return 0;
    } catch (const corral::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const corral::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const corral::ContractViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
