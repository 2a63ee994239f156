#include "corral/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "corral/analysis.hpp"
#include "corral/errors.hpp"

namespace corral {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& item : obj.items()) {
        if (!allowed.contains(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError("missing '" + key + "' in " + where);
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + key + "' in " + where + ": " + e.what());
    }
}

template <class T>
T get_or(const json& obj, const std::string& key, T fallback, const std::string& where) {
    return obj.contains(key) ? get<T>(obj, key, where) : fallback;
}

template <class T>
std::optional<T> get_opt(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    return get<T>(obj, key, where);
}

std::string format_param(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

ActionSetMode parse_mode(const std::string& s) {
    if (s == "fixed") return ActionSetMode::kFixed;
    if (s == "iid_resample") return ActionSetMode::kIidResample;
    throw ConfigError("unknown action_set_mode '" + s + "'");
}

EnvironmentSpec parse_environment(const json& j) {
    const std::string where = "environment";
    EnvironmentSpec spec;
    const auto kind = get<std::string>(j, "kind", where);
    if (kind == "k_armed") {
        check_keys(j, {"kind", "means", "noise"}, where);
        spec.kind = EnvironmentSpec::Kind::kKArmed;
        spec.means = get<std::vector<double>>(j, "means", where);
        if (j.contains("noise")) {
            const json& n = j.at("noise");
            check_keys(n, {"kind", "sigma"}, "environment.noise");
            const auto nk = get<std::string>(n, "kind", "environment.noise");
            if (nk == "bernoulli") {
                spec.noise = Noise::bernoulli();
            } else if (nk == "gaussian") {
                spec.noise = Noise::gaussian(get_or<double>(n, "sigma", 1.0, "environment.noise"));
            } else {
                throw ConfigError("unknown noise kind '" + nk + "'");
            }
        }
        return spec;
    }
    if (kind == "linear" || kind == "misspecified_linear") {
        std::set<std::string> keys{"kind", "num_arms", "dim", "action_set_mode", "noise_sigma", "theta", "arms"};
        if (kind == "misspecified_linear") keys.insert({"eps_star", "perturbation"});
        check_keys(j, keys, where);
        spec.kind = kind == "linear" ? EnvironmentSpec::Kind::kLinear : EnvironmentSpec::Kind::kMisspecifiedLinear;
        spec.num_arms = get_or<std::size_t>(j, "num_arms", 50, where);
        spec.dim = get_or<std::size_t>(j, "dim", 2, where);
        spec.mode = parse_mode(get_or<std::string>(j, "action_set_mode", "fixed", where));
        spec.noise_sigma = get_or<double>(j, "noise_sigma", 1.0, where);
        spec.theta = get_opt<std::vector<double>>(j, "theta", where);
        spec.arms = get_opt<std::vector<std::vector<double>>>(j, "arms", where);
        if (spec.arms) spec.num_arms = spec.arms->size();
        if (spec.theta) spec.dim = spec.theta->size();
        if (kind == "misspecified_linear") {
            spec.eps_star = get<double>(j, "eps_star", where);
            spec.perturbation = get_opt<std::vector<double>>(j, "perturbation", where);
        }
        return spec;
    }
    if (kind == "nonlinear") {
        check_keys(j, {"kind", "num_arms", "dim", "noise_sigma", "mu_max", "mu", "arms"}, where);
        spec.kind = EnvironmentSpec::Kind::kNonlinear;
        spec.num_arms = get_or<std::size_t>(j, "num_arms", 50, where);
        spec.dim = get_or<std::size_t>(j, "dim", 2, where);
        spec.noise_sigma = get_or<double>(j, "noise_sigma", 1.0, where);
        spec.mu_max = get_or<double>(j, "mu_max", 10.0, where);
        spec.mu = get_opt<std::vector<double>>(j, "mu", where);
        spec.arms = get_opt<std::vector<std::vector<double>>>(j, "arms", where);
        if (spec.mu) spec.num_arms = spec.mu->size();
        return spec;
    }
    throw ConfigError("unknown environment kind '" + kind + "'");
}

const std::set<std::string> kBaseKeys{"kind",   "c",     "reg_lambda",        "conf_delta", "misspec_eps",
                                      "bound",  "label", "step2_reward_bias"};

BaseSpec parse_base(const json& j, const std::string& where) {
    check_keys(j, kBaseKeys, where);
    BaseSpec spec;
    spec.kind = parse_base_kind(get<std::string>(j, "kind", where));
    spec.c = get_or<double>(j, "c", 1.0, where);
    spec.reg_lambda = get_or<double>(j, "reg_lambda", 1.0, where);
    spec.conf_delta = get_opt<double>(j, "conf_delta", where);
    spec.misspec_eps = get_or<double>(j, "misspec_eps", 0.0, where);
    spec.step2_reward_bias = get_or<double>(j, "step2_reward_bias", 0.0, where);
    spec.label = get_or<std::string>(j, "label", "", where);
    if (j.contains("bound")) {
        const json& b = j.at("bound");
        check_keys(b, {"alpha", "coeff"}, where + ".bound");
        try {
            spec.bound = BoundDescriptor(get<double>(b, "alpha", where + ".bound"), get<double>(b, "coeff", where + ".bound"));
        } catch (const ContractViolation& e) {
            throw ConfigError(where + ".bound: " + e.what());
        }
    }
    return spec;
}

std::vector<BaseSpec> parse_grid(const json& j) {
    const std::string where = "base_grid";
    std::set<std::string> keys = kBaseKeys;
    keys.insert({"param", "lo", "hi", "factor"});
    keys.erase("label");
    check_keys(j, keys, where);
    const auto param = get<std::string>(j, "param", where);
    if (param != "c" && param != "misspec_eps") throw ConfigError("base_grid.param must be 'c' or 'misspec_eps'");
    std::vector<double> grid;
    try {
        grid = make_geometric_grid(get<double>(j, "lo", where), get<double>(j, "hi", where),
                                   get_or<double>(j, "factor", 2.0, where));
    } catch (const ContractViolation& e) {
        throw ConfigError(std::string("base_grid: ") + e.what());
    }
    json base = j;
    for (const char* k : {"param", "lo", "hi", "factor"}) base.erase(k);
    std::vector<BaseSpec> out;
    for (double v : grid) {
        base[param] = v;
        out.push_back(parse_base(base, where));
    }
    return out;
}

MasterSpec parse_master(const json& j) {
    const std::string where = "master";
    MasterSpec spec;
    const auto kind = get<std::string>(j, "kind", where);
    if (kind == "corral") {
        check_keys(j, {"kind", "eta", "eta_over_sqrt_t"}, where);
        spec.kind = MasterSpec::Kind::kCorral;
        spec.eta = get_opt<double>(j, "eta", where);
        spec.eta_over_sqrt_t = get_opt<double>(j, "eta_over_sqrt_t", where);
        if (spec.eta && spec.eta_over_sqrt_t) throw ConfigError("master: give either eta or eta_over_sqrt_t");
    } else if (kind == "exp3p") {
        check_keys(j, {"kind", "p_explore"}, where);
        spec.kind = MasterSpec::Kind::kExp3p;
        spec.p_explore = get_opt<double>(j, "p_explore", where);
    } else if (kind == "single") {
        check_keys(j, {"kind", "base"}, where);
        spec.kind = MasterSpec::Kind::kSingle;
        spec.single_base = get_or<std::size_t>(j, "base", 0, where);
    } else {
        throw ConfigError("unknown master kind '" + kind + "'");
    }
    return spec;
}

std::string default_label(const BaseSpec& spec) {
    switch (spec.kind) {
        case BaseKind::kUcb: return "ucb";
        case BaseKind::kExp3: return "exp3";
        case BaseKind::kEpsilonGreedy: return "egreedy(c=" + format_param(spec.c) + ")";
        case BaseKind::kLinUcb:
            return spec.misspec_eps > 0.0 ? "linucb(eps=" + format_param(spec.misspec_eps) + ")" : "linucb";
    }
    return "base";
}

}  // namespace

double ExperimentConfig::master_eta() const {
    if (master.eta) return *master.eta;
    const double t = static_cast<double>(horizon);
    if (master.eta_over_sqrt_t) return *master.eta_over_sqrt_t / std::sqrt(t);
    return std::sqrt(static_cast<double>(bases.size()) / t);
}

std::string ExperimentConfig::master_label() const {
    if (!label.empty()) return label;
    switch (master.kind) {
        case MasterSpec::Kind::kCorral: return "corral";
        case MasterSpec::Kind::kExp3p: return "exp3p";
        case MasterSpec::Kind::kSingle: return base_labels(*this).at(master.single_base);
    }
    return "master";
}

std::vector<std::string> base_labels(const ExperimentConfig& config) {
    std::vector<std::string> labels;
    for (const auto& b : config.bases) labels.push_back(b.label.empty() ? default_label(b) : b.label);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        bool duplicate = false;
        for (std::size_t j = 0; j < labels.size(); ++j) duplicate |= (i != j && labels[i] == labels[j]);
        if (duplicate) labels[i] += "[" + std::to_string(i) + "]";
    }
    return labels;
}

ExperimentConfig parse_config(const json& doc) {
    check_keys(doc, {"label", "environment", "master", "bases", "base_grid", "horizon", "reps", "seed", "delta",
                     "flags", "include_baselines", "trace", "threads"},
               "config");
    ExperimentConfig config;
    config.label = get_or<std::string>(doc, "label", "", "config");
    config.environment = parse_environment(get<json>(doc, "environment", "config"));
    config.master = parse_master(get<json>(doc, "master", "config"));
    if (doc.contains("bases")) {
        const json& list = doc.at("bases");
        if (!list.is_array()) throw ConfigError("bases must be an array");
        for (std::size_t i = 0; i < list.size(); ++i)
            config.bases.push_back(parse_base(list[i], "bases[" + std::to_string(i) + "]"));
    }
    if (doc.contains("base_grid")) {
        auto grid = parse_grid(doc.at("base_grid"));
        config.bases.insert(config.bases.end(), grid.begin(), grid.end());
    }
    config.horizon = get<std::size_t>(doc, "horizon", "config");
    config.reps = get_or<std::size_t>(doc, "reps", 1, "config");
    config.seed = get_or<std::uint64_t>(doc, "seed", 1, "config");
    config.delta = get_opt<double>(doc, "delta", "config");
    if (doc.contains("flags")) {
        const json& f = doc.at("flags");
        check_keys(f, {"audit_term2", "resample_replay", "drop_test"}, "flags");
        config.flags.audit_term2 = get_or<bool>(f, "audit_term2", false, "flags");
        config.flags.resample_replay = get_or<bool>(f, "resample_replay", false, "flags");
        config.flags.drop_test = get_or<bool>(f, "drop_test", true, "flags");
    }
    config.include_baselines = get_or<bool>(doc, "include_baselines", false, "config");
    config.trace = get_or<bool>(doc, "trace", true, "config");
    config.threads = get_or<std::size_t>(doc, "threads", 0, "config");
    validate(config);
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

void validate(const ExperimentConfig& config) {
    if (config.horizon < 1) throw ConfigError("horizon must be at least 1");
    if (config.reps < 1) throw ConfigError("reps must be at least 1");
    if (config.bases.empty()) throw ConfigError("at least one base is required");
    const double delta = config.delta_value();
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0,1)");

    const auto& env = config.environment;
    const bool featureless = env.kind == EnvironmentSpec::Kind::kKArmed;
    if (featureless && env.means.size() < 2) throw ConfigError("k_armed environment needs at least two means");
    if (!featureless && (env.dim == 0 || env.num_arms < 2))
        throw ConfigError("feature environments need dim >= 1 and num_arms >= 2");
    for (std::size_t i = 0; i < config.bases.size(); ++i) {
        const auto& b = config.bases[i];
        if (b.kind == BaseKind::kLinUcb && featureless)
            throw ConfigError("bases[" + std::to_string(i) + "]: LinUCB needs an environment with arm features");
        if (b.kind == BaseKind::kEpsilonGreedy && !(b.c > 0.0))
            throw ConfigError("bases[" + std::to_string(i) + "]: egreedy c must be positive");
        if (b.kind == BaseKind::kLinUcb && !(b.reg_lambda > 0.0))
            throw ConfigError("bases[" + std::to_string(i) + "]: reg_lambda must be positive");
    }
    if (config.master.kind == MasterSpec::Kind::kSingle && config.master.single_base >= config.bases.size())
        throw ConfigError("master.base is out of range");
    if (config.master.kind == MasterSpec::Kind::kCorral && !(config.master_eta() > 0.0))
        throw ConfigError("CORRAL learning rate must be positive");
    if (config.master.kind == MasterSpec::Kind::kExp3p && config.master.p_explore) {
        const double p = *config.master.p_explore;
        const double m = static_cast<double>(config.bases.size());
        if (config.bases.size() > 1 && !(p > 0.0 && p <= 1.0 / (2.0 * m)))
            throw ConfigError("master.p_explore must lie in (0, 1/(2M)]");
    }
}

std::unique_ptr<Environment> build_environment(const EnvironmentSpec& spec, Rng& setup_rng) {
    try {
        switch (spec.kind) {
            case EnvironmentSpec::Kind::kKArmed:
                return std::make_unique<KArmedEnv>(spec.means, spec.noise);
            case EnvironmentSpec::Kind::kLinear:
            case EnvironmentSpec::Kind::kMisspecifiedLinear: {
                LinearContextualEnv base =
                    (spec.theta && spec.arms)
                        ? LinearContextualEnv(*spec.theta, *spec.arms, spec.mode, spec.noise_sigma)
                        : LinearContextualEnv::sample(spec.num_arms, spec.dim, spec.mode, spec.noise_sigma, setup_rng);
                if (spec.kind == EnvironmentSpec::Kind::kLinear) return std::make_unique<LinearContextualEnv>(std::move(base));
                std::vector<double> perturbation;
                if (spec.perturbation) {
                    perturbation = *spec.perturbation;
                } else {
                    perturbation.resize(base.num_arms());
                    for (auto& e : perturbation) e = spec.eps_star * (2.0 * setup_rng.uniform01() - 1.0);
                }
                return std::make_unique<MisspecifiedLinearEnv>(std::move(base), std::move(perturbation), spec.eps_star);
            }
            case EnvironmentSpec::Kind::kNonlinear: {
                if (spec.mu && spec.arms)
                    return std::make_unique<NonlinearArmsEnv>(*spec.mu, *spec.arms, spec.noise_sigma, spec.mu_max);
                return std::make_unique<NonlinearArmsEnv>(
                    NonlinearArmsEnv::sample(spec.num_arms, spec.dim, spec.mu_max, spec.noise_sigma, setup_rng));
            }
        }
    } catch (const ContractViolation& e) {
        throw ConfigError(std::string("environment: ") + e.what());
    }
    throw ConfigError("unknown environment kind");
}

std::unique_ptr<BaseAlgorithm> build_base(const BaseSpec& spec, const Environment& env, double delta) {
    switch (spec.kind) {
        case BaseKind::kUcb: return std::make_unique<UcbLearner>(env.num_arms());
        case BaseKind::kEpsilonGreedy: return std::make_unique<EpsilonGreedyLearner>(env.num_arms(), spec.c);
        case BaseKind::kExp3: return std::make_unique<Exp3Learner>(env.num_arms());
        case BaseKind::kLinUcb: {
            if (env.dim() == 0) throw ConfigError("LinUCB needs an environment with arm features");
            LinUcbOptions options;
            options.reg_lambda = spec.reg_lambda;
            options.conf_delta = spec.conf_delta.value_or(delta);
            options.misspec_eps = spec.misspec_eps;
            return std::make_unique<LinUcbLearner>(env.dim(), options);
        }
    }
    throw ConfigError("unknown base kind");
}

BoundDescriptor base_bound(const BaseSpec& spec, const Environment& env, double delta, std::size_t horizon) {
    if (spec.bound) return *spec.bound;
    return bound_descriptor(spec.kind, env.num_arms(), env.dim(), delta, horizon);
}

}  // namespace corral
