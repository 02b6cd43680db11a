#include "subconv/cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "subconv/analysis.hpp"
#include "subconv/catalog.hpp"
#include "subconv/errors.hpp"
#include "subconv/folding.hpp"
#include "subconv/models.hpp"

namespace subconv {

namespace {

enum class Flag { Number, Integer, Sequence, List, Text };

// flags accepted per catalog model
const std::map<std::string, std::vector<std::pair<std::string, Flag>>>& model_flags() {
    static const std::map<std::string, std::vector<std::pair<std::string, Flag>>> table{
        {"ricker",
         {{"lambda", Flag::Number},
          {"k", Flag::Integer},
          {"m", Flag::Integer},
          {"a", Flag::Sequence},
          {"b", Flag::List}}},
        {"sp3", {{"k", Flag::Integer}}},
        {"sigmoid-bh",
         {{"a", Flag::Sequence},
          {"c", Flag::Sequence},
          {"q", Flag::Sequence},
          {"p", Flag::Text},
          {"b", Flag::Number},
          {"k", Flag::Integer},
          {"l", Flag::Integer}}},
        {"adult-juvenile",
         {{"s", Flag::Sequence}, {"t", Flag::Sequence}, {"r", Flag::Sequence}, {"lambda", Flag::Number}}},
        {"competition",
         {{"r1", Flag::Sequence},
          {"r2", Flag::Sequence},
          {"a1", Flag::Sequence},
          {"a2", Flag::Sequence},
          {"b1", Flag::Sequence},
          {"b2", Flag::Sequence},
          {"delta1", Flag::Number},
          {"delta2", Flag::Number},
          {"delta3", Flag::Number},
          {"delta4", Flag::Number}}},
        {"threed",
         {{"a", Flag::Sequence},
          {"p", Flag::Sequence},
          {"b", Flag::Number},
          {"c", Flag::Number},
          {"d", Flag::Number},
          {"q", Flag::Number},
          {"r", Flag::Number},
          {"s", Flag::Number}}},
    };
    return table;
}

const std::vector<std::string> kModelFlagNames{
    "lambda", "k",  "m",  "a",  "b",  "c",      "q",      "p",      "l",      "d",      "s",
    "t",      "r",  "r1", "r2", "a1", "a2",     "b1",     "b2",     "delta1", "delta2", "delta3",
    "delta4"};

double parse_number(const std::string& text, const std::string& flag) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(fmt::format("--{}: '{}' is not a number", flag, text));
}

std::vector<double> parse_numbers(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item, flag));
    if (out.empty()) throw ConfigError(fmt::format("--{}: empty value", flag));
    return out;
}

struct Options {
    // global
    bool json_out = false;
    std::string out_path;
    std::optional<double> tol;
    std::uint64_t seed = 1;
    // experiment
    std::string config_path;
    std::string model;
    std::string init;
    std::optional<std::size_t> steps;
    std::string format;
    std::string bound = "default";
    std::size_t batch = 0;
    double box = 2.0;
    std::map<std::string, std::string> values;
    // the same flag is registered on every subcommand
    std::multimap<std::string, CLI::Option*> flags;

    [[nodiscard]] bool given(const std::string& name) const {
        const auto [lo, hi] = flags.equal_range(name);
        return std::any_of(lo, hi, [](const auto& e) { return e.second->count() > 0; });
    }
};

void add_experiment_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "JSON experiment config");
    cmd->add_option("--model", o.model, "catalog model name");
    cmd->add_option("--init", o.init, "comma-separated initial values");
    cmd->add_option("--steps", o.steps, "number of iteration steps");
    for (const auto& name : kModelFlagNames) {
        o.flags.emplace(name, cmd->add_option("--" + name, o.values[name], "model parameter " + name));
    }
}

json descriptor_from_flags(const Options& o) {
    if (o.model.empty()) throw ConfigError("--model or --config is required");
    const std::string table_key = o.model == "competition-swapped" ? "competition" : o.model;
    const auto it = model_flags().find(table_key);
    if (it == model_flags().end()) throw ConfigError(fmt::format("unknown model '{}'", o.model));
    json params = json::object();
    for (const auto& name : kModelFlagNames) {
        if (!o.given(name)) continue;
        const auto& allowed = it->second;
        const auto match = std::find_if(allowed.begin(), allowed.end(),
                                        [&](const auto& e) { return e.first == name; });
        if (match == allowed.end()) {
            throw ConfigError(fmt::format("--{} does not apply to model '{}'", name, o.model));
        }
        const std::string& text = o.values.at(name);
        switch (match->second) {
            case Flag::Number:
                params[name] = parse_number(text, name);
                break;
            case Flag::Integer: {
                const double v = parse_number(text, name);
                if (v < 0 || v != std::floor(v)) {
                    throw ConfigError(fmt::format("--{} must be a non-negative integer", name));
                }
                params[name] = static_cast<std::size_t>(v);
                break;
            }
            case Flag::Sequence: {
                const auto v = parse_numbers(text, name);
                params[name] = v.size() == 1 ? json(v[0]) : json(v);
                break;
            }
            case Flag::List:
                params[name] = parse_numbers(text, name);
                break;
            case Flag::Text:
                params[name] = text;
                break;
        }
    }
    return json{{"model", o.model}, {"params", params}};
}

/// Config file or command-line flags, with command-line overrides applied.
ExperimentConfig resolve_config(const Options& o) {
    ExperimentConfig cfg;
    if (!o.config_path.empty()) {
        if (!o.model.empty() || std::any_of(kModelFlagNames.begin(), kModelFlagNames.end(),
                                            [&](const auto& n) { return o.given(n); })) {
            throw ConfigError("--config cannot be combined with --model or model parameters");
        }
        cfg = load_config(o.config_path);
    } else {
        cfg.equation = descriptor_from_flags(o);
        if (!o.init.empty()) cfg.initial = parse_numbers(o.init, "init");
    }
    if (!o.config_path.empty() && !o.init.empty()) cfg.initial = parse_numbers(o.init, "init");
    if (o.steps) cfg.steps = *o.steps;
    if (!o.format.empty()) cfg.format = o.format;
    if (o.json_out) cfg.format = "json";
    if (o.bound == "rigorous") cfg.analysis.rigorous_bound = true;
    if (o.tol) {
        cfg.tolerances.zero = *o.tol;
        cfg.tolerances.fold = *o.tol;
    }
    return cfg;
}

/// Missing initial values default to all ones, as in the reference runs.
void check_initial_size(const BuiltModel& model, std::vector<double>& initial) {
    if (initial.empty()) initial.assign(model.state_size(), 1.0);
    if (initial.size() != model.state_size()) {
        throw ConfigError(fmt::format("model '{}' needs {} initial values, got {}",
                                      model.descriptor["model"].get<std::string>(),
                                      model.state_size(), initial.size()));
    }
}

/// Writes to --out when given, else to stdout.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ConfigError("cannot open output file " + path);
            os_ = &file_;
        }
    }
    std::ostream& operator*() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg = resolve_config(o);
    const BuiltModel model = build_model(cfg.equation);
    check_initial_size(model, cfg.initial);
    Sink sink(o.out_path, out);
    const bool as_json = cfg.format == "json";
    std::string diagnostic;

    switch (model.kind) {
        case ModelKind::Scalar: {
            const Trajectory traj = iterate(*model.equation, cfg.initial, cfg.steps);
            if (as_json) {
                *sink << simulation_json(model.descriptor, traj).dump(2) << '\n';
            } else {
                write_csv(*sink, traj);
            }
            if (traj.status != IterationStatus::Complete) diagnostic = traj.diagnostic;
            break;
        }
        case ModelKind::Planar: {
            const Orbit orbit = iterate_system(*model.system, {cfg.initial[0], cfg.initial[1]}, cfg.steps);
            if (as_json) {
                *sink << simulation_json(model.descriptor, orbit, cfg.steps).dump(2) << '\n';
            } else {
                write_csv(*sink, orbit);
            }
            if (orbit.status != IterationStatus::Complete) diagnostic = orbit.diagnostic;
            break;
        }
        case ModelKind::ThreeD: {
            const ThreeDOrbit orbit = iterate_system(
                *model.threed, {cfg.initial[0], cfg.initial[1], cfg.initial[2]}, cfg.steps);
            if (as_json) {
                *sink << simulation_json(model.descriptor, orbit, cfg.steps).dump(2) << '\n';
            } else {
                write_csv(*sink, orbit);
            }
            if (orbit.status != IterationStatus::Complete) diagnostic = orbit.diagnostic;
            break;
        }
    }
    if (!diagnostic.empty()) {
        err << "error: " << diagnostic << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

AnalysisOptions analysis_options(const ExperimentConfig& cfg) {
    AnalysisOptions opts;
    opts.zero_tol = cfg.tolerances.zero;
    opts.limit_tol = cfg.tolerances.limit;
    opts.tail_length = cfg.analysis.tail_length;
    opts.extra_candidates = cfg.analysis.candidates;
    return opts;
}

ConvergenceReport analyze_once(const BuiltModel& model, const std::vector<double>& initial,
                               const ExperimentConfig& cfg) {
    const AnalysisOptions opts = analysis_options(cfg);
    if (model.kind == ModelKind::Planar) {
        const PlanarSystem& sys = *model.system;
        const Orbit orbit = iterate_system(sys, {initial[0], initial[1]}, cfg.steps);
        if (sys.h6_f_bar) {
            const EnvelopeVerdict v = check_H6(sys);
            if (!v.applicable) throw BoundValidationError("H6 does not hold: " + v.reason);
            return apply_corollary_syst0(sys, orbit, v, opts);
        }
        const EnvelopeVerdict v = check_H5(sys);
        if (!v.applicable) throw BoundValidationError("H5 does not hold: " + v.reason);
        return apply_corollary_syst(sys, orbit, v, opts);
    }

    const std::optional<BoundingFunction>& chosen =
        cfg.analysis.rigorous_bound ? model.rigorous_bound : model.bound;
    if (!chosen) {
        throw BoundValidationError("model '" + model.descriptor["model"].get<std::string>() +
                                   "' has no validated bounding function");
    }
    validate_bound(*chosen);

    if (model.sigmoid) {
        const SigmoidModel& sm = *model.sigmoid;
        std::vector<double> shifted = initial;
        for (double& v : shifted) v -= sm.fixed_point;
        const Trajectory traj = iterate(sm.translated, shifted, cfg.steps);
        ConvergenceReport report = build_report(sm.translated, *chosen, traj, opts);
        report.notes.push_back(fmt::format("coordinates shifted by the fixed value {}; window in "
                                           "original coordinates ({}, {})",
                                           sm.fixed_point, sm.window.lo, sm.window.hi));
        return report;
    }
    if (model.threed) {
        const ThreeDOrbit head = iterate_system(*model.threed, {initial[0], initial[1], initial[2]}, 2);
        if (head.length() < 3) throw NonFiniteError(head.diagnostic, head.length());
        const std::vector<double> init{head.x[0], head.x[1], head.x[2]};
        const Trajectory traj =
            iterate(*model.equation, init, cfg.steps >= 2 ? cfg.steps - 2 : 0);
        return build_report(*model.equation, *chosen, traj, opts);
    }
    const Trajectory traj = iterate(*model.equation, initial, cfg.steps);
    return build_report(*model.equation, *chosen, traj, opts);
}

void print_summary(std::ostream& os, const ConvergenceReport& r) {
    os << "equation: " << r.equation_id << '\n';
    os << fmt::format("alpha: {:.17g}{}\n", r.threshold.alpha, r.threshold.tangent ? " (tangent)" : "");
    os << fmt::format("window: {}{:.17g}, {:.17g})\n", r.window.lo_inclusive ? "[" : "(", r.window.lo,
                      r.window.hi);
    os << "stride: " << r.stride << '\n';
    os << "crossing: " << (r.crossing_index ? std::to_string(*r.crossing_index) : "none") << '\n';
    for (const auto& p : r.predictions) {
        os << fmt::format("prediction {} residue {} from n0={} stride {}: {}{}\n", p.variable,
                          p.residue_class, p.n0, p.stride, to_string(p.verdict),
                          p.chain_checked ? (p.chain.holds ? " (chain ok)" : " (chain violated)")
                                          : "");
    }
    if (r.full_convergence_from) os << "full convergence from: " << *r.full_convergence_from << '\n';
    for (const auto& l : r.limits) {
        os << fmt::format("limit {} residue {}: {}", l.variable, l.residue_class,
                          to_string(l.limit.kind));
        if (l.limit.kind != LimitClassification::Kind::Inconclusive) {
            os << fmt::format(" {:.10g}", l.limit.value);
        }
        os << '\n';
    }
    for (const auto& n : r.notes) os << "note: " << n << '\n';
}

std::vector<double> random_initial(const BuiltModel& model, std::mt19937_64& rng, double box) {
    std::uniform_real_distribution<double> dist(0.0, box);
    std::vector<double> v(model.state_size());
    for (double& x : v) {
        do {
            x = dist(rng);
        } while (x == 0.0);
    }
    return v;
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream&) {
    ExperimentConfig cfg = resolve_config(o);
    const BuiltModel model = build_model(cfg.equation);
    Sink sink(o.out_path, out);

    if (o.batch > 0) {
        if (!(o.box > 0.0)) throw ConfigError("--box must be positive");
        std::mt19937_64 rng(o.seed);
        json runs = json::array();
        std::size_t violated = 0;
        for (std::size_t i = 0; i < o.batch; ++i) {
            const auto init = random_initial(model, rng, o.box);
            const ConvergenceReport r = analyze_once(model, init, cfg);
            if (r.any_violated()) ++violated;
            runs.push_back({{"initial", init},
                            {"crossing_index", r.crossing_index ? json(*r.crossing_index) : json(nullptr)},
                            {"violated", r.any_violated()}});
        }
        const json summary{{"equation", model.descriptor},
                           {"seed", o.seed},
                           {"runs", runs},
                           {"violated", violated}};
        *sink << summary.dump(2) << '\n';
        return violated > 0 ? kExitViolated : kExitOk;
    }

    check_initial_size(model, cfg.initial);
    const ConvergenceReport report = analyze_once(model, cfg.initial, cfg);
    if (cfg.format == "json" || !o.out_path.empty()) {
        *sink << to_json(report).dump(2) << '\n';
    } else {
        print_summary(*sink, report);
    }
    return report.any_violated() ? kExitViolated : kExitOk;
}

// ---------------------------------------------------------------------------
// threshold
// ---------------------------------------------------------------------------

json threshold_json(const Threshold& t) {
    return json{{"alpha", json_number(t.alpha)}, {"tangent", t.tangent}};
}

json fixed_points_json(double lambda, double a, double b) {
    const LamCondition cond = check_lam_condition(lambda, a, b);
    const RickerFixedPoints fp = ricker_fixed_points(lambda, a, b);
    json out{{"condition_holds", cond.holds},
             {"condition_equality", cond.equality},
             {"condition_rhs", cond.rhs}};
    switch (fp.kind) {
        case RickerFixedPoints::Kind::Pair:
            out["fixed_points"] = {{"kind", "pair"}, {"u_star", fp.lower}, {"u_bar", fp.upper}};
            break;
        case RickerFixedPoints::Kind::Tangent:
            out["fixed_points"] = {{"kind", "tangent"}, {"u_star", fp.lower}, {"u_bar", fp.upper}};
            break;
        case RickerFixedPoints::Kind::None:
            out["fixed_points"] = {{"kind", "none"}};
            break;
    }
    return out;
}

int cmd_threshold(const Options& o, std::ostream& out, std::ostream&) {
    const ExperimentConfig cfg = resolve_config(o);
    const BuiltModel model = build_model(cfg.equation);
    const std::string name = model.descriptor["model"].get<std::string>();
    json result{{"model", model.descriptor}};

    if (model.ricker && model.kind == ModelKind::Scalar) {
        const RickerFamilySpec& spec = *model.ricker;
        if (spec.b_inf() > 0.0) result.update(fixed_points_json(spec.lambda, spec.a_sup(), spec.b_inf()));
        result["threshold"] = threshold_json(model.bound->threshold);
    } else if (name == "sp3") {
        const int k = model.descriptor["params"]["k"].get<int>();
        result.update(fixed_points_json(1.5, 1.5, k == 1 ? 1.6 : (k == 2 ? 0.7 : 0.9)));
        result["threshold"] = threshold_json(model.bound->threshold);
        if (model.bound->informal) {
            result["informal"] = true;
            result["rigorous_threshold"] = threshold_json(model.rigorous_bound->threshold);
        }
    } else if (model.sigmoid) {
        const SigmoidModel& sm = *model.sigmoid;
        result["threshold"] = threshold_json(sm.bound.threshold);
        result["window"] = json::array({sm.window.lo, sm.window.hi});
    } else if (model.threed) {
        if (model.bound) {
            const RickerFamilySpec* spec = model.ricker ? &*model.ricker : nullptr;
            if (spec && spec->b_inf() > 0.0) {
                result.update(fixed_points_json(spec->lambda, spec->a_sup(), spec->b_inf()));
            }
            result["threshold"] = threshold_json(model.bound->threshold);
        } else {
            result["threshold"] = nullptr;
            result["note"] = "no Ricker envelope: needs cr > 1 and c p_n + d s >= 0";
        }
    } else if (model.kind == ModelKind::Planar) {
        const PlanarSystem& sys = *model.system;
        if (name == "competition") {
            const auto& p = model.descriptor["params"];
            const double r1 = parse_sequence(p["r1"], "r1").bounds().sup;
            const double a1 = parse_sequence(p["a1"], "a1").bounds().inf;
            result["threshold"] = threshold_json(competition_threshold(r1, a1, p["delta1"].get<double>()));
        } else {
            const EnvelopeVerdict v = sys.h6_f_bar ? check_H6(sys) : check_H5(sys);
            if (!v.applicable) throw BoundValidationError(v.reason);
            result["threshold"] = threshold_json(v.threshold);
        }
    } else {
        throw ConfigError("no threshold available for model '" + name + "'");
    }

    Sink sink(o.out_path, out);
    if (o.json_out || !o.out_path.empty()) {
        *sink << result.dump(2) << '\n';
        return kExitOk;
    }
    for (const auto& [key, value] : result.items()) {
        if (key == "model") continue;
        *sink << key << ": " << value.dump() << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fold
// ---------------------------------------------------------------------------

json consistency_json(const FoldConsistency& c) {
    auto opt = [](const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); };
    return json{{"pass", c.pass},
                {"compared", c.compared},
                {"max_x_deviation", c.max_x_deviation},
                {"first_divergent", opt(c.first_divergent)},
                {"max_y_deviation", c.max_y_deviation},
                {"first_y_divergent", opt(c.first_y_divergent)},
                {"diagnostic", c.diagnostic}};
}

int cmd_fold(const Options& o, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg = resolve_config(o);
    const BuiltModel model = build_model(cfg.equation);
    const double tol = cfg.tolerances.fold;
    json result;
    FoldConsistency check;

    if (model.kind == ModelKind::Planar) {
        if (!model.system->has_sigma()) {
            throw MissingSolvabilityForm(model.system->id + ": no solvability form, cannot fold");
        }
        if (cfg.initial.empty()) cfg.initial = {1.0, 1.0};
        check_initial_size(model, cfg.initial);
        check = check_fold_consistency(*model.system, {cfg.initial[0], cfg.initial[1]}, cfg.steps, tol);
        result["folded"] = json{{"model", "fold"}, {"params", {{"system", model.descriptor}}}};
        result["initial"] = fold_initial(*model.system, {cfg.initial[0], cfg.initial[1]});
    } else if (model.kind == ModelKind::ThreeD) {
        if (cfg.initial.empty()) cfg.initial = {1.0, 1.0, 1.0};
        check_initial_size(model, cfg.initial);
        check = check_fold_consistency(*model.threed, {cfg.initial[0], cfg.initial[1], cfg.initial[2]},
                                       cfg.steps, tol);
        result["folded"] = model.descriptor;
    } else {
        throw ConfigError("fold needs a planar or three-dimensional system");
    }
    if (model.ricker) result["closed_form"] = ricker_descriptor(*model.ricker);
    result["steps"] = cfg.steps;
    result["tolerance"] = tol;
    result["consistency"] = consistency_json(check);

    Sink sink(o.out_path, out);
    *sink << result.dump(2) << '\n';
    if (!check.pass) {
        err << fmt::format("fold consistency failed: max deviation {:.3g}, first divergent index {}\n",
                           std::max(check.max_x_deviation, check.max_y_deviation),
                           check.first_divergent
                               ? std::to_string(*check.first_divergent)
                               : (check.first_y_divergent ? std::to_string(*check.first_y_divergent)
                                                          : "none"));
        if (!check.diagnostic.empty()) err << check.diagnostic << '\n';
        return kExitFold;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// models
// ---------------------------------------------------------------------------

int cmd_models(const Options& o, std::ostream& out) {
    Sink sink(o.out_path, out);
    if (o.json_out) {
        json list = json::array();
        for (const auto& e : model_catalog()) {
            list.push_back({{"name", e.name},
                            {"kind", to_string(e.kind)},
                            {"summary", e.summary},
                            {"params", e.params}});
        }
        *sink << list.dump(2) << '\n';
        return kExitOk;
    }
    for (const auto& e : model_catalog()) {
        std::string params;
        for (const auto& p : e.params) params += (params.empty() ? "" : ", ") + p;
        *sink << fmt::format("{:<20} {:<18} {}\n    params: {}\n", e.name, to_string(e.kind), e.summary,
                             params);
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Subsequence convergence analysis for non-autonomous difference equations", "subconv"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_flag("--json", o.json_out, "machine-readable JSON on stdout");
    app.add_option("--out", o.out_path, "write results to FILE");
    app.add_option("--tol", o.tol, "convergence / fold tolerance");
    app.add_option("--seed", o.seed, "seed for random batch draws");

    CLI::App* simulate = app.add_subcommand("simulate", "iterate a model and write its trajectory");
    add_experiment_flags(simulate, o);
    simulate->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    CLI::App* analyze = app.add_subcommand("analyze", "threshold crossing and convergence report");
    add_experiment_flags(analyze, o);
    analyze->add_option("--bound", o.bound, "default or rigorous")
        ->check(CLI::IsMember({"default", "rigorous"}));
    analyze->add_option("--batch", o.batch, "analyze N random initial points");
    analyze->add_option("--box", o.box, "random initial values drawn from (0, BOX]");

    CLI::App* threshold = app.add_subcommand("threshold", "fixed points and threshold alpha");
    add_experiment_flags(threshold, o);

    CLI::App* fold = app.add_subcommand("fold", "fold a system and check consistency");
    add_experiment_flags(fold, o);

    CLI::App* models = app.add_subcommand("models", "list catalog models");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (*simulate) return cmd_simulate(o, out, err);
        if (*analyze) return cmd_analyze(o, out, err);
        if (*threshold) return cmd_threshold(o, out, err);
        if (*fold) return cmd_fold(o, out, err);
        if (*models) return cmd_models(o, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const MissingSolvabilityForm& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NonFiniteError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const BoundValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitBound;
    } catch (const CriterionInapplicable& e) {
        err << "error: " << e.what() << '\n';
        return kExitBound;
    } catch (const MissingEnvelope& e) {
        err << "error: " << e.what() << '\n';
        return kExitBound;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUnexpected;
    }
    return kExitUnexpected;
}

}  // namespace subconv
