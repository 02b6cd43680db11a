#include "subconv/catalog.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "subconv/errors.hpp"
#include "subconv/folding.hpp"

namespace subconv {

namespace {

/// Reads named entries out of a JSON object and rejects leftovers.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string context) : j_(j), context_(std::move(context)) {
        if (!j_.is_object()) throw ConfigError(context_ + " must be a JSON object");
    }

    [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        if (!j_.contains(key)) throw ConfigError(fmt::format("{}: missing '{}'", context_, key));
        used_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        if (!has(key)) {
            if (fallback) return *fallback;
            throw ConfigError(fmt::format("{}: missing '{}'", context_, key));
        }
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(fmt::format("{}: '{}' must be a number", context_, key));
        return v.get<double>();
    }

    std::size_t count(const std::string& key, std::optional<std::size_t> fallback = std::nullopt) {
        if (!has(key)) {
            if (fallback) return *fallback;
            throw ConfigError(fmt::format("{}: missing '{}'", context_, key));
        }
        const json& v = raw(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw ConfigError(fmt::format("{}: '{}' must be a non-negative integer", context_, key));
        }
        return v.get<std::size_t>();
    }

    ParameterSequence sequence(const std::string& key, std::optional<double> fallback = std::nullopt) {
        if (!has(key)) {
            if (fallback) return ParameterSequence::constant(*fallback);
            throw ConfigError(fmt::format("{}: missing '{}'", context_, key));
        }
        return parse_sequence(raw(key), context_ + "." + key);
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!used_.count(key)) {
                throw ConfigError(fmt::format("{}: unknown key '{}'", context_, key));
            }
        }
    }

private:
    const json& j_;
    std::string context_;
    std::set<std::string> used_;
};

std::vector<double> number_list(const json& j, const std::string& context) {
    if (!j.is_array()) throw ConfigError(context + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(context + " must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

RationalExponent parse_exponent(const json& j) {
    if (j.is_string()) return RationalExponent::parse(j.get<std::string>());
    if (j.is_number_integer()) return RationalExponent{j.get<long>(), 1};
    throw ConfigError("sigmoid-bh: 'p' must be an integer or a string \"num/den\"");
}

std::string exponent_text(const RationalExponent& p) {
    return p.den == 1 ? std::to_string(p.num) : fmt::format("{}/{}", p.num, p.den);
}

BuiltModel from_scalar(ScalarModel model) {
    BuiltModel out;
    out.kind = ModelKind::Scalar;
    out.equation = std::move(model.equation);
    out.bound = std::move(model.bound);
    out.rigorous_bound = std::move(model.rigorous_bound);
    return out;
}

BuiltModel build_ricker(ObjectReader& p, json& params) {
    RickerFamilySpec spec;
    spec.lambda = p.number("lambda", 2.0);
    spec.k = p.count("k", 1);
    spec.a = p.sequence("a", 0.0);
    const json& bj = p.raw("b");
    if (!bj.is_array() || bj.empty()) throw ConfigError("ricker: 'b' must be a non-empty array");
    for (std::size_t i = 0; i < bj.size(); ++i) {
        spec.b.push_back(parse_sequence(bj[i], fmt::format("ricker.b[{}]", i)));
    }
    spec.m = p.count("m", spec.b.size());
    if (spec.m != spec.b.size()) {
        throw ConfigError(fmt::format("ricker: m = {} but {} coefficients b given", spec.m,
                                      spec.b.size()));
    }
    p.finish();
    BuiltModel out = from_scalar(make_generalized_ricker(spec));
    out.ricker = spec;
    params = ricker_descriptor(spec)["params"];
    return out;
}

BuiltModel build_sigmoid(ObjectReader& p, json& params) {
    SigmoidBHSpec spec;
    spec.a = p.sequence("a", 1.0);
    spec.c = p.sequence("c", 0.0);
    spec.q = p.sequence("q", 1.0);
    spec.p = p.has("p") ? parse_exponent(p.raw("p")) : RationalExponent{2, 1};
    spec.b = p.number("b", 0.0);
    spec.k = p.count("k", 1);
    spec.l = p.count("l", 1);
    p.finish();
    BuiltModel out;
    out.kind = ModelKind::Scalar;
    out.sigmoid = make_sigmoid_bh_model(spec);
    out.equation = out.sigmoid->equation;
    out.bound = out.sigmoid->bound;
    out.rigorous_bound = out.sigmoid->bound;
    params = json{{"a", sequence_to_json(spec.a)}, {"c", sequence_to_json(spec.c)},
                  {"q", sequence_to_json(spec.q)}, {"p", exponent_text(spec.p)},
                  {"b", spec.b},                   {"k", spec.k},
                  {"l", spec.l}};
    return out;
}

BuiltModel build_adult_juvenile(ObjectReader& p, json& params) {
    const ParameterSequence s = p.sequence("s", 0.8);
    const ParameterSequence t = p.sequence("t", 1.0);
    const ParameterSequence r = p.sequence("r", 2.0);
    const double lambda = p.number("lambda", 2.0);
    p.finish();
    BuiltModel out;
    out.kind = ModelKind::Planar;
    out.system = make_adult_juvenile(s, t, r, lambda);
    out.equation = fold_planar(*out.system);
    if (s.is_constant() && t.is_constant() && r.is_constant()) {
        // x_n = x_{n-2}^lambda exp(r + ln s - (t/s) x_{n-1} - x_{n-2})
        RickerFamilySpec spec;
        spec.lambda = lambda;
        spec.k = 2;
        spec.m = 2;
        spec.a = ParameterSequence::constant(r.at(0) + std::log(s.at(0)));
        spec.b = {ParameterSequence::constant(t.at(0) / s.at(0)), ParameterSequence::constant(1.0)};
        out.ricker = spec;
    }
    params = json{{"s", sequence_to_json(s)},
                  {"t", sequence_to_json(t)},
                  {"r", sequence_to_json(r)},
                  {"lambda", lambda}};
    return out;
}

BuiltModel build_competition(ObjectReader& p, json& params, bool swapped) {
    CompetitionParams cp;
    cp.r1 = p.sequence("r1", 1.0);
    cp.r2 = p.sequence("r2", 1.0);
    cp.a1 = p.sequence("a1", 1.0);
    cp.a2 = p.sequence("a2", 1.0);
    cp.b1 = p.sequence("b1", 0.0);
    cp.b2 = p.sequence("b2", 0.0);
    cp.delta1 = p.number("delta1", 2.0);
    cp.delta2 = p.number("delta2", 2.0);
    cp.delta3 = p.number("delta3", 1.0);
    cp.delta4 = p.number("delta4", 1.0);
    p.finish();
    BuiltModel out;
    out.kind = ModelKind::Planar;
    out.system = make_competition(cp, swapped);
    if (out.system->has_sigma()) out.equation = fold_planar(*out.system);
    params = json{{"r1", sequence_to_json(cp.r1)}, {"r2", sequence_to_json(cp.r2)},
                  {"a1", sequence_to_json(cp.a1)}, {"a2", sequence_to_json(cp.a2)},
                  {"b1", sequence_to_json(cp.b1)}, {"b2", sequence_to_json(cp.b2)},
                  {"delta1", cp.delta1},           {"delta2", cp.delta2},
                  {"delta3", cp.delta3},           {"delta4", cp.delta4}};
    return out;
}

BuiltModel build_threed(ObjectReader& p, json& params) {
    ThreeDParams tp;
    tp.a = p.sequence("a", 0.0);
    tp.p = p.sequence("p", 0.0);
    tp.b = p.number("b", 0.0);
    tp.c = p.number("c", 1.0);
    tp.d = p.number("d", 0.0);
    tp.q = p.number("q", 1.0);
    tp.r = p.number("r", 1.0);
    tp.s = p.number("s", 1.0);
    p.finish();
    BuiltModel out;
    out.kind = ModelKind::ThreeD;
    out.threed = make_3d_example(tp);
    out.equation = out.threed->folded;
    out.bound = out.threed->bound;
    out.rigorous_bound = out.threed->bound;
    out.ricker = out.threed->ricker_form;
    params = json{{"a", sequence_to_json(tp.a)}, {"p", sequence_to_json(tp.p)}, {"b", tp.b},
                  {"c", tp.c}, {"d", tp.d}, {"q", tp.q}, {"r", tp.r}, {"s", tp.s}};
    return out;
}

}  // namespace

const char* to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::Scalar: return "scalar";
        case ModelKind::Planar: return "planar";
        case ModelKind::ThreeD: return "three-dimensional";
    }
    return "unknown";
}

const std::vector<CatalogEntry>& model_catalog() {
    static const std::vector<CatalogEntry> entries{
        {"ricker", ModelKind::Scalar,
         "x_n = x_{n-k}^lambda exp(a_n - b_{1,n} x_{n-1} - ... - b_{m,n} x_{n-m})",
         {"lambda", "k", "m", "a", "b"}},
        {"sp3", ModelKind::Scalar, "x_n = x_{n-k}^1.5 exp(1.5 - 0.7 x_{n-2} - 0.9 x_{n-3})", {"k"}},
        {"sigmoid-bh", ModelKind::Scalar,
         "x_n = a_n (x_{n-k} - b)^p / (1 + c_n x_{n-l}^{q_n}) + b",
         {"a", "c", "q", "p", "b", "k", "l"}},
        {"adult-juvenile", ModelKind::Planar,
         "x_{n+1} = s_n y_n, y_{n+1} = x_n^lambda exp(r_n - x_n - t_n y_n)",
         {"s", "t", "r", "lambda"}},
        {"competition", ModelKind::Planar,
         "x_{n+1} = r1 x^d1 / (a1 + x^d1 + b1 y^d3), y_{n+1} = r2 y^d2 / (a2 + y^d2 + b2 x^d4)",
         {"r1", "r2", "a1", "a2", "b1", "b2", "delta1", "delta2", "delta3", "delta4"}},
        {"competition-swapped", ModelKind::Planar,
         "x_{n+1} = r1 y^d1 / (a1 + y^d1 + b1 x^d3), y_{n+1} = r2 x^d2 / (a2 + x^d2 + b2 y^d4)",
         {"r1", "r2", "a1", "a2", "b1", "b2", "delta1", "delta2", "delta3", "delta4"}},
        {"threed", ModelKind::ThreeD,
         "x' = exp(a_n - b x - c y - d z), y' = p_n x + q z - r ln z, z' = s x",
         {"a", "p", "b", "c", "d", "q", "r", "s"}},
        {"fold", ModelKind::Scalar, "second-order fold of a planar system descriptor", {"system"}},
    };
    return entries;
}

std::size_t BuiltModel::state_size() const {
    switch (kind) {
        case ModelKind::Planar: return 2;
        case ModelKind::ThreeD: return 3;
        case ModelKind::Scalar: break;
    }
    return equation ? equation->order : 0;
}

ParameterSequence parse_sequence(const json& j, const std::string& name) {
    if (j.is_number()) return ParameterSequence::constant(j.get<double>());
    if (j.is_array()) {
        if (j.empty()) throw ConfigError(name + ": empty sequence");
        return ParameterSequence::periodic(number_list(j, name));
    }
    ObjectReader r(j, name);
    const json& kind_j = r.raw("kind");
    if (!kind_j.is_string()) throw ConfigError(name + ": 'kind' must be a string");
    const std::string kind = kind_j.get<std::string>();
    const double inf = r.number("inf", -kInf);
    const double sup = r.number("sup", kInf);
    ParameterSequence out;
    if (kind == "constant") {
        const double v = r.number("value");
        if (v < inf || v > sup) throw ConfigError(name + ": constant outside declared bounds");
        out = ParameterSequence::constant(v);
    } else if (kind == "periodic") {
        out = ParameterSequence::periodic(number_list(r.raw("values"), name + ".values"), inf, sup);
    } else if (kind == "tabulated") {
        out = ParameterSequence::tabulated(number_list(r.raw("values"), name + ".values"),
                                           r.number("fallback"), inf, sup);
    } else {
        throw ConfigError(fmt::format("{}: unknown sequence kind '{}'", name, kind));
    }
    r.finish();
    return out;
}

json sequence_to_json(const ParameterSequence& seq) {
    if (seq.is_constant()) return seq.at(0);
    json out{{"kind", seq.kind() == ParameterSequence::Kind::Periodic ? "periodic" : "tabulated"},
             {"values", seq.values()}};
    if (seq.kind() == ParameterSequence::Kind::Tabulated) out["fallback"] = seq.fallback();
    if (std::isfinite(seq.declared_inf())) out["inf"] = seq.declared_inf();
    if (std::isfinite(seq.declared_sup())) out["sup"] = seq.declared_sup();
    return out;
}

json ricker_descriptor(const RickerFamilySpec& spec) {
    json b = json::array();
    for (const auto& s : spec.b) b.push_back(sequence_to_json(s));
    return json{{"model", "ricker"},
                {"params",
                 {{"lambda", spec.lambda},
                  {"k", spec.k},
                  {"m", spec.m},
                  {"a", sequence_to_json(spec.a)},
                  {"b", b}}}};
}

BuiltModel build_model(const json& descriptor) {
    ObjectReader top(descriptor, "equation descriptor");
    const json& name_j = top.raw("model");
    if (!name_j.is_string()) throw ConfigError("equation descriptor: 'model' must be a string");
    const std::string name = name_j.get<std::string>();
    const json empty = json::object();
    const json& params_j = top.has("params") ? top.raw("params") : empty;
    top.finish();

    ObjectReader p(params_j, name);
    json params;
    BuiltModel out;
    if (name == "ricker") {
        out = build_ricker(p, params);
    } else if (name == "sp3") {
        const std::size_t k = p.count("k", 3);
        p.finish();
        if (k < 1 || k > 3) throw ConfigError("sp3: k must be 1, 2 or 3");
        out = from_scalar(make_sp3(static_cast<int>(k)));
        params = json{{"k", k}};
    } else if (name == "sigmoid-bh") {
        out = build_sigmoid(p, params);
    } else if (name == "adult-juvenile") {
        out = build_adult_juvenile(p, params);
    } else if (name == "competition" || name == "competition-swapped") {
        out = build_competition(p, params, name == "competition-swapped");
    } else if (name == "threed") {
        out = build_threed(p, params);
    } else if (name == "fold") {
        const BuiltModel inner = build_model(p.raw("system"));
        p.finish();
        if (inner.kind != ModelKind::Planar) {
            throw ConfigError("fold: 'system' must describe a planar system");
        }
        out.kind = ModelKind::Scalar;
        out.equation = fold_planar(*inner.system);
        out.ricker = inner.ricker;
        params = json{{"system", inner.descriptor}};
    } else {
        throw ConfigError(fmt::format("unknown model '{}'", name));
    }
    out.descriptor = json{{"model", name}, {"params", params}};
    return out;
}

ExperimentConfig parse_config(const json& j) {
    ObjectReader r(j, "config");
    ExperimentConfig cfg;
    if (r.has("schema")) {
        const json& s = r.raw("schema");
        if (!s.is_number_integer() || s.get<int>() != kConfigSchema) {
            throw ConfigError(fmt::format("config: unsupported schema {}", s.dump()));
        }
    }
    cfg.equation = r.raw("equation");
    cfg.initial = number_list(r.raw("initial"), "config.initial");
    cfg.steps = r.count("steps", 100);
    if (r.has("format")) {
        const json& f = r.raw("format");
        if (!f.is_string() || (f != "csv" && f != "json")) {
            throw ConfigError("config: 'format' must be \"csv\" or \"json\"");
        }
        cfg.format = f.get<std::string>();
    }
    if (r.has("analysis")) {
        ObjectReader a(r.raw("analysis"), "config.analysis");
        if (a.has("bound")) {
            const json& b = a.raw("bound");
            if (b != "default" && b != "rigorous") {
                throw ConfigError("config.analysis: 'bound' must be \"default\" or \"rigorous\"");
            }
            cfg.analysis.rigorous_bound = b == "rigorous";
        }
        cfg.analysis.tail_length = a.count("tail_length", cfg.analysis.tail_length);
        if (a.has("candidates")) {
            cfg.analysis.candidates = number_list(a.raw("candidates"), "config.analysis.candidates");
        }
        a.finish();
    }
    if (r.has("tolerances")) {
        ObjectReader t(r.raw("tolerances"), "config.tolerances");
        cfg.tolerances.zero = t.number("zero", cfg.tolerances.zero);
        cfg.tolerances.limit = t.number("limit", cfg.tolerances.limit);
        cfg.tolerances.fold = t.number("fold", cfg.tolerances.fold);
        t.finish();
    }
    // recorded output of a previous simulation; regenerated, not read
    for (const char* key : {"terms", "x", "y", "z"}) {
        if (r.has(key)) (void)r.raw(key);
    }
    r.finish();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("{}: {}", path, e.what()));
    }
    return parse_config(j);
}

void write_csv(std::ostream& os, const Trajectory& traj) {
    os << "n,x\n";
    for (std::size_t n = 0; n < traj.length(); ++n) {
        os << fmt::format("{},{:.17g}\n", n, traj.terms[n]);
    }
}

void write_csv(std::ostream& os, const Orbit& orbit) {
    os << "n,x,y\n";
    for (std::size_t n = 0; n < orbit.length(); ++n) {
        os << fmt::format("{},{:.17g},{:.17g}\n", n, orbit.x[n], orbit.y[n]);
    }
}

void write_csv(std::ostream& os, const ThreeDOrbit& orbit) {
    os << "n,x,y,z\n";
    for (std::size_t n = 0; n < orbit.length(); ++n) {
        os << fmt::format("{},{:.17g},{:.17g},{:.17g}\n", n, orbit.x[n], orbit.y[n], orbit.z[n]);
    }
}

json simulation_json(const json& descriptor, const Trajectory& traj) {
    return json{{"schema", kConfigSchema},
                {"equation", descriptor},
                {"initial", traj.initial},
                {"steps", traj.length() - traj.order},
                {"terms", traj.terms}};
}

json simulation_json(const json& descriptor, const Orbit& orbit, std::size_t steps) {
    return json{{"schema", kConfigSchema},
                {"equation", descriptor},
                {"initial", orbit.initial},
                {"steps", steps},
                {"x", orbit.x},
                {"y", orbit.y}};
}

json simulation_json(const json& descriptor, const ThreeDOrbit& orbit, std::size_t steps) {
    return json{{"schema", kConfigSchema},
                {"equation", descriptor},
                {"initial", orbit.initial},
                {"steps", steps},
                {"x", orbit.x},
                {"y", orbit.y},
                {"z", orbit.z}};
}

}  // namespace subconv
