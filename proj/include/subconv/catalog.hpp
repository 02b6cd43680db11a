#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "subconv/criteria.hpp"
#include "subconv/equation.hpp"
#include "subconv/models.hpp"
#include "subconv/parameter_sequence.hpp"
#include "subconv/systems.hpp"

namespace subconv {

using nlohmann::json;

enum class ModelKind { Scalar, Planar, ThreeD };

[[nodiscard]] const char* to_string(ModelKind kind) noexcept;

struct CatalogEntry {
    std::string name;
    ModelKind kind;
    std::string summary;
    std::vector<std::string> params;
};

/// Built-in models addressable by name, plus the "fold" wrapper.
[[nodiscard]] const std::vector<CatalogEntry>& model_catalog();

/// A model built from a descriptor {"model": name, "params": {...}}.
/// `equation` is the scalar equation (for systems: the fold, when one exists).
struct BuiltModel {
    json descriptor;
    ModelKind kind = ModelKind::Scalar;
    std::optional<EquationSpec> equation;
    std::optional<BoundingFunction> bound;
    std::optional<BoundingFunction> rigorous_bound;
    std::optional<SigmoidModel> sigmoid;
    std::optional<PlanarSystem> system;
    std::optional<ThreeDModel> threed;
    std::optional<RickerFamilySpec> ricker;  // closed Ricker-family form, when known

    /// Number of initial values: the order for scalar models, 2 or 3 for systems.
    [[nodiscard]] std::size_t state_size() const;
};

/// Throws ConfigError on unknown models, unknown or malformed parameters, and
/// ParameterError on parameter values the model rejects.
[[nodiscard]] BuiltModel build_model(const json& descriptor);

/// number -> constant, array -> periodic, or an object
/// {"kind": "constant"|"periodic"|"tabulated", "value"|"values", "fallback", "inf", "sup"}.
[[nodiscard]] ParameterSequence parse_sequence(const json& j, const std::string& name);
[[nodiscard]] json sequence_to_json(const ParameterSequence& seq);

/// Descriptor of the generalized Ricker equation with these coefficients.
[[nodiscard]] json ricker_descriptor(const RickerFamilySpec& spec);

struct Tolerances {
    double zero = 1e-10;
    double limit = 1e-3;
    double fold = 1e-9;
};

struct AnalysisSettings {
    bool rigorous_bound = false;  // use the rigorous bound when a model has an informal one
    std::size_t tail_length = 8;
    std::vector<double> candidates;
};

/// JSON experiment configuration, schema 1. Unknown keys are rejected.
struct ExperimentConfig {
    int schema = 1;
    json equation;
    std::vector<double> initial;
    std::size_t steps = 100;
    std::string format = "csv";
    AnalysisSettings analysis;
    Tolerances tolerances;
};

inline constexpr int kConfigSchema = 1;

[[nodiscard]] ExperimentConfig parse_config(const json& j);
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

void write_csv(std::ostream& os, const Trajectory& traj);
void write_csv(std::ostream& os, const Orbit& orbit);
void write_csv(std::ostream& os, const ThreeDOrbit& orbit);

/// Simulation output; also a valid experiment config that regenerates it.
[[nodiscard]] json simulation_json(const json& descriptor, const Trajectory& traj);
[[nodiscard]] json simulation_json(const json& descriptor, const Orbit& orbit, std::size_t steps);
[[nodiscard]] json simulation_json(const json& descriptor, const ThreeDOrbit& orbit,
                                   std::size_t steps);

}  // namespace subconv
