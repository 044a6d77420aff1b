#pragma once

#include "rlaif/gaussian_world.hpp"
#include "rlaif/nonlinear.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace rlaif {

// Raised on any structurally invalid experiment config; the message names
// the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
    toy,
    improve,
    gap,
    ceiling,
    stein,
    nonmonotone,
    pareto,
    adversarial,
    spectrum,
    promptable,
};

std::string kind_name(ExperimentKind kind);
std::optional<ExperimentKind> kind_from_name(const std::string& name);

// Base covariance specification. `spectrum` draws a random orthonormal basis
// from basis_seed and uses the given eigenvalues in descending order.
struct SigmaSpec {
    enum class Type { identity, diagonal, dense, spectrum };
    Type type = Type::identity;
    Vec diagonal;
    Mat dense;
    Vec spectrum;
    std::uint64_t basis_seed = 0;
};

// Value direction: either explicit components, or coefficients over the top
// eigenvectors of the built covariance (descending order).
struct VStarSpec {
    bool in_eigenbasis = false;
    Vec components;
    Vec eigvec_coeffs;
};

struct WorldSpec {
    Eigen::Index d = 0;
    Vec mu;  // empty means zero
    SigmaSpec sigma;
    VStarSpec v_star;
    double sigma_eps = 0.0;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::toy;
    std::uint64_t seed = 0;
    std::optional<WorldSpec> world;
    nlohmann::json params;  // experiment-specific; validated by the experiment
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

Mat build_sigma(const SigmaSpec& spec, Eigen::Index d);
WorldPtr build_world(const WorldSpec& spec);

// Safety-function and family specs, shared by the stein/promptable configs:
// {"kind":"linear","v":[...]}
// {"kind":"quadratic","v":[...],"tau":0.5}
// {"kind":"smooth_saturating","v":[...],"scale":1.0}
SafetyFunction parse_safety_function(const nlohmann::json& j);
nlohmann::json safety_function_to_json(const SafetyFunction& f);
PromptableFamily parse_family(const nlohmann::json& j);

}  // namespace rlaif
