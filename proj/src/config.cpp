#include "rlaif/config.hpp"

#include <Eigen/QR>

#include <fstream>

namespace rlaif {

namespace {

const std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::toy, "toy"},
    {ExperimentKind::improve, "improve"},
    {ExperimentKind::gap, "gap"},
    {ExperimentKind::ceiling, "ceiling"},
    {ExperimentKind::stein, "stein"},
    {ExperimentKind::nonmonotone, "nonmonotone"},
    {ExperimentKind::pareto, "pareto"},
    {ExperimentKind::adversarial, "adversarial"},
    {ExperimentKind::spectrum, "spectrum"},
    {ExperimentKind::promptable, "promptable"},
};

Vec json_to_vec(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError(field + ": expected a nonempty array of numbers");
    }
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            throw ConfigError(field + "[" + std::to_string(i) + "]: expected a number");
        }
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

nlohmann::json vec_to_json(const Vec& v) {
    nlohmann::json j = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

Mat json_to_mat(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError(field + ": expected a nonempty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    Vec first = json_to_vec(j[0], field + "[0]");
    Mat m(rows, first.size());
    m.row(0) = first.transpose();
    for (Eigen::Index r = 1; r < rows; ++r) {
        Vec row = json_to_vec(j[static_cast<std::size_t>(r)], field + "[" + std::to_string(r) + "]");
        if (row.size() != m.cols()) {
            throw ConfigError(field + ": ragged rows");
        }
        m.row(r) = row.transpose();
    }
    return m;
}

nlohmann::json mat_to_json(const Mat& m) {
    nlohmann::json j = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) j.push_back(vec_to_json(m.row(r).transpose()));
    return j;
}

SigmaSpec parse_sigma(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw ConfigError("world.sigma: expected an object with a \"type\" string");
    }
    const std::string type = j["type"].get<std::string>();
    SigmaSpec spec;
    if (type == "identity") {
        spec.type = SigmaSpec::Type::identity;
    } else if (type == "diagonal") {
        spec.type = SigmaSpec::Type::diagonal;
        if (!j.contains("values")) throw ConfigError("world.sigma.values: required for diagonal");
        spec.diagonal = json_to_vec(j["values"], "world.sigma.values");
    } else if (type == "dense") {
        spec.type = SigmaSpec::Type::dense;
        if (!j.contains("rows")) throw ConfigError("world.sigma.rows: required for dense");
        spec.dense = json_to_mat(j["rows"], "world.sigma.rows");
    } else if (type == "spectrum") {
        spec.type = SigmaSpec::Type::spectrum;
        if (!j.contains("values")) throw ConfigError("world.sigma.values: required for spectrum");
        spec.spectrum = json_to_vec(j["values"], "world.sigma.values");
        if (!j.contains("basis_seed") || !j["basis_seed"].is_number_unsigned()) {
            throw ConfigError("world.sigma.basis_seed: required unsigned integer for spectrum");
        }
        spec.basis_seed = j["basis_seed"].get<std::uint64_t>();
    } else {
        throw ConfigError("world.sigma.type: unknown type \"" + type + "\"");
    }
    return spec;
}

nlohmann::json sigma_to_json(const SigmaSpec& spec) {
    nlohmann::json j;
    switch (spec.type) {
        case SigmaSpec::Type::identity:
            j["type"] = "identity";
            break;
        case SigmaSpec::Type::diagonal:
            j["type"] = "diagonal";
            j["values"] = vec_to_json(spec.diagonal);
            break;
        case SigmaSpec::Type::dense:
            j["type"] = "dense";
            j["rows"] = mat_to_json(spec.dense);
            break;
        case SigmaSpec::Type::spectrum:
            j["type"] = "spectrum";
            j["values"] = vec_to_json(spec.spectrum);
            j["basis_seed"] = spec.basis_seed;
            break;
    }
    return j;
}

WorldSpec parse_world(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("world: expected an object");
    WorldSpec spec;
    if (!j.contains("d") || !j["d"].is_number_integer()) {
        throw ConfigError("world.d: required integer dimension");
    }
    spec.d = j["d"].get<Eigen::Index>();
    if (spec.d < 1) throw ConfigError("world.d: must be >= 1");
    if (j.contains("mu")) {
        spec.mu = json_to_vec(j["mu"], "world.mu");
        if (spec.mu.size() != spec.d) throw ConfigError("world.mu: length must equal d");
    }
    if (!j.contains("sigma")) throw ConfigError("world.sigma: required");
    spec.sigma = parse_sigma(j["sigma"]);
    if (!j.contains("v_star")) throw ConfigError("world.v_star: required");
    const nlohmann::json& vs = j["v_star"];
    if (vs.is_array()) {
        spec.v_star.components = json_to_vec(vs, "world.v_star");
        if (spec.v_star.components.size() != spec.d) throw ConfigError("world.v_star: length must equal d");
    } else if (vs.is_object() && vs.contains("eigvec_coeffs")) {
        spec.v_star.in_eigenbasis = true;
        spec.v_star.eigvec_coeffs = json_to_vec(vs["eigvec_coeffs"], "world.v_star.eigvec_coeffs");
        if (spec.v_star.eigvec_coeffs.size() > spec.d) {
            throw ConfigError("world.v_star.eigvec_coeffs: more coefficients than dimensions");
        }
    } else {
        throw ConfigError("world.v_star: expected an array or {\"eigvec_coeffs\": [...]}");
    }
    if (!j.contains("sigma_eps") || !j["sigma_eps"].is_number()) {
        throw ConfigError("world.sigma_eps: required number");
    }
    spec.sigma_eps = j["sigma_eps"].get<double>();
    if (spec.sigma_eps < 0.0) throw ConfigError("world.sigma_eps: must be >= 0");
    return spec;
}

nlohmann::json world_to_json(const WorldSpec& spec) {
    nlohmann::json j;
    j["d"] = spec.d;
    if (spec.mu.size() > 0) j["mu"] = vec_to_json(spec.mu);
    j["sigma"] = sigma_to_json(spec.sigma);
    if (spec.v_star.in_eigenbasis) {
        j["v_star"] = {{"eigvec_coeffs", vec_to_json(spec.v_star.eigvec_coeffs)}};
    } else {
        j["v_star"] = vec_to_json(spec.v_star.components);
    }
    j["sigma_eps"] = spec.sigma_eps;
    return j;
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "?";
}

std::optional<ExperimentKind> kind_from_name(const std::string& name) {
    for (const auto& [k, n] : kKindNames) {
        if (name == n) return k;
    }
    return std::nullopt;
}

ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    if (!j.contains("kind") || !j["kind"].is_string()) {
        throw ConfigError("kind: required string");
    }
    const std::string kind = j["kind"].get<std::string>();
    const auto parsed_kind = kind_from_name(kind);
    if (!parsed_kind) throw ConfigError("kind: unknown experiment kind \"" + kind + "\"");
    if (!j.contains("seed") || !j["seed"].is_number_unsigned()) {
        throw ConfigError("seed: required unsigned integer (seeds are mandatory)");
    }
    ExperimentConfig config;
    config.kind = *parsed_kind;
    config.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("world")) config.world = parse_world(j["world"]);
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw ConfigError("params: expected an object");
        config.params = j["params"];
    } else {
        config.params = nlohmann::json::object();
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "kind" && key != "seed" && key != "world" && key != "params") {
            throw ConfigError("unknown top-level field \"" + key + "\"");
        }
    }
    return config;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
    nlohmann::json j;
    j["kind"] = kind_name(config.kind);
    j["seed"] = config.seed;
    if (config.world) j["world"] = world_to_json(*config.world);
    j["params"] = config.params;
    return j;
}

Mat build_sigma(const SigmaSpec& spec, Eigen::Index d) {
    switch (spec.type) {
        case SigmaSpec::Type::identity:
            return Mat::Identity(d, d);
        case SigmaSpec::Type::diagonal: {
            if (spec.diagonal.size() != d) throw ConfigError("world.sigma.values: length must equal d");
            for (Eigen::Index i = 0; i < d; ++i) {
                if (spec.diagonal[i] < 0.0) throw ConfigError("world.sigma.values: must be nonnegative");
            }
            return Mat(spec.diagonal.asDiagonal());
        }
        case SigmaSpec::Type::dense: {
            if (spec.dense.rows() != d || spec.dense.cols() != d) {
                throw ConfigError("world.sigma.rows: must be d x d");
            }
            return spec.dense;
        }
        case SigmaSpec::Type::spectrum: {
            if (spec.spectrum.size() != d) throw ConfigError("world.sigma.values: length must equal d");
            Vec values = spec.spectrum;
            for (Eigen::Index i = 0; i < d; ++i) {
                if (values[i] < 0.0) throw ConfigError("world.sigma.values: must be nonnegative");
                if (i > 0 && values[i] > values[i - 1]) {
                    throw ConfigError("world.sigma.values: spectrum must be given in descending order");
                }
            }
            // Random orthonormal basis from the seed: QR of a Gaussian matrix.
            RandomStream rng(derive_seed(spec.basis_seed, 0x5150));
            Mat g(d, d);
            for (Eigen::Index r = 0; r < d; ++r) {
                for (Eigen::Index c = 0; c < d; ++c) g(r, c) = rng.normal();
            }
            Eigen::HouseholderQR<Mat> qr(g);
            Mat q = qr.householderQ();
            return q * values.asDiagonal() * q.transpose();
        }
    }
    throw ConfigError("world.sigma: unhandled type");
}

WorldPtr build_world(const WorldSpec& spec) {
    Mat sigma = build_sigma(spec.sigma, spec.d);
    Vec mu = spec.mu.size() > 0 ? spec.mu : Vec(Vec::Zero(spec.d));
    Vec v_star;
    if (spec.v_star.in_eigenbasis) {
        Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
        const Mat vectors = es.eigenvectors().rowwise().reverse();  // descending
        v_star = Vec::Zero(spec.d);
        for (Eigen::Index i = 0; i < spec.v_star.eigvec_coeffs.size(); ++i) {
            v_star += spec.v_star.eigvec_coeffs[i] * vectors.col(i);
        }
    } else {
        v_star = spec.v_star.components;
    }
    return RepresentationWorld::create(std::move(mu), std::move(sigma),
                                       ValueEncoding(Direction(std::move(v_star)), spec.sigma_eps));
}

SafetyFunction parse_safety_function(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        throw ConfigError("safety function: expected an object with a \"kind\" string");
    }
    const std::string kind = j["kind"].get<std::string>();
    if (!j.contains("v")) throw ConfigError("safety function: \"v\" required");
    Direction v(json_to_vec(j["v"], "safety function v"));
    if (kind == "linear") {
        return SafetyFunction::linear(std::move(v));
    }
    if (kind == "quadratic") {
        if (!j.contains("tau") || !j["tau"].is_number()) {
            throw ConfigError("safety function: quadratic requires numeric \"tau\"");
        }
        return SafetyFunction::quadratic(std::move(v), j["tau"].get<double>());
    }
    if (kind == "smooth_saturating") {
        if (!j.contains("scale") || !j["scale"].is_number()) {
            throw ConfigError("safety function: smooth_saturating requires numeric \"scale\"");
        }
        return SafetyFunction::smooth_saturating(std::move(v), j["scale"].get<double>());
    }
    throw ConfigError("safety function: unknown kind \"" + kind + "\"");
}

nlohmann::json safety_function_to_json(const SafetyFunction& f) {
    nlohmann::json j;
    j["v"] = vec_to_json(f.direction().vec());
    switch (f.kind()) {
        case SafetyFunction::Kind::linear:
            j["kind"] = "linear";
            break;
        case SafetyFunction::Kind::quadratic:
            j["kind"] = "quadratic";
            j["tau"] = f.parameter();
            break;
        case SafetyFunction::Kind::smooth_saturating:
            j["kind"] = "smooth_saturating";
            j["scale"] = f.parameter();
            break;
    }
    return j;
}

PromptableFamily parse_family(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError("family: expected a nonempty array of members");
    }
    std::vector<PromptableFamily::Member> members;
    members.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const nlohmann::json& m = j[i];
        if (!m.is_object() || !m.contains("label") || !m["label"].is_string() || !m.contains("function")) {
            throw ConfigError("family[" + std::to_string(i) + "]: expected {label, function}");
        }
        members.push_back({m["label"].get<std::string>(), parse_safety_function(m["function"])});
    }
    return PromptableFamily(std::move(members));
}

}  // namespace rlaif
