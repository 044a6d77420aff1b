#include "rlaif/config.hpp"

#include "rlaif/experiments.hpp"
#include "rlaif/spectrum.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace rlaif;
using nlohmann::json;

TEST_CASE("config parsing validates required fields") {
    CHECK_THROWS_AS(parse_config(json::parse(R"({"seed": 1})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"kind": "toy"})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"kind": "nope", "seed": 1})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"kind": "toy", "seed": -3})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"kind": "toy", "seed": 1, "bogus": 2})")), ConfigError);
    CHECK_NOTHROW(parse_config(json::parse(R"({"kind": "toy", "seed": 1})")));
}

TEST_CASE("world specs validate dimensions and types") {
    const char* missing_sigma = R"({"kind": "spectrum", "seed": 1,
        "world": {"d": 2, "v_star": [1.0, 0.0], "sigma_eps": 0.0}})";
    CHECK_THROWS_AS(parse_config(json::parse(missing_sigma)), ConfigError);

    const char* bad_vstar = R"({"kind": "spectrum", "seed": 1,
        "world": {"d": 2, "sigma": {"type": "identity"}, "v_star": [1.0], "sigma_eps": 0.0}})";
    CHECK_THROWS_AS(parse_config(json::parse(bad_vstar)), ConfigError);

    const char* bad_sigma_type = R"({"kind": "spectrum", "seed": 1,
        "world": {"d": 2, "sigma": {"type": "wavelet"}, "v_star": [1.0, 0.0], "sigma_eps": 0.0}})";
    CHECK_THROWS_AS(parse_config(json::parse(bad_sigma_type)), ConfigError);

    const char* negative_eps = R"({"kind": "spectrum", "seed": 1,
        "world": {"d": 2, "sigma": {"type": "identity"}, "v_star": [1.0, 0.0], "sigma_eps": -0.5}})";
    CHECK_THROWS_AS(parse_config(json::parse(negative_eps)), ConfigError);
}

TEST_CASE("config round-trips through serialization") {
    const char* text = R"({
        "kind": "ceiling",
        "seed": 99,
        "world": {
            "d": 3,
            "mu": [0.1, 0.2, 0.3],
            "sigma": {"type": "diagonal", "values": [2.0, 1.0, 0.5]},
            "v_star": [1.0, 0.0, 0.0],
            "sigma_eps": 0.25
        },
        "params": {"n_trials": 1000, "rho_grid": [0.5]}
    })";
    const ExperimentConfig config = parse_config(json::parse(text));
    const ExperimentConfig replayed = parse_config(config_to_json(config));

    CHECK(replayed.kind == config.kind);
    CHECK(replayed.seed == config.seed);
    REQUIRE(replayed.world.has_value());
    CHECK(replayed.world->d == config.world->d);
    CHECK((replayed.world->mu - config.world->mu).norm() == 0.0);
    CHECK(replayed.world->sigma.type == config.world->sigma.type);
    CHECK((replayed.world->sigma.diagonal - config.world->sigma.diagonal).norm() == 0.0);
    CHECK((replayed.world->v_star.components - config.world->v_star.components).norm() == 0.0);
    CHECK(replayed.world->sigma_eps == config.world->sigma_eps);
    CHECK(replayed.params == config.params);
    CHECK(config_to_json(replayed) == config_to_json(config));
}

TEST_CASE("sigma builders produce the requested covariance") {
    SigmaSpec identity;
    CHECK((build_sigma(identity, 3) - Mat::Identity(3, 3)).norm() == 0.0);

    SigmaSpec diag;
    diag.type = SigmaSpec::Type::diagonal;
    diag.diagonal = Vec(2);
    diag.diagonal << 2.0, 1.0;
    const Mat d = build_sigma(diag, 2);
    CHECK(d(0, 0) == 2.0);
    CHECK(d(1, 1) == 1.0);
    CHECK(d(0, 1) == 0.0);

    SigmaSpec spectral;
    spectral.type = SigmaSpec::Type::spectrum;
    spectral.spectrum = Vec(3);
    spectral.spectrum << 3.0, 2.0, 1.0;
    spectral.basis_seed = 17;
    const Mat s = build_sigma(spectral, 3);
    Eigen::SelfAdjointEigenSolver<Mat> es(s);
    CHECK(es.eigenvalues()[2] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(es.eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-10));
    // Same seed, same basis; different seed, different basis.
    CHECK((build_sigma(spectral, 3) - s).norm() == 0.0);
    spectral.basis_seed = 18;
    CHECK((build_sigma(spectral, 3) - s).norm() > 1e-6);

    SigmaSpec ascending;
    ascending.type = SigmaSpec::Type::spectrum;
    ascending.spectrum = Vec(2);
    ascending.spectrum << 1.0, 2.0;
    ascending.basis_seed = 1;
    CHECK_THROWS_AS(build_sigma(ascending, 2), ConfigError);
}

TEST_CASE("eigvec-combination value directions live in the top eigenspace") {
    const char* text = R"({
        "kind": "spectrum",
        "seed": 4,
        "world": {
            "d": 6,
            "sigma": {"type": "spectrum", "values": [8.0, 4.0, 0.1, 0.1, 0.1, 0.1], "basis_seed": 3},
            "v_star": {"eigvec_coeffs": [0.6, 0.8]},
            "sigma_eps": 0.0
        }
    })";
    const ExperimentConfig config = parse_config(json::parse(text));
    WorldPtr world = build_world(*config.world);
    CHECK(world->encoding().v_star.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(value_concentration(world->sigma(), world->encoding().v_star, 2) >= 0.999);
}

TEST_CASE("safety function and family specs parse and validate") {
    const SafetyFunction lin = parse_safety_function(json::parse(R"({"kind": "linear", "v": [1.0, 0.0]})"));
    CHECK(lin.kind() == SafetyFunction::Kind::linear);

    CHECK_THROWS_AS(parse_safety_function(json::parse(R"({"kind": "quadratic", "v": [1.0]})")), ConfigError);
    CHECK_THROWS_AS(parse_safety_function(json::parse(R"({"kind": "mystery", "v": [1.0]})")), ConfigError);

    const json family_json = json::parse(
        R"([{"label": "a", "function": {"kind": "linear", "v": [1.0, 0.0]}},
            {"label": "b", "function": {"kind": "quadratic", "v": [0.0, 1.0], "tau": 0.3}}])");
    const PromptableFamily family = parse_family(family_json);
    CHECK(family.members.size() == 2);
    CHECK(family.members[1].function.parameter() == 0.3);

    CHECK_THROWS_AS(parse_family(json::parse("[]")), ConfigError);

    // Round trip of a function spec.
    const json round = safety_function_to_json(family.members[1].function);
    CHECK(round["kind"] == "quadratic");
    CHECK(round["tau"] == 0.3);
}

TEST_CASE("run_experiment raises ConfigError for malformed params") {
    ExperimentConfig config = parse_config(json::parse(R"({"kind": "promptable", "seed": 1})"));
    CHECK_THROWS_AS(run_experiment(config), ConfigError);  // no world

    config = parse_config(json::parse(
        R"({"kind": "improve", "seed": 1, "params": {"variant": "nonsense"}})"));
    CHECK_THROWS_AS(run_experiment(config), ConfigError);
}

TEST_CASE("result file writer is stable and carries tolerances inline") {
    ExperimentResult result;
    result.kind = "demo";
    result.seed = 12;
    result.config_echo = "{}";
    result.add_scalar("plain", 1.5);
    result.add_scalar("with_se", 2.5, 0.125);
    result.check_close("close_check", 1.0001, 1.0, 0.01, "note");
    result.check_flag("flag_check", true);
    result.duration_seconds = 3.25;

    const std::string text = result_to_string(result);
    CHECK(text.find("experiment: demo") != std::string::npos);
    CHECK(text.find("with_se: 2.5 (se 0.125)") != std::string::npos);
    CHECK(text.find("[pass] close_check") != std::string::npos);
    CHECK(text.find("duration_seconds") != std::string::npos);
    // The deterministic section excludes the wall clock.
    CHECK(result_numeric_fields(result).find("duration") == std::string::npos);

    result.check_flag("failing", false);
    CHECK_FALSE(result.all_passed());
    CHECK(result_to_string(result).find("[FAIL] failing") != std::string::npos);
}

TEST_CASE("csv tables write a header row and full-precision values") {
    CsvTable table{"sweep", {"rho", "gap"}, {{0.5, 0.28209479177387814}}};
    std::ostringstream ss;
    write_csv(ss, table);
    CHECK(ss.str() == "rho,gap\n0.5,0.28209479177387814\n");
}

TEST_CASE("shipped config files stay in sync with the bundled suite") {
    for (const BuiltinConfig& entry : builtin_suite()) {
        const std::string path = std::string(RLAIF_CONFIGS_DIR) + "/" + entry.name + ".json";
        std::ifstream is(path);
        REQUIRE_MESSAGE(is.good(), path);
        json from_file;
        is >> from_file;
        CHECK_MESSAGE(from_file == json::parse(entry.json_text), entry.name);
    }
}
