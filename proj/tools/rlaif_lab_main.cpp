#include "rlaif/experiments.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace {

// Exit codes: 0 all checks pass, 1 a check failed, 2 parse/validation error.
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadConfig = 2;

std::string default_out_dir() {
    if (const char* env = std::getenv("RLAIF_LAB_OUT")) return env;
    return ".";
}

std::string config_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

int run_command(const std::string& config_path, const std::string& out_dir) {
    rlaif::ExperimentConfig config;
    try {
        config = rlaif::load_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    }
    try {
        const rlaif::ExperimentResult result = rlaif::run_experiment(config);
        const std::string path = rlaif::write_result_files(result, out_dir, config_stem(config_path));
        for (const rlaif::CheckResult& check : result.checks) {
            std::cout << (check.passed ? "[pass] " : "[FAIL] ") << check.name << "\n";
        }
        std::cout << "result written to " << path << "\n";
        return result.all_passed() ? kExitOk : kExitCheckFailed;
    } catch (const rlaif::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}

int validate_command(const std::string& config_path) {
    try {
        const rlaif::ExperimentConfig config = rlaif::load_config_file(config_path);
        std::cout << "ok: " << rlaif::kind_name(config.kind) << " experiment, seed " << config.seed << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for linear feedback-tilting models"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = default_out_dir();
    std::string only_kind;
    std::uint64_t seed_override = 0;
    bool seed_set = false;

    CLI::App* run = app.add_subcommand("run", "Run one experiment config and write a .result file");
    run->add_option("config", config_path, "Path to a JSON experiment config")->required();
    run->add_option("--out", out_dir, "Output directory (default: $RLAIF_LAB_OUT or .)");

    CLI::App* validate = app.add_subcommand("validate", "Parse and validate a config without running it");
    validate->add_option("config", config_path, "Path to a JSON experiment config")->required();

    CLI::App* reproduce = app.add_subcommand("reproduce-all", "Run the bundled verification suite");
    reproduce->add_option("--only", only_kind, "Restrict to one experiment kind");
    auto* seed_opt = reproduce->add_option("--seed", seed_override, "Override every config's seed");
    reproduce->add_option("--out", out_dir, "Output directory (default: $RLAIF_LAB_OUT or .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitBadConfig;
    }
    seed_set = seed_opt->count() > 0;

    if (run->parsed()) {
        return run_command(config_path, out_dir);
    }
    if (validate->parsed()) {
        return validate_command(config_path);
    }
    if (reproduce->parsed()) {
        rlaif::SuiteOptions options;
        options.out_dir = out_dir;
        if (!only_kind.empty()) {
            const auto kind = rlaif::kind_from_name(only_kind);
            if (!kind) {
                std::cerr << "error: unknown experiment kind \"" << only_kind << "\"\n";
                return kExitBadConfig;
            }
            options.only = *kind;
        }
        if (seed_set) options.seed_override = seed_override;
        return rlaif::reproduce_all(options, std::cout);
    }
    return kExitBadConfig;
}
