#pragma once

#include "rlaif/config.hpp"
#include "rlaif/result.hpp"

#include <iosfwd>
#include <vector>

namespace rlaif {

// Runs one experiment. Structural problems in params raise ConfigError;
// numeric checks never raise, they land as failed checks in the result.
ExperimentResult run_experiment(const ExperimentConfig& config);

// The bundled experiment suite: one named config per verification theme,
// together covering every check the reproduce-all gate runs.
struct BuiltinConfig {
    std::string name;
    ExperimentKind kind;
    const char* json_text;
};

const std::vector<BuiltinConfig>& builtin_suite();

struct SuiteOptions {
    std::optional<ExperimentKind> only;
    std::optional<std::uint64_t> seed_override;
    std::string out_dir = ".";
};

// Runs the bundled suite, writes one .result file (plus CSV tables) per
// config into out_dir, and prints one line per check. Returns 0 iff every
// check passed.
int reproduce_all(const SuiteOptions& options, std::ostream& log);

// Writes result + tables next to each other; returns the .result path.
std::string write_result_files(const ExperimentResult& result, const std::string& out_dir,
                               const std::string& stem);

}  // namespace rlaif
