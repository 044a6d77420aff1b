#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rlaif {

inline constexpr const char* kArtifactVersion = "0.1.0";

// One named numeric outcome, optionally with a Monte Carlo standard error.
struct NamedScalar {
    std::string name;
    double value;
    std::optional<double> std_error;
};

// One verdict against a declared tolerance. The tolerance is carried inline
// so pass/fail can be re-derived from the record alone.
struct CheckResult {
    std::string name;
    bool passed;
    double value;
    double expected;
    double tolerance;
    std::string detail;
};

struct CsvTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Everything one experiment run produces. The named scalars and checks are
// deterministic functions of (config, seed); duration is wall clock and is
// excluded from the determinism contract.
struct ExperimentResult {
    std::string kind;
    std::uint64_t seed = 0;
    std::string config_echo;  // compact JSON of the config that ran
    std::vector<NamedScalar> scalars;
    std::vector<CheckResult> checks;
    std::vector<CsvTable> tables;
    double duration_seconds = 0.0;
    std::string artifact_version = kArtifactVersion;

    bool all_passed() const;

    void add_scalar(std::string name, double value);
    void add_scalar(std::string name, double value, double std_error);
    // |value - expected| <= tolerance
    void check_close(std::string name, double value, double expected, double tolerance, std::string detail = "");
    // value must be true
    void check_flag(std::string name, bool value, std::string detail = "");
};

// Human-readable hierarchical text form (the `.result` file). Numeric fields
// are printed with 17 significant digits so reruns can be compared verbatim.
void write_result(std::ostream& os, const ExperimentResult& result);
std::string result_to_string(const ExperimentResult& result);

// The deterministic portion only (no duration), for byte-comparison tests.
std::string result_numeric_fields(const ExperimentResult& result);

void write_csv(std::ostream& os, const CsvTable& table);

}  // namespace rlaif
