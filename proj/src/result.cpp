#include "rlaif/result.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace rlaif {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

bool ExperimentResult::all_passed() const {
    for (const CheckResult& c : checks) {
        if (!c.passed) return false;
    }
    return true;
}

void ExperimentResult::add_scalar(std::string name, double value) {
    scalars.push_back({std::move(name), value, std::nullopt});
}

void ExperimentResult::add_scalar(std::string name, double value, double std_error) {
    scalars.push_back({std::move(name), value, std_error});
}

void ExperimentResult::check_close(std::string name, double value, double expected, double tolerance,
                                   std::string detail) {
    const bool ok = std::isfinite(value) && std::abs(value - expected) <= tolerance;
    checks.push_back({std::move(name), ok, value, expected, tolerance, std::move(detail)});
}

void ExperimentResult::check_flag(std::string name, bool value, std::string detail) {
    checks.push_back({std::move(name), value, value ? 1.0 : 0.0, 1.0, 0.0, std::move(detail)});
}

namespace {

void write_deterministic(std::ostream& os, const ExperimentResult& r) {
    os << "experiment: " << r.kind << "\n";
    os << "version: " << r.artifact_version << "\n";
    os << "seed: " << r.seed << "\n";
    os << "config: " << r.config_echo << "\n";
    os << "results:\n";
    for (const NamedScalar& s : r.scalars) {
        os << "  " << s.name << ": " << fmt(s.value);
        if (s.std_error) os << " (se " << fmt(*s.std_error) << ")";
        os << "\n";
    }
    os << "checks:\n";
    for (const CheckResult& c : r.checks) {
        os << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name << ": value " << fmt(c.value)
           << ", expected " << fmt(c.expected) << " +- " << fmt(c.tolerance);
        if (!c.detail.empty()) os << "  # " << c.detail;
        os << "\n";
    }
}

}  // namespace

void write_result(std::ostream& os, const ExperimentResult& result) {
    write_deterministic(os, result);
    os << "duration_seconds: " << fmt(result.duration_seconds) << "\n";
}

std::string result_to_string(const ExperimentResult& result) {
    std::ostringstream ss;
    write_result(ss, result);
    return ss.str();
}

std::string result_numeric_fields(const ExperimentResult& result) {
    std::ostringstream ss;
    write_deterministic(ss, result);
    return ss.str();
}

void write_csv(std::ostream& os, const CsvTable& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        os << table.header[i] << (i + 1 < table.header.size() ? "," : "");
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << fmt(row[i]) << (i + 1 < row.size() ? "," : "");
        }
        os << "\n";
    }
}

}  // namespace rlaif
