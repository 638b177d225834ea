#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "superint/potentials.hpp"

namespace superint::lab {

using json = nlohmann::json;

inline constexpr const char* kReportSchema = "superint-report/1";

// Validates the document against the experiment schema (unknown keys
// rejected, seed mandatory) and fills every default, so the returned config
// is fully resolved. Throws ConfigError.
json resolve_config(const json& raw);

// System block -> potential spec (profiles resolved from the registry).
PotentialSpec spec_from_config(const json& system);

struct RunResult {
  json report;
  bool passed = false;
};

// Runs one experiment, writes its artifacts under out_dir, returns the
// report. The SUPERINT_OUT environment variable overrides out_dir.
RunResult run_experiment(const json& config, const std::string& out_dir);
RunResult run_experiment_str(const std::string& config_json,
                             const std::string& out_dir);

// Report with volatile timing fields removed; input to the determinism hash.
json strip_timings(const json& report);
std::uint64_t report_hash(const json& report);

std::string coefficient_table_csv(int n);

}  // namespace superint::lab
