#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipkit/serialize.hpp"

namespace lipkit {

// One finished scenario run. `machine` is deterministic for a fixed document
// and seed (no timing, no environment data) so reruns compare byte-for-byte;
// `text` is the aligned human rendering of the same content.
struct RunReport {
  std::string name;
  bool pass = true;
  json machine;
  std::string text;
};

struct RunOptions {
  std::optional<std::uint64_t> seed_override;
  std::optional<double> tolerance_override;
};

inline constexpr const char* kScenarioSchema = "lipkit-scenario/1";
inline constexpr const char* kReportSchema = "lipkit-report/1";

// Validates the document against the versioned schema (unknown fields
// rejected, seed mandatory) and executes its task. Parse and validation
// problems raise typed errors; expectation misses only clear `pass`.
RunReport run_scenario_json(const json& document, const RunOptions& options = {});
RunReport run_scenario_file(const std::string& path, const RunOptions& options = {});

// Built-in gallery; every entry is a complete scenario document whose
// "theorem" field names the result it exercises.
std::vector<std::string> demo_names();
const json& demo_scenario(const std::string& name);

}  // namespace lipkit
