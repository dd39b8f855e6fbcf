#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lite_rvfl/errors.hpp"
#include "lite_rvfl/harness.hpp"
#include "lite_rvfl/stream.hpp"

namespace lite_rvfl {

// Every problem found while validating a config or spec document, each
// prefixed with a JSON-pointer-like location.
class ConfigError : public InvalidArgument {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// A numerical failure inside one (method, seed) run.
class RunError : public NumericalError {
 public:
  RunError(std::string method, std::uint64_t seed, const NumericalError& cause);
  const std::string& method() const { return method_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::string method_;
  std::uint64_t seed_;
};

struct DataSource {
  // CSV input; relative paths are resolved against the config's directory.
  std::optional<std::filesystem::path> path;
  CsvSchema schema;
  std::optional<DriftSpec> synthetic;
};

struct CliConfig {
  DataSource data;
  std::vector<ExperimentConfig> methods;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir;
};

// Layout (see docs/config.schema.json):
//   {"data": {"csv": {...}} | {"dsms": "<path>"} | {"synthetic": <drift spec>},
//    "seeds": [..], "output_dir": "..", "defaults": {..}, "methods": [{..}, ..]}
// Throws ConfigError listing every problem found.
CliConfig parse_cli_config(const nlohmann::json& doc,
                           const std::filesystem::path& base_dir = {});
CliConfig load_cli_config(const std::filesystem::path& path);

// {"name", "dim", "classes", "seed", "segments": [{"length", "cov_scale",
//  "class_means": [[...], ...]}]}
DriftSpec parse_drift_spec(const nlohmann::json& doc);
nlohmann::json drift_spec_to_json(const DriftSpec& spec);

// Throws IoError / ParseError.
LabeledStream resolve_data(const DataSource& source);

// All (method, seed) runs, method-major. Up to `jobs` runs execute in
// parallel; each owns its model. Throws RunError on numerical failure.
std::vector<NamedRun> run_experiment(const CliConfig& config, const LabeledStream& stream,
                                     unsigned jobs = 1);

nlohmann::json summary_to_json(const std::vector<MethodSummary>& summary,
                               const std::vector<NamedRun>& runs, const LabeledStream& stream,
                               const CliConfig& config);

// Text table built only from a summary_to_json() document.
std::string render_table(const nlohmann::json& summary);

// curves/<method>_seed<seed>.csv, summary.json and summary.txt under `dir`.
void write_artifacts(const std::filesystem::path& dir, const std::vector<NamedRun>& runs,
                     const nlohmann::json& summary);

std::string curve_csv(const RunResult& result);
std::string file_slug(const std::string& method);

}  // namespace lite_rvfl
