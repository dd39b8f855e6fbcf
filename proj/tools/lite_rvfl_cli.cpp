// lite-rvfl: run prequential experiments, calibrate the forgetting factor,
// export synthetic drift streams.
//
// Exit codes: 0 ok, 2 invalid arguments/config/spec, 3 data or I/O failure,
// 4 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "lite_rvfl/errors.hpp"
#include "lite_rvfl/experiment.hpp"
#include "lite_rvfl/weighting.hpp"

namespace {

using namespace lite_rvfl;

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kData = 3;
constexpr int kNumerical = 4;

int report(const char* kind, const std::exception& e, int code) {
  std::cerr << "lite-rvfl: " << kind << ": " << e.what() << '\n';
  return code;
}

int cmd_run(const std::string& config_path, unsigned jobs, const std::string& out_dir) {
  CliConfig config;
  try {
    config = load_cli_config(config_path);
  } catch (const ConfigError& e) {
    return report("config error", e, kInvalid);
  } catch (const IoError& e) {
    return report("config error", e, kInvalid);
  }
  if (!out_dir.empty()) config.output_dir = out_dir;

  LabeledStream stream;
  try {
    stream = resolve_data(config.data);
  } catch (const IoError& e) {
    return report("data error", e, kData);
  } catch (const ParseError& e) {
    return report("data error", e, kData);
  } catch (const InvalidArgument& e) {
    return report("data error", e, kData);
  }
  for (const auto& m : config.methods) {
    if (m.offline_count >= stream.size()) {
      std::cerr << "lite-rvfl: config error: offline_count " << m.offline_count
                << " leaves no online samples in a stream of " << stream.size() << '\n';
      return kInvalid;
    }
    if (stream.dim < 1) {
      std::cerr << "lite-rvfl: data error: empty stream\n";
      return kData;
    }
  }

  std::vector<NamedRun> runs;
  try {
    runs = run_experiment(config, stream, jobs);
  } catch (const NumericalError& e) {
    return report("numerical error", e, kNumerical);
  } catch (const InvalidArgument& e) {
    return report("config error", e, kInvalid);
  }

  const auto summary = aggregate_runs(runs);
  const auto doc = summary_to_json(summary, runs, stream, config);
  try {
    write_artifacts(config.output_dir, runs, doc);
  } catch (const IoError& e) {
    return report("write error", e, kData);
  }
  std::cout << render_table(doc);
  std::cout << "artifacts written to " << config.output_dir.string() << '\n';
  return kOk;
}

int cmd_calibrate(double alpha, long long window) {
  if (window < 1) {
    std::cerr << "lite-rvfl: --window must be >= 1\n";
    return kInvalid;
  }
  double theta = 0.0;
  try {
    theta = calibrate_theta(alpha, static_cast<std::size_t>(window));
  } catch (const InvalidArgument& e) {
    return report("invalid argument", e, kInvalid);
  }
  std::printf("theta = %.10f\n", theta);
  if (theta > 1.0) {
    std::printf("limit proportion of the newest %lld samples = %.12f (target %.12f)\n", window,
                limit_proportion(theta, static_cast<std::size_t>(window)), alpha);
  }
  return kOk;
}

int cmd_synth(const std::string& spec_path, const std::string& out_path) {
  DriftSpec spec;
  try {
    std::ifstream in(spec_path);
    if (!in) {
      std::cerr << "lite-rvfl: spec error: cannot open '" << spec_path << "'\n";
      return kInvalid;
    }
    spec = parse_drift_spec(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    return report("spec error", e, kInvalid);
  } catch (const ConfigError& e) {
    return report("spec error", e, kInvalid);
  }
  try {
    write_csv(synth_drift_stream(spec), std::filesystem::path(out_path));
  } catch (const IoError& e) {
    return report("write error", e, kData);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lite-RVFL streaming classifier experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run every (method, seed) pair of a config");
  std::string config_path;
  unsigned jobs = 1;
  std::string out_dir;
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  run->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "output directory (overrides the config)");

  auto* calibrate = app.add_subcommand("calibrate", "forgetting factor for a target recent mass");
  double alpha = 0.0;
  long long window = 0;
  calibrate->add_option("--alpha", alpha, "target mass of the newest L samples, in (0, 1)")
      ->required();
  calibrate->add_option("--window", window, "window length L")->required();

  auto* synth = app.add_subcommand("synth", "write a synthetic drift stream as CSV");
  std::string spec_path;
  std::string synth_out;
  synth->add_option("--spec", spec_path, "drift spec (JSON)")->required();
  synth->add_option("--out", synth_out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  if (*run) return cmd_run(config_path, jobs, out_dir);
  if (*calibrate) return cmd_calibrate(alpha, window);
  return cmd_synth(spec_path, synth_out);
}
