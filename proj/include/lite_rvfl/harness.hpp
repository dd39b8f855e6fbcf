#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lite_rvfl/drift.hpp"
#include "lite_rvfl/incremental.hpp"
#include "lite_rvfl/rvfl.hpp"
#include "lite_rvfl/stream.hpp"

namespace lite_rvfl {

enum class MethodKind { kRvflUniform, kLite, kAlt, kManaged };

struct MethodSpec {
  MethodKind kind = MethodKind::kLite;
  double theta = 1.003;                 // lite
  int k = 2;                            // alt
  DetectorKind detector = AdwinConfig{};  // managed
  // Display name; empty means display_name() picks the conventional one.
  std::string label;

  static MethodSpec rvfl_uniform();
  static MethodSpec lite(double theta);
  static MethodSpec alt(int k);
  static MethodSpec managed(DetectorKind detector);

  std::string display_name() const;
};

struct ExperimentConfig {
  MethodSpec method;
  std::size_t offline_count = 200;
  std::size_t window = 500;
  // Refit from the newest retrain_buffer samples every this many online
  // samples, restarting the weight ladder at its first rung.
  std::optional<std::size_t> periodic_retrain_every;
  std::size_t retrain_buffer = 200;
  double lambda = 0.1;
  int groups = 10;
  int nodes_per_group = 10;
  // z-score raw features with statistics of the offline block.
  bool standardize = false;
  // Only consulted for the lite method.
  UpdateMode mode = UpdateMode::kDirect;
};

void validate(const ExperimentConfig& config);

struct RunResult {
  std::vector<std::uint8_t> correctness;
  std::vector<double> cumulative_accuracy;
  std::vector<double> windowed_accuracy;
  double wall_time_seconds = 0.0;
  std::optional<int> drifts_detected;
  int periodic_retrains = 0;
  double final_accuracy = 0.0;
};

// Anything that can be evaluated test-then-train. predict() is always called
// before learn() for the same sample.
class StreamLearner {
 public:
  virtual ~StreamLearner() = default;
  virtual ClassLabel predict(const Eigen::VectorXd& x) = 0;
  virtual void learn(const Eigen::VectorXd& x, ClassLabel truth, ClassLabel predicted) = 0;
  virtual std::optional<int> drifts_detected() const { return std::nullopt; }
  virtual int periodic_retrains() const { return 0; }
};

// Fits the learner described by `config` on `offline` (already preprocessed).
std::unique_ptr<StreamLearner> make_learner(const ExperimentConfig& config,
                                            const EnhancementMap& map,
                                            const LabeledStream& offline);

// Predict, score, then learn, for every sample of `online`. Only this loop is
// timed. Numerical failures are rethrown with the online step index.
RunResult run_prequential(StreamLearner& learner, const LabeledStream& online,
                          std::size_t window);

// Splits `stream`, draws the enhancement map from `seed`, trains offline and
// runs the online part.
RunResult run_prequential(const ExperimentConfig& config, const LabeledStream& stream,
                          std::uint64_t seed);

// Element t is the mean of the trailing min(t + 1, window) entries.
std::vector<double> windowed_accuracy(std::span<const std::uint8_t> correctness,
                                      std::size_t window);
std::vector<double> cumulative_accuracy(std::span<const std::uint8_t> correctness);

struct NamedRun {
  std::string method;
  std::uint64_t seed = 0;
  RunResult result;
};

struct MethodSummary {
  std::string method;
  std::size_t runs = 0;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;  // sample standard deviation; 0 for one run
  double time_mean = 0.0;
  double time_std = 0.0;
  std::optional<double> drifts_mean;
  int accuracy_rank = 0;  // 1 = highest mean accuracy
  int time_rank = 0;      // 1 = fastest
};

// One entry per method in first-appearance order. Ties in either ranking go
// to the lexicographically smaller method name.
std::vector<MethodSummary> aggregate_runs(std::span<const NamedRun> runs);

}  // namespace lite_rvfl
