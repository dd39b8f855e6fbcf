#pragma once

#include <cstddef>
#include <deque>
#include <memory>
#include <span>

#include <Eigen/Dense>

#include "lite_rvfl/drift.hpp"
#include "lite_rvfl/incremental.hpp"
#include "lite_rvfl/rvfl.hpp"

namespace lite_rvfl {

struct BufferedSample {
  Eigen::VectorXd raw;
  ClassLabel label = 1;
};

// Plain (uniform-weight) RVFL guarded by a drift detector. Each step predicts,
// feeds the 0/1 error to the detector and absorbs the sample. When the
// detector reports drift the output weights are refitted from scratch on the
// most recent `capacity` samples, the current one included. The enhancement
// map never changes.
class ManagedModel {
 public:
  static constexpr std::size_t kDefaultCapacity = 200;

  // `offline` seeds both the initial fit and the retrain buffer.
  ManagedModel(EnhancementMap map, double lambda, int classes,
               std::unique_ptr<DriftDetector> detector, std::span<const Eigen::VectorXd> offline,
               std::span<const ClassLabel> offline_labels,
               std::size_t capacity = kDefaultCapacity);

  ManagedModel(const ManagedModel& other);
  ManagedModel& operator=(const ManagedModel& other);
  ManagedModel(ManagedModel&&) noexcept = default;
  ManagedModel& operator=(ManagedModel&&) noexcept = default;

  struct Outcome {
    ClassLabel predicted = 1;
    bool drift_fired = false;
    DetectorStatus status = DetectorStatus::kInControl;
  };

  // Test-then-train on one sample.
  Outcome step(const Eigen::VectorXd& raw, ClassLabel truth);

  ClassLabel predict(const Eigen::VectorXd& raw) const;

  // The training half of step(), given the prediction already made for `raw`.
  Outcome learn(const Eigen::VectorXd& raw, ClassLabel truth, ClassLabel predicted);

  const IncrementalState& model() const { return model_; }
  const EnhancementMap& map() const { return map_; }
  const std::deque<BufferedSample>& buffer() const { return buffer_; }
  std::size_t capacity() const { return capacity_; }
  int retrain_count() const { return retrain_count_; }
  const DriftDetector& detector() const { return *detector_; }

 private:
  void push(const Eigen::VectorXd& raw, ClassLabel label);
  void retrain();

  EnhancementMap map_;
  double lambda_;
  int classes_;
  std::unique_ptr<DriftDetector> detector_;
  IncrementalState model_;
  std::deque<BufferedSample> buffer_;
  std::size_t capacity_;
  int retrain_count_ = 0;
};

// Uniform-weight fit of `samples` through `map`.
IncrementalState fit_buffer(const std::deque<BufferedSample>& samples, const EnhancementMap& map,
                            const WeightScheme& scheme, double lambda, int classes,
                            UpdateMode mode = UpdateMode::kDirect);

}  // namespace lite_rvfl
