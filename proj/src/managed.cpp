#include "lite_rvfl/managed.hpp"

#include <vector>

#include "lite_rvfl/errors.hpp"

namespace lite_rvfl {

IncrementalState fit_buffer(const std::deque<BufferedSample>& samples, const EnhancementMap& map,
                            const WeightScheme& scheme, double lambda, int classes,
                            UpdateMode mode) {
  if (samples.empty()) throw InvalidArgument("cannot fit an empty buffer");
  std::vector<Eigen::VectorXd> raw;
  std::vector<ClassLabel> labels;
  raw.reserve(samples.size());
  labels.reserve(samples.size());
  for (const auto& s : samples) {
    raw.push_back(s.raw);
    labels.push_back(s.label);
  }
  return IncrementalState::init(DesignMatrices::build(raw, labels, map, classes), scheme, lambda,
                                mode);
}

namespace {

std::deque<BufferedSample> seed_buffer(std::span<const Eigen::VectorXd> raw,
                                       std::span<const ClassLabel> labels, std::size_t capacity) {
  if (raw.size() != labels.size()) throw InvalidArgument("sample and label counts differ");
  if (raw.empty()) throw InvalidArgument("managed model needs offline samples");
  if (capacity == 0) throw InvalidArgument("retrain buffer capacity must be positive");
  std::deque<BufferedSample> buffer;
  const std::size_t first = raw.size() > capacity ? raw.size() - capacity : 0;
  for (std::size_t i = first; i < raw.size(); ++i) buffer.push_back({raw[i], labels[i]});
  return buffer;
}

}  // namespace

ManagedModel::ManagedModel(EnhancementMap map, double lambda, int classes,
                           std::unique_ptr<DriftDetector> detector,
                           std::span<const Eigen::VectorXd> offline,
                           std::span<const ClassLabel> offline_labels, std::size_t capacity)
    : map_(std::move(map)),
      lambda_(lambda),
      classes_(classes),
      detector_(std::move(detector)),
      model_(IncrementalState::init(DesignMatrices::build(offline, offline_labels, map_, classes),
                                    WeightScheme::uniform(), lambda)),
      buffer_(seed_buffer(offline, offline_labels, capacity)),
      capacity_(capacity) {
  if (!detector_) throw InvalidArgument("managed model needs a detector");
}

ManagedModel::ManagedModel(const ManagedModel& other)
    : map_(other.map_),
      lambda_(other.lambda_),
      classes_(other.classes_),
      detector_(other.detector_->clone()),
      model_(other.model_),
      buffer_(other.buffer_),
      capacity_(other.capacity_),
      retrain_count_(other.retrain_count_) {}

ManagedModel& ManagedModel::operator=(const ManagedModel& other) {
  if (this != &other) *this = ManagedModel(other);
  return *this;
}

ClassLabel ManagedModel::predict(const Eigen::VectorXd& raw) const {
  return model_.predict(map_.extend(raw)).label;
}

ManagedModel::Outcome ManagedModel::step(const Eigen::VectorXd& raw, ClassLabel truth) {
  return learn(raw, truth, predict(raw));
}

ManagedModel::Outcome ManagedModel::learn(const Eigen::VectorXd& raw, ClassLabel truth,
                                          ClassLabel predicted) {
  Outcome out;
  out.predicted = predicted;
  out.status = detector_->update(predicted == truth ? 0.0 : 1.0);
  push(raw, truth);
  if (out.status == DetectorStatus::kDrift) {
    out.drift_fired = true;
    retrain();
  } else {
    model_.step(map_.extend(raw), truth);
  }
  return out;
}

void ManagedModel::retrain() {
  model_ = fit_buffer(buffer_, map_, WeightScheme::uniform(), lambda_, classes_);
  ++retrain_count_;
}

void ManagedModel::push(const Eigen::VectorXd& raw, ClassLabel label) {
  buffer_.push_back({raw, label});
  while (buffer_.size() > capacity_) buffer_.pop_front();
}

}  // namespace lite_rvfl
