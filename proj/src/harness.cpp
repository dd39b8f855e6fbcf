#include "lite_rvfl/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "lite_rvfl/errors.hpp"
#include "lite_rvfl/managed.hpp"

namespace lite_rvfl {

MethodSpec MethodSpec::rvfl_uniform() {
  MethodSpec m;
  m.kind = MethodKind::kRvflUniform;
  return m;
}

MethodSpec MethodSpec::lite(double theta) {
  MethodSpec m;
  m.kind = MethodKind::kLite;
  m.theta = theta;
  return m;
}

MethodSpec MethodSpec::alt(int k) {
  MethodSpec m;
  m.kind = MethodKind::kAlt;
  m.k = k;
  return m;
}

MethodSpec MethodSpec::managed(DetectorKind detector) {
  MethodSpec m;
  m.kind = MethodKind::kManaged;
  m.detector = detector;
  return m;
}

std::string MethodSpec::display_name() const {
  if (!label.empty()) return label;
  switch (kind) {
    case MethodKind::kRvflUniform:
      return "RVFL";
    case MethodKind::kLite:
      return "Lite-RVFL";
    case MethodKind::kAlt:
      return "Alt-RVFL";
    case MethodKind::kManaged: {
      const std::string d = detector_name(detector);
      if (d == "adwin") return "RVFL-ADWIN";
      if (d == "hddm_a") return "RVFL-HDDMa";
      if (d == "hddm_w") return "RVFL-HDDMw";
      return "RVFL-PageHinkley";
    }
  }
  return "unknown";
}

void validate(const ExperimentConfig& config) {
  if (config.offline_count < 1) throw InvalidArgument("offline_count must be >= 1");
  if (config.window < 1) throw InvalidArgument("window must be >= 1");
  if (config.retrain_buffer < 1) throw InvalidArgument("retrain_buffer must be >= 1");
  if (!(config.lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  if (config.groups < 1 || config.nodes_per_group < 1) {
    throw InvalidArgument("groups and nodes_per_group must be >= 1");
  }
  if (config.periodic_retrain_every && *config.periodic_retrain_every < 1) {
    throw InvalidArgument("periodic_retrain_every must be >= 1");
  }
  switch (config.method.kind) {
    case MethodKind::kLite:
      WeightScheme::exponential(config.method.theta);
      break;
    case MethodKind::kAlt:
      WeightScheme::polynomial(config.method.k);
      break;
    case MethodKind::kManaged:
      validate(config.method.detector);
      if (config.periodic_retrain_every) {
        throw InvalidArgument("periodic retraining does not apply to detector-managed models");
      }
      break;
    case MethodKind::kRvflUniform:
      break;
  }
  if (config.mode == UpdateMode::kRescaled && config.method.kind != MethodKind::kLite) {
    throw InvalidArgument("rescaled mode is only available for the lite method");
  }
}

namespace {

std::deque<BufferedSample> tail_of(const LabeledStream& s, std::size_t capacity) {
  std::deque<BufferedSample> out;
  const std::size_t first = s.size() > capacity ? s.size() - capacity : 0;
  for (std::size_t i = first; i < s.size(); ++i) out.push_back({s.features[i], s.labels[i]});
  return out;
}

// Weighted RVFL updated one sample at a time, optionally refitted every
// `every` online samples from the newest `capacity` ones.
class WeightedRvflLearner final : public StreamLearner {
 public:
  WeightedRvflLearner(const EnhancementMap& map, WeightScheme scheme, double lambda,
                      UpdateMode mode, const LabeledStream& offline,
                      std::optional<std::size_t> every, std::size_t capacity)
      : map_(map),
        scheme_(scheme),
        lambda_(lambda),
        mode_(mode),
        classes_(offline.classes),
        state_(IncrementalState::init(
            DesignMatrices::build(offline.features, offline.labels, map, offline.classes),
            scheme, lambda, mode)),
        every_(every),
        capacity_(capacity) {
    if (every_) recent_ = tail_of(offline, capacity_);
  }

  ClassLabel predict(const Eigen::VectorXd& x) override {
    return state_.predict(map_.extend(x)).label;
  }

  void learn(const Eigen::VectorXd& x, ClassLabel truth, ClassLabel) override {
    state_.step(map_.extend(x), truth);
    if (!every_) return;
    recent_.push_back({x, truth});
    if (recent_.size() > capacity_) recent_.pop_front();
    if (++seen_ % *every_ == 0) {
      state_ = fit_buffer(recent_, map_, scheme_, lambda_, classes_, mode_);
      ++retrains_;
    }
  }

  int periodic_retrains() const override { return retrains_; }

 private:
  EnhancementMap map_;
  WeightScheme scheme_;
  double lambda_;
  UpdateMode mode_;
  int classes_;
  IncrementalState state_;
  std::optional<std::size_t> every_;
  std::size_t capacity_;
  std::deque<BufferedSample> recent_;
  std::size_t seen_ = 0;
  int retrains_ = 0;
};

class ManagedLearner final : public StreamLearner {
 public:
  explicit ManagedLearner(ManagedModel model) : model_(std::move(model)) {}

  ClassLabel predict(const Eigen::VectorXd& x) override { return model_.predict(x); }
  void learn(const Eigen::VectorXd& x, ClassLabel truth, ClassLabel predicted) override {
    model_.learn(x, truth, predicted);
  }
  std::optional<int> drifts_detected() const override { return model_.retrain_count(); }

 private:
  ManagedModel model_;
};

LabeledStream standardized(const LabeledStream& s, const Standardizer& z) {
  LabeledStream out{s.name, s.dim, s.classes, {}, s.labels};
  out.features.reserve(s.size());
  for (const auto& x : s.features) out.features.push_back(z.apply(x));
  return out;
}

}  // namespace

std::unique_ptr<StreamLearner> make_learner(const ExperimentConfig& config,
                                            const EnhancementMap& map,
                                            const LabeledStream& offline) {
  validate(config);
  const auto& m = config.method;
  switch (m.kind) {
    case MethodKind::kRvflUniform:
      return std::make_unique<WeightedRvflLearner>(map, WeightScheme::uniform(), config.lambda,
                                                   UpdateMode::kDirect, offline,
                                                   config.periodic_retrain_every,
                                                   config.retrain_buffer);
    case MethodKind::kLite:
      return std::make_unique<WeightedRvflLearner>(map, WeightScheme::exponential(m.theta),
                                                   config.lambda, config.mode, offline,
                                                   config.periodic_retrain_every,
                                                   config.retrain_buffer);
    case MethodKind::kAlt:
      return std::make_unique<WeightedRvflLearner>(map, WeightScheme::polynomial(m.k),
                                                   config.lambda, UpdateMode::kDirect, offline,
                                                   config.periodic_retrain_every,
                                                   config.retrain_buffer);
    case MethodKind::kManaged:
      return std::make_unique<ManagedLearner>(
          ManagedModel(map, config.lambda, offline.classes, make_detector(m.detector),
                       offline.features, offline.labels, config.retrain_buffer));
  }
  throw InvalidArgument("unknown method");
}

RunResult run_prequential(StreamLearner& learner, const LabeledStream& online,
                          std::size_t window) {
  if (window < 1) throw InvalidArgument("window must be >= 1");
  RunResult result;
  result.correctness.resize(online.size());

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t t = 0; t < online.size(); ++t) {
    const auto& x = online.features[t];
    const ClassLabel truth = online.labels[t];
    try {
      const ClassLabel predicted = learner.predict(x);
      result.correctness[t] = predicted == truth ? 1 : 0;
      learner.learn(x, truth, predicted);
    } catch (const OverflowError& e) {
      throw OverflowError(std::string(e.what()) + " (online step " + std::to_string(t) + ")",
                          e.rows());
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " (online step " + std::to_string(t) + ")",
                           e.rows());
    }
  }
  const auto stop = std::chrono::steady_clock::now();

  result.wall_time_seconds = std::chrono::duration<double>(stop - start).count();
  result.cumulative_accuracy = cumulative_accuracy(result.correctness);
  result.windowed_accuracy = windowed_accuracy(result.correctness, window);
  result.drifts_detected = learner.drifts_detected();
  result.periodic_retrains = learner.periodic_retrains();
  result.final_accuracy =
      result.correctness.empty() ? 0.0 : result.cumulative_accuracy.back();
  return result;
}

RunResult run_prequential(const ExperimentConfig& config, const LabeledStream& stream,
                          std::uint64_t seed) {
  validate(config);
  if (stream.size() <= config.offline_count) {
    throw InvalidArgument("stream of length " + std::to_string(stream.size()) +
                          " is not longer than offline_count " +
                          std::to_string(config.offline_count));
  }
  auto [offline, online] = split_offline_online(stream, config.offline_count);
  if (config.standardize) {
    const auto z = Standardizer::fit(offline.features);
    offline = standardized(offline, z);
    online = standardized(online, z);
  }
  const auto map =
      EnhancementMap::random(stream.dim, config.groups, config.nodes_per_group, seed);
  auto learner = make_learner(config, map, offline);
  return run_prequential(*learner, online, config.window);
}

std::vector<double> windowed_accuracy(std::span<const std::uint8_t> correctness,
                                      std::size_t window) {
  if (window < 1) throw InvalidArgument("window must be >= 1");
  std::vector<double> out(correctness.size());
  std::size_t hits = 0;
  for (std::size_t t = 0; t < correctness.size(); ++t) {
    hits += correctness[t];
    if (t >= window) hits -= correctness[t - window];
    out[t] = static_cast<double>(hits) / static_cast<double>(std::min(t + 1, window));
  }
  return out;
}

std::vector<double> cumulative_accuracy(std::span<const std::uint8_t> correctness) {
  std::vector<double> out(correctness.size());
  std::size_t hits = 0;
  for (std::size_t t = 0; t < correctness.size(); ++t) {
    hits += correctness[t];
    out[t] = static_cast<double>(hits) / static_cast<double>(t + 1);
  }
  return out;
}

namespace {

std::pair<double, double> mean_and_sample_std(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace

std::vector<MethodSummary> aggregate_runs(std::span<const NamedRun> runs) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunResult*>> by_method;
  for (const auto& r : runs) {
    auto [it, inserted] = by_method.try_emplace(r.method);
    if (inserted) order.push_back(r.method);
    it->second.push_back(&r.result);
  }

  std::vector<MethodSummary> out;
  for (const auto& name : order) {
    const auto& results = by_method[name];
    std::vector<double> acc;
    std::vector<double> time;
    std::vector<double> drifts;
    for (const auto* r : results) {
      acc.push_back(r->final_accuracy);
      time.push_back(r->wall_time_seconds);
      if (r->drifts_detected) drifts.push_back(*r->drifts_detected);
    }
    MethodSummary s;
    s.method = name;
    s.runs = results.size();
    std::tie(s.accuracy_mean, s.accuracy_std) = mean_and_sample_std(acc);
    std::tie(s.time_mean, s.time_std) = mean_and_sample_std(time);
    if (!drifts.empty()) s.drifts_mean = mean_and_sample_std(drifts).first;
    out.push_back(s);
  }

  std::vector<std::size_t> idx(out.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (out[a].accuracy_mean != out[b].accuracy_mean) {
      return out[a].accuracy_mean > out[b].accuracy_mean;
    }
    return out[a].method < out[b].method;
  });
  for (std::size_t r = 0; r < idx.size(); ++r) out[idx[r]].accuracy_rank = static_cast<int>(r + 1);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (out[a].time_mean != out[b].time_mean) return out[a].time_mean < out[b].time_mean;
    return out[a].method < out[b].method;
  });
  for (std::size_t r = 0; r < idx.size(); ++r) out[idx[r]].time_rank = static_cast<int>(r + 1);
  return out;
}

}  // namespace lite_rvfl
