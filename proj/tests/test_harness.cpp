#include <gtest/gtest.h>

#include "lite_rvfl/errors.hpp"
#include "lite_rvfl/harness.hpp"

using namespace lite_rvfl;

namespace {

// Predicts class 1 always and records the call order.
class EchoLearner final : public StreamLearner {
 public:
  std::vector<std::string> calls;
  std::optional<std::size_t> fail_at;

  ClassLabel predict(const Eigen::VectorXd&) override {
    calls.push_back("predict");
    return 1;
  }
  void learn(const Eigen::VectorXd&, ClassLabel, ClassLabel predicted) override {
    calls.push_back("learn");
    EXPECT_EQ(predicted, 1);
    if (fail_at && calls.size() / 2 - 1 == *fail_at) throw NumericalError("synthetic failure", 0);
  }
};

LabeledStream labels_only(const std::vector<ClassLabel>& labels) {
  LabeledStream s{"t", 1, 3, {}, {}};
  for (auto l : labels) s.push_back(Eigen::VectorXd::Zero(1), l);
  return s;
}

DriftSpec small_swap() {
  DriftSpec spec;
  spec.dim = 3;
  spec.classes = 3;
  spec.seed = 99;
  Eigen::MatrixXd a = 2.0 * Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd b = a;
  b.row(0).swap(b.row(1));
  spec.segments = {{800, a, 0.5}, {800, b, 0.5}};
  return spec;
}

}  // namespace

TEST(Accuracy, WindowedMatchesBruteForce) {
  std::vector<std::uint8_t> c;
  for (int i = 0; i < 97; ++i) c.push_back(static_cast<std::uint8_t>((i * 7 + i / 5) % 3 != 0));
  for (std::size_t w : {1u, 5u, 10u, 200u}) {
    const auto got = windowed_accuracy(c, w);
    for (std::size_t t = 0; t < c.size(); ++t) {
      const std::size_t from = t + 1 >= w ? t + 1 - w : 0;
      double hits = 0;
      for (std::size_t j = from; j <= t; ++j) hits += c[j];
      ASSERT_DOUBLE_EQ(got[t], hits / static_cast<double>(t + 1 - from)) << "w " << w << " t " << t;
    }
  }
  EXPECT_THROW(windowed_accuracy(c, 0), InvalidArgument);
}

TEST(Accuracy, Cumulative) {
  const std::vector<std::uint8_t> c{1, 0, 1, 1};
  EXPECT_EQ(cumulative_accuracy(c), (std::vector<double>{1.0, 0.5, 2.0 / 3.0, 0.75}));
}

TEST(Prequential, PredictsBeforeLearningAndScores) {
  EchoLearner learner;
  const auto stream = labels_only({1, 2, 1, 3, 1});
  const auto r = run_prequential(learner, stream, 2);
  EXPECT_EQ(learner.calls, (std::vector<std::string>{"predict", "learn", "predict", "learn",
                                                     "predict", "learn", "predict", "learn",
                                                     "predict", "learn"}));
  EXPECT_EQ(r.correctness, (std::vector<std::uint8_t>{1, 0, 1, 0, 1}));
  EXPECT_DOUBLE_EQ(r.final_accuracy, 0.6);
  EXPECT_DOUBLE_EQ(r.windowed_accuracy.back(), 0.5);
  EXPECT_FALSE(r.drifts_detected.has_value());
  EXPECT_GE(r.wall_time_seconds, 0.0);
}

TEST(Prequential, NumericalFailureCarriesStep) {
  EchoLearner learner;
  learner.fail_at = 3;
  try {
    run_prequential(learner, labels_only({1, 1, 1, 1, 1, 1}), 2);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("online step 3"), std::string::npos) << e.what();
  }
}

TEST(Methods, DisplayNames) {
  EXPECT_EQ(MethodSpec::rvfl_uniform().display_name(), "RVFL");
  EXPECT_EQ(MethodSpec::lite(1.003).display_name(), "Lite-RVFL");
  EXPECT_EQ(MethodSpec::alt(2).display_name(), "Alt-RVFL");
  EXPECT_EQ(MethodSpec::managed(AdwinConfig{}).display_name(), "RVFL-ADWIN");
  EXPECT_EQ(MethodSpec::managed(HddmAConfig{}).display_name(), "RVFL-HDDMa");
  EXPECT_EQ(MethodSpec::managed(HddmWConfig{}).display_name(), "RVFL-HDDMw");
  EXPECT_EQ(MethodSpec::managed(PageHinkleyConfig{}).display_name(), "RVFL-PageHinkley");
  auto named = MethodSpec::lite(1.01);
  named.label = "Lite-RVFL (1.01)";
  EXPECT_EQ(named.display_name(), "Lite-RVFL (1.01)");
}

TEST(Config, Defaults) {
  const ExperimentConfig c;
  EXPECT_EQ(c.offline_count, 200u);
  EXPECT_EQ(c.window, 500u);
  EXPECT_EQ(c.lambda, 0.1);
  EXPECT_EQ(c.groups, 10);
  EXPECT_EQ(c.nodes_per_group, 10);
  EXPECT_EQ(c.method.theta, 1.003);
  EXPECT_FALSE(c.periodic_retrain_every.has_value());
}

TEST(Config, Validation) {
  ExperimentConfig c;
  c.lambda = 0.0;
  EXPECT_THROW(validate(c), InvalidArgument);
  c = ExperimentConfig{};
  c.method = MethodSpec::lite(0.5);
  EXPECT_THROW(validate(c), InvalidArgument);
  c = ExperimentConfig{};
  c.method = MethodSpec::alt(0);
  EXPECT_THROW(validate(c), InvalidArgument);
  c = ExperimentConfig{};
  c.method = MethodSpec::managed(AdwinConfig{2.0});
  EXPECT_THROW(validate(c), InvalidArgument);
  c = ExperimentConfig{};
  c.method = MethodSpec::rvfl_uniform();
  c.mode = UpdateMode::kRescaled;
  EXPECT_THROW(validate(c), InvalidArgument);
  c = ExperimentConfig{};
  c.window = 0;
  EXPECT_THROW(validate(c), InvalidArgument);
}

TEST(Prequential, DeterministicPerSeed) {
  const auto stream = synth_drift_stream(small_swap());
  for (auto method : {MethodSpec::lite(1.003), MethodSpec::managed(HddmWConfig{})}) {
    ExperimentConfig cfg;
    cfg.method = method;
    const auto a = run_prequential(cfg, stream, 4);
    const auto b = run_prequential(cfg, stream, 4);
    const auto c = run_prequential(cfg, stream, 5);
    EXPECT_EQ(a.correctness, b.correctness);
    EXPECT_EQ(a.windowed_accuracy, b.windowed_accuracy);
    EXPECT_NE(a.correctness, c.correctness);
    EXPECT_EQ(a.correctness.size(), stream.size() - 200);
  }
}

TEST(Prequential, RescaledLiteMatchesDirectLite) {
  const auto stream = synth_drift_stream(small_swap());
  ExperimentConfig direct;
  ExperimentConfig rescaled;
  rescaled.mode = UpdateMode::kRescaled;
  EXPECT_EQ(run_prequential(direct, stream, 3).correctness,
            run_prequential(rescaled, stream, 3).correctness);
}

TEST(Prequential, PeriodicRetrainCount) {
  const auto stream = synth_drift_stream(small_swap());
  ExperimentConfig cfg;
  cfg.periodic_retrain_every = 250;
  const auto r = run_prequential(cfg, stream, 1);
  EXPECT_EQ(r.periodic_retrains, static_cast<int>((stream.size() - 200) / 250));
  EXPECT_GT(r.final_accuracy, 0.8);
}

TEST(Prequential, LiteAdaptsWhereUniformDoesNot) {
  const auto stream = synth_drift_stream(small_swap());
  ExperimentConfig lite;
  ExperimentConfig uni;
  uni.method = MethodSpec::rvfl_uniform();
  const auto a = run_prequential(lite, stream, 2);
  const auto b = run_prequential(uni, stream, 2);
  EXPECT_GT(a.windowed_accuracy.back(), b.windowed_accuracy.back() + 0.2);
}

TEST(Prequential, OfflineCountMustLeaveOnlineSamples) {
  ExperimentConfig cfg;
  cfg.offline_count = 1600;
  EXPECT_THROW(run_prequential(cfg, synth_drift_stream(small_swap()), 1), InvalidArgument);
}

TEST(Prequential, StandardizedRunsAreFinite) {
  auto spec = small_swap();
  for (auto& seg : spec.segments) seg.class_means = 1000.0 * seg.class_means.array() + 5000.0;
  for (auto& seg : spec.segments) seg.cov_scale = 250000.0;
  ExperimentConfig cfg;
  cfg.standardize = true;
  const auto r = run_prequential(cfg, synth_drift_stream(spec), 1);
  EXPECT_GT(r.final_accuracy, 0.7);
}

TEST(Aggregate, MeansStdsAndRanks) {
  auto run = [](std::string m, double acc, double t, std::optional<int> d) {
    NamedRun r;
    r.method = std::move(m);
    r.result.final_accuracy = acc;
    r.result.wall_time_seconds = t;
    r.result.drifts_detected = d;
    return r;
  };
  const std::vector<NamedRun> runs = {run("B", 0.75, 2.0, std::nullopt), run("B", 0.25, 4.0, std::nullopt),
                                      run("A", 0.5, 3.0, 2), run("A", 0.5, 3.0, 3),
                                      run("C", 0.95, 1.0, std::nullopt)};
  const auto s = aggregate_runs(runs);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].method, "B");
  EXPECT_EQ(s[1].method, "A");
  EXPECT_EQ(s[0].accuracy_mean, 0.5);
  EXPECT_NEAR(s[0].accuracy_std, std::sqrt(0.125), 1e-15);
  EXPECT_EQ(s[1].accuracy_std, 0.0);
  EXPECT_FALSE(s[0].drifts_mean.has_value());
  EXPECT_EQ(s[1].drifts_mean, 2.5);
  // A and B tie on accuracy and time; the name breaks the tie.
  EXPECT_EQ(s[2].accuracy_rank, 1);
  EXPECT_EQ(s[1].accuracy_rank, 2);
  EXPECT_EQ(s[0].accuracy_rank, 3);
  EXPECT_EQ(s[2].time_rank, 1);
  EXPECT_EQ(s[1].time_rank, 2);
  EXPECT_EQ(s[0].time_rank, 3);
}
