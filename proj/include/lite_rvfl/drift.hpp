#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace lite_rvfl {

enum class DetectorStatus { kInControl, kWarning, kDrift };

const char* to_string(DetectorStatus status);

struct AdwinConfig {
  double delta = 0.002;
};

struct HddmAConfig {
  double drift_confidence = 0.001;
  double warning_confidence = 0.005;
  bool two_sided = true;
};

struct HddmWConfig {
  double drift_confidence = 0.001;
  double warning_confidence = 0.005;
  double ewma_lambda = 0.05;
  bool two_sided = true;
};

struct PageHinkleyConfig {
  int min_instances = 30;
  double delta = 0.005;
  double threshold = 50.0;
  double alpha = 1.0 - 0.0001;
};

using DetectorKind = std::variant<AdwinConfig, HddmAConfig, HddmWConfig, PageHinkleyConfig>;

std::string detector_name(const DetectorKind& kind);

// Throws InvalidArgument when a confidence or delta is outside (0, 1) or the
// threshold is not positive.
void validate(const DetectorKind& kind);

// Monitors a bounded signal (here the 0/1 error indicator). After reporting
// kDrift a detector has already discarded the pre-change statistics.
class DriftDetector {
 public:
  virtual ~DriftDetector() = default;

  // Throws InvalidArgument unless 0 <= signal <= 1.
  DetectorStatus update(double signal);
  virtual void reset() = 0;
  virtual std::string name() const = 0;
  virtual std::unique_ptr<DriftDetector> clone() const = 0;

  std::uint64_t detections() const { return detections_; }

 protected:
  virtual DetectorStatus consume(double signal) = 0;

 private:
  std::uint64_t detections_ = 0;
};

std::unique_ptr<DriftDetector> make_detector(const DetectorKind& kind);

// Adaptive windowing over an exponential histogram: row i holds up to
// kMaxBuckets buckets of 2^i observations each. Every kClock observations the
// window is scanned for a split whose sub-window means differ by more than
// the Hoeffding/Bernstein-style bound; the older part is dropped while one is
// found. The drop is the detector's reset.
class Adwin final : public DriftDetector {
 public:
  static constexpr int kMaxBuckets = 5;
  static constexpr int kClock = 32;
  static constexpr int kMinWindowLongitude = 10;
  static constexpr int kMinSubWindow = 5;

  explicit Adwin(AdwinConfig config = {});

  void reset() override;
  std::string name() const override { return "adwin"; }
  std::unique_ptr<DriftDetector> clone() const override;

  std::int64_t width() const { return width_; }
  double total() const { return total_; }
  double variance() const { return width_ > 0 ? variance_ / static_cast<double>(width_) : 0.0; }
  double mean() const { return width_ > 0 ? total_ / static_cast<double>(width_) : 0.0; }

 protected:
  DetectorStatus consume(double signal) override;

 private:
  struct Row {
    // Oldest bucket first.
    std::vector<double> totals;
    std::vector<double> variances;
  };

  void compress();
  bool scan_for_change();
  bool cut(std::int64_t n0, std::int64_t n1, double abs_diff) const;
  std::int64_t drop_oldest_bucket();

  AdwinConfig config_;
  std::vector<Row> rows_;  // rows_[0] holds single observations
  std::int64_t width_ = 0;
  double total_ = 0.0;
  double variance_ = 0.0;  // sum of squared deviations
  std::uint64_t time_ = 0;
};

// HDDM with A-test: Hoeffding bounds on the running mean against the cut point
// with the smallest upper bound.
class HddmA final : public DriftDetector {
 public:
  explicit HddmA(HddmAConfig config = {});

  void reset() override;
  std::string name() const override { return "hddm_a"; }
  std::unique_ptr<DriftDetector> clone() const override;

 protected:
  DetectorStatus consume(double signal) override;

 private:
  bool mean_increased(double c_min, double n_min, double confidence) const;
  bool mean_decreased(double c_max, double n_max) const;

  HddmAConfig config_;
  double n_min_ = 0, c_min_ = 0;
  double n_max_ = 0, c_max_ = 0;
  double total_n_ = 0, total_c_ = 0;
};

// HDDM with W-test: McDiarmid bounds on EWMA estimators.
class HddmW final : public DriftDetector {
 public:
  explicit HddmW(HddmWConfig config = {});

  void reset() override;
  std::string name() const override { return "hddm_w"; }
  std::unique_ptr<DriftDetector> clone() const override;

 protected:
  DetectorStatus consume(double signal) override;

 private:
  struct Estimate {
    double ewma = -1.0;  // negative means "no observation yet"
    double bound_sum = 0.0;
  };

  void absorb(Estimate& e, double value) const;
  static bool increased(const Estimate& before, const Estimate& after, double confidence);
  void update_incr(double value, double confidence);
  void update_decr(double value, double confidence);

  HddmWConfig config_;
  Estimate total_;
  Estimate incr_before_, incr_after_;
  Estimate decr_before_, decr_after_;
  double incr_cut_ = 0.0;
  double decr_cut_ = 0.0;
};

// Page-Hinkley test for an upward shift of the mean.
class PageHinkley final : public DriftDetector {
 public:
  explicit PageHinkley(PageHinkleyConfig config = {});

  void reset() override;
  std::string name() const override { return "page_hinkley"; }
  std::unique_ptr<DriftDetector> clone() const override;

  double cumulative() const { return sum_; }

 protected:
  DetectorStatus consume(double signal) override;

 private:
  PageHinkleyConfig config_;
  std::int64_t count_ = 1;
  double mean_ = 0.0;
  double sum_ = 0.0;
};

}  // namespace lite_rvfl
