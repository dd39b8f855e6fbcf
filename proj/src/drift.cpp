#include "lite_rvfl/drift.hpp"

#include <cmath>
#include <limits>

#include "lite_rvfl/errors.hpp"

namespace lite_rvfl {

const char* to_string(DetectorStatus status) {
  switch (status) {
    case DetectorStatus::kInControl:
      return "in_control";
    case DetectorStatus::kWarning:
      return "warning";
    case DetectorStatus::kDrift:
      return "drift";
  }
  return "unknown";
}

std::string detector_name(const DetectorKind& kind) {
  return std::visit(
      [](const auto& cfg) -> std::string {
        using T = std::decay_t<decltype(cfg)>;
        if constexpr (std::is_same_v<T, AdwinConfig>) return "adwin";
        if constexpr (std::is_same_v<T, HddmAConfig>) return "hddm_a";
        if constexpr (std::is_same_v<T, HddmWConfig>) return "hddm_w";
        return "page_hinkley";
      },
      kind);
}

namespace {

void require_open_unit(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie in (0, 1)");
  }
}

}  // namespace

void validate(const DetectorKind& kind) {
  std::visit(
      [](const auto& cfg) {
        using T = std::decay_t<decltype(cfg)>;
        if constexpr (std::is_same_v<T, AdwinConfig>) {
          require_open_unit(cfg.delta, "adwin delta");
        } else if constexpr (std::is_same_v<T, HddmAConfig>) {
          require_open_unit(cfg.drift_confidence, "drift confidence");
          require_open_unit(cfg.warning_confidence, "warning confidence");
        } else if constexpr (std::is_same_v<T, HddmWConfig>) {
          require_open_unit(cfg.drift_confidence, "drift confidence");
          require_open_unit(cfg.warning_confidence, "warning confidence");
          require_open_unit(cfg.ewma_lambda, "ewma lambda");
        } else {
          require_open_unit(cfg.delta, "page-hinkley delta");
          require_open_unit(cfg.alpha, "page-hinkley alpha");
          if (!(cfg.threshold > 0.0)) throw InvalidArgument("page-hinkley threshold must be > 0");
          if (cfg.min_instances < 1) throw InvalidArgument("min_instances must be >= 1");
        }
      },
      kind);
}

DetectorStatus DriftDetector::update(double signal) {
  if (!(signal >= 0.0 && signal <= 1.0)) {
    throw InvalidArgument("detector signal must lie in [0, 1]");
  }
  const DetectorStatus status = consume(signal);
  if (status == DetectorStatus::kDrift) ++detections_;
  return status;
}

std::unique_ptr<DriftDetector> make_detector(const DetectorKind& kind) {
  validate(kind);
  return std::visit(
      [](const auto& cfg) -> std::unique_ptr<DriftDetector> {
        using T = std::decay_t<decltype(cfg)>;
        if constexpr (std::is_same_v<T, AdwinConfig>) {
          return std::make_unique<Adwin>(cfg);
        } else if constexpr (std::is_same_v<T, HddmAConfig>) {
          return std::make_unique<HddmA>(cfg);
        } else if constexpr (std::is_same_v<T, HddmWConfig>) {
          return std::make_unique<HddmW>(cfg);
        } else {
          return std::make_unique<PageHinkley>(cfg);
        }
      },
      kind);
}

// ---------------------------------------------------------------------------
// ADWIN

Adwin::Adwin(AdwinConfig config) : config_(config) {
  require_open_unit(config_.delta, "adwin delta");
  reset();
}

void Adwin::reset() {
  rows_.assign(1, Row{});
  width_ = 0;
  total_ = 0.0;
  variance_ = 0.0;
  time_ = 0;
}

std::unique_ptr<DriftDetector> Adwin::clone() const { return std::make_unique<Adwin>(*this); }

DetectorStatus Adwin::consume(double value) {
  ++width_;
  rows_[0].totals.push_back(value);
  rows_[0].variances.push_back(0.0);
  if (width_ > 1) {
    const double prev_mean = total_ / static_cast<double>(width_ - 1);
    variance_ += static_cast<double>(width_ - 1) * (value - prev_mean) * (value - prev_mean) /
                 static_cast<double>(width_);
  }
  total_ += value;
  compress();
  return scan_for_change() ? DetectorStatus::kDrift : DetectorStatus::kInControl;
}

void Adwin::compress() {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].totals.size() != static_cast<std::size_t>(kMaxBuckets + 1)) break;
    if (i + 1 == rows_.size()) rows_.emplace_back();
    Row& row = rows_[i];
    const double size = std::ldexp(1.0, static_cast<int>(i));
    const double u1 = row.totals[0] / size;
    const double u2 = row.totals[1] / size;
    const double merged_var =
        row.variances[0] + row.variances[1] + size * size * (u1 - u2) * (u1 - u2) / (2.0 * size);
    const double merged_total = row.totals[0] + row.totals[1];
    row.totals.erase(row.totals.begin(), row.totals.begin() + 2);
    row.variances.erase(row.variances.begin(), row.variances.begin() + 2);
    Row& next = rows_[i + 1];
    next.totals.push_back(merged_total);
    next.variances.push_back(merged_var);
    if (next.totals.size() <= static_cast<std::size_t>(kMaxBuckets)) break;
  }
}

bool Adwin::cut(std::int64_t n0, std::int64_t n1, double abs_diff) const {
  const double n = static_cast<double>(width_);
  const double dd = std::log(2.0 * std::log(n) / config_.delta);
  const double v = variance();
  const double m = 1.0 / static_cast<double>(n0 - kMinSubWindow + 1) +
                   1.0 / static_cast<double>(n1 - kMinSubWindow + 1);
  const double epsilon = std::sqrt(2.0 * m * v * dd) + 2.0 / 3.0 * dd * m;
  return std::abs(abs_diff) > epsilon;
}

bool Adwin::scan_for_change() {
  ++time_;
  if (time_ % kClock != 0 || width_ <= kMinWindowLongitude) return false;

  bool changed = false;
  bool rescan = true;
  while (rescan) {
    rescan = false;
    std::int64_t n0 = 0;
    std::int64_t n1 = width_;
    double u0 = 0.0;
    double u1 = total_;
    bool done = false;
    // Oldest buckets first: largest row, then front to back within a row.
    for (std::size_t ri = rows_.size(); ri-- > 0 && !done;) {
      const Row& row = rows_[ri];
      const auto size = static_cast<std::int64_t>(1) << ri;
      for (std::size_t k = 0; k < row.totals.size(); ++k) {
        n0 += size;
        n1 -= size;
        u0 += row.totals[k];
        u1 -= row.totals[k];
        if (ri == 0 && k + 1 == row.totals.size()) {
          done = true;
          break;
        }
        const double diff = u0 / static_cast<double>(n0) - u1 / static_cast<double>(n1);
        if (n1 >= kMinSubWindow && n0 >= kMinSubWindow && cut(n0, n1, diff)) {
          changed = true;
          rescan = true;
          if (width_ > 0) drop_oldest_bucket();
          done = true;
          break;
        }
      }
    }
  }
  return changed;
}

std::int64_t Adwin::drop_oldest_bucket() {
  const std::size_t last = rows_.size() - 1;
  Row& row = rows_[last];
  const auto size = static_cast<std::int64_t>(1) << last;
  width_ -= size;
  total_ -= row.totals[0];
  const double u1 = row.totals[0] / static_cast<double>(size);
  const double rest_mean = width_ > 0 ? total_ / static_cast<double>(width_) : 0.0;
  variance_ -= row.variances[0] + static_cast<double>(size) * static_cast<double>(width_) *
                                      (u1 - rest_mean) * (u1 - rest_mean) /
                                      static_cast<double>(size + width_);
  row.totals.erase(row.totals.begin());
  row.variances.erase(row.variances.begin());
  if (row.totals.empty() && rows_.size() > 1) rows_.pop_back();
  return size;
}

// ---------------------------------------------------------------------------
// HDDM-A

HddmA::HddmA(HddmAConfig config) : config_(config) {
  require_open_unit(config_.drift_confidence, "drift confidence");
  require_open_unit(config_.warning_confidence, "warning confidence");
}

void HddmA::reset() {
  n_min_ = c_min_ = n_max_ = c_max_ = total_n_ = total_c_ = 0.0;
}

std::unique_ptr<DriftDetector> HddmA::clone() const { return std::make_unique<HddmA>(*this); }

bool HddmA::mean_increased(double c_min, double n_min, double confidence) const {
  if (n_min == total_n_) return false;
  const double m = (total_n_ - n_min) / n_min * (1.0 / total_n_);
  const double bound = std::sqrt(m / 2.0 * std::log(2.0 / confidence));
  return total_c_ / total_n_ - c_min / n_min >= bound;
}

bool HddmA::mean_decreased(double c_max, double n_max) const {
  if (n_max == total_n_) return false;
  const double m = (total_n_ - n_max) / n_max * (1.0 / total_n_);
  const double bound = std::sqrt(m / 2.0 * std::log(2.0 / config_.drift_confidence));
  return c_max / n_max - total_c_ / total_n_ >= bound;
}

DetectorStatus HddmA::consume(double value) {
  total_n_ += 1.0;
  total_c_ += value;
  if (n_min_ == 0.0) {
    n_min_ = total_n_;
    c_min_ = total_c_;
  }
  if (n_max_ == 0.0) {
    n_max_ = total_n_;
    c_max_ = total_c_;
  }

  const double log_inv = std::log(1.0 / config_.drift_confidence);
  const double bound_total = std::sqrt(1.0 / (2.0 * total_n_) * log_inv);
  const double bound_min = std::sqrt(1.0 / (2.0 * n_min_) * log_inv);
  if (c_min_ / n_min_ + bound_min >= total_c_ / total_n_ + bound_total) {
    c_min_ = total_c_;
    n_min_ = total_n_;
  }
  const double bound_max = std::sqrt(1.0 / (2.0 * n_max_) * log_inv);
  if (c_max_ / n_max_ - bound_max <= total_c_ / total_n_ - bound_total) {
    c_max_ = total_c_;
    n_max_ = total_n_;
  }

  DetectorStatus status = DetectorStatus::kInControl;
  if (mean_increased(c_min_, n_min_, config_.drift_confidence)) {
    reset();
    return DetectorStatus::kDrift;
  }
  if (mean_increased(c_min_, n_min_, config_.warning_confidence)) {
    status = DetectorStatus::kWarning;
  }
  if (config_.two_sided && mean_decreased(c_max_, n_max_)) reset();
  return status;
}

// ---------------------------------------------------------------------------
// HDDM-W

HddmW::HddmW(HddmWConfig config) : config_(config) {
  require_open_unit(config_.drift_confidence, "drift confidence");
  require_open_unit(config_.warning_confidence, "warning confidence");
  require_open_unit(config_.ewma_lambda, "ewma lambda");
  reset();
}

void HddmW::reset() {
  total_ = Estimate{};
  incr_before_ = incr_after_ = Estimate{};
  decr_before_ = decr_after_ = Estimate{};
  incr_cut_ = std::numeric_limits<double>::infinity();
  decr_cut_ = -std::numeric_limits<double>::infinity();
}

std::unique_ptr<DriftDetector> HddmW::clone() const { return std::make_unique<HddmW>(*this); }

void HddmW::absorb(Estimate& e, double value) const {
  const double lambda = config_.ewma_lambda;
  const double decay = 1.0 - lambda;
  if (e.ewma < 0.0) {
    e.ewma = value;
    e.bound_sum = 1.0;
  } else {
    e.ewma = lambda * value + decay * e.ewma;
    e.bound_sum = lambda * lambda + decay * decay * e.bound_sum;
  }
}

bool HddmW::increased(const Estimate& before, const Estimate& after, double confidence) {
  if (before.ewma < 0.0 || after.ewma < 0.0) return false;
  const double bound =
      std::sqrt((before.bound_sum + after.bound_sum) * std::log(1.0 / confidence) / 2.0);
  return after.ewma - before.ewma > bound;
}

void HddmW::update_incr(double value, double confidence) {
  const double eps = std::sqrt(total_.bound_sum * std::log(1.0 / confidence) / 2.0);
  if (total_.ewma + eps < incr_cut_) {
    incr_cut_ = total_.ewma + eps;
    incr_before_ = total_;
    incr_after_ = Estimate{};
  } else {
    absorb(incr_after_, value);
  }
}

void HddmW::update_decr(double value, double confidence) {
  const double eps = std::sqrt(total_.bound_sum * std::log(1.0 / confidence) / 2.0);
  if (total_.ewma - eps > decr_cut_) {
    decr_cut_ = total_.ewma - eps;
    decr_before_ = total_;
    decr_after_ = Estimate{};
  } else {
    absorb(decr_after_, value);
  }
}

DetectorStatus HddmW::consume(double value) {
  absorb(total_, value);

  DetectorStatus status = DetectorStatus::kInControl;
  update_incr(value, config_.drift_confidence);
  if (increased(incr_before_, incr_after_, config_.drift_confidence)) {
    reset();
    status = DetectorStatus::kDrift;
  } else if (increased(incr_before_, incr_after_, config_.warning_confidence)) {
    status = DetectorStatus::kWarning;
  }

  update_decr(value, config_.drift_confidence);
  if (config_.two_sided && increased(decr_after_, decr_before_, config_.drift_confidence)) {
    reset();
  }
  return status;
}

// ---------------------------------------------------------------------------
// Page-Hinkley

PageHinkley::PageHinkley(PageHinkleyConfig config) : config_(config) {
  validate(DetectorKind{config_});
}

void PageHinkley::reset() {
  count_ = 1;
  mean_ = 0.0;
  sum_ = 0.0;
}

std::unique_ptr<DriftDetector> PageHinkley::clone() const {
  return std::make_unique<PageHinkley>(*this);
}

DetectorStatus PageHinkley::consume(double value) {
  mean_ += (value - mean_) / static_cast<double>(count_);
  sum_ = std::max(0.0, config_.alpha * sum_ + (value - mean_ - config_.delta));
  ++count_;
  if (count_ < config_.min_instances) return DetectorStatus::kInControl;
  if (sum_ > config_.threshold) {
    reset();
    return DetectorStatus::kDrift;
  }
  return DetectorStatus::kInControl;
}

}  // namespace lite_rvfl
