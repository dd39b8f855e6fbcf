#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lite_rvfl/rvfl.hpp"

namespace lite_rvfl {

// Labeled samples in arrival order. Every label lies in 1..classes and every
// feature vector has length dim.
struct LabeledStream {
  std::string name;
  int dim = 0;
  int classes = 0;
  std::vector<Eigen::VectorXd> features;
  std::vector<ClassLabel> labels;

  std::size_t size() const { return features.size(); }
  bool empty() const { return features.empty(); }
  void push_back(Eigen::VectorXd x, ClassLabel label);
};

struct CsvSchema {
  int feature_count = 0;
  // Zero-based column holding the label; defaults to the column after the
  // features.
  std::optional<int> label_column;
  // Raw label text -> class index. Empty means integer labels: 1-based, or
  // 0-based if any row carries a 0.
  std::map<std::string, ClassLabel> label_map;
  // Fixed class count; inferred from the labels when unset.
  std::optional<int> classes;
};

// 24 sensor features followed by one of three safety levels.
CsvSchema dsms_schema();

// Comma-separated, one sample per row. A first row whose feature fields are
// not all numeric is treated as a header.
LabeledStream load_csv(const std::filesystem::path& path, const CsvSchema& schema);
LabeledStream read_csv(std::istream& in, const CsvSchema& schema, std::string name = "csv");

// Features then the integer label; doubles written shortest-round-trip.
void write_csv(const LabeledStream& stream, std::ostream& out);
void write_csv(const LabeledStream& stream, const std::filesystem::path& path);

struct DriftSegment {
  std::size_t length = 0;
  // classes x dim; row c is the mean of class c+1 within this segment.
  Eigen::MatrixXd class_means;
  // Isotropic covariance cov_scale * I.
  double cov_scale = 1.0;
};

struct DriftSpec {
  int dim = 0;
  int classes = 0;
  std::uint64_t seed = 0;
  std::vector<DriftSegment> segments;
  std::string name = "synthetic";
};

// Throws InvalidArgument on an empty or zero-length segment list, shape
// mismatches, or a non-positive covariance scale.
void validate(const DriftSpec& spec);

// Segment by segment, sample j of a segment has class (j mod classes) + 1 and
// is drawn from N(mean of that class, cov_scale I). Deterministic per seed.
LabeledStream synth_drift_stream(const DriftSpec& spec);

// Order-preserving prefix/suffix split. Requires n_offline < stream.size().
std::pair<LabeledStream, LabeledStream> split_offline_online(const LabeledStream& stream,
                                                             std::size_t n_offline);

}  // namespace lite_rvfl
