#include "lite_rvfl/stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>

#include "lite_rvfl/errors.hpp"

namespace lite_rvfl {

void LabeledStream::push_back(Eigen::VectorXd x, ClassLabel label) {
  if (x.size() != dim) throw InvalidArgument("sample dimension does not match stream");
  if (label < 1 || label > classes) throw InvalidArgument("label outside 1..classes");
  features.push_back(std::move(x));
  labels.push_back(label);
}

CsvSchema dsms_schema() {
  CsvSchema schema;
  schema.feature_count = 24;
  schema.classes = 3;
  return schema;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<long long> parse_integer(std::string_view s) {
  if (s.empty()) return std::nullopt;
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  // Accept integral floats such as "2.0".
  if (auto d = parse_double(s); d && std::floor(*d) == *d && std::abs(*d) < 1e15) {
    return static_cast<long long>(*d);
  }
  return std::nullopt;
}

}  // namespace

LabeledStream read_csv(std::istream& in, const CsvSchema& schema, std::string name) {
  if (schema.feature_count < 1) throw InvalidArgument("schema needs feature_count >= 1");
  const int label_col = schema.label_column.value_or(schema.feature_count);
  if (label_col < 0 || label_col > schema.feature_count) {
    throw InvalidArgument("label column must lie within the feature columns + 1");
  }
  const std::size_t expected_fields = static_cast<std::size_t>(schema.feature_count) + 1;

  std::vector<Eigen::VectorXd> rows;
  std::vector<long long> raw_labels;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != expected_fields) {
      throw ParseError("row " + std::to_string(line_no) + " has " +
                           std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(expected_fields),
                       line_no);
    }
    Eigen::VectorXd x(schema.feature_count);
    int f = 0;
    std::optional<std::size_t> bad_field;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (static_cast<int>(c) == label_col) continue;
      const auto v = parse_double(fields[c]);
      if (!v || !std::isfinite(*v)) {
        bad_field = c;
        break;
      }
      x(f++) = *v;
    }
    if (bad_field) {
      if (first_content) {
        first_content = false;
        continue;  // header
      }
      throw ParseError("row " + std::to_string(line_no) + ": non-numeric feature '" +
                           std::string(fields[*bad_field]) + "' in column " +
                           std::to_string(*bad_field + 1),
                       line_no);
    }
    first_content = false;

    const std::string_view label_text = fields[static_cast<std::size_t>(label_col)];
    long long label = 0;
    if (!schema.label_map.empty()) {
      const auto it = schema.label_map.find(std::string(label_text));
      if (it == schema.label_map.end()) {
        throw ParseError("row " + std::to_string(line_no) + ": label '" +
                             std::string(label_text) + "' is not in the label mapping",
                         line_no);
      }
      label = it->second;
    } else {
      const auto parsed = parse_integer(label_text);
      if (!parsed || *parsed < 0) {
        throw ParseError("row " + std::to_string(line_no) + ": label '" +
                             std::string(label_text) + "' is not a non-negative integer",
                         line_no);
      }
      label = *parsed;
    }
    rows.push_back(std::move(x));
    raw_labels.push_back(label);
  }

  if (schema.label_map.empty() && !raw_labels.empty() &&
      *std::min_element(raw_labels.begin(), raw_labels.end()) == 0) {
    for (auto& l : raw_labels) ++l;
  }

  LabeledStream stream;
  stream.name = std::move(name);
  stream.dim = schema.feature_count;
  long long max_label = 0;
  for (auto l : raw_labels) max_label = std::max(max_label, l);
  if (!schema.label_map.empty()) {
    for (const auto& [text, idx] : schema.label_map) max_label = std::max<long long>(max_label, idx);
  }
  stream.classes = schema.classes.value_or(static_cast<int>(max_label));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (raw_labels[i] < 1 || raw_labels[i] > stream.classes) {
      throw ParseError("label " + std::to_string(raw_labels[i]) + " outside 1.." +
                           std::to_string(stream.classes),
                       0);
    }
    stream.features.push_back(std::move(rows[i]));
    stream.labels.push_back(static_cast<ClassLabel>(raw_labels[i]));
  }
  return stream;
}

LabeledStream load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_csv(in, schema, path.stem().string());
}

void write_csv(const LabeledStream& stream, std::ostream& out) {
  for (int j = 0; j < stream.dim; ++j) out << 'f' << (j + 1) << ',';
  out << "label\n";
  char buf[64];
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto& x = stream.features[i];
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), x(j));
      out.write(buf, res.ptr - buf);
      out << ',';
    }
    out << stream.labels[i] << '\n';
  }
}

void write_csv(const LabeledStream& stream, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_csv(stream, out);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void validate(const DriftSpec& spec) {
  if (spec.dim < 1) throw InvalidArgument("drift spec needs dim >= 1");
  if (spec.classes < 1) throw InvalidArgument("drift spec needs classes >= 1");
  if (spec.segments.empty()) throw InvalidArgument("drift spec needs at least one segment");
  for (std::size_t s = 0; s < spec.segments.size(); ++s) {
    const auto& seg = spec.segments[s];
    const std::string where = "segment " + std::to_string(s);
    if (seg.length < 1) throw InvalidArgument(where + " has zero length");
    if (seg.class_means.rows() != spec.classes || seg.class_means.cols() != spec.dim) {
      throw InvalidArgument(where + " class_means must be classes x dim");
    }
    if (!seg.class_means.allFinite()) throw InvalidArgument(where + " has non-finite means");
    if (!(seg.cov_scale > 0.0) || !std::isfinite(seg.cov_scale)) {
      throw InvalidArgument(where + " cov_scale must be positive");
    }
  }
}

LabeledStream synth_drift_stream(const DriftSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  LabeledStream stream;
  stream.name = spec.name;
  stream.dim = spec.dim;
  stream.classes = spec.classes;
  for (const auto& seg : spec.segments) {
    const double sd = std::sqrt(seg.cov_scale);
    for (std::size_t j = 0; j < seg.length; ++j) {
      const int cls = static_cast<int>(j % static_cast<std::size_t>(spec.classes));
      Eigen::VectorXd x(spec.dim);
      for (int f = 0; f < spec.dim; ++f) x(f) = seg.class_means(cls, f) + sd * gauss(rng);
      stream.features.push_back(std::move(x));
      stream.labels.push_back(cls + 1);
    }
  }
  return stream;
}

std::pair<LabeledStream, LabeledStream> split_offline_online(const LabeledStream& stream,
                                                             std::size_t n_offline) {
  if (n_offline >= stream.size()) {
    throw InvalidArgument("offline count " + std::to_string(n_offline) +
                          " must be below the stream length " + std::to_string(stream.size()));
  }
  LabeledStream head{stream.name, stream.dim, stream.classes, {}, {}};
  LabeledStream tail = head;
  const auto cut = static_cast<std::ptrdiff_t>(n_offline);
  head.features.assign(stream.features.begin(), stream.features.begin() + cut);
  head.labels.assign(stream.labels.begin(), stream.labels.begin() + cut);
  tail.features.assign(stream.features.begin() + cut, stream.features.end());
  tail.labels.assign(stream.labels.begin() + cut, stream.labels.end());
  return {std::move(head), std::move(tail)};
}

}  // namespace lite_rvfl
