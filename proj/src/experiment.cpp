#include "lite_rvfl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

namespace lite_rvfl {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out = "invalid configuration:";
  for (const auto& i : issues) out += "\n  " + i;
  return out;
}

// Collects problems instead of stopping at the first one.
class Checker {
 public:
  void add(const std::string& where, const std::string& what) {
    issues_.push_back(where + ": " + what);
  }
  bool ok() const { return issues_.empty(); }
  void throw_if_failed() const {
    if (!issues_.empty()) throw ConfigError(issues_);
  }

  void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : obj.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* allowed) { return k == allowed; })) {
        add(where + "/" + k, "unknown field");
      }
    }
  }

  std::optional<double> number(const json& obj, const char* key, const std::string& where,
                               bool required) {
    const std::string at = where + "/" + key;
    if (!obj.contains(key) || obj[key].is_null()) {
      if (required) add(at, "is required");
      return std::nullopt;
    }
    if (!obj[key].is_number()) {
      add(at, "must be a number");
      return std::nullopt;
    }
    return obj[key].get<double>();
  }

  std::optional<long long> integer(const json& obj, const char* key, const std::string& where,
                                   bool required, long long min_value) {
    const std::string at = where + "/" + key;
    if (!obj.contains(key) || obj[key].is_null()) {
      if (required) add(at, "is required");
      return std::nullopt;
    }
    if (!obj[key].is_number_integer()) {
      add(at, "must be an integer");
      return std::nullopt;
    }
    const auto v = obj[key].get<long long>();
    if (v < min_value) {
      add(at, "must be >= " + std::to_string(min_value));
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::string> string(const json& obj, const char* key, const std::string& where,
                                    bool required) {
    const std::string at = where + "/" + key;
    if (!obj.contains(key) || obj[key].is_null()) {
      if (required) add(at, "is required");
      return std::nullopt;
    }
    if (!obj[key].is_string()) {
      add(at, "must be a string");
      return std::nullopt;
    }
    return obj[key].get<std::string>();
  }

  std::optional<bool> boolean(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
    if (!obj[key].is_boolean()) {
      add(where + "/" + key, "must be a boolean");
      return std::nullopt;
    }
    return obj[key].get<bool>();
  }

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

bool open_unit(double v) { return v > 0.0 && v < 1.0; }

DriftSpec check_drift_spec(const json& doc, const std::string& where, Checker& check) {
  DriftSpec spec;
  if (!doc.is_object()) {
    check.add(where, "must be an object");
    return spec;
  }
  check.only_keys(doc, where, {"name", "dim", "classes", "seed", "segments"});
  if (auto name = check.string(doc, "name", where, false)) spec.name = *name;
  spec.dim = static_cast<int>(check.integer(doc, "dim", where, true, 1).value_or(0));
  spec.classes = static_cast<int>(check.integer(doc, "classes", where, true, 1).value_or(0));
  spec.seed = static_cast<std::uint64_t>(check.integer(doc, "seed", where, false, 0).value_or(0));
  if (!doc.contains("segments") || !doc["segments"].is_array() || doc["segments"].empty()) {
    check.add(where + "/segments", "must be a non-empty array");
    return spec;
  }
  for (std::size_t s = 0; s < doc["segments"].size(); ++s) {
    const auto& seg_doc = doc["segments"][s];
    const std::string at = where + "/segments/" + std::to_string(s);
    if (!seg_doc.is_object()) {
      check.add(at, "must be an object");
      continue;
    }
    check.only_keys(seg_doc, at, {"length", "cov_scale", "class_means"});
    DriftSegment seg;
    seg.length = static_cast<std::size_t>(check.integer(seg_doc, "length", at, true, 1).value_or(0));
    if (auto scale = check.number(seg_doc, "cov_scale", at, false)) {
      if (!(*scale > 0.0)) check.add(at + "/cov_scale", "must be > 0");
      seg.cov_scale = *scale;
    }
    const auto& means = seg_doc.contains("class_means") ? seg_doc["class_means"] : json();
    if (!means.is_array() || means.size() != static_cast<std::size_t>(spec.classes)) {
      check.add(at + "/class_means", "must be an array of `classes` rows");
    } else {
      seg.class_means.resize(spec.classes, spec.dim);
      for (std::size_t c = 0; c < means.size(); ++c) {
        const auto& row = means[c];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(spec.dim)) {
          check.add(at + "/class_means/" + std::to_string(c), "must hold `dim` numbers");
          continue;
        }
        for (std::size_t f = 0; f < row.size(); ++f) {
          if (!row[f].is_number()) {
            check.add(at + "/class_means/" + std::to_string(c), "must hold numbers");
            break;
          }
          seg.class_means(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(f)) =
              row[f].get<double>();
        }
      }
    }
    spec.segments.push_back(std::move(seg));
  }
  return spec;
}

std::optional<DetectorKind> check_detector(const json& doc, const std::string& where,
                                           Checker& check) {
  if (doc.is_string()) return check_detector(json{{"kind", doc}}, where, check);
  if (!doc.is_object()) {
    check.add(where, "must be a detector name or object");
    return std::nullopt;
  }
  const auto kind = check.string(doc, "kind", where, true);
  if (!kind) return std::nullopt;
  auto unit = [&](const char* key, double& field) {
    if (auto v = check.number(doc, key, where, false)) {
      if (!open_unit(*v)) check.add(where + "/" + key, "must lie in (0, 1)");
      field = *v;
    }
  };
  if (*kind == "adwin") {
    check.only_keys(doc, where, {"kind", "delta"});
    AdwinConfig cfg;
    unit("delta", cfg.delta);
    return cfg;
  }
  if (*kind == "hddm_a") {
    check.only_keys(doc, where, {"kind", "drift_conf", "warn_conf", "two_sided"});
    HddmAConfig cfg;
    unit("drift_conf", cfg.drift_confidence);
    unit("warn_conf", cfg.warning_confidence);
    if (auto b = check.boolean(doc, "two_sided", where)) cfg.two_sided = *b;
    return cfg;
  }
  if (*kind == "hddm_w") {
    check.only_keys(doc, where, {"kind", "drift_conf", "warn_conf", "ewma_lambda", "two_sided"});
    HddmWConfig cfg;
    unit("drift_conf", cfg.drift_confidence);
    unit("warn_conf", cfg.warning_confidence);
    unit("ewma_lambda", cfg.ewma_lambda);
    if (auto b = check.boolean(doc, "two_sided", where)) cfg.two_sided = *b;
    return cfg;
  }
  if (*kind == "page_hinkley") {
    check.only_keys(doc, where, {"kind", "min_instances", "delta", "threshold", "alpha"});
    PageHinkleyConfig cfg;
    if (auto v = check.integer(doc, "min_instances", where, false, 1)) {
      cfg.min_instances = static_cast<int>(*v);
    }
    unit("delta", cfg.delta);
    unit("alpha", cfg.alpha);
    if (auto v = check.number(doc, "threshold", where, false)) {
      if (!(*v > 0.0)) check.add(where + "/threshold", "must be > 0");
      cfg.threshold = *v;
    }
    return cfg;
  }
  check.add(where + "/kind", "unknown detector '" + *kind +
                                 "' (expected adwin, hddm_a, hddm_w, page_hinkley)");
  return std::nullopt;
}

// Shared by "defaults" and each method entry.
void apply_run_settings(const json& doc, const std::string& where, ExperimentConfig& cfg,
                        Checker& check) {
  if (auto v = check.integer(doc, "offline_count", where, false, 1)) {
    cfg.offline_count = static_cast<std::size_t>(*v);
  }
  if (auto v = check.integer(doc, "window", where, false, 1)) cfg.window = static_cast<std::size_t>(*v);
  if (auto v = check.integer(doc, "retrain_buffer", where, false, 1)) {
    cfg.retrain_buffer = static_cast<std::size_t>(*v);
  }
  if (doc.contains("periodic_retrain_every")) {
    if (doc["periodic_retrain_every"].is_null()) {
      cfg.periodic_retrain_every.reset();
    } else if (auto v = check.integer(doc, "periodic_retrain_every", where, false, 1)) {
      cfg.periodic_retrain_every = static_cast<std::size_t>(*v);
    }
  }
  if (auto v = check.number(doc, "lambda", where, false)) {
    if (!(*v > 0.0)) check.add(where + "/lambda", "must be > 0");
    cfg.lambda = *v;
  }
  if (auto v = check.integer(doc, "groups", where, false, 1)) cfg.groups = static_cast<int>(*v);
  if (auto v = check.integer(doc, "nodes_per_group", where, false, 1)) {
    cfg.nodes_per_group = static_cast<int>(*v);
  }
  if (auto v = check.boolean(doc, "standardize", where)) cfg.standardize = *v;
}

constexpr std::initializer_list<const char*> kRunSettingKeys = {
    "offline_count", "window", "retrain_buffer", "periodic_retrain_every",
    "lambda",        "groups", "nodes_per_group", "standardize"};

std::vector<const char*> with_run_keys(std::initializer_list<const char*> extra) {
  std::vector<const char*> keys(kRunSettingKeys);
  keys.insert(keys.end(), extra.begin(), extra.end());
  return keys;
}

void only_keys(Checker& check, const json& obj, const std::string& where,
               const std::vector<const char*>& keys) {
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* allowed) { return k == allowed; })) {
      check.add(where + "/" + k, "unknown field");
    }
  }
}

CsvSchema check_csv_schema(const json& doc, const std::string& where, Checker& check,
                           std::optional<std::filesystem::path>& path,
                           const std::filesystem::path& base_dir) {
  CsvSchema schema;
  check.only_keys(doc, where, {"path", "feature_count", "label_column", "label_map", "classes"});
  if (auto p = check.string(doc, "path", where, true)) path = base_dir / *p;
  schema.feature_count = static_cast<int>(check.integer(doc, "feature_count", where, true, 1).value_or(0));
  if (auto v = check.integer(doc, "label_column", where, false, 0)) {
    schema.label_column = static_cast<int>(*v);
    if (*v > schema.feature_count) check.add(where + "/label_column", "must be <= feature_count");
  }
  if (auto v = check.integer(doc, "classes", where, false, 1)) schema.classes = static_cast<int>(*v);
  if (doc.contains("label_map")) {
    const auto& m = doc["label_map"];
    if (!m.is_object()) {
      check.add(where + "/label_map", "must map label text to class indices");
    } else {
      for (const auto& [text, idx] : m.items()) {
        if (!idx.is_number_integer() || idx.get<long long>() < 1) {
          check.add(where + "/label_map/" + text, "must be a class index >= 1");
          continue;
        }
        schema.label_map[text] = static_cast<ClassLabel>(idx.get<long long>());
      }
    }
  }
  return schema;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : InvalidArgument(join_issues(issues)), issues_(std::move(issues)) {}

RunError::RunError(std::string method, std::uint64_t seed, const NumericalError& cause)
    : NumericalError("method " + method + ", seed " + std::to_string(seed) + ": " + cause.what(),
                     cause.rows()),
      method_(std::move(method)),
      seed_(seed) {}

DriftSpec parse_drift_spec(const json& doc) {
  Checker check;
  DriftSpec spec = check_drift_spec(doc, "", check);
  check.throw_if_failed();
  try {
    validate(spec);
  } catch (const InvalidArgument& e) {
    throw ConfigError({e.what()});
  }
  return spec;
}

json drift_spec_to_json(const DriftSpec& spec) {
  json segments = json::array();
  for (const auto& seg : spec.segments) {
    json means = json::array();
    for (Eigen::Index c = 0; c < seg.class_means.rows(); ++c) {
      json row = json::array();
      for (Eigen::Index f = 0; f < seg.class_means.cols(); ++f) row.push_back(seg.class_means(c, f));
      means.push_back(row);
    }
    segments.push_back({{"length", seg.length}, {"cov_scale", seg.cov_scale}, {"class_means", means}});
  }
  return {{"name", spec.name},
          {"dim", spec.dim},
          {"classes", spec.classes},
          {"seed", spec.seed},
          {"segments", segments}};
}

CliConfig parse_cli_config(const json& doc, const std::filesystem::path& base_dir) {
  Checker check;
  CliConfig cfg;
  if (!doc.is_object()) {
    check.add("", "config must be a JSON object");
    check.throw_if_failed();
  }
  check.only_keys(doc, "", {"data", "seeds", "output_dir", "defaults", "methods"});

  // data
  if (!doc.contains("data") || !doc["data"].is_object() || doc["data"].size() != 1) {
    check.add("/data", "must be an object with exactly one of csv, dsms, synthetic");
  } else {
    const auto& data = doc["data"];
    if (data.contains("csv")) {
      if (!data["csv"].is_object()) {
        check.add("/data/csv", "must be an object");
      } else {
        cfg.data.schema = check_csv_schema(data["csv"], "/data/csv", check, cfg.data.path, base_dir);
      }
    } else if (data.contains("dsms")) {
      if (!data["dsms"].is_string()) {
        check.add("/data/dsms", "must be a file path");
      } else {
        cfg.data.path = base_dir / data["dsms"].get<std::string>();
        cfg.data.schema = dsms_schema();
      }
    } else if (data.contains("synthetic")) {
      const auto before = check.issues().size();
      DriftSpec spec = check_drift_spec(data["synthetic"], "/data/synthetic", check);
      if (check.issues().size() == before) {
        try {
          validate(spec);
          cfg.data.synthetic = std::move(spec);
        } catch (const InvalidArgument& e) {
          check.add("/data/synthetic", e.what());
        }
      }
    } else {
      check.add("/data", "must contain one of csv, dsms, synthetic");
    }
  }

  // seeds
  if (!doc.contains("seeds")) {
    cfg.seeds = {1, 2, 3, 4, 5};
  } else if (!doc["seeds"].is_array() || doc["seeds"].empty()) {
    check.add("/seeds", "must be a non-empty array of non-negative integers");
  } else {
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < doc["seeds"].size(); ++i) {
      const auto& s = doc["seeds"][i];
      if (!s.is_number_integer() || s.get<long long>() < 0) {
        check.add("/seeds/" + std::to_string(i), "must be a non-negative integer");
        continue;
      }
      const auto v = s.get<std::uint64_t>();
      if (!seen.insert(v).second) check.add("/seeds/" + std::to_string(i), "duplicate seed");
      cfg.seeds.push_back(v);
    }
  }

  if (auto out = check.string(doc, "output_dir", "", false)) {
    cfg.output_dir = base_dir / *out;
  } else {
    cfg.output_dir = base_dir / "out";
  }

  ExperimentConfig defaults;
  if (doc.contains("defaults")) {
    if (!doc["defaults"].is_object()) {
      check.add("/defaults", "must be an object");
    } else {
      only_keys(check, doc["defaults"], "/defaults", with_run_keys({}));
      apply_run_settings(doc["defaults"], "/defaults", defaults, check);
    }
  }

  // methods
  if (!doc.contains("methods") || !doc["methods"].is_array() || doc["methods"].empty()) {
    check.add("/methods", "must be a non-empty array");
  } else {
    std::set<std::string> names;
    for (std::size_t i = 0; i < doc["methods"].size(); ++i) {
      const auto& m = doc["methods"][i];
      const std::string at = "/methods/" + std::to_string(i);
      if (m.is_string()) {
        // Shorthand: "lite", "rvfl_uniform", ...
        check.add(at, "must be an object with a \"method\" field");
        continue;
      }
      if (!m.is_object()) {
        check.add(at, "must be an object");
        continue;
      }
      ExperimentConfig run = defaults;
      const auto method = check.string(m, "method", at, true);
      if (!method) continue;
      if (*method == "rvfl_uniform") {
        only_keys(check, m, at, with_run_keys({"method", "label"}));
        run.method = MethodSpec::rvfl_uniform();
      } else if (*method == "lite") {
        only_keys(check, m, at, with_run_keys({"method", "label", "theta", "mode"}));
        run.method = MethodSpec::lite(1.003);
        if (auto theta = check.number(m, "theta", at, false)) {
          if (!(*theta >= 1.0)) check.add(at + "/theta", "must be >= 1");
          run.method.theta = *theta;
        }
        if (auto mode = check.string(m, "mode", at, false)) {
          if (*mode == "rescaled") {
            run.mode = UpdateMode::kRescaled;
          } else if (*mode != "direct") {
            check.add(at + "/mode", "must be \"direct\" or \"rescaled\"");
          }
        }
      } else if (*method == "alt") {
        only_keys(check, m, at, with_run_keys({"method", "label", "k"}));
        run.method = MethodSpec::alt(2);
        if (auto k = check.integer(m, "k", at, false, 1)) run.method.k = static_cast<int>(*k);
      } else if (*method == "managed") {
        only_keys(check, m, at, with_run_keys({"method", "label", "detector"}));
        if (!m.contains("detector")) {
          check.add(at + "/detector", "is required");
          continue;
        }
        auto det = check_detector(m["detector"], at + "/detector", check);
        if (!det) continue;
        run.method = MethodSpec::managed(*det);
      } else {
        check.add(at + "/method", "unknown method '" + *method +
                                      "' (expected rvfl_uniform, lite, alt, managed)");
        continue;
      }
      if (auto label = check.string(m, "label", at, false)) run.method.label = *label;
      apply_run_settings(m, at, run, check);
      if (run.method.kind == MethodKind::kManaged && run.periodic_retrain_every) {
        check.add(at + "/periodic_retrain_every", "not supported for managed methods");
      }
      if (check.ok()) {
        try {
          validate(run);
        } catch (const InvalidArgument& e) {
          check.add(at, e.what());
        }
      }
      const std::string name = run.method.display_name();
      if (!names.insert(name).second) {
        check.add(at, "duplicate method name '" + name + "'; set \"label\" to disambiguate");
      }
      cfg.methods.push_back(std::move(run));
    }
  }

  check.throw_if_failed();
  return cfg;
}

CliConfig load_cli_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }
  return parse_cli_config(doc, path.parent_path());
}

LabeledStream resolve_data(const DataSource& source) {
  if (source.synthetic) return synth_drift_stream(*source.synthetic);
  if (!source.path) throw IoError("config names no data source");
  return load_csv(*source.path, source.schema);
}

std::vector<NamedRun> run_experiment(const CliConfig& config, const LabeledStream& stream,
                                     unsigned jobs) {
  struct Task {
    std::size_t method;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    for (auto seed : config.seeds) tasks.push_back({m, seed});
  }
  std::vector<NamedRun> runs(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto& cfg = config.methods[tasks[i].method];
      runs[i].method = cfg.method.display_name();
      runs[i].seed = tasks[i].seed;
      try {
        runs[i].result = run_prequential(cfg, stream, tasks[i].seed);
      } catch (const NumericalError& e) {
        errors[i] = std::make_exception_ptr(RunError(runs[i].method, tasks[i].seed, e));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return runs;
}

json summary_to_json(const std::vector<MethodSummary>& summary, const std::vector<NamedRun>& runs,
                     const LabeledStream& stream, const CliConfig& config) {
  json methods = json::array();
  for (const auto& s : summary) {
    json per_seed = json::array();
    for (const auto& r : runs) {
      if (r.method != s.method) continue;
      per_seed.push_back({{"seed", r.seed},
                          {"final_accuracy", r.result.final_accuracy},
                          {"wall_time_seconds", r.result.wall_time_seconds},
                          {"drifts_detected", r.result.drifts_detected
                                                  ? json(*r.result.drifts_detected)
                                                  : json(nullptr)},
                          {"periodic_retrains", r.result.periodic_retrains},
                          {"online_samples", r.result.correctness.size()}});
    }
    methods.push_back({{"method", s.method},
                       {"runs", s.runs},
                       {"accuracy", {{"mean", s.accuracy_mean}, {"std", s.accuracy_std}}},
                       {"accuracy_rank", s.accuracy_rank},
                       {"time_seconds", {{"mean", s.time_mean}, {"std", s.time_std}}},
                       {"time_rank", s.time_rank},
                       {"drifts_detected", s.drifts_mean ? json(*s.drifts_mean) : json(nullptr)},
                       {"per_seed", per_seed}});
  }
  json seeds = config.seeds;
  return {{"format", "lite-rvfl-summary"},
          {"version", 1},
          {"stream",
           {{"name", stream.name},
            {"samples", stream.size()},
            {"dim", stream.dim},
            {"classes", stream.classes}}},
          {"seeds", seeds},
          {"methods", methods}};
}

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

std::string format_drifts(double d) {
  if (std::floor(d) == d) return std::to_string(static_cast<long long>(d));
  return fixed(d, 1);
}

}  // namespace

std::string render_table(const json& summary) {
  const auto& methods = summary.at("methods");
  std::vector<std::string> header{"Methods"};
  std::vector<std::vector<std::string>> rows(5);
  rows[0].push_back("Accuracy");
  rows[1].push_back("Rank");
  rows[2].push_back("Time (s)");
  rows[3].push_back("Rank");
  rows[4].push_back("Drifts Detected");
  for (const auto& m : methods) {
    header.push_back(m.at("method").get<std::string>());
    const auto& acc = m.at("accuracy");
    rows[0].push_back(fixed(100.0 * acc.at("mean").get<double>(), 2) + "% +- " +
                      fixed(100.0 * acc.at("std").get<double>(), 2) + "%");
    rows[1].push_back(std::to_string(m.at("accuracy_rank").get<int>()));
    const auto& t = m.at("time_seconds");
    rows[2].push_back(fixed(t.at("mean").get<double>(), 2) + " +- " +
                      fixed(t.at("std").get<double>(), 2));
    rows[3].push_back(std::to_string(m.at("time_rank").get<int>()));
    const auto& d = m.at("drifts_detected");
    rows[4].push_back(d.is_null() ? "------" : format_drifts(d.get<double>()));
  }

  std::vector<std::size_t> width(header.size(), 0);
  auto measure = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  };
  measure(header);
  for (const auto& r : rows) measure(r);

  std::ostringstream out;
  const auto s = summary.at("stream");
  out << "Accuracy and time (mean +- std) over " << summary.at("seeds").size() << " run(s) on "
      << s.at("name").get<std::string>() << " (" << s.at("samples").get<std::size_t>()
      << " samples)\n";
  auto emit = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      out << (c == 0 ? "" : " | ");
      if (c + 1 < r.size()) {
        out << std::left << std::setw(static_cast<int>(width[c])) << r[c];
      } else {
        out << r[c];
      }
    }
    out << '\n';
  };
  emit(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 3 * (width.size() - 1), '-') << '\n';
  for (const auto& r : rows) emit(r);
  return out.str();
}

std::string file_slug(const std::string& method) {
  std::string slug;
  for (char ch : method) {
    const auto c = static_cast<unsigned char>(ch);
    slug += std::isalnum(c) ? static_cast<char>(std::tolower(c)) : '_';
  }
  return slug;
}

std::string curve_csv(const RunResult& result) {
  std::string out = "step,cumulative_accuracy,windowed_accuracy\n";
  char buf[64];
  for (std::size_t t = 0; t < result.correctness.size(); ++t) {
    out += std::to_string(t + 1);
    out += ',';
    auto r = std::to_chars(buf, buf + sizeof(buf), result.cumulative_accuracy[t]);
    out.append(buf, r.ptr);
    out += ',';
    r = std::to_chars(buf, buf + sizeof(buf), result.windowed_accuracy[t]);
    out.append(buf, r.ptr);
    out += '\n';
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

void write_artifacts(const std::filesystem::path& dir, const std::vector<NamedRun>& runs,
                     const json& summary) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "curves", ec);
  if (ec) throw IoError("cannot create '" + (dir / "curves").string() + "': " + ec.message());
  for (const auto& r : runs) {
    const auto name = file_slug(r.method) + "_seed" + std::to_string(r.seed) + ".csv";
    write_file(dir / "curves" / name, curve_csv(r.result));
  }
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  write_file(dir / "summary.txt", render_table(summary));
}

}  // namespace lite_rvfl
