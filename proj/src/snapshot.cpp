#include "lite_rvfl/snapshot.hpp"

#include <vector>

#include "lite_rvfl/errors.hpp"

namespace lite_rvfl {

namespace {

nlohmann::json flatten(const Eigen::MatrixXd& m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  }
  return flat;
}

Eigen::MatrixXd unflatten(const nlohmann::json& flat, Eigen::Index rows, Eigen::Index cols,
                          const char* field) {
  if (!flat.is_array() || flat.size() != static_cast<std::size_t>(rows * cols)) {
    throw InvalidArgument(std::string("snapshot field '") + field + "' has the wrong size");
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = flat[k++].get<double>();
  }
  return m;
}

}  // namespace

nlohmann::json scheme_to_json(const WeightScheme& scheme) {
  if (scheme.is_exponential()) return {{"kind", "exponential"}, {"theta", scheme.theta()}};
  if (scheme.is_polynomial()) return {{"kind", "polynomial"}, {"k", scheme.k()}};
  return {{"kind", "uniform"}};
}

WeightScheme scheme_from_json(const nlohmann::json& doc) {
  const auto kind = doc.at("kind").get<std::string>();
  if (kind == "uniform") return WeightScheme::uniform();
  if (kind == "exponential") return WeightScheme::exponential(doc.at("theta").get<double>());
  if (kind == "polynomial") return WeightScheme::polynomial(doc.at("k").get<int>());
  throw InvalidArgument("unknown weight scheme '" + kind + "'");
}

nlohmann::json snapshot(const IncrementalState& state) {
  return {
      {"format", "lite-rvfl-state"},
      {"version", kSnapshotVersion},
      {"mode", state.mode() == UpdateMode::kRescaled ? "rescaled" : "direct"},
      {"scheme", scheme_to_json(state.scheme())},
      {"lambda", state.lambda()},
      {"absorbed", state.absorbed()},
      {"dim", state.dim()},
      {"classes", state.classes()},
      {"inverse", flatten(state.inverse())},
      {"moment", flatten(state.moment())},
      {"weights", flatten(state.weights())},
  };
}

IncrementalState restore(const nlohmann::json& doc) {
  try {
    if (doc.at("format").get<std::string>() != "lite-rvfl-state") {
      throw InvalidArgument("not a lite-rvfl state snapshot");
    }
    const int version = doc.at("version").get<int>();
    if (version != kSnapshotVersion) {
      throw InvalidArgument("unsupported snapshot version " + std::to_string(version));
    }
    const auto mode_name = doc.at("mode").get<std::string>();
    if (mode_name != "direct" && mode_name != "rescaled") {
      throw InvalidArgument("unknown update mode '" + mode_name + "'");
    }
    const auto dim = doc.at("dim").get<Eigen::Index>();
    const auto classes = doc.at("classes").get<Eigen::Index>();
    if (dim < 1 || classes < 1) throw InvalidArgument("snapshot dimensions must be positive");
    return IncrementalState::from_parts(
        mode_name == "rescaled" ? UpdateMode::kRescaled : UpdateMode::kDirect,
        scheme_from_json(doc.at("scheme")), doc.at("lambda").get<double>(),
        doc.at("absorbed").get<std::uint64_t>(), unflatten(doc.at("inverse"), dim, dim, "inverse"),
        unflatten(doc.at("moment"), dim, classes, "moment"),
        unflatten(doc.at("weights"), dim, classes, "weights"));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed snapshot: ") + e.what());
  }
}

}  // namespace lite_rvfl
