#include "lite_rvfl/rvfl.hpp"

#include <cmath>
#include <random>
#include <string>

#include "lite_rvfl/errors.hpp"

namespace lite_rvfl {

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

EnhancementMap EnhancementMap::random(int input_dim, int groups, int nodes_per_group,
                                      std::uint64_t seed, Activation activation) {
  if (input_dim < 1 || groups < 1 || nodes_per_group < 1) {
    throw InvalidArgument("enhancement map dimensions must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int width = groups * nodes_per_group;

  EnhancementMap map;
  map.projection_.resize(input_dim, width);
  for (int c = 0; c < width; ++c) {
    for (int r = 0; r < input_dim; ++r) map.projection_(r, c) = unit(rng);
  }
  map.bias_.resize(width);
  for (int c = 0; c < width; ++c) map.bias_(c) = unit(rng);
  map.groups_ = groups;
  map.nodes_per_group_ = nodes_per_group;
  map.seed_ = seed;
  map.activation_ = activation;
  return map;
}

EnhancementMap EnhancementMap::from_parts(Eigen::MatrixXd projection, Eigen::VectorXd bias,
                                          int groups, int nodes_per_group,
                                          Activation activation) {
  if (projection.rows() < 1 || groups < 1 || nodes_per_group < 1) {
    throw InvalidArgument("enhancement map dimensions must be positive");
  }
  if (projection.cols() != groups * nodes_per_group || bias.size() != projection.cols()) {
    throw InvalidArgument("projection/bias shape does not match groups x nodes");
  }
  EnhancementMap map;
  map.projection_ = std::move(projection);
  map.bias_ = std::move(bias);
  map.groups_ = groups;
  map.nodes_per_group_ = nodes_per_group;
  map.activation_ = activation;
  return map;
}

Eigen::VectorXd EnhancementMap::extend(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim()) {
    throw InvalidArgument("feature vector has length " + std::to_string(x.size()) +
                          ", map expects " + std::to_string(input_dim()));
  }
  if (!x.allFinite()) throw InvalidArgument("feature vector has non-finite entries");

  Eigen::VectorXd out(extended_dim());
  out.head(input_dim()) = x;
  const Eigen::VectorXd pre = projection_.transpose() * x + bias_;
  out.tail(enhancement_dim()) = pre.unaryExpr([](double u) { return sigmoid(u); });
  return out;
}

Eigen::VectorXd encode_label(ClassLabel label, int classes) {
  if (classes < 1 || label < 1 || label > classes) {
    throw InvalidArgument("label " + std::to_string(label) + " outside 1.." +
                          std::to_string(classes));
  }
  Eigen::VectorXd one_hot = Eigen::VectorXd::Zero(classes);
  one_hot(label - 1) = 1.0;
  return one_hot;
}

DesignMatrices DesignMatrices::build(std::span<const Eigen::VectorXd> raw,
                                     std::span<const ClassLabel> labels,
                                     const EnhancementMap& map, int classes) {
  if (raw.size() != labels.size()) {
    throw InvalidArgument("sample and label counts differ");
  }
  DesignMatrices design;
  const auto n = static_cast<Eigen::Index>(raw.size());
  design.features.resize(n, map.extended_dim());
  design.targets.resize(n, classes);
  for (Eigen::Index i = 0; i < n; ++i) {
    design.features.row(i) = map.extend(raw[i]).transpose();
    design.targets.row(i) = encode_label(labels[i], classes).transpose();
  }
  return design;
}

OutputWeights train_batch(const DesignMatrices& design, const WeightScheme& scheme,
                          double lambda) {
  const Eigen::Index n = design.rows();
  if (n == 0) throw InvalidArgument("train_batch needs at least one row");
  if (design.targets.rows() != n) throw InvalidArgument("A and S row counts differ");
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");

  const double log_max = scheme.log_squared_weight_at(static_cast<std::uint64_t>(n));
  Eigen::VectorXd sq(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto idx = static_cast<std::uint64_t>(i + 1);
    sq(i) = std::exp(scheme.log_squared_weight_at(idx) - log_max);
  }
  const double scaled_lambda = lambda * std::exp(-log_max);

  const Eigen::MatrixXd weighted = sq.asDiagonal() * design.features;
  Eigen::MatrixXd gram = design.features.transpose() * weighted;
  gram.diagonal().array() += scaled_lambda;
  const Eigen::MatrixXd rhs = weighted.transpose() * design.targets;

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success || !gram.allFinite()) {
    throw NumericalError("weighted ridge system is not SPD", static_cast<std::size_t>(n));
  }
  OutputWeights w = llt.solve(rhs);
  if (!w.allFinite()) {
    throw NumericalError("weighted ridge solve produced non-finite weights",
                         static_cast<std::size_t>(n));
  }
  return w;
}

ClassLabel argmax_label(const Eigen::VectorXd& scores) {
  if (scores.size() == 0) throw InvalidArgument("empty score vector");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < scores.size(); ++i) {
    if (scores(i) > scores(best)) best = i;
  }
  return static_cast<ClassLabel>(best + 1);
}

Prediction predict_extended(const Eigen::VectorXd& extended, const OutputWeights& weights) {
  if (extended.size() != weights.rows()) {
    throw InvalidArgument("extended feature length " + std::to_string(extended.size()) +
                          " does not match weight rows " + std::to_string(weights.rows()));
  }
  Prediction p;
  p.scores = weights.transpose() * extended;
  p.label = argmax_label(p.scores);
  return p;
}

Prediction predict(const Eigen::VectorXd& x, const EnhancementMap& map,
                   const OutputWeights& weights) {
  return predict_extended(map.extend(x), weights);
}

Standardizer Standardizer::fit(std::span<const Eigen::VectorXd> samples) {
  if (samples.empty()) throw InvalidArgument("cannot fit a standardizer on no samples");
  const Eigen::Index d = samples.front().size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (const auto& x : samples) {
    if (x.size() != d) throw InvalidArgument("inconsistent feature dimension");
    mean += x;
  }
  mean /= static_cast<double>(samples.size());
  Eigen::VectorXd var = Eigen::VectorXd::Zero(d);
  for (const auto& x : samples) var += (x - mean).cwiseAbs2();
  var /= static_cast<double>(samples.size());

  Standardizer s;
  s.mean_ = mean;
  s.inv_scale_ = var.unaryExpr([](double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 1.0; });
  return s;
}

Eigen::VectorXd Standardizer::apply(const Eigen::VectorXd& x) const {
  if (!fitted()) return x;
  if (x.size() != mean_.size()) throw InvalidArgument("standardizer dimension mismatch");
  return (x - mean_).cwiseProduct(inv_scale_);
}

}  // namespace lite_rvfl
