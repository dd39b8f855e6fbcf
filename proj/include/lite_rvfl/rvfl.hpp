#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lite_rvfl/weighting.hpp"

namespace lite_rvfl {

// Class labels are 1-based throughout: 1..m.
using ClassLabel = int;

enum class Activation { kSigmoid };

// Fixed random lift x -> [x; phi(x^T W_e + b_e)]. W_e is d x (groups *
// nodes_per_group); columns [j*nodes, (j+1)*nodes) form group j.
class EnhancementMap {
 public:
  // Entries of W_e and b_e are uniform on [-1, 1], drawn from a 64-bit
  // Mersenne Twister seeded with `seed`: W_e column-major first, then b_e.
  static EnhancementMap random(int input_dim, int groups, int nodes_per_group,
                               std::uint64_t seed,
                               Activation activation = Activation::kSigmoid);

  // Explicit weights, mainly for fixtures.
  static EnhancementMap from_parts(Eigen::MatrixXd projection, Eigen::VectorXd bias,
                                   int groups, int nodes_per_group,
                                   Activation activation = Activation::kSigmoid);

  int input_dim() const { return static_cast<int>(projection_.rows()); }
  int groups() const { return groups_; }
  int nodes_per_group() const { return nodes_per_group_; }
  int enhancement_dim() const { return groups_ * nodes_per_group_; }
  int extended_dim() const { return input_dim() + enhancement_dim(); }
  std::uint64_t seed() const { return seed_; }
  Activation activation() const { return activation_; }
  const Eigen::MatrixXd& projection() const { return projection_; }
  const Eigen::VectorXd& bias() const { return bias_; }

  // Raw features followed by the enhancement outputs.
  Eigen::VectorXd extend(const Eigen::VectorXd& x) const;

 private:
  EnhancementMap() = default;

  Eigen::MatrixXd projection_;
  Eigen::VectorXd bias_;
  int groups_ = 0;
  int nodes_per_group_ = 0;
  std::uint64_t seed_ = 0;
  Activation activation_ = Activation::kSigmoid;
};

double sigmoid(double u);

Eigen::VectorXd encode_label(ClassLabel label, int classes);

// Rows in arrival order. features is n x D, targets is n x m one-hot.
struct DesignMatrices {
  Eigen::MatrixXd features;
  Eigen::MatrixXd targets;

  Eigen::Index rows() const { return features.rows(); }
  int classes() const { return static_cast<int>(targets.cols()); }

  // Extends every raw sample through `map` and one-hot encodes its label.
  static DesignMatrices build(std::span<const Eigen::VectorXd> raw,
                              std::span<const ClassLabel> labels,
                              const EnhancementMap& map, int classes);
};

struct HyperParams {
  double lambda = 0.1;
  int groups = 10;
  int nodes_per_group = 10;
  std::uint64_t seed = 0;
};

// D x m matrix W_b.
using OutputWeights = Eigen::MatrixXd;

// (lambda I + A^T T^2 A)^{-1} A^T T^2 S with T = diag(scheme weights over rows
// 1..n), solved through an LLT factorization. Both sides are divided by the
// largest squared weight before factorizing, which leaves the solution
// unchanged and keeps long exponential prefixes finite.
OutputWeights train_batch(const DesignMatrices& design, const WeightScheme& scheme,
                          double lambda);

struct Prediction {
  Eigen::VectorXd scores;
  ClassLabel label = 1;
};

// scores = W^T x_ext; label is 1 + argmax with ties going to the lower class.
Prediction predict_extended(const Eigen::VectorXd& extended, const OutputWeights& weights);

Prediction predict(const Eigen::VectorXd& x, const EnhancementMap& map,
                   const OutputWeights& weights);

ClassLabel argmax_label(const Eigen::VectorXd& scores);

// Per-feature z-scoring fitted on the offline block. Zero-variance features
// are centered only.
class Standardizer {
 public:
  Standardizer() = default;
  static Standardizer fit(std::span<const Eigen::VectorXd> samples);

  bool fitted() const { return mean_.size() > 0; }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd inv_scale_;
};

}  // namespace lite_rvfl
