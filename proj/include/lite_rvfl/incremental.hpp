#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "lite_rvfl/rvfl.hpp"
#include "lite_rvfl/weighting.hpp"

namespace lite_rvfl {

enum class UpdateMode {
  // Stores P = (lambda I + A^T T^2 A)^{-1} and Q = A^T T^2 S as-is.
  kDirect,
  // Exponential only. Stores H = theta^{2(n-1)} P and R = theta^{-2(n-1)} Q,
  // which stay O(1) however long the stream runs.
  kRescaled,
};

// Running weighted-ridge solution that absorbs one sample per step at a cost
// independent of how many samples came before. Single writer.
class IncrementalState {
 public:
  // Exact fit on the offline block (same system as train_batch).
  static IncrementalState init(const DesignMatrices& offline, const WeightScheme& scheme,
                               double lambda, UpdateMode mode = UpdateMode::kDirect);

  // Reassembles a state from stored parts; validates shapes and the mode/scheme
  // pairing but not the numerical relation between the parts.
  static IncrementalState from_parts(UpdateMode mode, WeightScheme scheme, double lambda,
                                     std::uint64_t absorbed, Eigen::MatrixXd inverse,
                                     Eigen::MatrixXd moment, Eigen::MatrixXd weights);

  // Dispatches on mode().
  void step(const Eigen::VectorXd& extended, const Eigen::VectorXd& one_hot);
  void step(const Eigen::VectorXd& extended, ClassLabel label);

  // Rank-1 Woodbury update of (P, Q, W) with c = w_{n+1}^2:
  //   dM = 1 / (1 + c a P a^T),  dP = c P a^T dM a P,  dQ = c a^T s
  //   W <- W + P dQ - dP Q - dP dQ,  P <- P - dP,  Q <- Q + dQ
  // where P and Q on the right are the pre-update values. Throws
  // OverflowError once c (or the state it feeds) leaves double range.
  void step_direct(const Eigen::VectorXd& extended, const Eigen::VectorXd& one_hot);

  // mu = theta^-2; H <- (H - H a a^T H / (mu + a H a^T)) / mu,
  // R <- mu R + a^T s, W = H R.
  void step_rescaled(const Eigen::VectorXd& extended, const Eigen::VectorXd& one_hot);

  Prediction predict(const Eigen::VectorXd& extended) const;

  // P in direct mode, H in rescaled mode.
  const Eigen::MatrixXd& inverse() const { return inverse_; }
  // Q in direct mode, R in rescaled mode.
  const Eigen::MatrixXd& moment() const { return moment_; }
  const OutputWeights& weights() const { return weights_; }
  std::uint64_t absorbed() const { return absorbed_; }
  const WeightScheme& scheme() const { return scheme_; }
  double lambda() const { return lambda_; }
  UpdateMode mode() const { return mode_; }
  int dim() const { return static_cast<int>(inverse_.rows()); }
  int classes() const { return static_cast<int>(weights_.cols()); }

  // Symmetric to `tol` (relative, Frobenius) and LLT-factorizable.
  bool inverse_is_spd(double tol = 1e-9) const;

 private:
  IncrementalState() = default;
  void check_step_input(const Eigen::VectorXd& extended, const Eigen::VectorXd& one_hot) const;

  Eigen::MatrixXd inverse_;
  Eigen::MatrixXd moment_;
  OutputWeights weights_;
  std::uint64_t absorbed_ = 0;
  WeightScheme scheme_;
  double lambda_ = 0.0;
  UpdateMode mode_ = UpdateMode::kDirect;
};

inline Prediction current_prediction(const IncrementalState& state,
                                     const Eigen::VectorXd& extended) {
  return state.predict(extended);
}

}  // namespace lite_rvfl
