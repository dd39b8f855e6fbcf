#include "lite_rvfl/incremental.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lite_rvfl/errors.hpp"

namespace lite_rvfl {

namespace {

const double kLogMaxDouble = std::log(std::numeric_limits<double>::max());

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& gram, std::size_t rows) {
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (!gram.allFinite() || llt.info() != Eigen::Success) {
    throw NumericalError("offline Gram matrix is not SPD", rows);
  }
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(gram.rows(), gram.cols()));
  return 0.5 * (inv + inv.transpose());
}

void symmetrize(Eigen::MatrixXd& m) {
  // In-place (m + m^T) / 2 on the strict triangles.
  const Eigen::Index n = m.rows();
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = c + 1; r < n; ++r) {
      const double avg = 0.5 * (m(r, c) + m(c, r));
      m(r, c) = avg;
      m(c, r) = avg;
    }
  }
}

}  // namespace

IncrementalState IncrementalState::init(const DesignMatrices& offline,
                                        const WeightScheme& scheme, double lambda,
                                        UpdateMode mode) {
  const Eigen::Index n = offline.rows();
  if (n == 0) throw InvalidArgument("offline block is empty");
  if (offline.targets.rows() != n) throw InvalidArgument("A and S row counts differ");
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  if (mode == UpdateMode::kRescaled && !scheme.is_exponential()) {
    throw InvalidArgument("rescaled mode requires the exponential scheme");
  }

  // Direct mode uses the raw squared weights; rescaled mode divides the whole
  // system by theta^{2(n-1)}, the newest squared weight.
  const double log_scale = mode == UpdateMode::kRescaled
                               ? scheme.log_squared_weight_at(static_cast<std::uint64_t>(n))
                               : 0.0;
  Eigen::VectorXd sq(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double log_w = scheme.log_squared_weight_at(static_cast<std::uint64_t>(i + 1));
    if (log_w - log_scale > kLogMaxDouble) {
      throw OverflowError("offline weights exceed double range; use rescaled mode",
                          static_cast<std::size_t>(n));
    }
    sq(i) = std::exp(log_w - log_scale);
  }

  const Eigen::MatrixXd weighted = sq.asDiagonal() * offline.features;
  Eigen::MatrixXd gram = offline.features.transpose() * weighted;
  gram.diagonal().array() += lambda * std::exp(-log_scale);

  IncrementalState state;
  state.inverse_ = spd_inverse(gram, static_cast<std::size_t>(n));
  state.moment_ = weighted.transpose() * offline.targets;
  state.weights_ = state.inverse_ * state.moment_;
  state.absorbed_ = static_cast<std::uint64_t>(n);
  state.scheme_ = scheme;
  state.lambda_ = lambda;
  state.mode_ = mode;
  if (!state.moment_.allFinite() || !state.weights_.allFinite()) {
    throw NumericalError("offline fit produced non-finite state", state.absorbed_);
  }
  return state;
}

IncrementalState IncrementalState::from_parts(UpdateMode mode, WeightScheme scheme,
                                              double lambda, std::uint64_t absorbed,
                                              Eigen::MatrixXd inverse, Eigen::MatrixXd moment,
                                              Eigen::MatrixXd weights) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  if (mode == UpdateMode::kRescaled && !scheme.is_exponential()) {
    throw InvalidArgument("rescaled mode requires the exponential scheme");
  }
  if (absorbed == 0) throw InvalidArgument("state must have absorbed at least one sample");
  if (inverse.rows() != inverse.cols() || moment.rows() != inverse.rows() ||
      weights.rows() != inverse.rows() || weights.cols() != moment.cols() ||
      moment.cols() < 1) {
    throw InvalidArgument("inconsistent incremental state shapes");
  }
  IncrementalState state;
  state.inverse_ = std::move(inverse);
  state.moment_ = std::move(moment);
  state.weights_ = std::move(weights);
  state.absorbed_ = absorbed;
  state.scheme_ = scheme;
  state.lambda_ = lambda;
  state.mode_ = mode;
  return state;
}

void IncrementalState::check_step_input(const Eigen::VectorXd& extended,
                                        const Eigen::VectorXd& one_hot) const {
  if (extended.size() != dim()) {
    throw InvalidArgument("extended feature length " + std::to_string(extended.size()) +
                          " does not match state dimension " + std::to_string(dim()));
  }
  if (one_hot.size() != classes()) {
    throw InvalidArgument("label vector length does not match class count");
  }
  if (!extended.allFinite() || !one_hot.allFinite()) {
    throw InvalidArgument("step input contains NaN or infinity");
  }
}

void IncrementalState::step(const Eigen::VectorXd& extended, const Eigen::VectorXd& one_hot) {
  if (mode_ == UpdateMode::kRescaled) {
    step_rescaled(extended, one_hot);
  } else {
    step_direct(extended, one_hot);
  }
}

void IncrementalState::step(const Eigen::VectorXd& extended, ClassLabel label) {
  step(extended, encode_label(label, classes()));
}

void IncrementalState::step_direct(const Eigen::VectorXd& a, const Eigen::VectorXd& s) {
  if (mode_ != UpdateMode::kDirect) throw InvalidArgument("step_direct on a rescaled state");
  check_step_input(a, s);

  const double log_c = scheme_.log_squared_weight_at(absorbed_ + 1);
  if (log_c > kLogMaxDouble) {
    throw OverflowError("squared sample weight exceeds double range at n = " +
                            std::to_string(absorbed_ + 1) + "; use rescaled mode",
                        absorbed_);
  }
  const double c = std::exp(log_c);

  const Eigen::VectorXd u = inverse_ * a;  // P a^T
  const double quad = a.dot(u);
  const double denom = 1.0 + c * quad;
  if (!std::isfinite(denom)) {
    throw OverflowError("rank-1 denominator overflowed; use rescaled mode", absorbed_);
  }
  if (!(denom > 0.0)) {
    throw NumericalError("rank-1 denominator is not positive; P is no longer SPD", absorbed_);
  }
  const double dm = 1.0 / denom;

  // dP = c dM u u^T and dQ = c a s^T are rank one, so every product below is
  // an outer product of u with a row vector.
  const Eigen::RowVectorXd st = s.transpose();
  const Eigen::RowVectorXd u_q = u.transpose() * moment_;  // u^T Q_old
  const Eigen::RowVectorXd p_dq = c * st;                   // P dQ = u (c s^T)
  const Eigen::RowVectorXd dp_q = c * dm * u_q;             // dP Q = u (c dM u^T Q)
  const Eigen::RowVectorXd dp_dq = (c * dm) * (c * quad) * st;  // dP dQ

  weights_.noalias() += u * (p_dq - dp_q - dp_dq);
  inverse_.noalias() -= (c * dm) * (u * u.transpose());
  moment_.noalias() += c * (a * st);
  symmetrize(inverse_);
  ++absorbed_;

  if (!moment_.allFinite() || !weights_.allFinite() || !inverse_.allFinite()) {
    throw OverflowError("direct-mode state left double range at n = " +
                            std::to_string(absorbed_) + "; use rescaled mode",
                        absorbed_);
  }
}

void IncrementalState::step_rescaled(const Eigen::VectorXd& a, const Eigen::VectorXd& s) {
  if (mode_ != UpdateMode::kRescaled) throw InvalidArgument("step_rescaled on a direct state");
  check_step_input(a, s);

  const double theta = scheme_.theta();
  const double mu = 1.0 / (theta * theta);
  const Eigen::VectorXd u = inverse_ * a;
  const double denom = mu + a.dot(u);
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw NumericalError("rescaled rank-1 denominator is not positive", absorbed_);
  }
  inverse_.noalias() -= (1.0 / denom) * (u * u.transpose());
  inverse_ /= mu;
  symmetrize(inverse_);
  moment_ *= mu;
  moment_.noalias() += a * s.transpose();
  weights_.noalias() = inverse_ * moment_;
  ++absorbed_;

  if (!inverse_.allFinite() || !weights_.allFinite()) {
    throw NumericalError("rescaled state became non-finite", absorbed_);
  }
}

Prediction IncrementalState::predict(const Eigen::VectorXd& extended) const {
  return predict_extended(extended, weights_);
}

bool IncrementalState::inverse_is_spd(double tol) const {
  const double norm = inverse_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) return false;
  if ((inverse_ - inverse_.transpose()).norm() > tol * norm) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(inverse_);
  return llt.info() == Eigen::Success;
}

}  // namespace lite_rvfl
