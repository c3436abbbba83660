#pragma once

#include <vector>

#include <Eigen/Core>

#include "stve/dataset.hpp"

namespace stve {

enum class CovarianceUpdate {
  /// Exact posterior covariance P − P u uᵀ P / s with P = C + σ²·I.
  kRankOne,
  /// (η² / s) · P. Coincides with kRankOne when n = 1; for n > 1 it shrinks
  /// every direction, not only the observed one.
  kIsotropicScaling,
};

struct KalmanConfig {
  double sigma2 = 1.0;  ///< process noise variance σ²
  double eta2 = 1.0;    ///< observation noise variance η², must be > 0
  /// Initial state mean; empty means zero.
  Eigen::VectorXd x0;
  /// Initial covariance C_0 = c0_scale · I.
  double c0_scale = 1e4;
  CovarianceUpdate update = CovarianceUpdate::kRankOne;

  void validate(Index dim) const;
};

/// Filtered states and diagnostics. Row t of `states` is x̄_t, the posterior
/// mean after observation t; `predictions[t]` = <x̄_{t−1}, u_t> is the
/// one-step forecast made before seeing y_t.
struct KalmanTrajectory {
  Eigen::MatrixXd states;
  std::vector<Eigen::MatrixXd> covariances;
  Eigen::VectorXd predictions;
  /// y_t − prediction; NaN at unobserved rows.
  Eigen::VectorXd innovations;
  /// Gaussian log-likelihood of the observed innovations.
  double loglik = 0.0;
};

/// Kalman filter for X_{t+1} = X_t + h_t, y_t = <X_t, u_t> + z_t. Rows whose
/// time index jumps by k accumulate k·σ² of process noise. Unobserved rows
/// only propagate (C += σ²·I, state unchanged).
///
/// Throws NumericalError if the recursion produces non-finite values.
KalmanTrajectory kalman_filter(const RegressionDataset& data, const KalmanConfig& config);

/// Log-likelihood only, without storing the trajectory.
double kalman_loglik(const RegressionDataset& data, const KalmanConfig& config);

/// Forecast <state, u_next>.
double predict_next(const Eigen::VectorXd& state, const Eigen::VectorXd& u_next);

}  // namespace stve
