#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "stve/dataset.hpp"

namespace stve {

struct OnlineGradientConfig {
  double learning_rate = 0.0;
  /// Initial state; empty means zero.
  Eigen::VectorXd x0;
};

struct OnlineGradientRun {
  /// Row t: state after processing row t.
  Eigen::MatrixXd states;
  /// predictions[t] = <x̄_{t−1}, u_t>, made before the update at t.
  Eigen::VectorXd predictions;
  /// Sum of squared prediction errors over observed rows.
  double sse = 0.0;
};

/// Online gradient forecaster x̄ ← x̄ + α·u_t·(y_t − <x̄, u_t>), skipping
/// unobserved rows. Throws NumericalError once a state norm exceeds 1e12.
OnlineGradientRun online_gradient_run(const RegressionDataset& data,
                                      const OnlineGradientConfig& config);

/// Same recursion with a per-row rate (rates.size() == T).
OnlineGradientRun online_gradient_run(const RegressionDataset& data, std::span<const double> rates,
                                      const Eigen::VectorXd& x0 = {});

/// SSE of the online gradient forecaster, +inf when it diverges.
double online_gradient_sse(const RegressionDataset& data, double learning_rate,
                           const Eigen::VectorXd& x0 = {});

/// Learning rate in [0, max_rate] minimising the forecaster's SSE:
/// golden-section refinement (to width 1e-6) around each of 8 equispaced
/// seeds, best result kept.
double tune_learning_rate(const RegressionDataset& data, double max_rate = 2.0,
                          const Eigen::VectorXd& x0 = {});

/// Ordinary least squares over the observed rows (column-pivoted QR).
/// Throws NumericalError when the design is rank deficient.
Eigen::VectorXd stationary_regression(const RegressionDataset& data);

struct MleOptions {
  /// Stop once the simplex diameter in (log σ², log η²) drops below this.
  double tolerance = 1e-8;
  int max_iterations = 500;
  /// Initial simplex edge in log space.
  double initial_step = 1.0;
  double c0_scale = 1e4;
};

struct MleResult {
  double sigma2 = 0.0;
  double eta2 = 0.0;
  double loglik = 0.0;
  double initial_loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Best log-likelihood after each iteration (nondecreasing).
  std::vector<double> trace;
};

/// Maximises the Kalman log-likelihood over (log σ², log η²) with a
/// Nelder-Mead simplex. Non-convergence is reported, not thrown.
MleResult mle_fit(const RegressionDataset& data, double sigma2_init, double eta2_init,
                  const MleOptions& options = {});

}  // namespace stve
