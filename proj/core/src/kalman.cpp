#include "stve/kalman.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "stve/errors.hpp"

namespace stve {

void KalmanConfig::validate(Index dim) const {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw InvalidArgument("sigma2 must be >= 0");
  if (!(eta2 > 0.0) || !std::isfinite(eta2)) throw InvalidArgument("eta2 must be > 0");
  if (!(c0_scale > 0.0) || !std::isfinite(c0_scale)) {
    throw InvalidArgument("c0_scale must be positive and finite");
  }
  if (x0.size() != 0 && x0.size() != dim) {
    throw InvalidArgument("x0 has dimension " + std::to_string(x0.size()) + ", expected " +
                          std::to_string(dim));
  }
  if (!x0.allFinite()) throw InvalidArgument("x0 must be finite");
}

namespace {

template <class Visitor>
double run_filter(const RegressionDataset& data, const KalmanConfig& config, Visitor&& visit) {
  const Index n = data.dim();
  config.validate(n);
  Eigen::VectorXd x = config.x0.size() == n ? config.x0 : Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd cov = config.c0_scale * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd prior(n, n);
  Eigen::VectorXd pu(n);
  double loglik = 0.0;
  std::int64_t now = 0;

  for (Index t = 0; t < data.horizon(); ++t) {
    const auto tau = data.time_index()[static_cast<std::size_t>(t)];
    const auto u = data.u().row(t).transpose();
    prior = cov;
    prior.diagonal().array() += config.sigma2 * static_cast<double>(tau - now);
    now = tau;
    const double prediction = x.dot(u);

    if (!data.is_observed(t)) {
      cov = prior;
      visit(t, x, cov, prediction, std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    pu.noalias() = prior * u;
    const double s = u.dot(pu) + config.eta2;
    const double innovation = data.y()[t] - prediction;
    if (config.update == CovarianceUpdate::kRankOne) {
      cov = prior;
      cov.noalias() -= (pu / s) * pu.transpose();
      cov = 0.5 * (cov + cov.transpose());
    } else {
      cov = (config.eta2 / s) * prior;
    }
    // Gain C_{t}·u/η², which equals P u / s for the exact posterior.
    x += (cov * u) * (innovation / config.eta2);
    loglik -= 0.5 * (std::log(2.0 * std::numbers::pi * s) + innovation * innovation / s);

    if (!std::isfinite(loglik) || !x.allFinite()) {
      throw NumericalError("kalman_filter: non-finite state at row " + std::to_string(t + 1));
    }
    visit(t, x, cov, prediction, innovation);
  }
  return loglik;
}

}  // namespace

KalmanTrajectory kalman_filter(const RegressionDataset& data, const KalmanConfig& config) {
  KalmanTrajectory out;
  const Index T = data.horizon();
  out.states.resize(T, data.dim());
  out.covariances.reserve(static_cast<std::size_t>(T));
  out.predictions.resize(T);
  out.innovations.resize(T);
  out.loglik = run_filter(data, config,
                          [&](Index t, const Eigen::VectorXd& x, const Eigen::MatrixXd& cov,
                              double prediction, double innovation) {
                            out.states.row(t) = x.transpose();
                            out.covariances.push_back(cov);
                            out.predictions[t] = prediction;
                            out.innovations[t] = innovation;
                          });
  return out;
}

double kalman_loglik(const RegressionDataset& data, const KalmanConfig& config) {
  return run_filter(data, config,
                    [](Index, const Eigen::VectorXd&, const Eigen::MatrixXd&, double, double) {});
}

double predict_next(const Eigen::VectorXd& state, const Eigen::VectorXd& u_next) {
  if (state.size() != u_next.size()) {
    throw InvalidArgument("predict_next: state has dimension " + std::to_string(state.size()) +
                          ", u has " + std::to_string(u_next.size()));
  }
  if (!u_next.allFinite()) throw InvalidArgument("predict_next: u must be finite");
  return state.dot(u_next);
}

}  // namespace stve
