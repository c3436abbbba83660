#include "stve/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>

#include "stve/errors.hpp"
#include "stve/kalman.hpp"

namespace stve {
namespace {

constexpr double kDivergenceNorm = 1e12;

struct GradientOutcome {
  OnlineGradientRun run;
  bool diverged = false;
};

template <class RateAt>
GradientOutcome run_gradient(const RegressionDataset& data, RateAt&& rate_at,
                             const Eigen::VectorXd& x0, bool record) {
  const Index n = data.dim();
  if (x0.size() != 0 && x0.size() != n) throw InvalidArgument("x0 has the wrong dimension");
  Eigen::VectorXd x = x0.size() == n ? x0 : Eigen::VectorXd::Zero(n);
  GradientOutcome out;
  if (record) {
    out.run.states.resize(data.horizon(), n);
    out.run.predictions.resize(data.horizon());
  }
  for (Index t = 0; t < data.horizon(); ++t) {
    const auto u = data.u().row(t).transpose();
    const double prediction = x.dot(u);
    if (data.is_observed(t)) {
      const double error = data.y()[t] - prediction;
      out.run.sse += error * error;
      x += (rate_at(t) * error) * u;
      if (!(x.norm() <= kDivergenceNorm)) {
        out.diverged = true;
        out.run.sse = std::numeric_limits<double>::infinity();
        return out;
      }
    }
    if (record) {
      out.run.states.row(t) = x.transpose();
      out.run.predictions[t] = prediction;
    }
  }
  return out;
}

}  // namespace

OnlineGradientRun online_gradient_run(const RegressionDataset& data,
                                      const OnlineGradientConfig& config) {
  if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate)) {
    throw InvalidArgument("learning rate must be finite and >= 0");
  }
  auto outcome = run_gradient(
      data, [&](Index) { return config.learning_rate; }, config.x0, true);
  if (outcome.diverged) throw NumericalError("online gradient diverged (state norm > 1e12)");
  return std::move(outcome.run);
}

OnlineGradientRun online_gradient_run(const RegressionDataset& data, std::span<const double> rates,
                                      const Eigen::VectorXd& x0) {
  if (static_cast<Index>(rates.size()) != data.horizon()) {
    throw InvalidArgument("online_gradient_run: need one rate per row");
  }
  auto outcome = run_gradient(
      data, [&](Index t) { return rates[static_cast<std::size_t>(t)]; }, x0, true);
  if (outcome.diverged) throw NumericalError("online gradient diverged (state norm > 1e12)");
  return std::move(outcome.run);
}

double online_gradient_sse(const RegressionDataset& data, double learning_rate,
                           const Eigen::VectorXd& x0) {
  return run_gradient(data, [&](Index) { return learning_rate; }, x0, false).run.sse;
}

double tune_learning_rate(const RegressionDataset& data, double max_rate,
                          const Eigen::VectorXd& x0) {
  if (!(max_rate > 0.0) || !std::isfinite(max_rate)) {
    throw InvalidArgument("tune_learning_rate: max_rate must be positive");
  }
  constexpr int kSeeds = 8;
  constexpr double kWidth = 1e-6;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto sse = [&](double a) { return online_gradient_sse(data, a, x0); };

  std::array<double, kSeeds + 2> grid{};
  std::array<double, kSeeds + 2> values{};
  for (int k = 0; k < kSeeds + 2; ++k) {
    grid[static_cast<std::size_t>(k)] = max_rate * k / (kSeeds + 1);
    values[static_cast<std::size_t>(k)] = sse(grid[static_cast<std::size_t>(k)]);
  }

  double best_rate = grid[0];
  double best_value = values[0];
  auto consider = [&](double a, double v) {
    if (v < best_value) {
      best_value = v;
      best_rate = a;
    }
  };
  for (int k = 1; k < kSeeds + 2; ++k) consider(grid[static_cast<std::size_t>(k)], values[static_cast<std::size_t>(k)]);

  // Golden section on the bracket around every interior seed.
  for (int k = 1; k <= kSeeds; ++k) {
    double lo = grid[static_cast<std::size_t>(k - 1)];
    double hi = grid[static_cast<std::size_t>(k + 1)];
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = sse(a);
    double fb = sse(b);
    while (hi - lo > kWidth) {
      if (fa <= fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - inv_phi * (hi - lo);
        fa = sse(a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + inv_phi * (hi - lo);
        fb = sse(b);
      }
    }
    consider(a, fa);
    consider(b, fb);
  }
  return best_rate;
}

Eigen::VectorXd stationary_regression(const RegressionDataset& data) {
  const Index rows = data.effective_horizon();
  const Index n = data.dim();
  if (rows < n) {
    throw NumericalError("stationary_regression: " + std::to_string(rows) +
                         " observed rows for " + std::to_string(n) + " coefficients");
  }
  Eigen::MatrixXd design(rows, n);
  Eigen::VectorXd target(rows);
  Index k = 0;
  for (Index t = 0; t < data.horizon(); ++t) {
    if (!data.is_observed(t)) continue;
    design.row(k) = data.u().row(t);
    target[k] = data.y()[t];
    ++k;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < n) throw NumericalError("stationary_regression: rank-deficient design");
  return qr.solve(target);
}

MleResult mle_fit(const RegressionDataset& data, double sigma2_init, double eta2_init,
                  const MleOptions& options) {
  if (!(sigma2_init > 0.0) || !(eta2_init > 0.0)) {
    throw InvalidArgument("mle_fit: initial variances must be positive");
  }
  using Point = Eigen::Vector2d;
  auto negloglik = [&](const Point& logs) {
    KalmanConfig config;
    config.sigma2 = std::exp(logs[0]);
    config.eta2 = std::exp(logs[1]);
    config.c0_scale = options.c0_scale;
    if (!std::isfinite(config.sigma2) || !std::isfinite(config.eta2) || !(config.eta2 > 0.0)) {
      return std::numeric_limits<double>::infinity();
    }
    try {
      return -kalman_loglik(data, config);
    } catch (const NumericalError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  std::array<Point, 3> simplex{Point(std::log(sigma2_init), std::log(eta2_init)), Point(), Point()};
  simplex[1] = simplex[0] + Point(options.initial_step, 0.0);
  simplex[2] = simplex[0] + Point(0.0, options.initial_step);
  std::array<double, 3> f{};
  for (std::size_t i = 0; i < 3; ++i) f[i] = negloglik(simplex[i]);

  MleResult result;
  result.initial_loglik = -f[0];
  auto order = [&] {
    std::array<std::size_t, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return f[a] < f[b]; });
    std::array<Point, 3> s{simplex[idx[0]], simplex[idx[1]], simplex[idx[2]]};
    std::array<double, 3> v{f[idx[0]], f[idx[1]], f[idx[2]]};
    simplex = s;
    f = v;
  };
  auto diameter = [&] {
    return std::max({(simplex[0] - simplex[1]).norm(), (simplex[0] - simplex[2]).norm(),
                     (simplex[1] - simplex[2]).norm()});
  };

  order();
  while (result.iterations < options.max_iterations) {
    if (diameter() < options.tolerance) {
      result.converged = true;
      break;
    }
    ++result.iterations;
    const Point centroid = 0.5 * (simplex[0] + simplex[1]);
    const Point reflected = centroid + (centroid - simplex[2]);
    const double fr = negloglik(reflected);
    if (fr < f[0]) {
      const Point expanded = centroid + 2.0 * (centroid - simplex[2]);
      const double fe = negloglik(expanded);
      if (fe < fr) {
        simplex[2] = expanded;
        f[2] = fe;
      } else {
        simplex[2] = reflected;
        f[2] = fr;
      }
    } else if (fr < f[1]) {
      simplex[2] = reflected;
      f[2] = fr;
    } else {
      const bool outside = fr < f[2];
      const Point contracted = outside ? centroid + 0.5 * (reflected - centroid)
                                       : centroid + 0.5 * (simplex[2] - centroid);
      const double fc = negloglik(contracted);
      if (fc < (outside ? fr : f[2])) {
        simplex[2] = contracted;
        f[2] = fc;
      } else {
        for (std::size_t i = 1; i < 3; ++i) {
          simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
          f[i] = negloglik(simplex[i]);
        }
      }
    }
    order();
    result.trace.push_back(-f[0]);
  }
  if (!result.converged && diameter() < options.tolerance) result.converged = true;

  result.sigma2 = std::exp(simplex[0][0]);
  result.eta2 = std::exp(simplex[0][1]);
  result.loglik = -f[0];
  return result;
}

}  // namespace stve
