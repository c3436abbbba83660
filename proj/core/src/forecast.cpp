#include "stve/forecast.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "stve/baselines.hpp"
#include "stve/dataio.hpp"
#include "stve/errors.hpp"
#include "stve/kalman.hpp"

namespace stve {

Forecaster parse_forecaster(std::string_view name) {
  if (name == "kalman") return Forecaster::kKalman;
  if (name == "og") return Forecaster::kOnlineGradient;
  if (name == "stationary") return Forecaster::kStationary;
  throw InvalidArgument("unknown forecaster '" + std::string(name) + "'");
}

std::string_view to_string(Forecaster method) {
  switch (method) {
    case Forecaster::kKalman: return "kalman";
    case Forecaster::kOnlineGradient: return "og";
    case Forecaster::kStationary: return "stationary";
  }
  return "unknown";
}

ForecastRun run_forecast(const RegressionDataset& data, Forecaster method,
                         const ForecastOptions& options) {
  ForecastRun run;
  run.method = method;
  run.split = split_point(data.horizon(), options.train_fraction);
  if (run.split < 2 || data.horizon() - run.split < 1) {
    throw InvalidArgument("run_forecast: train split too small");
  }

  std::optional<NormalizationParams> params;
  if (options.normalize) params = fit_normalization(data.slice(0, run.split));
  const RegressionDataset work = params ? params->apply(data) : data;
  // Keep original time indices inside the training split: it is a prefix.
  const RegressionDataset train = work.slice(0, run.split);

  Eigen::VectorXd predictions(data.horizon());
  switch (method) {
    case Forecaster::kKalman: {
      KalmanConfig config;
      config.c0_scale = options.c0_scale;
      if (options.variances) {
        std::tie(config.sigma2, config.eta2) = *options.variances;
      } else {
        const StveEstimate est = estimate(train, options.stve);
        config.sigma2 = est.sigma2;
        config.eta2 = est.eta2;
        run.warnings = est.warnings;
      }
      if (!(config.eta2 > 0.0)) {
        // The filter divides by the innovation variance; keep it positive.
        config.eta2 = 1e-8;
        run.warnings.push_back("eta2 estimate is 0; using 1e-8 in the filter");
      }
      run.parameters = {{"sigma2", config.sigma2}, {"eta2", config.eta2}};
      predictions = kalman_filter(work, config).predictions;
      break;
    }
    case Forecaster::kOnlineGradient: {
      const double rate = tune_learning_rate(train, options.max_learning_rate);
      run.parameters = {{"learning_rate", rate}};
      predictions = online_gradient_run(work, OnlineGradientConfig{rate, {}}).predictions;
      break;
    }
    case Forecaster::kStationary: {
      const Eigen::VectorXd coef = stationary_regression(train);
      for (Index j = 0; j < coef.size(); ++j) {
        run.parameters.emplace_back("x_" + std::to_string(j + 1), coef[j]);
      }
      predictions = work.u() * coef;
      break;
    }
  }
  if (params) predictions = params->denormalize_y(predictions);

  run.predictions = predictions;
  run.squared_errors.resize(data.horizon());
  double train_sum = 0.0, test_sum = 0.0;
  Index train_count = 0;
  for (Index t = 0; t < data.horizon(); ++t) {
    if (!data.is_observed(t)) {
      run.squared_errors[t] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double e = data.y()[t] - predictions[t];
    run.squared_errors[t] = e * e;
    if (t < run.split) {
      train_sum += e * e;
      ++train_count;
    } else {
      test_sum += e * e;
      ++run.test_count;
    }
  }
  run.train_mse = train_count > 0 ? train_sum / static_cast<double>(train_count)
                                  : std::numeric_limits<double>::quiet_NaN();
  run.test_mse = run.test_count > 0 ? test_sum / static_cast<double>(run.test_count)
                                    : std::numeric_limits<double>::quiet_NaN();
  return run;
}

Eigen::VectorXd moving_average(const Eigen::VectorXd& values, Index window) {
  if (window < 1) throw InvalidArgument("moving_average: window must be >= 1");
  Eigen::VectorXd out(values.size());
  std::deque<double> recent;
  double sum = 0.0;
  for (Index t = 0; t < values.size(); ++t) {
    if (std::isfinite(values[t])) {
      recent.push_back(values[t]);
      sum += values[t];
      if (static_cast<Index>(recent.size()) > window) {
        sum -= recent.front();
        recent.pop_front();
      }
    }
    out[t] = recent.empty() ? std::numeric_limits<double>::quiet_NaN()
                            : sum / static_cast<double>(recent.size());
  }
  return out;
}

}  // namespace stve
