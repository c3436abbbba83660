#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "stve/dataset.hpp"
#include "stve/estimator.hpp"

namespace stve {

enum class Forecaster { kKalman, kOnlineGradient, kStationary };

Forecaster parse_forecaster(std::string_view name);
std::string_view to_string(Forecaster method);

struct ForecastOptions {
  double train_fraction = 0.5;
  /// Fixed (σ², η²) for the Kalman forecaster; when absent they are
  /// estimated with STVE on the training split.
  std::optional<std::pair<double, double>> variances;
  StveConfig stve;
  /// Upper end of the online-gradient learning-rate search.
  double max_learning_rate = 2.0;
  double c0_scale = 1e4;
  /// Standardise y and the non-constant features on the training split before
  /// fitting. Predictions are reported in the original units either way.
  bool normalize = false;
};

/// One-step-ahead forecasts over the whole series. All parameters are fitted
/// on the first `split` rows; adaptive methods then run through the series.
struct ForecastRun {
  Forecaster method = Forecaster::kKalman;
  Index split = 0;
  Eigen::VectorXd predictions;
  /// (y_t − ŷ_t)², NaN at unobserved rows.
  Eigen::VectorXd squared_errors;
  /// Mean squared error over observed rows of each split.
  double train_mse = 0.0;
  double test_mse = 0.0;
  Index test_count = 0;
  /// Fitted parameters (sigma2/eta2, learning_rate, or coefficients).
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<std::string> warnings;
};

ForecastRun run_forecast(const RegressionDataset& data, Forecaster method,
                         const ForecastOptions& options = {});

/// Trailing moving average over the last `window` finite entries up to and
/// including each position; NaN until the first finite entry.
Eigen::VectorXd moving_average(const Eigen::VectorXd& values, Index window);

}  // namespace stve
