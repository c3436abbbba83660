#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "stve/dataset.hpp"

namespace stve {

/// Parses a dataset in CSV form:
///
///     # optional comment lines
///     t,y,u_1,...,u_n
///     1,0.25,1.0,-0.3
///     2,,1.0,0.1        <- empty (or nan/NaN) y marks a missing observation
///
/// The `t` column is optional; when present it must be strictly increasing
/// integers and becomes the row time index (rebased so the first row is 1).
/// Throws ParseError with the offending line number.
RegressionDataset read_csv(std::istream& in, const std::string& source = "<stream>");
RegressionDataset read_csv(const std::filesystem::path& path);

/// Writes the dataset with a t column. `comment`, when non-empty, becomes a
/// leading "# ..." line. Values are written in shortest round-trip form.
void write_csv(std::ostream& out, const RegressionDataset& data, std::string_view comment = {});
void write_csv(const std::filesystem::path& path, const RegressionDataset& data,
               std::string_view comment = {});

/// Reads a headered numeric table (comment lines allowed) into a matrix; used
/// for observation-vector files.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Row t = (1, v_t, v_t²).
Eigen::MatrixXd quadratic_features(const Eigen::VectorXd& series);

/// Affine standardisation fitted on a training split. Feature columns that are
/// constant on the training rows are left untouched.
struct NormalizationParams {
  double y_mean = 0.0;
  double y_std = 1.0;
  Eigen::VectorXd feature_mean;
  Eigen::VectorXd feature_std;
  std::vector<bool> constant_column;

  RegressionDataset apply(const RegressionDataset& data) const;
  Eigen::VectorXd normalize_y(const Eigen::VectorXd& y) const;
  Eigen::VectorXd denormalize_y(const Eigen::VectorXd& y) const;
};

/// Means and population standard deviations over the observed rows (y) and
/// all rows (features). Throws InvalidArgument if y has zero variance.
NormalizationParams fit_normalization(const RegressionDataset& train);

/// Number of leading rows in the training split: floor(fraction · T).
Index split_point(Index horizon, double train_fraction);

struct SplitResult {
  RegressionDataset train;
  RegressionDataset test;
  NormalizationParams params;
};

/// Splits at split_point, fits normalisation on the training rows and applies
/// it to both halves.
SplitResult split_and_normalize(const RegressionDataset& data, double train_fraction);

}  // namespace stve
