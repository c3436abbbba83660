#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace stve {

using Index = Eigen::Index;

/// Observation vectors u_t (rows of `u`), scalar observations y_t and a
/// missingness mask for one trajectory of the random-walk regression model.
///
/// Every row also carries its time index (1-based, strictly increasing). Rows
/// removed by filtering keep their original index, so the random-walk
/// variance of a retained row does not change when earlier rows disappear.
/// Unobserved entries of `y` are stored as NaN.
class RegressionDataset {
 public:
  /// Fully observed, time indices 1..T.
  RegressionDataset(Eigen::MatrixXd u, Eigen::VectorXd y);
  RegressionDataset(Eigen::MatrixXd u, Eigen::VectorXd y, std::vector<bool> observed);
  RegressionDataset(Eigen::MatrixXd u, Eigen::VectorXd y, std::vector<bool> observed,
                    std::vector<std::int64_t> time_index);

  Index horizon() const noexcept { return u_.rows(); }
  Index dim() const noexcept { return u_.cols(); }
  /// Number of observed rows.
  Index effective_horizon() const noexcept { return effective_; }

  const Eigen::MatrixXd& u() const noexcept { return u_; }
  const Eigen::VectorXd& y() const noexcept { return y_; }
  const std::vector<bool>& observed() const noexcept { return observed_; }
  const std::vector<std::int64_t>& time_index() const noexcept { return time_; }

  bool is_observed(Index row) const { return observed_[static_cast<std::size_t>(row)]; }
  bool fully_observed() const noexcept { return effective_ == horizon(); }

  /// Same design (u, mask, time) with new observations. Entries at unobserved
  /// rows are ignored and stored as NaN.
  RegressionDataset with_y(Eigen::VectorXd y) const;

  /// Rows [begin, end) with time indices rebased so the first row is at 1.
  RegressionDataset slice(Index begin, Index end) const;

  /// Observed entries of y, in row order.
  Eigen::VectorXd observed_y() const;

 private:
  void validate();

  Eigen::MatrixXd u_;
  Eigen::VectorXd y_;
  std::vector<bool> observed_;
  std::vector<std::int64_t> time_;
  Index effective_ = 0;
};

/// Norm statistics over the observed rows of a dataset.
struct NormSummary {
  double u_min_norm = 0.0;
  double u_max_norm = 0.0;
  /// min / max over rows of |sum_j u_{t,j}|.
  double u_tilde_min = 0.0;
  double u_tilde_max = 0.0;
};

NormSummary summarize_norms(const RegressionDataset& data);

}  // namespace stve
