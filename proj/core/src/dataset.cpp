#include "stve/dataset.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "stve/errors.hpp"

namespace stve {
namespace {

std::vector<std::int64_t> natural_times(Index count) {
  std::vector<std::int64_t> times(static_cast<std::size_t>(count));
  std::iota(times.begin(), times.end(), std::int64_t{1});
  return times;
}

}  // namespace

RegressionDataset::RegressionDataset(Eigen::MatrixXd u, Eigen::VectorXd y)
    : u_(std::move(u)), y_(std::move(y)) {
  observed_.assign(static_cast<std::size_t>(y_.size()), true);
  time_ = natural_times(y_.size());
  validate();
}

RegressionDataset::RegressionDataset(Eigen::MatrixXd u, Eigen::VectorXd y,
                                     std::vector<bool> observed)
    : u_(std::move(u)), y_(std::move(y)), observed_(std::move(observed)) {
  time_ = natural_times(static_cast<Index>(observed_.size()));
  validate();
}

RegressionDataset::RegressionDataset(Eigen::MatrixXd u, Eigen::VectorXd y,
                                     std::vector<bool> observed,
                                     std::vector<std::int64_t> time_index)
    : u_(std::move(u)), y_(std::move(y)), observed_(std::move(observed)),
      time_(std::move(time_index)) {
  validate();
}

void RegressionDataset::validate() {
  const Index rows = u_.rows();
  if (rows < 2) throw InvalidArgument("dataset needs at least 2 rows, got " + std::to_string(rows));
  if (u_.cols() < 1) throw InvalidArgument("observation vectors must have dimension >= 1");
  if (y_.size() != rows || static_cast<Index>(observed_.size()) != rows ||
      static_cast<Index>(time_.size()) != rows) {
    throw InvalidArgument("dataset components disagree on the number of rows");
  }
  if (!u_.allFinite()) throw InvalidArgument("observation vectors contain non-finite entries");

  effective_ = 0;
  for (Index t = 0; t < rows; ++t) {
    const auto st = static_cast<std::size_t>(t);
    if (time_[st] < 1) throw InvalidArgument("time indices must be >= 1");
    if (t > 0 && time_[st] <= time_[st - 1]) {
      throw InvalidArgument("time indices must be strictly increasing");
    }
    if (observed_[st]) {
      if (!std::isfinite(y_[t])) {
        throw InvalidArgument("observation at row " + std::to_string(t + 1) +
                              " is marked observed but is not finite");
      }
      ++effective_;
    } else {
      y_[t] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  if (effective_ < 2) {
    throw InvalidArgument("dataset needs at least 2 observed rows, got " +
                          std::to_string(effective_));
  }
}

RegressionDataset RegressionDataset::with_y(Eigen::VectorXd y) const {
  if (y.size() != horizon()) throw InvalidArgument("with_y: length mismatch");
  for (Index t = 0; t < horizon(); ++t) {
    if (!is_observed(t)) y[t] = std::numeric_limits<double>::quiet_NaN();
  }
  return RegressionDataset(u_, std::move(y), observed_, time_);
}

RegressionDataset RegressionDataset::slice(Index begin, Index end) const {
  if (begin < 0 || end > horizon() || end - begin < 2) {
    throw InvalidArgument("slice: invalid row range");
  }
  const Index len = end - begin;
  const std::int64_t offset = time_[static_cast<std::size_t>(begin)] - 1;
  std::vector<bool> mask(observed_.begin() + begin, observed_.begin() + end);
  std::vector<std::int64_t> times(time_.begin() + begin, time_.begin() + end);
  for (auto& t : times) t -= offset;
  return RegressionDataset(u_.middleRows(begin, len), y_.segment(begin, len), std::move(mask),
                           std::move(times));
}

Eigen::VectorXd RegressionDataset::observed_y() const {
  Eigen::VectorXd out(effective_);
  Index k = 0;
  for (Index t = 0; t < horizon(); ++t) {
    if (is_observed(t)) out[k++] = y_[t];
  }
  return out;
}

NormSummary summarize_norms(const RegressionDataset& data) {
  NormSummary s;
  s.u_min_norm = std::numeric_limits<double>::infinity();
  s.u_tilde_min = std::numeric_limits<double>::infinity();
  for (Index t = 0; t < data.horizon(); ++t) {
    if (!data.is_observed(t)) continue;
    const double norm = data.u().row(t).norm();
    const double tilde = std::abs(data.u().row(t).sum());
    s.u_min_norm = std::min(s.u_min_norm, norm);
    s.u_max_norm = std::max(s.u_max_norm, norm);
    s.u_tilde_min = std::min(s.u_tilde_min, tilde);
    s.u_tilde_max = std::max(s.u_tilde_max, tilde);
  }
  return s;
}

}  // namespace stve
