#include "stve/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stve/errors.hpp"

namespace stve {
namespace {

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite input");
}

std::vector<Index> observed_rows(const RegressionDataset& data) {
  std::vector<Index> rows;
  rows.reserve(static_cast<std::size_t>(data.effective_horizon()));
  for (Index t = 0; t < data.horizon(); ++t) {
    if (data.is_observed(t)) rows.push_back(t);
  }
  return rows;
}

}  // namespace

Eigen::VectorXd apply_summation(const Eigen::VectorXd& h) {
  if (h.size() < 1) throw InvalidArgument("apply_summation: empty input");
  require_finite(h, "apply_summation");
  Eigen::VectorXd out(h.size());
  double acc = 0.0;
  for (Index i = 0; i < h.size(); ++i) {
    acc += h[i];
    out[i] = acc;
  }
  return out;
}

Eigen::VectorXd apply_block_summation(const Eigen::VectorXd& h, Index n) {
  if (n < 1 || h.size() < n || h.size() % n != 0) {
    throw InvalidArgument("apply_block_summation: length is not a positive multiple of n");
  }
  require_finite(h, "apply_block_summation");
  Eigen::VectorXd out(h.size());
  out.head(n) = h.head(n);
  for (Index b = 1; b < h.size() / n; ++b) {
    out.segment(b * n, n) = out.segment((b - 1) * n, n) + h.segment(b * n, n);
  }
  return out;
}

Eigen::VectorXd apply_observation(const RegressionDataset& data, const Eigen::VectorXd& x) {
  const Index n = data.dim();
  const auto rows = observed_rows(data);
  const auto count = static_cast<Index>(rows.size());
  if (x.size() != count * n) {
    throw InvalidArgument("apply_observation: expected x of length " +
                          std::to_string(count * n) + ", got " + std::to_string(x.size()));
  }
  Eigen::VectorXd out(count);
  for (Index k = 0; k < count; ++k) {
    out[k] = data.u().row(rows[static_cast<std::size_t>(k)]).dot(x.segment(k * n, n));
  }
  return out;
}

Eigen::MatrixXd gram_matrix(const RegressionDataset& data) {
  if (!data.fully_observed()) {
    throw InvalidArgument("gram_matrix: dataset has unobserved rows; apply filter_rows first");
  }
  const Index rows = data.horizon();
  for (Index t = 0; t < rows; ++t) {
    if (!(data.u().row(t).squaredNorm() > 0.0)) {
      throw InvalidArgument("gram_matrix: row " + std::to_string(t + 1) +
                            " has a zero observation vector; apply filter_rows first");
    }
  }
  const Eigen::MatrixXd inner = data.u() * data.u().transpose();
  const auto& times = data.time_index();
  Eigen::MatrixXd gram(rows, rows);
  for (Index j = 0; j < rows; ++j) {
    for (Index i = j; i < rows; ++i) {
      const auto tau = static_cast<double>(times[static_cast<std::size_t>(j)]);
      gram(i, j) = tau * inner(i, j);
      gram(j, i) = gram(i, j);
    }
  }
  return gram;
}

double system_hs_norm_squared(const RegressionDataset& data) {
  double total = 0.0;
  for (Index t = 0; t < data.horizon(); ++t) {
    if (!data.is_observed(t)) continue;
    total += static_cast<double>(data.time_index()[static_cast<std::size_t>(t)]) *
             data.u().row(t).squaredNorm();
  }
  return total;
}

Eigen::VectorXd difference_spectrum(Index horizon) {
  if (horizon < 2) throw InvalidArgument("difference_spectrum: horizon must be >= 2");
  const double T = static_cast<double>(horizon);
  Eigen::VectorXd values(horizon - 1);
  for (Index l = 1; l < horizon; ++l) {
    values[l - 1] = 2.0 * std::sin(std::numbers::pi * (T - static_cast<double>(l)) / (2.0 * T));
  }
  return values;
}

FilterResult filter_rows(const RegressionDataset& data, double min_norm) {
  if (!(min_norm >= 0.0)) throw InvalidArgument("filter_rows: min_norm must be >= 0");
  std::vector<Index> keep;
  std::vector<std::int64_t> dropped;
  for (Index t = 0; t < data.horizon(); ++t) {
    const auto tau = data.time_index()[static_cast<std::size_t>(t)];
    if (data.is_observed(t) && data.u().row(t).norm() > min_norm) {
      keep.push_back(t);
    } else {
      dropped.push_back(tau);
    }
  }
  if (keep.size() < 2) {
    throw InvalidArgument("filter_rows: only " + std::to_string(keep.size()) +
                          " usable rows remain; need at least 2");
  }
  if (dropped.empty()) return {data, {}};

  const auto count = static_cast<Index>(keep.size());
  Eigen::MatrixXd u(count, data.dim());
  Eigen::VectorXd y(count);
  std::vector<std::int64_t> times(keep.size());
  for (Index k = 0; k < count; ++k) {
    const Index t = keep[static_cast<std::size_t>(k)];
    u.row(k) = data.u().row(t);
    y[k] = data.y()[t];
    times[static_cast<std::size_t>(k)] = data.time_index()[static_cast<std::size_t>(t)];
  }
  return {RegressionDataset(std::move(u), std::move(y), std::vector<bool>(keep.size(), true),
                            std::move(times)),
          std::move(dropped)};
}

Eigen::MatrixXd materialize_system_operator(const RegressionDataset& data) {
  const auto last = data.time_index().back();
  if (last > 64) throw InvalidArgument("materialize_system_operator: horizon above 64");
  const Index n = data.dim();
  const auto rows = observed_rows(data);
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(static_cast<Index>(rows.size()),
                                             static_cast<Index>(last) * n);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Index t = rows[k];
    const auto tau = static_cast<Index>(data.time_index()[static_cast<std::size_t>(t)]);
    for (Index block = 0; block < tau; ++block) {
      op.block(static_cast<Index>(k), block * n, 1, n) = data.u().row(t);
    }
  }
  return op;
}

}  // namespace stve
