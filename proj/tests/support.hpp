#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "stve/dataset.hpp"
#include "stve/operators.hpp"
#include "stve/simulator.hpp"

namespace stve::testing {

inline Eigen::MatrixXd gaussian_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

inline Eigen::VectorXd gaussian_vector(Index size, Rng& rng) {
  return gaussian_matrix(size, 1, rng).col(0);
}

inline RegressionDataset random_dataset(Index T, Index n, Rng& rng) {
  return RegressionDataset(gaussian_matrix(T, n, rng), gaussian_vector(T, rng));
}

inline RegressionDataset ones_dataset(Index T) {
  return RegressionDataset(Eigen::MatrixXd::Ones(T, 1), Eigen::VectorXd::Zero(T));
}

/// ‖R y‖², ‖R' y‖², ‖R‖²_HS, ‖R'‖²_HS from a dense SVD of the materialized
/// system operator, R' keeping the p largest singular values of R.
struct DenseOracle {
  double r_y_sq, rp_y_sq, hs_r_sq, hs_rp_sq;
  Eigen::VectorXd singular_values;  // of O_u S, descending
};

inline DenseOracle dense_oracle(const RegressionDataset& data, Index p) {
  const Eigen::MatrixXd A = materialize_system_operator(data);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  const Index T = A.rows();
  const Eigen::VectorXd y = data.observed_y();
  // R = V diag(1/s) Uᵀ restricted to the T nonzero singular values.
  const Eigen::VectorXd c = svd.matrixU().transpose() * y;
  DenseOracle o{0, 0, 0, 0, s};
  for (Index i = 0; i < T; ++i) {
    const double w = 1.0 / (s[i] * s[i]);
    o.r_y_sq += c[i] * c[i] * w;
    o.hs_r_sq += w;
    if (i >= T - p) {
      o.rp_y_sq += c[i] * c[i] * w;
      o.hs_rp_sq += w;
    }
  }
  return o;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace stve::testing
