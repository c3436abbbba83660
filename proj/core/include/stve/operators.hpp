#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "stve/dataset.hpp"

namespace stve {

/// Rows with ‖u_t‖ at or below this are treated as empty by default.
inline constexpr double kDefaultMinRowNorm = 1e-8;

/// Prefix sums: out_t = h_1 + ... + h_t.
Eigen::VectorXd apply_summation(const Eigen::VectorXd& h);

/// Block prefix sums over stacked n-vectors: block t of the output is the sum
/// of blocks 1..t of `h`. Requires h.size() to be a multiple of n.
Eigen::VectorXd apply_block_summation(const Eigen::VectorXd& h, Index n);

/// (O_u x)_k = <u_k, block k of x> for the observed rows k of `data`;
/// `x` stacks one n-block per observed row.
Eigen::VectorXd apply_observation(const RegressionDataset& data, const Eigen::VectorXd& x);

/// Gram matrix of the system operator restricted to the observed rows:
/// G(s, t) = min(τ_s, τ_t) · <u_s, u_t>, τ being the original time index.
///
/// Requires a row-filtered dataset: every row observed and ‖u_t‖ > 0.
Eigen::MatrixXd gram_matrix(const RegressionDataset& data);

/// Squared Hilbert-Schmidt norm of the system operator: Σ τ_t ‖u_t‖² over
/// observed rows. Equals trace(gram_matrix(data)).
double system_hs_norm_squared(const RegressionDataset& data);

/// Closed-form singular values 2 sin(π(T−l)/(2T)), l = 1..T−1, of the
/// first-difference operator on R^T, in descending order.
Eigen::VectorXd difference_spectrum(Index horizon);

struct FilterResult {
  RegressionDataset data;
  /// Original time indices of the rows that were removed.
  std::vector<std::int64_t> dropped;
};

/// Removes unobserved rows and rows with ‖u_t‖ <= min_norm. Retained rows
/// keep their time index. Throws InvalidArgument when fewer than 2 remain.
FilterResult filter_rows(const RegressionDataset& data, double min_norm = kDefaultMinRowNorm);

/// Dense T'×(τ_max·n) matrix of the system operator O_u S restricted to the
/// observed rows. Debug/oracle path only; refuses τ_max > 64.
Eigen::MatrixXd materialize_system_operator(const RegressionDataset& data);

}  // namespace stve
