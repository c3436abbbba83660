#pragma once

#include <Eigen/Core>

#include "stve/dataset.hpp"

namespace stve {

enum class EigenMethod {
  /// Householder tridiagonalisation followed by implicit QL (Eigen).
  kTridiagonalQl,
  /// Cyclic Jacobi rotations. Slower, but accurate to high relative precision
  /// for the small eigenvalues of positive definite matrices.
  kCyclicJacobi,
};

/// Eigen-decomposition of a Gram matrix, eigenvalues in descending order.
///
/// `gamma_sq(i)` is the squared singular value γ_i² of the system operator and
/// column i of `basis` is the matching left singular vector.
struct GramSpectrum {
  Eigen::VectorXd gamma_sq;
  Eigen::MatrixXd basis;

  Index size() const noexcept { return gamma_sq.size(); }
};

/// Throws InvalidArgument for an asymmetric or non-finite input, and
/// NumericalError when the solver fails, a residual exceeds 1e-8·‖G‖, or an
/// eigenvalue is not strictly positive.
GramSpectrum eigendecompose(const Eigen::MatrixXd& gram,
                            EigenMethod method = EigenMethod::kTridiagonalQl);

/// Squared singular values of the pseudo-inverse, χ_i² = 1/γ_{T+1−i}²,
/// in descending order.
Eigen::VectorXd inverse_spectrum(const GramSpectrum& spectrum);

struct QuadraticForms {
  /// ‖R y‖²
  double r_y_sq = 0.0;
  /// ‖R' y‖², R' keeping the p largest χ (the p smallest γ).
  double rp_y_sq = 0.0;
};

QuadraticForms quadratic_forms(const GramSpectrum& spectrum, const Eigen::VectorXd& y, Index p);

struct SpectralFunctionals {
  double hs_r_sq = 0.0;   ///< ‖R‖²_HS = Σ γ_i⁻²
  double hs_rp_sq = 0.0;  ///< ‖R'‖²_HS, sum over the p smallest γ
  Index p = 0;
  /// (‖R'‖²_HS / p) / (‖R‖²_HS / T'). Always >= 1.
  double gap_ratio = 1.0;
};

SpectralFunctionals functionals(const GramSpectrum& spectrum, Index p);

namespace detail {

/// Cyclic Jacobi eigensolver for a symmetric matrix. Eigenvalues are returned
/// unsorted; `vectors` holds the matching columns. Returns false when the
/// off-diagonal mass does not vanish within `max_sweeps`.
bool jacobi_eigen(const Eigen::MatrixXd& a, Eigen::VectorXd& values, Eigen::MatrixXd& vectors,
                  int max_sweeps = 60);

}  // namespace detail
}  // namespace stve
