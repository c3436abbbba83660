#include "stve/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "stve/errors.hpp"

namespace stve {
namespace {

void sort_descending(Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
  const Index n = values.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values[a] > values[b]; });
  Eigen::VectorXd sorted_values(n);
  Eigen::MatrixXd sorted_vectors(vectors.rows(), n);
  for (Index i = 0; i < n; ++i) {
    sorted_values[i] = values[order[static_cast<std::size_t>(i)]];
    sorted_vectors.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted_vectors);
}

void check_p(const GramSpectrum& spectrum, Index p) {
  if (p < 1 || p > spectrum.size()) {
    throw InvalidArgument("truncation rank p=" + std::to_string(p) + " outside [1, " +
                          std::to_string(spectrum.size()) + "]");
  }
}

}  // namespace

GramSpectrum eigendecompose(const Eigen::MatrixXd& gram, EigenMethod method) {
  if (gram.rows() != gram.cols() || gram.rows() < 1) {
    throw InvalidArgument("eigendecompose: matrix must be square and non-empty");
  }
  if (!gram.allFinite()) throw InvalidArgument("eigendecompose: non-finite entries");
  const double scale = gram.cwiseAbs().maxCoeff();
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0)) {
    throw InvalidArgument("eigendecompose: matrix is not symmetric");
  }

  GramSpectrum out;
  if (method == EigenMethod::kTridiagonalQl) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("eigendecompose: symmetric eigensolver did not converge");
    }
    // Eigen returns ascending order.
    out.gamma_sq = solver.eigenvalues().reverse();
    out.basis = solver.eigenvectors().rowwise().reverse();
  } else {
    if (!detail::jacobi_eigen(gram, out.gamma_sq, out.basis)) {
      throw NumericalError("eigendecompose: Jacobi iteration did not converge");
    }
    sort_descending(out.gamma_sq, out.basis);
  }

  const double norm = std::max(std::abs(out.gamma_sq[0]), std::abs(out.gamma_sq.tail(1)[0]));
  Eigen::MatrixXd residual;
  residual.noalias() = gram * out.basis;
  residual -= out.basis * out.gamma_sq.asDiagonal();
  const Eigen::VectorXd residual_norms = residual.colwise().norm().transpose();
  Index worst = 0;
  const double max_residual = residual_norms.maxCoeff(&worst);
  if (max_residual > 1e-8 * norm) {
    throw NumericalError("eigendecompose: residual " + std::to_string(max_residual) +
                         " exceeds tolerance for eigenpair " + std::to_string(worst + 1));
  }
  if (!(out.gamma_sq.tail(1)[0] > 0.0)) {
    throw NumericalError(
        "eigendecompose: non-positive eigenvalue; the system operator is rank deficient "
        "(a zero observation vector was not filtered?)");
  }
  return out;
}

Eigen::VectorXd inverse_spectrum(const GramSpectrum& spectrum) {
  return spectrum.gamma_sq.reverse().cwiseInverse();
}

QuadraticForms quadratic_forms(const GramSpectrum& spectrum, const Eigen::VectorXd& y, Index p) {
  check_p(spectrum, p);
  if (y.size() != spectrum.size()) {
    throw InvalidArgument("quadratic_forms: y has length " + std::to_string(y.size()) +
                          ", spectrum has " + std::to_string(spectrum.size()));
  }
  const Eigen::VectorXd weighted =
      (spectrum.basis.transpose() * y).array().square() / spectrum.gamma_sq.array();
  QuadraticForms q;
  q.r_y_sq = weighted.sum();
  q.rp_y_sq = weighted.tail(p).sum();
  return q;
}

SpectralFunctionals functionals(const GramSpectrum& spectrum, Index p) {
  check_p(spectrum, p);
  const Eigen::VectorXd inv = spectrum.gamma_sq.cwiseInverse();
  SpectralFunctionals f;
  f.p = p;
  f.hs_r_sq = inv.sum();
  f.hs_rp_sq = inv.tail(p).sum();
  f.gap_ratio = (f.hs_rp_sq / static_cast<double>(p)) /
                (f.hs_r_sq / static_cast<double>(spectrum.size()));
  return f;
}

}  // namespace stve
