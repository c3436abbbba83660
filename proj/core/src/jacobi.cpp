#include <cmath>

#include "stve/spectral.hpp"

namespace stve::detail {

// Cyclic-by-row Jacobi with the Rutishauser update (Numerical Recipes style
// accumulation of the diagonal), threshold skipping during early sweeps.
bool jacobi_eigen(const Eigen::MatrixXd& input, Eigen::VectorXd& values,
                  Eigen::MatrixXd& vectors, int max_sweeps) {
  const Index n = input.rows();
  Eigen::MatrixXd a = input;
  vectors = Eigen::MatrixXd::Identity(n, n);
  values = a.diagonal();
  Eigen::VectorXd b = values;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) off += std::abs(a(p, q));
    }
    if (off == 0.0) return true;

    const double threshold = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double g = 100.0 * std::abs(a(p, q));
        if (sweep > 3 && std::abs(values[p]) + g == std::abs(values[p]) &&
            std::abs(values[q]) + g == std::abs(values[q])) {
          a(p, q) = 0.0;
          continue;
        }
        if (std::abs(a(p, q)) <= threshold) continue;

        double h = values[q] - values[p];
        double t;
        if (std::abs(h) + g == std::abs(h)) {
          t = a(p, q) / h;
        } else {
          const double theta = 0.5 * h / a(p, q);
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        h = t * a(p, q);
        z[p] -= h;
        z[q] += h;
        values[p] -= h;
        values[q] += h;
        a(p, q) = 0.0;

        auto rotate = [&](double& x, double& y) {
          const double gx = x;
          const double hy = y;
          x = gx - s * (hy + gx * tau);
          y = hy + s * (gx - hy * tau);
        };
        for (Index j = 0; j < p; ++j) rotate(a(j, p), a(j, q));
        for (Index j = p + 1; j < q; ++j) rotate(a(p, j), a(j, q));
        for (Index j = q + 1; j < n; ++j) rotate(a(p, j), a(q, j));
        for (Index j = 0; j < n; ++j) rotate(vectors(j, p), vectors(j, q));
      }
    }
    b += z;
    values = b;
    z.setZero();
  }
  return false;
}

}  // namespace stve::detail
