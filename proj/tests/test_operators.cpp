#include <cmath>

#include <gtest/gtest.h>

#include "stve/errors.hpp"
#include "stve/operators.hpp"
#include "support.hpp"

using namespace stve;
using stve::testing::gaussian_matrix;
using stve::testing::gaussian_vector;

TEST(Summation, PrefixSums) {
  EXPECT_EQ(apply_summation(Eigen::Vector3d(1, 1, 1)), Eigen::Vector3d(1, 2, 3));
  EXPECT_EQ(apply_summation(Eigen::Vector3d(0, 0, 0)), Eigen::Vector3d(0, 0, 0));
  EXPECT_EQ(apply_summation(Eigen::Vector3d(2, -1, 3)), Eigen::Vector3d(2, 1, 4));
  EXPECT_THROW(apply_summation(Eigen::VectorXd()), InvalidArgument);
  EXPECT_THROW(apply_summation(Eigen::Vector2d(1, std::nan(""))), InvalidArgument);
}

TEST(Summation, FirstDifferenceInverts) {
  Rng rng(3);
  const Eigen::VectorXd h = gaussian_vector(50, rng);
  const Eigen::VectorXd x = apply_summation(h);
  Eigen::VectorXd back(50);
  back[0] = x[0];
  for (Index t = 1; t < 50; ++t) back[t] = x[t] - x[t - 1];
  EXPECT_LE((back - h).cwiseAbs().maxCoeff(), 1e-12 * h.cwiseAbs().maxCoeff());
}

TEST(Summation, BlockVersionActsPerCoordinate) {
  Eigen::VectorXd h(6);
  h << 1, 10, 2, 20, 3, 30;
  Eigen::VectorXd expected(6);
  expected << 1, 10, 3, 30, 6, 60;
  EXPECT_EQ(apply_block_summation(h, 2), expected);
  EXPECT_THROW(apply_block_summation(h, 4), InvalidArgument);
}

TEST(Observation, Examples) {
  RegressionDataset a(Eigen::MatrixXd::Ones(3, 1), Eigen::VectorXd::Zero(3));
  EXPECT_EQ(apply_observation(a, Eigen::Vector3d(1, 2, 3)), Eigen::Vector3d(1, 2, 3));

  RegressionDataset b(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2));
  EXPECT_EQ(apply_observation(b, Eigen::Vector4d(3, 4, 5, 6)), Eigen::Vector2d(3, 6));

  RegressionDataset c(Eigen::MatrixXd::Constant(2, 1, 2.0), Eigen::VectorXd::Zero(2));
  EXPECT_EQ(apply_observation(c, Eigen::Vector2d(1, 1)), Eigen::Vector2d(2, 2));
  EXPECT_THROW(apply_observation(c, Eigen::Vector3d(1, 1, 1)), InvalidArgument);
}

TEST(Gram, HandExamples) {
  RegressionDataset a(Eigen::MatrixXd::Ones(2, 1), Eigen::VectorXd::Zero(2));
  Eigen::Matrix2d ga;
  ga << 1, 1, 1, 2;
  EXPECT_EQ(gram_matrix(a), Eigen::MatrixXd(ga));

  RegressionDataset b(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2));
  Eigen::Matrix2d gb;
  gb << 1, 0, 0, 2;
  EXPECT_EQ(gram_matrix(b), Eigen::MatrixXd(gb));
}

TEST(Gram, ZeroRowMustBeFilteredFirst) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Ones(3, 1);
  u(1, 0) = 0.0;
  RegressionDataset d(u, Eigen::VectorXd::Zero(3));
  EXPECT_THROW(gram_matrix(d), InvalidArgument);
  EXPECT_NO_THROW(gram_matrix(filter_rows(d).data));
}

TEST(Gram, MatchesDenseProduct) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Index T = 2 + static_cast<Index>(rng() % 11);
    const Index n = 1 + static_cast<Index>(rng() % 4);
    RegressionDataset d(gaussian_matrix(T, n, rng), gaussian_vector(T, rng));
    const Eigen::MatrixXd A = materialize_system_operator(d);
    const Eigen::MatrixXd dense = A * A.transpose();
    const Eigen::MatrixXd G = gram_matrix(d);
    EXPECT_LE((G - dense).cwiseAbs().maxCoeff(), 1e-12 * dense.cwiseAbs().maxCoeff());
  }
}

TEST(Gram, MaskedIsPrincipalSubmatrix) {
  Rng rng(5);
  const Index T = 9;
  const Eigen::MatrixXd u = gaussian_matrix(T, 3, rng);
  const Eigen::VectorXd y = gaussian_vector(T, rng);
  std::vector<bool> mask(T, true);
  mask[2] = mask[3] = mask[7] = false;
  const Eigen::MatrixXd full = gram_matrix(RegressionDataset(u, y));
  const Eigen::MatrixXd masked = gram_matrix(filter_rows(RegressionDataset(u, y, mask)).data);
  const std::vector<Index> keep = {0, 1, 4, 5, 6, 8};
  ASSERT_EQ(masked.rows(), 6);
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j)
      EXPECT_EQ(masked(static_cast<Index>(i), static_cast<Index>(j)), full(keep[i], keep[j]));
}

TEST(HsNorm, Examples) {
  EXPECT_DOUBLE_EQ(system_hs_norm_squared(RegressionDataset(Eigen::MatrixXd::Ones(3, 1),
                                                            Eigen::VectorXd::Zero(3))),
                   6.0);
  RegressionDataset two(Eigen::MatrixXd::Ones(2, 1), Eigen::VectorXd::Zero(2));
  EXPECT_DOUBLE_EQ(system_hs_norm_squared(two), 3.0);
  EXPECT_DOUBLE_EQ(gram_matrix(two).trace(), 3.0);
}

TEST(HsNorm, TraceAndBounds) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Index T = 5 + static_cast<Index>(rng() % 60);
    const Index n = 1 + static_cast<Index>(rng() % 5);
    RegressionDataset d(gaussian_matrix(T, n, rng), gaussian_vector(T, rng));
    const double hs = system_hs_norm_squared(d);
    EXPECT_LE(stve::testing::rel_diff(hs, gram_matrix(d).trace()), 1e-12);
    const NormSummary s = summarize_norms(d);
    const double TT = static_cast<double>(T);
    EXPECT_GE(hs, 0.25 * s.u_min_norm * s.u_min_norm * TT * TT);
    // Σ t ≤ T(T+1)/2; the T² form of this bound fails already for u ≡ 1.
    EXPECT_LE(hs, 0.5 * s.u_max_norm * s.u_max_norm * TT * (TT + 1));
  }
}

TEST(DifferenceSpectrum, ClosedForm) {
  const Eigen::VectorXd two = difference_spectrum(2);
  ASSERT_EQ(two.size(), 1);
  EXPECT_NEAR(two[0], std::sqrt(2.0), 1e-15);
  const Eigen::VectorXd three = difference_spectrum(3);
  ASSERT_EQ(three.size(), 2);
  EXPECT_NEAR(three[0], std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(three[1], 1.0, 1e-15);
  for (Index T : {2, 10, 1000}) EXPECT_LT(difference_spectrum(T).maxCoeff(), 2.0);
  EXPECT_THROW(difference_spectrum(1), InvalidArgument);
}

TEST(DifferenceSpectrum, MatchesDenseSvd) {
  for (Index T : {4, 9, 16}) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(T - 1, T);
    for (Index t = 0; t + 1 < T; ++t) {
      D(t, t) = -1;
      D(t, t + 1) = 1;
    }
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(D).singularValues();
    EXPECT_LE((sv - difference_spectrum(T)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(FilterRows, Examples) {
  Rng rng(1);
  RegressionDataset d(gaussian_matrix(5, 2, rng), gaussian_vector(5, rng));
  FilterResult same = filter_rows(d, 0.0);
  EXPECT_TRUE(same.dropped.empty());
  EXPECT_EQ(same.data.u(), d.u());

  RegressionDataset m(d.u(), d.y(), {true, true, false, true, true});
  FilterResult f = filter_rows(m);
  EXPECT_EQ(f.data.horizon(), 4);
  EXPECT_EQ(f.data.time_index(), (std::vector<std::int64_t>{1, 2, 4, 5}));
  EXPECT_EQ(f.dropped, (std::vector<std::int64_t>{3}));

  RegressionDataset tiny(Eigen::MatrixXd::Constant(4, 1, 1e-10), Eigen::VectorXd::Zero(4));
  EXPECT_THROW(filter_rows(tiny), InvalidArgument);
}

TEST(Materialize, RefusesLargeHorizon) {
  RegressionDataset d(Eigen::MatrixXd::Ones(65, 1), Eigen::VectorXd::Zero(65));
  EXPECT_THROW(materialize_system_operator(d), InvalidArgument);
}
