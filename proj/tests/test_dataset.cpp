#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "stve/dataset.hpp"
#include "stve/errors.hpp"

using namespace stve;

namespace {
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}

TEST(Dataset, FullyObservedDefaults) {
  RegressionDataset d(Eigen::MatrixXd::Ones(3, 2), Eigen::VectorXd::LinSpaced(3, 1, 3));
  EXPECT_EQ(d.horizon(), 3);
  EXPECT_EQ(d.dim(), 2);
  EXPECT_EQ(d.effective_horizon(), 3);
  EXPECT_TRUE(d.fully_observed());
  EXPECT_EQ(d.time_index(), (std::vector<std::int64_t>{1, 2, 3}));
}

TEST(Dataset, MissingRowsStoredAsNaN) {
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 4;
  RegressionDataset d(Eigen::MatrixXd::Ones(4, 1), y, {true, false, true, true});
  EXPECT_EQ(d.effective_horizon(), 3);
  EXPECT_TRUE(std::isnan(d.y()[1]));
  EXPECT_EQ(d.observed_y(), Eigen::Vector3d(1, 3, 4));
}

TEST(Dataset, RejectsInvalidInput) {
  EXPECT_THROW(RegressionDataset(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Ones(1)),
               InvalidArgument);
  EXPECT_THROW(RegressionDataset(Eigen::MatrixXd::Ones(3, 1), Eigen::VectorXd::Ones(2)),
               InvalidArgument);
  Eigen::MatrixXd bad_u = Eigen::MatrixXd::Ones(3, 1);
  bad_u(1, 0) = kNaN;
  EXPECT_THROW(RegressionDataset(bad_u, Eigen::VectorXd::Ones(3)), InvalidArgument);
  Eigen::VectorXd bad_y = Eigen::VectorXd::Ones(3);
  bad_y[0] = kNaN;
  EXPECT_THROW(RegressionDataset(Eigen::MatrixXd::Ones(3, 1), bad_y), InvalidArgument);
  // NaN is fine where the row is unobserved.
  EXPECT_NO_THROW(RegressionDataset(Eigen::MatrixXd::Ones(3, 1), bad_y, {false, true, true}));
  EXPECT_THROW(RegressionDataset(Eigen::MatrixXd::Ones(3, 1), Eigen::VectorXd::Ones(3),
                                 {false, false, true}),
               InvalidArgument);
  EXPECT_THROW(RegressionDataset(Eigen::MatrixXd::Ones(3, 1), Eigen::VectorXd::Ones(3),
                                 {true, true, true}, {1, 3, 3}),
               InvalidArgument);
  EXPECT_THROW(RegressionDataset(Eigen::MatrixXd::Ones(3, 1), Eigen::VectorXd::Ones(3),
                                 {true, true, true}, {0, 1, 2}),
               InvalidArgument);
}

TEST(Dataset, SliceRebasesTime) {
  Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(6, 1, 6);
  RegressionDataset d(Eigen::MatrixXd::Ones(6, 1), y, std::vector<bool>(6, true),
                      {1, 2, 4, 5, 7, 8});
  RegressionDataset s = d.slice(2, 5);
  EXPECT_EQ(s.horizon(), 3);
  EXPECT_EQ(s.time_index(), (std::vector<std::int64_t>{1, 2, 4}));
  EXPECT_DOUBLE_EQ(s.y()[0], 3.0);
  EXPECT_THROW(d.slice(3, 2), InvalidArgument);
}

TEST(Dataset, WithYKeepsDesign) {
  RegressionDataset d(Eigen::MatrixXd::Ones(3, 1), Eigen::VectorXd::Zero(3), {true, false, true},
                      {1, 5, 9});
  RegressionDataset e = d.with_y(Eigen::Vector3d(7, 8, 9));
  EXPECT_EQ(e.time_index(), d.time_index());
  EXPECT_EQ(e.observed(), d.observed());
  EXPECT_TRUE(std::isnan(e.y()[1]));
  EXPECT_DOUBLE_EQ(e.y()[2], 9.0);
}

TEST(Dataset, NormSummaryOverObservedRows) {
  Eigen::MatrixXd u(3, 2);
  u << 3, 4,   //
      1, -1,   //
      10, 10;  // unobserved, ignored
  RegressionDataset d(u, Eigen::Vector3d(0, 0, 0), {true, true, false});
  NormSummary s = summarize_norms(d);
  EXPECT_DOUBLE_EQ(s.u_max_norm, 5.0);
  EXPECT_DOUBLE_EQ(s.u_min_norm, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(s.u_tilde_min, 0.0);
  EXPECT_DOUBLE_EQ(s.u_tilde_max, 7.0);
  EXPECT_LE(s.u_tilde_max, std::sqrt(2.0) * s.u_max_norm);
}
