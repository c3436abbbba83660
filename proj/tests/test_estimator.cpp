#include <cmath>

#include <gtest/gtest.h>

#include "stve/errors.hpp"
#include "stve/estimator.hpp"
#include "support.hpp"

using namespace stve;
using stve::testing::gaussian_matrix;
using stve::testing::gaussian_vector;
using stve::testing::rel_diff;

namespace {

// u_t = e_t / sqrt(t) makes the Gram matrix the identity.
RegressionDataset flat_dataset(Index T, Rng& rng) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(T, T);
  for (Index t = 0; t < T; ++t) u(t, t) = 1.0 / std::sqrt(static_cast<double>(t + 1));
  return RegressionDataset(u, gaussian_vector(T, rng));
}

RegressionDataset simulated(Index T, Index n, double sigma2, double eta2, std::uint64_t seed) {
  SimulationConfig c;
  c.horizon = T;
  c.dim = n;
  c.sigma2 = sigma2;
  c.eta2 = eta2;
  c.seed = seed;
  return simulate(c).data;
}

}  // namespace

TEST(TruncationRank, CeilAndClamp) {
  EXPECT_EQ(truncation_rank(100, 0.25), 25);
  EXPECT_EQ(truncation_rank(101, 0.25), 26);
  EXPECT_EQ(truncation_rank(3, 0.01), 1);
  EXPECT_EQ(minimum_effective_horizon(0.25), 4);
  EXPECT_EQ(minimum_effective_horizon(0.1), 10);
}

TEST(StveConfig, Validation) {
  StveConfig c;
  EXPECT_NO_THROW(c.validate());
  c.alpha = 1.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.alpha = 0.25;
  c.gap_warn_threshold = 0.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Estimate, ZeroObservationsGiveZero) {
  Rng rng(1);
  RegressionDataset d(gaussian_matrix(40, 3, rng), Eigen::VectorXd::Zero(40));
  const StveEstimate e = estimate(d);
  EXPECT_EQ(e.sigma2, 0.0);
  EXPECT_EQ(e.eta2, 0.0);
}

TEST(Estimate, RawSolutionSatisfiesBothEquations) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RegressionDataset d = simulated(120, 3, 0.5, 2.0, seed);
    const StveEstimate e = estimate(d);
    const double T = static_cast<double>(e.effective_horizon);
    const double p = static_cast<double>(e.functionals.p);
    const double lhs1 = e.forms.r_y_sq / T;
    const double rhs1 = e.sigma2_raw + e.functionals.hs_r_sq / T * e.eta2_raw;
    const double lhs2 = e.forms.rp_y_sq / p;
    const double rhs2 = e.sigma2_raw + e.functionals.hs_rp_sq / p * e.eta2_raw;
    EXPECT_LE(rel_diff(lhs1, rhs1), 1e-10);
    EXPECT_LE(rel_diff(lhs2, rhs2), 1e-10);
  }
}

TEST(Estimate, ScaleCovariance) {
  const RegressionDataset d = simulated(150, 2, 1.0, 1.0, 3);
  const StveEstimate a = estimate(d);
  const StveEstimate b = estimate(d.with_y(3.0 * d.y()));
  EXPECT_LE(rel_diff(b.sigma2_raw, 9.0 * a.sigma2_raw), 1e-10);
  EXPECT_LE(rel_diff(b.eta2_raw, 9.0 * a.eta2_raw), 1e-10);
}

TEST(Estimate, MissingRowsEqualReducedSystem) {
  Rng rng(17);
  const RegressionDataset d = simulated(60, 2, 0.5, 1.0, 17);
  std::vector<bool> mask(60, true);
  std::vector<Index> keep;
  for (Index t = 0; t < 60; ++t) {
    mask[static_cast<std::size_t>(t)] = (rng() % 5) != 0;
    if (mask[static_cast<std::size_t>(t)]) keep.push_back(t);
  }
  const RegressionDataset masked(d.u(), d.y(), mask);
  const Index k = static_cast<Index>(keep.size());
  Eigen::MatrixXd u(k, 2);
  Eigen::VectorXd y(k);
  std::vector<std::int64_t> times;
  for (Index i = 0; i < k; ++i) {
    u.row(i) = d.u().row(keep[static_cast<std::size_t>(i)]);
    y[i] = d.y()[keep[static_cast<std::size_t>(i)]];
    times.push_back(keep[static_cast<std::size_t>(i)] + 1);
  }
  const RegressionDataset reduced(u, y, std::vector<bool>(static_cast<std::size_t>(k), true),
                                  times);
  const StveEstimate a = estimate(masked);
  const StveEstimate b = estimate(reduced);
  EXPECT_EQ(a.effective_horizon, k);
  EXPECT_LE(rel_diff(a.sigma2_raw, b.sigma2_raw), 1e-10);
  EXPECT_LE(rel_diff(a.eta2_raw, b.eta2_raw), 1e-10);
}

TEST(Estimate, ClampingBranches) {
  bool saw_negative_eta = false, saw_negative_sigma = false;
  StveConfig raw;
  raw.clamp_nonnegative = false;
  for (std::uint64_t seed = 0; seed < 400 && !(saw_negative_eta && saw_negative_sigma); ++seed) {
    const RegressionDataset d = simulated(16, 1, 0.3, 0.3, seed);
    const StveEstimate e = estimate(d);
    const double T = static_cast<double>(e.effective_horizon);
    EXPECT_GE(e.sigma2, 0.0);
    EXPECT_GE(e.eta2, 0.0);
    const StveEstimate r = estimate(d, raw);
    EXPECT_EQ(r.sigma2, r.sigma2_raw);
    EXPECT_EQ(r.eta2, r.eta2_raw);
    if (e.eta2_raw < 0.0) {
      saw_negative_eta = true;
      EXPECT_EQ(e.eta2, 0.0);
      EXPECT_NEAR(e.sigma2, e.forms.r_y_sq / T, 1e-12 * e.forms.r_y_sq);
    } else if (e.sigma2_raw < 0.0) {
      saw_negative_sigma = true;
      EXPECT_EQ(e.sigma2, 0.0);
      EXPECT_NEAR(e.eta2, e.forms.r_y_sq / e.functionals.hs_r_sq, 1e-12 * e.forms.r_y_sq);
    } else {
      EXPECT_EQ(e.sigma2, e.sigma2_raw);
      EXPECT_EQ(e.eta2, e.eta2_raw);
    }
  }
  EXPECT_TRUE(saw_negative_eta);
  EXPECT_TRUE(saw_negative_sigma);
}

TEST(Estimate, FlatSpectrumIsSingular) {
  Rng rng(2);
  EXPECT_THROW(estimate(flat_dataset(8, rng)), NumericalError);
}

TEST(Estimate, TooFewRows) {
  Rng rng(2);
  RegressionDataset d(gaussian_matrix(3, 1, rng), gaussian_vector(3, rng));
  EXPECT_THROW(estimate(d), InvalidArgument);
  StveConfig c;
  c.alpha = 0.1;
  RegressionDataset e(gaussian_matrix(9, 1, rng), gaussian_vector(9, rng));
  EXPECT_THROW(estimate(e, c), InvalidArgument);
}

TEST(Estimate, JacobiPathAgrees) {
  const RegressionDataset d = simulated(80, 3, 0.5, 2.0, 5);
  StveConfig c;
  c.eigen_method = EigenMethod::kCyclicJacobi;
  const StveEstimate a = estimate(d);
  const StveEstimate b = estimate(d, c);
  EXPECT_LE(rel_diff(a.sigma2_raw, b.sigma2_raw), 1e-8);
  EXPECT_LE(rel_diff(a.eta2_raw, b.eta2_raw), 1e-8);
}

TEST(Estimate, HsNormUpperBound) {
  Rng rng(30);
  for (int trial = 0; trial < 10; ++trial) {
    const Index T = 10 + static_cast<Index>(rng() % 100);
    RegressionDataset d(gaussian_matrix(T, 2, rng), gaussian_vector(T, rng));
    const StveEstimate e = estimate(d);
    const double u_min = summarize_norms(d).u_min_norm;
    EXPECT_LE(e.functionals.hs_r_sq, 4.0 * static_cast<double>(T) / (u_min * u_min));
  }
}

TEST(Estimate, NoiselessRandomWalkOnOnes) {
  // n = 1, u ≡ 1, σ² = 1, η² = 0. The raw estimates are unbiased, so their
  // replication means should sit within a few standard errors of (1, 0).
  const Index T = 200, reps = 200;
  SimulationConfig c;
  c.horizon = T;
  c.dim = 1;
  c.sigma2 = 1.0;
  c.eta2 = 0.0;
  c.inputs = ConstantInputs{Eigen::VectorXd::Ones(1)};
  const PreparedSystem system = PreparedSystem::prepare(simulate(c).data);
  double ms = 0, me = 0, vs = 0, ve = 0;
  for (Index r = 0; r < reps; ++r) {
    c.seed = derive_seed(77, static_cast<std::uint64_t>(r));
    const StveEstimate e = system.solve(simulate(c).data.y());
    ms += e.sigma2_raw;
    me += e.eta2_raw;
    vs += e.sigma2_raw * e.sigma2_raw;
    ve += e.eta2_raw * e.eta2_raw;
  }
  const double R = static_cast<double>(reps);
  ms /= R;
  me /= R;
  const double se_s = std::sqrt((vs / R - ms * ms) / (R - 1));
  const double se_e = std::sqrt((ve / R - me * me) / (R - 1));
  EXPECT_LE(std::abs(ms - 1.0), 4 * se_s);
  EXPECT_LE(std::abs(me), 4 * se_e);
}

TEST(MomentCheck, SingleTermExpectations) {
  Rng rng(40);
  RegressionDataset d(gaussian_matrix(100, 2, rng), gaussian_vector(100, rng));
  const MomentCheckReport only_process =
      moment_equation_check(d, {NoiseFamily::kGaussian, 1.0}, {NoiseFamily::kGaussian, 0.0}, 300, 1);
  EXPECT_DOUBLE_EQ(only_process.expected_r, 1.0);
  EXPECT_TRUE(only_process.within(4.0));
  const MomentCheckReport only_obs =
      moment_equation_check(d, {NoiseFamily::kGaussian, 0.0}, {NoiseFamily::kGaussian, 1.0}, 300, 2);
  const StveEstimate e = estimate(d);
  EXPECT_LE(rel_diff(only_obs.expected_r,
                     e.functionals.hs_r_sq / static_cast<double>(e.effective_horizon)),
            1e-12);
  EXPECT_TRUE(only_obs.within(4.0));
  EXPECT_THROW(moment_equation_check(d, {}, {}, 50, 1), InvalidArgument);
}

TEST(MomentCheck, BothTermsMatched) {
  Rng rng(41);
  RegressionDataset d(gaussian_matrix(150, 3, rng), gaussian_vector(150, rng));
  const MomentCheckReport r =
      moment_equation_check(d, {NoiseFamily::kGaussian, 0.5}, {NoiseFamily::kGaussian, 2.0}, 300, 3);
  EXPECT_TRUE(r.within(4.0)) << r.mean_r << " vs " << r.expected_r << ", " << r.mean_rp
                             << " vs " << r.expected_rp;
}

TEST(GapDiagnostic, Examples) {
  const GapDiagnostic ones = gap_diagnostic(stve::testing::ones_dataset(200));
  EXPECT_GT(ones.norm_bound, 0.0);
  // χ² = 4 sin²θ on a uniform grid, so the top-quarter average over the mean tends to 1 + 2√2/π.
  EXPECT_NEAR(ones.gap_ratio, 1.0 + 2.0 * std::sqrt(2.0) / std::numbers::pi, 5e-3);
  EXPECT_TRUE(ones.satisfied);

  Eigen::MatrixXd u = Eigen::MatrixXd::Ones(20, 2);
  u(4, 1) = -1.0;  // Σ_j u_{5,j} = 0
  EXPECT_EQ(gap_diagnostic(RegressionDataset(u, Eigen::VectorXd::Zero(20))).norm_bound, 0.0);

  Rng rng(3);
  const GapDiagnostic flat = gap_diagnostic(flat_dataset(8, rng));
  EXPECT_NEAR(flat.gap_ratio, 1.0, 1e-12);
  EXPECT_FALSE(flat.satisfied);
}

TEST(Estimate, WeakGapWarns) {
  // A large threshold turns any realistic gap into a warning.
  StveConfig c;
  c.gap_warn_threshold = 100.0;
  const StveEstimate e = estimate(simulated(60, 2, 1.0, 1.0, 9), c);
  ASSERT_EQ(e.warnings.size(), 1u);
  EXPECT_NE(e.warnings[0].find("gap"), std::string::npos);
}

TEST(MomentCheck, ZeroVarianceFormUsesRoundingFloor) {
  // n = 1, η² = 0, ±1 increments: RY = h, so ‖RY‖²/T is exactly 1 in every replication.
  Rng rng(8);
  RegressionDataset d(gaussian_matrix(120, 1, rng), Eigen::VectorXd::Zero(120));
  const MomentCheckReport r = moment_equation_check(d, {NoiseFamily::kRademacher, 1.0},
                                                    {NoiseFamily::kRademacher, 0.0}, 100, 4);
  EXPECT_NEAR(r.mean_r, 1.0, 1e-9);
  EXPECT_LT(r.stderr_r, 1e-9);
  EXPECT_TRUE(r.within(4.0));
}
