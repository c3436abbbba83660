#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "stve/dataset.hpp"
#include "stve/operators.hpp"
#include "stve/simulator.hpp"
#include "stve/spectral.hpp"

namespace stve {

struct StveConfig {
  /// Truncation fraction; p = ceil(alpha · T').
  double alpha = 0.25;
  double min_row_norm = kDefaultMinRowNorm;
  /// A warning is attached when gap_ratio < 1 + gap_warn_threshold.
  double gap_warn_threshold = 0.05;
  /// Replace a negative variance by 0 and re-solve the other from the
  /// untruncated moment equation.
  bool clamp_nonnegative = true;
  EigenMethod eigen_method = EigenMethod::kTridiagonalQl;

  void validate() const;
};

/// p = ceil(alpha · effective_horizon), clipped to [1, effective_horizon].
Index truncation_rank(Index effective_horizon, double alpha);

/// Smallest effective horizon `estimate` accepts: max(4, ceil(1/alpha)).
Index minimum_effective_horizon(double alpha);

struct StveEstimate {
  double sigma2 = 0.0;  ///< process noise variance estimate
  double eta2 = 0.0;    ///< observation noise variance estimate
  double sigma2_raw = 0.0;
  double eta2_raw = 0.0;
  SpectralFunctionals functionals;
  QuadraticForms forms;
  Index effective_horizon = 0;
  /// (ũ_min / (n · ‖u_max‖)) · ‖R‖²_HS / T', the structural lower bound on the
  /// spectral gap up to an unknown absolute constant.
  double gap_lower_bound = 0.0;
  std::vector<std::string> warnings;
};

/// Filtered dataset plus its Gram spectrum. Preparing once and solving many
/// observation vectors is how the Monte-Carlo checks avoid repeated
/// eigendecompositions.
class PreparedSystem {
 public:
  static PreparedSystem prepare(const RegressionDataset& data, const StveConfig& config = {});

  const RegressionDataset& data() const noexcept { return data_; }
  const std::vector<std::int64_t>& dropped() const noexcept { return dropped_; }
  const GramSpectrum& spectrum() const noexcept { return spectrum_; }
  const SpectralFunctionals& functionals() const noexcept { return functionals_; }
  const NormSummary& norms() const noexcept { return norms_; }
  const StveConfig& config() const noexcept { return config_; }
  Index effective_horizon() const noexcept { return spectrum_.size(); }

  /// ‖RY‖² and ‖R'Y‖² for observations of the retained rows (length T').
  QuadraticForms forms(const Eigen::VectorXd& retained_y) const;

  /// Solves the two moment equations for observations of the retained rows.
  StveEstimate solve(const Eigen::VectorXd& retained_y) const;

 private:
  PreparedSystem(RegressionDataset data, std::vector<std::int64_t> dropped, GramSpectrum spectrum,
                 SpectralFunctionals functionals, NormSummary norms, StveConfig config);

  RegressionDataset data_;
  std::vector<std::int64_t> dropped_;
  GramSpectrum spectrum_;
  SpectralFunctionals functionals_;
  NormSummary norms_;
  StveConfig config_;
};

/// Spectrum thresholding variance estimate of (σ², η²) from one trajectory.
///
/// Throws InvalidArgument when fewer than minimum_effective_horizon(alpha)
/// rows survive filtering, and NumericalError when the spectrum is flat
/// (gap_ratio − 1 < 1e-12) so the two moment equations coincide.
StveEstimate estimate(const RegressionDataset& data, const StveConfig& config = {});

struct GapDiagnostic {
  double gap_ratio = 1.0;
  /// (ũ_min / (n‖u_max‖)) · ‖R‖²_HS/T', the norm-based lower bound on the gap.
  double norm_bound = 0.0;
  bool satisfied = false;
};

GapDiagnostic gap_diagnostic(const NormSummary& norms, Index dim,
                             const SpectralFunctionals& functionals, Index effective_horizon,
                             double gap_warn_threshold);

/// Diagnostic at p = ceil(T'/4) for a dataset (filtered with the config's
/// min_row_norm first).
GapDiagnostic gap_diagnostic(const RegressionDataset& data, const StveConfig& config = {});

struct MomentCheckReport {
  Index replications = 0;
  Index effective_horizon = 0;
  Index p = 0;
  double mean_r = 0.0;      ///< sample mean of ‖RY‖²/T'
  double stderr_r = 0.0;
  double expected_r = 0.0;  ///< σ² + (‖R‖²_HS/T')·η²
  double mean_rp = 0.0;     ///< sample mean of ‖R'Y‖²/p
  double stderr_rp = 0.0;
  double expected_rp = 0.0; ///< σ² + (‖R'‖²_HS/p)·η²

  /// Both sample means within `k` standard errors (plus a 1e-8 relative
  /// rounding floor) of their expectations.
  bool within(double k) const;
};

/// Simulates observations for the design of `data` under known noise and
/// compares the sample means of the two normalised quadratic forms with
/// their analytic expectations.
MomentCheckReport moment_equation_check(const RegressionDataset& data, const NoiseSpec& process,
                                        const NoiseSpec& observation, Index replications,
                                        std::uint64_t seed, const StveConfig& config = {});

}  // namespace stve
