#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "stve/dataset.hpp"

namespace stve {

/// Random engine used throughout. Streams for replications are derived from a
/// base seed with `derive_seed`, so results are reproducible on a given
/// standard library implementation.
using Rng = std::mt19937_64;

enum class NoiseFamily { kGaussian, kRademacher, kUniform };

NoiseFamily parse_noise_family(std::string_view name);
std::string_view to_string(NoiseFamily family);

/// Zero-mean noise of a given family and variance.
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::kGaussian;
  double variance = 1.0;

  /// A valid sub-Gaussian constant κ, P(|X| > t) <= 2 exp(−t²/κ²), for this
  /// family at this variance. Reported as metadata only.
  double kappa() const;

  double draw(Rng& rng) const;
};

/// u_t ~ N(0, I_n), drawn independently per step.
struct GaussianInputs {};
/// u_t = value for every t.
struct ConstantInputs {
  Eigen::VectorXd value;
};
/// u_t = (1, v_t, v_t²) from a supplied scalar series of length T.
struct QuadraticFeatureInputs {
  Eigen::VectorXd series;
};
/// Rows of a given T×n matrix (for example loaded from a file).
struct FixedInputs {
  Eigen::MatrixXd u;
};

using InputProcess = std::variant<GaussianInputs, ConstantInputs, QuadraticFeatureInputs, FixedInputs>;

struct SimulationConfig {
  Index horizon = 100;
  Index dim = 1;
  double sigma2 = 1.0;  ///< process noise variance (per coordinate of h_t)
  double eta2 = 1.0;    ///< observation noise variance
  NoiseFamily family = NoiseFamily::kGaussian;
  InputProcess inputs = GaussianInputs{};
  std::uint64_t seed = 0;
  /// 1-based time indices whose observation is withheld.
  std::vector<Index> missing;

  void validate() const;
};

struct Simulation {
  RegressionDataset data;
  /// Hidden states X_t (row t). Evaluation only; estimators never see these.
  Eigen::MatrixXd states;
};

/// Trajectory of X_{t+1} = X_t + h_t, Y_t = <X_t, u_t> + z_t with X_1 = h_1,
/// i.e. X_t = h_1 + ... + h_t. Identical configs give bitwise identical output.
Simulation simulate(const SimulationConfig& config);

/// Fresh observations for an existing design: the process noise is drawn over
/// times 1..τ_max and only the dataset's rows are observed. Returns the full
/// length-T vector (NaN at unobserved rows).
Eigen::VectorXd simulate_observations(const RegressionDataset& design, const NoiseSpec& process,
                                      const NoiseSpec& observation, Rng& rng);

/// Observation vectors for a process. `rng` is consumed only by GaussianInputs.
Eigen::MatrixXd generate_inputs(const InputProcess& process, Index horizon, Index dim, Rng& rng);

/// SplitMix64 finaliser of base + (stream+1)·golden-ratio increment.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Number of worker threads: STVE_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned default_thread_count();

/// Calls `body(i)` for i in [0, count) on up to `threads` workers. The first
/// exception thrown by a body is rethrown after all workers finish.
void parallel_for(Index count, unsigned threads, const std::function<void(Index)>& body);

/// Variance estimate (σ̂², η̂²) from one dataset.
using VarianceEstimator = std::function<std::pair<double, double>(const RegressionDataset&)>;

struct ErrorRow {
  Index horizon = 0;
  Index replications = 0;
  /// Replications whose estimator threw NumericalError; excluded from means.
  Index failures = 0;
  double mean_abs_sigma2_error = 0.0;
  double stderr_sigma2 = 0.0;
  double mean_abs_eta2_error = 0.0;
  double stderr_eta2 = 0.0;
};

/// Runs `replications` independent simulations of `config` (replication r uses
/// seed derive_seed(config.seed, r)) and aggregates absolute estimation errors.
ErrorRow replicate(const SimulationConfig& config, Index replications,
                   const VarianceEstimator& estimator, unsigned threads = default_thread_count());

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// False when fewer than two finite positive points were available or the
  /// x values do not vary.
  bool defined = false;
};

/// Least-squares fit of log(y) on log(x), skipping non-positive points.
SlopeFit loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace stve
