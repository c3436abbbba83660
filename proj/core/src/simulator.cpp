#include "stve/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "stve/errors.hpp"

namespace stve {

NoiseFamily parse_noise_family(std::string_view name) {
  if (name == "gaussian") return NoiseFamily::kGaussian;
  if (name == "rademacher") return NoiseFamily::kRademacher;
  if (name == "uniform") return NoiseFamily::kUniform;
  throw InvalidArgument("unknown noise family '" + std::string(name) + "'");
}

std::string_view to_string(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::kGaussian: return "gaussian";
    case NoiseFamily::kRademacher: return "rademacher";
    case NoiseFamily::kUniform: return "uniform";
  }
  return "unknown";
}

double NoiseSpec::kappa() const {
  // Gaussian: Chernoff bound gives κ² = 2v. Rademacher (±√v) and uniform on
  // [−√(3v), √(3v)] are bounded by b, and 2·exp(−t² ln2 / b²) >= 1 on [0, b].
  switch (family) {
    case NoiseFamily::kGaussian: return std::sqrt(2.0 * variance);
    case NoiseFamily::kRademacher: return std::sqrt(variance / std::log(2.0));
    case NoiseFamily::kUniform: return std::sqrt(3.0 * variance / std::log(2.0));
  }
  return 0.0;
}

double NoiseSpec::draw(Rng& rng) const {
  // Every family consumes the stream the same way whatever the variance, so
  // a zero-variance run stays aligned with its nonzero counterpart.
  const double scale = std::sqrt(variance);
  switch (family) {
    case NoiseFamily::kGaussian:
      return scale * std::normal_distribution<double>{}(rng);
    case NoiseFamily::kRademacher:
      return (rng() >> 63) != 0 ? scale : -scale;
    case NoiseFamily::kUniform:
      return std::sqrt(3.0) * scale *
             (2.0 * std::generate_canonical<double, 53>(rng) - 1.0);
  }
  return 0.0;
}

void SimulationConfig::validate() const {
  if (horizon < 2) throw InvalidArgument("simulation horizon must be >= 2");
  if (dim < 1) throw InvalidArgument("simulation dimension must be >= 1");
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw InvalidArgument("sigma2 must be >= 0");
  if (!(eta2 >= 0.0) || !std::isfinite(eta2)) throw InvalidArgument("eta2 must be >= 0");
  for (Index t : missing) {
    if (t < 1 || t > horizon) {
      throw InvalidArgument("missing index " + std::to_string(t) + " outside 1.." +
                            std::to_string(horizon));
    }
  }
}

Eigen::MatrixXd generate_inputs(const InputProcess& process, Index horizon, Index dim, Rng& rng) {
  return std::visit(
      [&](const auto& p) -> Eigen::MatrixXd {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GaussianInputs>) {
          std::normal_distribution<double> normal;
          Eigen::MatrixXd u(horizon, dim);
          for (Index t = 0; t < horizon; ++t) {
            for (Index j = 0; j < dim; ++j) u(t, j) = normal(rng);
          }
          return u;
        } else if constexpr (std::is_same_v<P, ConstantInputs>) {
          if (p.value.size() != dim) throw InvalidArgument("constant input has wrong dimension");
          return p.value.transpose().replicate(horizon, 1);
        } else if constexpr (std::is_same_v<P, QuadraticFeatureInputs>) {
          if (dim != 3) throw InvalidArgument("quadratic features require dim = 3");
          if (p.series.size() != horizon) {
            throw InvalidArgument("quadratic feature series must have length T");
          }
          Eigen::MatrixXd u(horizon, 3);
          u.col(0).setOnes();
          u.col(1) = p.series;
          u.col(2) = p.series.array().square().matrix();
          return u;
        } else {
          if (p.u.rows() != horizon || p.u.cols() != dim) {
            throw InvalidArgument("fixed inputs have shape " + std::to_string(p.u.rows()) + "x" +
                                  std::to_string(p.u.cols()) + ", expected " +
                                  std::to_string(horizon) + "x" + std::to_string(dim));
          }
          return p.u;
        }
      },
      process);
}

Simulation simulate(const SimulationConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const Index T = config.horizon;
  const Index n = config.dim;
  Eigen::MatrixXd u = generate_inputs(config.inputs, T, n, rng);

  const NoiseSpec process{config.family, config.sigma2};
  const NoiseSpec observation{config.family, config.eta2};
  Eigen::MatrixXd states(T, n);
  Eigen::VectorXd y(T);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (Index t = 0; t < T; ++t) {
    for (Index j = 0; j < n; ++j) x[j] += process.draw(rng);
    states.row(t) = x.transpose();
    y[t] = u.row(t).dot(x) + observation.draw(rng);
  }

  std::vector<bool> observed(static_cast<std::size_t>(T), true);
  for (Index t : config.missing) observed[static_cast<std::size_t>(t - 1)] = false;
  return {RegressionDataset(std::move(u), std::move(y), std::move(observed)), std::move(states)};
}

Eigen::VectorXd simulate_observations(const RegressionDataset& design, const NoiseSpec& process,
                                      const NoiseSpec& observation, Rng& rng) {
  const Index n = design.dim();
  Eigen::VectorXd y(design.horizon());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::int64_t now = 0;
  for (Index row = 0; row < design.horizon(); ++row) {
    const auto tau = design.time_index()[static_cast<std::size_t>(row)];
    for (; now < tau; ++now) {
      for (Index j = 0; j < n; ++j) x[j] += process.draw(rng);
    }
    y[row] = design.u().row(row).dot(x) + observation.draw(rng);
    if (!design.is_observed(row)) y[row] = std::numeric_limits<double>::quiet_NaN();
  }
  return y;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("STVE_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(Index count, unsigned threads, const std::function<void(Index)>& body) {
  if (count <= 0) return;
  const auto workers = static_cast<unsigned>(
      std::min<Index>(std::max(1u, threads), count));
  if (workers == 1) {
    for (Index i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (Index i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& thread : pool) thread.join();
  if (failure) std::rethrow_exception(failure);
}

ErrorRow replicate(const SimulationConfig& config, Index replications,
                   const VarianceEstimator& estimator, unsigned threads) {
  if (replications < 2) throw InvalidArgument("replicate: need at least 2 replications");
  config.validate();
  std::vector<double> sigma_err(static_cast<std::size_t>(replications),
                                std::numeric_limits<double>::quiet_NaN());
  std::vector<double> eta_err(sigma_err);

  parallel_for(replications, threads, [&](Index r) {
    SimulationConfig local = config;
    local.seed = derive_seed(config.seed, static_cast<std::uint64_t>(r));
    const Simulation sim = simulate(local);
    try {
      const auto [sigma2, eta2] = estimator(sim.data);
      sigma_err[static_cast<std::size_t>(r)] = std::abs(sigma2 - config.sigma2);
      eta_err[static_cast<std::size_t>(r)] = std::abs(eta2 - config.eta2);
    } catch (const NumericalError&) {
      // Counted as a failure below.
    }
  });

  auto mean_and_se = [](const std::vector<double>& values) {
    double sum = 0.0, sum_sq = 0.0;
    Index count = 0;
    for (double v : values) {
      if (std::isnan(v)) continue;
      sum += v;
      sum_sq += v * v;
      ++count;
    }
    if (count == 0) return std::pair{std::numeric_limits<double>::quiet_NaN(), 0.0};
    const double mean = sum / static_cast<double>(count);
    if (count == 1) return std::pair{mean, std::numeric_limits<double>::infinity()};
    const double var = std::max(0.0, (sum_sq - static_cast<double>(count) * mean * mean) /
                                         static_cast<double>(count - 1));
    return std::pair{mean, std::sqrt(var / static_cast<double>(count))};
  };

  ErrorRow row;
  row.horizon = config.horizon;
  row.replications = replications;
  row.failures = static_cast<Index>(
      std::count_if(sigma_err.begin(), sigma_err.end(), [](double v) { return std::isnan(v); }));
  std::tie(row.mean_abs_sigma2_error, row.stderr_sigma2) = mean_and_se(sigma_err);
  std::tie(row.mean_abs_eta2_error, row.stderr_eta2) = mean_and_se(eta_err);
  return row;
}

SlopeFit loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("loglog_slope: length mismatch");
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      points.emplace_back(std::log(x[i]), std::log(y[i]));
    }
  }
  SlopeFit fit;
  if (points.size() < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (const auto& [lx, ly] : points) {
    mx += lx;
    my += ly;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [lx, ly] : points) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
  }
  if (sxx <= 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.defined = true;
  return fit;
}

}  // namespace stve
