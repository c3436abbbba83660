#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "cli/app.hpp"
#include "cli/commands.hpp"
#include "stve/baselines.hpp"
#include "stve/dataio.hpp"
#include "stve/errors.hpp"
#include "stve/estimator.hpp"
#include "stve/simulator.hpp"

namespace stve::cli {

void bind_options(CLI::App& sub, BenchmarkOptions& o) {
  sub.add_option("--reps", o.reps, "Replications per horizon")->capture_default_str();
  sub.add_option("--T-grid", o.t_grid, "Comma-separated horizons (at least 3)")
      ->capture_default_str();
  sub.add_option("--estimators", o.estimators, "Comma-separated subset of stve,mle,truth")
      ->capture_default_str();
  sub.add_option("--sigma2", o.sigma2, "Process noise variance")->capture_default_str();
  sub.add_option("--eta2", o.eta2, "Observation noise variance")->capture_default_str();
  sub.add_option("--n", o.dim, "Dimension")->capture_default_str();
  sub.add_option("--noise", o.noise, "Noise family")
      ->check(CLI::IsMember({"gaussian", "rademacher", "uniform"}))
      ->capture_default_str();
  sub.add_option("--u", o.inputs, "Observation vectors")
      ->check(CLI::IsMember({"gaussian", "constant"}))
      ->capture_default_str();
  sub.add_option("--u-value", o.u_value, "Entry value for --u constant")->capture_default_str();
  sub.add_option("--seed", o.seed, "Base seed")->capture_default_str();
  sub.add_option("--alpha", o.alpha, "STVE truncation fraction")->capture_default_str();
  sub.add_option("--threads", o.threads, "Worker threads (0: STVE_THREADS or all cores)")
      ->capture_default_str();
  sub.add_option("--out", o.out, "Output CSV ('-' for stdout)")->capture_default_str();
}

namespace {

VarianceEstimator make_estimator(const std::string& name, const BenchmarkOptions& o) {
  if (name == "stve") {
    StveConfig config;
    config.alpha = o.alpha;
    config.validate();
    return [config](const RegressionDataset& data) {
      const StveEstimate e = estimate(data, config);
      return std::pair{e.sigma2, e.eta2};
    };
  }
  if (name == "mle") {
    return [](const RegressionDataset& data) {
      const MleResult r = mle_fit(data, 1.0, 1.0);
      return std::pair{r.sigma2, r.eta2};
    };
  }
  if (name == "truth") {
    const std::pair<double, double> truth{o.sigma2, o.eta2};
    return [truth](const RegressionDataset&) { return truth; };
  }
  throw InvalidArgument("unknown estimator '" + name + "' (expected stve, mle or truth)");
}

std::string slope_cell(const SlopeFit& fit) {
  return fit.defined ? format_double(fit.slope) : std::string("undefined");
}

}  // namespace

int cmd_benchmark(const BenchmarkOptions& o, RunManifest& manifest, std::ostream& out,
                  std::ostream& /*err*/) {
  Stopwatch clock;
  std::vector<Index> grid;
  for (const std::string& item : split_list(o.t_grid)) grid.push_back(std::stoll(item));
  if (grid.size() < 3) throw InvalidArgument("--T-grid needs at least 3 horizons");
  if (o.reps < 1) throw InvalidArgument("--reps must be positive");
  const std::vector<std::string> names = split_list(o.estimators);
  if (names.empty()) throw InvalidArgument("--estimators is empty");

  std::vector<VarianceEstimator> estimators;
  for (const std::string& name : names) estimators.push_back(make_estimator(name, o));
  const unsigned threads = o.threads > 0 ? o.threads : default_thread_count();

  manifest.config = {{"reps", o.reps},   {"T_grid", grid},     {"estimators", names},
                     {"sigma2", o.sigma2}, {"eta2", o.eta2},   {"n", o.dim},
                     {"noise", o.noise}, {"u", o.inputs},      {"u_value", o.u_value},
                     {"seed", o.seed},   {"alpha", o.alpha},   {"out", o.out}};
  manifest.seed = o.seed;

  Output target(o.out, out);
  std::ostream& csv = target.stream();
  csv << "# " << manifest.artifact_tag() << '\n';
  csv << "estimator,T,replications,failures,mean_abs_sigma2_error,stderr_sigma2,"
         "mean_abs_eta2_error,stderr_eta2\n";

  Json summary = Json::object();
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::vector<double> horizons, err_sigma2, err_eta2;
    for (Index T : grid) {
      SimulationConfig config;
      config.horizon = T;
      config.dim = o.dim;
      config.sigma2 = o.sigma2;
      config.eta2 = o.eta2;
      config.family = parse_noise_family(o.noise);
      if (o.inputs == "constant") config.inputs = ConstantInputs{Eigen::VectorXd::Constant(o.dim, o.u_value)};
      // Same per-horizon seed for every estimator, so they see identical data.
      config.seed = derive_seed(o.seed, static_cast<std::uint64_t>(T));
      const ErrorRow row = replicate(config, o.reps, estimators[k], threads);
      csv << names[k] << ',' << T << ',' << row.replications << ',' << row.failures << ','
          << format_double(row.mean_abs_sigma2_error) << ',' << format_double(row.stderr_sigma2)
          << ',' << format_double(row.mean_abs_eta2_error) << ','
          << format_double(row.stderr_eta2) << '\n';
      horizons.push_back(static_cast<double>(T));
      err_sigma2.push_back(row.mean_abs_sigma2_error);
      err_eta2.push_back(row.mean_abs_eta2_error);
    }
    const SlopeFit s = loglog_slope(horizons, err_sigma2);
    const SlopeFit e = loglog_slope(horizons, err_eta2);
    csv << names[k] << ",slope,,," << slope_cell(s) << ",," << slope_cell(e) << ",\n";
    summary[names[k]] = {{"slope_sigma2", s.defined ? Json(s.slope) : Json(nullptr)},
                         {"slope_eta2", e.defined ? Json(e.slope) : Json(nullptr)}};
  }
  target.finish();
  manifest.duration_seconds = clock.seconds();
  if (!target.is_stdout()) {
    write_sidecar(o.out, manifest);
    out << summary.dump(2) << '\n';
  }
  return kOk;
}

}  // namespace stve::cli
