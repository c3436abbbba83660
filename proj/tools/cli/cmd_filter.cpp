#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "cli/app.hpp"
#include "cli/commands.hpp"
#include "stve/dataio.hpp"
#include "stve/errors.hpp"
#include "stve/forecast.hpp"

namespace stve::cli {

void bind_options(CLI::App& sub, FilterOptions& o) {
  sub.add_option("--input", o.input, "Dataset CSV (t,y,u_1..u_n)")->required();
  sub.add_option("--sigma2", o.sigma2, "Process noise variance for the Kalman filter");
  sub.add_option("--eta2", o.eta2, "Observation noise variance for the Kalman filter");
  sub.add_flag("--auto", o.automatic, "Estimate the variances with STVE on the training split");
  sub.add_option("--baseline", o.baseline, "Comma-separated subset of kalman,og,stationary")
      ->capture_default_str();
  sub.add_option("--train-fraction", o.train_fraction, "Leading fraction used for fitting")
      ->capture_default_str();
  sub.add_option("--window", o.window, "Moving-average window for smoothed errors")
      ->capture_default_str();
  sub.add_flag("--normalize", o.normalize, "Standardise y and features on the training split");
  sub.add_option("--max-learning-rate", o.max_learning_rate, "Upper end of the OG rate search")
      ->capture_default_str();
  sub.add_option("--alpha", o.alpha, "STVE truncation fraction for --auto")->capture_default_str();
  sub.add_option("--out", o.out, "Output CSV ('-' for stdout)")->capture_default_str();
}

namespace {

std::string cell(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

}  // namespace

int cmd_filter(const FilterOptions& o, RunManifest& manifest, std::ostream& out,
               std::ostream& /*err*/) {
  Stopwatch clock;
  std::vector<Forecaster> methods;
  std::vector<std::string> names;
  for (const std::string& name : split_list(o.baseline)) {
    methods.push_back(parse_forecaster(name));
    names.emplace_back(to_string(methods.back()));
  }
  if (methods.empty()) throw InvalidArgument("--baseline is empty");
  if (o.window < 1) throw InvalidArgument("--window must be positive");

  ForecastOptions options;
  options.train_fraction = o.train_fraction;
  options.normalize = o.normalize;
  options.max_learning_rate = o.max_learning_rate;
  options.stve.alpha = o.alpha;
  const bool given = o.sigma2 >= 0.0 || o.eta2 >= 0.0;
  if (o.automatic && given) throw InvalidArgument("--auto excludes --sigma2/--eta2");
  if (!o.automatic) {
    const bool needs_variances =
        std::find(methods.begin(), methods.end(), Forecaster::kKalman) != methods.end();
    if (needs_variances && (o.sigma2 < 0.0 || o.eta2 < 0.0)) {
      throw InvalidArgument("kalman needs --sigma2 and --eta2, or --auto");
    }
    if (given) options.variances = std::pair{o.sigma2, o.eta2};
  }

  manifest.config = {{"input", o.input},
                     {"sigma2", o.automatic ? Json(nullptr) : number(o.sigma2)},
                     {"eta2", o.automatic ? Json(nullptr) : number(o.eta2)},
                     {"auto", o.automatic},
                     {"baseline", names},
                     {"train_fraction", o.train_fraction},
                     {"window", o.window},
                     {"normalize", o.normalize},
                     {"max_learning_rate", o.max_learning_rate},
                     {"alpha", o.alpha},
                     {"out", o.out}};
  manifest.input_digest = file_digest(o.input);

  const RegressionDataset data = read_csv(o.input);
  std::vector<ForecastRun> runs;
  std::vector<Eigen::VectorXd> smoothed;
  for (Forecaster m : methods) {
    runs.push_back(run_forecast(data, m, options));
    smoothed.push_back(moving_average(runs.back().squared_errors, o.window));
  }

  Output target(o.out, out);
  std::ostream& csv = target.stream();
  csv << "# " << manifest.artifact_tag() << '\n';
  csv << "t,split,y";
  for (const auto& name : names) {
    csv << ",yhat_" << name << ",sqerr_" << name << ",smoothed_" << name;
  }
  csv << '\n';
  const Index split = runs.front().split;
  for (Index t = 0; t < data.horizon(); ++t) {
    csv << data.time_index()[static_cast<std::size_t>(t)] << ','
        << (t < split ? "train" : "test") << ',' << cell(data.y()[t]);
    for (std::size_t k = 0; k < runs.size(); ++k) {
      csv << ',' << cell(runs[k].predictions[t]) << ',' << cell(runs[k].squared_errors[t]) << ','
          << cell(smoothed[k][t]);
    }
    csv << '\n';
  }
  target.finish();
  manifest.duration_seconds = clock.seconds();

  Json summary;
  summary["split"] = split;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    Json params = Json::object();
    for (const auto& [key, value] : runs[k].parameters) params[key] = number(value);
    summary["methods"][names[k]] = {{"train_mse", number(runs[k].train_mse)},
                                    {"test_mse", number(runs[k].test_mse)},
                                    {"test_count", runs[k].test_count},
                                    {"parameters", params},
                                    {"warnings", runs[k].warnings}};
  }
  if (!target.is_stdout()) {
    write_sidecar(o.out, manifest);
    out << summary.dump(2) << '\n';
  }
  return kOk;
}

}  // namespace stve::cli
