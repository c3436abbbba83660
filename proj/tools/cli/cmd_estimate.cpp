#include <ostream>

#include "cli/app.hpp"
#include "cli/commands.hpp"
#include "stve/dataio.hpp"
#include "stve/errors.hpp"
#include "stve/estimator.hpp"

namespace stve::cli {

void bind_options(CLI::App& sub, EstimateOptions& o) {
  sub.add_option("--input", o.input, "Dataset CSV (t,y,u_1..u_n)")->required();
  sub.add_option("--alpha", o.alpha, "Truncation fraction, p = ceil(alpha T')")
      ->capture_default_str();
  sub.add_option("--min-row-norm", o.min_row_norm, "Drop rows with ||u_t|| at or below this")
      ->capture_default_str();
  sub.add_option("--gap-warn", o.gap_warn, "Warn when the gap ratio is below 1 + this")
      ->capture_default_str();
  sub.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

int cmd_estimate(const EstimateOptions& o, RunManifest& manifest, std::ostream& out,
                 std::ostream& /*err*/) {
  Stopwatch clock;
  manifest.config = {{"input", o.input},
                     {"alpha", o.alpha},
                     {"min_row_norm", o.min_row_norm},
                     {"gap_warn", o.gap_warn},
                     {"format", o.format}};
  manifest.input_digest = file_digest(o.input);

  StveConfig config;
  config.alpha = o.alpha;
  config.min_row_norm = o.min_row_norm;
  config.gap_warn_threshold = o.gap_warn;
  config.validate();

  const RegressionDataset data = read_csv(o.input);
  const StveEstimate est = estimate(data, config);
  manifest.duration_seconds = clock.seconds();

  if (o.format == "json") {
    Json j;
    j["sigma2"] = number(est.sigma2);
    j["eta2"] = number(est.eta2);
    j["sigma2_raw"] = number(est.sigma2_raw);
    j["eta2_raw"] = number(est.eta2_raw);
    j["horizon"] = data.horizon();
    j["effective_horizon"] = est.effective_horizon;
    j["p"] = est.functionals.p;
    j["r_y_sq"] = number(est.forms.r_y_sq);
    j["rp_y_sq"] = number(est.forms.rp_y_sq);
    j["hs_r_sq"] = number(est.functionals.hs_r_sq);
    j["hs_rp_sq"] = number(est.functionals.hs_rp_sq);
    j["gap_ratio"] = number(est.functionals.gap_ratio);
    j["gap_lower_bound"] = number(est.gap_lower_bound);
    j["gap_ok"] = est.functionals.gap_ratio >= 1.0 + o.gap_warn;
    j["warnings"] = est.warnings;
    j["manifest"] = manifest.to_json();
    out << j.dump(2) << '\n';
  } else {
    out << "# " << manifest.to_json().dump() << '\n';
    out << "sigma2,eta2,sigma2_raw,eta2_raw,effective_horizon,p,hs_r_sq,hs_rp_sq,gap_ratio,"
           "gap_lower_bound,warnings\n";
    std::string warnings;
    for (const auto& w : est.warnings) {
      if (!warnings.empty()) warnings += "; ";
      warnings += w;
    }
    for (char& c : warnings) {
      if (c == '"') c = '\'';
    }
    out << format_double(est.sigma2) << ',' << format_double(est.eta2) << ','
        << format_double(est.sigma2_raw) << ',' << format_double(est.eta2_raw) << ','
        << est.effective_horizon << ',' << est.functionals.p << ','
        << format_double(est.functionals.hs_r_sq) << ','
        << format_double(est.functionals.hs_rp_sq) << ','
        << format_double(est.functionals.gap_ratio) << ',' << format_double(est.gap_lower_bound)
        << ",\"" << warnings << "\"\n";
  }
  if (!out) throw IoError("error writing output");
  return kOk;
}

}  // namespace stve::cli
