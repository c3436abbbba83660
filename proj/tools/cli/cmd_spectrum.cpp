#include <ostream>

#include "cli/app.hpp"
#include "cli/commands.hpp"
#include "stve/dataio.hpp"
#include "stve/errors.hpp"
#include "stve/estimator.hpp"
#include "stve/operators.hpp"
#include "stve/spectral.hpp"

namespace stve::cli {

void bind_options(CLI::App& sub, SpectrumOptions& o) {
  sub.add_option("--input", o.input, "Dataset CSV (t,y,u_1..u_n)")->required();
  sub.add_option("--min-row-norm", o.min_row_norm, "Drop rows with ||u_t|| at or below this")
      ->capture_default_str();
  sub.add_option("--alpha", o.alpha, "Fraction at which the gap ratio is reported")
      ->capture_default_str();
  sub.add_option("--out", o.out, "Output CSV ('-' for stdout)")->capture_default_str();
}

int cmd_spectrum(const SpectrumOptions& o, RunManifest& manifest, std::ostream& out,
                 std::ostream& /*err*/) {
  Stopwatch clock;
  if (!(o.alpha > 0.0 && o.alpha <= 1.0)) throw InvalidArgument("--alpha must be in (0, 1]");
  manifest.config = {{"input", o.input},
                     {"min_row_norm", o.min_row_norm},
                     {"alpha", o.alpha},
                     {"out", o.out}};
  manifest.input_digest = file_digest(o.input);

  const RegressionDataset data = read_csv(o.input);
  const FilterResult filtered = filter_rows(data, o.min_row_norm);
  const GramSpectrum spectrum = eigendecompose(gram_matrix(filtered.data));
  const Index T = spectrum.size();
  const Eigen::VectorXd chi_sq = inverse_spectrum(spectrum);
  const double mean = chi_sq.sum() / static_cast<double>(T);
  const Index p = truncation_rank(T, o.alpha);
  const SpectralFunctionals f = functionals(spectrum, p);

  Output target(o.out, out);
  std::ostream& csv = target.stream();
  csv << "# " << manifest.artifact_tag() << " p=" << p
      << " gap_ratio=" << format_double(f.gap_ratio) << '\n';
  csv << "i,gamma_sq,chi_sq,prefix_avg,mean\n";
  double prefix = 0.0;
  for (Index i = 0; i < T; ++i) {
    prefix += chi_sq[i];
    csv << (i + 1) << ',' << format_double(spectrum.gamma_sq[i]) << ','
        << format_double(chi_sq[i]) << ','
        << format_double(prefix / static_cast<double>(i + 1)) << ',' << format_double(mean)
        << '\n';
  }
  target.finish();
  manifest.duration_seconds = clock.seconds();
  if (!target.is_stdout()) {
    write_sidecar(o.out, manifest);
    const Json summary = {{"effective_horizon", T},
                          {"dropped", filtered.dropped.size()},
                          {"p", p},
                          {"gap_ratio", number(f.gap_ratio)},
                          {"mean_chi_sq", number(mean)},
                          {"hs_r_sq", number(f.hs_r_sq)},
                          {"hs_rp_sq", number(f.hs_rp_sq)}};
    out << summary.dump(2) << '\n';
  }
  return kOk;
}

}  // namespace stve::cli
