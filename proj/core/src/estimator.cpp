#include "stve/estimator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "stve/errors.hpp"

namespace stve {

void StveConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (!(min_row_norm >= 0.0)) throw InvalidArgument("min_row_norm must be >= 0");
  if (!(gap_warn_threshold > 0.0)) throw InvalidArgument("gap_warn_threshold must be > 0");
}

Index truncation_rank(Index effective_horizon, double alpha) {
  const auto p = static_cast<Index>(std::ceil(alpha * static_cast<double>(effective_horizon)));
  return std::clamp<Index>(p, 1, effective_horizon);
}

Index minimum_effective_horizon(double alpha) {
  return std::max<Index>(4, static_cast<Index>(std::ceil(1.0 / alpha)));
}

PreparedSystem::PreparedSystem(RegressionDataset data, std::vector<std::int64_t> dropped,
                               GramSpectrum spectrum, SpectralFunctionals functionals,
                               NormSummary norms, StveConfig config)
    : data_(std::move(data)), dropped_(std::move(dropped)), spectrum_(std::move(spectrum)),
      functionals_(functionals), norms_(norms), config_(config) {}

PreparedSystem PreparedSystem::prepare(const RegressionDataset& data, const StveConfig& config) {
  config.validate();
  FilterResult filtered = filter_rows(data, config.min_row_norm);
  const Index rows = filtered.data.horizon();
  const Index required = minimum_effective_horizon(config.alpha);
  if (rows < required) {
    throw InvalidArgument("estimate: " + std::to_string(rows) +
                          " usable rows after filtering; need at least " +
                          std::to_string(required));
  }
  GramSpectrum spectrum = eigendecompose(gram_matrix(filtered.data), config.eigen_method);
  const SpectralFunctionals f = stve::functionals(spectrum, truncation_rank(rows, config.alpha));
  const NormSummary norms = summarize_norms(filtered.data);
  // ‖R‖_op <= 2/‖u_min‖, hence ‖R‖²_HS <= 4 T' / ‖u_min‖².
  assert(f.hs_r_sq <= 4.0 * static_cast<double>(rows) / (norms.u_min_norm * norms.u_min_norm) *
                          (1.0 + 1e-9));
  return PreparedSystem(std::move(filtered.data), std::move(filtered.dropped), std::move(spectrum),
                        f, norms, config);
}

QuadraticForms PreparedSystem::forms(const Eigen::VectorXd& retained_y) const {
  return quadratic_forms(spectrum_, retained_y, functionals_.p);
}

StveEstimate PreparedSystem::solve(const Eigen::VectorXd& retained_y) const {
  const auto& f = functionals_;
  const double T = static_cast<double>(effective_horizon());
  const double p = static_cast<double>(f.p);
  if (!(f.gap_ratio - 1.0 >= 1e-12)) {
    std::ostringstream msg;
    msg << "estimate: flat spectrum (gap ratio " << f.gap_ratio
        << "); the two moment equations are not independent";
    throw NumericalError(msg.str());
  }

  StveEstimate out;
  out.functionals = f;
  out.effective_horizon = effective_horizon();
  out.forms = forms(retained_y);

  const double coef_full = f.hs_r_sq / T;
  const double coef_trunc = f.hs_rp_sq / p;
  const double lhs_full = out.forms.r_y_sq / T;
  const double lhs_trunc = out.forms.rp_y_sq / p;
  out.eta2_raw = (lhs_trunc - lhs_full) / (coef_trunc - coef_full);
  out.sigma2_raw = lhs_full - coef_full * out.eta2_raw;

  out.sigma2 = out.sigma2_raw;
  out.eta2 = out.eta2_raw;
  if (config_.clamp_nonnegative) {
    // Only one of the two can be negative: eta2_raw < 0 forces
    // sigma2_raw > lhs_full >= 0.
    if (out.eta2_raw < 0.0) {
      out.eta2 = 0.0;
      out.sigma2 = lhs_full;
      out.warnings.push_back("negative eta2 estimate clamped to 0");
    } else if (out.sigma2_raw < 0.0) {
      out.sigma2 = 0.0;
      out.eta2 = lhs_full / coef_full;
      out.warnings.push_back("negative sigma2 estimate clamped to 0");
    }
  }

  const GapDiagnostic gap =
      gap_diagnostic(norms_, data_.dim(), f, effective_horizon(), config_.gap_warn_threshold);
  out.gap_lower_bound = gap.norm_bound;
  if (!gap.satisfied) {
    std::ostringstream msg;
    msg << "weak spectral gap: ratio " << f.gap_ratio << " < 1 + " << config_.gap_warn_threshold
        << "; estimates may be unstable";
    out.warnings.push_back(msg.str());
  }
  return out;
}

StveEstimate estimate(const RegressionDataset& data, const StveConfig& config) {
  const PreparedSystem system = PreparedSystem::prepare(data, config);
  return system.solve(system.data().y());
}

GapDiagnostic gap_diagnostic(const NormSummary& norms, Index dim,
                             const SpectralFunctionals& functionals, Index effective_horizon,
                             double gap_warn_threshold) {
  GapDiagnostic d;
  d.gap_ratio = functionals.gap_ratio;
  const double scale = static_cast<double>(dim) * norms.u_max_norm;
  d.norm_bound = scale > 0.0 ? (norms.u_tilde_min / scale) * functionals.hs_r_sq /
                                    static_cast<double>(effective_horizon)
                              : 0.0;
  d.satisfied = d.gap_ratio >= 1.0 + gap_warn_threshold;
  return d;
}

GapDiagnostic gap_diagnostic(const RegressionDataset& data, const StveConfig& config) {
  const FilterResult filtered = filter_rows(data, config.min_row_norm);
  const Index rows = filtered.data.horizon();
  const GramSpectrum spectrum = eigendecompose(gram_matrix(filtered.data), config.eigen_method);
  const SpectralFunctionals f = functionals(spectrum, truncation_rank(rows, 0.25));
  return gap_diagnostic(summarize_norms(filtered.data), data.dim(), f, rows,
                        config.gap_warn_threshold);
}

bool MomentCheckReport::within(double k) const {
  // The rounding floor matters only when a form has zero variance, e.g. n = 1,
  // η² = 0 and Rademacher increments, where ‖RY‖² = ‖h‖² = T exactly.
  const auto close = [k](double mean, double se, double expected) {
    return std::abs(mean - expected) <= k * se + 1e-8 * std::abs(expected);
  };
  return close(mean_r, stderr_r, expected_r) && close(mean_rp, stderr_rp, expected_rp);
}

MomentCheckReport moment_equation_check(const RegressionDataset& data, const NoiseSpec& process,
                                        const NoiseSpec& observation, Index replications,
                                        std::uint64_t seed, const StveConfig& config) {
  if (replications < 100) throw InvalidArgument("moment_equation_check: need >= 100 replications");
  const PreparedSystem system = PreparedSystem::prepare(data, config);
  const auto& f = system.functionals();
  const double T = static_cast<double>(system.effective_horizon());
  const double p = static_cast<double>(f.p);

  std::vector<double> full(static_cast<std::size_t>(replications));
  std::vector<double> trunc(full.size());
  parallel_for(replications, default_thread_count(), [&](Index r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    const Eigen::VectorXd y = simulate_observations(system.data(), process, observation, rng);
    const QuadraticForms q = system.forms(y);
    full[static_cast<std::size_t>(r)] = q.r_y_sq / T;
    trunc[static_cast<std::size_t>(r)] = q.rp_y_sq / p;
  });

  auto mean_se = [&](const std::vector<double>& v) {
    const Eigen::Map<const Eigen::VectorXd> m(v.data(), static_cast<Index>(v.size()));
    const double mean = m.mean();
    const double var = (m.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
    return std::pair{mean, std::sqrt(var / static_cast<double>(v.size()))};
  };

  MomentCheckReport report;
  report.replications = replications;
  report.effective_horizon = system.effective_horizon();
  report.p = f.p;
  std::tie(report.mean_r, report.stderr_r) = mean_se(full);
  std::tie(report.mean_rp, report.stderr_rp) = mean_se(trunc);
  report.expected_r = process.variance + f.hs_r_sq / T * observation.variance;
  report.expected_rp = process.variance + f.hs_rp_sq / p * observation.variance;
  return report;
}

}  // namespace stve
