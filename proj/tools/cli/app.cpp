#include "cli/app.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/manifest.hpp"
#include "stve/errors.hpp"
#include "stve/version.hpp"

namespace stve::cli {
namespace {

const std::vector<std::string> kSubcommands = {"estimate", "simulate", "benchmark", "filter",
                                               "spectrum"};

std::string config_value(const Json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_array()) {
    std::string joined;
    for (const auto& item : value) {
      if (!joined.empty()) joined += ',';
      joined += config_value(item);
    }
    return joined;
  }
  return value.dump();
}

// Splices "--key value" pairs from a JSON config file in front of the
// command-line flags. Options keep the last value they are given, so flags
// win over the file and the file wins over built-in defaults.
std::vector<std::string> expand_config(const std::vector<std::string>& args,
                                       std::string& config_path) {
  auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    return std::find(kSubcommands.begin(), kSubcommands.end(), a) != kSubcommands.end();
  });
  if (sub == args.end()) return args;
  for (auto it = sub + 1; it != args.end(); ++it) {
    if (*it == "--config" && it + 1 != args.end()) {
      config_path = *(it + 1);
    } else if (it->rfind("--config=", 0) == 0) {
      config_path = it->substr(9);
    }
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw IoError("cannot open config file " + config_path);
  Json config;
  try {
    config = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw IoError(config_path + ": " + e.what());
  }
  if (!config.is_object()) throw IoError(config_path + ": config must be a JSON object");

  std::vector<std::string> injected;
  for (const auto& [key, value] : config.items()) {
    if (key == "config" || value.is_null()) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back("--" + key);
      continue;
    }
    injected.push_back("--" + key);
    injected.push_back(config_value(value));
  }
  std::vector<std::string> expanded(args.begin(), sub + 1);
  expanded.insert(expanded.end(), injected.begin(), injected.end());
  expanded.insert(expanded.end(), sub + 1, args.end());
  return expanded;
}

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help,
                      std::string& config_path) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", config_path, "JSON file of option values (flags take precedence)");
  return sub;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectrum thresholding variance estimation for random-walk regression", "stve"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1, 1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string config_path;
  EstimateOptions estimate_opts;
  SimulateOptions simulate_opts;
  BenchmarkOptions benchmark_opts;
  FilterOptions filter_opts;
  SpectrumOptions spectrum_opts;

  CLI::App* estimate = add_command(app, "estimate", "Estimate (sigma2, eta2) from a dataset", config_path);
  bind_options(*estimate, estimate_opts);
  CLI::App* simulate = add_command(app, "simulate", "Simulate a random-walk regression dataset", config_path);
  bind_options(*simulate, simulate_opts);
  CLI::App* benchmark = add_command(app, "benchmark", "Estimation error against horizon", config_path);
  bind_options(*benchmark, benchmark_opts);
  CLI::App* filter = add_command(app, "filter", "One-step-ahead forecasts and errors", config_path);
  bind_options(*filter, filter_opts);
  CLI::App* spectrum = add_command(app, "spectrum", "Spectrum of the pseudo-inverse", config_path);
  bind_options(*spectrum, spectrum_opts);

  std::string active = "stve";
  try {
    std::string resolved_config;
    std::vector<std::string> expanded = expand_config(args, resolved_config);
    std::reverse(expanded.begin(), expanded.end());
    try {
      app.parse(expanded);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kOk : kInvalidArguments;
    }

    RunManifest manifest;
    manifest.config_file = resolved_config;
    if (*estimate) {
      active = manifest.subcommand = "estimate";
      return cmd_estimate(estimate_opts, manifest, out, err);
    }
    if (*simulate) {
      active = manifest.subcommand = "simulate";
      return cmd_simulate(simulate_opts, manifest, out, err);
    }
    if (*benchmark) {
      active = manifest.subcommand = "benchmark";
      return cmd_benchmark(benchmark_opts, manifest, out, err);
    }
    if (*filter) {
      active = manifest.subcommand = "filter";
      return cmd_filter(filter_opts, manifest, out, err);
    }
    active = manifest.subcommand = "spectrum";
    return cmd_spectrum(spectrum_opts, manifest, out, err);
  } catch (const IoError& e) {
    err << active << ": error: " << e.what() << '\n';
    return kIoError;
  } catch (const NumericalError& e) {
    err << active << ": numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::invalid_argument& e) {
    err << active << ": invalid argument: " << e.what() << '\n';
    return kInvalidArguments;
  } catch (const std::out_of_range& e) {
    err << active << ": invalid argument: " << e.what() << '\n';
    return kInvalidArguments;
  } catch (const std::exception& e) {
    err << active << ": error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace stve::cli
