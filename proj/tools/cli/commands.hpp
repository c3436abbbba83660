#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/manifest.hpp"
#include "stve/dataset.hpp"

namespace stve::cli {

struct EstimateOptions {
  std::string input;
  double alpha = 0.25;
  double min_row_norm = 1e-8;
  double gap_warn = 0.05;
  std::string format = "json";
};

struct SimulateOptions {
  Index horizon = 500;
  Index dim = 5;
  double sigma2 = 0.5;
  double eta2 = 2.0;
  std::string noise = "gaussian";
  std::string inputs = "gaussian";
  double u_value = 1.0;
  std::string u_file;
  std::uint64_t seed = 0;
  std::string missing;
  std::string output = "-";
};

struct BenchmarkOptions {
  Index reps = 150;
  std::string t_grid = "125,250,500,1000";
  std::string estimators = "stve,mle";
  double sigma2 = 0.5;
  double eta2 = 2.0;
  Index dim = 5;
  std::string noise = "gaussian";
  std::string inputs = "gaussian";
  double u_value = 1.0;
  std::uint64_t seed = 42;
  double alpha = 0.25;
  unsigned threads = 0;
  std::string out = "-";
};

struct FilterOptions {
  std::string input;
  double sigma2 = -1.0;
  double eta2 = -1.0;
  bool automatic = false;
  std::string baseline = "kalman";
  double train_fraction = 0.5;
  Index window = 50;
  bool normalize = false;
  double max_learning_rate = 2.0;
  double alpha = 0.25;
  std::string out = "-";
};

struct SpectrumOptions {
  std::string input;
  double min_row_norm = 1e-8;
  double alpha = 0.25;
  std::string out = "-";
};

void bind_options(CLI::App& sub, EstimateOptions& o);
void bind_options(CLI::App& sub, SimulateOptions& o);
void bind_options(CLI::App& sub, BenchmarkOptions& o);
void bind_options(CLI::App& sub, FilterOptions& o);
void bind_options(CLI::App& sub, SpectrumOptions& o);

int cmd_estimate(const EstimateOptions& o, RunManifest& manifest, std::ostream& out,
                 std::ostream& err);
int cmd_simulate(const SimulateOptions& o, RunManifest& manifest, std::ostream& out,
                 std::ostream& err);
int cmd_benchmark(const BenchmarkOptions& o, RunManifest& manifest, std::ostream& out,
                  std::ostream& err);
int cmd_filter(const FilterOptions& o, RunManifest& manifest, std::ostream& out, std::ostream& err);
int cmd_spectrum(const SpectrumOptions& o, RunManifest& manifest, std::ostream& out,
                 std::ostream& err);

/// Comma-separated list, whitespace around items ignored, empty items dropped.
std::vector<std::string> split_list(const std::string& text);

/// "10:20,3" -> {10, ..., 20, 3}. Ranges are 1-based and inclusive.
std::vector<Index> parse_missing(const std::string& text);

/// Non-finite values become JSON null.
Json number(double value);

}  // namespace stve::cli
