#include "stve/dataio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "stve/errors.hpp"

namespace stve {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool is_nan_token(std::string_view s) { return s == "nan" || s == "NaN" || s == "NAN"; }

std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

/// Reads the next non-comment, non-blank line. Returns false at EOF.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

RegressionDataset read_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) throw ParseError(source, line_no, "missing header row");

  const auto header = split_fields(line);
  std::optional<std::size_t> t_col;
  std::optional<std::size_t> y_col;
  std::vector<std::size_t> u_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = header[i];
    if (name == "t") {
      if (t_col) throw ParseError(source, line_no, "duplicate t column");
      t_col = i;
    } else if (name == "y") {
      if (y_col) throw ParseError(source, line_no, "duplicate y column");
      y_col = i;
    } else if (name == "u_" + std::to_string(u_cols.size() + 1)) {
      u_cols.push_back(i);
    } else {
      throw ParseError(source, line_no,
                       "unexpected column '" + std::string(name) + "' (expected t, y, u_1..u_n)");
    }
  }
  if (!y_col) throw ParseError(source, line_no, "header has no y column");
  if (u_cols.empty()) throw ParseError(source, line_no, "header has no u_1 column");

  std::vector<double> ys;
  std::vector<bool> observed;
  std::vector<std::int64_t> times;
  std::vector<double> us;
  const auto n = u_cols.size();
  while (next_line(in, line, line_no)) {
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()));
    }
    if (t_col) {
      const auto t = parse_int(fields[*t_col]);
      if (!t) throw ParseError(source, line_no, "t is not an integer");
      if (!times.empty() && *t <= times.back()) {
        throw ParseError(source, line_no, "t is not strictly increasing");
      }
      times.push_back(*t);
    }
    const auto y_text = fields[*y_col];
    if (y_text.empty() || is_nan_token(y_text)) {
      ys.push_back(std::numeric_limits<double>::quiet_NaN());
      observed.push_back(false);
    } else {
      const auto y = parse_double(y_text);
      if (!y || !std::isfinite(*y)) throw ParseError(source, line_no, "y is not a number");
      ys.push_back(*y);
      observed.push_back(true);
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto text = fields[u_cols[j]];
      if (text.empty() || is_nan_token(text)) {
        throw ParseError(source, line_no, "missing value for u_" + std::to_string(j + 1));
      }
      const auto v = parse_double(text);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(source, line_no, "u_" + std::to_string(j + 1) + " is not a number");
      }
      us.push_back(*v);
    }
  }
  if (in.bad()) throw IoError(source + ": read error");

  const auto rows = static_cast<Index>(ys.size());
  Eigen::MatrixXd u(rows, static_cast<Index>(n));
  for (Index t = 0; t < rows; ++t) {
    for (Index j = 0; j < static_cast<Index>(n); ++j) {
      u(t, j) = us[static_cast<std::size_t>(t) * n + static_cast<std::size_t>(j)];
    }
  }
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(ys.data(), rows);
  if (!times.empty()) {
    const auto offset = times.front() - 1;
    for (auto& t : times) t -= offset;
  }
  try {
    if (times.empty()) return RegressionDataset(std::move(u), std::move(y), std::move(observed));
    return RegressionDataset(std::move(u), std::move(y), std::move(observed), std::move(times));
  } catch (const InvalidArgument& e) {
    throw ParseError(source, 0, e.what());
  }
}

RegressionDataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_csv(in, path.string());
}

void write_csv(std::ostream& out, const RegressionDataset& data, std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "t,y";
  for (Index j = 0; j < data.dim(); ++j) out << ",u_" << (j + 1);
  out << '\n';
  for (Index t = 0; t < data.horizon(); ++t) {
    out << data.time_index()[static_cast<std::size_t>(t)] << ',';
    if (data.is_observed(t)) out << format_double(data.y()[t]);
    for (Index j = 0; j < data.dim(); ++j) out << ',' << format_double(data.u()(t, j));
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const RegressionDataset& data,
               std::string_view comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_csv(out, data, comment);
  if (!out) throw IoError("write to " + path.string() + " failed");
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string source = path.string();
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) throw ParseError(source, line_no, "missing header row");
  const auto header = split_fields(line);
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i].starts_with("u_")) cols.push_back(i);
  }
  if (cols.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) cols.push_back(i);
  }
  std::vector<double> values;
  Index rows = 0;
  while (next_line(in, line, line_no)) {
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError(source, line_no, "expected " + std::to_string(header.size()) + " fields");
    }
    for (auto c : cols) {
      const auto v = parse_double(fields[c]);
      if (!v || !std::isfinite(*v)) throw ParseError(source, line_no, "non-numeric value");
      values.push_back(*v);
    }
    ++rows;
  }
  const auto n = static_cast<Index>(cols.size());
  Eigen::MatrixXd m(rows, n);
  for (Index t = 0; t < rows; ++t) {
    for (Index j = 0; j < n; ++j) m(t, j) = values[static_cast<std::size_t>(t * n + j)];
  }
  return m;
}

Eigen::MatrixXd quadratic_features(const Eigen::VectorXd& series) {
  if (!series.allFinite()) throw InvalidArgument("quadratic_features: non-finite input");
  Eigen::MatrixXd u(series.size(), 3);
  u.col(0).setOnes();
  u.col(1) = series;
  u.col(2) = series.array().square().matrix();
  return u;
}

RegressionDataset NormalizationParams::apply(const RegressionDataset& data) const {
  if (data.dim() != feature_mean.size()) throw InvalidArgument("normalization: dimension mismatch");
  Eigen::MatrixXd u = data.u();
  for (Index j = 0; j < u.cols(); ++j) {
    if (constant_column[static_cast<std::size_t>(j)]) continue;
    u.col(j) = ((u.col(j).array() - feature_mean[j]) / feature_std[j]).matrix();
  }
  return RegressionDataset(std::move(u), normalize_y(data.y()), data.observed(), data.time_index());
}

Eigen::VectorXd NormalizationParams::normalize_y(const Eigen::VectorXd& y) const {
  return ((y.array() - y_mean) / y_std).matrix();
}

Eigen::VectorXd NormalizationParams::denormalize_y(const Eigen::VectorXd& y) const {
  return (y.array() * y_std + y_mean).matrix();
}

NormalizationParams fit_normalization(const RegressionDataset& train) {
  NormalizationParams params;
  const Eigen::VectorXd y = train.observed_y();
  params.y_mean = y.mean();
  params.y_std = std::sqrt((y.array() - params.y_mean).square().mean());
  if (!(params.y_std > 0.0)) throw InvalidArgument("normalization: y has zero variance on train");

  const Index n = train.dim();
  params.feature_mean.resize(n);
  params.feature_std.resize(n);
  params.constant_column.assign(static_cast<std::size_t>(n), false);
  for (Index j = 0; j < n; ++j) {
    const auto col = train.u().col(j).array();
    const double mean = col.mean();
    const double sd = std::sqrt((col - mean).square().mean());
    params.feature_mean[j] = mean;
    params.feature_std[j] = sd;
    params.constant_column[static_cast<std::size_t>(j)] = !(sd > 1e-12 * std::max(1.0, std::abs(mean)));
  }
  return params;
}

Index split_point(Index horizon, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("train_fraction must lie in (0, 1)");
  }
  return static_cast<Index>(std::floor(train_fraction * static_cast<double>(horizon)));
}

SplitResult split_and_normalize(const RegressionDataset& data, double train_fraction) {
  const Index cut = split_point(data.horizon(), train_fraction);
  if (cut < 2 || data.horizon() - cut < 2) {
    throw InvalidArgument("split leaves fewer than 2 rows on one side");
  }
  // slice() enforces >= 2 observed rows on each side.
  const RegressionDataset train_raw = data.slice(0, cut);
  const RegressionDataset test_raw = data.slice(cut, data.horizon());
  NormalizationParams params = fit_normalization(train_raw);
  return {params.apply(train_raw), params.apply(test_raw), std::move(params)};
}

}  // namespace stve
