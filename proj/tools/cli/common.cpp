#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "stve/errors.hpp"

namespace stve::cli {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

Index parse_index(const std::string& text, const std::string& spec) {
  Index value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw InvalidArgument("bad index '" + text + "' in '" + spec + "'");
  }
  return value;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    std::string item = trim(text.substr(start, comma - start));
    if (!item.empty()) items.push_back(std::move(item));
    start = comma + 1;
  }
  return items;
}

std::vector<Index> parse_missing(const std::string& text) {
  std::vector<Index> rows;
  for (const std::string& item : split_list(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      rows.push_back(parse_index(item, text));
      continue;
    }
    const Index lo = parse_index(trim(item.substr(0, colon)), text);
    const Index hi = parse_index(trim(item.substr(colon + 1)), text);
    if (hi < lo) throw InvalidArgument("empty range '" + item + "' in --missing");
    for (Index t = lo; t <= hi; ++t) rows.push_back(t);
  }
  return rows;
}

Json number(double value) { return std::isfinite(value) ? Json(value) : Json(nullptr); }

}  // namespace stve::cli
