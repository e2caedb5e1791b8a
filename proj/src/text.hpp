#pragma once

// Helpers for the line-oriented text formats (topology, plan, manifest,
// scenario). Internal to the library.

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "dgrid/error.hpp"

namespace dgrid::text {

struct Line {
  std::size_t number = 0;  // 1-based
  std::vector<std::string_view> words;
};

/// Splits into lines, drops `#` comments and blank lines, tokenizes on
/// whitespace. The views point into `text`.
inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    Line parsed{number, {}};
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      if (j > i) parsed.words.push_back(line.substr(i, j - i));
      i = j;
    }
    if (!parsed.words.empty()) out.push_back(std::move(parsed));
  }
  return out;
}

inline std::optional<double> to_double(std::string_view s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<std::uint64_t> to_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline double need_double(const Line& l, std::size_t i, std::string_view what) {
  if (auto v = to_double(l.words[i])) return *v;
  throw ParseError(l.number, std::string(what) + " is not a number: '" + std::string(l.words[i]) + "'");
}

inline std::uint64_t need_u64(const Line& l, std::size_t i, std::string_view what) {
  if (auto v = to_u64(l.words[i])) return *v;
  throw ParseError(l.number,
                   std::string(what) + " is not a non-negative integer: '" + std::string(l.words[i]) + "'");
}

inline void need_arity(const Line& l, std::size_t min, std::size_t max) {
  if (l.words.size() < min || l.words.size() > max)
    throw ParseError(l.number, "wrong number of fields for '" + std::string(l.words[0]) + "'");
}

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace dgrid::text
