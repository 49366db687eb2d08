#pragma once

// Observation patterns: the mask of observed (row, column) positions of an
// m x n matrix, stored column-wise as sorted row supports.
//
// Indices are 0-based in memory and 1-based in every text format.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lrmc/subsets.hpp"

namespace lrmc {

struct Entry {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Entry&, const Entry&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class ObservationPattern {
 public:
  ObservationPattern() = default;

  ObservationPattern(int m, int n) : m_(m), n_(n), supports_(static_cast<std::size_t>(n)) {
    check_dims(m, n);
  }

  ObservationPattern(int m, int n, const std::vector<Entry>& entries) : ObservationPattern(m, n) {
    for (const Entry& e : entries) {
      if (e.row < 0 || e.row >= m || e.col < 0 || e.col >= n)
        throw std::invalid_argument("entry (" + std::to_string(e.row + 1) + "," +
                                    std::to_string(e.col + 1) + ") outside " + std::to_string(m) +
                                    "x" + std::to_string(n));
      supports_[static_cast<std::size_t>(e.col)].push_back(e.row);
    }
    for (auto& s : supports_) {
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw std::invalid_argument("duplicate entry in pattern");
    }
  }

  /// Builds a pattern from per-column row supports.
  static ObservationPattern from_supports(int m, std::vector<Subset> supports) {
    std::vector<Entry> entries;
    for (std::size_t j = 0; j < supports.size(); ++j)
      for (int i : supports[j]) entries.push_back({i, static_cast<int>(j)});
    return ObservationPattern(m, static_cast<int>(supports.size()), entries);
  }

  int rows() const { return m_; }
  int cols() const { return n_; }

  std::size_t size() const {
    std::size_t total = 0;
    for (const auto& s : supports_) total += s.size();
    return total;
  }

  const Subset& support(int j) const { return supports_.at(static_cast<std::size_t>(j)); }
  const std::vector<Subset>& supports() const { return supports_; }
  RowMask support_mask(int j) const { return to_mask(support(j)); }

  bool contains(int i, int j) const {
    const Subset& s = support(j);
    return std::binary_search(s.begin(), s.end(), i);
  }

  /// Entries sorted by (row, column).
  std::vector<Entry> entries() const {
    std::vector<Entry> out;
    out.reserve(size());
    for (int j = 0; j < n_; ++j)
      for (int i : support(j)) out.push_back({i, j});
    std::sort(out.begin(), out.end());
    return out;
  }

  bool has_empty_column() const {
    return std::any_of(supports_.begin(), supports_.end(), [](const Subset& s) { return s.empty(); });
  }

  ObservationPattern with_entry(int i, int j) const {
    auto e = entries();
    e.push_back({i, j});
    return ObservationPattern(m_, n_, e);
  }

  ObservationPattern without_entry(int i, int j) const {
    auto e = entries();
    std::erase(e, Entry{i, j});
    return ObservationPattern(m_, n_, e);
  }

  /// Column sub-pattern on the given columns, in the given order.
  ObservationPattern select_columns(const std::vector<int>& cols) const {
    std::vector<Subset> s;
    for (int j : cols) s.push_back(support(j));
    return from_supports(m_, std::move(s));
  }

  friend bool operator==(const ObservationPattern&, const ObservationPattern&) = default;

 private:
  static void check_dims(int m, int n) {
    if (m <= 0 || n <= 0) throw std::invalid_argument("pattern dimensions must be positive");
    if (m > kMaxRows)
      throw std::invalid_argument("at most " + std::to_string(kMaxRows) + " rows supported");
  }

  int m_ = 0;
  int n_ = 0;
  std::vector<Subset> supports_;
};

/// All size-k subsets of a column support (the per-column candidate family
/// used to build SLMFs when k = r + 1).
inline std::vector<Subset> column_subsets(const Subset& support, int k) {
  return combinations(support, k);
}

// ---- text formats ----------------------------------------------------------

/// Parses an ASCII 0/1 grid: one line per row, one character per column.
/// Trailing '\r' and trailing blank lines are ignored.
inline ObservationPattern parse_pattern(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError("empty pattern", 1, 1);

  const std::size_t width = lines.front().size();
  if (width == 0) throw ParseError("empty line", 1, 1);
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const int lineno = static_cast<int>(i) + 1;
    if (line.size() != width)
      throw ParseError("ragged line: expected " + std::to_string(width) + " characters, got " +
                           std::to_string(line.size()),
                       lineno, static_cast<int>(std::min(line.size(), width)) + 1);
    for (std::size_t j = 0; j < width; ++j) {
      const char c = line[j];
      if (c == '1')
        entries.push_back({static_cast<int>(i), static_cast<int>(j)});
      else if (c != '0')
        throw ParseError(std::string("illegal character '") + c + "'", lineno, static_cast<int>(j) + 1);
    }
  }
  if (lines.size() > static_cast<std::size_t>(kMaxRows))
    throw ParseError("more than " + std::to_string(kMaxRows) + " rows", kMaxRows + 1, 1);
  return ObservationPattern(static_cast<int>(lines.size()), static_cast<int>(width), entries);
}

inline std::string to_grid(const ObservationPattern& p) {
  std::string out;
  for (int i = 0; i < p.rows(); ++i) {
    for (int j = 0; j < p.cols(); ++j) out += p.contains(i, j) ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline nlohmann::json to_json(const ObservationPattern& p) {
  nlohmann::json entries = nlohmann::json::array();
  for (const Entry& e : p.entries()) entries.push_back({e.row + 1, e.col + 1});
  return {{"m", p.rows()}, {"n", p.cols()}, {"entries", entries}};
}

inline ObservationPattern pattern_from_json(const nlohmann::json& j) {
  try {
    const int m = j.at("m").get<int>();
    const int n = j.at("n").get<int>();
    std::vector<Entry> entries;
    for (const auto& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 2) throw std::invalid_argument("entry must be [row, column]");
      entries.push_back({e[0].get<int>() - 1, e[1].get<int>() - 1});
    }
    return ObservationPattern(m, n, entries);
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed pattern JSON: ") + ex.what());
  }
}

/// Accepts either the ASCII grid or the JSON form.
inline ObservationPattern parse_pattern_any(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
      throw ParseError(ex.what(), 1, static_cast<int>(ex.byte));
    }
    return pattern_from_json(j);
  }
  return parse_pattern(text);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ObservationPattern load_pattern(const std::string& path) {
  return parse_pattern_any(read_file(path));
}

// ---- generation and counting ----------------------------------------------

/// Each column support is an independent uniform size-k subset of [m].
inline ObservationPattern random_pattern(int m, int n, int k, std::uint64_t seed) {
  if (k < 0 || k > m) throw std::invalid_argument("per-column count k must satisfy 0 <= k <= m");
  std::mt19937_64 rng(seed);
  const Subset all = iota_subset(0, m);
  std::vector<Subset> supports(static_cast<std::size_t>(n));
  for (auto& s : supports) std::sample(all.begin(), all.end(), std::back_inserter(s), k, rng);
  return ObservationPattern::from_supports(m, std::move(supports));
}

/// dim M(r, m x n) = r(m + n - r).
inline std::int64_t determinantal_dimension(int m, int n, int r) {
  return static_cast<std::int64_t>(r) * (m + n - r);
}

struct SizeCheck {
  std::int64_t required = 0;
  std::int64_t actual = 0;
  bool pass = false;
};

inline void check_rank_range(const ObservationPattern& p, int r) {
  if (r < 1 || r > std::min(p.rows(), p.cols()))
    throw std::invalid_argument("rank " + std::to_string(r) + " outside [1, min(m, n)]");
}

inline SizeCheck minimum_size_check(const ObservationPattern& p, int r) {
  check_rank_range(p, r);
  SizeCheck out;
  out.required = determinantal_dimension(p.rows(), p.cols(), r);
  out.actual = static_cast<std::int64_t>(p.size());
  out.pass = out.actual >= out.required;
  return out;
}

}  // namespace lrmc
