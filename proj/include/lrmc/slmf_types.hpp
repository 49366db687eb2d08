#pragma once

// The Slmf candidate type: m - r sorted (r+1)-subsets of [m], one per column
// of an m x (m - r) support.

#include <stdexcept>
#include <string>
#include <vector>

#include "lrmc/pattern.hpp"
#include "lrmc/subsets.hpp"

namespace lrmc {

class Slmf {
 public:
  Slmf() = default;

  Slmf(int m, int r, std::vector<Subset> columns) : m_(m), r_(r), columns_(std::move(columns)) {
    if (r < 0 || m <= r) throw std::invalid_argument("SLMF needs 0 <= r < m");
    if (m > kMaxRows) throw std::invalid_argument("SLMF row count exceeds " + std::to_string(kMaxRows));
    if (static_cast<int>(columns_.size()) != m - r)
      throw std::invalid_argument("SLMF needs exactly m - r = " + std::to_string(m - r) +
                                  " columns, got " + std::to_string(columns_.size()));
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      auto& c = columns_[j];
      std::sort(c.begin(), c.end());
      if (static_cast<int>(c.size()) != r + 1 || !is_sorted_subset(c, m))
        throw std::invalid_argument("SLMF column " + std::to_string(j + 1) +
                                    " must be r + 1 = " + std::to_string(r + 1) +
                                    " distinct rows in [1, " + std::to_string(m) + "]");
    }
  }

  /// Reads the grid form (m rows, m - r columns) of an SLMF support.
  static Slmf from_pattern(const ObservationPattern& p, int r) {
    if (p.cols() != p.rows() - r)
      throw std::invalid_argument("SLMF grid must have m - r = " + std::to_string(p.rows() - r) +
                                  " columns, got " + std::to_string(p.cols()));
    return Slmf(p.rows(), r, p.supports());
  }

  int rows() const { return m_; }
  int rank() const { return r_; }
  int size() const { return static_cast<int>(columns_.size()); }
  const std::vector<Subset>& columns() const { return columns_; }
  const Subset& column(int j) const { return columns_.at(static_cast<std::size_t>(j)); }

  ObservationPattern as_pattern() const { return ObservationPattern::from_supports(m_, columns_); }

  friend bool operator==(const Slmf&, const Slmf&) = default;

 private:
  int m_ = 0;
  int r_ = 0;
  std::vector<Subset> columns_;
};

}  // namespace lrmc
