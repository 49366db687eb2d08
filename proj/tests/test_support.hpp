#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lrmc/lrmc.hpp"

namespace lrmc::testing {

// 6x5 pattern with r = 2 and exactly 18 = 2(6+5-2) entries.
inline ObservationPattern example_main() {
  return parse_pattern(
      "10011\n"
      "10110\n"
      "10001\n"
      "11110\n"
      "11011\n"
      "01010\n");
}

// The 6x6 extension with four extra entries in columns 3 and 6.
inline ObservationPattern example_unique() {
  return parse_pattern(
      "101111\n"
      "101101\n"
      "101010\n"
      "111100\n"
      "110111\n"
      "010101\n");
}

inline Slmf phi1() { return Slmf(6, 2, {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}, {3, 4, 5}}); }
inline Slmf phi2() { return Slmf(6, 2, {{1, 3, 5}, {0, 1, 3}, {0, 1, 4}, {0, 2, 4}}); }

// Rows (1,0),(0,1),(0,2),(3,4).
inline Eigen::MatrixXd small_basis() {
  Eigen::MatrixXd b(4, 2);
  b << 1, 0, 0, 1, 0, 2, 3, 4;
  return b;
}

// The 18-entry pattern whose first three columns crowd rows 1..3.
inline ObservationPattern crowded_rows_pattern() {
  return ObservationPattern::from_supports(6, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}, {0, 1, 3, 4}, {0, 2, 3, 4, 5}});
}

inline Subset random_subset(std::mt19937_64& rng, int m, int k) {
  Subset all = iota_subset(0, m);
  Subset out;
  std::sample(all.begin(), all.end(), std::back_inserter(out), k, rng);
  return out;
}

inline Slmf random_phi(std::mt19937_64& rng, int m, int r) {
  std::vector<Subset> cols;
  for (int j = 0; j < m - r; ++j) cols.push_back(random_subset(rng, m, r + 1));
  return Slmf(m, r, std::move(cols));
}

inline ObservationPattern permute(const ObservationPattern& p, const std::vector<int>& row_perm,
                                  const std::vector<int>& col_perm) {
  std::vector<Entry> entries;
  for (const Entry& e : p.entries())
    entries.push_back({row_perm[static_cast<std::size_t>(e.row)], col_perm[static_cast<std::size_t>(e.col)]});
  return ObservationPattern(p.rows(), p.cols(), entries);
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, int n) {
  std::vector<int> perm = iota_subset(0, n);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

inline double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace lrmc::testing
