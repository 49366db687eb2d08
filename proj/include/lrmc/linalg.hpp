#pragma once

// Floating-point helpers on top of Eigen: numerical rank with a spectral-gap
// guard, conversions to the field-generic DenseMatrix, and seeded sampling.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lrmc/field.hpp"

namespace lrmc {

struct NumericalRank {
  int rank = 0;
  /// False when no clear gap separates counted from discarded singular values.
  bool determinate = true;
  /// sigma[rank-1] / sigma[rank]; infinity when nothing was discarded or the
  /// first discarded value is exactly zero.
  double gap = std::numeric_limits<double>::infinity();
  std::vector<double> singular_values;
};

inline constexpr double kDefaultRankTolerance = 1e-9;
inline constexpr double kDefaultRankGap = 1e3;

/// Counts singular values above tol * sigma_max and requires a ratio of at
/// least min_gap between the last counted and the first discarded one.
inline NumericalRank numerical_rank(const Eigen::MatrixXd& a, double tol = kDefaultRankTolerance,
                                    double min_gap = kDefaultRankGap) {
  NumericalRank out;
  if (a.rows() == 0 || a.cols() == 0) return out;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  const Eigen::VectorXd& s = svd.singularValues();
  out.singular_values.assign(s.data(), s.data() + s.size());
  const double smax = s.size() ? s(0) : 0.0;
  if (smax == 0.0) return out;
  int rank = 0;
  while (rank < s.size() && s(rank) > tol * smax) ++rank;
  out.rank = rank;
  if (rank < s.size()) {
    const double next = s(rank);
    out.gap = next == 0.0 ? std::numeric_limits<double>::infinity() : s(rank - 1) / next;
    out.determinate = out.gap >= min_gap;
  }
  return out;
}

inline DenseMatrix<double> to_dense(const Eigen::MatrixXd& a) {
  DenseMatrix<double> out(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out(i, j) = a(i, j);
  return out;
}

inline Eigen::MatrixXd to_eigen(const DenseMatrix<double>& a) {
  Eigen::MatrixXd out(a.rows, a.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) out(i, j) = a(i, j);
  return out;
}

inline Eigen::MatrixXd gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd out(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) out(i, j) = normal(rng);
  return out;
}

/// SplitMix64 finalizer; derives independent per-trial seeds from a master
/// seed as splitmix(master + trial).
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Orthonormal basis of the orthogonal complement of the column space of a
/// full-column-rank matrix, from a complete QR factorization.
inline Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& basis) {
  const Eigen::Index m = basis.rows();
  const Eigen::Index r = basis.cols();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
  return q.rightCols(m - r);
}

}  // namespace lrmc
