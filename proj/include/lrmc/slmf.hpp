#pragma once

// Tests for the SLMF property of an m x (m - r) support Phi with (r+1)-sized
// columns:
//
//   # union_{j in T} phi_j >= #T + r   for every nonempty T in [m - r].
//
// Three routes are provided:
//   * check_slmf_combinatorial enumerates every nonempty T (ground truth,
//     returns a minimal violating T);
//   * check_slmf_randomized evaluates B_Phi at a random subspace over
//     PrimeField and tests for full column rank (floating-point variant
//     available for cross-checking);
//   * the surplus-Hall matching test, an equivalent polynomial-time form used
//     by the certificate search.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lrmc/field.hpp"
#include "lrmc/linalg.hpp"
#include "lrmc/plucker.hpp"
#include "lrmc/slmf_types.hpp"
#include "lrmc/subsets.hpp"

namespace lrmc {

enum class SlmfMethod { combinatorial, randomized_rank };

inline const char* to_string(SlmfMethod m) {
  return m == SlmfMethod::combinatorial ? "combinatorial" : "randomized-rank";
}

struct SlmfVerdict {
  bool is_slmf = false;
  /// Violating column set (0-based), combinatorial method only.
  std::optional<Subset> witness;
  SlmfMethod method = SlmfMethod::combinatorial;
};

inline std::vector<RowMask> column_masks(const Slmf& phi) {
  std::vector<RowMask> masks;
  masks.reserve(static_cast<std::size_t>(phi.size()));
  for (const Subset& c : phi.columns()) masks.push_back(to_mask(c));
  return masks;
}

/// Checks every nonempty T by increasing size, lexicographically within a
/// size, so the first violation found is minimal.
inline SlmfVerdict check_slmf_combinatorial(const Slmf& phi) {
  const std::vector<RowMask> masks = column_masks(phi);
  const int k = phi.size();
  const int r = phi.rank();
  if (k > 30) throw std::invalid_argument("combinatorial SLMF check limited to m - r <= 30");
  const Subset cols = iota_subset(0, k);
  for (int s = 1; s <= k; ++s) {
    std::optional<Subset> witness;
    for_each_combination(cols, s, [&](const Subset& t) {
      RowMask u = 0;
      for (int j : t) u |= masks[static_cast<std::size_t>(j)];
      if (mask_size(u) < s + r) {
        witness = t;
        return false;
      }
      return true;
    });
    if (witness) return {false, witness, SlmfMethod::combinatorial};
  }
  return {true, std::nullopt, SlmfMethod::combinatorial};
}

/// True iff the violation inequality holds for T, i.e. T really is a witness.
inline bool is_violating_set(const Slmf& phi, const Subset& t) {
  if (t.empty()) return false;
  RowMask u = 0;
  for (int j : t) u |= to_mask(phi.column(j));
  return mask_size(u) < static_cast<int>(t.size()) + phi.rank();
}

namespace detail {

inline bool augment(int u, const std::vector<RowMask>& left, std::vector<int>& match_row,
                    RowMask& visited) {
  RowMask cand = left[static_cast<std::size_t>(u)] & ~visited;
  while (cand) {
    const int row = std::countr_zero(cand);
    cand &= cand - 1;
    visited |= RowMask{1} << row;
    int& owner = match_row[static_cast<std::size_t>(row)];
    if (owner < 0 || augment(owner, left, match_row, visited)) {
      owner = u;
      return true;
    }
  }
  return false;
}

/// Whether every set in `left` can be matched to a distinct row.
inline bool has_system_of_distinct_representatives(const std::vector<RowMask>& left) {
  if (left.size() > static_cast<std::size_t>(kMaxRows)) return false;
  std::vector<int> match_row(kMaxRows, -1);
  for (int u = 0; u < static_cast<int>(left.size()); ++u) {
    RowMask visited = 0;
    if (!augment(u, left, match_row, visited)) return false;
  }
  return true;
}

}  // namespace detail

/// Given a family that already satisfies the surplus-Hall condition, decides
/// whether it still does after adding `extra`. Only sets T containing the new
/// member can fail; those are exactly Hall's condition for the family in
/// which `extra` is repeated r + 1 times.
inline bool surplus_hall_extends(const std::vector<RowMask>& family, RowMask extra, int r) {
  std::vector<RowMask> left(family);
  for (int c = 0; c <= r; ++c) left.push_back(extra);
  return detail::has_system_of_distinct_representatives(left);
}

/// Polynomial-time equivalent of the combinatorial check.
inline bool satisfies_surplus_hall(const std::vector<RowMask>& family, int r) {
  std::vector<RowMask> prefix;
  for (RowMask s : family) {
    if (!surplus_hall_extends(prefix, s, r)) return false;
    prefix.push_back(s);
  }
  return true;
}

/// Families satisfying the surplus-Hall condition are the independent sets of
/// a matroid (induced by the intersecting-submodular |N(T)| - r), so the greedy
/// scan finds a maximum independent subfamily. Returns positions into `pool`,
/// stopping once `target` members are chosen.
inline std::vector<int> greedy_surplus_hall(const std::vector<RowMask>& pool, int r, int target) {
  std::vector<int> chosen;
  std::vector<RowMask> family;
  for (int i = 0; i < static_cast<int>(pool.size()) && static_cast<int>(chosen.size()) < target; ++i) {
    const RowMask s = pool[static_cast<std::size_t>(i)];
    if (surplus_hall_extends(family, s, r)) {
      family.push_back(s);
      chosen.push_back(i);
    }
  }
  return chosen;
}

// ---- randomized algebraic test --------------------------------------------

template <class T, class Sampler>
bool bphi_full_rank_trial(const Slmf& phi, Sampler&& sample_basis) {
  const auto basis = sample_basis();
  if (!basis) return false;
  const PluckerVector<T> p = plucker_of_basis(*basis);
  const DenseMatrix<T> b = evaluate_bphi(phi, p);
  if constexpr (std::is_same_v<T, double>) {
    const NumericalRank nr = numerical_rank(to_eigen(b));
    return nr.determinate && nr.rank == phi.size();
  } else {
    return elimination_rank(b) == phi.size();
  }
}

/// Exact randomized test over PrimeField: B_Phi evaluated at a uniformly random
/// subspace has full column rank for some trial iff Phi is an SLMF (up to a
/// failure probability of roughly (m - r) r / 2^61 per trial).
inline SlmfVerdict check_slmf_randomized(const Slmf& phi, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(t)));
    auto sampler = [&]() -> std::optional<SubspaceBasis<PrimeField>> {
      DenseMatrix<PrimeField> b(phi.rows(), phi.rank());
      for (auto& v : b.data) v = PrimeField::random(rng);
      if (elimination_rank(b) != phi.rank()) return std::nullopt;
      return SubspaceBasis<PrimeField>(std::move(b));
    };
    if (bphi_full_rank_trial<PrimeField>(phi, sampler)) return {true, std::nullopt, SlmfMethod::randomized_rank};
  }
  return {false, std::nullopt, SlmfMethod::randomized_rank};
}

/// Same test with Gaussian subspaces and numerical rank.
inline SlmfVerdict check_slmf_randomized_float(const Slmf& phi, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(t)));
    auto sampler = [&]() -> std::optional<SubspaceBasis<double>> {
      try {
        return basis_from_eigen(gaussian_matrix(phi.rows(), phi.rank(), rng));
      } catch (const std::invalid_argument&) {
        return std::nullopt;
      }
    };
    if (bphi_full_rank_trial<double>(phi, sampler)) return {true, std::nullopt, SlmfMethod::randomized_rank};
  }
  return {false, std::nullopt, SlmfMethod::randomized_rank};
}

}  // namespace lrmc
