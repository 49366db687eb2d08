#pragma once

// Plücker coordinates of r-dimensional subspaces of K^m.
//
// A PluckerVector stores all binomial(m, r) maximal minors [psi] of a basis,
// indexed by r-subsets psi in lexicographic order. Everything here is
// templated on the scalar so the same code runs over doubles and over
// PrimeField.
//
// Sign conventions (all relative to sorted subsets):
//   * dual:     [[m] \ psi]_{V^perp} = sign(psi) * [psi]_V, where sign(psi) is
//               the sign of the permutation sorting (psi, [m] \ psi);
//   * B_Phi:    entry at (phi_j[i], j) is (-1)^i [phi_j \ phi_j[i]] (0-based i);
//   * sections: sum_k (-1)^k x_{phi[k]} [phi \ phi[k]] (0-based k).

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrmc/field.hpp"
#include "lrmc/linalg.hpp"
#include "lrmc/slmf_types.hpp"
#include "lrmc/subsets.hpp"

namespace lrmc {

inline constexpr std::uint64_t kMaxPluckerLength = std::uint64_t{1} << 24;

inline void check_plucker_dims(int r, int m) {
  if (m < 1 || m > kMaxRows) throw std::invalid_argument("ambient dimension out of range");
  if (r < 0 || r > m) throw std::invalid_argument("subspace dimension out of range");
  if (binomial(m, r) > kMaxPluckerLength)
    throw std::invalid_argument("binomial(m, r) exceeds the dense storage limit 2^24");
}

template <class T>
class PluckerVector {
 public:
  PluckerVector() = default;

  PluckerVector(int r, int m, std::vector<T> coords) : r_(r), m_(m), coords_(std::move(coords)) {
    check_plucker_dims(r, m);
    if (coords_.size() != binomial(m, r))
      throw std::invalid_argument("Plücker vector needs binomial(m, r) coordinates");
    if (std::all_of(coords_.begin(), coords_.end(), [](const T& v) { return exactly_zero(v); }))
      throw std::invalid_argument("Plücker vector must not be identically zero");
  }

  int rank() const { return r_; }
  int ambient() const { return m_; }
  std::size_t size() const { return coords_.size(); }
  const std::vector<T>& coords() const { return coords_; }

  const T& at(const Subset& psi) const {
    if (static_cast<int>(psi.size()) != r_ || !is_sorted_subset(psi, m_))
      throw std::invalid_argument("malformed index subset " + format_subset(psi));
    return coords_[subset_rank(psi, m_)];
  }
  const T& operator[](std::size_t index) const { return coords_[index]; }

  /// Index subset of coordinate `index`.
  Subset subset(std::size_t index) const { return subset_unrank(index, m_, r_); }

 private:
  int r_ = 0;
  int m_ = 0;
  std::vector<T> coords_;
};

/// A matrix whose columns are linearly independent.
template <class T>
class SubspaceBasis {
 public:
  explicit SubspaceBasis(DenseMatrix<T> b) : b_(std::move(b)) {
    if (b_.cols > b_.rows || b_.cols < 0) throw std::invalid_argument("not a basis: too many columns");
    if (column_rank(b_) != b_.cols) throw std::invalid_argument("not a basis");
  }

  int ambient() const { return b_.rows; }
  int dim() const { return b_.cols; }
  const DenseMatrix<T>& matrix() const { return b_; }

 private:
  static int column_rank(const DenseMatrix<T>& b) {
    if constexpr (std::is_same_v<T, double>) {
      const auto nr = numerical_rank(to_eigen(b), 1e-10);
      return nr.rank;
    } else {
      return elimination_rank(b);
    }
  }

  DenseMatrix<T> b_;
};

inline SubspaceBasis<double> basis_from_eigen(const Eigen::MatrixXd& b) {
  return SubspaceBasis<double>(to_dense(b));
}

template <class T>
DenseMatrix<T> row_submatrix(const DenseMatrix<T>& b, const Subset& rows) {
  DenseMatrix<T> out(static_cast<int>(rows.size()), b.cols);
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < b.cols; ++j) out(i, j) = b(rows[static_cast<std::size_t>(i)], j);
  return out;
}

/// All maximal minors of the basis, rows in increasing order.
template <class T>
PluckerVector<T> plucker_of_basis(const SubspaceBasis<T>& basis) {
  const int m = basis.ambient();
  const int r = basis.dim();
  check_plucker_dims(r, m);
  std::vector<T> coords;
  coords.reserve(binomial(m, r));
  for_each_combination(iota_subset(0, m), r, [&](const Subset& psi) {
    coords.push_back(determinant(row_submatrix(basis.matrix(), psi)));
  });
  return PluckerVector<T>(r, m, std::move(coords));
}

template <class T>
double max_magnitude(const PluckerVector<T>& p) {
  double best = 0.0;
  for (const T& v : p.coords()) best = std::max(best, pivot_magnitude(v));
  return best;
}

/// dim pi_psi(V) = r iff [psi]_V != 0. For doubles, "nonzero" means larger
/// than rel_tol times the largest coordinate magnitude.
template <class T>
bool projection_nondegenerate(const PluckerVector<T>& p, const Subset& psi, double rel_tol = 1e-12) {
  const T& v = p.at(psi);
  if constexpr (std::is_same_v<T, double>) {
    return std::fabs(v) > rel_tol * max_magnitude(p);
  } else {
    return !v.is_zero();
  }
}

/// Plücker vector of the orthogonal complement (an (m - r)-subspace).
/// Only meaningful for decomposable inputs.
template <class T>
PluckerVector<T> dual_plucker(const PluckerVector<T>& p) {
  const int m = p.ambient();
  const int r = p.rank();
  std::vector<T> coords(binomial(m, m - r));
  for (std::size_t idx = 0; idx < p.size(); ++idx) {
    const Subset psi = p.subset(idx);
    const Subset rest = complement(psi, m);
    const T v = p[idx];
    coords[subset_rank(rest, m)] = shuffle_sign(psi) > 0 ? v : -v;
  }
  return PluckerVector<T>(m - r, m, std::move(coords));
}

/// Scale-free comparison. Doubles: normalize by the signed max-magnitude
/// coordinate and compare to rel_tol. Exact fields: cross-multiplication.
template <class T>
bool projectively_equal(const PluckerVector<T>& a, const PluckerVector<T>& b, double rel_tol = 1e-9) {
  if (a.rank() != b.rank() || a.ambient() != b.ambient()) return false;
  const std::size_t n = a.size();
  if constexpr (std::is_same_v<T, double>) {
    auto pivot = [n](const PluckerVector<double>& p) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (std::fabs(p[i]) > std::fabs(p[best])) best = i;
      return best;
    };
    const std::size_t ia = pivot(a);
    const double sa = a[ia];
    const double sb = b[ia];
    if (std::fabs(sb) <= rel_tol * max_magnitude(b)) return false;
    for (std::size_t i = 0; i < n; ++i)
      if (std::fabs(a[i] / sa - b[i] / sb) > rel_tol) return false;
    return true;
  } else {
    std::size_t k = 0;
    while (k < n && a[k].is_zero()) ++k;
    if (b[k].is_zero()) return false;
    for (std::size_t i = 0; i < n; ++i)
      if (!(a[i] * b[k] == b[i] * a[k])) return false;
    return true;
  }
}

// ---- SLMF-induced dual bases ----------------------------------------------

/// One nonzero position of the symbolic matrix B_Phi: the entry at (row, col)
/// is sign * [minor].
struct BPhiEntry {
  int row = 0;
  int col = 0;
  int sign = 1;
  Subset minor;
};

struct BPhiTemplate {
  int m = 0;
  int r = 0;
  std::vector<BPhiEntry> entries;
};

inline BPhiTemplate build_bphi(const Slmf& phi) {
  BPhiTemplate t{phi.rows(), phi.rank(), {}};
  for (int j = 0; j < phi.size(); ++j) {
    const Subset& col = phi.column(j);
    for (std::size_t i = 0; i < col.size(); ++i)
      t.entries.push_back({col[i], j, i % 2 == 0 ? 1 : -1, without(col, i)});
  }
  return t;
}

/// m x (m - r) evaluation of B_Phi at the Plücker vector p.
template <class T>
DenseMatrix<T> evaluate_bphi(const BPhiTemplate& t, const PluckerVector<T>& p) {
  if (p.rank() != t.r || p.ambient() != t.m)
    throw std::invalid_argument("Plücker vector dimensions do not match the SLMF");
  DenseMatrix<T> out(t.m, t.m - t.r);
  for (const BPhiEntry& e : t.entries) {
    const T v = p.at(e.minor);
    out(e.row, e.col) = e.sign > 0 ? v : -v;
  }
  return out;
}

template <class T>
DenseMatrix<T> evaluate_bphi(const Slmf& phi, const PluckerVector<T>& p) {
  return evaluate_bphi(build_bphi(phi), p);
}

// ---- hyperplane sections ---------------------------------------------------

template <class T>
struct SectionTerm {
  Subset minor;
  T coefficient{};
};

/// Linear functional sum_k (-1)^k x_{phi[k]} [phi \ phi[k]] on Plücker space.
template <class T>
struct SectionFunctional {
  Subset phi;
  std::vector<SectionTerm<T>> terms;
};

template <class T>
SectionFunctional<T> section_functional(Subset phi, const std::map<int, T>& x_values) {
  std::sort(phi.begin(), phi.end());
  if (std::adjacent_find(phi.begin(), phi.end()) != phi.end())
    throw std::invalid_argument("section support has repeated indices");
  SectionFunctional<T> f{phi, {}};
  for (std::size_t k = 0; k < phi.size(); ++k) {
    auto it = x_values.find(phi[k]);
    if (it == x_values.end())
      throw std::invalid_argument("missing value for row " + std::to_string(phi[k] + 1));
    const T x = it->second;
    f.terms.push_back({without(phi, k), k % 2 == 0 ? x : -x});
  }
  return f;
}

template <class T>
T evaluate_section(const SectionFunctional<T>& f, const PluckerVector<T>& p) {
  T acc{};
  for (const auto& term : f.terms) acc = acc + term.coefficient * p.at(term.minor);
  return acc;
}

/// alpha14 alpha23 + alpha12 alpha34 - alpha13 alpha24 for Gr(2,4).
template <class T>
T gr24_relation_residual(const PluckerVector<T>& p) {
  if (p.rank() != 2 || p.ambient() != 4)
    throw std::invalid_argument("the Gr(2,4) relation needs r = 2, m = 4");
  // lexicographic layout: 12 13 14 23 24 34
  const auto& a = p.coords();
  return a[2] * a[3] + a[0] * a[5] - a[1] * a[4];
}

// ---- serialization ---------------------------------------------------------

inline nlohmann::json to_json(const PluckerVector<double>& p) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < p.size(); ++i)
    out.push_back({{"subset", to_one_based(p.subset(i))}, {"value", p[i]}});
  return out;
}

inline PluckerVector<double> plucker_from_json(const nlohmann::json& j, int m) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("Plücker JSON must be a non-empty list");
  const int r = static_cast<int>(j.front().at("subset").size());
  std::vector<double> coords(binomial(m, r), 0.0);
  std::vector<bool> seen(coords.size(), false);
  for (const auto& e : j) {
    Subset s = e.at("subset").get<Subset>();
    for (int& i : s) --i;
    if (static_cast<int>(s.size()) != r || !is_sorted_subset(s, m))
      throw std::invalid_argument("malformed subset in Plücker JSON");
    const std::size_t idx = subset_rank(s, m);
    if (seen[idx]) throw std::invalid_argument("duplicate subset in Plücker JSON");
    seen[idx] = true;
    coords[idx] = e.at("value").get<double>();
  }
  return PluckerVector<double>(r, m, std::move(coords));
}

}  // namespace lrmc
