#pragma once

// Floating-point side of the analysis: generic sampling, completion from a
// known column space, generic-rank (Jacobian) tests of completability, and
// export of the linear part of the Plücker system.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lrmc/linalg.hpp"
#include "lrmc/pattern.hpp"
#include "lrmc/plucker.hpp"
#include "lrmc/subsets.hpp"

namespace lrmc {

/// Values known exactly on the entries of a pattern; other cells are NaN.
class ObservedMatrix {
 public:
  ObservedMatrix(ObservationPattern pattern, Eigen::MatrixXd values)
      : pattern_(std::move(pattern)), values_(std::move(values)) {
    if (values_.rows() != pattern_.rows() || values_.cols() != pattern_.cols())
      throw std::invalid_argument("value matrix does not match pattern dimensions");
    for (int j = 0; j < pattern_.cols(); ++j)
      for (int i = 0; i < pattern_.rows(); ++i) {
        if (!pattern_.contains(i, j))
          values_(i, j) = std::numeric_limits<double>::quiet_NaN();
        else if (!std::isfinite(values_(i, j)))
          throw std::invalid_argument("observed value must be finite");
      }
  }

  /// pi_Omega(X).
  static ObservedMatrix observe(const Eigen::MatrixXd& full, const ObservationPattern& pattern) {
    return ObservedMatrix(pattern, full);
  }

  const ObservationPattern& pattern() const { return pattern_; }
  const Eigen::MatrixXd& values() const { return values_; }
  int rows() const { return pattern_.rows(); }
  int cols() const { return pattern_.cols(); }
  double at(int i, int j) const { return values_(i, j); }

  /// Observed values of column j, aligned with its support.
  Eigen::VectorXd observed_column(int j) const {
    const Subset& s = pattern_.support(j);
    Eigen::VectorXd out(static_cast<Eigen::Index>(s.size()));
    for (std::size_t k = 0; k < s.size(); ++k) out(static_cast<Eigen::Index>(k)) = values_(s[k], j);
    return out;
  }

 private:
  ObservationPattern pattern_;
  Eigen::MatrixXd values_;
};

// ---- sampling ----------------------------------------------------------------

inline constexpr int kGenericRetries = 5;

/// Standard-normal m x r basis, deterministic per seed.
inline SubspaceBasis<double> sample_generic_subspace(int m, int r, std::uint64_t seed) {
  if (r < 1 || r > m) throw std::invalid_argument("need 1 <= r <= m");
  for (int attempt = 0; attempt < kGenericRetries; ++attempt) {
    std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(attempt)));
    try {
      return basis_from_eigen(gaussian_matrix(m, r, rng));
    } catch (const std::invalid_argument&) {
    }
  }
  throw std::runtime_error("failed to sample a generic subspace");
}

// ---- completion ----------------------------------------------------------------

class CompletionError : public std::runtime_error {
 public:
  enum class Kind { degenerate_projection, inconsistent };

  CompletionError(Kind kind, int column, const std::string& what)
      : std::runtime_error(what), kind_(kind), column_(column) {}

  Kind kind() const { return kind_; }
  /// 0-based column, or -1 for a single-vector completion.
  int column() const { return column_; }

 private:
  Kind kind_;
  int column_;
};

/// r rows of `projected` (an #omega x r matrix) chosen by column-pivoted QR of
/// its transpose, i.e. greedy volume maximization. Returned as positions into
/// omega, sorted.
inline Subset select_pivot_rows(const Eigen::MatrixXd& projected, int r) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(projected.transpose());
  Subset rows;
  const auto& perm = qr.colsPermutation().indices();
  for (int k = 0; k < r; ++k) rows.push_back(perm(k));
  std::sort(rows.begin(), rows.end());
  return rows;
}

inline Eigen::MatrixXd rows_of(const Eigen::MatrixXd& a, const Subset& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), a.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = a.row(rows[k]);
  return out;
}

inline constexpr double kConsistencyTolerance = 1e-8;

/// The unique v in span(B) with v restricted to omega equal to `observed`,
/// computed as v = B pi_psi(B)^{-1} pi_psi(x) for a well-conditioned
/// r-subset psi of omega.
inline Eigen::VectorXd complete_column(const SubspaceBasis<double>& basis, const Subset& omega,
                                       const Eigen::VectorXd& observed,
                                       double consistency_tol = kConsistencyTolerance) {
  const int r = basis.dim();
  if (!is_sorted_subset(omega, basis.ambient())) throw std::invalid_argument("malformed support");
  if (observed.size() != static_cast<Eigen::Index>(omega.size()))
    throw std::invalid_argument("observed values do not match the support");
  const Eigen::MatrixXd b = to_eigen(basis.matrix());
  const Eigen::MatrixXd projected = rows_of(b, omega);
  if (static_cast<int>(omega.size()) < r || numerical_rank(projected).rank != r || !numerical_rank(projected).determinate)
    throw CompletionError(CompletionError::Kind::degenerate_projection, -1, "projection drops dimension");

  const Subset pivots = select_pivot_rows(projected, r);
  Eigen::VectorXd rhs(r);
  for (int k = 0; k < r; ++k) rhs(k) = observed(pivots[static_cast<std::size_t>(k)]);
  const Eigen::VectorXd coeff = rows_of(projected, pivots).partialPivLu().solve(rhs);
  const Eigen::VectorXd v = b * coeff;

  const double residual = (projected * coeff - observed).norm();
  if (residual > consistency_tol * std::max(1.0, observed.norm()))
    throw CompletionError(CompletionError::Kind::inconsistent, -1, "not in projected subspace");
  return v;
}

/// Column-by-column completion given a basis of the column space.
inline Eigen::MatrixXd complete_matrix(const ObservedMatrix& obs, const SubspaceBasis<double>& basis,
                                       double consistency_tol = kConsistencyTolerance) {
  if (basis.ambient() != obs.rows()) throw std::invalid_argument("basis row count does not match");
  Eigen::MatrixXd out(obs.rows(), obs.cols());
  for (int j = 0; j < obs.cols(); ++j) {
    try {
      out.col(j) = complete_column(basis, obs.pattern().support(j), obs.observed_column(j), consistency_tol);
    } catch (const CompletionError& e) {
      throw CompletionError(e.kind(), j, "column " + std::to_string(j + 1) + ": " + e.what());
    }
  }
  return out;
}

/// max |X(i,j) - observed(i,j)| over the pattern.
inline double max_observed_residual(const ObservedMatrix& obs, const Eigen::MatrixXd& x) {
  double worst = 0.0;
  for (const Entry& e : obs.pattern().entries())
    worst = std::max(worst, std::fabs(x(e.row, e.col) - obs.at(e.row, e.col)));
  return worst;
}

// ---- generic rank tests ------------------------------------------------------

struct RankReport {
  int tested_rank = 0;
  int target = 0;
  int trials = 0;
  int pass_count = 0;
  double tolerance = kDefaultRankTolerance;
  /// False when every trial produced an ambiguous spectrum or was invalid.
  bool determinate = true;
  int invalid_trials = 0;
  std::vector<std::string> warnings;

  bool pass() const { return determinate && tested_rank == target; }
};

/// #Omega x r(m+n) Jacobian of (A, C) -> pi_Omega(A C) at (A, C).
inline Eigen::MatrixXd completion_jacobian(const ObservationPattern& p, const Eigen::MatrixXd& a,
                                           const Eigen::MatrixXd& c) {
  const int m = p.rows();
  const int r = static_cast<int>(a.cols());
  const auto entries = p.entries();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(entries.size()), r * (m + p.cols()));
  for (std::size_t row = 0; row < entries.size(); ++row) {
    const auto [i, j] = entries[row];
    const auto rr = static_cast<Eigen::Index>(row);
    for (int k = 0; k < r; ++k) {
      jac(rr, i * r + k) = c(k, j);
      jac(rr, m * r + j * r + k) = a(i, k);
    }
  }
  return jac;
}

/// Generic rank of the observation map on rank-r matrices; full rank
/// r(m + n - r) is equivalent to generic finite completability.
inline RankReport jacobian_rank_test(const ObservationPattern& p, int r, int trials, std::uint64_t seed,
                                     double tol = kDefaultRankTolerance) {
  check_rank_range(p, r);
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  RankReport rep;
  rep.target = static_cast<int>(determinantal_dimension(p.rows(), p.cols(), r));
  rep.trials = trials;
  rep.tolerance = tol;
  bool any_determinate = false;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(t)));
    const Eigen::MatrixXd a = gaussian_matrix(p.rows(), r, rng);
    const Eigen::MatrixXd c = gaussian_matrix(r, p.cols(), rng);
    const NumericalRank nr = numerical_rank(completion_jacobian(p, a, c), tol);
    if (!nr.determinate) {
      ++rep.invalid_trials;
      continue;
    }
    any_determinate = true;
    rep.tested_rank = std::max(rep.tested_rank, nr.rank);
    if (nr.rank == rep.target) ++rep.pass_count;
  }
  rep.determinate = any_determinate;
  return rep;
}

/// Evaluates a section functional using minors of an explicit basis.
inline double evaluate_section_on_basis(const SectionFunctional<double>& f, const DenseMatrix<double>& basis) {
  double acc = 0.0;
  for (const auto& term : f.terms) acc += term.coefficient * determinant(row_submatrix(basis, term.minor));
  return acc;
}

namespace detail {

// basis with rows perm[0..r) = identity and rows perm[r..m) = C
inline DenseMatrix<double> local_chart_basis(const std::vector<int>& perm, const Eigen::MatrixXd& c) {
  const int m = static_cast<int>(perm.size());
  const int r = static_cast<int>(c.cols());
  DenseMatrix<double> b(m, r);
  for (int k = 0; k < r; ++k) b(perm[static_cast<std::size_t>(k)], k) = 1.0;
  for (int i = r; i < m; ++i)
    for (int k = 0; k < r; ++k) b(perm[static_cast<std::size_t>(i)], k) = c(i - r, k);
  return b;
}

}  // namespace detail

inline constexpr double kSectionStep = 1e-6;
inline constexpr double kSectionCheckStep = 1e-7;
inline constexpr double kSectionDiscrepancy = 1e-4;

/// Rank of the hyperplane-section equations of the data, differentiated with
/// respect to the r(m - r) standard local coordinates of the column space.
/// Each column contributes #omega_j - r equations built on a base r-subset
/// psi_j; full rank r(m - r) witnesses finitely many generic solutions.
inline RankReport grassmann_section_rank_test(const ObservationPattern& p, int r, int trials, std::uint64_t seed,
                                              double tol = kDefaultRankTolerance) {
  check_rank_range(p, r);
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const int m = p.rows();
  const int n = p.cols();
  for (int j = 0; j < n; ++j)
    if (static_cast<int>(p.support(j).size()) < r)
      throw std::invalid_argument("column " + std::to_string(j + 1) + " has fewer than r observed entries");

  RankReport rep;
  rep.target = r * (m - r);
  rep.trials = trials;
  rep.tolerance = tol;
  if (static_cast<std::int64_t>(p.size()) != determinantal_dimension(m, n, r))
    rep.warnings.push_back("pattern size " + std::to_string(p.size()) + " differs from r(m+n-r) = " +
                           std::to_string(determinantal_dimension(m, n, r)));

  bool any_valid = false;
  for (int t = 0; t < trials; ++t) {
    // sample a chart and data with nondegenerate projections on every column
    std::vector<int> perm;
    Eigen::MatrixXd coords;
    std::vector<Subset> psi(static_cast<std::size_t>(n));
    Eigen::MatrixXd x;
    bool ok = false;
    for (int attempt = 0; attempt < kGenericRetries && !ok; ++attempt) {
      std::mt19937_64 rng(split_seed(split_seed(seed, static_cast<std::uint64_t>(t)), static_cast<std::uint64_t>(attempt)));
      perm = iota_subset(0, m);
      std::shuffle(perm.begin(), perm.end(), rng);
      coords = gaussian_matrix(m - r, r, rng);
      const Eigen::MatrixXd b = to_eigen(detail::local_chart_basis(perm, coords));
      x = b * gaussian_matrix(r, n, rng);
      ok = true;
      for (int j = 0; j < n && ok; ++j) {
        const Eigen::MatrixXd proj = rows_of(b, p.support(j));
        const NumericalRank nr = numerical_rank(proj);
        if (nr.rank != r || !nr.determinate) {
          ok = false;
          break;
        }
        Subset local = select_pivot_rows(proj, r);
        Subset global;
        for (int k : local) global.push_back(p.support(j)[static_cast<std::size_t>(k)]);
        psi[static_cast<std::size_t>(j)] = global;
      }
    }
    if (!ok) throw std::runtime_error("cannot find nondegenerate base subsets for some column");

    std::vector<SectionFunctional<double>> functionals;
    for (int j = 0; j < n; ++j) {
      const Subset& base = psi[static_cast<std::size_t>(j)];
      for (int k : p.support(j)) {
        if (std::binary_search(base.begin(), base.end(), k)) continue;
        Subset phi = base;
        phi.insert(std::upper_bound(phi.begin(), phi.end(), k), k);
        std::map<int, double> xv;
        for (int i : phi) xv[i] = x(i, j);
        functionals.push_back(section_functional(phi, xv));
      }
    }

    const int params = r * (m - r);
    auto differentiate = [&](double h) {
      Eigen::MatrixXd d(static_cast<Eigen::Index>(functionals.size()), params);
      for (int q = 0; q < params; ++q) {
        Eigen::MatrixXd plus = coords, minus = coords;
        plus(q / r, q % r) += h;
        minus(q / r, q % r) -= h;
        const auto bp = detail::local_chart_basis(perm, plus);
        const auto bm = detail::local_chart_basis(perm, minus);
        for (std::size_t f = 0; f < functionals.size(); ++f)
          d(static_cast<Eigen::Index>(f), q) =
              (evaluate_section_on_basis(functionals[f], bp) - evaluate_section_on_basis(functionals[f], bm)) / (2 * h);
      }
      return d;
    };
    const Eigen::MatrixXd d1 = differentiate(kSectionStep);
    const Eigen::MatrixXd d2 = differentiate(kSectionCheckStep);
    const double scale = d1.size() ? d1.cwiseAbs().maxCoeff() : 0.0;
    if (d1.size() && (d1 - d2).cwiseAbs().maxCoeff() > kSectionDiscrepancy * std::max(scale, 1e-300)) {
      ++rep.invalid_trials;
      continue;
    }
    const NumericalRank nr = numerical_rank(d1, tol);
    if (!nr.determinate) {
      ++rep.invalid_trials;
      continue;
    }
    any_valid = true;
    rep.tested_rank = std::max(rep.tested_rank, nr.rank);
    if (nr.rank == rep.target) ++rep.pass_count;
  }
  rep.determinate = any_valid;
  return rep;
}

// ---- Plücker system export ---------------------------------------------------

struct SectionRowOrigin {
  int column = 0;  // 0-based
  Subset phi;      // 0-based (r+1)-subset of the column support
};

/// Linear part of the Plücker system: one row per column j and per
/// (r+1)-subset phi of omega_j; columns indexed by r-subsets in lexicographic
/// order. The quadratic Plücker relations are not included.
struct PluckerSystem {
  int m = 0;
  int r = 0;
  Eigen::MatrixXd coefficients;
  std::vector<SectionRowOrigin> rows;

  Subset coordinate(std::size_t index) const { return subset_unrank(index, m, r); }
};

inline PluckerSystem export_plucker_system(const ObservedMatrix& obs, int r) {
  const int m = obs.rows();
  check_plucker_dims(r, m);
  PluckerSystem sys{m, r, {}, {}};
  std::size_t count = 0;
  for (int j = 0; j < obs.cols(); ++j)
    count += binomial(static_cast<int>(obs.pattern().support(j).size()), r + 1);
  sys.coefficients = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(binomial(m, r)));
  Eigen::Index row = 0;
  for (int j = 0; j < obs.cols(); ++j) {
    for_each_combination(obs.pattern().support(j), r + 1, [&](const Subset& phi) {
      std::map<int, double> xv;
      for (int i : phi) xv[i] = obs.at(i, j);
      for (const auto& term : section_functional(phi, xv).terms)
        sys.coefficients(row, static_cast<Eigen::Index>(subset_rank(term.minor, m))) = term.coefficient;
      sys.rows.push_back({j, phi});
      ++row;
    });
  }
  return sys;
}

inline nlohmann::json index_map_json(const PluckerSystem& sys) {
  nlohmann::json coords = nlohmann::json::array();
  const std::uint64_t total = binomial(sys.m, sys.r);
  for (std::uint64_t k = 0; k < total; ++k) coords.push_back(to_one_based(sys.coordinate(k)));
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& o : sys.rows) rows.push_back({{"column", o.column + 1}, {"phi", to_one_based(o.phi)}});
  return {{"m", sys.m},
          {"r", sys.r},
          {"coordinates", coords},
          {"rows", rows},
          {"note", "linear section equations only; Plücker relations are not included"}};
}

/// Largest |row . p| relative to |row| |p| over the exported rows.
inline double null_space_residual(const PluckerSystem& sys, const PluckerVector<double>& p) {
  const Eigen::Map<const Eigen::VectorXd> v(p.coords().data(), static_cast<Eigen::Index>(p.size()));
  double worst = 0.0;
  for (Eigen::Index i = 0; i < sys.coefficients.rows(); ++i) {
    const double denom = sys.coefficients.row(i).norm() * v.norm();
    if (denom == 0.0) continue;
    worst = std::max(worst, std::fabs(sys.coefficients.row(i).dot(v)) / denom);
  }
  return worst;
}

// ---- CSV ---------------------------------------------------------------------

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::vector<std::string>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = t.find(',', start);
      cells.push_back(trim(std::string_view(t).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

inline double parse_double(const std::string& cell, int line, int col) {
  double v = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v))
    throw ParseError("not a number: '" + cell + "'", line, col);
  return v;
}

}  // namespace detail

/// CSV with '*' marking unobserved cells.
inline ObservedMatrix parse_observed_csv(std::string_view text) {
  const auto rows = detail::split_csv(text);
  if (rows.empty()) throw ParseError("empty matrix", 1, 1);
  const std::size_t n = rows.front().size();
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n)
      throw ParseError("ragged row: expected " + std::to_string(n) + " cells", static_cast<int>(i) + 1,
                       static_cast<int>(std::min(rows[i].size(), n)) + 1);
    for (std::size_t j = 0; j < n; ++j) {
      const std::string& cell = rows[i][j];
      if (cell == "*") {
        values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.0;
        continue;
      }
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          detail::parse_double(cell, static_cast<int>(i) + 1, static_cast<int>(j) + 1);
      entries.push_back({static_cast<int>(i), static_cast<int>(j)});
    }
  }
  ObservationPattern pattern(static_cast<int>(rows.size()), static_cast<int>(n), entries);
  return ObservedMatrix(std::move(pattern), std::move(values));
}

/// Plain numeric CSV (no unobserved cells).
inline Eigen::MatrixXd parse_matrix_csv(std::string_view text) {
  const ObservedMatrix obs = parse_observed_csv(text);
  if (obs.pattern().size() != static_cast<std::size_t>(obs.rows()) * static_cast<std::size_t>(obs.cols()))
    throw ParseError("unobserved cell in a dense matrix", 1, 1);
  return obs.values();
}

inline std::string format_number(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

inline std::string to_csv(const Eigen::MatrixXd& a) {
  std::string out;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) out += ',';
      out += format_number(a(i, j));
    }
    out += '\n';
  }
  return out;
}

inline std::string to_csv(const ObservedMatrix& obs) {
  std::string out;
  for (int i = 0; i < obs.rows(); ++i) {
    for (int j = 0; j < obs.cols(); ++j) {
      if (j) out += ',';
      out += obs.pattern().contains(i, j) ? format_number(obs.at(i, j)) : "*";
    }
    out += '\n';
  }
  return out;
}

}  // namespace lrmc
