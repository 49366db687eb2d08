#pragma once

// Combinatorial completability analysis of an observation pattern:
//
//   * certificates: a partition of the columns into r groups (finite
//     completability) or r + 1 groups (unique completability), each group
//     supporting an (r, m)-SLMF built from (r+1)-subsets of its column
//     supports; verification and exhaustive search;
//   * the relaxed-SLMF counting condition and the search for a relaxed-SLMF
//     sub-pattern, a necessary condition for generic finite completability.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrmc/pattern.hpp"
#include "lrmc/slmf.hpp"
#include "lrmc/slmf_types.hpp"
#include "lrmc/subsets.hpp"

namespace lrmc {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

enum class CertificateKind { finite, unique };

inline const char* to_string(CertificateKind k) { return k == CertificateKind::finite ? "finite" : "unique"; }

inline int group_count(CertificateKind kind, int r) { return kind == CertificateKind::finite ? r : r + 1; }

struct SlmfColumnSource {
  Subset support;     // 0-based rows, size r + 1
  int source_column;  // 0-based pattern column
  friend bool operator==(const SlmfColumnSource&, const SlmfColumnSource&) = default;
};

struct Certificate {
  CertificateKind kind = CertificateKind::finite;
  std::vector<std::vector<int>> partition;            // 0-based column groups
  std::vector<std::vector<SlmfColumnSource>> slmfs;   // one per group, m - r columns each

  Slmf group_slmf(std::size_t group, int m, int r) const {
    std::vector<Subset> cols;
    for (const auto& c : slmfs.at(group)) cols.push_back(c.support);
    return Slmf(m, r, std::move(cols));
  }
};

struct CertificateCheck {
  bool valid = false;
  /// "structure", "i" or "ii"; empty when valid.
  std::string failing_clause;
  std::string detail;
};

inline CertificateCheck verify_certificate(const ObservationPattern& p, int r, const Certificate& cert) {
  const int m = p.rows();
  const int n = p.cols();
  auto fail = [](std::string clause, std::string detail) {
    return CertificateCheck{false, std::move(clause), std::move(detail)};
  };

  for (int j = 0; j < n; ++j)
    if (static_cast<int>(p.support(j).size()) < r)
      return fail("i", "column " + std::to_string(j + 1) + " has " + std::to_string(p.support(j).size()) +
                           " < r observed entries");

  const int groups = group_count(cert.kind, r);
  if (static_cast<int>(cert.partition.size()) != groups || cert.slmfs.size() != cert.partition.size())
    return fail("structure", "expected " + std::to_string(groups) + " groups");
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t g = 0; g < cert.partition.size(); ++g) {
    if (cert.partition[g].empty()) return fail("structure", "group " + std::to_string(g + 1) + " is empty");
    for (int j : cert.partition[g]) {
      if (j < 0 || j >= n) return fail("structure", "column index out of range");
      if (owner[static_cast<std::size_t>(j)] >= 0)
        return fail("structure", "column " + std::to_string(j + 1) + " appears in two groups");
      owner[static_cast<std::size_t>(j)] = static_cast<int>(g);
    }
  }
  for (int j = 0; j < n; ++j)
    if (owner[static_cast<std::size_t>(j)] < 0)
      return fail("structure", "column " + std::to_string(j + 1) + " is in no group");

  for (std::size_t g = 0; g < cert.slmfs.size(); ++g) {
    const auto& cols = cert.slmfs[g];
    if (static_cast<int>(cols.size()) != m - r)
      return fail("ii", "group " + std::to_string(g + 1) + " SLMF needs m - r columns");
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& src = cols[c];
      const std::string where = "group " + std::to_string(g + 1) + " SLMF column " + std::to_string(c + 1);
      if (src.source_column < 0 || src.source_column >= n ||
          owner[static_cast<std::size_t>(src.source_column)] != static_cast<int>(g))
        return fail("ii", where + ": source column not in the group");
      if (static_cast<int>(src.support.size()) != r + 1 || !is_sorted_subset(src.support, m))
        return fail("ii", where + ": support must be r + 1 sorted rows");
      const RowMask s = to_mask(src.support);
      if ((s & ~p.support_mask(src.source_column)) != 0)
        return fail("ii", where + ": " + format_subset(src.support) + " not contained in column " +
                              std::to_string(src.source_column + 1));
    }
    const SlmfVerdict v = check_slmf_combinatorial(cert.group_slmf(g, m, r));
    if (!v.is_slmf)
      return fail("ii", "group " + std::to_string(g + 1) + " is not an SLMF (violating columns " +
                            format_subset(*v.witness) + ")");
  }
  return {true, {}, {}};
}

enum class SearchStatus { found, none, budget_exhausted };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::none: return "none";
    case SearchStatus::budget_exhausted: return "inconclusive: budget exhausted";
  }
  return "?";
}

struct CertificateSearch {
  SearchStatus status = SearchStatus::none;
  std::optional<Certificate> certificate;
  std::uint64_t nodes = 0;
};

namespace detail {

// Backtracking over assignments of the columns with at least r + 1 entries to
// groups. Iterative deepening on the number of assigned columns finds a
// partition whose groups are minimal; unassigned columns are then added to the
// last group. Groups are ordered by their smallest column.
class CertificateSearcher {
 public:
  CertificateSearcher(const ObservationPattern& p, int r, int groups, std::uint64_t budget)
      : p_(p), r_(r), groups_(groups), budget_(budget) {
    for (int j = 0; j < p.cols(); ++j) {
      if (static_cast<int>(p.support(j).size()) >= r + 1) {
        useful_.push_back(j);
        std::vector<RowMask> pool;
        for (const Subset& s : column_subsets(p.support(j), r + 1)) pool.push_back(to_mask(s));
        pools_[j] = std::move(pool);
      }
    }
  }

  CertificateSearch run(CertificateKind kind) {
    CertificateSearch out;
    const int m = p_.rows();
    for (int j = 0; j < p_.cols(); ++j)
      if (static_cast<int>(p_.support(j).size()) < r_) return out;  // condition i
    if (p_.cols() < groups_) return out;

    if (m == r_) {
      // Zero-column SLMFs are vacuous; any partition into nonempty groups works.
      Certificate c{kind, {}, std::vector<std::vector<SlmfColumnSource>>(static_cast<std::size_t>(groups_))};
      for (int g = 0; g < groups_ - 1; ++g) c.partition.push_back({g});
      c.partition.push_back(iota_subset(groups_ - 1, p_.cols()));
      out.status = SearchStatus::found;
      out.certificate = std::move(c);
      return out;
    }

    for (int s = groups_; s <= static_cast<int>(useful_.size()); ++s) {
      target_ = s;
      std::vector<std::vector<int>> groups;
      const bool hit = dfs(0, 0, groups);
      out.nodes = nodes_;
      if (exhausted_) {
        out.status = SearchStatus::budget_exhausted;
        return out;
      }
      if (hit) {
        out.status = SearchStatus::found;
        out.certificate = build(kind, solution_);
        return out;
      }
    }
    out.nodes = nodes_;
    return out;
  }

 private:
  bool tick() {
    if (++nodes_ > budget_) exhausted_ = true;
    return !exhausted_;
  }

  // Greedy matroid rank of the pooled (r+1)-subsets reaches m - r.
  bool feasible(const std::vector<int>& cols) {
    auto it = memo_.find(cols);
    if (it != memo_.end()) return it->second;
    tick();
    const bool ok = static_cast<int>(select(cols).size()) == p_.rows() - r_;
    memo_.emplace(cols, ok);
    return ok;
  }

  std::vector<SlmfColumnSource> select(const std::vector<int>& cols) const {
    std::vector<RowMask> pool;
    std::vector<int> source;
    for (int j : cols) {
      auto it = pools_.find(j);
      if (it == pools_.end()) continue;
      for (RowMask s : it->second) {
        if (std::find(pool.begin(), pool.end(), s) != pool.end()) continue;
        pool.push_back(s);
        source.push_back(j);
      }
    }
    std::vector<SlmfColumnSource> out;
    for (int idx : greedy_surplus_hall(pool, r_, p_.rows() - r_))
      out.push_back({from_mask(pool[static_cast<std::size_t>(idx)]), source[static_cast<std::size_t>(idx)]});
    return out;
  }

  bool dfs(std::size_t pos, int assigned, std::vector<std::vector<int>>& groups) {
    if (!tick()) return false;
    const int used = static_cast<int>(groups.size());
    const int remaining = static_cast<int>(useful_.size() - pos);
    if (assigned > target_ || assigned + remaining < target_) return false;
    if (groups_ - used > remaining) return false;

    // every infeasible group must be completable from the columns still to come
    std::vector<int> rest(useful_.begin() + static_cast<std::ptrdiff_t>(pos), useful_.end());
    for (const auto& g : groups) {
      if (feasible(g)) continue;
      std::vector<int> widened(g);
      widened.insert(widened.end(), rest.begin(), rest.end());
      if (!feasible(widened)) return false;
      if (exhausted_) return false;
    }

    if (pos == useful_.size()) {
      if (used != groups_) return false;
      for (const auto& g : groups)
        if (!feasible(g)) return false;
      solution_ = groups;
      return true;
    }

    const int col = useful_[pos];
    for (int g = 0; g < used; ++g) {
      const auto gi = static_cast<std::size_t>(g);
      if (feasible(groups[gi])) continue;  // a minimal solution never pads a feasible group
      groups[gi].push_back(col);
      const bool hit = dfs(pos + 1, assigned + 1, groups);
      groups[gi].pop_back();
      if (hit || exhausted_) return hit;
    }
    if (used < groups_) {
      groups.push_back({col});
      const bool hit = dfs(pos + 1, assigned + 1, groups);
      groups.pop_back();
      if (hit || exhausted_) return hit;
    }
    return dfs(pos + 1, assigned, groups);
  }

  Certificate build(CertificateKind kind, std::vector<std::vector<int>> groups) const {
    std::vector<int> placed(static_cast<std::size_t>(p_.cols()), 0);
    for (const auto& g : groups)
      for (int j : g) placed[static_cast<std::size_t>(j)] = 1;
    std::sort(groups.begin(), groups.end());
    for (int j = 0; j < p_.cols(); ++j)
      if (!placed[static_cast<std::size_t>(j)]) groups.back().push_back(j);
    Certificate c{kind, {}, {}};
    for (auto& g : groups) {
      std::sort(g.begin(), g.end());
      c.slmfs.push_back(select(g));
      c.partition.push_back(std::move(g));
    }
    return c;
  }

  const ObservationPattern& p_;
  int r_;
  int groups_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  int target_ = 0;
  std::vector<int> useful_;
  std::map<int, std::vector<RowMask>> pools_;
  std::map<std::vector<int>, bool> memo_;
  std::vector<std::vector<int>> solution_;
};

}  // namespace detail

inline CertificateSearch find_certificate(const ObservationPattern& p, int r, CertificateKind kind,
                                          std::uint64_t budget = kDefaultBudget) {
  check_rank_range(p, r);
  detail::CertificateSearcher searcher(p, r, group_count(kind, r), budget);
  return searcher.run(kind);
}

inline CertificateSearch find_finite_certificate(const ObservationPattern& p, int r,
                                                 std::uint64_t budget = kDefaultBudget) {
  return find_certificate(p, r, CertificateKind::finite, budget);
}

inline CertificateSearch find_unique_certificate(const ObservationPattern& p, int r,
                                                 std::uint64_t budget = kDefaultBudget) {
  return find_certificate(p, r, CertificateKind::unique, budget);
}

/// Same partition up to relabeling of the groups.
inline bool same_partition(std::vector<std::vector<int>> a, std::vector<std::vector<int>> b) {
  for (auto& g : a) std::sort(g.begin(), g.end());
  for (auto& g : b) std::sort(g.begin(), g.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

inline nlohmann::json to_json(const Certificate& c) {
  nlohmann::json partition = nlohmann::json::array();
  for (const auto& g : c.partition) partition.push_back(to_one_based(g));
  nlohmann::json slmfs = nlohmann::json::array();
  for (const auto& group : c.slmfs) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& col : group)
      cols.push_back({{"support", to_one_based(col.support)}, {"source_column", col.source_column + 1}});
    slmfs.push_back({{"columns", cols}});
  }
  return {{"kind", to_string(c.kind)}, {"partition", partition}, {"slmfs", slmfs}};
}

inline Certificate certificate_from_json(const nlohmann::json& j) {
  Certificate c;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "finite")
    c.kind = CertificateKind::finite;
  else if (kind == "unique")
    c.kind = CertificateKind::unique;
  else
    throw std::invalid_argument("certificate kind must be finite or unique");
  for (const auto& g : j.at("partition")) {
    std::vector<int> grp = g.get<std::vector<int>>();
    for (int& x : grp) --x;
    c.partition.push_back(std::move(grp));
  }
  for (const auto& s : j.at("slmfs")) {
    std::vector<SlmfColumnSource> cols;
    for (const auto& col : s.at("columns")) {
      Subset sup = col.at("support").get<Subset>();
      for (int& x : sup) --x;
      std::sort(sup.begin(), sup.end());
      cols.push_back({std::move(sup), col.at("source_column").get<int>() - 1});
    }
    c.slmfs.push_back(std::move(cols));
  }
  return c;
}

// ---- relaxed SLMF -----------------------------------------------------------

struct RelaxedVerdict {
  bool holds = false;
  bool size_mismatch = false;
  /// First row set I (0-based) where the inequality fails, or [m] when only
  /// the equality at I = [m] fails.
  std::optional<Subset> violating_rows;
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  std::uint64_t work = 0;
};

/// sum_j max(#(omega_j ∩ I) - r, 0) over all columns.
inline std::int64_t relaxed_excess(const std::vector<RowMask>& cols, RowMask rows, int r) {
  std::int64_t total = 0;
  for (RowMask c : cols) total += std::max(mask_size(c & rows) - r, 0);
  return total;
}

/// Requires #Omega = r(m + n - r), sum_j max(#(omega_j ∩ I) - r, 0) <=
/// r(#I - r) for every I with #I >= r + 1 (increasing size, lexicographic),
/// and equality at I = [m].
inline RelaxedVerdict check_relaxed_slmf(const ObservationPattern& p, int r) {
  RelaxedVerdict out;
  const int m = p.rows();
  if (static_cast<std::int64_t>(p.size()) != determinantal_dimension(m, p.cols(), r)) {
    out.size_mismatch = true;
    out.lhs = static_cast<std::int64_t>(p.size());
    out.rhs = determinantal_dimension(m, p.cols(), r);
    return out;
  }
  if (m > 30) throw std::invalid_argument("relaxed-SLMF check limited to m <= 30 rows");
  std::vector<RowMask> cols;
  for (int j = 0; j < p.cols(); ++j) cols.push_back(p.support_mask(j));
  const Subset all = iota_subset(0, m);
  for (int s = r + 1; s <= m; ++s) {
    bool violated = false;
    for_each_combination(all, s, [&](const Subset& rows) {
      ++out.work;
      const std::int64_t lhs = relaxed_excess(cols, to_mask(rows), r);
      const std::int64_t rhs = static_cast<std::int64_t>(r) * (s - r);
      if (lhs > rhs) {
        out.violating_rows = rows;
        out.lhs = lhs;
        out.rhs = rhs;
        violated = true;
        return false;
      }
      return true;
    });
    if (violated) return out;
  }
  const std::int64_t lhs = relaxed_excess(cols, full_mask(m), r);
  const std::int64_t rhs = static_cast<std::int64_t>(r) * (m - r);
  out.lhs = lhs;
  out.rhs = rhs;
  if (lhs != rhs) {
    out.violating_rows = all;
    return out;
  }
  out.holds = true;
  return out;
}

enum class Tristate { yes, no, inconclusive };

inline const char* to_string(Tristate t) {
  switch (t) {
    case Tristate::yes: return "true";
    case Tristate::no: return "false";
    case Tristate::inconclusive: return "inconclusive";
  }
  return "?";
}

struct NecessaryVerdict {
  Tristate contains_relaxed = Tristate::no;
  std::optional<ObservationPattern> witness;
  std::uint64_t work = 0;
};

/// Searches for a sub-pattern of size r(m + n - r) that is a relaxed SLMF.
/// Budget counts visited removal sets plus row sets examined.
inline NecessaryVerdict check_necessary_condition(const ObservationPattern& p, int r,
                                                  std::uint64_t budget = kDefaultBudget) {
  NecessaryVerdict out;
  const std::int64_t target = determinantal_dimension(p.rows(), p.cols(), r);
  const auto total = static_cast<std::int64_t>(p.size());
  if (total < target) return out;
  if (total == target) {
    const RelaxedVerdict v = check_relaxed_slmf(p, r);
    out.work = v.work;
    if (v.holds) {
      out.contains_relaxed = Tristate::yes;
      out.witness = p;
    }
    return out;
  }

  const std::vector<Entry> entries = p.entries();
  const int drop = static_cast<int>(total - target);
  std::vector<int> col_count(static_cast<std::size_t>(p.cols()));
  for (int j = 0; j < p.cols(); ++j) col_count[static_cast<std::size_t>(j)] = static_cast<int>(p.support(j).size());
  std::vector<int> removed;
  bool exhausted = false;

  // removal sets in lexicographic order over the (row, column)-sorted entries
  auto dfs = [&](auto&& self, std::size_t start) -> bool {
    if (++out.work > budget) {
      exhausted = true;
      return false;
    }
    if (static_cast<int>(removed.size()) == drop) {
      std::vector<Entry> kept;
      std::size_t q = 0;
      for (std::size_t e = 0; e < entries.size(); ++e) {
        if (q < removed.size() && removed[q] == static_cast<int>(e))
          ++q;
        else
          kept.push_back(entries[e]);
      }
      ObservationPattern sub(p.rows(), p.cols(), kept);
      const RelaxedVerdict v = check_relaxed_slmf(sub, r);
      out.work += v.work;
      if (v.holds) {
        out.witness = std::move(sub);
        return true;
      }
      if (out.work > budget) exhausted = true;
      return false;
    }
    const std::size_t need = static_cast<std::size_t>(drop) - removed.size();
    for (std::size_t e = start; e + need <= entries.size(); ++e) {
      int& cnt = col_count[static_cast<std::size_t>(entries[e].col)];
      if (cnt <= r) continue;  // a column below r entries breaks equality at I = [m]
      --cnt;
      removed.push_back(static_cast<int>(e));
      const bool hit = self(self, e + 1);
      removed.pop_back();
      ++cnt;
      if (hit || exhausted) return hit;
    }
    return false;
  };

  if (dfs(dfs, 0))
    out.contains_relaxed = Tristate::yes;
  else if (exhausted)
    out.contains_relaxed = Tristate::inconclusive;
  return out;
}

}  // namespace lrmc
