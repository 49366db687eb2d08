#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace lrmc;
using namespace lrmc::testing;

namespace {

std::vector<SlmfColumnSource> sourced(const std::vector<std::pair<Subset, int>>& cols) {
  std::vector<SlmfColumnSource> out;
  for (const auto& [s, k] : cols) out.push_back({s, k});
  return out;
}

// Partition {1,2}/{3,4,5}: three subsets of column 1 plus column 2, three subsets of column 4 plus column 5.
Certificate paper_finite_certificate() {
  Certificate c;
  c.kind = CertificateKind::finite;
  c.partition = {{0, 1}, {2, 3, 4}};
  c.slmfs = {sourced({{{0, 1, 2}, 0}, {{0, 1, 3}, 0}, {{0, 1, 4}, 0}, {{3, 4, 5}, 1}}),
             sourced({{{1, 3, 5}, 3}, {{0, 1, 3}, 3}, {{0, 1, 4}, 3}, {{0, 2, 4}, 4}})};
  return c;
}

Certificate paper_unique_certificate() {
  Certificate c;
  c.kind = CertificateKind::unique;
  c.partition = {{0, 1}, {3, 4}, {2, 5}};
  c.slmfs = {sourced({{{0, 1, 2}, 0}, {{0, 1, 3}, 0}, {{0, 1, 4}, 0}, {{3, 4, 5}, 1}}),
             sourced({{{1, 3, 5}, 3}, {{0, 1, 3}, 3}, {{0, 1, 4}, 3}, {{0, 2, 4}, 4}}),
             sourced({{{0, 1, 2}, 2}, {{0, 1, 3}, 2}, {{0, 1, 4}, 5}, {{0, 1, 5}, 5}})};
  return c;
}

// Relaxed check evaluated directly from the definition, for cross-checking.
bool relaxed_oracle(const ObservationPattern& p, int r) {
  const int m = p.rows();
  if (static_cast<std::int64_t>(p.size()) != determinantal_dimension(m, p.cols(), r)) return false;
  for (RowMask rows = 1; rows < (RowMask{1} << m); ++rows) {
    const int s = mask_size(rows);
    if (s < r + 1) continue;
    std::int64_t lhs = 0;
    for (int j = 0; j < p.cols(); ++j) {
      int c = 0;
      for (int i : p.support(j)) c += (rows >> i & 1) != 0;
      lhs += std::max(c - r, 0);
    }
    if (lhs > r * (s - r)) return false;
    if (s == m && lhs != r * (m - r)) return false;
  }
  return true;
}

}  // namespace

TEST(VerifyCertificate, PaperCertificates) {
  const auto a = verify_certificate(example_main(), 2, paper_finite_certificate());
  EXPECT_TRUE(a.valid) << a.detail;
  const auto b = verify_certificate(example_unique(), 2, paper_unique_certificate());
  EXPECT_TRUE(b.valid) << b.detail;
}

TEST(VerifyCertificate, ShortColumnFailsClauseOne) {
  const auto p = example_main().without_entry(1, 2);  // column 3 keeps one entry
  const auto v = verify_certificate(p, 2, paper_finite_certificate());
  EXPECT_FALSE(v.valid);
  EXPECT_EQ(v.failing_clause, "i");
}

TEST(VerifyCertificate, StructuralDefects) {
  auto c = paper_finite_certificate();
  c.partition[1].push_back(1);
  EXPECT_EQ(verify_certificate(example_main(), 2, c).failing_clause, "structure");
  c = paper_finite_certificate();
  c.partition[1].pop_back();
  EXPECT_EQ(verify_certificate(example_main(), 2, c).failing_clause, "structure");
  c = paper_finite_certificate();
  c.kind = CertificateKind::unique;
  EXPECT_EQ(verify_certificate(example_main(), 2, c).failing_clause, "structure");
}

TEST(VerifyCertificate, SupportOutsideSourceColumn) {
  auto c = paper_finite_certificate();
  c.slmfs[0][3].support = {2, 4, 5};  // not inside column 2
  const auto v = verify_certificate(example_main(), 2, c);
  EXPECT_FALSE(v.valid);
  EXPECT_EQ(v.failing_clause, "ii");
}

TEST(VerifyCertificate, SourceColumnFromAnotherGroup) {
  auto c = paper_finite_certificate();
  c.slmfs[0][0].source_column = 3;
  EXPECT_EQ(verify_certificate(example_main(), 2, c).failing_clause, "ii");
}

TEST(VerifyCertificate, NonSlmfGroup) {
  auto c = paper_finite_certificate();
  c.slmfs[0][1].support = {0, 1, 2};
  const auto v = verify_certificate(example_main(), 2, c);
  EXPECT_FALSE(v.valid);
  EXPECT_EQ(v.failing_clause, "ii");
}

TEST(CertificateJson, RoundTripIsOneBased) {
  const auto c = paper_unique_certificate();
  const auto j = to_json(c);
  EXPECT_EQ(j.at("kind"), "unique");
  EXPECT_EQ(j.at("partition")[2], nlohmann::json::parse("[3,6]"));
  EXPECT_EQ(j.at("slmfs")[0].at("columns")[3].at("source_column"), 2);
  const auto back = certificate_from_json(j);
  EXPECT_EQ(back.partition, c.partition);
  EXPECT_EQ(back.slmfs, c.slmfs);
  EXPECT_THROW(certificate_from_json(nlohmann::json::parse(R"({"kind":"x","partition":[],"slmfs":[]})")),
               std::invalid_argument);
}

TEST(FiniteSearch, MainExample) {
  const auto s = find_finite_certificate(example_main(), 2);
  ASSERT_EQ(s.status, SearchStatus::found);
  EXPECT_TRUE(same_partition(s.certificate->partition, {{0, 1}, {2, 3, 4}}));
  EXPECT_TRUE(verify_certificate(example_main(), 2, *s.certificate).valid);
  // the first group's selection is the family with columns {123},{124},{125},{345}
  EXPECT_EQ(s.certificate->group_slmf(0, 6, 2).columns(), phi1().columns());
}

TEST(FiniteSearch, NoCertificateAfterAnyDeletion) {
  const auto p = example_main();
  for (const Entry& e : p.entries()) {
    const auto s = find_finite_certificate(p.without_entry(e.row, e.col), 2);
    EXPECT_EQ(s.status, SearchStatus::none) << e.row + 1 << "," << e.col + 1;
  }
}

TEST(FiniteSearch, ShortColumnImmediatelyNone) {
  const auto s = find_finite_certificate(example_main().without_entry(1, 2), 2);
  EXPECT_EQ(s.status, SearchStatus::none);
  EXPECT_LE(s.nodes, 1u);
}

TEST(FiniteSearch, TinyBudgetIsInconclusive) {
  const auto s = find_finite_certificate(example_main(), 2, 1);
  EXPECT_EQ(s.status, SearchStatus::budget_exhausted);
  EXPECT_FALSE(s.certificate);
}

TEST(UniqueSearch, ExtendedExample) {
  const auto s = find_unique_certificate(example_unique(), 2);
  ASSERT_EQ(s.status, SearchStatus::found);
  EXPECT_TRUE(same_partition(s.certificate->partition, {{0, 1}, {3, 4}, {2, 5}}));
  EXPECT_TRUE(verify_certificate(example_unique(), 2, *s.certificate).valid);
  bool third_found = false;
  for (std::size_t g = 0; g < s.certificate->partition.size(); ++g)
    if (s.certificate->group_slmf(g, 6, 2).columns() == std::vector<Subset>{{0, 1, 2}, {0, 1, 3}, {0, 1, 4}, {0, 1, 5}})
      third_found = true;
  EXPECT_TRUE(third_found);
}

TEST(UniqueSearch, MainExampleHasNone) {
  EXPECT_EQ(find_unique_certificate(example_main(), 2).status, SearchStatus::none);
}

TEST(UniqueSearch, TooFewColumnsForGroups) {
  const auto p = random_pattern(6, 2, 6, 1);
  EXPECT_EQ(find_unique_certificate(p, 2).status, SearchStatus::none);
}

TEST(SearchProperty, ReturnedCertificatesVerifyAndImplySize) {
  std::mt19937_64 rng(31);
  int found = 0;
  for (int t = 0; t < 150; ++t) {
    const int m = 4 + static_cast<int>(rng() % 3);
    const int n = 3 + static_cast<int>(rng() % 5);
    const int r = 1 + static_cast<int>(rng() % 2);
    if (r > std::min(m, n)) continue;
    const int k = r + static_cast<int>(rng() % (m - r + 1));
    const auto p = random_pattern(m, n, k, rng());
    for (auto kind : {CertificateKind::finite, CertificateKind::unique}) {
      const auto s = find_certificate(p, r, kind);
      ASSERT_NE(s.status, SearchStatus::budget_exhausted);
      if (s.status != SearchStatus::found) continue;
      ++found;
      EXPECT_TRUE(verify_certificate(p, r, *s.certificate).valid);
      EXPECT_TRUE(minimum_size_check(p, r).pass);
      if (kind == CertificateKind::finite) {
        EXPECT_NE(check_necessary_condition(p, r).contains_relaxed, Tristate::no);
      }
    }
  }
  EXPECT_GT(found, 10);
}

TEST(SearchProperty, UniqueImpliesFiniteOnFixtures) {
  for (const auto& p : {example_main(), example_unique()})
    if (find_unique_certificate(p, 2).status == SearchStatus::found) {
      EXPECT_EQ(find_finite_certificate(p, 2).status, SearchStatus::found);
    }
}

TEST(Relaxed, MainExampleHolds) {
  const auto v = check_relaxed_slmf(example_main(), 2);
  EXPECT_TRUE(v.holds);
  EXPECT_FALSE(v.violating_rows);
}

TEST(Relaxed, CrowdedRowsRejected) {
  const auto v = check_relaxed_slmf(crowded_rows_pattern(), 2);
  EXPECT_FALSE(v.holds);
  EXPECT_FALSE(v.size_mismatch);
  ASSERT_TRUE(v.violating_rows);
  EXPECT_EQ(*v.violating_rows, (Subset{0, 1, 2}));
  EXPECT_EQ(v.lhs, 3);
  EXPECT_EQ(v.rhs, 2);
}

TEST(Relaxed, SizeMismatch) {
  const auto v = check_relaxed_slmf(example_unique(), 2);
  EXPECT_FALSE(v.holds);
  EXPECT_TRUE(v.size_mismatch);
  EXPECT_EQ(v.lhs, 24);
  EXPECT_EQ(v.rhs, 20);
}

TEST(RelaxedProperty, AgreesWithOracle) {
  std::mt19937_64 rng(41);
  int holds = 0, total = 0;
  for (int t = 0; t < 2000; ++t) {
    const int m = 4 + static_cast<int>(rng() % 3);
    const int n = 3 + static_cast<int>(rng() % 4);
    const int r = 1 + static_cast<int>(rng() % 2);
    const auto target = determinantal_dimension(m, n, r);
    if (target > m * n) continue;
    // draw exactly target entries
    std::vector<Entry> all;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) all.push_back({i, j});
    std::vector<Entry> pick;
    std::sample(all.begin(), all.end(), std::back_inserter(pick), target, rng);
    const ObservationPattern p(m, n, pick);
    const bool v = check_relaxed_slmf(p, r).holds;
    ASSERT_EQ(v, relaxed_oracle(p, r));
    holds += v;
    ++total;
  }
  EXPECT_GT(holds, 0);
  EXPECT_LT(holds, total);
}

TEST(RelaxedProperty, PermutationInvariance) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 300; ++t) {
    const auto base = t % 2 ? example_main() : crowded_rows_pattern();
    const auto p = permute(base, random_permutation(rng, 6), random_permutation(rng, 5));
    EXPECT_EQ(check_relaxed_slmf(p, 2).holds, check_relaxed_slmf(base, 2).holds);
  }
}

TEST(Necessary, ExactSizeReducesToRelaxedCheck) {
  const auto v = check_necessary_condition(example_main(), 2);
  EXPECT_EQ(v.contains_relaxed, Tristate::yes);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(*v.witness, example_main());
  EXPECT_EQ(check_necessary_condition(crowded_rows_pattern(), 2).contains_relaxed, Tristate::no);
}

TEST(Necessary, LargerPatternFindsSubPattern) {
  const auto v = check_necessary_condition(example_unique(), 2);
  EXPECT_EQ(v.contains_relaxed, Tristate::yes);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->size(), 20u);
  EXPECT_TRUE(check_relaxed_slmf(*v.witness, 2).holds);
  for (const Entry& e : v.witness->entries()) EXPECT_TRUE(example_unique().contains(e.row, e.col));
}

TEST(Necessary, TooSmallIsImmediatelyFalse) {
  const auto v = check_necessary_condition(example_main().without_entry(0, 0), 2);
  EXPECT_EQ(v.contains_relaxed, Tristate::no);
  EXPECT_EQ(v.work, 0u);
}

TEST(Necessary, TinyBudgetIsInconclusive) {
  EXPECT_EQ(check_necessary_condition(example_unique(), 2, 1).contains_relaxed, Tristate::inconclusive);
}
