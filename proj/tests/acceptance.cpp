// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "test_support.hpp"

using namespace lrmc;
using namespace lrmc::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<SlmfColumnSource> sourced(const std::vector<std::pair<Subset, int>>& cols) {
  std::vector<SlmfColumnSource> out;
  for (const auto& [s, k] : cols) out.push_back({s, k});
  return out;
}

Outcome main_example_regression() {
  const auto t0 = Clock::now();
  AnalysisOptions opt;
  opt.rank = 2;
  const AnalysisReport rep = analyze(example_main(), opt);
  const double secs = seconds_since(t0);

  std::ostringstream d;
  bool ok = rep.finite.status == SearchStatus::found;
  if (ok) {
    const Certificate& c = *rep.finite.certificate;
    ok = same_partition(c.partition, {{0, 1}, {2, 3, 4}}) && verify_certificate(example_main(), 2, c).valid;
    // the stated certificate for this partition, with the two printed families
    Certificate stated{CertificateKind::finite,
                       {{0, 1}, {2, 3, 4}},
                       {sourced({{{0, 1, 2}, 0}, {{0, 1, 3}, 0}, {{0, 1, 4}, 0}, {{3, 4, 5}, 1}}),
                        sourced({{{1, 3, 5}, 3}, {{0, 1, 3}, 3}, {{0, 1, 4}, 3}, {{0, 2, 4}, 4}})}};
    ok = ok && verify_certificate(example_main(), 2, stated).valid;
    d << "partition";
    for (const auto& g : c.partition) d << ' ' << format_subset(g);
  }
  const bool unique_absent = rep.unique.status == SearchStatus::none;
  const bool relaxed = rep.relaxed && rep.relaxed->holds;
  const int jac = rep.jacobian.tested_rank;
  const int sec = rep.section ? rep.section->tested_rank : -1;
  ok = ok && unique_absent && relaxed && jac == 18 && rep.jacobian.pass() && sec == 8 && rep.section->pass() &&
       secs < 10.0;
  d << "; unique " << to_string(rep.unique.status) << "; relaxed " << (relaxed ? "true" : "false") << "; jacobian "
    << jac << "/18; section " << sec << "/8; " << secs << " s";
  return {ok, d.str()};
}

Outcome deletion_sensitivity() {
  const auto p = example_main();
  int cases = 0, good = 0;
  for (const Entry& e : p.entries()) {
    const auto q = p.without_entry(e.row, e.col);
    const bool size_fails = !minimum_size_check(q, 2).pass;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      ++cases;
      const auto rep = jacobian_rank_test(q, 2, 3, seed);
      good += size_fails && rep.determinate && rep.tested_rank == 17;
    }
  }
  return {cases == 180 && good == cases, std::to_string(good) + "/" + std::to_string(cases) +
                                             " (deletion, seed) pairs with size fail and rank 17"};
}

Outcome extended_example_regression() {
  const auto t0 = Clock::now();
  AnalysisOptions opt;
  opt.rank = 2;
  const AnalysisReport rep = analyze(example_unique(), opt);
  const double secs = seconds_since(t0);
  std::ostringstream d;
  bool ok = rep.unique.status == SearchStatus::found;
  if (ok) {
    const Certificate& c = *rep.unique.certificate;
    ok = same_partition(c.partition, {{0, 1}, {3, 4}, {2, 5}}) && verify_certificate(example_unique(), 2, c).valid;
    bool third = false;
    for (std::size_t g = 0; g < c.partition.size(); ++g)
      third |= c.group_slmf(g, 6, 2).columns() == std::vector<Subset>{{0, 1, 2}, {0, 1, 3}, {0, 1, 4}, {0, 1, 5}};
    ok = ok && third;
    d << "partition";
    for (const auto& g : c.partition) d << ' ' << format_subset(g);
    d << "; third family " << (third ? "matches" : "differs");
  }
  ok = ok && rep.exit_code() == 0 && secs < 30.0;
  d << "; exit " << rep.exit_code() << "; " << secs << " s";
  return {ok, d.str()};
}

Outcome plucker_fixture() {
  const auto p = plucker_of_basis(basis_from_eigen(small_basis()));
  const bool exact = p.coords() == std::vector<double>{1, 2, 4, 0, -3, -6};
  const double rel = gr24_relation_residual(p);
  bool only23 = true;
  for (std::size_t i = 0; i < p.size(); ++i)
    only23 &= projection_nondegenerate(p, p.subset(i)) == (p.subset(i) != Subset{1, 2});
  std::ostringstream d;
  d << "coords";
  for (double v : p.coords()) d << ' ' << v;
  d << "; relation " << rel << "; degenerate only at {2,3}: " << (only23 ? "yes" : "no");
  return {exact && rel == 0.0 && only23, d.str()};
}

Outcome bphi_correctness() {
  int good = 0, total = 0;
  double worst = 0.0;
  for (const Slmf& phi : {phi1(), phi2()})
    for (std::uint64_t s = 0; s < 200; ++s) {
      ++total;
      const auto basis = sample_generic_subspace(6, 2, split_seed(0xB0, s));
      const Eigen::MatrixXd b = to_eigen(basis.matrix());
      const Eigen::MatrixXd m = to_eigen(evaluate_bphi(phi, plucker_of_basis(basis)));
      const double resid = (m.transpose() * b).cwiseAbs().maxCoeff() / (m.norm() * b.norm());
      worst = std::max(worst, resid);
      const auto nr = numerical_rank(m);
      good += nr.determinate && nr.rank == 4 && resid < 1e-9;
    }
  std::ostringstream d;
  d << good << "/" << total << " with rank 4; worst relative residual " << worst;
  return {good == total, d.str()};
}

Outcome oracle_equivalence() {
  int disagreements = 0, total = 0;
  // all ordered choices of three 2-subsets of [4]
  const auto pool = combinations(iota_subset(0, 4), 2);
  for (const auto& a : pool)
    for (const auto& b : pool)
      for (const auto& c : pool) {
        const Slmf phi(4, 1, {a, b, c});
        ++total;
        disagreements += check_slmf_combinatorial(phi).is_slmf != check_slmf_randomized(phi, 3, total).is_slmf;
      }
  std::mt19937_64 rng(6);
  for (int t = 0; t < 500; ++t) {
    const Slmf phi = random_phi(rng, 6, 2);
    ++total;
    disagreements += check_slmf_combinatorial(phi).is_slmf != check_slmf_randomized(phi, 3, rng()).is_slmf;
  }
  return {disagreements == 0, std::to_string(disagreements) + " disagreements over " + std::to_string(total)};
}

Outcome completion_round_trip() {
  std::mt19937_64 rng(7);
  int good = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Eigen::MatrixXd b = gaussian_matrix(6, 2, rng);
    const Eigen::MatrixXd x = b * gaussian_matrix(2, 5, rng);
    const Eigen::MatrixXd xc = complete_matrix(ObservedMatrix::observe(x, example_main()), basis_from_eigen(b));
    const double err = relative_error(xc, x);
    worst = std::max(worst, err);
    good += err < 1e-9;
  }
  std::ostringstream d;
  d << good << "/100 below 1e-9; worst " << worst;
  return {good == 100, d.str()};
}

Outcome relaxed_counterexample() {
  const auto v = check_relaxed_slmf(crowded_rows_pattern(), 2);
  const bool ok = !v.holds && !v.size_mismatch && v.violating_rows && *v.violating_rows == Subset{0, 1, 2} &&
                  v.lhs == 3 && v.rhs == 2;
  std::ostringstream d;
  d << "holds " << (v.holds ? "true" : "false");
  if (v.violating_rows) d << "; I = " << format_subset(*v.violating_rows) << ": " << v.lhs << " > " << v.rhs;
  return {ok, d.str()};
}

Outcome export_soundness() {
  std::mt19937_64 rng(9);
  int good = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int m = 4 + static_cast<int>(rng() % 4);
    const int n = 3 + static_cast<int>(rng() % 4);
    const int r = 1 + static_cast<int>(rng() % 3);
    const Eigen::MatrixXd b = gaussian_matrix(m, r, rng);
    const Eigen::MatrixXd x = b * gaussian_matrix(r, n, rng);
    const auto p = random_pattern(m, n, std::min(m, r + 1 + static_cast<int>(rng() % 3)), rng());
    const auto sys = export_plucker_system(ObservedMatrix::observe(x, p), r);
    const double res = null_space_residual(sys, plucker_of_basis(basis_from_eigen(b)));
    worst = std::max(worst, res);
    good += res < 1e-9;
  }

  // column 2 of the main example: +x42 at [56], -x52 at [46], +x62 at [45], zero elsewhere
  const Eigen::MatrixXd b = gaussian_matrix(6, 2, rng);
  const Eigen::MatrixXd x = b * gaussian_matrix(2, 5, rng);
  const auto sys = export_plucker_system(ObservedMatrix::observe(x, example_main()), 2);
  int rows = 0;
  bool layout = true;
  for (std::size_t row = 0; row < sys.rows.size(); ++row) {
    if (sys.rows[row].column != 1) continue;
    ++rows;
    layout &= sys.rows[row].phi == Subset{3, 4, 5};
    for (Eigen::Index k = 0; k < sys.coefficients.cols(); ++k) {
      const Subset psi = sys.coordinate(static_cast<std::size_t>(k));
      double expect = 0.0;
      if (psi == Subset{4, 5}) expect = x(3, 1);
      if (psi == Subset{3, 5}) expect = -x(4, 1);
      if (psi == Subset{3, 4}) expect = x(5, 1);
      layout &= sys.coefficients(static_cast<Eigen::Index>(row), k) == expect;
    }
  }
  std::ostringstream d;
  d << good << "/50 below 1e-9 (worst " << worst << "); column-2 rows " << rows << ", layout "
    << (layout ? "matches" : "differs");
  return {good == 50 && rows == 1 && layout, d.str()};
}

Outcome monte_carlo() {
  const int draws = 100;
  int full = 0;
  for (int t = 0; t < draws; ++t) {
    const std::uint64_t s = split_seed(10, static_cast<std::uint64_t>(t));
    full += jacobian_rank_test(random_pattern(20, 36, 5, s), 2, 2, s).pass();
  }
  const double frac = static_cast<double>(full) / draws;
  std::ostringstream d;
  d << "full-rank fraction " << frac << " over " << draws << " draws (empirical threshold 0.5)";
  return {frac > 0.5, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 main-example regression", main_example_regression},
      {"2 entry-removal sensitivity", deletion_sensitivity},
      {"3 extended-example regression", extended_example_regression},
      {"4 Plücker fixture", plucker_fixture},
      {"5 B_Phi correctness", bphi_correctness},
      {"6 SLMF oracle equivalence", oracle_equivalence},
      {"7 completion round-trip", completion_round_trip},
      {"8 relaxed-SLMF counterexample", relaxed_counterexample},
      {"9 export soundness", export_soundness},
      {"10 Monte-Carlo sanity", monte_carlo},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  (" << o.detail << ")" << std::endl;
  }
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
