// Command-line front end: analyze, slmf-check, complete, gen, export-system.
//
// Exit codes: 0 success / evidence found, 2 evidence against, 3 inconclusive,
// 64 usage or input error, 65 data error, 70 internal disagreement.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lrmc/lrmc.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitSoftware = 70;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

int cmd_analyze(const std::string& file, int rank, std::uint64_t seed, std::uint64_t budget, bool json) {
  const lrmc::ObservationPattern p = lrmc::load_pattern(file);
  lrmc::AnalysisOptions opt;
  opt.rank = rank;
  opt.seed = seed;
  opt.budget = budget;
  const lrmc::AnalysisReport rep = lrmc::analyze(p, opt);
  if (json)
    std::cout << lrmc::to_json(rep).dump(2) << '\n';
  else
    std::cout << lrmc::to_text(rep);
  return rep.exit_code();
}

int cmd_slmf_check(const std::string& file, int rank, const std::string& method, std::uint64_t seed) {
  const lrmc::Slmf phi = lrmc::Slmf::from_pattern(lrmc::load_pattern(file), rank);
  const bool comb = method != "randomized";
  const bool rand = method != "combinatorial";
  std::optional<lrmc::SlmfVerdict> exact, randomized;
  if (comb) exact = lrmc::check_slmf_combinatorial(phi);
  if (rand) randomized = lrmc::check_slmf_randomized(phi, 5, seed);
  if (exact) {
    std::cout << "combinatorial: " << (exact->is_slmf ? "SLMF" : "not an SLMF");
    if (exact->witness) {
      const auto& t = *exact->witness;
      lrmc::RowMask u = 0;
      for (int j : t) u |= lrmc::to_mask(phi.column(j));
      std::cout << " (violating columns T = " << lrmc::format_subset(t) << ": union size "
                << lrmc::mask_size(u) << " < " << t.size() + static_cast<std::size_t>(rank) << ")";
    }
    std::cout << '\n';
  }
  if (randomized) std::cout << "randomized-rank: " << (randomized->is_slmf ? "SLMF" : "not an SLMF") << '\n';
  if (exact && randomized && exact->is_slmf != randomized->is_slmf) {
    std::cerr << "error: combinatorial and randomized verdicts disagree\n";
    return kExitSoftware;
  }
  const bool verdict = exact ? exact->is_slmf : randomized->is_slmf;
  return verdict ? 0 : 2;
}

int cmd_complete(const std::string& values_file, int rank, const std::string& basis_file, const std::string& out_file) {
  const lrmc::ObservedMatrix obs = lrmc::parse_observed_csv(lrmc::read_file(values_file));
  const Eigen::MatrixXd b = lrmc::parse_matrix_csv(lrmc::read_file(basis_file));
  if (b.rows() != obs.rows() || b.cols() != rank) {
    std::cerr << "error: basis must be " << obs.rows() << "x" << rank << ", got " << b.rows() << "x" << b.cols()
              << '\n';
    return kExitData;
  }
  std::optional<lrmc::SubspaceBasis<double>> basis;
  try {
    basis.emplace(lrmc::basis_from_eigen(b));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: basis: " << e.what() << '\n';
    return kExitData;
  }
  Eigen::MatrixXd x;
  try {
    x = lrmc::complete_matrix(obs, *basis);
  } catch (const lrmc::CompletionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  const std::string csv = lrmc::to_csv(x);
  if (out_file.empty())
    std::cout << csv;
  else
    write_file(out_file, csv);
  std::cerr << "max observed-entry residual: " << lrmc::max_observed_residual(obs, x) << '\n';
  return 0;
}

int cmd_gen(int m, int n, int rank, int k, std::uint64_t seed, int count, bool stats, const std::string& out) {
  if (m < 1 || n < 1 || count < 1) throw std::invalid_argument("m, n and count must be positive");
  if (k > m || k < 0) throw std::invalid_argument("per-column count k must satisfy 0 <= k <= m");
  if (stats && (rank < 1 || rank > std::min(m, n))) throw std::invalid_argument("rank outside [1, min(m, n)]");
  int with_cert = 0, full_rank = 0, inconclusive = 0;
  std::ostream& stat_stream = out.empty() ? std::cerr : std::cout;
  for (int c = 0; c < count; ++c) {
    const std::uint64_t s = lrmc::split_seed(seed, static_cast<std::uint64_t>(c));
    const lrmc::ObservationPattern p = lrmc::random_pattern(m, n, k, s);
    const std::string grid = lrmc::to_grid(p);
    if (out.empty()) {
      if (c) std::cout << '\n';
      std::cout << grid;
    } else {
      write_file(count == 1 ? out + ".txt" : out + "_" + std::to_string(c + 1) + ".txt", grid);
    }
    if (!stats) continue;
    const auto cert = lrmc::find_finite_certificate(p, rank);
    if (cert.status == lrmc::SearchStatus::found) ++with_cert;
    if (cert.status == lrmc::SearchStatus::budget_exhausted) ++inconclusive;
    if (lrmc::jacobian_rank_test(p, rank, 3, s).pass()) ++full_rank;
  }
  if (stats) {
    const nlohmann::json summary = {{"count", count},
                                    {"m", m},
                                    {"n", n},
                                    {"rank", rank},
                                    {"per_column", k},
                                    {"seed", seed},
                                    {"finite_certificate_fraction", static_cast<double>(with_cert) / count},
                                    {"certificate_search_inconclusive", inconclusive},
                                    {"full_jacobian_rank_fraction", static_cast<double>(full_rank) / count},
                                    {"tool_version", lrmc::kToolVersion}};
    stat_stream << summary.dump(2) << '\n';
  }
  return 0;
}

int cmd_export(const std::string& values_file, int rank, const std::string& prefix, const std::string& basis_file) {
  const lrmc::ObservedMatrix obs = lrmc::parse_observed_csv(lrmc::read_file(values_file));
  if (rank < 1 || rank > obs.rows()) throw std::invalid_argument("rank outside [1, m]");
  const lrmc::PluckerSystem sys = lrmc::export_plucker_system(obs, rank);
  write_file(prefix + ".csv", lrmc::to_csv(sys.coefficients));
  write_file(prefix + ".json", lrmc::index_map_json(sys).dump(2) + "\n");
  std::cout << "rows: " << sys.coefficients.rows() << "  coordinates: " << sys.coefficients.cols() << '\n';
  if (!basis_file.empty()) {
    const auto basis = lrmc::basis_from_eigen(lrmc::parse_matrix_csv(lrmc::read_file(basis_file)));
    std::cout << "null-space residual of the basis's Plücker vector: "
              << lrmc::null_space_residual(sys, lrmc::plucker_of_basis(basis)) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Observation-pattern analysis for low-rank matrix completion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lrmc::kToolVersion);

  std::string file, method = "both", basis_file, out;
  int rank = 1;
  std::uint64_t seed = 0;
  std::uint64_t budget = lrmc::kDefaultBudget;
  bool json = false;

  auto* analyze = app.add_subcommand("analyze", "run every completability test on a pattern");
  analyze->add_option("pattern-file", file, "ASCII 0/1 grid or JSON pattern")->required();
  analyze->add_option("--rank,-r", rank, "target rank r")->required()->check(CLI::PositiveNumber);
  analyze->add_option("--seed", seed, "master random seed");
  analyze->add_option("--budget", budget, "search budget (backtracking nodes)");
  analyze->add_flag("--json", json, "emit the JSON report");

  auto* slmf = app.add_subcommand("slmf-check", "test whether a support is an (r, m)-SLMF");
  slmf->add_option("phi-file", file, "ASCII grid with m rows and m - r columns")->required();
  slmf->add_option("--rank,-r", rank, "rank r")->required()->check(CLI::NonNegativeNumber);
  slmf->add_option("--method", method, "both | combinatorial | randomized")
      ->check(CLI::IsMember({"both", "combinatorial", "randomized"}));
  slmf->add_option("--seed", seed, "seed for the randomized test");

  auto* complete = app.add_subcommand("complete", "complete a matrix from a known column space");
  complete->add_option("values-file", file, "CSV with * for unobserved cells")->required();
  complete->add_option("--rank,-r", rank, "rank r")->required()->check(CLI::PositiveNumber);
  complete->add_option("--basis", basis_file, "CSV holding an m x r basis")->required();
  complete->add_option("--out", out, "output CSV (stdout when omitted)");

  int gm = 0, gn = 0, gk = 0, count = 1;
  bool stats = false;
  auto* gen = app.add_subcommand("gen", "sample random patterns");
  gen->add_option("--m", gm, "rows")->required();
  gen->add_option("--n", gn, "columns")->required();
  gen->add_option("--rank", rank, "rank used for --emit-stats");
  gen->add_option("--per-column", gk, "observed entries per column")->required();
  gen->add_option("--seed", seed, "master seed");
  gen->add_option("--count", count, "number of patterns");
  gen->add_flag("--emit-stats", stats, "Monte-Carlo summary of certificate and Jacobian-rank outcomes");
  gen->add_option("--out", out, "file prefix; patterns go to stdout when omitted");

  auto* exp = app.add_subcommand("export-system", "export the linear Plücker section equations");
  exp->add_option("values-file", file, "CSV with * for unobserved cells")->required();
  exp->add_option("--rank,-r", rank, "rank r")->required()->check(CLI::PositiveNumber);
  exp->add_option("--out", out, "output prefix (<prefix>.csv, <prefix>.json)")->required();
  exp->add_option("--basis", basis_file, "optional ground-truth basis; prints its null-space residual");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*analyze) return cmd_analyze(file, rank, seed, budget, json);
    if (*slmf) return cmd_slmf_check(file, rank, method, seed);
    if (*complete) return cmd_complete(file, rank, basis_file, out);
    if (*gen) return cmd_gen(gm, gn, rank, gk, seed, count, stats, out);
    if (*exp) return cmd_export(file, rank, out, basis_file);
  } catch (const lrmc::ParseError& e) {
    std::cerr << "error: " << file << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
