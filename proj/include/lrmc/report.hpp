#pragma once

// AnalysisReport: every test run on one pattern, rendered as JSON (schema
// version 1) and as text from the same data, plus the exit-code rule.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lrmc/completability.hpp"
#include "lrmc/numerics.hpp"
#include "lrmc/pattern.hpp"

namespace lrmc {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct AnalysisOptions {
  int rank = 1;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultBudget;
  int trials = 3;
  double tolerance = kDefaultRankTolerance;
};

struct AnalysisReport {
  ObservationPattern pattern;
  AnalysisOptions options;
  SizeCheck size;
  CertificateSearch finite;
  CertificateSearch unique;
  std::optional<RelaxedVerdict> relaxed;
  std::string relaxed_error;
  NecessaryVerdict necessary;
  RankReport jacobian;
  std::optional<RankReport> section;
  std::string section_error;

  Verdict size_verdict() const { return size.pass ? Verdict::pass : Verdict::fail; }

  static Verdict search_verdict(const CertificateSearch& s) {
    switch (s.status) {
      case SearchStatus::found: return Verdict::pass;
      case SearchStatus::none: return Verdict::fail;
      case SearchStatus::budget_exhausted: return Verdict::inconclusive;
    }
    return Verdict::inconclusive;
  }

  Verdict relaxed_verdict() const {
    if (!relaxed) return Verdict::inconclusive;
    return relaxed->holds ? Verdict::pass : Verdict::fail;
  }

  Verdict necessary_verdict() const {
    switch (necessary.contains_relaxed) {
      case Tristate::yes: return Verdict::pass;
      case Tristate::no: return Verdict::fail;
      case Tristate::inconclusive: return Verdict::inconclusive;
    }
    return Verdict::inconclusive;
  }

  static Verdict rank_verdict(const RankReport& r) {
    if (!r.determinate) return Verdict::inconclusive;
    return r.pass() ? Verdict::pass : Verdict::fail;
  }

  Verdict section_verdict() const {
    if (!section) return Verdict::fail;  // precondition failure: a column with < r entries
    return rank_verdict(*section);
  }

  /// 0: evidence of finite completability; 2: evidence against; 3: neither.
  int exit_code() const {
    if (size_verdict() == Verdict::fail) return 2;
    const Verdict jac = rank_verdict(jacobian);
    if (jac == Verdict::fail) return 2;
    if (search_verdict(finite) == Verdict::pass || jac == Verdict::pass) return 0;
    return 3;
  }
};

inline AnalysisReport analyze(const ObservationPattern& p, const AnalysisOptions& opt) {
  check_rank_range(p, opt.rank);
  const int r = opt.rank;
  AnalysisReport rep{p, opt, minimum_size_check(p, r), {}, {}, {}, {}, {}, {}, {}, {}};
  rep.finite = find_finite_certificate(p, r, opt.budget);
  rep.unique = find_unique_certificate(p, r, opt.budget);
  try {
    rep.relaxed = check_relaxed_slmf(p, r);
  } catch (const std::invalid_argument& e) {
    rep.relaxed_error = e.what();
  }
  try {
    rep.necessary = check_necessary_condition(p, r, opt.budget);
  } catch (const std::invalid_argument& e) {
    rep.necessary.contains_relaxed = Tristate::inconclusive;
  }
  rep.jacobian = jacobian_rank_test(p, r, opt.trials, opt.seed, opt.tolerance);
  try {
    rep.section = grassmann_section_rank_test(p, r, opt.trials, split_seed(opt.seed, 0x5EC), opt.tolerance);
  } catch (const std::exception& e) {
    rep.section_error = e.what();
  }
  return rep;
}

inline nlohmann::json rank_json(const RankReport& r, Verdict v) {
  return {{"verdict", to_string(v)},       {"tested_rank", r.tested_rank}, {"target", r.target},
          {"trials", r.trials},            {"pass_count", r.pass_count},   {"tolerance", r.tolerance},
          {"determinate", r.determinate},  {"invalid_trials", r.invalid_trials}, {"warnings", r.warnings}};
}

inline nlohmann::json search_json(const CertificateSearch& s) {
  return {{"verdict", to_string(AnalysisReport::search_verdict(s))},
          {"status", to_string(s.status)},
          {"nodes", s.nodes},
          {"certificate", s.certificate ? to_json(*s.certificate) : nlohmann::json(nullptr)}};
}

inline nlohmann::json to_json(const AnalysisReport& rep) {
  const auto& p = rep.pattern;
  nlohmann::json sizes = nlohmann::json::array();
  nlohmann::json empty = nlohmann::json::array();
  for (int j = 0; j < p.cols(); ++j) {
    sizes.push_back(p.support(j).size());
    if (p.support(j).empty()) empty.push_back(j + 1);
  }
  nlohmann::json out;
  out["schema_version"] = kSchemaVersion;
  out["tool_version"] = kToolVersion;
  out["seed"] = rep.options.seed;
  out["rank"] = rep.options.rank;
  out["budget"] = rep.options.budget;
  out["pattern"] = {{"m", p.rows()}, {"n", p.cols()}, {"entries", p.size()}, {"column_sizes", sizes},
                    {"empty_columns", empty}};
  out["minimum_size"] = {{"verdict", to_string(rep.size_verdict())},
                         {"required", rep.size.required},
                         {"actual", rep.size.actual}};
  out["finite_certificate"] = search_json(rep.finite);
  out["unique_certificate"] = search_json(rep.unique);

  nlohmann::json relaxed = {{"verdict", to_string(rep.relaxed_verdict())}};
  if (rep.relaxed) {
    relaxed["size_mismatch"] = rep.relaxed->size_mismatch;
    relaxed["lhs"] = rep.relaxed->lhs;
    relaxed["rhs"] = rep.relaxed->rhs;
    relaxed["violating_rows"] =
        rep.relaxed->violating_rows ? nlohmann::json(to_one_based(*rep.relaxed->violating_rows)) : nlohmann::json(nullptr);
  } else {
    relaxed["error"] = rep.relaxed_error;
  }
  out["relaxed_slmf"] = relaxed;
  out["necessary_condition"] = {
      {"verdict", to_string(rep.necessary_verdict())},
      {"contains_relaxed", to_string(rep.necessary.contains_relaxed)},
      {"work", rep.necessary.work},
      {"note", "necessary condition only"},
      {"witness", rep.necessary.witness ? to_json(*rep.necessary.witness) : nlohmann::json(nullptr)}};
  out["jacobian_rank"] = rank_json(rep.jacobian, AnalysisReport::rank_verdict(rep.jacobian));
  if (rep.section)
    out["grassmann_section_rank"] = rank_json(*rep.section, rep.section_verdict());
  else
    out["grassmann_section_rank"] = {{"verdict", to_string(rep.section_verdict())}, {"error", rep.section_error}};
  out["exit_code"] = rep.exit_code();
  return out;
}

inline std::string to_text(const AnalysisReport& rep) {
  const nlohmann::json j = to_json(rep);
  std::ostringstream out;
  const auto& p = rep.pattern;
  out << "pattern: " << p.rows() << "x" << p.cols() << ", " << p.size() << " observed entries, column sizes";
  for (int c = 0; c < p.cols(); ++c) out << ' ' << p.support(c).size();
  out << '\n';
  if (p.has_empty_column()) out << "warning: pattern has empty columns\n";
  out << "rank: " << rep.options.rank << "   seed: " << rep.options.seed << "   tool " << kToolVersion << '\n';
  out << "minimum size:        " << to_string(rep.size_verdict()) << " (required " << rep.size.required
      << ", actual " << rep.size.actual << ")\n";

  auto cert_line = [&](const char* name, const CertificateSearch& s) {
    out << name << to_string(AnalysisReport::search_verdict(s)) << " (" << to_string(s.status) << ", " << s.nodes
        << " nodes)\n";
    if (!s.certificate) return;
    const Certificate& c = *s.certificate;
    for (std::size_t g = 0; g < c.partition.size(); ++g) {
      out << "  group " << g + 1 << ": columns " << format_subset(c.partition[g]) << "  SLMF";
      for (const auto& col : c.slmfs[g]) out << ' ' << format_subset(col.support) << "<-" << col.source_column + 1;
      out << '\n';
    }
  };
  cert_line("finite certificate:  ", rep.finite);
  cert_line("unique certificate:  ", rep.unique);

  out << "relaxed SLMF:        " << to_string(rep.relaxed_verdict());
  if (rep.relaxed && rep.relaxed->size_mismatch)
    out << " (size " << rep.relaxed->lhs << " != " << rep.relaxed->rhs << ")";
  else if (rep.relaxed && rep.relaxed->violating_rows)
    out << " (I = " << format_subset(*rep.relaxed->violating_rows) << ": " << rep.relaxed->lhs << " > "
        << rep.relaxed->rhs << ")";
  else if (!rep.relaxed)
    out << " (" << rep.relaxed_error << ")";
  out << '\n';
  out << "necessary condition: " << to_string(rep.necessary_verdict()) << " (contains relaxed SLMF: "
      << to_string(rep.necessary.contains_relaxed) << ")\n";

  auto rank_line = [&](const char* name, const RankReport& r, Verdict v) {
    out << name << to_string(v) << " (rank " << r.tested_rank << " / " << r.target << ", " << r.pass_count << "/"
        << r.trials << " trials full";
    if (r.invalid_trials) out << ", " << r.invalid_trials << " invalid";
    out << ")\n";
    for (const auto& w : r.warnings) out << "  warning: " << w << '\n';
  };
  rank_line("jacobian rank:       ", rep.jacobian, AnalysisReport::rank_verdict(rep.jacobian));
  if (rep.section)
    rank_line("section rank:        ", *rep.section, rep.section_verdict());
  else
    out << "section rank:        " << to_string(rep.section_verdict()) << " (" << rep.section_error << ")\n";
  out << "exit code: " << j["exit_code"].get<int>() << '\n';
  return out.str();
}

}  // namespace lrmc
