// Batch verification harness: certificate runs with randomized matrix
// evaluations, the idempotent-span solver, truncated idempotent scans and
// scenario hypothesis audits, all emitting reproducible reports.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "orecalc/algebra.hpp"
#include "orecalc/commcalc.hpp"
#include "orecalc/errors.hpp"
#include "orecalc/freealg.hpp"
#include "orecalc/radical.hpp"
#include "orecalc/specio.hpp"

namespace {

using orecalc::AlgebraPtr;
using orecalc::AlgElem;
using orecalc::Coords;
using orecalc::ExpansionCertificate;
using orecalc::GenId;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

struct Range {
  unsigned lo = 0, hi = 0;
};

Range parse_range(const std::string& text) {
  const std::size_t dots = text.find("..");
  Range r;
  if (dots == std::string::npos) {
    r.lo = r.hi = static_cast<unsigned>(std::stoul(text));
  } else {
    r.lo = static_cast<unsigned>(std::stoul(text.substr(0, dots)));
    r.hi = static_cast<unsigned>(std::stoul(text.substr(dots + 2)));
  }
  if (r.hi < r.lo) throw CLI::ValidationError("range", "empty range " + text);
  return r;
}

std::vector<unsigned> parse_uint_list(const std::string& text) {
  std::vector<unsigned> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok =
        comma == std::string::npos ? text.substr(pos) : text.substr(pos, comma - pos);
    out.push_back(static_cast<unsigned>(std::stoul(tok)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct ReportSink {
  std::string format = "json";
  std::string out_path;

  void emit(const ordered_json& report) const {
    std::string text;
    if (format == "json") {
      text = report.dump(2) + "\n";
    } else {
      std::ostringstream os;
      os << report.at("command").get<std::string>() << " v" << kVersion << "\n";
      for (const auto& check : report.at("checks")) {
        os << (check.at("pass").get<bool>() ? "PASS " : "FAIL ")
           << check.at("name").get<std::string>();
        if (check.contains("detail")) os << "  " << check.at("detail").get<std::string>();
        os << "\n";
      }
      os << (report.at("pass").get<bool>() ? "all checks passed" : "some checks FAILED")
         << "\n";
      text = os.str();
    }
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      f << text;
    }
  }
};

ordered_json base_report(const std::string& command, std::uint64_t seed) {
  ordered_json report;
  report["command"] = command;
  report["version"] = kVersion;
  report["seed"] = seed;
  report["parameters"] = ordered_json::object();
  report["inputs"] = ordered_json::object();
  report["checks"] = ordered_json::array();
  report["counts"] = ordered_json::object();
  report["pass"] = false;
  return report;
}

AlgElem random_elem(const AlgebraPtr& alg, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(0, alg->modulus() - 1);
  Coords c(alg->dim());
  for (auto& x : c) x = dist(rng);
  return alg->elem(std::move(c));
}

// Seeded evaluations of one certificate in M3(Z/5); exact equality each time.
unsigned certificate_trials(const ExpansionCertificate& cert, unsigned trials,
                            std::uint64_t seed) {
  if (trials == 0) return 0;
  static const AlgebraPtr target = orecalc::make_matrix_algebra(3, 5);
  std::mt19937_64 rng(seed);
  unsigned passed = 0;
  std::vector<GenId> gens = cert.lhs.support();
  for (const orecalc::CertTerm& t : cert.terms) {
    for (const orecalc::NcPoly& f : t.factors) {
      for (const GenId& g : f.support()) {
        if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
      }
    }
  }
  std::sort(gens.begin(), gens.end());
  for (unsigned i = 0; i < trials; ++i) {
    std::map<GenId, AlgElem> assignment;
    for (const GenId& g : gens) assignment.emplace(g, random_elem(target, rng));
    if (orecalc::evaluate_certificate(cert, assignment, *target)) ++passed;
  }
  return passed;
}

int finish(ordered_json& report, const ReportSink& sink,
           std::chrono::steady_clock::time_point start) {
  bool pass = true;
  for (const auto& check : report.at("checks")) pass = pass && check.at("pass").get<bool>();
  report["pass"] = pass;
  report["wall_time_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                            start)
          .count();
  sink.emit(report);
  return pass ? 0 : 1;
}

std::uint64_t default_budget() {
  if (const char* env = std::getenv("ORECALC_BUDGET")) {
    return std::strtoull(env, nullptr, 10);
  }
  return orecalc::kDefaultTermBudget;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iterated differential polynomial ring verification harness"};
  app.require_subcommand(1);

  std::uint64_t seed = 12345;
  unsigned trials = 20;
  std::uint64_t budget = default_budget();
  ReportSink sink;
  app.add_option("--seed", seed, "seed for randomized evaluations");
  app.add_option("--trials", trials, "randomized evaluations per certificate");
  app.add_option("--budget", budget, "symbolic term budget (env ORECALC_BUDGET)");
  app.add_option("--format", sink.format, "report format: json|text")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", sink.out_path, "write the report to a file");

  // verify-lemma
  auto* verify = app.add_subcommand("verify-lemma", "verify an identity family symbolically");
  verify->fallthrough();
  int family = 0;
  std::string k_range = "0..0", r_range = "0..0", s_range = "0..0";
  std::string i_bounds, n_exponents;
  unsigned p_count = 0;
  verify->add_option("family", family, "identity family: 6, 7, 8 or 9")->required();
  verify->add_option("--k", k_range, "family 6: iteration range, e.g. 0..6");
  verify->add_option("--r", r_range, "family 7: power range");
  verify->add_option("--s", s_range, "families 7/8: order range");
  verify->add_option("--i", i_bounds, "family 8: exponent bounds, e.g. 2,2");
  verify->add_option("--n", n_exponents, "family 9: exponent bounds, e.g. 3,2");
  verify->add_option("--p", p_count, "family 9: generator count (checked against --n)");

  // solve-lemma10
  auto* solve = app.add_subcommand("solve-lemma10", "solve the idempotent commutator span");
  solve->fallthrough();
  std::string solve_file;
  solve->add_option("fixture", solve_file, "fixture JSON (algebra, e, xs, ks)")->required();

  // scan
  auto* scan = app.add_subcommand("scan", "exhaustive truncated idempotent scan");
  scan->fallthrough();
  std::string scan_file;
  unsigned scan_degree = 0;
  std::uint64_t scan_limit = orecalc::kDefaultSearchLimit;
  scan->add_option("scenario", scan_file, "scenario JSON")->required();
  scan->add_option("--degree", scan_degree, "componentwise multidegree bound")->required();
  scan->add_option("--limit", scan_limit, "candidate count refusal threshold");

  // audit
  auto* audit = app.add_subcommand("audit", "scenario hypothesis audit");
  audit->fallthrough();
  std::string audit_file;
  audit->add_option("scenario", audit_file, "scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (verify->parsed()) {
      ordered_json report = base_report("verify-lemma", seed);
      report["parameters"]["family"] = family;
      report["parameters"]["trials"] = trials;
      report["parameters"]["budget"] = budget;
      std::vector<std::pair<std::string, ExpansionCertificate>> certs;

      if (family == 6) {
        const Range kr = parse_range(k_range);
        report["parameters"]["k"] = k_range;
        for (unsigned k = kr.lo; k <= kr.hi; ++k) {
          certs.emplace_back("k=" + std::to_string(k), orecalc::expand_product_rule(k));
        }
      } else if (family == 7) {
        const Range rr = parse_range(r_range);
        const Range sr = parse_range(s_range);
        report["parameters"]["r"] = r_range;
        report["parameters"]["s"] = s_range;
        for (unsigned r = rr.lo; r <= rr.hi; ++r) {
          for (unsigned s = sr.lo; s <= sr.hi; ++s) {
            certs.emplace_back("r=" + std::to_string(r) + ",s=" + std::to_string(s),
                               orecalc::expand_power_rule(r, s, budget));
          }
        }
      } else if (family == 8) {
        if (i_bounds.empty()) throw CLI::ValidationError("--i", "family 8 needs --i");
        const std::vector<unsigned> bounds = parse_uint_list(i_bounds);
        const Range sr = parse_range(s_range);
        report["parameters"]["i"] = i_bounds;
        report["parameters"]["s"] = s_range;
        for (const std::vector<unsigned>& exps : orecalc::boxes_upto(bounds)) {
          for (unsigned s = sr.lo; s <= sr.hi; ++s) {
            std::ostringstream name;
            name << "i=(";
            for (std::size_t t = 0; t < exps.size(); ++t) name << (t ? "," : "") << exps[t];
            name << "),s=" << s;
            certs.emplace_back(name.str(), orecalc::expand_monomial_rule(exps, s, budget));
          }
        }
      } else if (family == 9) {
        if (n_exponents.empty()) throw CLI::ValidationError("--n", "family 9 needs --n");
        const std::vector<unsigned> bounds = parse_uint_list(n_exponents);
        if (p_count != 0 && p_count != bounds.size()) {
          throw CLI::ValidationError("--p", "generator count disagrees with --n");
        }
        report["parameters"]["n"] = n_exponents;
        for (const std::vector<unsigned>& ns : orecalc::boxes_upto(bounds)) {
          std::ostringstream name;
          name << "n=(";
          for (std::size_t t = 0; t < ns.size(); ++t) name << (t ? "," : "") << ns[t];
          name << ")";
          certs.emplace_back(name.str(), orecalc::idempotent_shift_identity(ns));
        }
      } else {
        throw CLI::ValidationError("family", "family must be 6, 7, 8 or 9");
      }

      std::uint64_t trial_seed = seed;
      for (const auto& [name, cert] : certs) {
        ordered_json check;
        check["name"] = name;
        const unsigned trials_passed = certificate_trials(cert, trials, trial_seed++);
        const bool pass = cert.verified && trials_passed == trials &&
                          (cert.family != 6 || cert.unique);
        check["pass"] = pass;
        check["symbolic_zero"] = cert.verified;
        if (cert.family == 6) check["unique"] = cert.unique;
        check["trials_passed"] = trials_passed;
        check["certificate"] = orecalc::specio::certificate_to_json(cert);
        report["checks"].push_back(std::move(check));
      }
      report["counts"]["certificates"] = certs.size();
      return finish(report, sink, start);
    }

    if (solve->parsed()) {
      ordered_json report = base_report("solve-lemma10", seed);
      const orecalc::specio::LoadedFile file = orecalc::specio::load_json_file(solve_file);
      report["inputs"][solve_file] = file.content_hash;
      const auto& j = file.data;
      AlgebraPtr alg = orecalc::specio::algebra_from_json(
          j.contains("algebra") && j.at("algebra").contains("file")
              ? orecalc::specio::load_json_file(solve_file.substr(0, solve_file.rfind('/') + 1) +
                                                j.at("algebra").at("file").get<std::string>())
                    .data
              : j.at("algebra"));
      AlgElem e = alg->elem(j.at("e").get<Coords>());
      std::vector<AlgElem> xs;
      for (const auto& x : j.at("xs")) xs.push_back(alg->elem(x.get<Coords>()));
      const std::vector<unsigned> ks = j.at("ks").get<std::vector<unsigned>>();

      orecalc::Subspace space(alg);
      if (j.contains("r_space")) {
        for (const auto& row : j.at("r_space")) space.insert(row.get<Coords>());
      } else {
        for (std::size_t i = 0; i < alg->dim(); ++i) {
          Coords v(alg->dim(), 0);
          v[i] = 1;
          space.insert(std::move(v));
        }
      }

      ordered_json check;
      check["name"] = "commutator span solve";
      try {
        orecalc::CommutatorSpanSolution sol = orecalc::solve_commutator_span(e, xs, ks, space);
        check["pass"] = sol.solvable && sol.residual_zero;
        check["solvable"] = sol.solvable;
        check["residual_zero"] = sol.residual_zero;
        if (!sol.failure.empty()) check["detail"] = sol.failure;
        ordered_json table = ordered_json::object();
        for (const auto& [idx, r] : sol.coeffs) {
          std::ostringstream key;
          for (std::size_t t = 0; t < idx.size(); ++t) key << (t ? "," : "") << idx[t];
          table[key.str()] = r.coords();
        }
        check["solution"] = std::move(table);
      } catch (const orecalc::precondition_error& err) {
        check["pass"] = false;
        check["detail"] = err.what();
      }
      report["checks"].push_back(std::move(check));
      return finish(report, sink, start);
    }

    if (scan->parsed()) {
      ordered_json report = base_report("scan", seed);
      report["parameters"]["degree"] = scan_degree;
      report["parameters"]["limit"] = scan_limit;
      const orecalc::specio::LoadedFile file = orecalc::specio::load_json_file(scan_file);
      report["inputs"][scan_file] = file.content_hash;
      const std::string dir = scan_file.find('/') == std::string::npos
                                  ? std::string(".")
                                  : scan_file.substr(0, scan_file.rfind('/'));

      orecalc::RawScenario raw = orecalc::specio::scenario_from_json(file.data, dir);
      orecalc::BuildScenarioResult built = orecalc::build_scenario(raw);
      ordered_json audit_transcript = ordered_json::array();
      for (const orecalc::AuditCheck& c : built.audit.checks) {
        ordered_json entry;
        entry["name"] = c.name;
        entry["pass"] = c.pass;
        entry["detail"] = c.detail;
        audit_transcript.push_back(std::move(entry));
      }
      report["audit"] = std::move(audit_transcript);
      if (!built.instance) {
        ordered_json check;
        check["name"] = "scenario audit";
        check["pass"] = false;
        check["detail"] = "hypothesis audit failed; see the audit transcript";
        report["checks"].push_back(std::move(check));
        return finish(report, sink, start);
      }

      orecalc::ScanResult result =
          orecalc::scan_truncated_idempotents(built.instance->tower, scan_degree, scan_limit);
      report["counts"]["candidates"] = result.candidate_count;
      report["counts"]["idempotents"] = result.idempotents.size();
      ordered_json found = ordered_json::array();
      for (const orecalc::OrePoly& e : result.idempotents) found.push_back(e.str());
      report["idempotents"] = std::move(found);

      ordered_json check;
      check["name"] = "only the zero idempotent";
      const bool only_zero = result.idempotents.size() == 1 && result.idempotents[0].is_zero();
      check["pass"] = only_zero;
      check["detail"] = std::to_string(result.candidate_count) + " candidates scanned";
      report["checks"].push_back(std::move(check));
      return finish(report, sink, start);
    }

    if (audit->parsed()) {
      ordered_json report = base_report("audit", seed);
      const orecalc::specio::LoadedFile file = orecalc::specio::load_json_file(audit_file);
      report["inputs"][audit_file] = file.content_hash;
      const std::string dir = audit_file.find('/') == std::string::npos
                                  ? std::string(".")
                                  : audit_file.substr(0, audit_file.rfind('/'));
      orecalc::RawScenario raw = orecalc::specio::scenario_from_json(file.data, dir);
      orecalc::BuildScenarioResult built = orecalc::build_scenario(raw);
      for (const orecalc::AuditCheck& c : built.audit.checks) {
        ordered_json check;
        check["name"] = c.name;
        check["pass"] = c.pass;
        check["detail"] = c.detail;
        report["checks"].push_back(std::move(check));
      }
      return finish(report, sink, start);
    }
  } catch (const orecalc::resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
