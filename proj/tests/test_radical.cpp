#include "doctest.h"

#include "orecalc/errors.hpp"
#include "orecalc/radical.hpp"
#include "orecalc/specio.hpp"

using namespace orecalc;

namespace {

std::string fixture(const std::string& name) {
  return std::string(ORECALC_FIXTURE_DIR) + "/" + name;
}

RawScenario load_scenario(const std::string& name) {
  const auto file = specio::load_json_file(fixture(name));
  return specio::scenario_from_json(file.data, ORECALC_FIXTURE_DIR);
}

Subspace embedded_base_space(const ScenarioInstance& inst) {
  Subspace s(inst.rep);
  const AlgebraPtr& base = inst.tower->base();
  for (std::size_t i = 0; i < base->dim(); ++i) {
    AlgElem hull_elem = embed_in_hull(inst.tower->hull(), base->basis_elem(i));
    s.insert(inst.embed(hull_elem).coords());
  }
  return s;
}

const AuditCheck& check_named(const AuditReport& report, const std::string& name) {
  for (const AuditCheck& c : report.checks) {
    if (c.name == name) return c;
  }
  throw std::logic_error("no audit check named " + name);
}

}  // namespace

TEST_CASE("filtration of the zero subalgebra") {
  AlgebraPtr m2 = make_matrix_algebra(2, 2);
  Filtration f = find_filtration(Subspace(m2));
  CHECK(f.length() == 1);
  CHECK(f.chain[0].rank() == 0);
  CHECK(f.chain[1].rank() == m2->dim());
  CHECK(filtration_valid(f, Subspace(m2)));
}

TEST_CASE("filtration of a nilpotent subalgebra under the regular action") {
  AlgebraPtr n3 = make_strict_upper(3, 2);
  AlgebraPtr hull = adjoin_unit(n3);
  Subspace s(hull);
  for (std::size_t i = 0; i < n3->dim(); ++i) {
    s.insert(embed_in_hull_coords(n3->basis_elem(i).coords()));
  }
  Filtration f = find_filtration(s);
  CHECK(f.length() <= 3);
  CHECK(filtration_valid(f, s));
  for (std::size_t i = 1; i < f.chain.size(); ++i) {
    CHECK(f.chain[i].rank() > f.chain[i - 1].rank());
  }
}

TEST_CASE("filtration refuses non-nilpotent generators") {
  AlgebraPtr m2 = make_matrix_algebra(2, 2);
  Subspace s(m2);
  s.insert(m2->basis_elem(0).coords());  // E11 is idempotent
  CHECK_THROWS_AS((void)find_filtration(s), precondition_error);
}

TEST_CASE("scenario audits pass on the bundled valid scenarios") {
  for (const char* name :
       {"scenario_upper2.json", "scenario_upper3_inner.json", "scenario_upper4_inner.json",
        "scenario_upper3_two_vars.json", "scenario_upper3_f3.json",
        "scenario_m2_crafted.json"}) {
    CAPTURE(name);
    BuildScenarioResult built = build_scenario(load_scenario(name));
    for (const AuditCheck& c : built.audit.checks) {
      CAPTURE(c.name);
      CAPTURE(c.detail);
      CHECK(c.pass);
    }
    CHECK(built.instance.has_value());
  }
}

TEST_CASE("each hypothesis audit catches its dedicated fixture") {
  struct Case {
    const char* file;
    const char* check;
  };
  const Case cases[] = {
      {"audit_fail_leibniz.json", "leibniz"},
      {"audit_fail_restriction.json", "restricts-to-base"},
      {"audit_fail_var_images.json", "variable-images"},
      {"audit_fail_nilpotency.json", "base-locally-nilpotent"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.file);
    BuildScenarioResult built = build_scenario(load_scenario(c.file));
    CHECK_FALSE(built.audit.pass());
    CHECK_FALSE(built.instance.has_value());
    const AuditCheck& failed = check_named(built.audit, c.check);
    CHECK_FALSE(failed.pass);
    CHECK_FALSE(failed.detail.empty());
    // the failure is isolated to its own check
    for (const AuditCheck& other : built.audit.checks) {
      if (other.name != c.check) {
        CAPTURE(other.name);
        CHECK(other.pass);
      }
    }
  }
}

TEST_CASE("scenario checker proves the candidate vanishes on valid instances") {
  for (const char* name :
       {"scenario_upper2.json", "scenario_upper3_inner.json", "scenario_upper4_inner.json",
        "scenario_upper3_two_vars.json", "scenario_upper3_f3.json"}) {
    CAPTURE(name);
    BuildScenarioResult built = build_scenario(load_scenario(name));
    REQUIRE(built.instance.has_value());
    const ScenarioInstance& inst = *built.instance;
    ScenarioCheckReport report = check_scenario_idempotent(inst, embedded_base_space(inst));
    CHECK(report.verdict == ScenarioVerdict::kEIsZero);
    CHECK(report.e_direct_zero);
    CHECK(report.filtration_length >= 1);
  }
}

TEST_CASE("all-zero coefficients pass vacuously") {
  RawScenario raw = load_scenario("scenario_upper3_inner.json");
  raw.coeffs.clear();
  raw.coeffs[{0}] = Coords{0, 0, 0};
  BuildScenarioResult built = build_scenario(raw);
  REQUIRE(built.instance.has_value());
  ScenarioCheckReport report =
      check_scenario_idempotent(*built.instance, embedded_base_space(*built.instance));
  CHECK(report.verdict == ScenarioVerdict::kEIsZero);
}

TEST_CASE("the crafted nonzero idempotent is rejected with a witness") {
  BuildScenarioResult built = build_scenario(load_scenario("scenario_m2_crafted.json"));
  REQUIRE(built.instance.has_value());
  const ScenarioInstance& inst = *built.instance;
  REQUIRE(inst.idempotent_candidate() == inst.rep->basis_elem(0));  // e = E11

  ScenarioCheckReport report = check_scenario_idempotent(inst, embedded_base_space(inst));
  CHECK(report.verdict == ScenarioVerdict::kHypothesisFailure);
  CHECK_FALSE(report.e_direct_zero);
  CHECK(report.failure_detail.find("outside N") != std::string::npos);
}

TEST_CASE("enlarging N never flips a pass into a failure") {
  BuildScenarioResult built = build_scenario(load_scenario("scenario_upper3_inner.json"));
  REQUIRE(built.instance.has_value());
  const ScenarioInstance& inst = *built.instance;

  // minimal N: just the two products that actually arise
  Subspace small(inst.rep);
  small.insert(inst.embed(inst.tower->hull()->basis_elem(2)).coords());  // E13
  small.insert(inst.embed(inst.tower->hull()->basis_elem(3)).coords());  // E23
  ScenarioCheckReport small_report = check_scenario_idempotent(inst, small);
  CHECK(small_report.verdict == ScenarioVerdict::kEIsZero);

  ScenarioCheckReport big_report = check_scenario_idempotent(inst, embedded_base_space(inst));
  CHECK(big_report.verdict == ScenarioVerdict::kEIsZero);
}

TEST_CASE("a decomposition that fails in the representation is reported") {
  // trivial two-variable tower over a one-dimensional base, but variable
  // images whose bracket is nonzero: [x1,x2] cannot match the tower's zero
  RawScenario raw;
  raw.base = FiniteAlgebra::create(2, {"t"}, {{Coords{0}}});
  raw.levels.resize(2);
  raw.levels[0].d_images = {Coords{0, 0}, Coords{0, 0}};
  raw.levels[1].d_images = {Coords{0, 0}, Coords{0, 0}};
  raw.levels[1].var_images[0] = Coords{0, 0};
  raw.rep = make_matrix_algebra(2, 2);
  raw.embed = {Coords{1, 0, 0, 1}, Coords{0, 1, 0, 0}};  // 1 -> I, t -> E12
  raw.xs = {Coords{0, 0, 1, 0}, Coords{0, 1, 0, 0}};     // x1 = E21, x2 = E12
  raw.coeffs[{1, 0}] = Coords{1};                        // e = E21*E12 = E22
  raw.bounds = {1, 1};

  BuildScenarioResult built = build_scenario(raw);
  REQUIRE(built.instance.has_value());
  REQUIRE(built.instance->idempotent_candidate() == raw.rep->basis_elem(3));

  Subspace n(raw.rep);
  n.insert(Coords{0, 1, 0, 0});
  ScenarioCheckReport report = check_scenario_idempotent(*built.instance, n);
  CHECK(report.verdict == ScenarioVerdict::kHypothesisFailure);
  CHECK(report.failure_detail.find("decomposition fails") != std::string::npos);
}

TEST_CASE("scenario checker preconditions") {
  BuildScenarioResult built = build_scenario(load_scenario("scenario_upper3_inner.json"));
  REQUIRE(built.instance.has_value());
  const ScenarioInstance& inst = *built.instance;

  // a non-nilpotent N
  Subspace units(inst.rep);
  units.insert(inst.rep->unit().coords());
  CHECK_THROWS_AS((void)check_scenario_idempotent(inst, units), precondition_error);

  // a non-idempotent candidate
  ScenarioInstance broken = inst;
  broken.coeffs.clear();
  broken.coeffs.emplace(Multidegree(std::vector<std::uint32_t>{0}),
                        inst.embed(inst.tower->hull()->basis_elem(2)));  // e = E13
  CHECK_THROWS_AS((void)check_scenario_idempotent(broken, embedded_base_space(inst)),
                  precondition_error);
}

TEST_CASE("truncated idempotent scans find only zero on nilpotent towers") {
  BuildScenarioResult upper2 = build_scenario(load_scenario("scenario_upper2.json"));
  REQUIRE(upper2.instance.has_value());
  ScanResult r2 = scan_truncated_idempotents(upper2.instance->tower, 2);
  CHECK(r2.candidate_count == 8);
  REQUIRE(r2.idempotents.size() == 1);
  CHECK(r2.idempotents[0].is_zero());

  BuildScenarioResult upper3 = build_scenario(load_scenario("scenario_upper3_inner.json"));
  REQUIRE(upper3.instance.has_value());
  ScanResult r3 = scan_truncated_idempotents(upper3.instance->tower, 1);
  CHECK(r3.candidate_count == 64);
  REQUIRE(r3.idempotents.size() == 1);
  CHECK(r3.idempotents[0].is_zero());

  // degree bound zero degenerates to the base algebra search
  ScanResult r0 = scan_truncated_idempotents(upper3.instance->tower, 0);
  CHECK(r0.candidate_count == 8);
  CHECK(r0.idempotents.size() == 1);

  // two variables: 4 coefficient slots at degree bound 1
  BuildScenarioResult two_vars = build_scenario(load_scenario("scenario_upper3_two_vars.json"));
  REQUIRE(two_vars.instance.has_value());
  ScanResult r2v = scan_truncated_idempotents(two_vars.instance->tower, 1);
  CHECK(r2v.candidate_count == 4096);
  REQUIRE(r2v.idempotents.size() == 1);
  CHECK(r2v.idempotents[0].is_zero());

  // the remaining bundled nilpotent scenarios scan clean as well
  for (const char* name : {"scenario_upper4_inner.json", "scenario_upper3_f3.json"}) {
    CAPTURE(name);
    BuildScenarioResult built = build_scenario(load_scenario(name));
    REQUIRE(built.instance.has_value());
    ScanResult r = scan_truncated_idempotents(built.instance->tower, 1);
    REQUIRE(r.idempotents.size() == 1);
    CHECK(r.idempotents[0].is_zero());
  }

  CHECK_THROWS_AS(
      (void)scan_truncated_idempotents(upper3.instance->tower, 6, 1000), resource_error);
}

TEST_CASE("scans do find idempotents when the base has them") {
  // upper triangular 2x2 with E11: not nilpotent, and the scan sees it
  AlgebraPtr upper = FiniteAlgebra::create(
      2, {"E11", "E12"},
      {{Coords{1, 0}, Coords{0, 1}}, {Coords{0, 0}, Coords{0, 0}}});
  TowerPtr tower = DerivationTower::trivial(upper, 1);
  ScanResult r = scan_truncated_idempotents(tower, 0);
  CHECK(r.candidate_count == 4);
  CHECK(r.idempotents.size() == 3);  // 0, E11, E11+E12
}

TEST_CASE("scan results are independent of the worker partitioning") {
  BuildScenarioResult upper3 = build_scenario(load_scenario("scenario_upper3_inner.json"));
  REQUIRE(upper3.instance.has_value());
  ScanResult a = scan_truncated_idempotents(upper3.instance->tower, 1);
  ScanResult b = scan_truncated_idempotents(upper3.instance->tower, 1);
  REQUIRE(a.idempotents.size() == b.idempotents.size());
  for (std::size_t i = 0; i < a.idempotents.size(); ++i) {
    CHECK(a.idempotents[i] == b.idempotents[i]);
  }
}
