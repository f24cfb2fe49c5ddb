#pragma once

// Desk-scale endgame: filtrations of a vector space by a nilpotent
// subalgebra, validated scenario instances (tower + representation + variable
// images + coefficient table), the inductive checker that forces a scenario
// idempotent to vanish, and the exhaustive truncated idempotent scan.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orecalc/algebra.hpp"
#include "orecalc/commcalc.hpp"
#include "orecalc/ore.hpp"

namespace orecalc {

struct Filtration {
  // V_0 = 0 up to V_h = the whole regular-representation space, with
  // S * V_i contained in V_{i-1}.
  std::vector<Subspace> chain;
  unsigned length() const { return chain.empty() ? 0 : static_cast<unsigned>(chain.size() - 1); }
};

// V_l = {v : every product of l elements of S kills v} under left
// multiplication on the parent algebra. Requires S nilpotent.
Filtration find_filtration(const Subspace& s);

// True when S * V_i lies in V_{i-1} for every step, checked on basis pairs.
bool filtration_valid(const Filtration& f, const Subspace& s);

// Raw, unvalidated scenario data; the hypothesis audit reports on it before
// any validated object is constructed.
struct RawLevel {
  std::vector<Coords> d_images;              // hull basis images (one per basis vector)
  std::map<std::size_t, Coords> var_images;  // 0-based j -> coords of d_i(X_j) in the hull
};

struct RawScenario {
  AlgebraPtr base;  // R, non-unital
  std::vector<RawLevel> levels;
  AlgebraPtr rep;                   // null: use the hull as representation
  std::vector<Coords> embed;        // hull basis -> rep coords; empty: identity
  std::vector<Coords> xs;           // variable images in rep coords
  std::map<std::vector<std::uint32_t>, Coords> coeffs;  // multidegree -> base coords of r_I
  std::vector<unsigned> bounds;     // m_1..m_n
};

struct AuditCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  bool pass() const;
};

struct ScenarioInstance {
  TowerPtr tower;
  AlgebraPtr rep;
  std::vector<Coords> embed_images;  // image of each hull basis vector in rep
  std::vector<AlgElem> xs;
  std::map<Multidegree, AlgElem> coeffs;  // a_I in rep
  std::vector<unsigned> bounds;

  AlgElem embed(const AlgElem& hull_elem) const;
  AlgElem monomial(const Multidegree& deg) const;  // x^deg in rep
  AlgElem idempotent_candidate() const;            // e = sum x^I a_I
};

struct BuildScenarioResult {
  AuditReport audit;
  std::optional<ScenarioInstance> instance;  // present iff every check passed
};

// Audits the hypothesis data: (1) Leibniz of each level on the hull,
// (2) the embedded base mapped into the base, (3) a well-formed hull-valued
// image for every earlier variable, (4) local nilpotency of the base; plus
// well-formedness of the representation data when present.
BuildScenarioResult build_scenario(const RawScenario& raw);

enum class ScenarioVerdict { kEIsZero, kHypothesisFailure };

struct ScenarioCheckReport {
  ScenarioVerdict verdict = ScenarioVerdict::kHypothesisFailure;
  std::string failure_detail;
  bool e_direct_zero = false;  // soundness cross-check
  std::size_t a_count = 0;
  std::size_t b_count = 0;
  std::size_t c_count = 0;
  unsigned filtration_length = 0;
  std::vector<std::string> transcript;
};

// Decides e = 0 for the scenario idempotent by building the commutator set A
// (n stages), the decomposition coefficient set B, the product set C = B*A,
// checking C against N, and replaying the filtration induction
// e[e,x]_{k}(V_l) = 0 level by level. Never reports e = 0 when the directly
// computed e is nonzero. N must be locally nilpotent and e idempotent
// (precondition errors otherwise).
ScenarioCheckReport check_scenario_idempotent(const ScenarioInstance& inst,
                                              const Subspace& n_space);

struct ScanResult {
  std::uint64_t candidate_count = 0;
  std::vector<OrePoly> idempotents;
};

// Enumerates every polynomial with base-algebra coefficients and multidegree
// componentwise <= degree_bound, keeping those with e*e = e exactly (full
// product, no truncation). Refuses when the candidate space exceeds the
// limit.
ScanResult scan_truncated_idempotents(const TowerPtr& tower, unsigned degree_bound,
                                      std::uint64_t limit = kDefaultSearchLimit);

}  // namespace orecalc
