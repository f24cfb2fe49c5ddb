#pragma once

// Executable commutator identities. Each expansion certificate records an
// identity of the form
//   lhs = sum over keys of  coeff * factor_1 * ... * factor_r
// in the free algebra, together with the integer coefficients, the symbolic
// verification verdict and a content hash of the (zero) difference. The
// integer coefficients are solved for or derived by the documented recursion,
// never assumed.
//
// Identity families (the CLI vocabulary):
//   6: [a*b, c]_k      expanded over pairs [a,c]_i [b,c]_{k-i}
//   7: [a^r, b]_s      expanded over products of [a,b]_{w_t}
//   8: [a1^{i1}..an^{in}, b]_s   the multi-generator version of 7
//   9: e * x1^{n1}..xp^{np}      unshuffled into x^i [e,x]_{n-i} with binomials

#include <map>
#include <span>
#include <string>
#include <vector>

#include "orecalc/algebra.hpp"
#include "orecalc/freealg.hpp"

namespace orecalc {

inline constexpr std::uint64_t kDefaultTermBudget = 1'000'000;

struct CertTerm {
  BigInt coeff;
  std::vector<std::vector<unsigned>> key;  // grouped commutator indices
  std::vector<NcPoly> factors;
};

struct ExpansionCertificate {
  int family = 0;
  std::vector<unsigned> exponents;  // {k} / {r} / the multidegree / the n_j
  unsigned order = 0;               // s, for families 7 and 8
  NcPoly lhs;
  std::vector<CertTerm> terms;
  bool verified = false;
  bool unique = false;  // family 6: solution space was a single point
  std::string difference_hash;

  NcPoly rhs_sum() const;
  const BigInt* coeff_for(const std::vector<std::vector<unsigned>>& key) const;
};

// [a*b, c]_k: solves for the unique integer coefficients.
ExpansionCertificate expand_product_rule(unsigned k);

// [a^r, b]_s: coefficients built by splitting off one factor at a time with
// the product rule, then re-verified against the direct expansion.
ExpansionCertificate expand_power_rule(unsigned r, unsigned s,
                                       std::uint64_t term_budget = kDefaultTermBudget);

// [a1^{i1}..an^{in}, b]_s.
ExpansionCertificate expand_monomial_rule(const std::vector<unsigned>& exponents, unsigned s,
                                          std::uint64_t term_budget = kDefaultTermBudget);

// e*x^{n} = sum binom(n,i) x^i [e,x]_{n-i}; the binomial coefficients are
// given, the identity is verified symbolically.
ExpansionCertificate idempotent_shift_identity(const std::vector<unsigned>& ns);

// Exact equality of lhs and rhs images under the assignment.
bool evaluate_certificate(const ExpansionCertificate& cert,
                          const std::map<GenId, AlgElem>& assignment,
                          const FiniteAlgebra& target);

// Element-level commutators mirroring the symbolic ones.
AlgElem alg_commutator(const AlgElem& a, const AlgElem& b, unsigned k);
AlgElem alg_multi_commutator(const AlgElem& a, std::span<const AlgElem> xs,
                             std::span<const unsigned> ks);
AlgElem alg_monomial(std::span<const AlgElem> xs, std::span<const unsigned> exps);

// All integer boxes 0 <= t_j <= bound_j, lexicographically sorted.
std::vector<std::vector<unsigned>> boxes_upto(const std::vector<unsigned>& bounds);

// Solution of [e, x]_{k} = sum_{i <= k} r_i * e * [e, x]_{i} with every r_i
// constrained to the given subspace; e must be idempotent. Insolvability is
// reported as a finding, not thrown.
struct CommutatorSpanSolution {
  bool solvable = false;
  bool residual_zero = false;
  std::map<std::vector<unsigned>, AlgElem> coeffs;
  std::string failure;
};

CommutatorSpanSolution solve_commutator_span(const AlgElem& e, const std::vector<AlgElem>& xs,
                                             const std::vector<unsigned>& ks,
                                             const Subspace& r_space);

// e*x^{I} rewritten as a sum of terms each ending in e[e,x]_{k}, k <= I
// componentwise.
struct FactoredTerm {
  BigInt scalar;                          // binomial factor
  std::vector<unsigned> prefix_exponents; // the x^i part
  AlgElem left_coeff;                     // solved coefficient r
  std::vector<unsigned> trailing_indices; // k of the trailing e[e,x]_k
  AlgElem trailing;                       // e[e,x]_k
  AlgElem value;                          // whole term evaluated
};

struct IdempotentMonomialRewrite {
  bool ok = false;
  std::string failure;
  std::vector<FactoredTerm> terms;
  bool verified = false;
};

IdempotentMonomialRewrite rewrite_idempotent_monomial(const AlgElem& e,
                                                      const std::vector<AlgElem>& xs,
                                                      const std::vector<unsigned>& exponents,
                                                      const Subspace& r_space);

}  // namespace orecalc
