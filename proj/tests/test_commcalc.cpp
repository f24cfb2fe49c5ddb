#include "doctest.h"

#include <random>

#include "orecalc/commcalc.hpp"
#include "orecalc/errors.hpp"

using namespace orecalc;

namespace {

const NcPoly a = NcPoly::gen("a");
const NcPoly b = NcPoly::gen("b");
const NcPoly c = NcPoly::gen("c");

std::map<GenId, AlgElem> random_assignment(const std::vector<GenId>& gens,
                                           const AlgebraPtr& alg, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(0, alg->modulus() - 1);
  std::map<GenId, AlgElem> out;
  for (const GenId& g : gens) {
    Coords coords(alg->dim());
    for (auto& x : coords) x = dist(rng);
    out.emplace(g, alg->elem(std::move(coords)));
  }
  return out;
}

std::vector<GenId> certificate_support(const ExpansionCertificate& cert) {
  std::vector<GenId> gens = cert.lhs.support();
  for (const CertTerm& t : cert.terms) {
    for (const NcPoly& f : t.factors) {
      for (const GenId& g : f.support()) {
        if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
      }
    }
  }
  return gens;
}

AlgElem sample_idempotent(const AlgebraPtr& alg, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(0, alg->modulus() - 1);
  while (true) {
    Coords coords(alg->dim());
    for (auto& x : coords) x = dist(rng);
    AlgElem e = alg->elem(std::move(coords));
    if (!e.is_zero() && e * e == e) return e;
  }
}

Subspace full_space(const AlgebraPtr& alg) {
  Subspace s(alg);
  for (std::size_t i = 0; i < alg->dim(); ++i) {
    Coords v(alg->dim(), 0);
    v[i] = 1;
    s.insert(std::move(v));
  }
  return s;
}

}  // namespace

TEST_CASE("product expansion coefficients") {
  ExpansionCertificate k0 = expand_product_rule(0);
  CHECK(k0.verified);
  CHECK(k0.unique);
  REQUIRE(k0.terms.size() == 1);
  CHECK(k0.terms[0].coeff == 1);
  CHECK(k0.lhs == a * b);

  ExpansionCertificate k1 = expand_product_rule(1);
  CHECK(k1.verified);
  // [ab,c] = a[b,c] + [a,c]b, checked against the raw word sum
  const NcPoly direct = a * b * c - c * a * b;
  const NcPoly split = a * (b * c - c * b) + (a * c - c * a) * b;
  CHECK(direct == split);
  CHECK(*k1.coeff_for({{0}}) == 1);
  CHECK(*k1.coeff_for({{1}}) == 1);

  // higher orders: solved values match the additive-recurrence binomials
  std::vector<std::vector<BigInt>> pascal{{1}};
  for (unsigned n = 1; n <= 6; ++n) {
    std::vector<BigInt> row(n + 1, 1);
    for (unsigned k = 1; k < n; ++k) row[k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
    pascal.push_back(row);
  }
  for (unsigned k = 2; k <= 6; ++k) {
    ExpansionCertificate cert = expand_product_rule(k);
    CHECK(cert.verified);
    CHECK(cert.unique);
    for (unsigned i = 0; i <= k; ++i) CHECK(*cert.coeff_for({{i}}) == pascal[k][i]);
  }
}

TEST_CASE("power expansion") {
  ExpansionCertificate r0s0 = expand_power_rule(0, 0);
  CHECK(r0s0.verified);
  REQUIRE(r0s0.terms.size() == 1);
  CHECK(r0s0.terms[0].factors.empty());
  CHECK(r0s0.terms[0].coeff == 1);

  ExpansionCertificate r0s2 = expand_power_rule(0, 2);
  CHECK(r0s2.verified);
  CHECK(r0s2.lhs.is_zero());
  CHECK(r0s2.terms.empty());

  for (unsigned s = 0; s <= 4; ++s) {
    ExpansionCertificate r1 = expand_power_rule(1, s);
    CHECK(r1.verified);
    REQUIRE(r1.terms.size() == 1);
    CHECK(r1.terms[0].key == std::vector<std::vector<unsigned>>{{s}});
  }

  ExpansionCertificate r2s2 = expand_power_rule(2, 2);
  CHECK(r2s2.verified);
  for (const CertTerm& t : r2s2.terms) {
    unsigned total = 0;
    for (unsigned w : t.key[0]) total += w;
    CHECK(total == 2);
    CHECK(t.key[0].size() == 2);
  }

  // seeded evaluations in a matrix algebra and a nilpotent algebra
  AlgebraPtr m3 = make_matrix_algebra(3, 5);
  AlgebraPtr n4 = make_strict_upper(4, 3);
  std::mt19937_64 rng(31);
  for (unsigned r = 1; r <= 3; ++r) {
    for (unsigned s = 0; s <= 3; ++s) {
      ExpansionCertificate cert = expand_power_rule(r, s);
      CHECK(cert.verified);
      const std::vector<GenId> gens = certificate_support(cert);
      for (int rep = 0; rep < 5; ++rep) {
        CHECK(evaluate_certificate(cert, random_assignment(gens, m3, rng), *m3));
        CHECK(evaluate_certificate(cert, random_assignment(gens, n4, rng), *n4));
      }
    }
  }
}

TEST_CASE("monomial expansion") {
  // single-generator case agrees with the power rule
  for (unsigned r = 0; r <= 3; ++r) {
    for (unsigned s = 0; s <= 3; ++s) {
      ExpansionCertificate mono = expand_monomial_rule({r}, s);
      ExpansionCertificate pow = expand_power_rule(r, s);
      CHECK(mono.verified);
      REQUIRE(mono.terms.size() == pow.terms.size());
      for (const CertTerm& t : pow.terms) {
        const BigInt* coeff = mono.coeff_for({t.key[0]});
        REQUIRE(coeff != nullptr);
        CHECK(*coeff == t.coeff);
      }
    }
  }

  ExpansionCertificate zero_exps = expand_monomial_rule({0, 0}, 0);
  CHECK(zero_exps.verified);
  REQUIRE(zero_exps.terms.size() == 1);
  ExpansionCertificate zero_exps_s = expand_monomial_rule({0, 0}, 2);
  CHECK(zero_exps_s.verified);
  CHECK(zero_exps_s.lhs.is_zero());
  CHECK(zero_exps_s.terms.empty());

  ExpansionCertificate two = expand_monomial_rule({1, 1}, 1);
  CHECK(two.verified);
  const NcPoly a1 = NcPoly::gen("a", 1), a2 = NcPoly::gen("a", 2);
  CHECK(two.lhs == commutator(a1 * a2, b, 1));
  for (const CertTerm& t : two.terms) {
    unsigned total = 0;
    for (const auto& group : t.key) {
      for (unsigned w : group) total += w;
    }
    CHECK(total == 1);
  }

  ExpansionCertificate big = expand_monomial_rule({2, 2}, 3);
  CHECK(big.verified);

  CHECK_THROWS_AS((void)expand_monomial_rule({2, 2}, 3, 10), resource_error);
}

TEST_CASE("certificates evaluate exactly in matrix and nilpotent targets") {
  AlgebraPtr m3 = make_matrix_algebra(3, 5);
  AlgebraPtr n4 = make_strict_upper(4, 3);
  std::mt19937_64 rng(67);

  std::vector<ExpansionCertificate> certs;
  for (unsigned k = 0; k <= 3; ++k) certs.push_back(expand_product_rule(k));
  for (unsigned s = 0; s <= 2; ++s) {
    certs.push_back(expand_monomial_rule({1, 1}, s));
    certs.push_back(expand_monomial_rule({2, 1}, s));
  }
  for (const ExpansionCertificate& cert : certs) {
    const std::vector<GenId> gens = certificate_support(cert);
    for (int rep = 0; rep < 5; ++rep) {
      CHECK(evaluate_certificate(cert, random_assignment(gens, m3, rng), *m3));
      CHECK(evaluate_certificate(cert, random_assignment(gens, n4, rng), *n4));
    }
  }

  // the shift identity needs a unit for its x^0 term
  ExpansionCertificate shift = idempotent_shift_identity({2, 1});
  const std::vector<GenId> gens = certificate_support(shift);
  for (int rep = 0; rep < 5; ++rep) {
    CHECK(evaluate_certificate(shift, random_assignment(gens, m3, rng), *m3));
  }
}

TEST_CASE("idempotent shift identity") {
  ExpansionCertificate p1n1 = idempotent_shift_identity({1});
  CHECK(p1n1.verified);
  const NcPoly e = NcPoly::gen("e"), x1 = NcPoly::gen("x", 1);
  CHECK(p1n1.lhs == e * x1);
  // e x = x e + [e,x]
  CHECK(p1n1.rhs_sum() == x1 * e + (e * x1 - x1 * e));

  ExpansionCertificate p1n0 = idempotent_shift_identity({0});
  CHECK(p1n0.verified);
  REQUIRE(p1n0.terms.size() == 1);

  ExpansionCertificate p2 = idempotent_shift_identity({2, 1});
  CHECK(p2.verified);
  CHECK(p2.terms.size() == 6);
  for (const CertTerm& t : p2.terms) {
    BigInt expect = binomial(2, t.key[0][0]) * binomial(1, t.key[0][1]);
    CHECK(t.coeff == expect);
  }

  ExpansionCertificate p2n33 = idempotent_shift_identity({3, 3});
  CHECK(p2n33.verified);
}

TEST_CASE("commutator span solving") {
  AlgebraPtr m2 = make_matrix_algebra(2, 2);
  Subspace space = full_space(m2);

  // e = 0: zero solution
  CommutatorSpanSolution zero_sol =
      solve_commutator_span(m2->zero(), {m2->basis_elem(1)}, {1}, space);
  CHECK(zero_sol.solvable);
  CHECK(zero_sol.residual_zero);
  for (const auto& [idx, r] : zero_sol.coeffs) CHECK(r.is_zero());

  // e = E11, x = E12: [e,x] = E12 and E11 * (e [e,x]) reproduces it
  const AlgElem e11 = m2->basis_elem(0), e12 = m2->basis_elem(1);
  CommutatorSpanSolution sol = solve_commutator_span(e11, {e12}, {1}, space);
  CHECK(sol.solvable);
  CHECK(sol.residual_zero);
  AlgElem rebuilt = m2->zero();
  for (const auto& [idx, r] : sol.coeffs) {
    rebuilt += r * (e11 * alg_commutator(e11, e12, idx[0]));
  }
  CHECK(rebuilt == alg_commutator(e11, e12, 1));

  // commuting data: the commutator vanishes and so does the canonical solution
  CommutatorSpanSolution comm =
      solve_commutator_span(e11, {m2->unit()}, {2}, space);
  CHECK(comm.solvable);
  for (const auto& [idx, r] : comm.coeffs) CHECK(r.is_zero());

  CHECK_THROWS_AS(
      (void)solve_commutator_span(e12, {e11}, {1}, space), precondition_error);

  // restricting the coefficient space can make the system unsolvable
  Subspace tiny(m2);
  tiny.insert(m2->basis_elem(2).coords());  // span{E21}
  CommutatorSpanSolution blocked = solve_commutator_span(e11, {e12}, {1}, tiny);
  CHECK_FALSE(blocked.solvable);
  CHECK_FALSE(blocked.failure.empty());
}

TEST_CASE("factored monomial rewriting") {
  AlgebraPtr m2 = make_matrix_algebra(2, 2);
  Subspace space = full_space(m2);
  const AlgElem e11 = m2->basis_elem(0), e12 = m2->basis_elem(1);

  IdempotentMonomialRewrite all_zero = rewrite_idempotent_monomial(e11, {e12}, {0}, space);
  CHECK(all_zero.ok);
  CHECK(all_zero.verified);
  AlgElem sum = m2->zero();
  for (const auto& t : all_zero.terms) sum += t.value;
  CHECK(sum == e11);

  IdempotentMonomialRewrite one = rewrite_idempotent_monomial(e11, {e12}, {1}, space);
  CHECK(one.ok);
  CHECK(one.verified);
  for (const auto& t : one.terms) {
    CHECK(t.trailing_indices[0] <= 1);
    CHECK(t.trailing == e11 * alg_commutator(e11, e12, t.trailing_indices[0]));
  }

  IdempotentMonomialRewrite empty = rewrite_idempotent_monomial(m2->zero(), {e12}, {2}, space);
  CHECK(empty.ok);
  CHECK(empty.verified);
  CHECK(empty.terms.empty());

  // randomized instances across small algebras
  std::mt19937_64 rng(57);
  for (const AlgebraPtr& alg : {make_matrix_algebra(2, 2), make_matrix_algebra(2, 3)}) {
    Subspace full = full_space(alg);
    std::uniform_int_distribution<unsigned> edist(0, 2);
    for (int rep = 0; rep < 10; ++rep) {
      const AlgElem e = sample_idempotent(alg, rng);
      std::uniform_int_distribution<std::uint32_t> cdist(0, alg->modulus() - 1);
      Coords xc(alg->dim());
      for (auto& v : xc) v = cdist(rng);
      const std::vector<AlgElem> xs{alg->elem(xc)};
      const std::vector<unsigned> exps{edist(rng)};
      IdempotentMonomialRewrite rw = rewrite_idempotent_monomial(e, xs, exps, full);
      CHECK(rw.ok);
      CHECK(rw.verified);
      for (const auto& t : rw.terms) CHECK(t.trailing_indices[0] <= exps[0]);
    }
  }
}
