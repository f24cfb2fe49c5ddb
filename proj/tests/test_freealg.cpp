#include "doctest.h"

#include <random>

#include "orecalc/algebra.hpp"
#include "orecalc/freealg.hpp"

using namespace orecalc;

namespace {

const NcPoly a = NcPoly::gen("a");
const NcPoly b = NcPoly::gen("b");
const NcPoly c = NcPoly::gen("c");

NcPoly random_poly(std::mt19937_64& rng, int max_degree = 4) {
  static const std::vector<GenId> gens{{"a", 0}, {"b", 0}, {"c", 0}};
  std::uniform_int_distribution<int> n_terms(0, 5);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  NcPoly p;
  const int terms = n_terms(rng);
  for (int t = 0; t < terms; ++t) {
    Word w;
    const int d = deg(rng);
    for (int i = 0; i < d; ++i) w.push_back(gens[pick(rng)]);
    p.add_term(w, coeff(rng));
  }
  return p;
}

}  // namespace

TEST_CASE("addition collects and cancels") {
  CHECK((a + (-a)).is_zero());
  const NcPoly ab = a * b;
  CHECK((ab + BigInt(2) * c + c).str() == "1*a.b + 3*c");
  const NcPoly two = a + b;
  CHECK(two.term_count() == 2);
}

TEST_CASE("multiplication keeps factor order") {
  CHECK(a * b != b * a);
  CHECK((a + b) * (a - b) == a * a - a * b + b * a - b * b);
  CHECK(NcPoly::one() * (a * b + c) == a * b + c);
  CHECK((a * b + c) * NcPoly::one() == a * b + c);
}

TEST_CASE("iterated commutators") {
  CHECK(commutator(a, b, 0) == a);
  CHECK(commutator(a, b, 1) == a * b - b * a);
  CHECK(commutator(a, a, 1).is_zero());
}

TEST_CASE("multi-index commutators") {
  const std::vector<NcPoly> bs{b, c};
  const std::vector<unsigned> zero{0, 0};
  CHECK(multi_commutator(a, bs, zero) == a);

  const std::vector<NcPoly> single{b};
  for (unsigned k : {0u, 1u, 2u, 3u}) {
    const std::vector<unsigned> ks{k};
    CHECK(multi_commutator(a, single, ks) == commutator(a, b, k));
  }

  // [[a,b],c] expanded by hand with products and sums only.
  const std::vector<unsigned> ones{1, 1};
  const NcPoly inner = a * b - b * a;
  CHECK(multi_commutator(a, bs, ones) == inner * c - c * inner);

  const std::vector<unsigned> bad{1};
  CHECK_THROWS_AS((void)multi_commutator(a, bs, bad), std::invalid_argument);
}

TEST_CASE("commutator with fixed second argument is an iterated bracket") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const NcPoly p = random_poly(rng), q = random_poly(rng);
    NcPoly iterated = p;
    for (int i = 0; i < 3; ++i) iterated = commutator(iterated, q, 1);
    CHECK(commutator(p, q, 3) == iterated);
  }
}

TEST_CASE("product associativity, randomized") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const NcPoly p = random_poly(rng), q = random_poly(rng), r = random_poly(rng);
    CHECK((p * q) * r == p * (q * r));
  }
}

TEST_CASE("evaluation is a ring homomorphism") {
  AlgebraPtr m3 = make_matrix_algebra(3, 2);
  const AlgElem e12 = m3->basis_elem(1), e23 = m3->basis_elem(5), e13 = m3->basis_elem(2);
  std::map<GenId, AlgElem> assign{{{"a", 0}, e12}, {{"b", 0}, e23}};

  CHECK(evaluate(a * b - b * a, assign, *m3) == e13);
  CHECK(evaluate(NcPoly::zero(), assign, *m3).is_zero());
  CHECK(evaluate(a, assign, *m3) == e12);
  CHECK_THROWS_AS((void)evaluate(a * c, assign, *m3), std::invalid_argument);

  AlgebraPtr n3 = make_strict_upper(3, 2);
  std::map<GenId, AlgElem> nassign{{{"a", 0}, n3->basis_elem(0)}, {{"b", 0}, n3->basis_elem(2)}};
  CHECK_THROWS_AS((void)evaluate(a + NcPoly::one(), nassign, *n3), std::invalid_argument);

  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::uint32_t> bit(0, 1);
  for (int rep = 0; rep < 20; ++rep) {
    const NcPoly p = random_poly(rng, 3), q = random_poly(rng, 3);
    std::map<GenId, AlgElem> assignment;
    for (const char* name : {"a", "b", "c"}) {
      Coords coords(9);
      for (auto& x : coords) x = bit(rng);
      assignment.emplace(GenId{name, 0}, m3->elem(coords));
    }
    CHECK(evaluate(p * q, assignment, *m3) ==
          evaluate(p, assignment, *m3) * evaluate(q, assignment, *m3));
    CHECK(evaluate(p + q, assignment, *m3) ==
          evaluate(p, assignment, *m3) + evaluate(q, assignment, *m3));
  }
}

TEST_CASE("text form round-trips exactly") {
  CHECK(NcPoly::zero().str() == "0");
  CHECK(NcPoly::parse("0").is_zero());
  const NcPoly p = BigInt(3) * (a * b * c) - c * a;
  CHECK(p.str() == "3*a.b.c + -1*c.a");
  CHECK(NcPoly::parse(p.str()) == p);
  CHECK(NcPoly::parse("5*1") == BigInt(5) * NcPoly::one());

  const NcPoly with_indices = NcPoly::gen("x", 2) * NcPoly::gen("x", 12);
  CHECK(NcPoly::parse(with_indices.str()) == with_indices);

  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 40; ++rep) {
    const NcPoly q = random_poly(rng);
    CHECK(NcPoly::parse(q.str()) == q);
  }
}

TEST_CASE("generator names reject digits and empties") {
  CHECK_THROWS_AS((void)NcPoly::gen("a1"), std::invalid_argument);
  CHECK_THROWS_AS((void)NcPoly::gen(""), std::invalid_argument);
  CHECK(GenId::parse("ab12").name == "ab");
  CHECK(GenId::parse("ab12").index == 12);
}

TEST_CASE("binomial agrees with the additive recurrence") {
  std::vector<std::vector<BigInt>> pascal{{1}};
  for (unsigned n = 1; n <= 12; ++n) {
    std::vector<BigInt> row(n + 1, 1);
    for (unsigned k = 1; k < n; ++k) row[k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
    pascal.push_back(row);
  }
  for (unsigned n = 0; n <= 12; ++n) {
    for (unsigned k = 0; k <= n; ++k) CHECK(binomial(n, k) == pascal[n][k]);
  }
  CHECK(binomial(4, 7) == 0);
}
