#include "doctest.h"

#include <random>

#include "orecalc/errors.hpp"
#include "orecalc/ore.hpp"

using namespace orecalc;

namespace {

TowerPtr inner_n3(std::uint32_t p, std::size_t vars) {
  AlgebraPtr n3 = make_strict_upper(3, p);
  std::vector<AlgElem> us{n3->basis_elem(0), n3->basis_elem(2)};  // E12, E23
  us.resize(vars, us.back());
  return DerivationTower::inner(n3, us);
}

OrePoly random_ore(const TowerPtr& tower, std::mt19937_64& rng, unsigned max_total = 2) {
  const std::size_t n = tower->vars();
  std::uniform_int_distribution<std::uint32_t> coord(0, tower->hull()->modulus() - 1);
  OrePoly p(tower);
  const std::vector<Multidegree> degs =
      multidegrees_upto(Multidegree(std::vector<std::uint32_t>(n, max_total)));
  for (const Multidegree& d : degs) {
    if (d.total() > max_total) continue;
    Coords c(tower->hull()->dim());
    for (auto& x : c) x = coord(rng);
    p.add_term(d, tower->hull()->elem(std::move(c)));
  }
  return p;
}

// commutative multivariate oracle: coefficients multiply, exponents add
OrePoly commutative_mul(const OrePoly& a, const OrePoly& b) {
  OrePoly out(a.tower());
  for (const auto& [da, ca] : a.terms()) {
    for (const auto& [db, cb] : b.terms()) out.add_term(da + db, ca * cb);
  }
  return out;
}

}  // namespace

TEST_CASE("multidegree order and boxes") {
  Multidegree a(std::vector<std::uint32_t>{2, 0});
  Multidegree b(std::vector<std::uint32_t>{0, 1});
  CHECK(b < a);
  CHECK(a.total() == 2);
  CHECK(b.leq(Multidegree(std::vector<std::uint32_t>{1, 1})));
  CHECK_FALSE(a.leq(Multidegree(std::vector<std::uint32_t>{1, 1})));
  CHECK(a.str() == "X1^2");
  CHECK(Multidegree(2).str() == "1");
  CHECK(multidegrees_upto(Multidegree(std::vector<std::uint32_t>{1, 2})).size() == 6);
}

TEST_CASE("normalization moves coefficients right") {
  AlgebraPtr n3 = make_strict_upper(3, 2);
  TowerPtr trivial = DerivationTower::trivial(n3, 1);
  const AlgElem a = embed_in_hull(trivial->hull(), n3->basis_elem(2));

  // with zero derivations a*X and X*a agree
  OrePoly left = ore_normalize(trivial, OreExpr::coeff(a) * OreExpr::var(0));
  OrePoly right = ore_normalize(trivial, OreExpr::var(0) * OreExpr::coeff(a));
  CHECK(left == right);
  Multidegree one(std::vector<std::uint32_t>{1});
  CHECK(left.coeff(one) == a);

  OrePoly xx = ore_normalize(trivial, OreExpr::var(0) * OreExpr::var(0));
  CHECK(xx.coeff(Multidegree(std::vector<std::uint32_t>{2})) == trivial->hull()->unit());
}

TEST_CASE("normalization applies the twist") {
  // inner tower over N3(Z/3) by E12: d(E23) = E13, so E23*X = X*E23 - E13
  TowerPtr tower = inner_n3(3, 1);
  const AlgebraPtr& hull = tower->hull();
  const AlgElem e23 = hull->basis_elem(3), e13 = hull->basis_elem(2);

  OrePoly p = ore_normalize(tower, OreExpr::coeff(e23) * OreExpr::var(0));
  Multidegree one(std::vector<std::uint32_t>{1});
  Multidegree zero(std::vector<std::uint32_t>{0});
  CHECK(p.coeff(one) == e23);
  CHECK(p.coeff(zero) == -e13);

  // mod 2 the sign collapses
  TowerPtr tower2 = inner_n3(2, 1);
  OrePoly q = ore_normalize(
      tower2, OreExpr::coeff(tower2->hull()->basis_elem(3)) * OreExpr::var(0));
  CHECK(q.coeff(zero) == tower2->hull()->basis_elem(2));

  CHECK_THROWS_AS((void)ore_normalize(tower, OreExpr::var(1)), std::invalid_argument);
}

TEST_CASE("the defining relation X*a = a*X + d(a) holds after normalization") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    TowerPtr tower = inner_n3(p, 1);
    const AlgebraPtr& hull = tower->hull();
    for (std::size_t i = 0; i < hull->dim(); ++i) {
      const AlgElem a = hull->basis_elem(i);
      OrePoly xa = ore_normalize(tower, OreExpr::var(0) * OreExpr::coeff(a));
      OrePoly ax = ore_normalize(tower, OreExpr::coeff(a) * OreExpr::var(0));
      CHECK(xa - ax == OrePoly::constant(tower, tower->derivation(0).apply(a)));
    }
  }
}

TEST_CASE("normalization is confluent across parenthesizations") {
  TowerPtr tower = inner_n3(3, 2);
  const AlgebraPtr& hull = tower->hull();
  const AlgElem a = hull->basis_elem(1), b = hull->basis_elem(3);

  OreExpr x = OreExpr::var(0), y = OreExpr::var(1);
  OrePoly p1 = ore_normalize(tower, (OreExpr::coeff(a) * x) * (y * OreExpr::coeff(b)));
  OrePoly p2 = ore_normalize(tower, OreExpr::coeff(a) * (x * y) * OreExpr::coeff(b));
  OrePoly p3 = ore_normalize(tower, OreExpr::coeff(a) * (x * (y * OreExpr::coeff(b))));
  CHECK(p1 == p2);
  CHECK(p2 == p3);

  // X2*X1 = X1*X2 + d_2(X1)
  OrePoly q1 = ore_normalize(tower, y * x);
  OrePoly expected =
      ore_normalize(tower, x * y) + OrePoly::constant(tower, tower->var_image(1, 0));
  CHECK(q1 == expected);
  CHECK_FALSE(tower->var_image(1, 0).is_zero());
}

TEST_CASE("ore multiplication basics") {
  TowerPtr tower = inner_n3(3, 1);
  const AlgebraPtr& hull = tower->hull();
  const AlgElem a = hull->basis_elem(1), b = hull->basis_elem(3);
  const OrePoly x = OrePoly::variable(tower, 0);

  CHECK((x * OrePoly::zero(tower)).is_zero());

  TowerPtr trivial = DerivationTower::trivial(make_strict_upper(3, 3), 1);
  const AlgebraPtr& thull = trivial->hull();
  OrePoly xa = OrePoly::term(trivial, Multidegree(std::vector<std::uint32_t>{1}),
                             thull->basis_elem(1));
  OrePoly xb = OrePoly::term(trivial, Multidegree(std::vector<std::uint32_t>{1}),
                             thull->basis_elem(3));
  OrePoly prod = xa * xb;
  CHECK(prod == OrePoly::term(trivial, Multidegree(std::vector<std::uint32_t>{2}),
                              thull->basis_elem(1) * thull->basis_elem(3)));

  // (a)(X b) = X(ab) - d(a) b
  const Derivation& d = tower->derivation(0);
  OrePoly lhs = OrePoly::constant(tower, b) *
                OrePoly::term(tower, Multidegree(std::vector<std::uint32_t>{1}), a);
  OrePoly expected =
      OrePoly::term(tower, Multidegree(std::vector<std::uint32_t>{1}), b * a) -
      OrePoly::constant(tower, d.apply(b) * a);
  CHECK(lhs == expected);
}

TEST_CASE("ore multiplication is associative on twisted towers") {
  for (std::uint32_t p : {2u, 3u}) {
    TowerPtr tower = inner_n3(p, 2);
    REQUIRE(!tower->var_image(1, 0).is_zero());  // genuinely twisted
    std::mt19937_64 rng(100 + p);
    for (int rep = 0; rep < 25; ++rep) {
      OrePoly a = random_ore(tower, rng), b = random_ore(tower, rng),
              c = random_ore(tower, rng);
      CHECK((a * b) * c == a * (b * c));
    }
  }
}

TEST_CASE("trivial towers multiply like commutative polynomials") {
  TowerPtr trivial = DerivationTower::trivial(make_strict_upper(3, 5), 2);
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 25; ++rep) {
    OrePoly a = random_ore(trivial, rng), b = random_ore(trivial, rng);
    CHECK(a * b == commutative_mul(a, b));
  }
}

TEST_CASE("level derivations extend by the product rule") {
  // zero everywhere: the extension is the zero map
  TowerPtr trivial = DerivationTower::trivial(make_strict_upper(3, 2), 2);
  std::mt19937_64 rng(5);
  OrePoly p = random_ore(trivial, rng);
  // restrict support to X1 only
  OrePoly p1(trivial);
  for (const auto& [deg, c] : p.terms()) {
    if (deg[1] == 0) p1.add_term(deg, c);
  }
  CHECK(apply_tower_derivation(1, p1).is_zero());

  // d_2(X1) = 1 forces d_2(X1^2) = 2 X1
  for (std::uint32_t prime : {3u, 2u}) {
    AlgebraPtr base = make_strict_upper(2, prime);
    TowerBuilder builder(base);
    builder.add_level(Derivation::zero(builder.hull()), {});
    builder.add_level(Derivation::zero(builder.hull()), {builder.hull()->unit()});
    TowerPtr tower = builder.build();
    OrePoly x1sq = ore_normalize(tower, OreExpr::var(0) * OreExpr::var(0));
    OrePoly dx = apply_tower_derivation(1, x1sq);
    OrePoly expected = OrePoly::term(tower, Multidegree(std::vector<std::uint32_t>{1, 0}),
                                     2 * tower->hull()->unit());
    CHECK(dx == expected);
    if (prime == 2) CHECK(dx.is_zero());
  }

  // Leibniz on random pairs, and agreement with the hull derivation in degree 0
  TowerPtr tower = inner_n3(3, 2);
  std::mt19937_64 rng2(7);
  for (int rep = 0; rep < 20; ++rep) {
    OrePoly a = random_ore(tower, rng2), b = random_ore(tower, rng2);
    OrePoly a1(tower), b1(tower);
    for (const auto& [deg, c] : a.terms()) {
      if (deg[1] == 0) a1.add_term(deg, c);
    }
    for (const auto& [deg, c] : b.terms()) {
      if (deg[1] == 0) b1.add_term(deg, c);
    }
    OrePoly lhs = apply_tower_derivation(1, a1 * b1);
    OrePoly rhs = apply_tower_derivation(1, a1) * b1 + a1 * apply_tower_derivation(1, b1);
    CHECK(lhs == rhs);
  }
  const AlgElem u = tower->hull()->basis_elem(2);
  CHECK(apply_tower_derivation(1, OrePoly::constant(tower, u)) ==
        OrePoly::constant(tower, tower->derivation(1).apply(u)));

  CHECK_THROWS_AS((void)apply_tower_derivation(1, OrePoly::variable(tower, 1)),
                  std::invalid_argument);
}

TEST_CASE("membership of coefficients in the base") {
  TowerPtr tower = inner_n3(2, 1);
  const AlgebraPtr& hull = tower->hull();
  OrePoly p = OrePoly::term(tower, Multidegree(std::vector<std::uint32_t>{1}),
                            hull->basis_elem(1)) +
              OrePoly::one(tower);
  BaseMembership verdict = coefficients_over_base(p);
  CHECK_FALSE(verdict.all_in_base);
  CHECK(verdict.entries.size() == 2);

  OrePoly q = OrePoly::term(tower, Multidegree(std::vector<std::uint32_t>{1}),
                            hull->basis_elem(1));
  CHECK(coefficients_over_base(q).all_in_base);
  CHECK_FALSE(coefficients_over_base(OrePoly::one(tower)).all_in_base);
}

TEST_CASE("monomial commutator reduction") {
  TowerPtr tower = inner_n3(2, 1);
  const AlgebraPtr& hull = tower->hull();
  Subspace base_space = Subspace::span(tower->hull(), [&] {
    std::vector<Coords> rows;
    for (std::size_t i = 0; i < tower->base()->dim(); ++i) {
      rows.push_back(embed_in_hull_coords(tower->base()->basis_elem(i).coords()));
    }
    return rows;
  }());

  // k = 0 returns the input
  OrePoly mono = OrePoly::term(tower, Multidegree(std::vector<std::uint32_t>{1}),
                               hull->basis_elem(3));
  MonomialReduction red0 = reduce_monomial_commutator(mono, 0, 0, base_space);
  CHECK(red0.coefficients.size() == 1);
  CHECK(red0.coefficients.begin()->second == hull->basis_elem(3));

  // central variable: all derivations zero and k >= 1 kills the commutator
  TowerPtr trivial = DerivationTower::trivial(make_strict_upper(3, 2), 1);
  Subspace tspace(trivial->hull());
  OrePoly cmono = OrePoly::term(trivial, Multidegree(std::vector<std::uint32_t>{2}),
                                trivial->hull()->basis_elem(1));
  for (unsigned k = 1; k <= 3; ++k) {
    CHECK(reduce_monomial_commutator(cmono, 0, k, tspace).coefficients.empty());
  }

  // twisted case matches the direct bracket expansion
  MonomialReduction red = reduce_monomial_commutator(mono, 0, 1, base_space);
  const OrePoly x = OrePoly::variable(tower, 0);
  OrePoly direct = mono * x - x * mono;
  OrePoly rebuilt(tower);
  for (const auto& [deg, c] : red.coefficients) rebuilt.add_term(deg, c);
  CHECK(rebuilt == direct);
  CHECK(red.all_in_subspace);

  // against the zero subspace the same coefficients are reported as outside
  Subspace empty_n(tower->hull());
  CHECK_FALSE(reduce_monomial_commutator(mono, 0, 1, empty_n).all_in_subspace);

  // exponent bound holds on random monomials
  std::mt19937_64 rng(9);
  TowerPtr t2 = inner_n3(3, 2);
  Subspace any(t2->hull());
  for (int rep = 0; rep < 15; ++rep) {
    std::uniform_int_distribution<std::uint32_t> e(0, 2);
    Multidegree deg(std::vector<std::uint32_t>{e(rng), e(rng)});
    Coords c(t2->hull()->dim());
    std::uniform_int_distribution<std::uint32_t> coord(0, 2);
    for (auto& x2 : c) x2 = coord(rng);
    AlgElem coeff = t2->hull()->elem(std::move(c));
    if (coeff.is_zero()) continue;
    OrePoly m = OrePoly::term(t2, deg, coeff);
    for (unsigned k = 0; k <= 2; ++k) {
      for (std::size_t j = 0; j < 2; ++j) {
        MonomialReduction r = reduce_monomial_commutator(m, j, k, any);
        for (const auto& [d, cc] : r.coefficients) CHECK(d.leq(deg));
      }
    }
  }

  CHECK_THROWS_AS((void)reduce_monomial_commutator(mono + OrePoly::one(tower), 0, 1, base_space),
                  std::invalid_argument);
}

TEST_CASE("left and right coefficient conventions") {
  TowerPtr tower = inner_n3(3, 2);
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 20; ++rep) {
    OrePoly p = random_ore(tower, rng);
    auto left = to_left_coefficients(p);
    CHECK(from_left_coefficients(tower, left) == p);
  }

  // a concrete twist: X*a in left form needs a correction term
  TowerPtr t1 = inner_n3(3, 1);
  const AlgElem e23 = t1->hull()->basis_elem(3);
  OrePoly p = ore_normalize(t1, OreExpr::var(0) * OreExpr::coeff(e23));
  auto left = to_left_coefficients(p);
  // X e23 = e23 X + d(e23): left form has coefficient e23 at X and d(e23) at 1
  Multidegree one(std::vector<std::uint32_t>{1});
  Multidegree zero(std::vector<std::uint32_t>{0});
  CHECK(left.at(one) == e23);
  CHECK(left.at(zero) == t1->derivation(0).apply(e23));
}

TEST_CASE("empty tower degrades to the hull") {
  AlgebraPtr n2 = make_strict_upper(2, 5);
  TowerPtr empty = DerivationTower::trivial(n2, 0);
  const AlgElem a = embed_in_hull(empty->hull(), n2->basis_elem(0));
  OrePoly pa = OrePoly::constant(empty, a);
  OrePoly unit = OrePoly::one(empty);
  CHECK(pa * unit == pa);
  CHECK((pa * pa).is_zero());
  CHECK((unit * unit) == unit);
}

TEST_CASE("tower construction rejects bad level data") {
  AlgebraPtr n2 = make_strict_upper(2, 2);
  CHECK_THROWS_AS(TowerBuilder(make_matrix_algebra(2, 2)), std::invalid_argument);

  TowerBuilder missing(n2);
  missing.add_level(Derivation::zero(missing.hull()), {});
  missing.add_level(Derivation::zero(missing.hull()), {});  // missing the X1 image
  CHECK_THROWS_AS((void)missing.build(), std::invalid_argument);

  TowerBuilder leaky(n2);
  // d(E12) = 1 satisfies Leibniz over Z/2 but leaves the base
  std::vector<Coords> images{{0, 0}, {1, 0}};
  leaky.add_level(Derivation(leaky.hull(), images), {});
  CHECK_THROWS_AS((void)leaky.build(), std::invalid_argument);

  TowerBuilder bad(n2);
  std::vector<Coords> not_leibniz{{1, 0}, {0, 1}};  // the identity map
  bad.add_level(Derivation(bad.hull(), not_leibniz), {});
  CHECK_THROWS_AS((void)bad.build(), std::invalid_argument);
}

TEST_CASE("polynomial text form is deterministic") {
  TowerPtr tower = inner_n3(2, 2);
  OrePoly p = OrePoly::one(tower) +
              OrePoly::term(tower, Multidegree(std::vector<std::uint32_t>{1, 1}),
                            tower->hull()->basis_elem(1));
  CHECK(p.str() == "X1^1.X2^1 * [0 1 0 0] + 1 * [1 0 0 0]");
  CHECK(OrePoly::zero(tower).str() == "0");
}
