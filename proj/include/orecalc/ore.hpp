#pragma once

// Iterated differential polynomial rings over the unital hull of a base
// coefficient algebra. Elements are kept in the right-coefficient normal form
// X1^{i1}..Xn^{in} * a; multiplication rewrites a*X_i -> X_i*a - d_i(a) and
// X_s*X_j -> X_j*X_s + d_s(X_j) (for j < s) until that form is reached, which
// terminates by the (total degree, disorder) measure.

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "orecalc/algebra.hpp"

namespace orecalc {

class Multidegree {
public:
  Multidegree() = default;
  explicit Multidegree(std::size_t n) : exp_(n, 0) {}
  explicit Multidegree(std::vector<std::uint32_t> exponents) : exp_(std::move(exponents)) {}

  std::size_t vars() const { return exp_.size(); }
  std::uint32_t operator[](std::size_t i) const { return exp_.at(i); }
  std::uint32_t& operator[](std::size_t i) { return exp_.at(i); }
  const std::vector<std::uint32_t>& exponents() const { return exp_; }
  unsigned total() const;
  bool is_zero() const { return total() == 0; }
  bool leq(const Multidegree& rhs) const;  // componentwise
  Multidegree operator+(const Multidegree& rhs) const;

  // Graded lexicographic: total degree first, then lexicographic.
  bool operator<(const Multidegree& rhs) const;
  bool operator==(const Multidegree& rhs) const { return exp_ == rhs.exp_; }

  std::string str() const;  // "X1^2.X2^1"; the zero degree prints "1"

private:
  std::vector<std::uint32_t> exp_;
};

class DerivationTower;
using TowerPtr = std::shared_ptr<const DerivationTower>;

class DerivationTower : public std::enable_shared_from_this<DerivationTower> {
public:
  struct Level {
    Derivation d;                    // action on the hull R*
    std::vector<AlgElem> var_images; // d_i(X_j) for each earlier variable j
  };

  // Tower of inner derivations d_i = [u_i, -]; the cross-variable images
  // d_i(X_j) = u_i u_j - u_j u_i land in the hull automatically.
  static TowerPtr inner(AlgebraPtr base, const std::vector<AlgElem>& elems);

  // All-zero derivations: the commutative polynomial ring over the hull.
  static TowerPtr trivial(AlgebraPtr base, std::size_t n_vars);

  const AlgebraPtr& base() const { return base_; }
  const AlgebraPtr& hull() const { return hull_; }
  std::size_t vars() const { return levels_.size(); }
  const Derivation& derivation(std::size_t level) const { return levels_.at(level).d; }
  const AlgElem& var_image(std::size_t level, std::size_t j) const;
  const std::vector<Level>& levels() const { return levels_; }

private:
  friend class TowerBuilder;
  DerivationTower() = default;
  AlgebraPtr base_;
  AlgebraPtr hull_;
  std::vector<Level> levels_;
};

// Two-phase construction: the hull exists before any level is added, so level
// data (derivation matrices, variable images) can be expressed against it.
class TowerBuilder {
public:
  explicit TowerBuilder(AlgebraPtr base);  // base must be non-unital

  const AlgebraPtr& base() const { return base_; }
  const AlgebraPtr& hull() const { return hull_; }

  TowerBuilder& add_level(Derivation d_on_hull, std::vector<AlgElem> var_images);

  // Validates every level: Leibniz on the hull, the embedded base mapped into
  // the base, and one hull-valued image per earlier variable.
  TowerPtr build();

private:
  AlgebraPtr base_;
  AlgebraPtr hull_;
  std::vector<DerivationTower::Level> levels_;
};

class OrePoly {
public:
  using TermMap = std::map<Multidegree, AlgElem>;

  explicit OrePoly(TowerPtr tower);
  static OrePoly zero(TowerPtr tower) { return OrePoly(std::move(tower)); }
  static OrePoly constant(TowerPtr tower, const AlgElem& hull_coeff);
  static OrePoly variable(TowerPtr tower, std::size_t i);
  static OrePoly term(TowerPtr tower, Multidegree deg, const AlgElem& hull_coeff);
  static OrePoly one(TowerPtr tower);

  const TowerPtr& tower() const { return tower_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned total_degree() const;  // 0 for the zero polynomial
  AlgElem coeff(const Multidegree& deg) const;

  void add_term(const Multidegree& deg, const AlgElem& coeff);

  OrePoly& operator+=(const OrePoly& rhs);
  OrePoly& operator-=(const OrePoly& rhs);
  OrePoly operator-() const;
  friend OrePoly operator+(OrePoly lhs, const OrePoly& rhs) { return lhs += rhs; }
  friend OrePoly operator-(OrePoly lhs, const OrePoly& rhs) { return lhs -= rhs; }
  friend OrePoly operator*(const OrePoly& lhs, const OrePoly& rhs);

  // Right multiplication by a constant needs no rewriting in this normal form.
  OrePoly times_const_right(const AlgElem& hull_coeff) const;

  bool operator==(const OrePoly& rhs) const;

  std::string str() const;  // "X1^2.X2^1 * [0 1 0] + ..." in graded-lex order

private:
  TowerPtr tower_;
  TermMap terms_;
};

// Formal sum/product tree over the tower's variables and hull coefficients,
// for exercising normalization on arbitrary parenthesizations.
class OreExpr {
public:
  static OreExpr var(std::size_t i);
  static OreExpr coeff(AlgElem a);
  friend OreExpr operator+(OreExpr lhs, OreExpr rhs);
  friend OreExpr operator-(OreExpr lhs, OreExpr rhs);
  friend OreExpr operator*(OreExpr lhs, OreExpr rhs);

  // (sign, word) pairs where a word is a sequence of atoms; exposed for the
  // normalizer.
  struct Atom {
    std::ptrdiff_t var = -1;  // >= 0: variable index; -1: coefficient
    AlgElem coeff;
  };
  std::vector<std::pair<int, std::vector<Atom>>> flatten() const;

private:
  enum class Kind { kVar, kCoeff, kSum, kProd, kNeg };
  Kind kind_ = Kind::kVar;
  std::size_t var_ = 0;
  AlgElem coeff_;
  std::vector<OreExpr> children_;
};

OrePoly ore_normalize(const TowerPtr& tower, const OreExpr& expr);

// The Leibniz extension of level i's derivation to polynomials in the earlier
// variables X_1..X_{i-1} (error on higher variables in the support).
OrePoly apply_tower_derivation(std::size_t level, const OrePoly& p);

struct BaseMembership {
  struct Entry {
    Multidegree deg;
    bool in_base;
  };
  std::vector<Entry> entries;
  bool all_in_base = true;
};

// Per-coefficient verdict: in the embedded base, or in the hull only.
BaseMembership coefficients_over_base(const OrePoly& p);

struct MonomialReduction {
  std::map<Multidegree, AlgElem> coefficients;
  std::vector<std::pair<Multidegree, bool>> membership;  // coefficient in N?
  bool all_in_subspace = true;
};

// [X^I a, X_j]_k rewritten to normal form; coefficients are indexed by
// multidegrees componentwise <= I (violations signal a rewriting bug) and
// tagged with membership in N.
MonomialReduction reduce_monomial_commutator(const OrePoly& monomial, std::size_t j, unsigned k,
                                             const Subspace& n_space);

// Conversion between the right-coefficient normal form and the
// left-coefficient convention sum a_deg * X^deg.
std::map<Multidegree, AlgElem> to_left_coefficients(const OrePoly& p);
OrePoly from_left_coefficients(const TowerPtr& tower,
                               const std::map<Multidegree, AlgElem>& left_terms);

// All multidegrees componentwise <= bound, in graded-lex order.
std::vector<Multidegree> multidegrees_upto(const Multidegree& bound);

}  // namespace orecalc
