#pragma once

// Finite-dimensional associative algebras over Z/m given by structure
// constants, with derivations, echelonized subspaces over Z/p, subalgebra
// closure, nilpotency indices and exhaustive idempotent search. These are
// the concrete coefficient rings and evaluation targets for everything else.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orecalc/freealg.hpp"

namespace orecalc {

using Coords = std::vector<std::uint32_t>;

class FiniteAlgebra : public std::enable_shared_from_this<FiniteAlgebra> {
public:
  // Validates associativity on all basis triples and, when a unit vector is
  // supplied, that it is a two-sided identity. Modulus must lie in
  // [2, kernels::kMaxModulus).
  static std::shared_ptr<const FiniteAlgebra> create(std::uint32_t modulus,
                                                     std::vector<std::string> basis_labels,
                                                     std::vector<std::vector<Coords>> products,
                                                     std::optional<Coords> unit = std::nullopt);

  std::uint32_t modulus() const { return modulus_; }
  std::size_t dim() const { return labels_.size(); }
  bool unital() const { return unit_.has_value(); }
  bool modulus_prime() const { return modulus_prime_; }
  const std::vector<std::string>& basis_labels() const { return labels_; }
  const Coords& product_coords(std::size_t i, std::size_t j) const { return products_[i][j]; }

  AlgElem zero() const;
  AlgElem unit() const;
  AlgElem basis_elem(std::size_t i) const;
  AlgElem elem(Coords coords) const;
  std::uint32_t residue(const BigInt& z) const;
  AlgElem scalar_times_unit(const BigInt& z) const;

  // Total number of elements, or nullopt when it exceeds 2^62.
  std::optional<std::uint64_t> element_count() const;

  std::string describe_elem(const Coords& coords) const;

private:
  FiniteAlgebra() = default;

  std::uint32_t modulus_ = 0;
  bool modulus_prime_ = false;
  std::vector<std::string> labels_;
  std::vector<std::vector<Coords>> products_;  // products_[i][j] = e_i * e_j
  std::optional<Coords> unit_;
};

using AlgebraPtr = std::shared_ptr<const FiniteAlgebra>;

class AlgElem {
public:
  AlgElem() = default;
  AlgElem(AlgebraPtr parent, Coords coords);

  const AlgebraPtr& parent() const { return parent_; }
  const Coords& coords() const { return coords_; }
  bool is_zero() const;

  AlgElem& operator+=(const AlgElem& rhs);
  AlgElem& operator-=(const AlgElem& rhs);
  friend AlgElem operator+(AlgElem lhs, const AlgElem& rhs) { return lhs += rhs; }
  friend AlgElem operator-(AlgElem lhs, const AlgElem& rhs) { return lhs -= rhs; }
  friend AlgElem operator*(const AlgElem& lhs, const AlgElem& rhs);
  AlgElem operator-() const;
  friend AlgElem operator*(std::uint32_t c, const AlgElem& e);

  bool operator==(const AlgElem& rhs) const;

  std::string str() const;

private:
  AlgebraPtr parent_;
  Coords coords_;
};

// d given by its action on the basis, extended linearly.
class Derivation {
public:
  Derivation(AlgebraPtr parent, std::vector<Coords> images);

  const AlgebraPtr& parent() const { return parent_; }
  const std::vector<Coords>& images() const { return images_; }
  AlgElem apply(const AlgElem& u) const;
  Coords apply(const Coords& u) const;

  static Derivation zero(AlgebraPtr parent);

private:
  AlgebraPtr parent_;
  std::vector<Coords> images_;  // images_[j] = d(e_j)
};

// First basis pair (i, j) with d(e_i e_j) != d(e_i) e_j + e_i d(e_j), if any.
std::optional<std::pair<std::size_t, std::size_t>> leibniz_witness(
    const std::vector<Coords>& images, const FiniteAlgebra& algebra);

bool check_leibniz(const Derivation& d);

// d(a) = u a - a u.
Derivation inner_derivation(const AlgElem& u);

// Row-reduced echelon span over Z/p (prime modulus required).
class Subspace {
public:
  explicit Subspace(AlgebraPtr parent);
  static Subspace span(AlgebraPtr parent, const std::vector<Coords>& gens);
  static Subspace span_elems(const std::vector<AlgElem>& gens, AlgebraPtr parent = nullptr);

  const AlgebraPtr& parent() const { return parent_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<Coords>& rows() const { return rows_; }
  std::vector<AlgElem> basis_elements() const;

  bool insert(Coords v);  // true if the rank grew
  Coords reduce(Coords v) const;
  bool contains(const Coords& v) const;
  bool contains(const AlgElem& e) const;
  bool operator==(const Subspace& rhs) const;

  // True when every pairwise product of basis vectors stays inside.
  bool closed_under_multiplication() const;

private:
  AlgebraPtr parent_;
  std::vector<Coords> rows_;
  std::vector<std::size_t> pivots_;
};

// Smallest subspace containing gens and closed under multiplication
// (non-unital closure: products only).
Subspace subalgebra_closure(AlgebraPtr parent, const std::vector<AlgElem>& gens);

// Least m with S^m = 0, or nullopt when powers stabilize at a nonzero span.
// Requires S closed under multiplication.
std::optional<unsigned> nilpotency_index(const Subspace& s);

inline constexpr std::uint64_t kDefaultSearchLimit = 1ull << 20;

// All e with e*e = e, exhaustively; refuses (resource_error) when the search
// space exceeds the limit. Deterministic enumeration order regardless of the
// internal worker partitioning.
std::vector<AlgElem> find_idempotents(const AlgebraPtr& algebra,
                                      std::uint64_t limit = kDefaultSearchLimit);
std::vector<AlgElem> find_idempotents(const Subspace& space,
                                      std::uint64_t limit = kDefaultSearchLimit);

// Matrix algebra M_n(Z/p) on the E_ij basis.
AlgebraPtr make_matrix_algebra(unsigned n, std::uint32_t p);

// Strictly upper triangular matrices N_n(Z/p); non-unital, nilpotent of index n.
AlgebraPtr make_strict_upper(unsigned n, std::uint32_t p);

// Unital hull: dimension dim+1, unit at coordinate 0, the base embedded as an
// ideal at coordinates 1..dim. Errors when the input is already unital.
AlgebraPtr adjoin_unit(const AlgebraPtr& base);

AlgElem embed_in_hull(const AlgebraPtr& hull, const AlgElem& base_elem);
Coords embed_in_hull_coords(const Coords& base_coords);
bool hull_elem_in_base(const AlgElem& hull_elem);
AlgElem hull_elem_to_base(const AlgebraPtr& base, const AlgElem& hull_elem);

bool is_prime(std::uint32_t m);

// Canonical solution (free variables zero) of A x = b over Z/p, or nullopt
// when inconsistent. rows[r][c] is the coefficient of unknown c in row r.
std::optional<Coords> solve_linear_mod(const std::vector<Coords>& rows, const Coords& rhs,
                                       std::uint32_t p);

// Canonical basis of {x : A x = 0} over Z/p; n_cols is required so the empty
// matrix yields the full space.
std::vector<Coords> nullspace_mod(const std::vector<Coords>& rows, std::size_t n_cols,
                                  std::uint32_t p);

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p);

}  // namespace orecalc
