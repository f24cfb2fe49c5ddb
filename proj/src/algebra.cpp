#include "orecalc/algebra.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "orecalc/errors.hpp"
#include "orecalc/kernels.hpp"
#include "orecalc/parallel.hpp"

namespace orecalc {

namespace {

Coords mul_coords(const FiniteAlgebra& alg, const Coords& u, const Coords& v) {
  const std::size_t dim = alg.dim();
  const std::uint32_t m = alg.modulus();
  Coords out(dim, 0);
  for (std::size_t i = 0; i < dim; ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      if (v[j] == 0) continue;
      const std::uint32_t c = static_cast<std::uint32_t>(
          (static_cast<std::uint64_t>(u[i]) * v[j]) % m);
      if (c == 0) continue;
      kernels::fma_mod(out.data(), c, alg.product_coords(i, j).data(), m, dim);
    }
  }
  return out;
}

void check_coords(const FiniteAlgebra& alg, const Coords& c, const char* what) {
  if (c.size() != alg.dim()) {
    throw std::invalid_argument(std::string(what) + ": coordinate vector has length " +
                                std::to_string(c.size()) + ", expected " +
                                std::to_string(alg.dim()));
  }
  for (std::uint32_t x : c) {
    if (x >= alg.modulus()) {
      throw std::invalid_argument(std::string(what) + ": coordinate " + std::to_string(x) +
                                  " not reduced mod " + std::to_string(alg.modulus()));
    }
  }
}

}  // namespace

bool is_prime(std::uint32_t m) {
  if (m < 2) return false;
  for (std::uint32_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) return false;
  }
  return true;
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  // Fermat; p prime.
  std::uint64_t base = a % p, out = 1;
  for (std::uint32_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) out = out * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(out);
}

std::shared_ptr<const FiniteAlgebra> FiniteAlgebra::create(
    std::uint32_t modulus, std::vector<std::string> basis_labels,
    std::vector<std::vector<Coords>> products, std::optional<Coords> unit) {
  if (modulus < 2 || modulus >= kernels::kMaxModulus) {
    throw std::invalid_argument("modulus must lie in [2, " +
                                std::to_string(kernels::kMaxModulus) + ")");
  }
  const std::size_t dim = basis_labels.size();
  if (dim == 0) throw std::invalid_argument("algebra dimension must be positive");
  if (products.size() != dim) throw std::invalid_argument("structure constant table: bad shape");

  auto alg = std::shared_ptr<FiniteAlgebra>(new FiniteAlgebra());
  alg->modulus_ = modulus;
  alg->modulus_prime_ = is_prime(modulus);
  alg->labels_ = std::move(basis_labels);
  alg->products_ = std::move(products);

  for (std::size_t i = 0; i < dim; ++i) {
    if (alg->products_[i].size() != dim) {
      throw std::invalid_argument("structure constant table: bad shape");
    }
    for (std::size_t j = 0; j < dim; ++j) check_coords(*alg, alg->products_[i][j], "product");
  }

  // Associativity on all basis triples.
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const Coords& ij = alg->products_[i][j];
      for (std::size_t k = 0; k < dim; ++k) {
        Coords ek(dim, 0);
        ek[k] = 1;
        Coords lhs = mul_coords(*alg, ij, ek);
        Coords ei(dim, 0);
        ei[i] = 1;
        Coords rhs = mul_coords(*alg, ei, alg->products_[j][k]);
        if (lhs != rhs) {
          throw std::invalid_argument("structure constants not associative at basis triple (" +
                                      alg->labels_[i] + ", " + alg->labels_[j] + ", " +
                                      alg->labels_[k] + ")");
        }
      }
    }
  }

  if (unit) {
    check_coords(*alg, *unit, "unit");
    for (std::size_t i = 0; i < dim; ++i) {
      Coords ei(dim, 0);
      ei[i] = 1;
      if (mul_coords(*alg, *unit, ei) != ei || mul_coords(*alg, ei, *unit) != ei) {
        throw std::invalid_argument("declared unit is not a two-sided identity at basis " +
                                    alg->labels_[i]);
      }
    }
    alg->unit_ = std::move(unit);
  }
  return alg;
}

AlgElem FiniteAlgebra::zero() const {
  return AlgElem(shared_from_this(), Coords(dim(), 0));
}

AlgElem FiniteAlgebra::unit() const {
  if (!unit_) throw std::invalid_argument("algebra has no unit");
  return AlgElem(shared_from_this(), *unit_);
}

AlgElem FiniteAlgebra::basis_elem(std::size_t i) const {
  Coords c(dim(), 0);
  c.at(i) = 1;
  return AlgElem(shared_from_this(), std::move(c));
}

AlgElem FiniteAlgebra::elem(Coords coords) const {
  check_coords(*this, coords, "elem");
  return AlgElem(shared_from_this(), std::move(coords));
}

std::uint32_t FiniteAlgebra::residue(const BigInt& z) const {
  BigInt r = z % modulus_;
  if (r < 0) r += modulus_;
  return r.convert_to<std::uint32_t>();
}

AlgElem FiniteAlgebra::scalar_times_unit(const BigInt& z) const {
  return residue(z) * unit();
}

std::optional<std::uint64_t> FiniteAlgebra::element_count() const {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (count > (1ull << 62) / modulus_) return std::nullopt;
    count *= modulus_;
  }
  return count;
}

std::string FiniteAlgebra::describe_elem(const Coords& coords) const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (coords[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (coords[i] != 1) os << coords[i] << "*";
    os << labels_[i];
  }
  if (first) os << "0";
  return os.str();
}

AlgElem::AlgElem(AlgebraPtr parent, Coords coords)
    : parent_(std::move(parent)), coords_(std::move(coords)) {
  if (!parent_) throw std::invalid_argument("AlgElem without algebra");
  check_coords(*parent_, coords_, "AlgElem");
}

bool AlgElem::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](std::uint32_t x) { return x == 0; });
}

namespace {
void require_same_parent(const AlgElem& a, const AlgElem& b) {
  if (a.parent() != b.parent()) {
    throw std::invalid_argument("elements belong to different algebras");
  }
}
}  // namespace

AlgElem& AlgElem::operator+=(const AlgElem& rhs) {
  require_same_parent(*this, rhs);
  kernels::add_mod(coords_.data(), coords_.data(), rhs.coords_.data(), parent_->modulus(),
                   coords_.size());
  return *this;
}

AlgElem& AlgElem::operator-=(const AlgElem& rhs) {
  require_same_parent(*this, rhs);
  kernels::sub_mod(coords_.data(), coords_.data(), rhs.coords_.data(), parent_->modulus(),
                   coords_.size());
  return *this;
}

AlgElem operator*(const AlgElem& lhs, const AlgElem& rhs) {
  require_same_parent(lhs, rhs);
  return AlgElem(lhs.parent(), mul_coords(*lhs.parent(), lhs.coords(), rhs.coords()));
}

AlgElem AlgElem::operator-() const {
  AlgElem out(parent_, Coords(coords_.size(), 0));
  kernels::sub_mod(out.coords_.data(), out.coords_.data(), coords_.data(), parent_->modulus(),
                   coords_.size());
  return out;
}

AlgElem operator*(std::uint32_t c, const AlgElem& e) {
  c %= e.parent()->modulus();
  AlgElem out(e.parent(), Coords(e.coords().size(), 0));
  kernels::fma_mod(const_cast<Coords&>(out.coords()).data(), c, e.coords().data(),
                   e.parent()->modulus(), e.coords().size());
  return out;
}

bool AlgElem::operator==(const AlgElem& rhs) const {
  return parent_ == rhs.parent_ && coords_ == rhs.coords_;
}

std::string AlgElem::str() const { return parent_->describe_elem(coords_); }

Derivation::Derivation(AlgebraPtr parent, std::vector<Coords> images)
    : parent_(std::move(parent)), images_(std::move(images)) {
  if (!parent_) throw std::invalid_argument("Derivation without algebra");
  if (images_.size() != parent_->dim()) {
    throw std::invalid_argument("Derivation: one image per basis vector required");
  }
  for (const Coords& img : images_) check_coords(*parent_, img, "Derivation image");
}

Derivation Derivation::zero(AlgebraPtr parent) {
  std::vector<Coords> images(parent->dim(), Coords(parent->dim(), 0));
  return Derivation(std::move(parent), std::move(images));
}

Coords Derivation::apply(const Coords& u) const {
  Coords out(parent_->dim(), 0);
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] == 0) continue;
    kernels::fma_mod(out.data(), u[j], images_[j].data(), parent_->modulus(), out.size());
  }
  return out;
}

AlgElem Derivation::apply(const AlgElem& u) const {
  if (u.parent() != parent_) throw std::invalid_argument("Derivation applied across algebras");
  return AlgElem(parent_, apply(u.coords()));
}

std::optional<std::pair<std::size_t, std::size_t>> leibniz_witness(
    const std::vector<Coords>& images, const FiniteAlgebra& algebra) {
  const std::size_t dim = algebra.dim();
  for (std::size_t i = 0; i < dim; ++i) {
    Coords ei(dim, 0);
    ei[i] = 1;
    for (std::size_t j = 0; j < dim; ++j) {
      Coords ej(dim, 0);
      ej[j] = 1;
      // d(e_i e_j)
      Coords lhs(dim, 0);
      const Coords& prod = algebra.product_coords(i, j);
      for (std::size_t t = 0; t < dim; ++t) {
        if (prod[t] == 0) continue;
        kernels::fma_mod(lhs.data(), prod[t], images[t].data(), algebra.modulus(), dim);
      }
      Coords rhs = mul_coords(algebra, images[i], ej);
      Coords rhs2 = mul_coords(algebra, ei, images[j]);
      kernels::add_mod(rhs.data(), rhs.data(), rhs2.data(), algebra.modulus(), dim);
      if (lhs != rhs) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

bool check_leibniz(const Derivation& d) {
  return !leibniz_witness(d.images(), *d.parent()).has_value();
}

Derivation inner_derivation(const AlgElem& u) {
  const AlgebraPtr& alg = u.parent();
  std::vector<Coords> images;
  images.reserve(alg->dim());
  for (std::size_t j = 0; j < alg->dim(); ++j) {
    AlgElem ej = alg->basis_elem(j);
    images.push_back((u * ej - ej * u).coords());
  }
  return Derivation(alg, std::move(images));
}

Subspace::Subspace(AlgebraPtr parent) : parent_(std::move(parent)) {
  if (!parent_) throw std::invalid_argument("Subspace without algebra");
  if (!parent_->modulus_prime()) {
    throw std::invalid_argument("Subspace needs a prime modulus for echelon arithmetic");
  }
}

Subspace Subspace::span(AlgebraPtr parent, const std::vector<Coords>& gens) {
  Subspace s(std::move(parent));
  for (const Coords& g : gens) s.insert(g);
  return s;
}

Subspace Subspace::span_elems(const std::vector<AlgElem>& gens, AlgebraPtr parent) {
  if (!parent) {
    if (gens.empty()) throw std::invalid_argument("span_elems: empty set needs explicit algebra");
    parent = gens.front().parent();
  }
  Subspace s(parent);
  for (const AlgElem& g : gens) {
    if (g.parent() != parent) throw std::invalid_argument("span_elems: mixed algebras");
    s.insert(g.coords());
  }
  return s;
}

std::vector<AlgElem> Subspace::basis_elements() const {
  std::vector<AlgElem> out;
  out.reserve(rows_.size());
  for (const Coords& r : rows_) out.emplace_back(parent_, r);
  return out;
}

Coords Subspace::reduce(Coords v) const {
  const std::uint32_t p = parent_->modulus();
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const std::uint32_t c = v[pivots_[r]];
    if (c != 0) {
      kernels::fma_mod(v.data(), p - c, rows_[r].data(), p, v.size());
    }
  }
  return v;
}

bool Subspace::insert(Coords v) {
  check_coords(*parent_, v, "Subspace::insert");
  const std::uint32_t p = parent_->modulus();
  v = reduce(std::move(v));
  std::size_t pivot = v.size();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) {
      pivot = i;
      break;
    }
  }
  if (pivot == v.size()) return false;

  const std::uint32_t inv = inverse_mod(v[pivot], p);
  Coords scaled(v.size(), 0);
  kernels::fma_mod(scaled.data(), inv, v.data(), p, v.size());

  // Clear the new pivot column from the existing rows, then keep rows sorted
  // by pivot so equal subspaces have identical row lists.
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const std::uint32_t c = rows_[r][pivot];
    if (c != 0) kernels::fma_mod(rows_[r].data(), p - c, scaled.data(), p, rows_[r].size());
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pivot);
  const std::size_t idx = static_cast<std::size_t>(pos - pivots_.begin());
  pivots_.insert(pos, pivot);
  rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(idx), std::move(scaled));
  return true;
}

bool Subspace::contains(const Coords& v) const {
  Coords r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](std::uint32_t x) { return x == 0; });
}

bool Subspace::contains(const AlgElem& e) const {
  if (e.parent() != parent_) return false;
  return contains(e.coords());
}

bool Subspace::operator==(const Subspace& rhs) const {
  return parent_ == rhs.parent_ && rows_ == rhs.rows_;
}

bool Subspace::closed_under_multiplication() const {
  for (const Coords& u : rows_) {
    for (const Coords& v : rows_) {
      if (!contains(mul_coords(*parent_, u, v))) return false;
    }
  }
  return true;
}

Subspace subalgebra_closure(AlgebraPtr parent, const std::vector<AlgElem>& gens) {
  if (!parent->modulus_prime()) {
    throw std::invalid_argument("subalgebra_closure requires a prime modulus");
  }
  Subspace s(parent);
  for (const AlgElem& g : gens) {
    if (g.parent() != parent) throw std::invalid_argument("subalgebra_closure: mixed algebras");
    s.insert(g.coords());
  }
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<Coords> rows = s.rows();
    for (const Coords& u : rows) {
      for (const Coords& v : rows) {
        if (s.insert(mul_coords(*parent, u, v))) grew = true;
      }
    }
  }
  return s;
}

std::optional<unsigned> nilpotency_index(const Subspace& s) {
  if (!s.parent()->modulus_prime()) {
    throw std::invalid_argument("nilpotency_index requires a prime modulus");
  }
  if (!s.closed_under_multiplication()) {
    throw precondition_error("nilpotency_index: space not closed under multiplication");
  }
  Subspace power = s;
  unsigned m = 1;
  while (power.rank() > 0) {
    Subspace next(s.parent());
    for (const Coords& u : s.rows()) {
      for (const Coords& v : power.rows()) {
        next.insert(mul_coords(*s.parent(), u, v));
      }
    }
    ++m;
    if (next.rank() == power.rank()) return std::nullopt;  // descending chain stabilized
    power = std::move(next);
  }
  return m;
}

namespace {

std::vector<AlgElem> idempotent_scan(const AlgebraPtr& alg,
                                     const std::vector<Coords>& basis_rows,
                                     std::uint32_t radix, std::uint64_t limit) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < basis_rows.size(); ++i) {
    if (count > limit / radix + 1) {
      throw resource_error("idempotent search space exceeds limit of " + std::to_string(limit) +
                               " candidates",
                           limit);
    }
    count *= radix;
  }
  if (count > limit) {
    throw resource_error("idempotent search space has " + std::to_string(count) +
                             " candidates, limit is " + std::to_string(limit),
                         count);
  }

  const std::size_t dim = alg->dim();
  const std::uint32_t m = alg->modulus();
  auto candidate = [&](std::uint64_t idx) -> std::optional<std::uint64_t> {
    Coords v(dim, 0);
    std::uint64_t rest = idx;
    for (const Coords& row : basis_rows) {
      const std::uint32_t lambda = static_cast<std::uint32_t>(rest % radix);
      rest /= radix;
      if (lambda != 0) kernels::fma_mod(v.data(), lambda, row.data(), m, dim);
    }
    if (mul_coords(*alg, v, v) == v) return idx;
    return std::nullopt;
  };

  std::vector<std::uint64_t> hits = parallel_collect<std::uint64_t>(count, candidate);
  std::vector<AlgElem> out;
  out.reserve(hits.size());
  for (std::uint64_t idx : hits) {
    Coords v(dim, 0);
    std::uint64_t rest = idx;
    for (const Coords& row : basis_rows) {
      const std::uint32_t lambda = static_cast<std::uint32_t>(rest % radix);
      rest /= radix;
      if (lambda != 0) kernels::fma_mod(v.data(), lambda, row.data(), m, dim);
    }
    out.emplace_back(alg, std::move(v));
  }
  return out;
}

}  // namespace

std::vector<AlgElem> find_idempotents(const AlgebraPtr& algebra, std::uint64_t limit) {
  std::vector<Coords> rows;
  rows.reserve(algebra->dim());
  for (std::size_t i = 0; i < algebra->dim(); ++i) {
    Coords e(algebra->dim(), 0);
    e[i] = 1;
    rows.push_back(std::move(e));
  }
  return idempotent_scan(algebra, rows, algebra->modulus(), limit);
}

std::vector<AlgElem> find_idempotents(const Subspace& space, std::uint64_t limit) {
  return idempotent_scan(space.parent(), space.rows(), space.parent()->modulus(), limit);
}

AlgebraPtr make_matrix_algebra(unsigned n, std::uint32_t p) {
  if (n < 1) throw std::invalid_argument("make_matrix_algebra: n must be positive");
  if (!is_prime(p)) throw std::invalid_argument("make_matrix_algebra: modulus must be prime");
  const std::size_t dim = static_cast<std::size_t>(n) * n;
  auto idx = [n](unsigned i, unsigned j) { return static_cast<std::size_t>(i) * n + j; };
  std::vector<std::string> labels(dim);
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = 0; j < n; ++j) {
      labels[idx(i, j)] = "E" + std::to_string(i + 1) + std::to_string(j + 1);
    }
  }
  std::vector<std::vector<Coords>> products(dim, std::vector<Coords>(dim, Coords(dim, 0)));
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = 0; j < n; ++j) {
      for (unsigned k = 0; k < n; ++k) {
        for (unsigned l = 0; l < n; ++l) {
          if (j == k) products[idx(i, j)][idx(k, l)][idx(i, l)] = 1;
        }
      }
    }
  }
  Coords unit(dim, 0);
  for (unsigned i = 0; i < n; ++i) unit[idx(i, i)] = 1;
  return FiniteAlgebra::create(p, std::move(labels), std::move(products), std::move(unit));
}

AlgebraPtr make_strict_upper(unsigned n, std::uint32_t p) {
  if (n < 2) throw std::invalid_argument("make_strict_upper: n must be at least 2");
  if (!is_prime(p)) throw std::invalid_argument("make_strict_upper: modulus must be prime");
  std::vector<std::pair<unsigned, unsigned>> positions;
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = i + 1; j < n; ++j) positions.emplace_back(i, j);
  }
  const std::size_t dim = positions.size();
  auto find_pos = [&](unsigned i, unsigned j) -> std::ptrdiff_t {
    for (std::size_t t = 0; t < dim; ++t) {
      if (positions[t] == std::make_pair(i, j)) return static_cast<std::ptrdiff_t>(t);
    }
    return -1;
  };
  std::vector<std::string> labels(dim);
  for (std::size_t t = 0; t < dim; ++t) {
    labels[t] = "E" + std::to_string(positions[t].first + 1) +
                std::to_string(positions[t].second + 1);
  }
  std::vector<std::vector<Coords>> products(dim, std::vector<Coords>(dim, Coords(dim, 0)));
  for (std::size_t s = 0; s < dim; ++s) {
    for (std::size_t t = 0; t < dim; ++t) {
      if (positions[s].second == positions[t].first) {
        std::ptrdiff_t target = find_pos(positions[s].first, positions[t].second);
        if (target >= 0) products[s][t][static_cast<std::size_t>(target)] = 1;
      }
    }
  }
  return FiniteAlgebra::create(p, std::move(labels), std::move(products));
}

AlgebraPtr adjoin_unit(const AlgebraPtr& base) {
  if (base->unital()) throw std::invalid_argument("adjoin_unit: algebra is already unital");
  const std::size_t dim = base->dim();
  const std::size_t hull_dim = dim + 1;
  std::vector<std::string> labels;
  labels.reserve(hull_dim);
  labels.emplace_back("1");
  for (const std::string& l : base->basis_labels()) labels.push_back(l);

  std::vector<std::vector<Coords>> products(hull_dim,
                                            std::vector<Coords>(hull_dim, Coords(hull_dim, 0)));
  for (std::size_t i = 0; i < hull_dim; ++i) {
    products[0][i][i] = 1;
    products[i][0][i] = 1;
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const Coords& p = base->product_coords(i, j);
      for (std::size_t t = 0; t < dim; ++t) products[i + 1][j + 1][t + 1] = p[t];
    }
  }
  Coords unit(hull_dim, 0);
  unit[0] = 1;
  return FiniteAlgebra::create(base->modulus(), std::move(labels), std::move(products),
                               std::move(unit));
}

Coords embed_in_hull_coords(const Coords& base_coords) {
  Coords out(base_coords.size() + 1, 0);
  std::copy(base_coords.begin(), base_coords.end(), out.begin() + 1);
  return out;
}

AlgElem embed_in_hull(const AlgebraPtr& hull, const AlgElem& base_elem) {
  if (hull->dim() != base_elem.parent()->dim() + 1) {
    throw std::invalid_argument("embed_in_hull: dimension mismatch");
  }
  return AlgElem(hull, embed_in_hull_coords(base_elem.coords()));
}

bool hull_elem_in_base(const AlgElem& hull_elem) {
  return hull_elem.coords().front() == 0;
}

AlgElem hull_elem_to_base(const AlgebraPtr& base, const AlgElem& hull_elem) {
  if (!hull_elem_in_base(hull_elem)) {
    throw std::invalid_argument("hull element has a nonzero unit component");
  }
  Coords out(hull_elem.coords().begin() + 1, hull_elem.coords().end());
  return AlgElem(base, std::move(out));
}

std::optional<Coords> solve_linear_mod(const std::vector<Coords>& rows, const Coords& rhs,
                                       std::uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument("solve_linear_mod: modulus must be prime");
  const std::size_t n_rows = rows.size();
  if (rhs.size() != n_rows) throw std::invalid_argument("solve_linear_mod: rhs length mismatch");
  const std::size_t n_cols = n_rows == 0 ? 0 : rows[0].size();

  std::vector<Coords> a = rows;
  Coords b = rhs;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n_cols && r < n_rows; ++c) {
    std::size_t sel = n_rows;
    for (std::size_t i = r; i < n_rows; ++i) {
      if (a[i][c] != 0) {
        sel = i;
        break;
      }
    }
    if (sel == n_rows) continue;
    std::swap(a[r], a[sel]);
    std::swap(b[r], b[sel]);
    const std::uint32_t inv = inverse_mod(a[r][c], p);
    for (std::size_t j = c; j < n_cols; ++j) {
      a[r][j] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[r][j]) * inv % p);
    }
    b[r] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(b[r]) * inv % p);
    for (std::size_t i = 0; i < n_rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const std::uint32_t f = p - a[i][c];
      kernels::fma_mod(a[i].data(), f, a[r].data(), p, n_cols);
      b[i] = static_cast<std::uint32_t>((b[i] + static_cast<std::uint64_t>(f) * b[r]) % p);
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < n_rows; ++i) {
    if (b[i] != 0) return std::nullopt;
  }
  Coords x(n_cols, 0);
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

std::vector<Coords> nullspace_mod(const std::vector<Coords>& rows, std::size_t n_cols,
                                  std::uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument("nullspace_mod: modulus must be prime");
  std::vector<Coords> a = rows;
  const std::size_t n_rows = a.size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n_cols && r < n_rows; ++c) {
    std::size_t sel = n_rows;
    for (std::size_t i = r; i < n_rows; ++i) {
      if (a[i][c] != 0) {
        sel = i;
        break;
      }
    }
    if (sel == n_rows) continue;
    std::swap(a[r], a[sel]);
    const std::uint32_t inv = inverse_mod(a[r][c], p);
    for (std::size_t j = c; j < n_cols; ++j) {
      a[r][j] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[r][j]) * inv % p);
    }
    for (std::size_t i = 0; i < n_rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      kernels::fma_mod(a[i].data(), p - a[i][c], a[r].data(), p, n_cols);
    }
    pivot_col.push_back(c);
    ++r;
  }

  std::vector<bool> is_pivot(n_cols, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::vector<Coords> basis;
  for (std::size_t free = 0; free < n_cols; ++free) {
    if (is_pivot[free]) continue;
    Coords v(n_cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) {
      const std::uint32_t coeff = a[i][free];
      if (coeff != 0) v[pivot_col[i]] = p - coeff;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace orecalc
