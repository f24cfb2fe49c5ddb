#include "orecalc/ore.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "orecalc/errors.hpp"

namespace orecalc {

unsigned Multidegree::total() const {
  return std::accumulate(exp_.begin(), exp_.end(), 0u);
}

bool Multidegree::leq(const Multidegree& rhs) const {
  if (exp_.size() != rhs.exp_.size()) return false;
  for (std::size_t i = 0; i < exp_.size(); ++i) {
    if (exp_[i] > rhs.exp_[i]) return false;
  }
  return true;
}

Multidegree Multidegree::operator+(const Multidegree& rhs) const {
  if (exp_.size() != rhs.exp_.size()) throw std::invalid_argument("multidegree arity mismatch");
  Multidegree out(*this);
  for (std::size_t i = 0; i < exp_.size(); ++i) out.exp_[i] += rhs.exp_[i];
  return out;
}

bool Multidegree::operator<(const Multidegree& rhs) const {
  if (exp_.size() != rhs.exp_.size()) throw std::invalid_argument("multidegree arity mismatch");
  const unsigned tl = total(), tr = rhs.total();
  if (tl != tr) return tl < tr;
  return exp_ < rhs.exp_;
}

std::string Multidegree::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < exp_.size(); ++i) {
    if (exp_[i] == 0) continue;
    if (!first) os << '.';
    first = false;
    os << 'X' << (i + 1) << '^' << exp_[i];
  }
  if (first) os << '1';
  return os.str();
}

std::vector<Multidegree> multidegrees_upto(const Multidegree& bound) {
  std::vector<Multidegree> out;
  Multidegree cur(bound.vars());
  while (true) {
    out.push_back(cur);
    std::size_t i = 0;
    for (; i < bound.vars(); ++i) {
      if (cur[i] < bound[i]) {
        ++cur[i];
        break;
      }
      cur[i] = 0;
    }
    if (i == bound.vars()) break;
    if (bound.vars() == 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

TowerBuilder::TowerBuilder(AlgebraPtr base) : base_(std::move(base)) {
  if (base_->unital()) {
    throw std::invalid_argument("tower base must be non-unital; its hull is built here");
  }
  hull_ = adjoin_unit(base_);
}

TowerBuilder& TowerBuilder::add_level(Derivation d_on_hull, std::vector<AlgElem> var_images) {
  levels_.push_back({std::move(d_on_hull), std::move(var_images)});
  return *this;
}

TowerPtr TowerBuilder::build() {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const DerivationTower::Level& level = levels_[i];
    if (level.d.parent() != hull_) {
      throw std::invalid_argument("tower level " + std::to_string(i + 1) +
                                  ": derivation must act on the hull");
    }
    if (auto w = leibniz_witness(level.d.images(), *hull_)) {
      throw std::invalid_argument("tower level " + std::to_string(i + 1) +
                                  ": derivation violates Leibniz at basis pair (" +
                                  hull_->basis_labels()[w->first] + ", " +
                                  hull_->basis_labels()[w->second] + ")");
    }
    // d_i must map the embedded base into the base.
    for (std::size_t j = 0; j < base_->dim(); ++j) {
      if (level.d.images()[j + 1].front() != 0) {
        throw std::invalid_argument("tower level " + std::to_string(i + 1) + ": image of " +
                                    base_->basis_labels()[j] + " leaves the base");
      }
    }
    if (level.var_images.size() != i) {
      throw std::invalid_argument("tower level " + std::to_string(i + 1) + ": expected " +
                                  std::to_string(i) + " variable images, got " +
                                  std::to_string(level.var_images.size()));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (level.var_images[j].parent() != hull_) {
        throw std::invalid_argument("tower level " + std::to_string(i + 1) + ": image of X" +
                                    std::to_string(j + 1) + " must be a hull element");
      }
    }
  }
  auto tower = std::shared_ptr<DerivationTower>(new DerivationTower());
  tower->base_ = base_;
  tower->hull_ = hull_;
  tower->levels_ = levels_;
  return tower;
}

TowerPtr DerivationTower::inner(AlgebraPtr base, const std::vector<AlgElem>& elems) {
  TowerBuilder builder(std::move(base));
  const AlgebraPtr& hull = builder.hull();
  std::vector<AlgElem> us;
  us.reserve(elems.size());
  for (const AlgElem& u : elems) {
    if (u.parent() == builder.base()) {
      us.push_back(embed_in_hull(hull, u));
    } else if (u.parent()->dim() == hull->dim()) {
      us.push_back(hull->elem(u.coords()));
    } else {
      throw std::invalid_argument("inner tower: element fits neither base nor hull");
    }
  }
  for (std::size_t i = 0; i < us.size(); ++i) {
    std::vector<AlgElem> var_images;
    for (std::size_t j = 0; j < i; ++j) {
      var_images.push_back(us[i] * us[j] - us[j] * us[i]);
    }
    builder.add_level(inner_derivation(us[i]), std::move(var_images));
  }
  return builder.build();
}

TowerPtr DerivationTower::trivial(AlgebraPtr base, std::size_t n_vars) {
  TowerBuilder builder(std::move(base));
  for (std::size_t i = 0; i < n_vars; ++i) {
    builder.add_level(Derivation::zero(builder.hull()),
                      std::vector<AlgElem>(i, builder.hull()->zero()));
  }
  return builder.build();
}

const AlgElem& DerivationTower::var_image(std::size_t level, std::size_t j) const {
  return levels_.at(level).var_images.at(j);
}

OrePoly::OrePoly(TowerPtr tower) : tower_(std::move(tower)) {
  if (!tower_) throw std::invalid_argument("OrePoly without tower");
}

OrePoly OrePoly::constant(TowerPtr tower, const AlgElem& hull_coeff) {
  OrePoly p(tower);
  p.add_term(Multidegree(tower->vars()), hull_coeff);
  return p;
}

OrePoly OrePoly::variable(TowerPtr tower, std::size_t i) {
  if (i >= tower->vars()) {
    throw std::invalid_argument("variable index " + std::to_string(i + 1) + " out of range");
  }
  Multidegree deg(tower->vars());
  deg[i] = 1;
  OrePoly p(tower);
  p.add_term(deg, tower->hull()->unit());
  return p;
}

OrePoly OrePoly::term(TowerPtr tower, Multidegree deg, const AlgElem& hull_coeff) {
  if (deg.vars() != tower->vars()) throw std::invalid_argument("multidegree arity mismatch");
  OrePoly p(tower);
  p.add_term(deg, hull_coeff);
  return p;
}

OrePoly OrePoly::one(TowerPtr tower) {
  AlgElem unit = tower->hull()->unit();
  return constant(std::move(tower), unit);
}

unsigned OrePoly::total_degree() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.total();
}

AlgElem OrePoly::coeff(const Multidegree& deg) const {
  auto it = terms_.find(deg);
  return it == terms_.end() ? tower_->hull()->zero() : it->second;
}

void OrePoly::add_term(const Multidegree& deg, const AlgElem& coeff) {
  if (coeff.parent() != tower_->hull()) {
    throw std::invalid_argument("OrePoly coefficient must live in the tower hull");
  }
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(deg, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

OrePoly& OrePoly::operator+=(const OrePoly& rhs) {
  if (tower_ != rhs.tower_) throw std::invalid_argument("tower mismatch");
  for (const auto& [deg, c] : rhs.terms_) add_term(deg, c);
  return *this;
}

OrePoly& OrePoly::operator-=(const OrePoly& rhs) {
  if (tower_ != rhs.tower_) throw std::invalid_argument("tower mismatch");
  for (const auto& [deg, c] : rhs.terms_) add_term(deg, -c);
  return *this;
}

OrePoly OrePoly::operator-() const {
  OrePoly out(tower_);
  for (const auto& [deg, c] : terms_) out.terms_.emplace(deg, -c);
  return out;
}

OrePoly OrePoly::times_const_right(const AlgElem& hull_coeff) const {
  OrePoly out(tower_);
  for (const auto& [deg, c] : terms_) out.add_term(deg, c * hull_coeff);
  return out;
}

bool OrePoly::operator==(const OrePoly& rhs) const {
  return tower_ == rhs.tower_ && terms_ == rhs.terms_;
}

std::string OrePoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [deg, c] = *it;
    if (!first) os << " + ";
    first = false;
    os << deg.str() << " * [";
    const Coords& coords = c.coords();
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i > 0) os << ' ';
      os << coords[i];
    }
    os << ']';
  }
  return os.str();
}

namespace {

using Atom = OreExpr::Atom;

// Rewrites sign * (atom word) into normal-form terms accumulated on `out`.
// Local rules: merge adjacent coefficients; a*X_j -> X_j*a - d_j(a);
// X_s*X_j -> X_j*X_s + d_s(X_j) for j < s.
void normalize_word(const TowerPtr& tower, std::vector<Atom> word, int sign, OrePoly& out) {
  const AlgebraPtr& hull = tower->hull();
  std::vector<std::pair<int, std::vector<Atom>>> stack;
  stack.emplace_back(sign, std::move(word));

  while (!stack.empty()) {
    auto [sgn, w] = std::move(stack.back());
    stack.pop_back();

    bool reduced = true;
    while (reduced) {
      reduced = false;
      for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        Atom& a = w[i];
        Atom& b = w[i + 1];
        if (a.var < 0 && b.var < 0) {
          a.coeff = a.coeff * b.coeff;
          w.erase(w.begin() + static_cast<std::ptrdiff_t>(i) + 1);
          reduced = true;
          break;
        }
        if (a.var < 0 && b.var >= 0) {
          // a * X_j = X_j * a - d_j(a)
          AlgElem da = tower->derivation(static_cast<std::size_t>(b.var)).apply(a.coeff);
          if (!da.is_zero()) {
            std::vector<Atom> corr;
            corr.reserve(w.size() - 1);
            corr.insert(corr.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
            corr.push_back(Atom{-1, da});
            corr.insert(corr.end(), w.begin() + static_cast<std::ptrdiff_t>(i) + 2, w.end());
            stack.emplace_back(-sgn, std::move(corr));
          }
          std::swap(a, b);
          reduced = true;
          break;
        }
        if (a.var >= 0 && b.var >= 0 && a.var > b.var) {
          // X_s * X_j = X_j * X_s + d_s(X_j)
          const AlgElem& img =
              tower->var_image(static_cast<std::size_t>(a.var), static_cast<std::size_t>(b.var));
          if (!img.is_zero()) {
            std::vector<Atom> corr;
            corr.reserve(w.size() - 1);
            corr.insert(corr.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
            corr.push_back(Atom{-1, img});
            corr.insert(corr.end(), w.begin() + static_cast<std::ptrdiff_t>(i) + 2, w.end());
            stack.emplace_back(sgn, std::move(corr));
          }
          std::swap(a, b);
          reduced = true;
          break;
        }
      }
    }

    Multidegree deg(tower->vars());
    AlgElem coeff = hull->unit();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i].var >= 0) {
        ++deg[static_cast<std::size_t>(w[i].var)];
      } else {
        coeff = w[i].coeff;  // single trailing coefficient in normal form
      }
    }
    if (sgn < 0) coeff = -coeff;
    out.add_term(deg, coeff);
  }
}

std::vector<Atom> term_to_word(const Multidegree& deg, const AlgElem& coeff) {
  std::vector<Atom> w;
  for (std::size_t v = 0; v < deg.vars(); ++v) {
    for (std::uint32_t r = 0; r < deg[v]; ++r) w.push_back(Atom{static_cast<std::ptrdiff_t>(v), AlgElem{}});
  }
  w.push_back(Atom{-1, coeff});
  return w;
}

}  // namespace

OrePoly operator*(const OrePoly& lhs, const OrePoly& rhs) {
  if (lhs.tower() != rhs.tower()) throw std::invalid_argument("tower mismatch");
  const TowerPtr& tower = lhs.tower();
  OrePoly out(tower);
  for (const auto& [dl, cl] : lhs.terms()) {
    for (const auto& [dr, cr] : rhs.terms()) {
      std::vector<Atom> w = term_to_word(dl, cl);
      std::vector<Atom> wr = term_to_word(dr, cr);
      w.insert(w.end(), wr.begin(), wr.end());
      normalize_word(tower, std::move(w), 1, out);
    }
  }
  return out;
}

OreExpr OreExpr::var(std::size_t i) {
  OreExpr e;
  e.kind_ = Kind::kVar;
  e.var_ = i;
  return e;
}

OreExpr OreExpr::coeff(AlgElem a) {
  OreExpr e;
  e.kind_ = Kind::kCoeff;
  e.coeff_ = std::move(a);
  return e;
}

OreExpr operator+(OreExpr lhs, OreExpr rhs) {
  OreExpr e;
  e.kind_ = OreExpr::Kind::kSum;
  e.children_ = {std::move(lhs), std::move(rhs)};
  return e;
}

OreExpr operator-(OreExpr lhs, OreExpr rhs) {
  OreExpr neg;
  neg.kind_ = OreExpr::Kind::kNeg;
  neg.children_ = {std::move(rhs)};
  return std::move(lhs) + std::move(neg);
}

OreExpr operator*(OreExpr lhs, OreExpr rhs) {
  OreExpr e;
  e.kind_ = OreExpr::Kind::kProd;
  e.children_ = {std::move(lhs), std::move(rhs)};
  return e;
}

std::vector<std::pair<int, std::vector<OreExpr::Atom>>> OreExpr::flatten() const {
  using Flat = std::vector<std::pair<int, std::vector<Atom>>>;
  switch (kind_) {
    case Kind::kVar:
      return {{1, {Atom{static_cast<std::ptrdiff_t>(var_), AlgElem{}}}}};
    case Kind::kCoeff:
      return {{1, {Atom{-1, coeff_}}}};
    case Kind::kNeg: {
      Flat inner = children_[0].flatten();
      for (auto& [sgn, w] : inner) sgn = -sgn;
      return inner;
    }
    case Kind::kSum: {
      Flat out;
      for (const OreExpr& child : children_) {
        Flat part = child.flatten();
        out.insert(out.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
      }
      return out;
    }
    case Kind::kProd: {
      Flat out = {{1, {}}};
      for (const OreExpr& child : children_) {
        Flat part = child.flatten();
        Flat next;
        next.reserve(out.size() * part.size());
        for (const auto& [ls, lw] : out) {
          for (const auto& [rs, rw] : part) {
            std::vector<Atom> w = lw;
            w.insert(w.end(), rw.begin(), rw.end());
            next.emplace_back(ls * rs, std::move(w));
          }
        }
        out = std::move(next);
      }
      return out;
    }
  }
  return {};
}

OrePoly ore_normalize(const TowerPtr& tower, const OreExpr& expr) {
  OrePoly out(tower);
  for (auto& [sign, word] : expr.flatten()) {
    for (const Atom& a : word) {
      if (a.var >= static_cast<std::ptrdiff_t>(tower->vars())) {
        throw std::invalid_argument("expression uses unknown variable X" +
                                    std::to_string(a.var + 1));
      }
      if (a.var < 0 && a.coeff.parent() != tower->hull()) {
        throw std::invalid_argument("expression coefficient outside the tower hull");
      }
    }
    std::vector<Atom> w = std::move(word);
    if (w.empty()) w.push_back(Atom{-1, tower->hull()->unit()});
    normalize_word(tower, std::move(w), sign, out);
  }
  return out;
}

OrePoly apply_tower_derivation(std::size_t level, const OrePoly& p) {
  const TowerPtr& tower = p.tower();
  if (level >= tower->vars()) throw std::invalid_argument("tower level out of range");
  OrePoly out(tower);
  for (const auto& [deg, coeff] : p.terms()) {
    for (std::size_t v = level; v < deg.vars(); ++v) {
      if (deg[v] != 0) {
        throw std::invalid_argument("derivation level " + std::to_string(level + 1) +
                                    " only acts on polynomials in X1..X" + std::to_string(level));
      }
    }
    std::vector<Atom> word = term_to_word(deg, coeff);
    for (std::size_t pos = 0; pos < word.size(); ++pos) {
      std::vector<Atom> w = word;
      if (word[pos].var >= 0) {
        w[pos] = Atom{-1, tower->var_image(level, static_cast<std::size_t>(word[pos].var))};
      } else {
        w[pos] = Atom{-1, tower->derivation(level).apply(word[pos].coeff)};
      }
      normalize_word(tower, std::move(w), 1, out);
    }
  }
  return out;
}

BaseMembership coefficients_over_base(const OrePoly& p) {
  BaseMembership out;
  for (const auto& [deg, coeff] : p.terms()) {
    const bool in_base = hull_elem_in_base(coeff);
    out.entries.push_back({deg, in_base});
    out.all_in_base = out.all_in_base && in_base;
  }
  return out;
}

MonomialReduction reduce_monomial_commutator(const OrePoly& monomial, std::size_t j, unsigned k,
                                             const Subspace& n_space) {
  if (monomial.terms().size() != 1) {
    throw std::invalid_argument("reduce_monomial_commutator expects a single-term input");
  }
  const TowerPtr& tower = monomial.tower();
  if (j >= tower->vars()) throw std::invalid_argument("variable index out of range");
  if (n_space.parent() != tower->hull()) {
    throw std::invalid_argument("membership subspace must live in the tower hull");
  }
  const Multidegree& bound = monomial.terms().begin()->first;

  OrePoly xj = OrePoly::variable(tower, j);
  OrePoly acc = monomial;
  for (unsigned t = 0; t < k; ++t) acc = acc * xj - xj * acc;

  MonomialReduction out;
  for (const auto& [deg, coeff] : acc.terms()) {
    if (!deg.leq(bound)) {
      throw internal_error("monomial commutator reduction exceeded the exponent bound at " +
                           deg.str());
    }
    const bool member = n_space.contains(coeff);
    out.coefficients.emplace(deg, coeff);
    out.membership.emplace_back(deg, member);
    out.all_in_subspace = out.all_in_subspace && member;
  }
  return out;
}

std::map<Multidegree, AlgElem> to_left_coefficients(const OrePoly& p) {
  const TowerPtr& tower = p.tower();
  std::map<Multidegree, AlgElem> left;
  OrePoly rest = p;
  while (!rest.is_zero()) {
    const auto top = std::prev(rest.terms().end());
    const Multidegree deg = top->first;
    const AlgElem coeff = top->second;
    auto [it, inserted] = left.try_emplace(deg, coeff);
    if (!inserted) it->second += coeff;
    // Subtract coeff * X^deg in normal form; corrections are lower degree.
    OreExpr expr = OreExpr::coeff(coeff);
    for (std::size_t v = 0; v < deg.vars(); ++v) {
      for (std::uint32_t r = 0; r < deg[v]; ++r) expr = std::move(expr) * OreExpr::var(v);
    }
    rest -= ore_normalize(tower, expr);
  }
  std::erase_if(left, [](const auto& kv) { return kv.second.is_zero(); });
  return left;
}

OrePoly from_left_coefficients(const TowerPtr& tower,
                               const std::map<Multidegree, AlgElem>& left_terms) {
  OrePoly out(tower);
  for (const auto& [deg, coeff] : left_terms) {
    OreExpr expr = OreExpr::coeff(coeff);
    for (std::size_t v = 0; v < deg.vars(); ++v) {
      for (std::uint32_t r = 0; r < deg[v]; ++r) expr = std::move(expr) * OreExpr::var(v);
    }
    out += ore_normalize(tower, expr);
  }
  return out;
}

}  // namespace orecalc
