#include "orecalc/commcalc.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "orecalc/errors.hpp"

namespace orecalc {

using Rational = boost::multiprecision::cpp_rational;

namespace {

const NcPoly kA = NcPoly::gen("a");
const NcPoly kB = NcPoly::gen("b");
const NcPoly kC = NcPoly::gen("c");

void guard_terms(const NcPoly& p, std::uint64_t budget) {
  if (p.term_count() > budget) {
    throw resource_error("term budget exceeded: " + std::to_string(p.term_count()) +
                             " words against a budget of " + std::to_string(budget),
                         p.term_count());
  }
}

std::string hash_difference(const NcPoly& diff) { return fnv1a64_hex(diff.str()); }

// Exact solve of (columns | rhs) over the rationals; returns the solution and
// whether it is unique (full column rank).
struct RationalSolve {
  bool consistent = false;
  bool unique = false;
  std::vector<Rational> solution;
};

RationalSolve solve_exact(const std::vector<NcPoly>& columns, const NcPoly& rhs) {
  std::set<Word, WordLess> words;
  for (const NcPoly& p : columns) {
    for (const auto& [w, c] : p.terms()) words.insert(w);
  }
  for (const auto& [w, c] : rhs.terms()) words.insert(w);

  const std::size_t n_rows = words.size();
  const std::size_t n_cols = columns.size();
  std::vector<std::vector<Rational>> a(n_rows, std::vector<Rational>(n_cols + 1, 0));
  std::size_t r = 0;
  for (const Word& w : words) {
    for (std::size_t c = 0; c < n_cols; ++c) a[r][c] = Rational(columns[c].coeff(w));
    a[r][n_cols] = Rational(rhs.coeff(w));
    ++r;
  }

  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n_cols && row < n_rows; ++col) {
    std::size_t sel = n_rows;
    for (std::size_t i = row; i < n_rows; ++i) {
      if (a[i][col] != 0) {
        sel = i;
        break;
      }
    }
    if (sel == n_rows) continue;
    std::swap(a[row], a[sel]);
    const Rational inv = 1 / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t i = 0; i < n_rows; ++i) {
      if (i == row || a[i][col] == 0) continue;
      const Rational f = a[i][col];
      for (std::size_t j = col; j <= n_cols; ++j) a[i][j] -= f * a[row][j];
    }
    pivot_cols.push_back(col);
    ++row;
  }

  RationalSolve out;
  for (std::size_t i = row; i < n_rows; ++i) {
    if (a[i][n_cols] != 0) return out;  // inconsistent
  }
  out.consistent = true;
  out.unique = pivot_cols.size() == n_cols;
  out.solution.assign(n_cols, Rational(0));
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
    out.solution[pivot_cols[i]] = a[i][n_cols];
  }
  return out;
}

BigInt rational_to_int(const Rational& q) {
  if (boost::multiprecision::denominator(q) != 1) {
    throw internal_error("expansion coefficient is not an integer: " + q.str());
  }
  return boost::multiprecision::numerator(q);
}

void finish_certificate(ExpansionCertificate& cert) {
  NcPoly diff = cert.lhs - cert.rhs_sum();
  cert.verified = diff.is_zero();
  cert.difference_hash = hash_difference(diff);
}

std::vector<BigInt> product_rule_coeffs_uncached(unsigned k) {
  std::vector<NcPoly> columns;
  columns.reserve(k + 1);
  for (unsigned i = 0; i <= k; ++i) {
    columns.push_back(commutator(kA, kC, i) * commutator(kB, kC, k - i));
  }
  const NcPoly lhs = commutator(kA * kB, kC, k);
  RationalSolve solve = solve_exact(columns, lhs);
  if (!solve.consistent) {
    throw internal_error("product rule expansion has no integer solution at k=" +
                         std::to_string(k));
  }
  std::vector<BigInt> out;
  out.reserve(k + 1);
  for (const Rational& q : solve.solution) out.push_back(rational_to_int(q));
  return out;
}

// The split coefficients recur all over the place; cache them.
const std::vector<BigInt>& product_rule_coeffs(unsigned k) {
  static std::mutex mutex;
  static std::map<unsigned, std::vector<BigInt>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, product_rule_coeffs_uncached(k)).first;
  return it->second;
}

// Coefficient tables for [a^r, b]_o, o = 0..s: maps from w-tuples of length r
// (each tuple summing to o) to the integer coefficient.
using TupleCoeffs = std::map<std::vector<unsigned>, BigInt>;

std::vector<TupleCoeffs> power_rule_table(unsigned r, unsigned s) {
  std::vector<TupleCoeffs> cur(s + 1);
  cur[0][{}] = 1;  // [1, b]_0 = 1; higher orders vanish
  for (unsigned t = 0; t < r; ++t) {
    // [a^{t+1}, b]_o = sum_i D_i [a^t, b]_i [a, b]_{o-i}
    std::vector<TupleCoeffs> next(s + 1);
    for (unsigned o = 0; o <= s; ++o) {
      const std::vector<BigInt>& split = product_rule_coeffs(o);
      for (unsigned i = 0; i <= o; ++i) {
        if (split[i] == 0) continue;
        for (const auto& [tuple, e] : cur[i]) {
          std::vector<unsigned> key = tuple;
          key.push_back(o - i);
          next[o][key] += split[i] * e;
        }
      }
      std::erase_if(next[o], [](const auto& kv) { return kv.second == 0; });
    }
    cur = std::move(next);
  }
  return cur;
}

// Grouped coefficient table for [a1^{e1}..an^{en}, b]_s; group t carries the
// w-indices of the [a_t, b] factors. Built by splitting off the last
// generator block and recursing on the prefix.
using GroupKey = std::vector<std::vector<unsigned>>;

std::map<GroupKey, BigInt> monomial_rule_table(const std::vector<unsigned>& exps, unsigned s) {
  std::map<GroupKey, BigInt> out;
  if (exps.empty()) {
    if (s == 0) out[{}] = 1;
    return out;
  }
  std::vector<unsigned> prefix_exps(exps.begin(), exps.end() - 1);
  const std::vector<BigInt>& split = product_rule_coeffs(s);
  for (unsigned j = 0; j <= s; ++j) {
    if (split[j] == 0) continue;
    std::map<GroupKey, BigInt> left = monomial_rule_table(prefix_exps, j);
    if (left.empty()) continue;
    std::vector<TupleCoeffs> right = power_rule_table(exps.back(), s - j);
    for (const auto& [lkey, lc] : left) {
      for (const auto& [tuple, rc] : right[s - j]) {
        GroupKey key = lkey;
        key.push_back(tuple);
        out[key] += split[j] * lc * rc;
      }
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

}  // namespace

NcPoly ExpansionCertificate::rhs_sum() const {
  NcPoly sum;
  for (const CertTerm& t : terms) {
    NcPoly prod = NcPoly::one();
    for (const NcPoly& f : t.factors) prod *= f;
    sum += t.coeff * prod;
  }
  return sum;
}

const BigInt* ExpansionCertificate::coeff_for(
    const std::vector<std::vector<unsigned>>& key) const {
  for (const CertTerm& t : terms) {
    if (t.key == key) return &t.coeff;
  }
  return nullptr;
}

ExpansionCertificate expand_product_rule(unsigned k) {
  ExpansionCertificate cert;
  cert.family = 6;
  cert.exponents = {k};
  cert.lhs = commutator(kA * kB, kC, k);

  std::vector<NcPoly> columns;
  for (unsigned i = 0; i <= k; ++i) {
    columns.push_back(commutator(kA, kC, i) * commutator(kB, kC, k - i));
  }
  RationalSolve solve = solve_exact(columns, cert.lhs);
  if (!solve.consistent) {
    throw internal_error("product rule expansion has no solution at k=" + std::to_string(k));
  }
  cert.unique = solve.unique;
  for (unsigned i = 0; i <= k; ++i) {
    CertTerm term;
    term.coeff = rational_to_int(solve.solution[i]);
    term.key = {{i}};
    term.factors = {commutator(kA, kC, i), commutator(kB, kC, k - i)};
    cert.terms.push_back(std::move(term));
  }
  finish_certificate(cert);
  return cert;
}

ExpansionCertificate expand_power_rule(unsigned r, unsigned s, std::uint64_t term_budget) {
  ExpansionCertificate cert;
  cert.family = 7;
  cert.exponents = {r};
  cert.order = s;
  cert.lhs = commutator(nc_pow(kA, r), kB, s);
  guard_terms(cert.lhs, term_budget);

  std::vector<TupleCoeffs> table = power_rule_table(r, s);
  for (const auto& [tuple, coeff] : table[s]) {
    if (coeff == 0) continue;
    CertTerm term;
    term.coeff = coeff;
    term.key = {std::vector<unsigned>(tuple)};
    for (unsigned w : tuple) term.factors.push_back(commutator(kA, kB, w));
    cert.terms.push_back(std::move(term));
    if (cert.terms.size() > term_budget) {
      throw resource_error("term budget exceeded: " + std::to_string(cert.terms.size()) +
                               " expansion terms against a budget of " +
                               std::to_string(term_budget),
                           cert.terms.size());
    }
  }
  finish_certificate(cert);
  return cert;
}

ExpansionCertificate expand_monomial_rule(const std::vector<unsigned>& exponents, unsigned s,
                                          std::uint64_t term_budget) {
  const std::size_t n = exponents.size();
  std::vector<NcPoly> gens;
  gens.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    gens.push_back(NcPoly::gen("a", static_cast<std::uint32_t>(t + 1)));
  }

  ExpansionCertificate cert;
  cert.family = 8;
  cert.exponents = exponents;
  cert.order = s;
  NcPoly monomial = NcPoly::one();
  for (std::size_t t = 0; t < n; ++t) monomial *= nc_pow(gens[t], exponents[t]);
  cert.lhs = commutator(monomial, kB, s);
  guard_terms(cert.lhs, term_budget);

  std::uint64_t words = 0;
  for (const auto& [key, coeff] : monomial_rule_table(exponents, s)) {
    CertTerm term;
    term.coeff = coeff;
    term.key = key;
    NcPoly probe = NcPoly::one();
    for (std::size_t t = 0; t < key.size(); ++t) {
      for (unsigned w : key[t]) {
        term.factors.push_back(commutator(gens[t], kB, w));
        probe *= term.factors.back();
        guard_terms(probe, term_budget);
      }
    }
    words += probe.term_count();
    if (words > term_budget) {
      throw resource_error("term budget exceeded: " + std::to_string(words) +
                               " expansion words against a budget of " +
                               std::to_string(term_budget),
                           words);
    }
    cert.terms.push_back(std::move(term));
  }
  finish_certificate(cert);
  return cert;
}

ExpansionCertificate idempotent_shift_identity(const std::vector<unsigned>& ns) {
  const std::size_t p = ns.size();
  const NcPoly e = NcPoly::gen("e");
  std::vector<NcPoly> xs;
  xs.reserve(p);
  for (std::size_t t = 0; t < p; ++t) {
    xs.push_back(NcPoly::gen("x", static_cast<std::uint32_t>(t + 1)));
  }

  ExpansionCertificate cert;
  cert.family = 9;
  cert.exponents = ns;
  NcPoly monomial = NcPoly::one();
  for (std::size_t t = 0; t < p; ++t) monomial *= nc_pow(xs[t], ns[t]);
  cert.lhs = e * monomial;

  for (const std::vector<unsigned>& i : boxes_upto(ns)) {
    BigInt coeff = 1;
    for (std::size_t t = 0; t < p; ++t) coeff *= binomial(ns[t], i[t]);
    NcPoly prefix = NcPoly::one();
    for (std::size_t t = 0; t < p; ++t) prefix *= nc_pow(xs[t], i[t]);
    std::vector<unsigned> rest(p);
    for (std::size_t t = 0; t < p; ++t) rest[t] = ns[t] - i[t];
    CertTerm term;
    term.coeff = std::move(coeff);
    term.key = {i};
    term.factors = {prefix, multi_commutator(e, xs, rest)};
    cert.terms.push_back(std::move(term));
  }
  finish_certificate(cert);
  return cert;
}

bool evaluate_certificate(const ExpansionCertificate& cert,
                          const std::map<GenId, AlgElem>& assignment,
                          const FiniteAlgebra& target) {
  AlgElem lhs = evaluate(cert.lhs, assignment, target);
  AlgElem rhs = target.zero();
  for (const CertTerm& t : cert.terms) {
    AlgElem prod = target.zero();
    bool started = false;
    for (const NcPoly& f : t.factors) {
      AlgElem img = evaluate(f, assignment, target);
      prod = started ? prod * img : img;
      started = true;
    }
    if (!started) prod = target.unit();  // empty product needs a unital target
    rhs += target.residue(t.coeff) * prod;
  }
  return lhs == rhs;
}

AlgElem alg_commutator(const AlgElem& a, const AlgElem& b, unsigned k) {
  AlgElem out = a;
  for (unsigned i = 0; i < k; ++i) out = out * b - b * out;
  return out;
}

AlgElem alg_multi_commutator(const AlgElem& a, std::span<const AlgElem> xs,
                             std::span<const unsigned> ks) {
  if (xs.size() != ks.size()) throw std::invalid_argument("multi-commutator length mismatch");
  AlgElem out = a;
  for (std::size_t i = 0; i < xs.size(); ++i) out = alg_commutator(out, xs[i], ks[i]);
  return out;
}

AlgElem alg_monomial(std::span<const AlgElem> xs, std::span<const unsigned> exps) {
  if (xs.size() != exps.size()) throw std::invalid_argument("monomial length mismatch");
  if (xs.empty()) throw std::invalid_argument("monomial needs at least one element");
  AlgElem out = xs[0].parent()->unital() ? xs[0].parent()->unit() : xs[0].parent()->zero();
  bool started = false;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    for (unsigned r = 0; r < exps[t]; ++r) {
      out = started ? out * xs[t] : xs[t];
      started = true;
    }
  }
  if (!started) {
    if (!xs[0].parent()->unital()) {
      throw std::invalid_argument("empty monomial needs a unital algebra");
    }
    out = xs[0].parent()->unit();
  }
  return out;
}

std::vector<std::vector<unsigned>> boxes_upto(const std::vector<unsigned>& bounds) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(bounds.size(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = bounds.size();
    while (i > 0) {
      --i;
      if (cur[i] < bounds[i]) {
        ++cur[i];
        std::fill(cur.begin() + static_cast<std::ptrdiff_t>(i) + 1, cur.end(), 0);
        break;
      }
      if (i == 0) return out;
    }
    if (bounds.empty()) return out;
  }
}

CommutatorSpanSolution solve_commutator_span(const AlgElem& e, const std::vector<AlgElem>& xs,
                                             const std::vector<unsigned>& ks,
                                             const Subspace& r_space) {
  if (xs.size() != ks.size()) throw std::invalid_argument("xs and ks length mismatch");
  if (!(e * e == e)) throw precondition_error("solve_commutator_span: e is not idempotent");
  const AlgebraPtr& alg = e.parent();
  if (r_space.parent() != alg) {
    throw std::invalid_argument("coefficient space lives in a different algebra");
  }

  const std::vector<std::vector<unsigned>> indices = boxes_upto(ks);
  const std::vector<AlgElem> basis = r_space.basis_elements();
  const AlgElem lhs = alg_multi_commutator(e, xs, ks);

  // Unknowns: one residue per (multi-index, basis vector of r_space).
  std::vector<AlgElem> columns;
  columns.reserve(indices.size() * basis.size());
  for (const auto& idx : indices) {
    const AlgElem target = e * alg_multi_commutator(e, xs, idx);
    for (const AlgElem& s : basis) columns.push_back(s * target);
  }

  std::vector<Coords> rows(alg->dim(), Coords(columns.size(), 0));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const Coords& coords = columns[c].coords();
    for (std::size_t r = 0; r < coords.size(); ++r) rows[r][c] = coords[r];
  }

  CommutatorSpanSolution out;
  std::optional<Coords> solution = solve_linear_mod(rows, lhs.coords(), alg->modulus());
  if (!solution) {
    out.failure = "no solution with coefficients in the given subspace (rank " +
                  std::to_string(basis.size()) + ")";
    return out;
  }
  out.solvable = true;
  std::size_t c = 0;
  for (const auto& idx : indices) {
    AlgElem r = alg->zero();
    for (const AlgElem& s : basis) {
      if ((*solution)[c] != 0) r += (*solution)[c] * s;
      ++c;
    }
    out.coeffs.emplace(idx, std::move(r));
  }

  AlgElem residual = lhs;
  for (const auto& [idx, r] : out.coeffs) {
    residual -= r * (e * alg_multi_commutator(e, xs, idx));
  }
  out.residual_zero = residual.is_zero();
  if (!out.residual_zero) {
    throw internal_error("commutator span solution failed the substitution check");
  }
  return out;
}

IdempotentMonomialRewrite rewrite_idempotent_monomial(const AlgElem& e,
                                                      const std::vector<AlgElem>& xs,
                                                      const std::vector<unsigned>& exponents,
                                                      const Subspace& r_space) {
  if (xs.size() != exponents.size()) throw std::invalid_argument("xs and exponents mismatch");
  if (!(e * e == e)) throw precondition_error("rewrite_idempotent_monomial: e not idempotent");
  const AlgebraPtr& alg = e.parent();

  IdempotentMonomialRewrite out;
  for (const std::vector<unsigned>& i : boxes_upto(exponents)) {
    BigInt coeff = 1;
    for (std::size_t t = 0; t < exponents.size(); ++t) coeff *= binomial(exponents[t], i[t]);
    std::vector<unsigned> rest(exponents.size());
    for (std::size_t t = 0; t < exponents.size(); ++t) rest[t] = exponents[t] - i[t];

    CommutatorSpanSolution sub = solve_commutator_span(e, xs, rest, r_space);
    if (!sub.solvable) {
      out.failure = "inner span solve failed at trailing index bound (" + [&] {
        std::ostringstream os;
        for (std::size_t t = 0; t < rest.size(); ++t) os << (t ? "," : "") << rest[t];
        return os.str();
      }() + "): " + sub.failure;
      return out;
    }
    const AlgElem prefix = alg_monomial(xs, i);
    for (const auto& [k, r] : sub.coeffs) {
      if (r.is_zero()) continue;
      FactoredTerm term;
      term.scalar = coeff;
      term.prefix_exponents = i;
      term.left_coeff = r;
      term.trailing_indices = k;
      term.trailing = e * alg_multi_commutator(e, xs, k);
      term.value = alg->residue(coeff) * (prefix * r * term.trailing);
      if (term.value.is_zero()) continue;
      for (std::size_t t = 0; t < k.size(); ++t) {
        if (k[t] > exponents[t]) {
          throw internal_error("trailing index exceeds the exponent bound");
        }
      }
      out.terms.push_back(std::move(term));
    }
  }
  out.ok = true;

  AlgElem total = alg->zero();
  for (const FactoredTerm& t : out.terms) total += t.value;
  out.verified = total == e * alg_monomial(xs, exponents);
  return out;
}

}  // namespace orecalc
