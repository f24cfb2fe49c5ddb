#include "orecalc/radical.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "orecalc/errors.hpp"
#include "orecalc/parallel.hpp"

namespace orecalc {

namespace {

std::string box_str(const std::vector<unsigned>& k) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
  os << ')';
  return os.str();
}

}  // namespace

bool AuditReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.pass; });
}

Filtration find_filtration(const Subspace& s) {
  std::optional<unsigned> index = nilpotency_index(s);
  if (!index) {
    throw precondition_error("find_filtration: the subalgebra is not nilpotent");
  }
  const AlgebraPtr& alg = s.parent();
  const std::size_t dim = alg->dim();
  const std::uint32_t p = alg->modulus();

  Filtration out;
  out.chain.emplace_back(alg);  // V_0 = 0

  Subspace power = s;  // span of length-l products
  for (unsigned l = 1; l <= *index; ++l) {
    // V_l = joint kernel of left multiplication by the span of S^l.
    std::vector<Coords> stacked;
    for (const Coords& u : power.rows()) {
      for (std::size_t t = 0; t < dim; ++t) {
        Coords row(dim, 0);
        for (std::size_t j = 0; j < dim; ++j) {
          // (u * e_j)[t]
          std::uint64_t acc = 0;
          for (std::size_t i = 0; i < dim; ++i) {
            if (u[i] != 0) acc += static_cast<std::uint64_t>(u[i]) * alg->product_coords(i, j)[t];
          }
          row[j] = static_cast<std::uint32_t>(acc % p);
        }
        stacked.push_back(std::move(row));
      }
    }
    Subspace level(alg);
    for (Coords& v : nullspace_mod(stacked, dim, p)) level.insert(std::move(v));
    out.chain.push_back(std::move(level));
    if (out.chain.back().rank() == dim) break;

    Subspace next(alg);
    for (const AlgElem& u : s.basis_elements()) {
      for (const AlgElem& v : power.basis_elements()) next.insert((u * v).coords());
    }
    power = std::move(next);
  }
  if (out.chain.back().rank() != dim) {
    throw internal_error("filtration did not reach the full space");
  }
  if (!filtration_valid(out, s)) {
    throw internal_error("filtration violates S*V_i <= V_{i-1}");
  }
  return out;
}

bool filtration_valid(const Filtration& f, const Subspace& s) {
  for (std::size_t i = 1; i < f.chain.size(); ++i) {
    for (const AlgElem& u : s.basis_elements()) {
      for (const AlgElem& v : f.chain[i].basis_elements()) {
        if (!f.chain[i - 1].contains(u * v)) return false;
      }
    }
  }
  return true;
}

namespace {

bool coords_reduced(const Coords& c, std::size_t dim, std::uint32_t m) {
  if (c.size() != dim) return false;
  return std::all_of(c.begin(), c.end(), [m](std::uint32_t x) { return x < m; });
}

}  // namespace

AlgElem ScenarioInstance::embed(const AlgElem& hull_elem) const {
  if (hull_elem.parent() != tower->hull()) {
    throw std::invalid_argument("embed expects a hull element");
  }
  AlgElem out = rep->zero();
  const Coords& c = hull_elem.coords();
  for (std::size_t t = 0; t < c.size(); ++t) {
    if (c[t] != 0) out += c[t] * rep->elem(embed_images[t]);
  }
  return out;
}

AlgElem ScenarioInstance::monomial(const Multidegree& deg) const {
  AlgElem out = rep->unit();
  for (std::size_t v = 0; v < deg.vars(); ++v) {
    for (std::uint32_t r = 0; r < deg[v]; ++r) out = out * xs[v];
  }
  return out;
}

AlgElem ScenarioInstance::idempotent_candidate() const {
  AlgElem out = rep->zero();
  for (const auto& [deg, a] : coeffs) out += monomial(deg) * a;
  return out;
}

BuildScenarioResult build_scenario(const RawScenario& raw) {
  BuildScenarioResult out;
  TowerBuilder builder(raw.base);
  const AlgebraPtr& hull = builder.hull();
  const std::size_t hull_dim = hull->dim();
  const std::size_t n = raw.levels.size();

  // Level data must be well-shaped before the hypothesis checks can run.
  AuditCheck shape{"levels-wellformed", true, ""};
  for (std::size_t i = 0; i < n && shape.pass; ++i) {
    const RawLevel& level = raw.levels[i];
    if (level.d_images.size() != hull_dim) {
      shape.pass = false;
      shape.detail = "level " + std::to_string(i + 1) + ": expected " +
                     std::to_string(hull_dim) + " basis images, got " +
                     std::to_string(level.d_images.size());
      break;
    }
    for (const Coords& img : level.d_images) {
      if (!coords_reduced(img, hull_dim, hull->modulus())) {
        shape.pass = false;
        shape.detail = "level " + std::to_string(i + 1) + ": malformed image vector";
        break;
      }
    }
  }
  out.audit.checks.push_back(shape);

  AuditCheck leibniz{"leibniz", true, ""};
  AuditCheck restricts{"restricts-to-base", true, ""};
  AuditCheck var_images{"variable-images", true, ""};
  AuditCheck nilpotent{"base-locally-nilpotent", true, ""};

  if (!shape.pass) {
    const std::string skipped = "skipped: level data malformed";
    leibniz = {"leibniz", false, skipped};
    restricts = {"restricts-to-base", false, skipped};
    var_images = {"variable-images", false, skipped};
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const RawLevel& level = raw.levels[i];
      if (auto w = leibniz_witness(level.d_images, *hull)) {
        leibniz.pass = false;
        leibniz.detail = "level " + std::to_string(i + 1) +
                         ": Leibniz fails at basis pair (" + hull->basis_labels()[w->first] +
                         ", " + hull->basis_labels()[w->second] + ")";
        break;
      }
    }
    for (std::size_t i = 0; i < n && restricts.pass; ++i) {
      for (std::size_t j = 0; j < raw.base->dim(); ++j) {
        if (raw.levels[i].d_images[j + 1].front() != 0) {
          restricts.pass = false;
          restricts.detail = "level " + std::to_string(i + 1) + ": image of " +
                             raw.base->basis_labels()[j] +
                             " has a nonzero unit component (leaves the base)";
          break;
        }
      }
    }
    for (std::size_t i = 0; i < n && var_images.pass; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        auto it = raw.levels[i].var_images.find(j);
        if (it == raw.levels[i].var_images.end()) {
          var_images.pass = false;
          var_images.detail = "level " + std::to_string(i + 1) + ": no image for X" +
                              std::to_string(j + 1);
          break;
        }
        if (!coords_reduced(it->second, hull_dim, hull->modulus())) {
          var_images.pass = false;
          var_images.detail = "level " + std::to_string(i + 1) + ": image of X" +
                              std::to_string(j + 1) + " is not a valid hull vector";
          break;
        }
      }
    }
  }

  if (!raw.base->modulus_prime()) {
    nilpotent.pass = false;
    nilpotent.detail = "nilpotency certification needs a prime modulus";
  } else {
    std::vector<AlgElem> basis;
    for (std::size_t i = 0; i < raw.base->dim(); ++i) basis.push_back(raw.base->basis_elem(i));
    Subspace closure = subalgebra_closure(raw.base, basis);
    std::optional<unsigned> index = nilpotency_index(closure);
    if (!index) {
      nilpotent.pass = false;
      nilpotent.detail = "the base is not nilpotent: powers stabilize at rank " +
                         std::to_string(closure.rank());
    } else {
      nilpotent.detail = "nilpotency index " + std::to_string(*index);
    }
  }

  out.audit.checks.push_back(leibniz);
  out.audit.checks.push_back(restricts);
  out.audit.checks.push_back(var_images);
  out.audit.checks.push_back(nilpotent);

  // Representation / instance data.
  AuditCheck rep_check{"representation", true, ""};
  AlgebraPtr rep = raw.rep ? raw.rep : hull;
  std::vector<Coords> embed = raw.embed;
  if (embed.empty()) {
    for (std::size_t t = 0; t < hull_dim; ++t) {
      Coords e(hull_dim, 0);
      e[t] = 1;
      embed.push_back(std::move(e));
    }
  }
  auto fail_rep = [&](const std::string& why) {
    if (rep_check.pass) {
      rep_check.pass = false;
      rep_check.detail = why;
    }
  };
  if (!raw.rep && !raw.embed.empty()) fail_rep("an embedding needs an explicit representation");
  if (!rep->unital()) fail_rep("the representation must be unital");
  if (rep->modulus() != hull->modulus()) fail_rep("representation modulus differs from the base");
  if (embed.size() != hull_dim) {
    fail_rep("embedding must map every hull basis vector");
  } else {
    for (const Coords& img : embed) {
      if (!coords_reduced(img, rep->dim(), rep->modulus())) {
        fail_rep("embedding image is not a valid representation vector");
        break;
      }
    }
  }
  if (rep_check.pass) {
    auto embed_apply = [&](const Coords& hull_coords) {
      AlgElem acc = rep->zero();
      for (std::size_t t = 0; t < hull_coords.size(); ++t) {
        if (hull_coords[t] != 0) acc += hull_coords[t] * rep->elem(embed[t]);
      }
      return acc;
    };
    if (!(rep->elem(embed[0]) == rep->unit())) {
      fail_rep("embedding does not map the hull unit to the representation unit");
    }
    for (std::size_t i = 0; i < hull_dim && rep_check.pass; ++i) {
      for (std::size_t j = 0; j < hull_dim; ++j) {
        AlgElem lhs = rep->elem(embed[i]) * rep->elem(embed[j]);
        AlgElem rhs = embed_apply(hull->product_coords(i, j));
        if (!(lhs == rhs)) {
          fail_rep("embedding is not multiplicative at basis pair (" +
                   hull->basis_labels()[i] + ", " + hull->basis_labels()[j] + ")");
          break;
        }
      }
    }
  }
  const bool has_instance_data = !raw.xs.empty() || !raw.coeffs.empty() || !raw.bounds.empty();
  if (has_instance_data) {
    if (raw.xs.size() != n) fail_rep("expected one variable image per tower level");
    if (raw.bounds.size() != n) fail_rep("expected one exponent bound per tower level");
    for (const Coords& x : raw.xs) {
      if (!coords_reduced(x, rep->dim(), rep->modulus())) {
        fail_rep("variable image is not a valid representation vector");
        break;
      }
    }
    for (const auto& [deg, coords] : raw.coeffs) {
      if (deg.size() != n) {
        fail_rep("coefficient multidegree arity mismatch at " +
                 box_str(std::vector<unsigned>(deg.begin(), deg.end())));
        break;
      }
      bool in_box = raw.bounds.size() == n;
      for (std::size_t t = 0; t < deg.size() && in_box; ++t) in_box = deg[t] <= raw.bounds[t];
      if (!in_box) {
        fail_rep("coefficient multidegree exceeds the bounds");
        break;
      }
      if (!coords_reduced(coords, raw.base->dim(), raw.base->modulus())) {
        fail_rep("coefficient is not a valid base vector");
        break;
      }
    }
  }
  out.audit.checks.push_back(rep_check);

  if (!out.audit.pass()) return out;

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<AlgElem> images;
    for (std::size_t j = 0; j < i; ++j) {
      images.push_back(hull->elem(raw.levels[i].var_images.at(j)));
    }
    builder.add_level(Derivation(hull, raw.levels[i].d_images), std::move(images));
  }

  ScenarioInstance inst;
  inst.tower = builder.build();
  inst.rep = rep;
  inst.embed_images = std::move(embed);
  inst.bounds = raw.bounds;
  for (const Coords& x : raw.xs) inst.xs.push_back(rep->elem(x));
  for (const auto& [deg, coords] : raw.coeffs) {
    AlgElem hull_elem = embed_in_hull(hull, raw.base->elem(coords));
    inst.coeffs.emplace(Multidegree(std::vector<std::uint32_t>(deg.begin(), deg.end())),
                        inst.embed(hull_elem));
  }
  out.instance = std::move(inst);
  return out;
}

namespace {

using GroupKey = std::vector<std::vector<unsigned>>;

// Context for one scenario check: certificate caches, the decomposition data
// for commutator products, and the element sets A and B.
struct CheckContext {
  const ScenarioInstance& inst;
  const TowerPtr& tower;
  const AlgebraPtr& rep;
  unsigned maxm;

  std::map<unsigned, ExpansionCertificate> product_certs;
  std::map<std::pair<std::vector<unsigned>, unsigned>, ExpansionCertificate> monomial_certs;

  struct ShapeDecomp {
    std::map<Multidegree, AlgElem> coeffs;  // in rep
  };
  std::map<std::pair<std::size_t, GroupKey>, ShapeDecomp> shapes;

  std::map<Coords, std::string> a_set;
  std::map<Coords, std::string> b_set;
  std::string hypothesis_failure;

  explicit CheckContext(const ScenarioInstance& instance)
      : inst(instance), tower(instance.tower), rep(instance.rep),
        maxm(*std::max_element(instance.bounds.begin(), instance.bounds.end())) {}

  const ExpansionCertificate& product_cert(unsigned k) {
    auto it = product_certs.find(k);
    if (it == product_certs.end()) it = product_certs.emplace(k, expand_product_rule(k)).first;
    return it->second;
  }

  const ExpansionCertificate& monomial_cert(const std::vector<unsigned>& exps, unsigned s) {
    auto key = std::make_pair(exps, s);
    auto it = monomial_certs.find(key);
    if (it == monomial_certs.end()) {
      it = monomial_certs.emplace(key, expand_monomial_rule(exps, s)).first;
    }
    return it->second;
  }

  // Decomposition of [x_t, x_j]_{w...} products as sum x^gamma * b_gamma,
  // computed in the Ore ring and transported through the embedding; the
  // transported identity is verified in the representation.
  const ShapeDecomp* shape_decomp(std::size_t j, const GroupKey& groups) {
    auto key = std::make_pair(j, groups);
    auto it = shapes.find(key);
    if (it != shapes.end()) return &it->second;

    OrePoly prod = OrePoly::one(tower);
    OrePoly xj = OrePoly::variable(tower, j);
    for (std::size_t t = 0; t < groups.size(); ++t) {
      for (unsigned w : groups[t]) {
        OrePoly f = OrePoly::variable(tower, t);
        for (unsigned c = 0; c < w; ++c) f = f * xj - xj * f;
        prod = prod * f;
      }
    }

    ShapeDecomp decomp;
    AlgElem rhs = rep->zero();
    for (const auto& [deg, hull_coeff] : prod.terms()) {
      for (std::size_t t = 0; t < groups.size(); ++t) {
        if (deg[t] > groups[t].size()) {
          throw internal_error("commutator product decomposition exceeds its degree bound");
        }
      }
      AlgElem b = inst.embed(hull_coeff);
      decomp.coeffs.emplace(deg, b);
      rhs += inst.monomial(deg) * b;
    }

    AlgElem direct = rep->unit();
    for (std::size_t t = 0; t < groups.size(); ++t) {
      for (unsigned w : groups[t]) {
        direct = direct * alg_commutator(inst.xs[t], inst.xs[j], w);
      }
    }
    if (!(direct == rhs)) {
      std::ostringstream os;
      os << "commutator-product decomposition fails in the representation for j=" << (j + 1)
         << ", shape";
      for (const auto& g : groups) os << ' ' << box_str(g);
      hypothesis_failure = os.str();
      shapes.erase(key);
      return nullptr;
    }

    for (const auto& [deg, b] : decomp.coeffs) {
      if (!b.is_zero() && !b_set.contains(b.coords())) {
        std::ostringstream os;
        os << "b[" << deg.str() << "] of j=" << (j + 1) << " shape";
        for (const auto& g : groups) os << ' ' << box_str(g);
        b_set.emplace(b.coords(), os.str());
      }
    }
    return &shapes.emplace(key, std::move(decomp)).first->second;
  }

  // [x^I g, x_j]_k = sum_{gamma <= I} x^gamma c_gamma via the certified
  // expansions plus the shape decompositions; validated against the direct
  // commutator in the representation.
  std::optional<std::map<Multidegree, AlgElem>> rewrite_term(const Multidegree& I,
                                                             const AlgElem& g, std::size_t j,
                                                             unsigned k) {
    std::map<Multidegree, AlgElem> acc;
    const std::vector<unsigned> exps(I.exponents().begin(), I.exponents().end());
    const ExpansionCertificate& split = product_cert(k);
    for (unsigned i = 0; i <= k; ++i) {
      const BigInt* d = split.coeff_for({{i}});
      if (d == nullptr || *d == 0) continue;
      const AlgElem alpha = alg_commutator(g, inst.xs[j], k - i);
      for (const CertTerm& term : monomial_cert(exps, i).terms) {
        const ShapeDecomp* decomp = shape_decomp(j, term.key);
        if (decomp == nullptr) return std::nullopt;
        const std::uint32_t scalar = rep->residue(*d * term.coeff);
        if (scalar == 0) continue;
        for (const auto& [deg, b] : decomp->coeffs) {
          AlgElem contrib = scalar * (b * alpha);
          if (contrib.is_zero()) continue;
          auto [it, inserted] = acc.try_emplace(deg, contrib);
          if (!inserted) it->second += contrib;
        }
      }
    }
    std::erase_if(acc, [](const auto& kv) { return kv.second.is_zero(); });

    AlgElem direct = alg_commutator(inst.monomial(I) * g, inst.xs[j], k);
    AlgElem recombined = rep->zero();
    for (const auto& [deg, c] : acc) {
      if (!deg.leq(I)) throw internal_error("rewrite exceeded its multidegree bound");
      recombined += inst.monomial(deg) * c;
    }
    if (!(direct == recombined)) {
      throw internal_error("certified rewrite disagrees with the direct commutator");
    }
    return acc;
  }
};

}  // namespace

ScenarioCheckReport check_scenario_idempotent(const ScenarioInstance& inst,
                                              const Subspace& n_space) {
  const std::size_t n = inst.tower->vars();
  if (n == 0) throw std::invalid_argument("scenario check needs at least one variable");
  if (inst.xs.size() != n || inst.bounds.size() != n) {
    throw std::invalid_argument("scenario lacks variable images or bounds");
  }
  if (n_space.parent() != inst.rep) {
    throw std::invalid_argument("N must live in the representation algebra");
  }

  // N locally nilpotent.
  Subspace n_closure = subalgebra_closure(inst.rep, n_space.basis_elements());
  if (!nilpotency_index(n_closure)) {
    throw precondition_error("N generates a non-nilpotent subalgebra");
  }

  const AlgElem e = inst.idempotent_candidate();
  if (!(e * e == e)) {
    throw precondition_error("the scenario candidate is not idempotent");
  }

  ScenarioCheckReport report;
  report.e_direct_zero = e.is_zero();
  CheckContext ctx(inst);

  // Stage sets: G[0] holds the coefficients, each later stage the collected
  // rewrite outputs; A gathers the commutators of every stage.
  struct Staged {
    Multidegree context;
    AlgElem value;
    std::string label;
  };
  std::vector<Staged> current;
  for (const auto& [deg, a] : inst.coeffs) {
    if (!a.is_zero()) current.push_back({deg, a, "a" + deg.str()});
  }

  auto note_a = [&](const AlgElem& alpha, const std::string& label) {
    if (!alpha.is_zero() && !ctx.a_set.contains(alpha.coords())) {
      ctx.a_set.emplace(alpha.coords(), label);
    }
  };

  for (std::size_t stage = 0; stage < n; ++stage) {
    for (const Staged& g : current) {
      for (std::size_t j = 0; j < n; ++j) {
        for (unsigned i = 0; i <= ctx.maxm; ++i) {
          note_a(alg_commutator(g.value, inst.xs[j], i),
                 "[" + g.label + ", x" + std::to_string(j + 1) + "]_" + std::to_string(i));
        }
      }
    }
    if (stage + 1 == n) break;
    std::vector<Staged> next;
    for (const Staged& g : current) {
      for (unsigned k = 0; k <= inst.bounds[stage]; ++k) {
        auto rewritten = ctx.rewrite_term(g.context, g.value, stage, k);
        if (!rewritten) {
          report.verdict = ScenarioVerdict::kHypothesisFailure;
          report.failure_detail = ctx.hypothesis_failure;
          return report;
        }
        for (const auto& [deg, c] : *rewritten) {
          next.push_back({deg, c, "c" + deg.str() + "<-[" + g.label + ",x" +
                                       std::to_string(stage + 1) + "]_" + std::to_string(k)});
        }
      }
    }
    current = std::move(next);
  }

  // B over every product shape with factor counts I <= bounds and commutator
  // orders up to maxm.
  for (const std::vector<unsigned>& ibox : boxes_upto(inst.bounds)) {
    const unsigned slots = std::accumulate(ibox.begin(), ibox.end(), 0u);
    std::vector<unsigned> w(slots, 0);
    while (true) {
      GroupKey groups(ibox.size());
      std::size_t pos = 0;
      for (std::size_t t = 0; t < ibox.size(); ++t) {
        for (unsigned c = 0; c < ibox[t]; ++c) groups[t].push_back(w[pos++]);
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (ctx.shape_decomp(j, groups) == nullptr) {
          report.verdict = ScenarioVerdict::kHypothesisFailure;
          report.failure_detail = ctx.hypothesis_failure;
          return report;
        }
      }
      std::size_t i = 0;
      for (; i < slots; ++i) {
        if (w[i] < ctx.maxm) {
          ++w[i];
          std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i), 0);
          break;
        }
      }
      if (i == slots) break;
    }
  }

  report.a_count = ctx.a_set.size();
  report.b_count = ctx.b_set.size();

  // C = B * A, all inside N.
  std::vector<AlgElem> c_elems;
  std::set<Coords> c_seen;
  for (const auto& [bc, blabel] : ctx.b_set) {
    const AlgElem beta = inst.rep->elem(bc);
    for (const auto& [ac, alabel] : ctx.a_set) {
      const AlgElem prod = beta * inst.rep->elem(ac);
      if (!n_space.contains(prod)) {
        report.verdict = ScenarioVerdict::kHypothesisFailure;
        report.failure_detail = "C element (" + blabel + ") * (" + alabel + ") = " +
                                prod.str() + " lies outside N";
        return report;
      }
      if (!prod.is_zero() && c_seen.insert(prod.coords()).second) c_elems.push_back(prod);
    }
  }
  report.c_count = c_elems.size();

  // S = subalgebra generated by C; nilpotent since C sits inside N.
  Subspace s_sub = subalgebra_closure(inst.rep, c_elems);
  if (!nilpotency_index(s_sub)) {
    throw internal_error("the subalgebra generated by C is not nilpotent despite C <= N");
  }
  Filtration filt = find_filtration(s_sub);
  report.filtration_length = filt.length();

  // Decompositions [e, x]_k = sum x^gamma c_gamma with c in S.
  const std::vector<std::vector<unsigned>> kboxes = boxes_upto(inst.bounds);
  std::map<std::vector<unsigned>, std::map<Multidegree, AlgElem>> claims;
  for (const std::vector<unsigned>& kbox : kboxes) {
    std::map<Multidegree, AlgElem> cur;
    for (const auto& [deg, a] : inst.coeffs) {
      if (a.is_zero()) continue;
      auto [it, inserted] = cur.try_emplace(deg, a);
      if (!inserted) it->second += a;
    }
    for (std::size_t stage = 0; stage < n; ++stage) {
      std::map<Multidegree, AlgElem> next;
      for (const auto& [deg, g] : cur) {
        if (g.is_zero()) continue;
        auto rewritten = ctx.rewrite_term(deg, g, stage, kbox[stage]);
        if (!rewritten) {
          report.verdict = ScenarioVerdict::kHypothesisFailure;
          report.failure_detail = ctx.hypothesis_failure;
          return report;
        }
        for (const auto& [d2, c2] : *rewritten) {
          auto [it, inserted] = next.try_emplace(d2, c2);
          if (!inserted) it->second += c2;
        }
      }
      cur = std::move(next);
    }
    std::erase_if(cur, [](const auto& kv) { return kv.second.is_zero(); });

    AlgElem direct = alg_multi_commutator(e, inst.xs, kbox);
    AlgElem recombined = inst.rep->zero();
    for (const auto& [deg, c] : cur) {
      if (!s_sub.contains(c)) {
        throw internal_error("claim coefficient escaped the subalgebra generated by C");
      }
      recombined += inst.monomial(deg) * c;
    }
    if (!(direct == recombined)) {
      throw internal_error("claim decomposition disagrees with the direct commutator");
    }
    claims.emplace(kbox, std::move(cur));
  }

  // Induction on the filtration: e[e,x]_k kills V_l, using the claim, the
  // factored monomial rewrites and the previous level.
  Subspace full_space = Subspace::span(
      inst.rep, [&] {
        std::vector<Coords> rows;
        for (std::size_t i = 0; i < inst.rep->dim(); ++i) {
          Coords r(inst.rep->dim(), 0);
          r[i] = 1;
          rows.push_back(std::move(r));
        }
        return rows;
      }());
  std::vector<unsigned> bounds_unsigned(inst.bounds.begin(), inst.bounds.end());
  std::map<std::vector<unsigned>, IdempotentMonomialRewrite> factored;
  std::vector<AlgElem> xs_vec = inst.xs;
  for (const auto& [deg, a] : claims) {
    for (const auto& [gamma, c] : a) {
      const std::vector<unsigned> key(gamma.exponents().begin(), gamma.exponents().end());
      if (!factored.contains(key)) {
        IdempotentMonomialRewrite rw = rewrite_idempotent_monomial(e, xs_vec, key, full_space);
        if (!rw.ok || !rw.verified) {
          throw internal_error("factored rewrite failed on the full representation space");
        }
        factored.emplace(key, std::move(rw));
      }
    }
  }

  for (std::size_t l = 1; l < filt.chain.size(); ++l) {
    const Subspace& level = filt.chain[l];
    const Subspace& prev = filt.chain[l - 1];
    for (const std::vector<unsigned>& kbox : kboxes) {
      const AlgElem op = e * alg_multi_commutator(e, inst.xs, kbox);
      for (const AlgElem& v : level.basis_elements()) {
        AlgElem total = inst.rep->zero();
        for (const auto& [gamma, c] : claims[kbox]) {
          const AlgElem u = c * v;
          if (!prev.contains(u)) {
            throw internal_error("claim coefficient does not lower the filtration level");
          }
          const std::vector<unsigned> key(gamma.exponents().begin(), gamma.exponents().end());
          const AlgElem piece = e * (inst.monomial(gamma) * u);
          for (const FactoredTerm& term : factored[key].terms) {
            if (!(term.trailing * u).is_zero()) {
              throw internal_error("inductive hypothesis failed for a trailing factor at level " +
                                   std::to_string(l) + ", k=" + box_str(kbox));
            }
          }
          if (!piece.is_zero()) {
            throw internal_error("monomial action did not vanish at level " + std::to_string(l));
          }
          total += piece;
        }
        if (!((op * v) == total) || !(op * v).is_zero()) {
          throw internal_error("induction step failed at level " + std::to_string(l) +
                               ", k=" + box_str(kbox));
        }
      }
    }
    report.transcript.push_back("level " + std::to_string(l) + ": " +
                                std::to_string(kboxes.size()) + " index boxes verified on " +
                                std::to_string(level.rank()) + " basis vectors");
  }

  if (!e.is_zero()) {
    throw internal_error("induction concluded but the candidate is nonzero");
  }
  report.verdict = ScenarioVerdict::kEIsZero;
  report.e_direct_zero = true;
  report.transcript.push_back("candidate vanishes; direct computation agrees");
  return report;
}

ScanResult scan_truncated_idempotents(const TowerPtr& tower, unsigned degree_bound,
                                      std::uint64_t limit) {
  const AlgebraPtr& base = tower->base();
  const AlgebraPtr& hull = tower->hull();
  const std::size_t n = tower->vars();
  const std::uint32_t p = base->modulus();
  const std::size_t dim = base->dim();

  const std::vector<Multidegree> slots =
      multidegrees_upto(Multidegree(std::vector<std::uint32_t>(n, degree_bound)));
  const std::size_t digits = slots.size() * dim;

  std::uint64_t count = 1;
  for (std::size_t i = 0; i < digits; ++i) {
    if (count > limit / p + 1) {
      throw resource_error("candidate space exceeds the limit of " + std::to_string(limit),
                           limit);
    }
    count *= p;
  }
  if (count > limit) {
    throw resource_error("candidate space has " + std::to_string(count) +
                             " polynomials, limit is " + std::to_string(limit),
                         count);
  }

  // Q[b][t][g] = (X^slots[b] * embedded base basis t) * X^slots[g]; candidate
  // squares assemble from these bilinearly.
  std::vector<std::vector<std::vector<OrePoly>>> table(
      slots.size(),
      std::vector<std::vector<OrePoly>>(dim, std::vector<OrePoly>(slots.size(), OrePoly(tower))));
  for (std::size_t b = 0; b < slots.size(); ++b) {
    for (std::size_t t = 0; t < dim; ++t) {
      const OrePoly lhs =
          OrePoly::term(tower, slots[b], embed_in_hull(hull, base->basis_elem(t)));
      for (std::size_t g = 0; g < slots.size(); ++g) {
        table[b][t][g] = lhs * OrePoly::term(tower, slots[g], hull->unit());
      }
    }
  }

  auto decode = [&](std::uint64_t idx) {
    std::vector<Coords> coeffs(slots.size(), Coords(dim, 0));
    for (std::size_t s = 0; s < slots.size(); ++s) {
      for (std::size_t t = 0; t < dim; ++t) {
        coeffs[s][t] = static_cast<std::uint32_t>(idx % p);
        idx /= p;
      }
    }
    return coeffs;
  };

  auto build_poly = [&](const std::vector<Coords>& coeffs) {
    OrePoly e(tower);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      e.add_term(slots[s], hull->elem(embed_in_hull_coords(coeffs[s])));
    }
    return e;
  };

  auto is_idempotent = [&](std::uint64_t idx) -> std::optional<std::uint64_t> {
    const std::vector<Coords> coeffs = decode(idx);
    OrePoly square(tower);
    for (std::size_t b = 0; b < slots.size(); ++b) {
      for (std::size_t t = 0; t < dim; ++t) {
        if (coeffs[b][t] == 0) continue;
        for (std::size_t g = 0; g < slots.size(); ++g) {
          const AlgElem right = hull->elem(embed_in_hull_coords(coeffs[g]));
          if (right.is_zero()) continue;
          square += table[b][t][g].times_const_right(coeffs[b][t] * right);
        }
      }
    }
    if (square == build_poly(coeffs)) return idx;
    return std::nullopt;
  };

  ScanResult out;
  out.candidate_count = count;
  for (std::uint64_t idx : parallel_collect<std::uint64_t>(count, is_idempotent)) {
    out.idempotents.push_back(build_poly(decode(idx)));
  }
  return out;
}

}  // namespace orecalc
