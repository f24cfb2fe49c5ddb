#include "orecalc/freealg.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

#include "orecalc/algebra.hpp"

namespace orecalc {

bool GenId::valid_name(std::string_view name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name.front())) && name.front() != '_') return false;
  for (char c : name) {
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

std::string GenId::str() const {
  if (index == 0) return name;
  return name + std::to_string(index);
}

GenId GenId::parse(std::string_view token) {
  std::size_t split = token.size();
  while (split > 0 && std::isdigit(static_cast<unsigned char>(token[split - 1]))) --split;
  std::string name(token.substr(0, split));
  if (!valid_name(name)) {
    throw std::invalid_argument("invalid generator token: '" + std::string(token) + "'");
  }
  std::uint32_t index = 0;
  if (split < token.size()) {
    index = static_cast<std::uint32_t>(std::stoul(std::string(token.substr(split))));
  }
  return GenId{std::move(name), index};
}

bool WordLess::operator()(const Word& a, const Word& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

NcPoly NcPoly::gen(std::string name, std::uint32_t index) {
  if (!GenId::valid_name(name)) {
    throw std::invalid_argument("invalid generator name: '" + name + "'");
  }
  return gen(GenId{std::move(name), index});
}

NcPoly NcPoly::monomial(Word w, BigInt coeff) {
  NcPoly p;
  if (coeff != 0) p.terms_.emplace(std::move(w), std::move(coeff));
  return p;
}

int NcPoly::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(terms_.rbegin()->first.size());
}

BigInt NcPoly::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? BigInt(0) : it->second;
}

std::vector<GenId> NcPoly::support() const {
  std::set<GenId> gens;
  for (const auto& [w, c] : terms_) gens.insert(w.begin(), w.end());
  return {gens.begin(), gens.end()};
}

void NcPoly::add_term(const Word& w, const BigInt& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(w, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

NcPoly& NcPoly::operator+=(const NcPoly& rhs) {
  for (const auto& [w, c] : rhs.terms_) add_term(w, c);
  return *this;
}

NcPoly& NcPoly::operator-=(const NcPoly& rhs) {
  for (const auto& [w, c] : rhs.terms_) add_term(w, -c);
  return *this;
}

NcPoly NcPoly::operator-() const {
  NcPoly out;
  for (const auto& [w, c] : terms_) out.terms_.emplace(w, -c);
  return out;
}

NcPoly operator*(const NcPoly& lhs, const NcPoly& rhs) {
  NcPoly out;
  for (const auto& [wl, cl] : lhs.terms()) {
    for (const auto& [wr, cr] : rhs.terms()) {
      Word w;
      w.reserve(wl.size() + wr.size());
      w.insert(w.end(), wl.begin(), wl.end());
      w.insert(w.end(), wr.begin(), wr.end());
      out.add_term(w, cl * cr);
    }
  }
  return out;
}

NcPoly operator*(const BigInt& c, const NcPoly& p) {
  NcPoly out;
  if (c == 0) return out;
  for (const auto& [w, pc] : p.terms()) out.add_term(w, c * pc);
  return out;
}

std::string NcPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // leading terms first: descending length, then descending lexicographic
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [w, c] = *it;
    if (!first) os << " + ";
    first = false;
    os << c << '*';
    if (w.empty()) {
      os << '1';
    } else {
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (i > 0) os << '.';
        os << w[i].str();
      }
    }
  }
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

NcPoly NcPoly::parse(std::string_view text) {
  NcPoly out;
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty polynomial text");
  if (text == "0") return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(" + ", pos);
    std::string_view term =
        trim(next == std::string_view::npos ? text.substr(pos) : text.substr(pos, next - pos));
    if (term.empty()) throw std::invalid_argument("empty term in polynomial text");

    BigInt coeff = 1;
    std::string_view word_part = term;
    if (std::size_t star = term.find('*'); star != std::string_view::npos) {
      coeff = BigInt(std::string(trim(term.substr(0, star))));
      word_part = trim(term.substr(star + 1));
    }
    Word w;
    if (word_part != "1") {
      std::size_t p = 0;
      while (p <= word_part.size()) {
        std::size_t dot = word_part.find('.', p);
        std::string_view tok =
            dot == std::string_view::npos ? word_part.substr(p) : word_part.substr(p, dot - p);
        w.push_back(GenId::parse(trim(tok)));
        if (dot == std::string_view::npos) break;
        p = dot + 1;
      }
    }
    out.add_term(w, coeff);
    if (next == std::string_view::npos) break;
    pos = next + 3;
  }
  return out;
}

NcPoly nc_pow(const NcPoly& p, unsigned k) {
  NcPoly out = NcPoly::one();
  for (unsigned i = 0; i < k; ++i) out *= p;
  return out;
}

NcPoly commutator(const NcPoly& a, const NcPoly& b, unsigned k) {
  NcPoly out = a;
  for (unsigned i = 0; i < k; ++i) out = out * b - b * out;
  return out;
}

NcPoly multi_commutator(const NcPoly& a, std::span<const NcPoly> bs,
                        std::span<const unsigned> ks) {
  if (bs.size() != ks.size()) {
    throw std::invalid_argument("multi_commutator: bs and ks length mismatch");
  }
  NcPoly out = a;
  for (std::size_t i = 0; i < bs.size(); ++i) out = commutator(out, bs[i], ks[i]);
  return out;
}

AlgElem evaluate(const NcPoly& p, const std::map<GenId, AlgElem>& assignment,
                 const FiniteAlgebra& target) {
  AlgElem acc = target.zero();
  for (const auto& [w, c] : p.terms()) {
    AlgElem factor = target.zero();
    if (w.empty()) {
      if (!target.unital()) {
        throw std::invalid_argument("evaluate: constant term needs a unital target");
      }
      factor = target.unit();
    } else {
      auto it = assignment.find(w.front());
      if (it == assignment.end()) {
        throw std::invalid_argument("evaluate: no assignment for generator " + w.front().str());
      }
      factor = it->second;
      for (std::size_t i = 1; i < w.size(); ++i) {
        auto jt = assignment.find(w[i]);
        if (jt == assignment.end()) {
          throw std::invalid_argument("evaluate: no assignment for generator " + w[i].str());
        }
        factor = factor * jt->second;
      }
    }
    acc += target.residue(c) * factor;
  }
  return acc;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt out = 1;
  for (unsigned i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view data) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(data);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace orecalc
