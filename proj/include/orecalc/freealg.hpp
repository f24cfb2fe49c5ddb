#pragma once

// Exact arithmetic in the free associative Z-algebra on named generators.
// Polynomials are sparse maps word -> coefficient with arbitrary-precision
// integer coefficients; structural equality is semantic equality because
// zero terms are dropped eagerly and the term order is canonical
// (length first, then lexicographic on the generator order).

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace orecalc {

using BigInt = boost::multiprecision::cpp_int;

class FiniteAlgebra;
class AlgElem;

// A named generator. Names must be nonempty, start with a letter or '_',
// and contain no digits; the index is rendered as a decimal suffix (index 0
// renders as the bare name), which keeps the text form round-trip exact.
struct GenId {
  std::string name;
  std::uint32_t index = 0;

  auto operator<=>(const GenId&) const = default;

  std::string str() const;
  static GenId parse(std::string_view token);
  static bool valid_name(std::string_view name);
};

using Word = std::vector<GenId>;

// Length first, then lexicographic; gives the canonical term order.
struct WordLess {
  bool operator()(const Word& a, const Word& b) const;
};

class NcPoly {
public:
  using TermMap = std::map<Word, BigInt, WordLess>;

  NcPoly() = default;

  static NcPoly zero() { return NcPoly(); }
  static NcPoly one() { return monomial(Word{}, 1); }
  static NcPoly gen(GenId g) { return monomial(Word{std::move(g)}, 1); }
  static NcPoly gen(std::string name, std::uint32_t index = 0);
  static NcPoly monomial(Word w, BigInt coeff);

  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  int degree() const;  // -1 for the zero polynomial

  BigInt coeff(const Word& w) const;
  std::vector<GenId> support() const;  // distinct generators, sorted

  NcPoly& operator+=(const NcPoly& rhs);
  NcPoly& operator-=(const NcPoly& rhs);
  NcPoly operator-() const;
  friend NcPoly operator+(NcPoly lhs, const NcPoly& rhs) { return lhs += rhs; }
  friend NcPoly operator-(NcPoly lhs, const NcPoly& rhs) { return lhs -= rhs; }
  friend NcPoly operator*(const NcPoly& lhs, const NcPoly& rhs);
  NcPoly& operator*=(const NcPoly& rhs) { return *this = *this * rhs; }
  friend NcPoly operator*(const BigInt& c, const NcPoly& p);

  bool operator==(const NcPoly& rhs) const { return terms_ == rhs.terms_; }

  // Canonical text form, e.g. "3*a.b.c + -1*c.a"; the empty word prints "1"
  // and the zero polynomial prints "0". parse() round-trips str() exactly.
  std::string str() const;
  static NcPoly parse(std::string_view text);

  void add_term(const Word& w, const BigInt& coeff);

private:
  TermMap terms_;
};

NcPoly nc_pow(const NcPoly& p, unsigned k);

// [a,b]_0 = a, [a,b]_1 = ab - ba, [a,b]_k = [[a,b]_{k-1}, b].
NcPoly commutator(const NcPoly& a, const NcPoly& b, unsigned k = 1);

// [..[a,b_1]_{k_1},..,b_p]_{k_p}; bs and ks must have equal length.
NcPoly multi_commutator(const NcPoly& a, std::span<const NcPoly> bs,
                        std::span<const unsigned> ks);

// Ring-homomorphism image of p in the target algebra; every generator in the
// support must be assigned. A nonzero constant term requires a unital target.
AlgElem evaluate(const NcPoly& p, const std::map<GenId, AlgElem>& assignment,
                 const FiniteAlgebra& target);

BigInt binomial(unsigned n, unsigned k);

// FNV-1a 64-bit, used for content hashes in reports and certificates.
std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

}  // namespace orecalc
