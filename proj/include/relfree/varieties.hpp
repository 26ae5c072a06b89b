#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relfree/word.hpp"

namespace relfree {

using BigInt = boost::multiprecision::cpp_int;

// Names one of the implemented verbal quotients.
class VarietyTag {
 public:
  enum class Kind { absolute, abelian, abelian_exponent, nilpotent_class2 };

  static VarietyTag absolute() { return VarietyTag(Kind::absolute, 0); }
  static VarietyTag abelian() { return VarietyTag(Kind::abelian, 0); }
  static VarietyTag abelian_exponent(uint64_t n) {
    if (n < 2) throw validation_error("exponent parameter must be at least 2");
    return VarietyTag(Kind::abelian_exponent, n);
  }
  static VarietyTag nilpotent_class2() { return VarietyTag(Kind::nilpotent_class2, 0); }

  Kind kind() const { return kind_; }
  uint64_t exponent() const { return exponent_; }
  std::string str() const;

  friend bool operator==(const VarietyTag&, const VarietyTag&) = default;

 private:
  VarietyTag(Kind kind, uint64_t exponent) : kind_(kind), exponent_(exponent) {}
  Kind kind_;
  uint64_t exponent_;  // n >= 2, meaningful only for abelian_exponent
};

// Exponent-sum vector with finite support; zero entries are never stored.
using AbelianVector = std::map<uint32_t, long long>;

AbelianVector abelianize(const Word& w);
AbelianVector abelian_add(const AbelianVector& a, const AbelianVector& b);
AbelianVector abelian_negate(const AbelianVector& a);

// Smith normal form diagonal of an integer matrix (rows x cols), normalized
// nonnegative with the divisibility chain d_1 | d_2 | ... Trailing zeros are
// kept so the result always has min(rows, cols) entries.
std::vector<BigInt> smith_diagonal(std::vector<std::vector<BigInt>> m);

// Solves m * v = rhs over the integers (m is rows x cols, rhs has `rows`
// entries); nullopt when no integer solution exists.
std::optional<std::vector<BigInt>> solve_integer(const std::vector<std::vector<BigInt>>& m,
                                                 const std::vector<BigInt>& rhs);

// V-independence test. Over Z (modulus 0) this is stronger than rational
// independence: the vectors must embed as part of a basis of the ambient free
// abelian group, i.e. every Smith diagonal entry is 1. Over modulus n >= 2 it
// is independence in the exponent-n abelian variety: every Smith diagonal
// entry is a unit mod n.
bool abelian_independent(std::span<const AbelianVector> vectors, uint64_t modulus);

// Same test selected by tag; only the abelian-level varieties are meaningful
// here (absolute independence is not an exponent-sum question, and the
// class-2 test is not implemented at this level).
bool abelian_independent(std::span<const AbelianVector> vectors, const VarietyTag& tag);

// True when target is an integer combination of the rows. This is the
// abelianization obstruction used to cross-check subgroup membership: not in
// the row lattice implies not in the subgroup.
bool in_row_lattice(std::span<const AbelianVector> rows, const AbelianVector& target);

// Element of the free class-2 nilpotent group in collection normal form:
// an exponent vector plus central coordinates on the basic commutators
// [x_i, x_j], i < j, with [a, b] = a^{-1} b^{-1} a b.
struct Nil2Element {
  AbelianVector exponents;
  std::map<std::pair<uint32_t, uint32_t>, long long> commutators;

  static Nil2Element identity() { return {}; }
  Nil2Element inverse() const;
  friend Nil2Element operator*(const Nil2Element& a, const Nil2Element& b);
  friend bool operator==(const Nil2Element&, const Nil2Element&) = default;
};

// Collection normal form of w in the free class-2 nilpotent group of the
// given rank. Throws validation_error when w uses a generator at or above
// rank. The map is a homomorphism onto that group.
Nil2Element nil2_normal_form(const Word& w, uint32_t rank);

// Exact dyadic rational numerator / 2^exponent, canonical: numerator odd or
// zero, exponent 0 when the value is 0.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(BigInt numerator, uint32_t exponent);
  static Dyadic zero() { return {}; }
  static Dyadic one() { return Dyadic(1, 0); }

  const BigInt& numerator() const { return numerator_; }
  uint32_t exponent() const { return exponent_; }
  bool is_zero() const { return numerator_ == 0; }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  Dyadic negate() const;
  Dyadic doubled() const;
  // value * 2^k, k >= 0
  Dyadic times_pow2(uint32_t k) const;

  std::string str() const;  // "<numerator>/2^<exponent>"

  friend bool operator==(const Dyadic&, const Dyadic&) = default;

 private:
  BigInt numerator_ = 0;
  uint32_t exponent_ = 0;
};

// Image of w in the dyadic quotient: the sum over letters of sign / 2^index.
// This evaluates words in the group presented by the relations
// x_i = x_{i+1}^2, whose abelianization is Z[1/2] via x_i -> 1/2^i; the
// evaluation is exact and kills exactly the words trivial in that quotient.
Dyadic dyadic_eval(const Word& w);

}  // namespace relfree
