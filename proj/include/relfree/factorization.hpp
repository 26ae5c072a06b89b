#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relfree/word.hpp"

namespace relfree {

// The data generating the family y_i = x_{ki}^{sign} w(x_{ki+1}, ..., x_{ki+h}):
// pitch k, coding arity h, coding word w over placeholder symbols z_1..z_h,
// and the sign of the leading letter.
struct WitnessRecipe {
  uint32_t pitch = 1;   // k
  uint32_t arity = 1;   // h
  Word coding;          // placeholders z_1..z_h stored as letter indices 1..h
  int sign = 1;

  void validate() const;      // throws validation_error
  Word instantiate(uint32_t i) const;

  friend bool operator==(const WitnessRecipe&, const WitnessRecipe&) = default;
};

// Witness that {y_0..y_n} extends to a basis of the rank-(kn+h+1) free group:
// the extended basis Z, the map sending x_{ki} to y_i, and the solved inverse
// substitution. The backward images encode y_j by the letter x_{kj}, so both
// compositions must fix every generator below ambient_rank.
struct BasisCertificate {
  std::vector<Word> z_basis;
  GeneratorMap forward;
  GeneratorMap backward;
  uint32_t ambient_rank = 0;

  // Composition identities plus the basis cardinality.
  bool verify() const;
  // verify() plus: the folded graph of z_basis has rank ambient_rank and
  // contains every standard generator below ambient_rank.
  bool verify_full() const;
};

// Solves the triangular system defining the y_i by back-substitution from
// equation n downward; handles both h < k and k <= h uniformly.
BasisCertificate triangular_solve(const WitnessRecipe& recipe, uint32_t n);

// Semi-decision for the basis-extension property: recognizes lists of single
// generator letters and lists matching an iterated-coding recipe, and returns
// a verified certificate for those. nullopt is an explicit refusal, never a
// proof of non-extension. Throws validation_error on dependent generators or
// generators at or above ambient_rank.
std::optional<BasisCertificate> free_factor_certificate(std::span<const Word> gens,
                                                        uint32_t ambient_rank);

// Extension of an automorphism of the rank-factor_rank free factor by the
// identity on all higher generators. Throws validation_error when inner moves
// a generator at or above factor_rank, or (when an inverse witness is given)
// when the two maps fail to compose to the identity below factor_rank.
GeneratorMap extend_automorphism(const GeneratorMap& inner, uint32_t factor_rank,
                                 const GeneratorMap* inverse = nullptr);

// A Whitehead automorphism of the second kind together with its inverse.
struct WhiteheadAuto {
  GeneratorMap map;
  GeneratorMap inverse;
  std::string description;
};

// All non-identity Whitehead automorphisms of the second kind of the
// rank-`rank` free group, in a fixed enumeration order.
std::vector<WhiteheadAuto> whitehead_automorphisms(uint32_t rank);

struct PrimitivityResult {
  bool primitive = false;
  std::vector<Word> extending_basis;   // size == rank when primitive
  std::vector<std::string> trace;      // descent steps, or the failure record
};

// Decides whether w belongs to some basis of the rank-`rank` free group.
// Pre-filter: a primitive word's abelianization has gcd 1. Then breadth-first
// Whitehead descent over total cyclic length with memoization; a primitive
// word descends to a single letter, and the descent chain is inverted into an
// explicit extending basis. Throws validation_error on the trivial word, on
// rank > max_rank, and on words longer than max_length.
PrimitivityResult is_primitive(const Word& w, uint32_t rank, uint32_t max_rank = 4,
                               size_t max_length = 24);

}  // namespace relfree
