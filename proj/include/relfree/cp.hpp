#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "relfree/factorization.hpp"
#include "relfree/varieties.hpp"
#include "relfree/word.hpp"

namespace relfree {

enum class WitnessCase { one, two, three, custom };

std::string witness_case_name(WitnessCase c);
WitnessCase witness_case_from_name(const std::string& name);

struct Witness {
  WitnessCase id = WitnessCase::custom;
  WitnessRecipe recipe;
};

// The built-in witness families: case 1 is y_i = x_i x_{i+1}^{-2}; cases 2
// and 3 are y_i = x_{2i}^{-1} [x_{2i+1}, x_{2i+2}].
Witness build_witness(WitnessCase c);
// Validates and wraps a custom recipe.
Witness build_witness(WitnessRecipe recipe);

struct DivisibilityEntry {
  uint32_t level;  // j
  Word word;       // c_j = x_j
  Dyadic value;    // 1 / 2^j
};

// Finite evidence of 2-divisibility: for each j <= depth the word x_j whose
// value doubles back up to 1 exactly. Unbounded 2-divisibility of a nonzero
// element obstructs embedding into a free abelian group; the certificate is
// evidence at depth m, not a proof of the unbounded statement.
struct DivisibilityCertificate {
  uint32_t depth = 0;
  std::vector<DivisibilityEntry> entries;
  bool verify() const;
};

DivisibilityCertificate divisibility_certificate(uint32_t depth);

struct FactorCheck {
  uint32_t truncation = 0;  // n
  bool independence = false;
  BasisCertificate certificate;
  bool certificate_ok = false;
  bool pass() const { return independence && certificate_ok; }
};

struct Nonfreeness {
  enum class Kind { dyadic, delegated, absent };
  Kind kind = Kind::absent;
  std::optional<DivisibilityCertificate> dyadic;  // set when kind == dyadic
  std::string reference;                          // set when kind == delegated
};

// Fixed wording, carried in every report, for how the non-factor condition
// is certified (it is not finitely checkable directly; the verifier takes
// the quotient evidence route).
std::string nonfreeness_note(Nonfreeness::Kind kind);

struct CpReport {
  Witness witness;
  uint32_t truncation = 0;           // N; checks cover n = 0 .. N-1
  uint32_t divisibility_depth = 0;   // used by the dyadic evidence route
  std::vector<FactorCheck> checks;
  Nonfreeness nonfreeness;
  bool pass = false;
};

// Checks, for each n < N, that {y_0..y_n} folds to rank n+1 and that the
// solved basis-extension certificate verifies in full, then attaches the
// non-freeness evidence: the dyadic divisibility certificate for case 1 (and
// for custom recipes whose words all vanish dyadically), the delegation
// marker for cases 2 and 3. Failures are recorded, not thrown.
// divisibility_depth 0 means the default 2N.
CpReport verify_cp_conditions(const Witness& witness, uint32_t truncation,
                              uint32_t divisibility_depth = 0);

// Recomputes the report from its witness and parameters.
CpReport reverify(const CpReport& report);

nlohmann::json recipe_to_json(const Witness& witness);
Witness witness_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const BasisCertificate& cert);
BasisCertificate certificate_from_json(const nlohmann::json& j);

nlohmann::json divisibility_to_json(const DivisibilityCertificate& cert);
DivisibilityCertificate divisibility_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const CpReport& report);
CpReport report_from_json(const nlohmann::json& j);

}  // namespace relfree
