#include "relfree/factorization.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "relfree/stallings.hpp"

namespace relfree {

void WitnessRecipe::validate() const {
  if (pitch < 1) throw validation_error("recipe pitch k must be positive");
  if (arity < 1) throw validation_error("recipe arity h must be positive");
  if (sign != 1 && sign != -1) throw validation_error("recipe sign must be +1 or -1");
  for (Letter l : coding.letters())
    if (l.index() < 1 || l.index() > arity)
      throw validation_error("coding word placeholder out of range z1..z" +
                             std::to_string(arity));
}

Word WitnessRecipe::instantiate(uint32_t i) const {
  std::vector<Letter> letters;
  letters.reserve(coding.size() + 1);
  letters.push_back(Letter(pitch * i, sign));
  for (Letter l : coding.letters())
    letters.push_back(Letter(pitch * i + l.index(), l.sign()));
  return Word::reduce(letters);
}

bool BasisCertificate::verify() const {
  if (z_basis.size() != ambient_rank) return false;
  GeneratorMap fb = compose(forward, backward);
  GeneratorMap bf = compose(backward, forward);
  return acts_as_identity_below(fb, ambient_rank) &&
         acts_as_identity_below(bf, ambient_rank);
}

bool BasisCertificate::verify_full() const {
  if (!verify()) return false;
  SubgroupGraph g = fold(z_basis);
  if (g.rank() != ambient_rank) return false;
  for (uint32_t i = 0; i < ambient_rank; ++i)
    if (!g.contains(Word::generator(i))) return false;
  return true;
}

BasisCertificate triangular_solve(const WitnessRecipe& recipe, uint32_t n) {
  recipe.validate();
  uint32_t k = recipe.pitch, h = recipe.arity;
  uint32_t ambient = k * n + h + 1;

  BasisCertificate cert;
  cert.ambient_rank = ambient;

  for (uint32_t i = 0; i <= n; ++i)
    cert.forward.set(k * i, recipe.instantiate(i));

  // Back-substitution from equation n downward. In the y_j |-> x_{kj} letter
  // encoding the equations read
  //   x_{ki} = x_{ki} w(...)^{-1}   (sign +1)
  //   x_{ki} = w(...) x_{ki}^{-1}   (sign -1)
  // where solved x_{kj}, j > i, are replaced by their expressions. Higher
  // equations are final when used, so one downward pass solves the system.
  GeneratorMap& solved = cert.backward;
  for (uint32_t step = 0; step <= n; ++step) {
    uint32_t i = n - step;
    std::vector<Letter> instance;
    for (Letter l : recipe.coding.letters())
      instance.push_back(Letter(k * i + l.index(), l.sign()));
    Word w_part = Word::reduce(instance);
    Word expr;
    if (recipe.sign > 0)
      expr = Word::generator(k * i) * solved.apply(w_part.inverse());
    else
      expr = solved.apply(w_part) * Word::generator(k * i, -1);
    solved.set(k * i, expr);
  }

  // Z = {y_0..y_n} followed by the untouched standard generators, ascending.
  for (uint32_t i = 0; i <= n; ++i) cert.z_basis.push_back(recipe.instantiate(i));
  std::set<uint32_t> solved_indices;
  for (uint32_t i = 0; i <= n; ++i) solved_indices.insert(k * i);
  for (uint32_t m = 0; m < ambient; ++m)
    if (!solved_indices.contains(m)) cert.z_basis.push_back(Word::generator(m));
  return cert;
}

namespace {

// Shifts every generator index by delta.
Word shift_word(const Word& w, uint32_t delta) {
  std::vector<Letter> letters;
  letters.reserve(w.size());
  for (Letter l : w.letters()) letters.push_back(Letter(l.index() + delta, l.sign()));
  return Word::reduce(letters);
}

std::optional<BasisCertificate> singles_certificate(std::span<const Word> gens,
                                                    uint32_t ambient_rank) {
  std::set<uint32_t> used;
  for (const Word& g : gens) {
    if (g.size() != 1) return std::nullopt;
    if (!used.insert(g.letters()[0].index()).second) return std::nullopt;
  }
  BasisCertificate cert;
  cert.ambient_rank = ambient_rank;
  cert.z_basis.assign(gens.begin(), gens.end());
  for (uint32_t m = 0; m < ambient_rank; ++m)
    if (!used.contains(m)) cert.z_basis.push_back(Word::generator(m));
  return cert;  // forward and backward are the identity
}

std::optional<BasisCertificate> recipe_certificate(std::span<const Word> gens,
                                                   uint32_t ambient_rank) {
  const Word& g0 = gens[0];
  if (g0.empty()) return std::nullopt;
  Letter head = g0.letters()[0];
  if (head.index() != 0) return std::nullopt;
  int sign = head.sign();
  Word w_part = Word::generator(0, -sign) * g0;
  if (w_part.empty()) return std::nullopt;  // bare generator; singles route

  uint32_t n = static_cast<uint32_t>(gens.size()) - 1;
  uint32_t k = 1;
  if (n >= 1) {
    const Word& g1 = gens[1];
    if (g1.empty()) return std::nullopt;
    uint32_t i1 = g1.letters()[0].index();
    if (i1 == 0) return std::nullopt;
    k = i1;
  }
  if (ambient_rank < k * n + 2) return std::nullopt;
  uint32_t h = ambient_rank - k * n - 1;

  std::vector<Letter> coding;
  for (Letter l : w_part.letters()) {
    if (l.index() < 1 || l.index() > h) return std::nullopt;
    coding.push_back(l);
  }
  WitnessRecipe recipe{k, h, Word::reduce(coding), sign};
  for (uint32_t i = 0; i <= n; ++i)
    if (recipe.instantiate(i) != gens[i]) return std::nullopt;

  BasisCertificate cert = triangular_solve(recipe, n);
  if (!cert.verify_full()) return std::nullopt;
  return cert;
}

}  // namespace

std::optional<BasisCertificate> free_factor_certificate(std::span<const Word> gens,
                                                        uint32_t ambient_rank) {
  if (gens.empty()) throw validation_error("no generators given");
  if (ambient_rank < 1) throw validation_error("ambient rank must be positive");
  for (const Word& g : gens)
    if (g.max_index() >= static_cast<long>(ambient_rank))
      throw validation_error("generator uses an index at or above the ambient rank");
  if (gens.size() > ambient_rank)
    throw validation_error("more generators than the ambient rank");
  if (fold(gens).rank() != gens.size())
    throw validation_error("dependent generators");

  if (auto cert = singles_certificate(gens, ambient_rank)) return cert;
  if (auto cert = recipe_certificate(gens, ambient_rank)) return cert;
  return std::nullopt;
}

GeneratorMap extend_automorphism(const GeneratorMap& inner, uint32_t factor_rank,
                                 const GeneratorMap* inverse) {
  auto check_within = [factor_rank](const GeneratorMap& f, const char* who) {
    if (f.max_support_index() >= static_cast<long>(factor_rank) ||
        f.max_image_index() >= static_cast<long>(factor_rank))
      throw validation_error(std::string(who) +
                             " moves a generator at or above the factor rank");
  };
  check_within(inner, "map");
  if (inverse) {
    check_within(*inverse, "inverse witness");
    if (!acts_as_identity_below(compose(inner, *inverse), factor_rank) ||
        !acts_as_identity_below(compose(*inverse, inner), factor_rank))
      throw validation_error("inverse witness does not invert the map on the factor");
  }
  // Identity outside the support is the GeneratorMap semantics, so the
  // extension is the map itself once validated.
  return inner;
}

namespace {

// Cyclic reduction: w = u * core * u^{-1} with core cyclically reduced.
std::pair<Word, Word> cyclic_reduce(const Word& w) {
  std::vector<Letter> letters = w.letters();
  std::vector<Letter> prefix;
  size_t lo = 0, hi = letters.size();
  while (hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse()) {
    prefix.push_back(letters[lo]);
    ++lo;
    --hi;
  }
  return {Word::reduce(prefix),
          Word::reduce(std::span<const Letter>(letters.data() + lo, hi - lo))};
}

long long abelian_gcd(const Word& w) {
  long long g = 0;
  std::map<uint32_t, long long> sums;
  for (Letter l : w.letters()) sums[l.index()] += l.sign();
  for (auto& [i, e] : sums) g = std::gcd(g, e < 0 ? -e : e);
  return g;
}

}  // namespace

std::vector<WhiteheadAuto> whitehead_automorphisms(uint32_t rank) {
  std::vector<WhiteheadAuto> autos;
  // Multiplier a ranges over all letters; every other generator g picks one of
  // {g, g a, a^{-1} g, a^{-1} g a}. The all-fix choice is the identity and is
  // skipped.
  for (uint32_t ai = 0; ai < rank; ++ai) {
    for (int as : {1, -1}) {
      Word a = Word::generator(ai, as);
      std::vector<uint32_t> others;
      for (uint32_t g = 0; g < rank; ++g)
        if (g != ai) others.push_back(g);
      uint32_t combos = 1;
      for (size_t t = 0; t < others.size(); ++t) combos *= 4;
      for (uint32_t mask = 1; mask < combos; ++mask) {
        GeneratorMap fwd, inv;
        uint32_t m = mask;
        std::string desc = "mult x" + std::to_string(ai) + (as < 0 ? "^-1" : "") + ":";
        for (uint32_t g : others) {
          uint32_t action = m % 4;
          m /= 4;
          Word x = Word::generator(g);
          switch (action) {
            case 0:
              break;
            case 1:  // g -> g a
              fwd.set(g, x * a);
              inv.set(g, x * a.inverse());
              desc += " x" + std::to_string(g) + ">ra";
              break;
            case 2:  // g -> a^{-1} g
              fwd.set(g, a.inverse() * x);
              inv.set(g, a * x);
              desc += " x" + std::to_string(g) + ">la";
              break;
            case 3:  // g -> a^{-1} g a
              fwd.set(g, a.inverse() * x * a);
              inv.set(g, a * x * a.inverse());
              desc += " x" + std::to_string(g) + ">c";
              break;
          }
        }
        autos.push_back({std::move(fwd), std::move(inv), std::move(desc)});
      }
    }
  }
  return autos;
}

namespace {

// One breadth-first descent step: all strictly shorter cyclic words reachable
// with a single Whitehead automorphism from any frontier word.
struct DescentNode {
  Word core;        // cyclically reduced
  size_t parent;    // index into the visited list, SIZE_MAX at the root
  size_t auto_idx;  // automorphism applied at the parent
};

}  // namespace

PrimitivityResult is_primitive(const Word& w, uint32_t rank, uint32_t max_rank,
                               size_t max_length) {
  if (w.empty()) throw validation_error("the trivial word is not eligible");
  if (rank < 1) throw validation_error("rank must be positive");
  if (rank > max_rank)
    throw validation_error("rank " + std::to_string(rank) + " above the configured bound " +
                           std::to_string(max_rank));
  if (w.size() > max_length)
    throw validation_error("word length above the configured bound " +
                           std::to_string(max_length));
  if (w.max_index() >= static_cast<long>(rank))
    throw validation_error("word uses a generator at or above the given rank");

  PrimitivityResult result;

  long long g = abelian_gcd(w);
  if (g != 1) {
    result.primitive = false;
    result.trace.push_back("abelianization gcd is " + std::to_string(g) +
                           ", a primitive word needs gcd 1");
    return result;
  }

  auto autos = whitehead_automorphisms(rank);

  auto [prefix0, core0] = cyclic_reduce(w);
  std::vector<DescentNode> visited{{core0, SIZE_MAX, SIZE_MAX}};
  std::set<std::string> seen{core0.str()};
  std::vector<size_t> frontier{0};
  size_t found = SIZE_MAX;

  while (found == SIZE_MAX) {
    size_t level_len = visited[frontier.front()].core.size();
    if (level_len == 1) {
      found = frontier.front();
      break;
    }
    std::vector<size_t> next;
    for (size_t node : frontier) {
      Word core = visited[node].core;  // push_back below may reallocate visited
      for (size_t ai = 0; ai < autos.size(); ++ai) {
        Word image = cyclic_reduce(autos[ai].map.apply(core)).second;
        if (image.size() >= level_len) continue;
        if (!seen.insert(image.str()).second) continue;
        visited.push_back({image, node, ai});
        next.push_back(visited.size() - 1);
      }
    }
    if (next.empty()) {
      result.primitive = false;
      result.trace.push_back("descent stuck at cyclic word \"" +
                             visited[frontier.front()].core.str() + "\" of length " +
                             std::to_string(level_len) + " after trying " +
                             std::to_string(autos.size()) + " automorphisms per word");
      for (size_t node : frontier)
        result.trace.push_back("frontier: " + visited[node].core.str());
      return result;
    }
    // keep only the shortest words of the new level
    size_t best = SIZE_MAX;
    for (size_t node : next) best = std::min(best, visited[node].core.size());
    frontier.clear();
    for (size_t node : next)
      if (visited[node].core.size() == best) frontier.push_back(node);
  }

  // Reconstruct: walk the chain back to the root, building gamma with
  // gamma(w) = u * core * u^{-1} and its inverse alongside.
  std::vector<size_t> chain;
  for (size_t node = found; node != SIZE_MAX; node = visited[node].parent)
    if (visited[node].auto_idx != SIZE_MAX) chain.push_back(visited[node].auto_idx);
  std::reverse(chain.begin(), chain.end());

  GeneratorMap gamma, gamma_inv;
  Word conj = prefix0;
  Word core = core0;
  for (size_t ai : chain) {
    const WhiteheadAuto& wa = autos[ai];
    Word image = wa.map.apply(core);
    auto [v, reduced_core] = cyclic_reduce(image);
    conj = wa.map.apply(conj) * v;
    core = reduced_core;
    gamma = compose(wa.map, gamma);
    gamma_inv = compose(gamma_inv, wa.inverse);
    result.trace.push_back(wa.description + " -> " + core.str());
  }

  // gamma(w) = conj * x_j^s * conj^{-1}; push the target generator into slot 0
  // and pull the standard basis back through gamma^{-1}.
  Letter target = core.letters()[0];
  GeneratorMap tau;
  if (target.index() != 0) {
    tau.set(0, Word::generator(target.index(), target.sign()));
    tau.set(target.index(), Word::generator(0));
  } else if (target.sign() < 0) {
    tau.set(0, Word::generator(0, -1));
  }
  Word g0 = gamma_inv.apply(conj);
  for (uint32_t t = 0; t < rank; ++t) {
    Word image = gamma_inv.apply(tau.apply(Word::generator(t)));
    result.extending_basis.push_back(conjugate(g0, image));
  }
  result.primitive = true;
  if (result.extending_basis[0] != w)
    throw std::logic_error("primitivity reconstruction failed to place the word");
  return result;
}

}  // namespace relfree
