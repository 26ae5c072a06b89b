// Acceptance suite: one check per release criterion, each printing a single
// PASS/FAIL line. Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "relfree/cp.hpp"
#include "relfree/factorization.hpp"
#include "relfree/stallings.hpp"
#include "relfree/varieties.hpp"
#include "relfree/word.hpp"

using namespace relfree;
using nlohmann::json;

namespace {

Word random_reduced(std::mt19937_64& rng, size_t len, uint32_t lo, uint32_t hi) {
  std::uniform_int_distribution<uint32_t> idx(lo, hi);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<Letter> letters;
  while (letters.size() < len) {
    Letter l(idx(rng), coin(rng) ? 1 : -1);
    if (!letters.empty() && l == letters.back().inverse()) continue;
    letters.push_back(l);
  }
  return Word::reduce(letters);
}

struct Failure {
  std::string detail;
};

using Check = std::function<void(std::string& note)>;

void fail(const std::string& detail) { throw Failure{detail}; }

// ---------------------------------------------------------------- criterion 1

void criterion_triangular_suite(std::string& note) {
  std::mt19937_64 rng(20250810);
  auto start = std::chrono::steady_clock::now();
  size_t solved = 0;
  for (uint32_t k = 1; k <= 3; ++k) {
    for (uint32_t h = 1; h <= 3; ++h) {
      for (int sign : {1, -1}) {
        for (int draw = 0; draw < 20; ++draw) {
          std::uniform_int_distribution<size_t> len(1, 6);
          WitnessRecipe recipe{k, h, random_reduced(rng, len(rng), 1, h), sign};
          for (uint32_t n = 0; n <= 8; ++n) {
            BasisCertificate cert = triangular_solve(recipe, n);
            uint32_t ambient = k * n + h + 1;
            if (cert.ambient_rank != ambient)
              fail("wrong ambient rank for k=" + std::to_string(k));
            if (!cert.verify())
              fail("composition identity failed: k=" + std::to_string(k) +
                   " h=" + std::to_string(h) + " sign=" + std::to_string(sign) +
                   " w=" + recipe.coding.str('z') + " n=" + std::to_string(n));
            SubgroupGraph g = fold(cert.z_basis);
            if (g.rank() != ambient) fail("fold(Z) rank mismatch");
            for (uint32_t m = 0; m < ambient; ++m)
              if (!g.contains(Word::generator(m)))
                fail("x" + std::to_string(m) + " missing from <Z>");
            ++solved;
          }
        }
      }
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 30.0) fail("runtime " + std::to_string(secs) + "s exceeds 30s");
  note = std::to_string(solved) + " certificates, " + std::to_string(secs).substr(0, 5) + "s";
}

// ---------------------------------------------------------------- criterion 2

void criterion_golden_example(std::string& note) {
  WitnessRecipe recipe{1, 1, parse_word("z1^-2", 'z'), +1};
  BasisCertificate cert = triangular_solve(recipe, 1);
  if (cert.backward.image_of(1) != parse_word("x1 x2^2"))
    fail("backward x1 is " + cert.backward.image_of(1).str());
  Word expected_x0 = Word::generator(0) * parse_word("x1 x2^2").pow(2);
  if (cert.backward.image_of(0) != expected_x0)
    fail("backward x0 is " + cert.backward.image_of(0).str());

  std::string rendered = certificate_to_json(cert).dump(2) + "\n";
  std::ifstream golden(std::string(RELFREE_GOLDEN_DIR) + "/triangular_case1_n1.json");
  if (!golden) fail("golden file missing");
  std::stringstream buf;
  buf << golden.rdbuf();
  if (buf.str() != rendered) fail("certificate JSON differs from the golden file");
  note = "byte-exact";
}

// ---------------------------------------------------------------- criterion 3

void criterion_fold_confluence(std::string& note) {
  std::mt19937_64 rng(777);
  auto start = std::chrono::steady_clock::now();
  for (int set = 0; set < 200; ++set) {
    std::uniform_int_distribution<size_t> count(1, 8), len(1, 20), plen(1, 20);
    std::vector<Word> gens;
    size_t c = count(rng);
    for (size_t i = 0; i < c; ++i) gens.push_back(random_reduced(rng, len(rng), 0, 4));

    SubgroupGraph reference = fold(gens);
    std::vector<Word> probes;
    for (int p = 0; p < 20; ++p) probes.push_back(random_reduced(rng, plen(rng), 0, 4));
    std::vector<bool> verdicts;
    for (const Word& p : probes) verdicts.push_back(reference.contains(p));

    for (int order = 0; order < 10; ++order) {
      SubgroupGraph shuffled = fold_shuffled(gens, rng());
      if (shuffled.rank() != reference.rank()) fail("rank differs across fold orders");
      if (!(shuffled == reference)) fail("graphs not basepoint-isomorphic");
      for (size_t p = 0; p < probes.size(); ++p)
        if (shuffled.contains(probes[p]) != verdicts[p])
          fail("membership verdict differs across fold orders");
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 60.0) fail("runtime " + std::to_string(secs) + "s exceeds 60s");
  note = "200 sets x 10 orders, " + std::to_string(secs).substr(0, 5) + "s";
}

// ---------------------------------------------------------------- criterion 4

void criterion_membership_oracle(std::string& note) {
  std::mt19937_64 rng(424242);
  int obstructed = 0, positive = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<size_t> count(1, 5), len(1, 12), flen(1, 6);
    std::vector<Word> gens;
    size_t c = count(rng);
    for (size_t i = 0; i < c; ++i) gens.push_back(random_reduced(rng, len(rng), 0, 4));
    SubgroupGraph g = fold(gens);
    std::vector<Word> basis = graph_basis(g);

    Word probe;
    if (trial % 2) {
      std::uniform_int_distribution<size_t> pick(0, gens.size() - 1);
      for (size_t f = 0, reps = flen(rng); f < reps; ++f) {
        const Word& w = gens[pick(rng)];
        probe = probe * (rng() % 2 ? w : w.inverse());
      }
    } else {
      probe = random_reduced(rng, len(rng), 0, 4);
    }

    BasisExpression e = member_express(g, probe);
    std::vector<AbelianVector> rows;
    for (const Word& w : gens) rows.push_back(abelianize(w));
    if (!in_row_lattice(rows, abelianize(probe))) {
      ++obstructed;
      if (e.member) fail("member despite abelian obstruction: " + probe.str());
    }
    if (e.member) {
      ++positive;
      GeneratorMap subst;
      for (size_t i = 0; i < basis.size(); ++i) subst.set(static_cast<uint32_t>(i), basis[i]);
      if (subst.apply(e.expression) != probe)
        fail("expression does not substitute back to " + probe.str());
    }
  }
  if (obstructed < 50 || positive < 50) fail("suite not exercising both branches");
  note = std::to_string(positive) + " expressions, " + std::to_string(obstructed) +
         " obstructions";
}

// ---------------------------------------------------------------- criterion 5

struct Heis {
  long long a = 0, b = 0, c = 0;
  friend Heis operator*(const Heis& l, const Heis& r) {
    return {l.a + r.a, l.b + r.b, l.c + r.c + l.a * r.b};
  }
  Heis inverse() const { return {-a, -b, a * b - c}; }
};

Heis heis_eval(const Word& w) {
  Heis m;
  for (Letter l : w.letters()) {
    Heis gen = l.index() == 0 ? Heis{1, 0, 0} : Heis{0, 1, 0};
    m = m * (l.sign() > 0 ? gen : gen.inverse());
  }
  return m;
}

Nil2Element heis_coords(const Heis& m) {
  Nil2Element e;
  if (m.a != 0) e.exponents[0] = m.a;
  if (m.b != 0) e.exponents[1] = m.b;
  long long c = m.c - m.a * m.b;
  if (c != 0) e.commutators[{0, 1}] = c;
  return e;
}

void criterion_nil2_oracle(std::string& note) {
  std::mt19937_64 rng(5150);
  auto start = std::chrono::steady_clock::now();
  std::uniform_int_distribution<size_t> len(1, 20);
  for (int trial = 0; trial < 1000; ++trial) {
    Word u = random_reduced(rng, len(rng), 0, 1);
    Word v = random_reduced(rng, len(rng), 0, 1);
    Nil2Element collected = nil2_normal_form(u * v, 2);
    Nil2Element oracle = heis_coords(heis_eval(u) * heis_eval(v));
    if (!(collected == oracle))
      fail("mismatch on u=" + u.str() + " v=" + v.str());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 10.0) fail("runtime exceeds 10s");
  note = "1000 pairs, " + std::to_string(secs).substr(0, 5) + "s";
}

// ---------------------------------------------------------------- criterion 6

void criterion_dyadic_quotient(std::string& note) {
  for (uint32_t i = 0; i <= 64; ++i)
    if (dyadic_eval(Word::generator(i)) != dyadic_eval(Word::generator(i + 1)).doubled())
      fail("doubling relation fails at i=" + std::to_string(i));

  Witness one = build_witness(WitnessCase::one);
  std::vector<Word> witnesses;
  for (uint32_t i = 0; i < 32; ++i) {
    witnesses.push_back(one.recipe.instantiate(i));
    if (!dyadic_eval(witnesses.back()).is_zero())
      fail("y_" + std::to_string(i) + " does not vanish");
  }

  std::mt19937_64 rng(64);
  std::uniform_int_distribution<size_t> pick(0, witnesses.size() - 1), glen(0, 10),
      factors(1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    Word product;
    for (size_t f = 0, reps = factors(rng); f < reps; ++f) {
      Word g = random_reduced(rng, 1 + glen(rng), 0, 10);
      Word y = witnesses[pick(rng)];
      if (rng() % 2) y = y.inverse();
      product = product * (g * y * g.inverse());
    }
    if (!dyadic_eval(product).is_zero()) fail("conjugate product does not vanish");
  }

  DivisibilityCertificate cert = divisibility_certificate(64);
  if (!cert.verify()) fail("depth-64 certificate does not verify");
  for (const DivisibilityEntry& e : cert.entries) {
    bool canonical = e.value.numerator() == 0
                         ? e.value.exponent() == 0
                         : (e.value.numerator() % 2 != 0 || e.value.exponent() == 0);
    if (!canonical) fail("non-canonical dyadic in certificate");
    if (e.value.times_pow2(e.level) != Dyadic::one())
      fail("2^j * value != 1 at j=" + std::to_string(e.level));
  }
  note = "relation to i=64, 32 witnesses, 100 conjugate products, depth-64 certificate";
}

// ---------------------------------------------------------------- criterion 7

void criterion_end_to_end(std::string& note) {
  std::string timing;
  for (WitnessCase c : {WitnessCase::one, WitnessCase::two, WitnessCase::three}) {
    auto start = std::chrono::steady_clock::now();
    CpReport report = verify_cp_conditions(build_witness(c), 10);
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 5.0) fail("case " + witness_case_name(c) + " took more than 5s");
    if (!report.pass) fail("case " + witness_case_name(c) + " does not pass");
    for (const FactorCheck& f : report.checks)
      if (!f.pass()) fail("failed check at n=" + std::to_string(f.truncation));
    if (c == WitnessCase::one) {
      if (report.nonfreeness.kind != Nonfreeness::Kind::dyadic)
        fail("case 1 must carry dyadic evidence");
    } else if (report.nonfreeness.kind != Nonfreeness::Kind::delegated) {
      fail("cases 2/3 must delegate");
    }
    json j = report_to_json(report);
    CpReport loaded = report_from_json(j);
    CpReport fresh = reverify(loaded);
    if (fresh.pass != report.pass) fail("re-verified verdict differs");
    if (report_to_json(fresh) != j) fail("re-verified report differs");
    timing += witness_case_name(c) + ":" + std::to_string(secs).substr(0, 5) + "s ";
  }
  note = timing;
}

// ---------------------------------------------------------------- criterion 8

void criterion_primitivity(std::string& note) {
  PrimitivityResult witness = is_primitive(parse_word("x0 x1^-2"), 2);
  if (!witness.primitive) fail("x0 x1^-2 must be primitive");
  SubgroupGraph g = fold(witness.extending_basis);
  if (g.rank() != 2 || !g.contains(Word::generator(0)) || !g.contains(Word::generator(1)))
    fail("extending basis does not fold to the full rank-2 group");
  if (witness.extending_basis[0] != parse_word("x0 x1^-2"))
    fail("extending basis does not contain the word");

  if (is_primitive(parse_word("x0^2"), 2).primitive) fail("x0^2 must not be primitive");
  if (is_primitive(commutator(Word::generator(0), Word::generator(1)), 2).primitive)
    fail("[x0,x1] must not be primitive");

  std::mt19937_64 rng(88);
  auto autos = whitehead_automorphisms(2);
  std::uniform_int_distribution<size_t> pick(0, autos.size() - 1);
  for (const char* text : {"x0 x1^-2", "x0^2", "[commutator]"}) {
    Word base = std::string(text) == "[commutator]"
                    ? commutator(Word::generator(0), Word::generator(1))
                    : parse_word(text);
    bool expected = is_primitive(base, 2).primitive;
    int done = 0;
    while (done < 50) {
      GeneratorMap alpha = autos[pick(rng)].map;
      if (rng() % 2) alpha = compose(autos[pick(rng)].map, alpha);
      Word image = alpha.apply(base);
      if (image.empty() || image.size() > 24) continue;
      PrimitivityResult r = is_primitive(image, 2);
      if (r.primitive != expected)
        fail("verdict changed under basis change for " + base.str());
      if (r.primitive && fold(r.extending_basis).rank() != 2)
        fail("extending basis of an image is not a basis");
      ++done;
    }
  }
  note = "3 cases x 50 automorphic images";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Check run;
  };
  std::vector<Criterion> criteria = {
      {1, "triangular-solve suite (k,h <= 3, both signs, n <= 8)", criterion_triangular_suite},
      {2, "golden back-substitution example", criterion_golden_example},
      {3, "folding confluence across identification orders", criterion_fold_confluence},
      {4, "membership cross-oracle and expression soundness", criterion_membership_oracle},
      {5, "nil2 collection vs Heisenberg matrix oracle", criterion_nil2_oracle},
      {6, "dyadic quotient relations and divisibility certificate", criterion_dyadic_quotient},
      {7, "end-to-end cp-verify for cases 1-3 with JSON round trip", criterion_end_to_end},
      {8, "Whitehead primitivity with verified bases", criterion_primitivity},
  };

  int failures = 0;
  for (Criterion& c : criteria) {
    std::string note;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(note);
      double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::printf("PASS criterion %d: %s [%s] (%.2fs)\n", c.id, c.name, note.c_str(), secs);
    } catch (const Failure& f) {
      ++failures;
      std::printf("FAIL criterion %d: %s — %s\n", c.id, c.name, f.detail.c_str());
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL criterion %d: %s — unexpected error: %s\n", c.id, c.name, e.what());
    }
    std::fflush(stdout);
  }
  return failures;
}
