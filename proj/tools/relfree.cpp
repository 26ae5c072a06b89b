// relfree — batch verifier for free-group and group-variety computations:
// word algebra, folded subgroup graphs, basis-extension certificates, verbal
// quotient evaluations, and construction-principle reports.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "relfree/cp.hpp"
#include "relfree/factorization.hpp"
#include "relfree/stallings.hpp"
#include "relfree/varieties.hpp"
#include "relfree/word.hpp"

using nlohmann::json;
using namespace relfree;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_invalid = 2;

std::vector<Word> parse_word_list(const std::string& text) {
  std::vector<Word> words;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    std::string piece =
        comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
    bool blank = piece.find_first_not_of(" \t") == std::string::npos;
    if (!blank) words.push_back(parse_word(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return words;
}

std::vector<Word> read_gens(const std::string& gens, const std::string& gens_file) {
  if (!gens.empty() && !gens_file.empty())
    throw validation_error("give either --gens or --gens-file, not both");
  if (!gens_file.empty()) {
    std::ifstream in(gens_file);
    if (!in) throw validation_error("cannot open " + gens_file);
    std::vector<Word> words;
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
      if (!blank) words.push_back(parse_word(line));
    }
    return words;
  }
  return parse_word_list(gens);
}

void emit_json(json j) {
  j["schema"] = 1;
  std::cout << j.dump(2) << "\n";
}

json graph_to_json(const SubgroupGraph& g) {
  json edges = json::array();
  for (const GraphEdge& e : g.edges())
    edges.push_back(json::array({e.src, "x" + std::to_string(e.label), e.dst}));
  return json{{"vertices", g.vertex_count()},
              {"basepoint", 0},
              {"edges", edges},
              {"rank", g.rank()}};
}

uint32_t max_rank_bound() {
  if (const char* env = std::getenv("RELFREE_MAX_RANK")) {
    long v = std::strtol(env, nullptr, 10);
    if (v < 1) throw validation_error("RELFREE_MAX_RANK must be a positive integer");
    return static_cast<uint32_t>(v);
  }
  return 4;
}

GeneratorMap parse_assignments(const std::vector<std::string>& items) {
  GeneratorMap f;
  for (const std::string& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw validation_error("assignment must look like <index>=<word>: " + item);
    size_t pos = 0;
    unsigned long index = std::stoul(item.substr(0, eq), &pos);
    f.set(static_cast<uint32_t>(index), parse_word(item.substr(eq + 1)));
  }
  return f;
}

struct Options {
  std::string format = "text";
  std::string gens, gens_file, word_text, words_text, seeds_text;
  std::vector<std::string> bases_text;
  std::vector<std::string> assigns, inverse_assigns;
  std::string case_name = "1", coding = "e", verify_file;
  uint32_t rank = 2, pitch = 1, arity = 1, truncation = 0, cp_truncation = 10, depth = 0,
      level = 0;
  int sign = 1;
  uint64_t modulus = 0;
};

int run_reduce(const Options& o) {
  std::cout << parse_word(o.word_text).str() << "\n";
  return exit_ok;
}

int run_fold(const Options& o) {
  SubgroupGraph g = fold(read_gens(o.gens, o.gens_file));
  if (o.format == "dot")
    std::cout << g.to_dot();
  else if (o.format == "json")
    emit_json(graph_to_json(g));
  else
    std::cout << "vertices: " << g.vertex_count() << "\nedges: " << g.edges().size()
              << "\nrank: " << g.rank() << "\n";
  return exit_ok;
}

int run_member(const Options& o) {
  SubgroupGraph g = fold(read_gens(o.gens, o.gens_file));
  bool in = g.contains(parse_word(o.word_text));
  if (o.format == "json")
    emit_json(json{{"member", in}});
  else
    std::cout << (in ? "member" : "non-member") << "\n";
  return exit_ok;
}

int run_basis(const Options& o) {
  std::vector<Word> basis = graph_basis(fold(read_gens(o.gens, o.gens_file)));
  if (o.format == "json") {
    json arr = json::array();
    for (const Word& w : basis) arr.push_back(w.str());
    emit_json(json{{"basis", arr}});
  } else {
    for (const Word& w : basis) std::cout << w.str() << "\n";
  }
  return exit_ok;
}

int run_express(const Options& o) {
  SubgroupGraph g = fold(read_gens(o.gens, o.gens_file));
  BasisExpression e = member_express(g, parse_word(o.word_text));
  if (o.format == "json") {
    json j{{"member", e.member}};
    if (e.member) j["expression"] = e.expression.str('b');
    emit_json(std::move(j));
  } else {
    std::cout << (e.member ? e.expression.str('b') : std::string("non-member")) << "\n";
  }
  return exit_ok;
}

int run_support_closure(const Options& o) {
  std::vector<Word> seeds = parse_word_list(o.seeds_text);
  std::vector<std::vector<Word>> bases;
  for (const std::string& b : o.bases_text) bases.push_back(parse_word_list(b));
  if (bases.empty()) throw validation_error("at least one --basis is required");
  auto supports = support_closure(seeds, bases);
  if (o.format == "json") {
    json out = json::array();
    for (size_t j = 0; j < supports.size(); ++j) {
      json words = json::array();
      for (const Word& w : supports[j]) words.push_back(w.str());
      out.push_back(json{{"basis", j}, {"support", words}});
    }
    emit_json(json{{"supports", out}});
  } else {
    for (size_t j = 0; j < supports.size(); ++j) {
      std::cout << "basis " << j << ":";
      for (const Word& w : supports[j]) std::cout << " " << w.str();
      std::cout << "\n";
    }
  }
  return exit_ok;
}

int run_primitive(const Options& o) {
  PrimitivityResult r = is_primitive(parse_word(o.word_text), o.rank, max_rank_bound());
  if (o.format == "json") {
    json j{{"primitive", r.primitive}};
    if (r.primitive) {
      json basis = json::array();
      for (const Word& w : r.extending_basis) basis.push_back(w.str());
      j["basis"] = basis;
    }
    j["trace"] = r.trace;
    emit_json(std::move(j));
  } else {
    std::cout << (r.primitive ? "primitive" : "not primitive") << "\n";
    if (r.primitive)
      for (const Word& w : r.extending_basis) std::cout << "  " << w.str() << "\n";
    else
      for (const std::string& line : r.trace) std::cout << "  " << line << "\n";
  }
  return exit_ok;
}

void print_certificate_text(const BasisCertificate& cert) {
  std::cout << "ambient rank: " << cert.ambient_rank << "\n";
  std::cout << "z basis:";
  for (const Word& w : cert.z_basis) std::cout << " " << w.str() << ",";
  std::cout << "\n";
  for (auto& [i, img] : cert.forward.assignments())
    std::cout << "forward: x" << i << " -> " << img.str() << "\n";
  for (auto& [i, img] : cert.backward.assignments())
    std::cout << "backward: x" << i << " -> " << img.str() << "\n";
  std::cout << (cert.verify_full() ? "verified" : "NOT VERIFIED") << "\n";
}

int run_triangular_solve(const Options& o) {
  if (!o.verify_file.empty()) {
    std::ifstream in(o.verify_file);
    if (!in) throw validation_error("cannot open " + o.verify_file);
    json j = json::parse(in);
    BasisCertificate cert = certificate_from_json(j);
    bool ok = cert.verify_full();
    if (o.format == "json")
      emit_json(json{{"verified", ok}});
    else
      std::cout << (ok ? "verified" : "NOT VERIFIED") << "\n";
    return ok ? exit_ok : exit_invalid;
  }
  WitnessRecipe recipe{o.pitch, o.arity, parse_word(o.coding, 'z'), o.sign};
  BasisCertificate cert = triangular_solve(recipe, o.truncation);
  if (o.format == "json")
    emit_json(certificate_to_json(cert));
  else
    print_certificate_text(cert);
  return exit_ok;
}

int run_free_factor(const Options& o) {
  std::vector<Word> gens = read_gens(o.gens, o.gens_file);
  auto cert = free_factor_certificate(gens, o.rank);
  if (o.format == "json") {
    if (cert) {
      json j = certificate_to_json(*cert);
      j["found"] = true;
      emit_json(std::move(j));
    } else {
      emit_json(json{{"found", false}, {"note", "no certificate found"}});
    }
  } else {
    if (cert)
      print_certificate_text(*cert);
    else
      std::cout << "no certificate found\n";
  }
  return exit_ok;
}

int run_extend_aut(const Options& o) {
  GeneratorMap inner = parse_assignments(o.assigns);
  GeneratorMap extended;
  bool checked_inverse = !o.inverse_assigns.empty();
  if (checked_inverse) {
    GeneratorMap inverse = parse_assignments(o.inverse_assigns);
    extended = extend_automorphism(inner, o.rank, &inverse);
  } else {
    extended = extend_automorphism(inner, o.rank);
  }
  if (o.format == "json") {
    json m = json::object();
    for (auto& [i, img] : extended.assignments()) m[std::to_string(i)] = img.str();
    emit_json(json{{"map", m}, {"factor_rank", o.rank}, {"inverse_checked", checked_inverse}});
  } else {
    for (auto& [i, img] : extended.assignments())
      std::cout << "x" << i << " -> " << img.str() << "\n";
    std::cout << "identity on x" << o.rank << ", x" << o.rank + 1 << ", ...\n";
  }
  return exit_ok;
}

int run_abelianize(const Options& o) {
  AbelianVector v = abelianize(parse_word(o.word_text));
  if (o.format == "json") {
    json j = json::object();
    for (auto& [i, e] : v) j[std::to_string(i)] = e;
    emit_json(std::move(j));
  } else {
    for (auto& [i, e] : v) std::cout << "x" << i << ": " << e << "\n";
    if (v.empty()) std::cout << "zero\n";
  }
  return exit_ok;
}

int run_independent(const Options& o) {
  std::vector<AbelianVector> vectors;
  for (const Word& w : parse_word_list(o.words_text)) vectors.push_back(abelianize(w));
  bool ok = abelian_independent(vectors, o.modulus);
  if (o.format == "json")
    emit_json(json{{"independent", ok}, {"modulus", o.modulus}});
  else
    std::cout << (ok ? "V-independent" : "not V-independent") << "\n";
  return exit_ok;
}

int run_nil2(const Options& o) {
  Nil2Element e = nil2_normal_form(parse_word(o.word_text), o.rank);
  json exp = json::object();
  for (auto& [i, c] : e.exponents) exp[std::to_string(i)] = c;
  json comm = json::object();
  for (auto& [key, c] : e.commutators)
    comm[std::to_string(key.first) + "," + std::to_string(key.second)] = c;
  if (o.format == "json") {
    emit_json(json{{"exp", exp}, {"comm", comm}});
  } else {
    std::cout << "exp: " << exp.dump() << "\ncomm: " << comm.dump() << "\n";
  }
  return exit_ok;
}

int run_dyadic(const Options& o) {
  Dyadic d = dyadic_eval(parse_word(o.word_text));
  if (o.format == "json")
    emit_json(json{{"value", d.str()}});
  else
    std::cout << d.str() << "\n";
  return exit_ok;
}

int run_divisibility(const Options& o) {
  DivisibilityCertificate cert = divisibility_certificate(o.level);
  if (o.format == "json") {
    json j = divisibility_to_json(cert);
    j["verified"] = cert.verify();
    emit_json(std::move(j));
  } else {
    for (const DivisibilityEntry& e : cert.entries)
      std::cout << "j=" << e.level << " word=" << e.word.str() << " value=" << e.value.str()
                << "\n";
    std::cout << (cert.verify() ? "verified" : "NOT VERIFIED") << "\n";
  }
  return exit_ok;
}

void print_report_text(const CpReport& report) {
  for (const FactorCheck& c : report.checks)
    std::cout << "n=" << c.truncation << ": independence "
              << (c.independence ? "ok" : "FAIL") << ", factor certificate "
              << (c.certificate_ok ? "ok" : "FAIL") << "\n";
  switch (report.nonfreeness.kind) {
    case Nonfreeness::Kind::dyadic:
      std::cout << "nonfreeness: dyadic divisibility certificate, depth "
                << report.nonfreeness.dyadic->depth << "\n";
      break;
    case Nonfreeness::Kind::delegated:
      std::cout << "nonfreeness: delegated (" << report.nonfreeness.reference << ")\n";
      break;
    case Nonfreeness::Kind::absent:
      std::cout << "nonfreeness: absent\n";
      break;
  }
  std::cout << "note: " << nonfreeness_note(report.nonfreeness.kind) << "\n";
  std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
}

int run_cp_verify(const Options& o) {
  if (!o.verify_file.empty()) {
    std::ifstream in(o.verify_file);
    if (!in) throw validation_error("cannot open " + o.verify_file);
    CpReport stored = report_from_json(json::parse(in));
    CpReport fresh = reverify(stored);
    bool same = fresh.pass == stored.pass;
    if (o.format == "json")
      emit_json(json{{"stored_pass", stored.pass}, {"recomputed_pass", fresh.pass},
                     {"verdict_matches", same}});
    else
      std::cout << "stored: " << (stored.pass ? "pass" : "fail")
                << ", recomputed: " << (fresh.pass ? "pass" : "fail")
                << (same ? " (matches)" : " (MISMATCH)") << "\n";
    return same ? exit_ok : exit_invalid;
  }
  Witness witness = o.case_name == "custom"
                        ? build_witness(WitnessRecipe{o.pitch, o.arity,
                                                      parse_word(o.coding, 'z'), o.sign})
                        : build_witness(witness_case_from_name(o.case_name));
  CpReport report = verify_cp_conditions(witness, o.cp_truncation, o.depth);
  if (o.format == "json")
    emit_json(report_to_json(report));
  else
    print_report_text(report);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relfree: free-group and group-variety batch verifier"};
  app.require_subcommand(1);
  // --h is the coding-arity option on two subcommands, so help is long-only.
  app.set_help_flag("--help", "print help");

  Options o;
  auto add_sub = [&](const char* name, const char* desc) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    cmd->set_help_flag("--help", "print help");
    return cmd;
  };
  auto add_format = [&](CLI::App* cmd, bool allow_dot = false) {
    auto values = allow_dot ? std::vector<std::string>{"text", "json", "dot"}
                            : std::vector<std::string>{"text", "json"};
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember(values))
        ->capture_default_str();
  };
  auto add_gens = [&](CLI::App* cmd) {
    cmd->add_option("--gens", o.gens, "comma-separated generator words");
    cmd->add_option("--gens-file", o.gens_file, "file with one generator word per line");
  };

  CLI::App* reduce = add_sub("reduce", "freely reduce a word");
  reduce->add_option("word", o.word_text, "word to reduce")->required();
  add_format(reduce);

  CLI::App* fold_cmd = add_sub("fold", "fold the subgroup graph of generators");
  add_gens(fold_cmd);
  add_format(fold_cmd, true);

  CLI::App* member = add_sub("member", "test subgroup membership");
  add_gens(member);
  member->add_option("--word", o.word_text, "word to test")->required();
  add_format(member);

  CLI::App* basis = add_sub("basis", "spanning-tree basis of the subgroup");
  add_gens(basis);
  add_format(basis);

  CLI::App* express = add_sub("express", "rewrite a member in the tree basis");
  add_gens(express);
  express->add_option("--word", o.word_text, "word to rewrite")->required();
  add_format(express);

  CLI::App* support = add_sub("support-closure",
                                         "iterated support closure across bases");
  support->add_option("--seeds", o.seeds_text, "comma-separated seed words")->required();
  support->add_option("--basis", o.bases_text,
                      "comma-separated basis words (repeat per basis)")->required();
  add_format(support);

  CLI::App* primitive = add_sub("primitive", "Whitehead primitivity test");
  primitive->add_option("--word", o.word_text, "word to test")->required();
  primitive->add_option("--rank", o.rank, "ambient free group rank")->required();
  add_format(primitive);

  CLI::App* tri = add_sub("triangular-solve",
                                     "solve the iterated-coding system for a recipe");
  tri->add_option("--k", o.pitch, "iteration pitch");
  tri->add_option("--h", o.arity, "coding arity");
  tri->add_option("--w", o.coding, "coding word over z1..zh");
  tri->add_option("--sign", o.sign, "sign of the leading letter")->check(CLI::IsMember({1, -1}));
  tri->add_option("--n", o.truncation, "truncation index n");
  tri->add_option("--verify-file", o.verify_file, "re-verify a stored certificate");
  add_format(tri);

  CLI::App* ff = add_sub("free-factor", "basis-extension certificate search");
  add_gens(ff);
  ff->add_option("--rank", o.rank, "ambient rank")->required();
  add_format(ff);

  CLI::App* ext = add_sub("extend-aut",
                                     "extend a factor automorphism by the identity");
  ext->add_option("--assign", o.assigns, "assignment <index>=<word> (repeatable)")->required();
  ext->add_option("--inverse", o.inverse_assigns, "inverse witness assignment (repeatable)");
  ext->add_option("--factor-rank", o.rank, "rank of the free factor")->required();
  add_format(ext);

  CLI::App* ab = add_sub("abelianize", "exponent-sum vector of a word");
  ab->add_option("word", o.word_text, "word")->required();
  add_format(ab);

  CLI::App* indep = add_sub("independent",
                                       "V-independence of the abelianizations");
  indep->add_option("--words", o.words_text, "comma-separated words")->required();
  indep->add_option("--modulus", o.modulus, "0 for Z, or an exponent n >= 2");
  add_format(indep);

  CLI::App* nil2 = add_sub("nil2", "class-2 nilpotent collection normal form");
  nil2->add_option("--word", o.word_text, "word")->required();
  nil2->add_option("--rank", o.rank, "ambient rank")->required();
  add_format(nil2);

  CLI::App* dyadic = add_sub("dyadic", "dyadic quotient evaluation");
  dyadic->add_option("word", o.word_text, "word")->required();
  add_format(dyadic);

  CLI::App* cp = add_sub("cp-verify", "construction-principle report");
  cp->add_option("--case", o.case_name, "1, 2, 3 or custom")
      ->check(CLI::IsMember({"1", "2", "3", "custom"}));
  cp->add_option("--n", o.cp_truncation, "truncation N")->capture_default_str();
  cp->add_option("--depth", o.depth, "divisibility depth (default 2N)");
  cp->add_option("--k", o.pitch, "custom recipe pitch");
  cp->add_option("--h", o.arity, "custom recipe arity");
  cp->add_option("--w", o.coding, "custom recipe coding word over z1..zh");
  cp->add_option("--sign", o.sign, "custom recipe sign")->check(CLI::IsMember({1, -1}));
  cp->add_option("--verify-file", o.verify_file, "re-verify a stored report");
  add_format(cp);

  CLI::App* divis = add_sub("divisibility", "dyadic divisibility certificate");
  divis->add_option("--depth", o.level, "certificate depth")->required();
  add_format(divis);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (app.got_subcommand(reduce)) return run_reduce(o);
    if (app.got_subcommand(fold_cmd)) return run_fold(o);
    if (app.got_subcommand(member)) return run_member(o);
    if (app.got_subcommand(basis)) return run_basis(o);
    if (app.got_subcommand(express)) return run_express(o);
    if (app.got_subcommand(support)) return run_support_closure(o);
    if (app.got_subcommand(primitive)) return run_primitive(o);
    if (app.got_subcommand(tri)) return run_triangular_solve(o);
    if (app.got_subcommand(ff)) return run_free_factor(o);
    if (app.got_subcommand(ext)) return run_extend_aut(o);
    if (app.got_subcommand(ab)) return run_abelianize(o);
    if (app.got_subcommand(indep)) return run_independent(o);
    if (app.got_subcommand(nil2)) return run_nil2(o);
    if (app.got_subcommand(dyadic)) return run_dyadic(o);
    if (app.got_subcommand(cp)) return run_cp_verify(o);
    if (app.got_subcommand(divis)) return run_divisibility(o);
  } catch (const word_parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return exit_invalid;
  }
  return exit_usage;
}
