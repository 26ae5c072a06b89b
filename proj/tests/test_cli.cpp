#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(RELFREE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("reduce prints the reduced word") {
  RunResult r = run("reduce \"x0 x1 x1^-1\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "x0\n");
}

TEST_CASE("member prints verdicts with exit 0 either way") {
  RunResult non = run("member --gens \"x0 x1^-2, x1 x2^-2\" --word x0");
  CHECK(non.exit_code == 0);
  CHECK(non.out == "non-member\n");
  RunResult yes = run("member --gens \"x0 x1^-2, x1\" --word x0");
  CHECK(yes.exit_code == 0);
  CHECK(yes.out == "member\n");
}

TEST_CASE("malformed words exit 2 with a position") {
  RunResult r = run("reduce \"x0 x?\"");
  CHECK(r.exit_code == 2);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run("frobnicate").exit_code == 1);
  CHECK(run("member --no-such-flag 3").exit_code == 1);
  CHECK(run("").exit_code == 1);
}

TEST_CASE("dependent generators exit 2") {
  CHECK(run("free-factor --gens \"x0, x0\" --rank 2").exit_code == 2);
  CHECK(run("support-closure --seeds x0 --basis \"x0, x0\"").exit_code == 2);
}

TEST_CASE("cp-verify emits a passing JSON report") {
  RunResult r = run("cp-verify --case 1 --n 8 --format json");
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["pass"] == true);
  CHECK(j["N"] == 8);
  CHECK(j["checks"].size() == 8);
  CHECK(j["nonfreeness"]["kind"] == "dyadic");
}

TEST_CASE("cp-verify JSON artifacts re-verify from file") {
  RunResult r = run("cp-verify --case 2 --n 4 --format json");
  REQUIRE(r.exit_code == 0);
  std::string path = "cli_report_roundtrip.json";
  {
    std::ofstream out(path);
    out << r.out;
  }
  RunResult v = run("cp-verify --verify-file " + path);
  CHECK(v.exit_code == 0);
  CHECK(v.out.find("matches") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("triangular-solve artifacts re-verify from file") {
  RunResult r = run("triangular-solve --k 1 --h 1 --w z1^-2 --sign 1 --n 1 --format json");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["backward"]["1"] == "x1 x2^2");
  CHECK(j["backward"]["0"] == "x0 x1 x2^2 x1 x2^2");
  std::string path = "cli_cert_roundtrip.json";
  {
    std::ofstream out(path);
    out << r.out;
  }
  RunResult v = run("triangular-solve --verify-file " + path);
  CHECK(v.exit_code == 0);
  CHECK(v.out == "verified\n");
  std::remove(path.c_str());
}

TEST_CASE("output is byte-identical across repeated runs") {
  for (const char* args :
       {"cp-verify --case 1 --n 6 --format json", "fold --gens \"x0 x1, x1 x2\" --format dot",
        "basis --gens \"x0 x1^-2, x1 x2^-2\"", "divisibility --depth 12 --format json"}) {
    RunResult a = run(args);
    RunResult b = run(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
}

TEST_CASE("dot output draws the folded graph") {
  RunResult r = run("fold --gens \"x0 x1^-2, x1\" --format dot");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("digraph") != std::string::npos);
  CHECK(r.out.find("doublecircle") != std::string::npos);
}

TEST_CASE("express and primitive round out the text surface") {
  RunResult e = run("express --gens \"x0 x1^-2, x1 x2^-2\" "
                    "--word \"x0 x1^-2 x1 x2^-2 x1^2 x0^-1\"");
  CHECK(e.exit_code == 0);
  CHECK(e.out == "b0 b1 b0^-1\n");

  RunResult p = run("primitive --word \"x0 x1^-2\" --rank 2");
  CHECK(p.exit_code == 0);
  CHECK(p.out.find("primitive") == 0);

  RunResult np = run("primitive --word \"x0^2\" --rank 2");
  CHECK(np.exit_code == 0);
  CHECK(np.out.find("not primitive") == 0);
}

TEST_CASE("RELFREE_MAX_RANK lifts the rank bound") {
  RunResult blocked = run("primitive --word x0 --rank 5");
  CHECK(blocked.exit_code == 2);
  RunResult lifted = run("primitive --word x0 --rank 5 --format json");
  CHECK(lifted.exit_code == 2);
  setenv("RELFREE_MAX_RANK", "6", 1);
  RunResult ok = run("primitive --word x0 --rank 5");
  unsetenv("RELFREE_MAX_RANK");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("primitive") == 0);
}

TEST_CASE("support-closure prints per-basis supports") {
  RunResult r = run("support-closure --seeds x0 --basis \"x0 x1^-2, x1, x2\" "
                    "--basis \"x0, x1, x2\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "basis 0: x0 x1^-2 x1\nbasis 1: x0 x1\n");
}

TEST_CASE("independent reports V-independence") {
  RunResult z = run("independent --words \"x0 x1, x0 x1^-1\" --modulus 0");
  CHECK(z.out == "not V-independent\n");
  RunResult mod3 = run("independent --words \"x0 x1, x0 x1^-1\" --modulus 3");
  CHECK(mod3.out == "V-independent\n");
}

TEST_CASE("generator files accept one word per line with comments") {
  std::string path = "cli_gens.txt";
  {
    std::ofstream out(path);
    out << "# chain generators\n";
    out << "x0 x1^-2\n";
    out << "\n";
    out << "x1 x2^-2  # second\n";
  }
  RunResult r = run("fold --gens-file " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.out == "vertices: 4\nedges: 5\nrank: 2\n");
  CHECK(run("fold --gens x0 --gens-file " + path).exit_code == 2);
  std::remove(path.c_str());
}

TEST_CASE("fold of nothing is the trivial graph") {
  RunResult r = run("fold --gens \"\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "vertices: 1\nedges: 0\nrank: 0\n");
}

TEST_CASE("extend-aut validates and prints the extension") {
  RunResult ok = run("extend-aut --assign \"0=x0 x1^-2\" --inverse \"0=x0 x1^2\" "
                     "--factor-rank 2");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("x0 -> x0 x1^-2") != std::string::npos);
  CHECK(ok.out.find("identity on x2") != std::string::npos);
  CHECK(run("extend-aut --assign \"2=x2 x0\" --factor-rank 2").exit_code == 2);
  CHECK(run("extend-aut --assign \"0=x0 x1\" --inverse \"0=x0 x1\" --factor-rank 2")
            .exit_code == 2);
}

TEST_CASE("quotient evaluators on the command line") {
  CHECK(run("dyadic \"x0 x1^-2\"").out == "0/2^0\n");
  CHECK(run("dyadic x3").out == "1/2^3\n");
  RunResult ab = run("abelianize \"x0 x1^-2\" --format json");
  json j = json::parse(ab.out);
  CHECK(j["0"] == 1);
  CHECK(j["1"] == -2);
  RunResult n2 = run("nil2 --word \"x1 x0\" --rank 2 --format json");
  json k = json::parse(n2.out);
  CHECK(k["exp"]["0"] == 1);
  CHECK(k["comm"]["0,1"] == -1);
  CHECK(run("nil2 --word x5 --rank 2").exit_code == 2);
}
