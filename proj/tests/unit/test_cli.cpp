#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "lctrs/cli/app.hpp"
#include "lctrs/cli/parse.hpp"
#include "lctrs/cli/suites.hpp"

using namespace lctrs;

namespace {

std::string corpus(const std::string& name) { return std::string(LCTRS_CORPUS_DIR) + "/" + name; }

std::string read(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int status;
  std::string out;
  std::string err;
  std::string first_line() const { return out.substr(0, out.find('\n')); }
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int status = run(args, out, err);
  return {status, out.str(), err.str()};
}

/// Line and column of the ParseError raised for `text`.
std::pair<int, int> error_at(const std::string& text) {
  try {
    parse_lctrs(text);
  } catch (const ParseError& e) {
    return {e.line(), e.column()};
  }
  FAIL("no parse error for " << text);
  return {0, 0};
}

}  // namespace

TEST_CASE("parsing rules") {
  Lctrs r = parse_lctrs(
      "(theory Ints) (sort S) (fun f (Int Int) S) (fun c (Int Int) S)\n"
      "(rule (f x y) (c 4 x) :guard (<= y x))");
  REQUIRE(r.rules().size() == 1);
  CHECK(r.rules()[0].to_string() == "(f x y) -> (c 4 x) [(<= y x)]");
  CHECK(r.rules()[0].lhs.args()[0].var().sort == Sort::integer());

  Lctrs a = parse_lctrs("(theory Ints) (fun a () Int) (rule a x :guard (= x 0))");
  CHECK(a.rules()[0].to_string() == "a -> x [(= x 0)]");
  CHECK(a.rules()[0].rhs.var().sort == Sort::integer());
}

TEST_CASE("parse errors carry positions") {
  CHECK(error_at("(theory Ints)\n(rule 0 1)") == std::pair{2, 7});
  CHECK(error_at("(theory Ints) (sort S) (fun a () S)\n  (rule (k x) a)").first == 2);
  CHECK(error_at("(theory Ints) (sort S) (fun f (S S) S)\n(rule (f x x) x)\n(rule (f) x)").first == 3);
  CHECK(error_at("(theory Ints) (sort S) (fun f (S) S) (rule (f x) x :guard (+ 1 2))").first == 1);
  CHECK(error_at("(theory Ints) (sort S) (fun f (S) S) (rule (f x) x :guard (= y z))").first == 1);
  CHECK(error_at("(theory Ints) (sort S) (fun f (S) S) (rule (f x) x").first == 1);
  try {
    parse_lctrs("(theory Ints)\n(rule 0 1)");
  } catch (const ParseError& e) {
    CHECK(std::string(e.message()).find("root of the left-hand side") != std::string::npos);
  }
}

TEST_CASE("printing and parsing the corpus round-trips") {
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(LCTRS_CORPUS_DIR)) {
    if (entry.path().extension() != ".lctrs") continue;
    ++files;
    std::istringstream in(read(entry.path().string()));
    std::string body;
    for (std::string line; std::getline(in, line);)
      if (line.empty() || line[0] != ';') body += line + "\n";
    CHECK_MESSAGE(print_lctrs(parse_lctrs(body)) == body, entry.path().filename().string());
  }
  CHECK(files >= 8);
}

TEST_CASE("analyze verdicts") {
  auto adc = run_cli({"analyze", corpus("almost_dev_closed.lctrs")});
  CHECK(adc.status == kExitOk);
  CHECK(adc.first_line() == "YES");
  CHECK(adc.out.find("criterion: almost-development-closed\n") != std::string::npos);

  CHECK(run_cli({"analyze", corpus("parity.lctrs")}).first_line() == "MAYBE");
  CHECK(run_cli({"analyze", corpus("weakly_orthogonal.lctrs")}).out.find("criterion: weak-orthogonality") !=
        std::string::npos);
  CHECK(run_cli({"analyze", corpus("parallel_closed.lctrs")}).out.find("criterion: parallel-closed") !=
        std::string::npos);
  auto no = run_cli({"analyze", corpus("nonconfluent.lctrs")});
  CHECK(no.first_line() == "NO");
  CHECK(no.out.find("witness: ") != std::string::npos);

  auto only_pc = run_cli({"analyze", corpus("almost_dev_closed.lctrs"), "--criteria", "pc"});
  CHECK(only_pc.first_line() == "MAYBE");
  auto shallow = run_cli({"analyze", corpus("almost_dev_closed.lctrs"), "--depth", "0"});
  CHECK(shallow.first_line() == "MAYBE");
}

TEST_CASE("json reports") {
  auto ccp = run_cli({"ccp", corpus("weakly_orthogonal.lctrs"), "--json"});
  REQUIRE(ccp.status == kExitOk);
  auto j = nlohmann::json::parse(ccp.out);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  CHECK(j[0]["constraint"] == "(and (= x 0) (= x' 0))");
  CHECK(j[0]["left"] == "x");
  CHECK(j[0]["right"] == "x'");

  auto an = nlohmann::json::parse(run_cli({"analyze", corpus("nonconfluent.lctrs"), "--json"}).out);
  for (const char* key : {"verdict", "criteria", "ccps", "cpcps", "witnesses"}) CHECK(an.contains(key));
  CHECK(an["verdict"] == "NO");
  CHECK(an["criteria"].size() == 3);
  CHECK(an["witnesses"].size() == 1);

  auto yes = nlohmann::json::parse(run_cli({"analyze", corpus("parallel_closed.lctrs"), "--json"}).out);
  CHECK(yes["verdict"] == "YES");
  CHECK(yes["criterion"] == "parallel-closed");
  CHECK(yes["witnesses"].empty());
}

TEST_CASE("other subcommands") {
  auto cpcp = run_cli({"cpcp", corpus("parallel_closed.lctrs")});
  CHECK(cpcp.out.find("(f (g (+ 1 1) (+ 3 1))) ≈ (g 4 4) [true] P={1}") != std::string::npos);

  auto ground = run_cli({"ground", corpus("parity.lctrs"), "--values", "-3..3"});
  CHECK(ground.status == kExitOk);
  CHECK(ground.out.find("  (g 1) ≈ (h 1)  joinable\n") != std::string::npos);
  CHECK(ground.out.find("almost development closed: yes") != std::string::npos);

  auto gen = run_cli({"gen-pcp", "1,101;10,00;011,11"});
  REQUIRE(gen.status == kExitOk);
  CHECK(gen.out.find("; solution 1323 encoded as 109") != std::string::npos);
  Lctrs rp = parse_lctrs(gen.out);
  CHECK(rp.rules().size() == 18);
  CHECK(gen.out.find(read(corpus("pcp.lctrs")).substr(read(corpus("pcp.lctrs")).find("(theory"))) !=
        std::string::npos);

  auto check = run_cli({"check", corpus("weakly_orthogonal.lctrs"), "--samples", "50"});
  CHECK(check.first_line() == "PASS");
}

TEST_CASE("input errors exit with status 1") {
  CHECK(run_cli({}).status == kExitInputError);
  CHECK(run_cli({"analyze"}).status == kExitInputError);
  CHECK(run_cli({"analyze", "/nonexistent.lctrs"}).status == kExitInputError);
  CHECK(run_cli({"analyze", corpus("parity.lctrs"), "--criteria", "wo,xyz"}).status == kExitInputError);
  CHECK(run_cli({"analyze", corpus("parity.lctrs"), "--values", "1-2"}).status == kExitInputError);
  CHECK(run_cli({"gen-pcp", "1,1;0,0"}).status == kExitInputError);
  CHECK(run_cli({"gen-pcp", "1,2"}).status == kExitInputError);

  auto path = std::filesystem::temp_directory_path() / "lctrs_bad_rule.lctrs";
  std::ofstream(path) << "(theory Ints)\n(rule 0 1)\n";
  auto bad = run_cli({"analyze", path.string()});
  CHECK(bad.status == kExitInputError);
  CHECK(bad.err.find(":2:7:") != std::string::npos);
  std::filesystem::remove(path);

  CHECK(run_cli({"--help"}).status == kExitOk);
}

TEST_CASE("property suites") {
  CHECK(unification_suite(200).ok());
  CHECK(interpret_suite(100).ok());
  CHECK(encoding_suite(3, 300).ok());
  auto none = solver_agreement_suite("", 10);
  CHECK_FALSE(none.ok());
}
