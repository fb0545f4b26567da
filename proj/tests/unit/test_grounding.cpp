#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "lctrs/cli/parse.hpp"
#include "lctrs/core/theory.hpp"
#include "lctrs/grounding/grounding.hpp"

using namespace lctrs;

namespace {

Lctrs load(const std::string& name) {
  std::ifstream in(std::string(LCTRS_CORPUS_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_lctrs(ss.str());
}

const Solver& solver() {
  static Solver s;
  return s;
}

Term term(const Lctrs& r, const std::string& s) { return parse_cterm(r.signature(), s).term; }

std::set<std::string> rule_strings(const std::vector<Rule>& rules) {
  std::set<std::string> out;
  for (const auto& r : rules) out.insert(r.lhs.to_string() + " -> " + r.rhs.to_string());
  return out;
}

std::set<std::string> cp_strings(const std::vector<PlainCP>& cps) {
  std::set<std::string> out;
  for (const auto& c : cps) out.insert(c.left.to_string() + " = " + c.right.to_string());
  return out;
}

}  // namespace

TEST_CASE("fragment of a rule with a fresh right-hand side variable") {
  Lctrs r = load("weakly_orthogonal.lctrs");
  for (auto d : {ValueDomain::interval(0, 0), ValueDomain::interval(-4, 4)}) {
    GroundFragment f = ground_fragment(r, d);
    CHECK(rule_strings(f.rules) == std::set<std::string>{"a -> 0"});
    CHECK(trs_cps(f).empty());
    CHECK(trs_pcps(f).empty());
    auto rep = trs_closedness_check(f);
    CHECK(rep.almost_development_closed);
    CHECK(rep.parallel_closed());
  }
}

TEST_CASE("fragment of the parity system") {
  Lctrs r = load("parity.lctrs");
  GroundFragment f = ground_fragment(r, ValueDomain::interval(-3, 3));
  std::set<std::string> expected{"(f x) -> (g x)", "(f 1) -> (h 1)", "(f 2) -> (h 2)"};
  for (int n = -3; n <= 3; ++n)
    expected.insert("(g " + std::to_string(n) + ") -> (h " + (n % 2 == 0 ? "2" : "1") + ")");
  CHECK(rule_strings(f.rules) == expected);
  CHECK(f.rules.size() == f.origin.size());
  CHECK(std::is_sorted(f.origin.begin(), f.origin.end()));

  auto cps = cp_strings(trs_cps(f));
  CHECK(cps == std::set<std::string>{"(g 1) = (h 1)", "(h 1) = (g 1)", "(g 2) = (h 2)", "(h 2) = (g 2)"});

  auto rep = trs_closedness_check(f);
  CHECK(rep.almost_development_closed);
  CHECK(rep.failures.empty());

  auto j = joinable(f, term(r, "(g 1)"), term(r, "(h 1)"), 4);
  CHECK(j.kind == JoinKind::Joinable);
  CHECK(j.left_path.size() == 2);
  CHECK(j.right_path.size() == 1);
}

TEST_CASE("joinability") {
  Lctrs r = load("parity.lctrs");
  GroundFragment f = ground_fragment(r, ValueDomain::interval(-3, 3));
  Term t = term(r, "(f 1)");
  auto j = joinable(f, t, t, 0);
  CHECK(j.kind == JoinKind::Joinable);
  CHECK(j.left_path == std::vector<Term>{t});
  CHECK(joinable(f, term(r, "(h 1)"), term(r, "(h 2)"), 4).kind == JoinKind::DisjointNormalForms);
  CHECK(joinable(f, term(r, "(f 1)"), term(r, "(h 1)"), 0).kind == JoinKind::NotWithinBound);

  Lctrs nc = load("nonconfluent.lctrs");
  GroundFragment g = ground_fragment(nc, default_domain(nc));
  auto pairs = trs_cps(g);
  REQUIRE_FALSE(pairs.empty());
  bool disjoint = std::any_of(pairs.begin(), pairs.end(), [&](const PlainCP& cp) {
    return joinable(g, cp.left, cp.right, 6).kind == JoinKind::DisjointNormalForms;
  });
  CHECK(disjoint);
}

TEST_CASE("fragment of the parallel closed system") {
  Lctrs r = load("parallel_closed.lctrs");
  GroundFragment f = ground_fragment(r, default_domain(r));
  auto pcps = trs_pcps(f);
  bool seen = std::any_of(pcps.begin(), pcps.end(), [&](const PlainCP& c) {
    return c.left == term(r, "(f (g (+ 1 1) (+ 3 1)))") && c.right == term(r, "(g 4 4)") &&
           to_string(c.positions) == "{1}";
  });
  CHECK(seen);
  auto rep = trs_closedness_check(f);
  CHECK(rep.parallel_closed());
  CHECK_FALSE(rep.almost_development_closed);
}

TEST_CASE("the variable condition on the fragment") {
  Lctrs r = load("variable_condition.lctrs");
  GroundFragment f = ground_fragment(r, default_domain(r));
  auto cps = trs_cps(f);
  auto pcps = trs_pcps(f);
  REQUIRE_FALSE(pcps.empty());
  for (const auto& cp : cps) CHECK(joinable(f, cp.left, cp.right, 4).kind == JoinKind::Joinable);
  for (const auto& cp : pcps) CHECK(joinable(f, cp.left, cp.right, 4).kind == JoinKind::Joinable);
}

TEST_CASE("fragments grow with the domain") {
  for (const char* file : {"parity.lctrs", "parallel_closed.lctrs", "almost_dev_closed.lctrs", "weakly_orthogonal.lctrs"}) {
    Lctrs r = load(file);
    GroundFragment small = ground_fragment(r, ValueDomain::interval(-2, 2));
    GroundFragment large = ground_fragment(r, ValueDomain::interval(-4, 4));
    auto a = rule_strings(small.all());
    auto b = rule_strings(large.all());
    CHECK_MESSAGE(std::includes(b.begin(), b.end(), a.begin(), a.end()), file);
    CHECK(a.size() < b.size());
  }
}

TEST_CASE("calculation instances") {
  Lctrs r = load("parity.lctrs");
  GroundFragment f = ground_fragment(r, ValueDomain::interval(0, 1));
  auto calc = rule_strings(f.calc);
  CHECK(calc.count("(+ 1 1) -> 2"));
  CHECK(calc.count("(* 0 1) -> 0"));
  CHECK(calc.count("(<= 1 0) -> false"));
  CHECK(calc.count("(not true) -> false"));
  for (const auto& c : f.calc) CHECK(c.rhs.is_value());
}

TEST_CASE("step equivalence on examples") {
  Lctrs ex4 = load("weakly_orthogonal.lctrs");
  ValueDomain d = ValueDomain::interval(-4, 4);
  TrsStepper s4(ground_fragment(ex4, d).all());
  CHECK(s4.successors(term(ex4, "a")) == std::vector<Term>{int_term(0)});
  CHECK(s4.successors(parse_cterm(ex4.signature(), "(+ 1 1)").term) == std::vector<Term>{int_term(2)});

  Lctrs par = load("parity.lctrs");
  TrsStepper sp(ground_fragment(par, d).all());
  auto succ = sp.successors(term(par, "(f 2)"));
  std::set<Term> got(succ.begin(), succ.end());
  CHECK(got == std::set<Term>{term(par, "(g 2)"), term(par, "(h 2)")});

  for (const char* file : {"weakly_orthogonal.lctrs", "parity.lctrs"}) {
    auto rep = check_step_equivalence(load(file), d, solver(), 100);
    CHECK(rep.samples == 100);
    for (const auto& v : rep.violations) FAIL_CHECK(v);
  }
}

TEST_CASE("critical pair correspondence on examples") {
  ValueDomain d = ValueDomain::interval(-4, 4);
  for (const char* file : {"weakly_orthogonal.lctrs", "parity.lctrs", "parallel_closed.lctrs"}) {
    auto rep = check_cp_correspondence(load(file), d, solver(), 100);
    for (const auto& v : rep.violations) FAIL_CHECK(file << ": " << v);
  }
  auto ex4 = check_cp_correspondence(load("weakly_orthogonal.lctrs"), d, solver());
  CHECK(ex4.fragment_cps == 0);
  auto parity = check_cp_correspondence(load("parity.lctrs"), d, solver());
  CHECK(parity.fragment_cps == 4);
}

TEST_CASE("parallel and multi steps of the fragment") {
  Lctrs r = load("parallel_closed.lctrs");
  TrsStepper s(ground_fragment(r, default_domain(r)).all());
  auto ps = s.parallel(term(r, "(f (g (+ 1 1) (+ 3 1)))"));
  bool both = std::any_of(ps.begin(), ps.end(), [&](const ParallelResult& p) {
    return p.term == term(r, "(f (g 2 4))") && to_string(p.positions) == "{1.1,1.2}";
  });
  CHECK(both);
  auto ms = s.multi(term(r, "(f a)"));
  CHECK(std::any_of(ms.begin(), ms.end(), [&](const ParallelResult& p) { return p.term == term(r, "(g 4 4)"); }));
}
