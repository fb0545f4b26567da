#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lctrs/analysis/analysis.hpp"
#include "lctrs/cli/parse.hpp"
#include "lctrs/core/theory.hpp"
#include "lctrs/logic/interpret.hpp"

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

std::vector<CCPRecord> user_ccps(const Lctrs& r) {
  std::vector<CCPRecord> out;
  for (auto& c : ccps(r, solver()))
    if (!c.calculation) out.push_back(c);
  return out;
}

std::vector<CPCPRecord> user_cpcps(const Lctrs& r) {
  std::vector<CPCPRecord> out;
  for (auto& c : cpcps(r, solver()))
    if (!c.calculation) out.push_back(c);
  return out;
}

bool equivalent(const Term& a, const Term& b) {
  return solver().is_valid(mk_implies(a, b)).valid() && solver().is_valid(mk_implies(b, a)).valid();
}

Term pair_term(const Signature& sig, const std::string& s, const std::string& t) {
  return make_pair(parse_cterm(sig, s).term, parse_cterm(sig, t).term);
}

}  // namespace

TEST_CASE("critical pair of a rule with a fresh right-hand side variable") {
  Lctrs r = load("weakly_orthogonal.lctrs");
  auto cs = user_ccps(r);
  REQUIRE(cs.size() == 1);
  CHECK(show(cs[0].pair().term) == "x ≈ x'");
  CHECK(cs[0].constraint.to_string() == "(and (= x 0) (= x' 0))");
  CHECK(cs[0].overlay);
  CHECK(is_trivial(cs[0].pair(), solver()) == Tri::Yes);
  CHECK(is_weakly_orthogonal(r, solver()) == Tri::Yes);
}

TEST_CASE("calculation self-overlaps are trivial") {
  Lctrs r = load("weakly_orthogonal.lctrs");
  std::size_t n = 0;
  for (const auto& c : ccps(r, solver()))
    if (c.calculation) {
      ++n;
      CHECK(c.overlay);
      CHECK(is_trivial(c.pair(), solver()) == Tri::Yes);
    }
  CHECK(n == r.calc().size());
}

TEST_CASE("overlay of the f rules") {
  Lctrs r = load("almost_dev_closed.lctrs");
  const auto& sig = r.signature();
  auto cs = user_ccps(r);
  REQUIRE(cs.size() == 2);
  Term phi = parse_cterm(sig, "(f x y)", "(and (= x y) (= y 2))").constraint;
  for (const auto& c : cs) {
    CHECK(c.overlay);
    VarSet vs = vars(c.constraint);
    REQUIRE(vs.size() == 2);
    // Rename the pair's variables to x, y to compare constraints.
    Substitution to_xy;
    for (const auto& v : vars(c.source)) to_xy.bind(v, Term::variable(Var{v.name.substr(0, 1), 0, v.sort}));
    CHECK(equivalent(to_xy.apply(c.constraint), phi));
  }
  CHECK(cs[0].pair().term == pair_term(sig, "(h (g y (* 2 2)))", "(c 4 x)"));
  CHECK(cs[1].pair().term == pair_term(sig, "(c 4 x)", "(h (g y (* 2 2)))"));
  CHECK(is_left_linear(r));
  CHECK(is_weakly_orthogonal(r, solver()) == Tri::No);
}

TEST_CASE("almost development closedness of the f/g/h/c system") {
  Lctrs r = load("almost_dev_closed.lctrs");
  const auto& sig = r.signature();
  ClosingLimits lim;
  lim.depth = 3;
  auto cs = user_ccps(r);
  REQUIRE(cs.size() == 2);
  Closing a = dev_closed_check(cs[0], r, solver(), lim);
  REQUIRE(a.status == Closedness::Closed);
  REQUIRE(a.sequence.size() == 3);
  CTerm mid{pair_term(sig, "(g 4 2)", "(c 4 x)"), parse_cterm(sig, "x", "(= x 2)", Sort::integer()).constraint};
  CHECK(equiv(a.sequence[1], mid, solver()) == Tri::Yes);
  CHECK(equiv(a.sequence[2], CTerm{pair_term(sig, "(g 4 2)", "(g 4 2)"), bool_term(true)}, solver()) == Tri::Yes);

  Closing b = dev_closed_check(cs[1], r, solver(), lim);
  REQUIRE(b.status == Closedness::Closed);
  CTerm mid2{pair_term(sig, "(g 4 2)", "(h (g y (* 2 2)))"),
             parse_cterm(sig, "y", "(= y 2)", Sort::integer()).constraint};
  CHECK(equiv(b.sequence[1], mid2, solver()) == Tri::Yes);
  CHECK(b.sequence.size() <= 5);
  CHECK(is_trivial(b.sequence.back(), solver()) == Tri::Yes);

  auto res = analyze(r, solver());
  CHECK(res.verdict.kind == VerdictKind3::Yes);
  CHECK(res.verdict.criterion == Criterion::AlmostDevelopmentClosed);
}

TEST_CASE("the parity system is not almost development closed") {
  Lctrs r = load("parity.lctrs");
  const auto& sig = r.signature();
  auto cs = user_ccps(r);
  REQUIRE(cs.size() == 2);
  bool seen = false;
  for (const auto& c : cs) {
    CHECK(is_trivial(c.pair(), solver()) == Tri::No);
    Closing cl = dev_closed_check(c, r, solver());
    CHECK(cl.status == Closedness::NotClosed);
    CHECK(parallel_closed_1(c, r, solver()).status == Closedness::NotClosed);
    if (c.pair().term == pair_term(sig, "(g x)", "(h x)")) {
      seen = true;
      CHECK(equivalent(c.constraint, parse_cterm(sig, "(g x)", "(and (<= 1 x) (<= x 2))").constraint));
      CHECK(cstep_tilde(c.pair(), r.rc(), solver()).empty());
    }
  }
  CHECK(seen);
  auto res = analyze(r, solver());
  CHECK(res.verdict.kind == VerdictKind3::Maybe);
}

TEST_CASE("parallel closedness of the f(a) system") {
  Lctrs r = load("parallel_closed.lctrs");
  const auto& sig = r.signature();
  auto ps = user_cpcps(r);
  const CPCPRecord* peak = nullptr;
  for (const auto& c : ps)
    if (c.pair().term == pair_term(sig, "(f (g (+ 1 1) (+ 3 1)))", "(g 4 4)")) peak = &c;
  REQUIRE(peak);
  CHECK(is_true(peak->constraint));
  CHECK(to_string(peak->positions) == "{1}");
  Closing cl = parallel_closed_2(*peak, r, solver());
  REQUIRE(cl.status == Closedness::Closed);
  CHECK(to_string(cl.q) == "{2}");
  CHECK(tvar(peak->source, peak->constraint, peak->positions).empty());

  for (const auto& c : user_ccps(r)) CHECK(parallel_closed_1(c, r, solver()).status == Closedness::Closed);
  auto res = analyze(r, solver());
  CHECK(res.verdict.kind == VerdictKind3::Yes);
  CHECK(res.verdict.criterion == Criterion::ParallelClosed);
}

TEST_CASE("the variable condition of 2-parallel closedness") {
  Lctrs r = load("variable_condition.lctrs");
  const auto& sig = r.signature();
  const CPCPRecord* peak = nullptr;
  auto ps = user_cpcps(r);
  for (const auto& c : ps)
    if (c.pair().term == pair_term(sig, "(f a y)", "(f b y)")) peak = &c;
  REQUIRE(peak);
  CHECK(to_string(peak->positions) == "{1}");
  Closing cl = parallel_closed_2(*peak, r, solver());
  CHECK(cl.status == Closedness::NotClosed);
  CHECK(cl.reason.find("{y} ⊄ {x}") != std::string::npos);
}

TEST_CASE("tvar") {
  Lctrs r = load("variable_condition.lctrs");
  Term t = parse_cterm(r.signature(), "(f (g x) y)").term;
  CHECK(tvar(t, bool_term(true), {Position({1})}).size() == 1);
  CHECK(tvar(t, bool_term(true), {}).empty());
  Lctrs adc = load("almost_dev_closed.lctrs");
  CTerm s = parse_cterm(adc.signature(), "(g y (* 2 2))", "(and (= x y) (= y 2))");
  CHECK(tvar(s.term, s.constraint, {Position()}).empty());
}

TEST_CASE("left-linearity counts only non-logical variables") {
  auto r1 = parse_lctrs("(theory Ints) (fun f (Int Int) Int) (rule (f x x) x)");
  CHECK_FALSE(is_left_linear(r1));
  auto r2 = parse_lctrs("(theory Ints) (fun f (Int Int) Int) (rule (f x x) x :guard (> x 0))");
  CHECK(is_left_linear(r2));
  auto empty = parse_lctrs("(theory Ints)");
  CHECK(is_weakly_orthogonal(empty, solver()) == Tri::Yes);
}

TEST_CASE("triviality") {
  Signature ints;
  CTerm a = parse_cterm(ints, "(+ x 1)", "(= x 3)");
  Term p = make_pair(a.term, int_term(4));
  // 3 + 1 and 4 are different terms.
  CHECK(is_trivial(CTerm{p, a.constraint}, solver()) == Tri::No);
  CHECK(is_trivial(CTerm{p, bool_term(false)}, solver()) == Tri::Yes);
  CTerm b = parse_cterm(ints, "x", "(and (= x 0) (= y 0))");
  CHECK(is_trivial(CTerm{make_pair(b.term, Term::variable(Var{"y", 0, Sort::integer()})), b.constraint},
                   solver()) == Tri::Yes);
}

TEST_CASE("non-confluence witness") {
  Lctrs r = load("nonconfluent.lctrs");
  auto res = analyze(r, solver());
  REQUIRE(res.verdict.kind == VerdictKind3::No);
  const auto& w = *res.verdict.witness;
  CHECK(w.left != w.right);
  CHECK(w.left_normal_forms.size() == 1);
  CHECK(w.right_normal_forms.size() == 1);
  CHECK(w.left_normal_forms != w.right_normal_forms);
}

TEST_CASE("critical pair instances realize peaks") {
  for (const char* file : {"almost_dev_closed.lctrs", "parity.lctrs", "parallel_closed.lctrs",
                           "nonconfluent.lctrs", "variable_condition.lctrs"}) {
    Lctrs r = load(file);
    ValueDomain d = default_domain(r);
    for (const auto& c : ccps(r, solver())) {
      for (const auto& g : solver().models(c.constraint, 10)) {
        Term src = substitute_values(c.source, g);
        auto succ = plain_successors(src, r.rc(), d, solver());
        Term s = substitute_values(c.left, g), t = substitute_values(c.right, g);
        bool left = std::any_of(succ.items.begin(), succ.items.end(), [&](const Successor& x) {
          return x.term == s && x.step.position == c.overlap.position;
        });
        bool right = std::any_of(succ.items.begin(), succ.items.end(), [&](const Successor& x) {
          return x.term == t && x.step.position.is_root();
        });
        CHECK_MESSAGE(left, c.to_string());
        CHECK_MESSAGE(right, c.to_string());
      }
    }
    for (const auto& c : cpcps(r, solver())) {
      for (const auto& g : solver().models(c.constraint, 10)) {
        Term src = substitute_values(c.source, g);
        Term s = substitute_values(c.left, g), t = substitute_values(c.right, g);
        auto par = parallel_successors(src, r.rc(), d, solver());
        CHECK(std::any_of(par.begin(), par.end(), [&](const ParallelResult& x) {
          return x.term == s && x.positions == c.positions;
        }));
        auto root = plain_root_matches(src, r.rc(), d, solver());
        CHECK(std::any_of(root.begin(), root.end(),
                          [&](const RuleMatch& m) { return m.sigma.apply(m.rule.rhs) == t; }));
      }
    }
  }
}

TEST_CASE("closings hold on ground instances") {
  Lctrs r = load("almost_dev_closed.lctrs");
  ValueDomain d = default_domain(r);
  for (const auto& c : user_ccps(r)) {
    Closing cl = dev_closed_check(c, r, solver());
    REQUIRE(cl.status == Closedness::Closed);
    for (const auto& g : solver().models(c.constraint, 5)) {
      Term s = substitute_values(c.left, g), t = substitute_values(c.right, g);
      auto ms = multi_successors(s, r.rc(), d, solver());
      auto rt = reach(t, r.rc(), d, solver(), 6, 500);
      CHECK(std::any_of(ms.begin(), ms.end(), [&](const ParallelResult& m) { return rt.contains(m.term); }));
    }
  }
}

TEST_CASE("analysis is deterministic across thread counts") {
  Lctrs r = load("almost_dev_closed.lctrs");
  AnalysisConfig one;
  one.threads = 1;
  AnalysisConfig many;
  many.threads = 8;
  auto a = analyze(r, solver(), one);
  auto b = analyze(r, solver(), many);
  REQUIRE(a.criteria.size() == b.criteria.size());
  for (std::size_t i = 0; i < a.criteria.size(); ++i) {
    CHECK(a.criteria[i].holds == b.criteria[i].holds);
    CHECK(a.criteria[i].reasons == b.criteria[i].reasons);
  }
  CHECK(a.verdict.to_string() == b.verdict.to_string());
}
