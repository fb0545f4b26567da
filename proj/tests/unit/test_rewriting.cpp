#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lctrs/cli/parse.hpp"
#include "lctrs/core/theory.hpp"
#include "lctrs/logic/interpret.hpp"
#include "lctrs/rewriting/steps.hpp"

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

bool has_term(const std::vector<Successor>& xs, const Term& t) {
  return std::any_of(xs.begin(), xs.end(), [&](const Successor& s) { return s.term == t; });
}

bool has_equiv(const std::vector<CSuccessor>& xs, const CTerm& t) {
  return std::any_of(xs.begin(), xs.end(),
                     [&](const CSuccessor& s) { return equiv(s.result, t, solver()) == Tri::Yes; });
}

bool has_equiv(const std::vector<CParallelResult>& xs, const CTerm& t) {
  return std::any_of(xs.begin(), xs.end(),
                     [&](const CParallelResult& s) { return equiv(s.result, t, solver()) == Tri::Yes; });
}

Term pair_of(const Signature& sig, const std::string& s, const std::string& t, const std::string& c,
             Term* constraint) {
  CTerm l = parse_cterm(sig, s, c);
  CTerm r = parse_cterm(sig, t, c);
  *constraint = l.constraint;
  return make_pair(l.term, r.term);
}

/// A random ground term over the signature with leaves from D.
Term random_ground(const Signature& sig, const Sort& sort, const ValueDomain& d, std::mt19937& rng, int depth) {
  std::vector<SymbolRef> cands;
  for (const auto& f : sig.term_symbols())
    if (f->result_sort == sort &&
        (depth > 0 || std::all_of(f->arg_sorts.begin(), f->arg_sorts.end(), [](const Sort& a) { return a.is_theory(); })))
      cands.push_back(f);
  if (sort == Sort::integer() && depth > 0)
    for (const auto& f : sig.theory_symbols())
      if (f->result_sort == sort) cands.push_back(f);
  auto vals = d.of(sort);
  if (!vals.empty() && (cands.empty() || rng() % 3 == 0)) return Term::value(vals[rng() % vals.size()]);
  REQUIRE(!cands.empty());
  const auto& f = cands[rng() % cands.size()];
  std::vector<Term> args;
  for (const auto& s : f->arg_sorts) args.push_back(random_ground(sig, s, d, rng, depth - 1));
  return Term::apply(f, args);
}

}  // namespace

TEST_CASE("calculation rules") {
  Signature sig;
  auto calc = calc_rules(sig);
  CHECK(calc.size() == 16);
  const Rule* plus = nullptr;
  for (const auto& r : calc)
    if (r.lhs.symbol().name == "+") plus = &r;
  REQUIRE(plus);
  CHECK(plus->calculation);
  CHECK(plus->rhs.is_var());
  CHECK(plus->guard == mk_eq(plus->rhs, plus->lhs));
  CHECK(plus->to_string() == "(+ x1 x2) -> y [(= y (+ x1 x2))]");
  CHECK(logical_vars(*plus).size() == 3);
  CHECK(extra_vars(*plus).empty());
}

TEST_CASE("rule variable classes") {
  Lctrs r = load("parity.lctrs");
  const Rule& even = r.rules()[2];
  CHECK(logical_vars(even).size() == 2);
  CHECK(extra_vars(even).empty());
  Lctrs w = load("weakly_orthogonal.lctrs");
  CHECK(extra_vars(w.rules()[0]).empty());
  CHECK(logical_vars(w.rules()[0]).size() == 1);
  Rule fresh = make_rule(w.rules()[0].lhs, w.rules()[0].rhs, bool_term(true));
  CHECK(extra_vars(fresh).size() == 1);
  CHECK(extra_var_constraint(fresh).to_string() == "(= x x)");
}

TEST_CASE("respects") {
  Lctrs w = load("weakly_orthogonal.lctrs");
  const Rule& rho = w.rules()[0];
  Var x{"x", 0, Sort::integer()};
  CHECK(respects(Substitution{{x, int_term(0)}}, rho));
  CHECK_FALSE(respects(Substitution{{x, int_term(1)}}, rho));
  CHECK_FALSE(respects(Substitution{{x, Term::variable(Var{"y", 0, Sort::integer()})}}, rho));
}

TEST_CASE("plain successors") {
  ValueDomain d = ValueDomain::interval(-4, 4);
  Lctrs pc = load("parallel_closed.lctrs");
  const auto& sig = pc.signature();
  auto fa = plain_successors(parse_cterm(sig, "(f a)").term, pc.rc(), d, solver());
  CHECK(has_term(fa.items, parse_cterm(sig, "(g 4 4)").term));
  CHECK(has_term(fa.items, parse_cterm(sig, "(f (g (+ 1 1) (+ 3 1)))").term));
  CHECK(fa.items.size() == 2);

  Lctrs w = load("weakly_orthogonal.lctrs");
  auto a = plain_successors(parse_cterm(w.signature(), "a").term, w.rc(), d, solver());
  REQUIRE(a.items.size() == 1);
  CHECK(a.items[0].term == int_term(0));
  CHECK(a.complete);

  auto calc = plain_successors(mk_add(int_term(1), int_term(1)), w.rc(), d, solver());
  REQUIRE(calc.items.size() == 1);
  CHECK(calc.items[0].term == int_term(2));

  // The guard fixes z from x exactly, also outside D.
  auto g = plain_successors(parse_cterm(sig, "(g 40 4)").term, pc.rc(), d, solver());
  CHECK(has_term(g.items, parse_cterm(sig, "(f (g 38 4))").term));
  CHECK(g.complete);
}

TEST_CASE("constrained steps") {
  Lctrs par = load("parity.lctrs");
  CTerm gx = parse_cterm(par.signature(), "(g x)", "(and (<= 1 x) (<= x 2))");
  CHECK(cstep(gx, par.rc(), solver()).empty());
  CHECK(cstep_tilde(gx, par.rc(), solver()).empty());

  Lctrs adc = load("almost_dev_closed.lctrs");
  CTerm c4x = parse_cterm(adc.signature(), "(c 4 x)", "(= x 2)");
  auto steps = cstep(c4x, adc.rc(), solver());
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].result.term == parse_cterm(adc.signature(), "(g 4 2)").term);
  CHECK(steps[0].result.constraint == c4x.constraint);
  CHECK(steps[0].step.position == Position());
}

TEST_CASE("calculation after a definitional extension") {
  Signature sig;
  CTerm s = parse_cterm(sig, "(+ x 1)", "(> x 3)");
  // Without a ~-step the calculation has no value or variable for y.
  CHECK(cstep(s, calc_rules(sig), solver()).empty());
  auto tilde = cstep_tilde(s, calc_rules(sig), solver());
  CHECK(has_equiv(tilde, parse_cterm(sig, "z", "(and (= z (+ x 1)) (> x 3))")));

  auto ext = equiv_extensions(s);
  CHECK(std::any_of(ext.begin(), ext.end(), [&](const CTerm& e) {
    return equiv(e, parse_cterm(sig, "(+ x 1)", "(and (= z (+ x 1)) (> x 3))"), solver()) == Tri::Yes;
  }));
  for (const auto& e : ext) CHECK(equiv(e, s, solver()) == Tri::Yes);
}

TEST_CASE("definitional extension of a ground theory subterm") {
  Lctrs adc = load("almost_dev_closed.lctrs");
  CTerm s = parse_cterm(adc.signature(), "(g y (* 2 2))", "(= y 2)");
  auto ext = equiv_extensions(s);
  CHECK(std::any_of(ext.begin(), ext.end(), [&](const CTerm& e) {
    return equiv(e, parse_cterm(adc.signature(), "(g y (* 2 2))", "(and (= w (* 2 2)) (= y 2))"), solver()) ==
           Tri::Yes;
  }));
  Lctrs pr = load("projection.lctrs");
  CTerm a = parse_cterm(pr.signature(), "(f u v)");
  CHECK(equiv_extensions(a).empty());
}

TEST_CASE("non-logical variables are tracked") {
  Lctrs pr = load("projection.lctrs");
  const auto& sig = pr.signature();
  CTerm fxy = parse_cterm(sig, "(f x y)");
  auto next = cstep_tilde(fxy, pr.rc(), solver());
  CHECK(has_equiv(next, parse_cterm(sig, "x", "true", Sort("S"))));
  CHECK_FALSE(has_equiv(next, parse_cterm(sig, "y", "true", Sort("S"))));
}

TEST_CASE("equivalence") {
  Lctrs pr = load("projection.lctrs");
  const auto& sig = pr.signature();
  CHECK(equiv(parse_cterm(sig, "x", "true", Sort("S")), parse_cterm(sig, "y", "true", Sort("S")), solver()) == Tri::No);
  CHECK(equiv(parse_cterm(sig, "x", "true", Sort("S")), parse_cterm(sig, "x", "true", Sort("S")), solver()) == Tri::Yes);

  Signature ints;
  CHECK(equiv(parse_cterm(ints, "(+ x 1)", "(> x 3)"),
              parse_cterm(ints, "(+ x 1)", "(and (= z (+ x 1)) (> x 3))"), solver()) == Tri::Yes);
  // 4 + 1 and 5 are different terms.
  CHECK(equiv(parse_cterm(ints, "(+ x 1)", "(> x 3)"), parse_cterm(ints, "z", "(> z 4)"), solver()) == Tri::No);
  CHECK(equiv(parse_cterm(ints, "x", "(> x 3)"), parse_cterm(ints, "y", "(>= y 4)"), solver()) == Tri::Yes);
  CHECK(equiv(parse_cterm(ints, "x", "(> x 3)"), parse_cterm(ints, "y", "(>= y 3)"), solver()) == Tri::No);
  // Logical x against non-logical x.
  CHECK(equiv(parse_cterm(ints, "x", "(= x x)", Sort::integer()), parse_cterm(ints, "x", "true", Sort::integer()), solver()) == Tri::No);

  Term yy = make_pair(parse_cterm(sig, "y", "true", Sort("S")).term, parse_cterm(sig, "y", "true", Sort("S")).term);
  Term xx = make_pair(parse_cterm(sig, "x", "true", Sort("S")).term, parse_cterm(sig, "x", "true", Sort("S")).term);
  CHECK(equiv(CTerm{yy, bool_term(true)}, CTerm{xx, bool_term(true)}, solver()) == Tri::No);
  CHECK(show(yy) == "y ≈ y");
}

TEST_CASE("normalization is an equivalence") {
  Lctrs adc = load("almost_dev_closed.lctrs");
  const auto& sig = adc.signature();
  Term phi;
  Term p = pair_of(sig, "(h (g y (* 2 2)))", "(c 4 x)", "(and (= x y) (= y 2))", &phi);
  CTerm s{p, phi};
  CTerm n = normalize(s, solver());
  CHECK(vars(n.term).empty());
  CHECK(is_true(n.constraint));
  CHECK(equiv(s, n, solver()) == Tri::Yes);

  Signature ints;
  CTerm z = parse_cterm(ints, "z", "(and (= z (+ x 1)) (> x 3))");
  CHECK(equiv(z, normalize(z, solver()), solver()) == Tri::Yes);
  CTerm junk = parse_cterm(ints, "x", "(and (> x 0) (and (> w 7) (= v (+ x 1))))");
  CTerm jn = normalize(junk, solver());
  CHECK(jn.constraint.to_string() == "(> x 0)");
  CHECK(equiv(junk, jn, solver()) == Tri::Yes);
}

TEST_CASE("parallel steps") {
  Lctrs pc = load("parallel_closed.lctrs");
  const auto& sig = pc.signature();
  CTerm s = parse_cterm(sig, "(f (g (+ 1 1) (+ 3 1)))");
  auto res = parallel_tilde(s, pc.rc(), solver());
  bool found = false;
  for (const auto& r : res)
    if (r.result.term == parse_cterm(sig, "(f (g 2 4))").term) {
      found = true;
      CHECK(to_string(r.positions) == "{1.1,1.2}");
    }
  CHECK(found);
  // The empty step is always included.
  CHECK(std::any_of(res.begin(), res.end(), [&](const CParallelResult& r) { return r.positions.empty(); }));

  Lctrs vc = load("variable_condition.lctrs");
  CTerm fay = parse_cterm(vc.signature(), "(f a y)");
  auto pv = parallel_constrained(fay, vc.rc(), solver());
  CHECK(std::any_of(pv.begin(), pv.end(), [&](const CParallelResult& r) {
    return r.result.term == parse_cterm(vc.signature(), "y", "true", Sort("S")).term && to_string(r.positions) == "{ε}";
  }));
}

TEST_CASE("multi-step closes the overlay of the f/g/h/c system") {
  Lctrs adc = load("almost_dev_closed.lctrs");
  const auto& sig = adc.signature();
  Term phi;
  Term p = pair_of(sig, "(h (g y (* 2 2)))", "(c 4 x)", "(and (= x y) (= y 2))", &phi);
  auto res = multi_tilde(CTerm{p, phi}, adc.rc(), solver(), Position({1}));
  Term goal = make_pair(parse_cterm(sig, "(g 4 2)").term, parse_cterm(sig, "(c 4 x)").term);
  CHECK(has_equiv(res, CTerm{goal, parse_cterm(sig, "x", "(= x 2)").constraint}));
  for (const auto& r : res)
    for (const auto& q : r.positions) CHECK(Position({1}).is_prefix_of(q));
}

TEST_CASE("parallel steps are multi-steps and replay position by position") {
  ValueDomain d = ValueDomain::interval(-4, 4);
  std::mt19937 rng(7);
  for (const char* file : {"almost_dev_closed.lctrs", "parallel_closed.lctrs", "parity.lctrs"}) {
    Lctrs r = load(file);
    for (int i = 0; i < 30; ++i) {
      Sort s = r.signature().sorts().back();
      Term t = random_ground(r.signature(), s, d, rng, 3);
      auto par = parallel_successors(t, r.rc(), d, solver());
      auto multi = multi_successors(t, r.rc(), d, solver());
      for (const auto& pr : par) {
        CHECK(std::any_of(multi.begin(), multi.end(), [&](const ParallelResult& m) { return m.term == pr.term; }));
        std::map<Position, Term> parts;
        for (const auto& p : pr.positions) {
          const Term& before = subterm_at(t, p);
          const Term& after = subterm_at(pr.term, p);
          auto root = plain_root_matches(before, r.rc(), d, solver());
          CHECK(std::any_of(root.begin(), root.end(),
                            [&](const RuleMatch& m) { return m.sigma.apply(m.rule.rhs) == after; }));
          parts[p] = after;
        }
        CHECK(replace_at(t, parts) == pr.term);
      }
    }
  }
}

TEST_CASE("constrained steps are sound for their instances") {
  ValueDomain d = ValueDomain::interval(-4, 4);
  struct Case {
    const char* file;
    const char* term;
    const char* constraint;
  };
  std::vector<Case> cases{{"almost_dev_closed.lctrs", "(f x y)", "(and (<= x y) (= y 2))"},
                          {"almost_dev_closed.lctrs", "(c 4 x)", "(> x 4)"},
                          {"almost_dev_closed.lctrs", "(h (g x (* 2 2)))", "(>= x 0)"},
                          {"parity.lctrs", "(f x)", "(= x 1)"},
                          {"parity.lctrs", "(g x)", "(= x (* 2 k))"},
                          {"parallel_closed.lctrs", "(g x y)", "(and (> x 0) (= z (- x 2)))"}};
  for (const auto& c : cases) {
    Lctrs r = load(c.file);
    CTerm s = parse_cterm(r.signature(), c.term, c.constraint);
    auto steps = cstep(s, r.rc(), solver());
    CHECK_MESSAGE(!steps.empty(), s.to_string());
    for (const auto& st : steps) {
      CHECK(st.result.constraint == s.constraint);
      for (const auto& m : solver().models(s.constraint, 20)) {
        Term from = substitute_values(s.term, m);
        Term to = substitute_values(st.result.term, m);
        auto succ = plain_successors(from, r.rc(), d, solver());
        bool at_p = std::any_of(succ.items.begin(), succ.items.end(), [&](const Successor& x) {
          return x.term == to && x.step.position == st.step.position;
        });
        CHECK_MESSAGE(at_p, from.to_string() << " -> " << to.to_string());
      }
    }
  }
}

TEST_CASE("equivalence answers are sound on samples") {
  Signature ints;
  std::vector<std::pair<CTerm, CTerm>> cases{
      {parse_cterm(ints, "(+ x 1)", "(> x 3)"), parse_cterm(ints, "(+ y 1)", "(and (= z (+ y 1)) (> y 3))")},
      {parse_cterm(ints, "x", "(and (> x 0) (< x 5))"), parse_cterm(ints, "y", "(and (>= y 1) (<= y 4))")},
      {parse_cterm(ints, "(* x 2)", "(= x 3)"), parse_cterm(ints, "(* 3 2)", "true")},
      {parse_cterm(ints, "x", "(and (> x 0) (< x 5))"), parse_cterm(ints, "y", "(and (>= y 1) (<= y 5))")}};
  for (const auto& [a, b] : cases) {
    Tri e = equiv(a, b, solver());
    REQUIRE(e != Tri::Unknown);
    bool all_matched = true;
    for (const auto& [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
      VarSet lt = vars(to.constraint);
      for (const auto& g : solver().models(from.constraint, 20)) {
        Term inst = substitute_values(from.term, g);
        auto delta = match(to.term, inst);
        bool ok = false;
        if (delta) {
          Term rest = delta->apply(to.constraint);
          ok = solver().is_satisfiable(rest).sat();
          for (const auto& [x, t] : *delta)
            if (lt.count(x) && !t.is_value()) ok = false;
        }
        all_matched = all_matched && ok;
      }
    }
    CHECK((e == Tri::Yes) == all_matched);
  }
}
