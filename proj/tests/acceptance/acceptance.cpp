/// Reproduces the worked examples and runs the property suites, printing one
/// PASS/FAIL line per item. Exits non-zero if any item fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lctrs/analysis/analysis.hpp"
#include "lctrs/cli/app.hpp"
#include "lctrs/cli/parse.hpp"
#include "lctrs/cli/suites.hpp"
#include "lctrs/core/theory.hpp"
#include "lctrs/grounding/grounding.hpp"
#include "lctrs/pcpgen/pcpgen.hpp"

using namespace lctrs;

namespace {

/// Failed expectations of one item.
struct Check {
  std::vector<std::string> notes;
  void expect(bool ok, const std::string& what) {
    if (!ok) notes.push_back(what);
  }
};

std::string corpus(const std::string& name) { return std::string(LCTRS_CORPUS_DIR) + "/" + name; }

Lctrs load(const std::string& name) {
  std::ifstream in(corpus(name));
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

Term pair_term(const Signature& sig, const std::string& s, const std::string& t) {
  return make_pair(parse_cterm(sig, s).term, parse_cterm(sig, t).term);
}

bool equivalent(const Term& a, const Term& b) {
  return solver().is_valid(mk_implies(a, b)).valid() && solver().is_valid(mk_implies(b, a)).valid();
}

std::set<std::string> rule_strings(const std::vector<Rule>& rules) {
  std::set<std::string> out;
  for (const auto& r : rules) out.insert(r.lhs.to_string() + " -> " + r.rhs.to_string());
  return out;
}

void weakly_orthogonal_example(Check& c) {
  std::ostringstream out, err;
  int status = run({"ccp", corpus("weakly_orthogonal.lctrs"), "--json"}, out, err);
  c.expect(status == kExitOk, "ccp exit status");
  auto j = nlohmann::json::parse(out.str());
  c.expect(j.size() == 1, "exactly one CCP");
  if (j.size() == 1) {
    c.expect(j[0]["left"] == "x" && j[0]["right"] == "x'", "pair x ≈ x'");
    c.expect(j[0]["constraint"] == "(and (= x 0) (= x' 0))", "constraint (and (= x 0) (= x' 0))");
  }
  Lctrs r = load("weakly_orthogonal.lctrs");
  auto cs = user_ccps(r);
  c.expect(cs.size() == 1 && is_trivial(cs[0].pair(), solver()) == Tri::Yes, "the CCP is trivial");
  for (auto d : {ValueDomain::interval(0, 0), ValueDomain::interval(-4, 4), ValueDomain::interval(-1, 7)}) {
    GroundFragment f = ground_fragment(r, d);
    c.expect(rule_strings(f.rules) == std::set<std::string>{"a -> 0"}, "fragment over " + d.to_string() + " is {a -> 0}");
    c.expect(trs_cps(f).empty(), "fragment over " + d.to_string() + " has no critical pairs");
  }
  auto res = analyze(r, solver());
  c.expect(res.verdict.kind == VerdictKind3::Yes && res.verdict.criterion == Criterion::WeakOrthogonality,
           "analyze is YES by weak orthogonality");
}

void almost_development_closed_example(Check& c) {
  Lctrs r = load("almost_dev_closed.lctrs");
  const auto& sig = r.signature();
  auto cs = user_ccps(r);
  c.expect(cs.size() == 2, "two CCPs, one per orientation");
  if (cs.size() != 2) return;
  c.expect(cs[0].pair().term == pair_term(sig, "(h (g y (* 2 2)))", "(c 4 x)"), "first CCP h(g(y,2·2)) ≈ c(4,x)");
  c.expect(cs[1].pair().term == pair_term(sig, "(c 4 x)", "(h (g y (* 2 2)))"), "second CCP c(4,x) ≈ h(g(y,2·2))");
  Term phi = parse_cterm(sig, "(f x y)", "(and (= x y) (= y 2))").constraint;
  for (const auto& cp : cs) {
    Substitution to_xy;
    for (const auto& v : vars(cp.source)) to_xy.bind(v, Term::variable(Var{v.name.substr(0, 1), 0, v.sort}));
    c.expect(equivalent(to_xy.apply(cp.constraint), phi), "constraint equivalent to x = y ∧ y = 2");
  }
  ClosingLimits lim;
  lim.depth = 3;
  Closing a = dev_closed_check(cs[0], r, solver(), lim);
  Closing b = dev_closed_check(cs[1], r, solver(), lim);
  c.expect(a.status == Closedness::Closed && b.status == Closedness::Closed, "both close within depth 3");
  if (a.status == Closedness::Closed && a.sequence.size() == 3) {
    CTerm mid{pair_term(sig, "(g 4 2)", "(c 4 x)"), parse_cterm(sig, "x", "(= x 2)", Sort::integer()).constraint};
    c.expect(equiv(a.sequence[1], mid, solver()) == Tri::Yes, "multi-step to g(4,2) ≈ c(4,x) [x = 2]");
    c.expect(equiv(a.sequence[2], CTerm{pair_term(sig, "(g 4 2)", "(g 4 2)"), bool_term(true)}, solver()) == Tri::Yes,
             "tail step to g(4,2) ≈ g(4,2)");
  } else {
    c.expect(false, "first closing has one multi-step and one tail step");
  }
  if (b.status == Closedness::Closed && b.sequence.size() >= 2) {
    CTerm mid{pair_term(sig, "(g 4 2)", "(h (g y (* 2 2)))"),
              parse_cterm(sig, "y", "(= y 2)", Sort::integer()).constraint};
    c.expect(equiv(b.sequence[1], mid, solver()) == Tri::Yes, "multi-step to g(4,2) ≈ h(g(y,2·2)) [y = 2]");
    c.expect(b.sequence.size() <= 5 && is_trivial(b.sequence.back(), solver()) == Tri::Yes,
             "tail of at most three steps to a trivial pair");
  }
  auto res = analyze(r, solver());
  c.expect(res.verdict.kind == VerdictKind3::Yes && res.verdict.criterion == Criterion::AlmostDevelopmentClosed,
           "analyze is YES by almost development closedness");
}

void parity_example(Check& c) {
  Lctrs r = load("parity.lctrs");
  const auto& sig = r.signature();
  const CCPRecord* stuck = nullptr;
  auto cs = user_ccps(r);
  for (const auto& cp : cs)
    if (cp.pair().term == pair_term(sig, "(g x)", "(h x)")) stuck = &cp;
  c.expect(stuck != nullptr, "CCP g(x) ≈ h(x) exists");
  if (stuck) {
    Term bounds = parse_cterm(sig, "(g x)", "(and (<= 1 x) (<= x 2))").constraint;
    c.expect(equivalent(stuck->constraint, bounds), "its constraint is 1 ≤ x ≤ 2");
    c.expect(is_trivial(stuck->pair(), solver()) == Tri::No, "it is not trivial");
    c.expect(cstep_tilde(stuck->pair(), r.rc(), solver()).empty(), "it has no →̃ step");
    auto ms = multi_tilde(stuck->pair(), r.rc(), solver(), Position({1}));
    c.expect(std::all_of(ms.begin(), ms.end(), [](const CParallelResult& m) { return m.positions.empty(); }),
             "it has no non-empty ○̃→ step");
    c.expect(dev_closed_check(*stuck, r, solver()).status == Closedness::NotClosed, "dev_closed_check fails");
  }
  auto res = analyze(r, solver());
  c.expect(res.verdict.kind == VerdictKind3::Maybe, "analyze is MAYBE");
  GroundFragment f = ground_fragment(r, ValueDomain::interval(-3, 3));
  auto rep = trs_closedness_check(f);
  c.expect(rep.almost_development_closed, "the fragment over [-3..3] is almost development closed");
  std::set<std::string> cps;
  for (const auto& cp : trs_cps(f)) cps.insert(cp.left.to_string() + " = " + cp.right.to_string());
  c.expect(cps == std::set<std::string>{"(g 1) = (h 1)", "(h 1) = (g 1)", "(g 2) = (h 2)", "(h 2) = (g 2)"},
           "the fragment CPs are g(1) ≈ h(1) and g(2) ≈ h(2) up to symmetry");
}

void parallel_closed_example(Check& c) {
  Lctrs r = load("parallel_closed.lctrs");
  const auto& sig = r.signature();
  const CPCPRecord* peak = nullptr;
  auto ps = cpcps(r, solver());
  for (const auto& cp : ps)
    if (cp.pair().term == pair_term(sig, "(f (g (+ 1 1) (+ 3 1)))", "(g 4 4)")) peak = &cp;
  c.expect(peak != nullptr, "CPCP f(g(1+1,3+1)) ≈ g(4,4) exists");
  if (peak) {
    c.expect(is_true(peak->constraint), "its constraint is true");
    c.expect(to_string(peak->positions) == "{1}", "P = {1}");
    Closing cl = parallel_closed_2(*peak, r, solver());
    c.expect(cl.status == Closedness::Closed, "it is 2-parallel closed");
    c.expect(to_string(cl.q) == "{2}", "Q = {2}");
    c.expect(tvar(peak->source, peak->constraint, peak->positions).empty(), "TVar(ℓσ, φ, P) is empty");
    if (cl.status == Closedness::Closed && !cl.sequence.empty()) {
      const CTerm& last = cl.sequence.back();
      // Q is given on the pair u ≈ v; its positions lie below v.
      PositionSet in_v;
      for (const auto& q : cl.q)
        if (auto rest = q.strip_prefix(Position({2}))) in_v.insert(*rest);
      c.expect(in_v.size() == cl.q.size(), "Q lies in the right-hand side");
      c.expect(tvar(last.term.args()[1], last.constraint, in_v).empty(), "TVar(v, ψ, Q) is empty");
    }
  }
  auto res = analyze(r, solver());
  c.expect(res.verdict.kind == VerdictKind3::Yes && res.verdict.criterion == Criterion::ParallelClosed,
           "analyze is YES by parallel closedness");
}

void variable_condition_example(Check& c) {
  Lctrs r = load("variable_condition.lctrs");
  const auto& sig = r.signature();
  Sort s("S");
  Term x = Term::variable(Var{"x", 0, s}), y = Term::variable(Var{"y", 0, s});
  c.expect(equiv(CTerm{make_pair(y, y), bool_term(true)}, CTerm{make_pair(x, x), bool_term(true)}, solver()) == Tri::No,
           "y ≈ y [true] and x ≈ x [true] are not equivalent");
  const CPCPRecord* peak = nullptr;
  auto ps = cpcps(r, solver());
  for (const auto& cp : ps)
    if (cp.pair().term == pair_term(sig, "(f a y)", "(f b y)")) peak = &cp;
  c.expect(peak != nullptr, "CPCP f(a,y) ≈ f(b,y) exists");
  if (peak) {
    Closing cl = parallel_closed_2(*peak, r, solver());
    c.expect(cl.status == Closedness::NotClosed, "it is not 2-parallel closed");
    c.expect(cl.reason.find("{y} ⊄ {x}") != std::string::npos, "because TVar {y} ⊄ {x}");
  }
  GroundFragment f = ground_fragment(r, ValueDomain::interval(-4, 4));
  auto cps = trs_cps(f);
  auto pcps = trs_pcps(f);
  c.expect(!pcps.empty(), "the fragment has parallel critical pairs");
  for (const auto* list : {&cps, &pcps})
    for (const auto& cp : *list)
      c.expect(joinable(f, cp.left, cp.right, 4).kind == JoinKind::Joinable,
               "fragment pair " + cp.to_string() + " is joinable");
}

void encoder(Check& c) {
  auto digits = [](const std::string& s) {
    std::vector<std::size_t> w;
    for (char ch : s) w.push_back(static_cast<std::size_t>(ch - '0'));
    return w;
  };
  c.expect(encode_string({}, 3) == 0 && decode(0, 3).empty(), "ε ↔ 0");
  c.expect(encode_string(digits("3313"), 3) == 102 && decode(102, 3) == digits("3313"), "3313 ↔ 102");
  c.expect(encode_string(digits("112"), 3) == 22 && decode(22, 3) == digits("112"), "112 ↔ 22");
  auto p = PCPInstance::parse("1,101;10,00;011,11");
  Lctrs rp = build_rp(p);
  auto w = find_solution(p);
  c.expect(w.has_value(), "brute force finds a solution of length at most 6");
  if (!w) return;
  Integer n = encode_string(*w, p.size());
  c.expect(check_candidate(p, rp, n, solver()) == CandidateResult::Solution,
           "check_candidate(" + index_string(*w, p.size()) + " = " + n.str() + ") is Solution");
  std::mt19937 rng(2024);
  int tried = 0;
  while (tried < 50) {
    Integer k = 1 + rng() % 100000;
    if (p.is_solution(decode(k, p.size()))) continue;
    ++tried;
    c.expect(check_candidate(p, rp, k, solver()) == CandidateResult::NonSolution,
             "candidate " + k.str() + " is NonSolution");
  }
}

void correspondence(Check& c) {
  ValueDomain d = ValueDomain::interval(-4, 4);
  std::size_t files = 0;
  for (const char* name : {"weakly_orthogonal.lctrs", "almost_dev_closed.lctrs", "parity.lctrs", "parallel_closed.lctrs",
                           "variable_condition.lctrs", "nonconfluent.lctrs", "projection.lctrs", "pcp.lctrs"}) {
    ++files;
    Lctrs r = load(name);
    auto cp = check_cp_correspondence(r, d, solver(), 200);
    auto st = check_step_equivalence(r, d, solver(), 200);
    c.expect(cp.samples == 200, std::string(name) + ": 200 sampled CCP instances");
    c.expect(st.samples == 200, std::string(name) + ": 200 sampled terms");
    for (const auto& v : cp.violations) c.expect(false, std::string(name) + ": " + v);
    for (const auto& v : st.violations) c.expect(false, std::string(name) + ": " + v);
  }
}

void property_suites(Check& c) {
  for (const auto& s : {unification_suite(1000), encoding_suite(5, 2000), interpret_suite(500),
                        solver_agreement_suite(LCTRS_TEST_SMT, 200)}) {
    c.expect(s.ok(), s.summary());
    for (const auto& f : s.failures) c.expect(false, s.name + ": " + f);
  }
}

}  // namespace

int main() {
  struct Item {
    const char* name;
    std::function<void(Check&)> run;
  };
  std::vector<Item> items{
      {"a -> x [x = 0]: trivial CCP, fragment {a -> 0}, YES by weak orthogonality", weakly_orthogonal_example},
      {"f/g/h/c system: two CCPs closed by development steps, YES by almost development closedness",
       almost_development_closed_example},
      {"parity system: constrained closedness fails while the fragment is almost development closed", parity_example},
      {"f(a)/g system: 2-parallel closed CPCP with Q = {2}, YES by parallel closedness", parallel_closed_example},
      {"variable condition: f(a,y) ≈ f(b,y) fails TVar while fragment pairs are joinable", variable_condition_example},
      {"PCP encoder: encodings, solution 1323 and 50 non-solutions", encoder},
      {"critical pair correspondence and step equivalence on the corpus over [-4..4]", correspondence},
      {"property suites: unification, encode/decode, interpret, solver agreement", property_suites},
  };
  int failed = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    Check c;
    auto start = std::chrono::steady_clock::now();
    try {
      items[i].run(c);
    } catch (const std::exception& e) {
      c.notes.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = c.notes.empty();
    failed += ok ? 0 : 1;
    std::printf("%s %zu %s (%.2fs)\n", ok ? "PASS" : "FAIL", i + 1, items[i].name, secs);
    for (std::size_t k = 0; k < c.notes.size() && k < 20; ++k) std::printf("    %s\n", c.notes[k].c_str());
  }
  return failed == 0 ? 0 : 1;
}
