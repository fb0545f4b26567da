#include "lctrs/cli/suites.hpp"

#include <functional>
#include <random>

#include "lctrs/core/signature.hpp"
#include "lctrs/core/substitution.hpp"
#include "lctrs/core/theory.hpp"
#include "lctrs/grounding/grounding.hpp"
#include "lctrs/logic/interpret.hpp"
#include "lctrs/pcpgen/pcpgen.hpp"

namespace lctrs {

namespace {

constexpr std::size_t kMaxReported = 20;

void report(SuiteResult& r, std::string msg) {
  if (r.failures.size() < kMaxReported) r.failures.push_back(std::move(msg));
  else if (r.failures.size() == kMaxReported) r.failures.push_back("…");
}

/// Reference semantics of the theory operators.
Value reference_op(Op op, const std::vector<Value>& a) {
  auto i = [&](std::size_t k) { return a[k].as_int(); };
  auto b = [&](std::size_t k) { return a[k].as_bool(); };
  switch (op) {
    case Op::Add: return Value(Integer(i(0) + i(1)));
    case Op::Sub: return Value(Integer(i(0) - i(1)));
    case Op::Neg: return Value(Integer(-i(0)));
    case Op::Mul: return Value(Integer(i(0) * i(1)));
    case Op::EqInt: return Value(i(0) == i(1));
    case Op::NeInt: return Value(i(0) != i(1));
    case Op::Lt: return Value(i(0) < i(1));
    case Op::Le: return Value(i(0) <= i(1));
    case Op::Gt: return Value(i(0) > i(1));
    case Op::Ge: return Value(i(0) >= i(1));
    case Op::EqBool: return Value(b(0) == b(1));
    case Op::NeBool: return Value(b(0) != b(1));
    case Op::And: return Value(b(0) && b(1));
    case Op::Or: return Value(b(0) || b(1));
    case Op::Not: return Value(!b(0));
    case Op::Implies: return Value(!b(0) || b(1));
  }
  return Value(0);
}

Value reference_eval(const Term& t) {
  if (t.is_value()) return t.value_of();
  std::vector<Value> args;
  for (const auto& a : t.args()) args.push_back(reference_eval(a));
  return reference_op(*theory_op(t.symbol()), args);
}

}  // namespace

std::string SuiteResult::summary() const {
  return name + ": " + std::to_string(cases) + " cases, " + std::to_string(failures.size()) + " failures";
}

SuiteResult unification_suite(std::size_t cases, unsigned seed) {
  SuiteResult res{"unification", 0, {}};
  Signature sig;
  Sort s{"S"};
  sig.add_sort(s);
  auto f = sig.add_function("f", {s, s}, s);
  auto g = sig.add_function("g", {s}, s);
  auto a = sig.add_function("a", {}, s);
  auto b = sig.add_function("b", {}, s);
  std::mt19937 rng(seed);
  std::vector<std::string> names{"x", "y", "z", "w"};
  auto var = [&](const std::string& n) { return Term::variable(Var{n, 0, s}); };
  std::function<Term(int, bool)> gen = [&](int depth, bool ground) -> Term {
    auto k = rng() % 6;
    if (depth == 0 || k < 2) {
      if (!ground && rng() % 2) return var(names[rng() % names.size()]);
      return Term::apply(rng() % 2 ? a : b);
    }
    if (k < 4) return Term::apply(g, {gen(depth - 1, ground)});
    return Term::apply(f, {gen(depth - 1, ground), gen(depth - 1, ground)});
  };

  auto check_unifier = [&](const Term& l, const Term& r, const Substitution& sigma) {
    std::string pair = l.to_string() + " =? " + r.to_string();
    if (sigma.apply(l) != sigma.apply(r)) report(res, "not a unifier: " + pair);
    if (sigma.then(sigma) != sigma) report(res, "not idempotent: " + pair);
    for (const auto& [x, img] : sigma)
      if (occurs(x, img)) report(res, "occurs check violated: " + pair);
  };

  for (std::size_t i = 0; i < cases; ++i) {
    ++res.cases;
    if (i % 2 == 0) {
      Term l = gen(3, false), r = gen(3, false);
      if (auto sigma = unify({{l, r}})) check_unifier(l, r, *sigma);
      continue;
    }
    // l and a generalization r of lθ are unified by θ extended to Var(r).
    Term l = gen(3, false);
    Substitution theta;
    for (const auto& x : vars(l)) theta.bind(x, gen(2, true));
    Term u = theta.apply(l);
    Substitution extra = theta;
    int fresh = 0;
    std::function<Term(const Term&)> generalize = [&](const Term& t) -> Term {
      for (const auto& [x, img] : theta)
        if (img == t && rng() % 3 == 0) return Term::variable(x);
      if (rng() % 4 == 0) {
        Var v{"u" + std::to_string(fresh++), 0, s};
        extra.bind(v, t);
        return Term::variable(v);
      }
      if (t.args().empty()) return t;
      std::vector<Term> args;
      for (const auto& c : t.args()) args.push_back(generalize(c));
      return Term::apply(t.symbol_ref(), args);
    };
    Term r = generalize(u);
    auto sigma = unify({{l, r}});
    if (!sigma) {
      report(res, "no unifier found for unifiable " + l.to_string() + " =? " + r.to_string());
      continue;
    }
    check_unifier(l, r, *sigma);
    // θ′ = σθ′ on Var(l, r) shows θ′ is an instance of σ.
    VarSet vs = vars(l);
    for (const auto& x : vars(r)) vs.insert(x);
    for (const auto& x : vs)
      if (extra.apply(sigma->apply(Term::variable(x))) != extra.apply(Term::variable(x)))
        report(res, "not most general: " + l.to_string() + " =? " + r.to_string());
  }
  return res;
}

SuiteResult interpret_suite(std::size_t cases, unsigned seed) {
  SuiteResult res{"interpret", 0, {}};
  std::mt19937 rng(seed);
  std::function<Term(int)> gen_bool;
  std::function<Term(int)> gen_int = [&](int depth) -> Term {
    if (depth == 0 || rng() % 4 == 0) return int_term(Integer(static_cast<long>(rng() % 41) - 20));
    switch (rng() % 4) {
      case 0: return mk_add(gen_int(depth - 1), gen_int(depth - 1));
      case 1: return mk_sub(gen_int(depth - 1), gen_int(depth - 1));
      case 2: return mk_mul(gen_int(depth - 1), gen_int(depth - 1));
      default: return mk_neg(gen_int(depth - 1));
    }
  };
  gen_bool = [&](int depth) -> Term {
    if (depth == 0 || rng() % 5 == 0) return bool_term(rng() % 2 == 0);
    Term x = gen_int(depth - 1), y = gen_int(depth - 1);
    switch (rng() % 11) {
      case 0: return mk_eq(x, y);
      case 1: return mk_ne(x, y);
      case 2: return mk_lt(x, y);
      case 3: return mk_le(x, y);
      case 4: return mk_gt(x, y);
      case 5: return mk_ge(x, y);
      case 6: return mk_and(gen_bool(depth - 1), gen_bool(depth - 1));
      case 7: return mk_or(gen_bool(depth - 1), gen_bool(depth - 1));
      case 8: return mk_not(gen_bool(depth - 1));
      case 9: return mk_implies(gen_bool(depth - 1), gen_bool(depth - 1));
      default: return mk_eq(gen_bool(depth - 1), gen_bool(depth - 1));
    }
  };
  while (res.cases < cases) {
    Term t = rng() % 2 ? gen_int(4) : gen_bool(4);
    if (t.is_value()) continue;
    ++res.cases;
    try {
      std::vector<Value> args;
      for (const auto& x : t.args()) args.push_back(interpret(x));
      Value v = interpret(t);
      if (v != apply_op(*theory_op(t.symbol()), args)) report(res, "not homomorphic on " + t.to_string());
      if (v != reference_eval(t)) report(res, "disagrees with the reference on " + t.to_string());
      if (fold_ground(t) != Term::value(v)) report(res, "fold_ground differs on " + t.to_string());
    } catch (const std::exception& e) {
      report(res, t.to_string() + ": " + e.what());
    }
  }
  return res;
}

SuiteResult solver_agreement_suite(const std::string& smt_command, std::size_t cases, unsigned seed,
                                   int timeout_ms) {
  SuiteResult res{"solver agreement", 0, {}};
  if (smt_command.empty()) {
    res.failures.push_back("no external SMT solver configured");
    return res;
  }
  std::mt19937 rng(seed);
  std::vector<Term> xs;
  for (const char* n : {"x", "y", "z"}) xs.push_back(Term::variable(Var{n, 0, Sort::integer()}));
  auto num = [&](long lo, long hi) { return int_term(Integer(lo + static_cast<long>(rng() % (hi - lo + 1)))); };
  auto lin = [&]() {
    Term t = num(-6, 6);
    for (const auto& x : xs)
      if (rng() % 2) t = mk_add(t, mk_mul(num(-4, 4), x));
    return t;
  };
  auto atom = [&]() -> Term {
    Term l = lin(), r = lin();
    switch (rng() % 5) {
      case 0: return mk_lt(l, r);
      case 1: return mk_le(l, r);
      case 2: return mk_eq(l, r);
      case 3: return mk_ne(l, r);
      default: return mk_ge(l, r);
    }
  };
  for (std::size_t i = 0; i < cases; ++i) {
    Term phi = atom();
    for (auto k = rng() % 4; k > 0; --k) phi = rng() % 3 ? mk_and(phi, atom()) : mk_or(phi, atom());
    if (rng() % 5 == 0) phi = mk_not(phi);
    ++res.cases;
    auto in = internal_satisfiable(phi);
    auto ex = smt_backend(smt_command, {}, phi, timeout_ms);
    std::string where = phi.to_string();
    if (in.unknown() || ex.unknown()) {
      report(res, "undecided: " + where + (ex.unknown() ? " (external: " + ex.diagnostic + ")" : ""));
      continue;
    }
    if (in.sat() != ex.sat()) report(res, "disagreement on " + where);
    if (in.sat() && !evaluate(phi, in.model).as_bool()) report(res, "bad internal model for " + where);
    if (ex.sat() && !evaluate(phi, ex.model).as_bool()) report(res, "bad external model for " + where);
  }
  return res;
}

SuiteResult encoding_suite(std::size_t max_n, long max_value) {
  SuiteResult res{"encode/decode", 0, {}};
  for (std::size_t n_pairs = 1; n_pairs <= max_n; ++n_pairs)
    for (long n = 0; n <= max_value; ++n) {
      ++res.cases;
      auto w = decode(n, n_pairs);
      bool in_range = std::all_of(w.begin(), w.end(), [&](std::size_t i) { return i >= 1 && i <= n_pairs; });
      if (!in_range || encode_string(w, n_pairs) != n)
        report(res, "N=" + std::to_string(n_pairs) + " n=" + std::to_string(n));
    }
  return res;
}

SuiteResult correspondence_suite(const Lctrs& r, const ValueDomain& d, const Solver& solver, std::size_t samples) {
  SuiteResult res{"correspondence", 0, {}};
  auto cp = check_cp_correspondence(r, d, solver, samples);
  auto st = check_step_equivalence(r, d, solver, samples);
  res.cases = cp.fragment_cps + cp.fragment_pcps + cp.samples + st.samples;
  for (const auto& v : cp.violations) report(res, v);
  for (const auto& v : st.violations) report(res, v);
  return res;
}

}  // namespace lctrs
