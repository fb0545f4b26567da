#include "lctrs/rewriting/constrained.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "lctrs/core/substitution.hpp"
#include "lctrs/core/theory.hpp"
#include "lctrs/logic/interpret.hpp"

namespace lctrs {

std::string to_string(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    case Tri::Unknown: return "unknown";
  }
  return "?";
}

std::string CTerm::to_string() const { return show(term) + " [" + constraint.to_string() + "]"; }

namespace {

const std::string kPairName = "≈";
const Sort kPairSort("≈");

SymbolRef pair_symbol(const Sort& s) {
  static std::mutex mu;
  static std::map<Sort, SymbolRef> table;
  std::lock_guard lock(mu);
  auto& f = table[s];
  if (!f) {
    auto sym = std::make_shared<FunSym>();
    sym->name = kPairName;
    sym->arg_sorts = {s, s};
    sym->result_sort = kPairSort;
    f = sym;
  }
  return f;
}

}  // namespace

Term make_pair(const Term& s, const Term& t) { return Term::apply(pair_symbol(s.sort()), {s, t}); }

bool is_pair(const Term& t) { return t.is_app() && t.symbol().name == kPairName && t.args().size() == 2; }

std::string show(const Term& t) {
  if (is_pair(t)) return t.args()[0].to_string() + " ≈ " + t.args()[1].to_string();
  return t.to_string();
}

namespace {

/// Leaf of an alignment: a constraint variable or a value.
bool is_leaf(const Term& t, const VarSet& logical) {
  return t.is_value() || (t.is_var() && logical.count(t.var()));
}

/// Collects equations E with sγ = tδ ⟺ E for leaves aligned between s and t.
/// Returns false on a rigid mismatch.
bool align(const Term& s, const VarSet& ls, const Term& t, const VarSet& lt, std::vector<Term>& eqs) {
  bool sl = is_leaf(s, ls), tl = is_leaf(t, lt);
  if (sl || tl) {
    if (!(sl && tl)) return false;
    if (s.sort() != t.sort()) return false;
    if (s.is_value() && t.is_value()) return s == t;
    eqs.push_back(mk_eq(s, t));
    return true;
  }
  if (s.is_var() || t.is_var()) return s == t;
  if (!same_symbol(s.symbol(), t.symbol())) return false;
  for (std::size_t i = 0; i < s.args().size(); ++i)
    if (!align(s.args()[i], ls, t.args()[i], lt, eqs)) return false;
  return true;
}

std::vector<Var> as_vector(const VarSet& s) { return {s.begin(), s.end()}; }

Tri from_verdict(const SolverVerdict& v) {
  if (v.valid() || v.sat()) return Tri::Yes;
  if (v.invalid() || v.unsat()) return Tri::No;
  return Tri::Unknown;
}

}  // namespace

Tri equiv(const CTerm& a, const CTerm& b, const Solver& solver) {
  VarSet la = vars(a.constraint);
  Substitution rn = fresh_renaming(vars(b.constraint));
  Term t = rn.apply(b.term);
  Term psi = rn.apply(b.constraint);
  VarSet lb = vars(psi);

  std::vector<Term> eqs;
  if (!align(a.term, la, t, lb, eqs)) {
    // No instances coincide, so only two empty instance sets are equivalent.
    Tri sa = from_verdict(solver.is_satisfiable(a.constraint));
    Tri sb = from_verdict(solver.is_satisfiable(psi));
    if (sa == Tri::No && sb == Tri::No) return Tri::Yes;
    if (sa == Tri::Yes || sb == Tri::Yes) return Tri::No;
    return Tri::Unknown;
  }
  Term e = conj(eqs);
  auto forward = solver.is_valid_quantified(
      {{Quantifier::Forall, as_vector(la)}, {Quantifier::Exists, as_vector(lb)}},
      mk_implies(a.constraint, mk_and(psi, e)));
  Tri f = from_verdict(forward);
  if (f == Tri::No) return Tri::No;
  auto backward = solver.is_valid_quantified(
      {{Quantifier::Forall, as_vector(lb)}, {Quantifier::Exists, as_vector(la)}},
      mk_implies(psi, mk_and(a.constraint, e)));
  Tri g = from_verdict(backward);
  if (g == Tri::No) return Tri::No;
  if (f == Tri::Yes && g == Tri::Yes) return Tri::Yes;
  return Tri::Unknown;
}

namespace {

std::vector<Term> simplified_conjuncts(const Term& phi) {
  std::vector<Term> out;
  for (const auto& c : conjuncts(fold_ground(phi))) {
    if (is_true(c)) continue;
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

/// z = e or e = z with z a variable not in e.
const Var* defined_var(const Term& c) {
  if (!is_op(c, Op::EqInt) && !is_op(c, Op::EqBool)) return nullptr;
  const auto& l = c.args()[0];
  const auto& r = c.args()[1];
  if (l.is_var() && !occurs(l.var(), r)) return &l.var();
  if (r.is_var() && !occurs(r.var(), l)) return &r.var();
  return nullptr;
}

}  // namespace

CTerm normalize(const CTerm& ct, const Solver& solver) {
  std::vector<Term> parts = simplified_conjuncts(ct.constraint);
  for (const auto& c : parts)
    if (is_false(c)) return CTerm{ct.term, conj(parts)};
  Term phi = conj(parts);
  VarSet logical = vars(ct.constraint);
  auto sat = solver.is_satisfiable(phi);
  if (!sat.sat()) return CTerm{ct.term, phi};

  Substitution fixed;
  for (const auto& x : vars(phi)) {
    Term v = Term::value(sat.model.at(x));
    auto det = solver.is_valid(mk_implies(phi, mk_eq(Term::variable(x), v)));
    if (det.valid()) fixed.bind(x, v);
  }
  Term term = fixed.apply(ct.term);
  parts = simplified_conjuncts(fixed.apply(phi));

  VarSet in_term = vars(term);
  // A definition z = e of an otherwise unused z constrains nothing.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const Var* z = defined_var(parts[i]);
      if (!z || in_term.count(*z)) continue;
      bool elsewhere = false;
      for (std::size_t j = 0; j < parts.size() && !elsewhere; ++j)
        if (j != i && occurs(*z, parts[j])) elsewhere = true;
      if (elsewhere) continue;
      parts.erase(parts.begin() + static_cast<long>(i));
      changed = true;
      break;
    }
  }
  // Satisfiable components sharing no variable with the term are dropped.
  VarSet reach;
  for (const auto& x : in_term)
    if (logical.count(x)) reach.insert(x);
  std::vector<bool> keep(parts.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (keep[i]) continue;
      VarSet vs = vars(parts[i]);
      bool touches = std::any_of(vs.begin(), vs.end(), [&](const Var& x) { return reach.count(x) != 0; });
      if (!touches) continue;
      keep[i] = true;
      changed = true;
      reach.insert(vs.begin(), vs.end());
    }
  }
  std::vector<Term> kept;
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (keep[i]) kept.push_back(parts[i]);
  VarSet now;
  for (const auto& c : kept) collect_vars(c, now);
  // Term variables that were logical must stay logical.
  for (const auto& x : in_term)
    if (logical.count(x) && !now.count(x)) kept.push_back(mk_eq(Term::variable(x), Term::variable(x)));
  return CTerm{term, conj(kept)};
}

namespace {

void theory_redexes(const Term& t, const VarSet& logical, std::vector<Term>& out) {
  if (t.is_var() || t.is_value()) return;
  for (const auto& a : t.args()) theory_redexes(a, logical, out);
  if (!t.symbol().is_theory()) return;
  for (const auto& a : t.args())
    if (!is_leaf(a, logical)) return;
  if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
}

}  // namespace

std::vector<CTerm> equiv_extensions(const CTerm& ct, bool with_renaming) {
  std::vector<CTerm> out;
  VarSet logical = vars(ct.constraint);
  std::vector<Term> redexes;
  theory_redexes(ct.term, logical, redexes);
  std::vector<Term> defs;
  for (const auto& r : redexes) {
    Term z = Term::variable(fresh_var(Var{"z", 0, r.sort()}));
    Term d = mk_eq(z, r);
    defs.push_back(d);
    out.push_back(CTerm{ct.term, is_true(ct.constraint) ? d : mk_and(d, ct.constraint)});
  }
  if (defs.size() > 1) {
    std::vector<Term> all = defs;
    if (!is_true(ct.constraint)) all.push_back(ct.constraint);
    out.push_back(CTerm{ct.term, conj(all)});
  }
  if (with_renaming && !logical.empty()) {
    Substitution rn = fresh_renaming(logical);
    out.push_back(CTerm{rn.apply(ct.term), rn.apply(ct.constraint)});
  }
  return out;
}

std::string canonical_key(const CTerm& ct) {
  VarSet logical = vars(ct.constraint);
  Substitution rn;
  std::size_t n = 0;
  auto visit = [&](const Term& t) {
    for (const auto& x : vars_in_order(t))
      if (logical.count(x) && !rn.contains(x)) rn.bind(x, Term::variable(Var{"#", ++n, x.sort}));
  };
  visit(ct.term);
  visit(ct.constraint);
  return rn.apply(ct.term).to_string() + " | " + rn.apply(ct.constraint).to_string();
}

}  // namespace lctrs
