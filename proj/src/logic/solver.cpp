#include "lctrs/logic/solver.hpp"

#include <functional>

#include "lctrs/core/substitution.hpp"
#include "lctrs/core/theory.hpp"
#include "lctrs/logic/presburger.hpp"

namespace lctrs {

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Valid: return "valid";
    case VerdictKind::Invalid: return "invalid";
    case VerdictKind::Sat: return "sat";
    case VerdictKind::Unsat: return "unsat";
    case VerdictKind::Unknown: return "unknown";
  }
  return "?";
}

namespace {

/// Maps constraint terms to Presburger formulas. Products of two
/// non-constant terms become opaque integer variables.
class Translator {
 public:
  pa::VarId id_of(const Var& x) {
    auto it = ids_.find(x);
    if (it != ids_.end()) return it->second;
    pa::VarId id = next_++;
    ids_.emplace(x, id);
    (x.sort == Sort::boolean() ? bools_ : ints_).push_back(id);
    return id;
  }

  pa::Linear linear(const Term& t) {
    if (t.is_var()) return pa::Linear::of_var(id_of(t.var()));
    if (t.is_value()) return pa::Linear::of_const(t.value_of().as_int());
    auto op = theory_op(t.symbol());
    if (!op) throw std::invalid_argument("not a logical term: " + t.to_string());
    switch (*op) {
      case Op::Add: return linear(t.args()[0]) + linear(t.args()[1]);
      case Op::Sub: return linear(t.args()[0]) - linear(t.args()[1]);
      case Op::Neg: return linear(t.args()[0]) * Integer(-1);
      case Op::Mul: {
        pa::Linear a = linear(t.args()[0]);
        pa::Linear b = linear(t.args()[1]);
        if (a.is_constant()) return b * a.constant;
        if (b.is_constant()) return a * b.constant;
        nonlinear_ = true;
        std::string key = t.to_string();
        auto it = products_.find(key);
        if (it != products_.end()) return pa::Linear::of_var(it->second);
        pa::VarId id = next_++;
        products_.emplace(key, id);
        ints_.push_back(id);
        return pa::Linear::of_var(id);
      }
      default:
        throw std::invalid_argument("not an integer term: " + t.to_string());
    }
  }

  pa::Formula formula(const Term& t, bool pos = true) {
    if (t.is_var()) return pa::bool_var(id_of(t.var()), pos);
    if (t.is_value()) return t.value_of().as_bool() == pos ? pa::top() : pa::bottom();
    auto op = theory_op(t.symbol());
    if (!op) throw std::invalid_argument("not a constraint: " + t.to_string());
    const auto& a = t.args();
    auto cmp = [&](pa::Formula f) { return pos ? f : pa::negate(f); };
    switch (*op) {
      case Op::Not: return formula(a[0], !pos);
      case Op::And:
        return pos ? pa::conj({formula(a[0]), formula(a[1])}) : pa::disj({formula(a[0], false), formula(a[1], false)});
      case Op::Or:
        return pos ? pa::disj({formula(a[0]), formula(a[1])}) : pa::conj({formula(a[0], false), formula(a[1], false)});
      case Op::Implies:
        return pos ? pa::disj({formula(a[0], false), formula(a[1])}) : pa::conj({formula(a[0]), formula(a[1], false)});
      case Op::EqBool:
      case Op::NeBool: {
        bool same = (*op == Op::EqBool) == pos;
        pa::Formula p = formula(a[0]), q = formula(a[1]);
        pa::Formula np = formula(a[0], false), nq = formula(a[1], false);
        return same ? pa::disj({pa::conj({p, q}), pa::conj({np, nq})})
                    : pa::disj({pa::conj({p, nq}), pa::conj({np, q})});
      }
      case Op::EqInt: return cmp(pa::eq(linear(a[0]), linear(a[1])));
      case Op::NeInt: return cmp(pa::ne(linear(a[0]), linear(a[1])));
      case Op::Lt: return cmp(pa::lt(linear(a[0]), linear(a[1])));
      case Op::Le: return cmp(pa::le(linear(a[0]), linear(a[1])));
      case Op::Gt: return cmp(pa::lt(linear(a[1]), linear(a[0])));
      case Op::Ge: return cmp(pa::le(linear(a[1]), linear(a[0])));
      default:
        throw std::invalid_argument("not a constraint: " + t.to_string());
    }
  }

  bool nonlinear() const { return nonlinear_; }
  const std::vector<pa::VarId>& ints() const { return ints_; }
  const std::vector<pa::VarId>& bools() const { return bools_; }
  const std::map<Var, pa::VarId>& ids() const { return ids_; }

  Valuation valuation(const pa::Assignment& a) const {
    Valuation v;
    for (const auto& [x, id] : ids_) {
      if (x.sort == Sort::boolean()) {
        auto it = a.bools.find(id);
        v[x] = Value(it != a.bools.end() && it->second);
      } else {
        auto it = a.ints.find(id);
        v[x] = Value(it != a.ints.end() ? it->second : Integer(0));
      }
    }
    return v;
  }

 private:
  std::map<Var, pa::VarId> ids_;
  std::map<std::string, pa::VarId> products_;
  std::vector<pa::VarId> ints_, bools_;
  pa::VarId next_ = 0;
  bool nonlinear_ = false;
};

Value default_value(const Sort& s) { return s == Sort::boolean() ? Value(false) : Value(0); }

void complete(Valuation& v, const Term& phi) {
  for (const auto& x : vars(phi))
    if (!v.count(x)) v[x] = default_value(x.sort);
}

bool satisfies(const Term& phi, const Valuation& v) {
  try {
    return evaluate(phi, v).as_bool();
  } catch (const EvalError&) {
    return false;
  }
}

/// Conjuncts of the form x = e with x ∉ Var(e) are solved by substitution.
struct Preprocessed {
  Term rest;
  std::vector<std::pair<Var, Term>> solved;  // in elimination order
};

Preprocessed eliminate_equalities(const Term& phi) {
  std::vector<Term> parts = conjuncts(fold_ground(phi));
  std::vector<std::pair<Var, Term>> solved;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const Term& c = parts[i];
      if (!is_op(c, Op::EqInt) && !is_op(c, Op::EqBool)) continue;
      const Term& l = c.args()[0];
      const Term& r = c.args()[1];
      std::optional<std::pair<Var, Term>> def;
      if (l.is_var() && !occurs(l.var(), r)) def.emplace(l.var(), r);
      else if (r.is_var() && !occurs(r.var(), l)) def.emplace(r.var(), l);
      if (!def) continue;
      Substitution s{{def->first, def->second}};
      std::vector<Term> next;
      for (std::size_t j = 0; j < parts.size(); ++j) {
        if (j == i) continue;
        for (const auto& k : conjuncts(fold_ground(s.apply(parts[j])))) next.push_back(k);
      }
      for (auto& [y, e] : solved) e = s.apply(e);
      solved.push_back(std::move(*def));
      parts = std::move(next);
      progress = true;
      break;
    }
  }
  return {conj(parts), std::move(solved)};
}

/// Bounded search for nonlinear leftovers: every assignment in [-8,8]^k.
std::optional<Valuation> box_search(const Term& phi) {
  VarSet free = vars(phi);
  std::vector<Var> vs(free.begin(), free.end());
  if (vs.size() > 4) return std::nullopt;
  Valuation v;
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == vs.size()) return satisfies(phi, v);
    if (vs[i].sort == Sort::boolean()) {
      for (bool b : {false, true}) {
        v[vs[i]] = Value(b);
        if (go(i + 1)) return true;
      }
      return false;
    }
    for (int k = 0; k <= 8; ++k)
      for (int sign : {1, -1}) {
        if (k == 0 && sign < 0) continue;
        v[vs[i]] = Value(k * sign);
        if (go(i + 1)) return true;
      }
    return false;
  };
  if (go(0)) return v;
  return std::nullopt;
}

SolverVerdict unknown(std::string why) {
  SolverVerdict v;
  v.diagnostic = std::move(why);
  return v;
}

bool well_formed_constraint(const Term& phi, std::string& why) {
  if (phi.sort() != Sort::boolean()) {
    why = "constraint is not of sort Bool";
    return false;
  }
  if (!is_logical(phi)) {
    why = "constraint contains non-theory symbols";
    return false;
  }
  return true;
}

}  // namespace

SolverVerdict internal_satisfiable(const Term& phi) {
  std::string why;
  if (!well_formed_constraint(phi, why)) return unknown(why);
  Translator tr;
  pa::Formula f = tr.formula(phi);
  if (tr.nonlinear()) return unknown("nonlinear constraint");
  auto m = pa::find_model(f, tr.ints(), tr.bools());
  SolverVerdict v;
  if (!m) {
    v.kind = VerdictKind::Unsat;
    return v;
  }
  v.kind = VerdictKind::Sat;
  v.model = tr.valuation(*m);
  complete(v.model, phi);
  return v;
}

struct Solver::Cache {
  std::mutex mu;
  std::map<std::string, SolverVerdict> sat;
};

Solver::Solver(SolverConfig config) : config_(std::move(config)), cache_(std::make_shared<Cache>()) {}

SolverVerdict Solver::is_satisfiable(const Term& phi) const {
  // Printed forms do not show sorts, so `(= x y)` over Int and Bool would collide.
  std::string key = phi.to_string();
  for (const auto& x : vars(phi)) key += " " + x.to_string() + ":" + x.sort.name();
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->sat.find(key);
    if (it != cache_->sat.end()) return it->second;
  }
  SolverVerdict v = satisfiable_uncached(phi);
  std::lock_guard lock(cache_->mu);
  cache_->sat.emplace(std::move(key), v);
  return v;
}

SolverVerdict Solver::satisfiable_uncached(const Term& phi) const {
  std::string why;
  if (!well_formed_constraint(phi, why)) return unknown(why);

  Preprocessed pre = eliminate_equalities(phi);
  auto rebuild = [&](Valuation model) {
    for (auto it = pre.solved.rbegin(); it != pre.solved.rend(); ++it) {
      for (const auto& x : vars(it->second))
        if (!model.count(x)) model[x] = default_value(x.sort);
      model[it->first] = evaluate(it->second, model);
    }
    complete(model, phi);
    return model;
  };

  Translator tr;
  pa::Formula f = tr.formula(pre.rest);
  auto m = pa::find_model(f, tr.ints(), tr.bools());
  SolverVerdict v;
  if (!m) {
    // The abstraction over-approximates products, so this is exact.
    v.kind = VerdictKind::Unsat;
    return v;
  }
  Valuation model = rebuild(tr.valuation(*m));
  if (satisfies(phi, model)) {
    v.kind = VerdictKind::Sat;
    v.model = std::move(model);
    return v;
  }
  if (!tr.nonlinear()) return unknown("internal model check failed for " + phi.to_string());

  if (auto boxed = box_search(pre.rest)) {
    Valuation full = rebuild(*boxed);
    if (satisfies(phi, full)) {
      v.kind = VerdictKind::Sat;
      v.model = std::move(full);
      return v;
    }
  }
  if (!config_.smt_command.empty()) return smt_backend(config_.smt_command, {}, phi, config_.timeout_ms);
  return unknown("nonlinear constraint outside the internal fragment");
}

SolverVerdict Solver::is_valid(const Term& phi) const {
  std::string why;
  if (!well_formed_constraint(phi, why)) return unknown(why);
  SolverVerdict s = is_satisfiable(mk_not(phi));
  SolverVerdict v;
  v.diagnostic = s.diagnostic;
  if (s.unsat()) v.kind = VerdictKind::Valid;
  else if (s.sat()) {
    v.kind = VerdictKind::Invalid;
    v.model = std::move(s.model);
  }
  return v;
}

SolverVerdict Solver::is_valid_quantified(const std::vector<QuantBlock>& prefix, const Term& phi) const {
  std::string why;
  if (!well_formed_constraint(phi, why)) return unknown(why);
  if (prefix.empty()) return is_valid(phi);

  Translator tr;
  pa::Formula f;
  try {
    f = tr.formula(fold_ground(phi));
  } catch (const std::exception& e) {
    return unknown(e.what());
  }
  if (tr.nonlinear()) {
    if (config_.smt_command.empty()) return unknown("nonlinear quantified constraint");
    SolverVerdict s = smt_backend(config_.smt_command, prefix, phi, config_.timeout_ms);
    SolverVerdict v;
    v.diagnostic = s.diagnostic;
    if (s.sat()) v.kind = VerdictKind::Valid;
    else if (s.unsat()) v.kind = VerdictKind::Invalid;
    return v;
  }

  // Free variables form an implicit outermost universal block.
  VarSet bound;
  for (const auto& b : prefix) bound.insert(b.vars.begin(), b.vars.end());
  std::vector<QuantBlock> blocks;
  QuantBlock outer{Quantifier::Forall, {}};
  for (const auto& x : vars(phi))
    if (!bound.count(x)) outer.vars.push_back(x);
  blocks.push_back(outer);
  for (const auto& b : prefix) {
    if (b.q == blocks.back().q) blocks.back().vars.insert(blocks.back().vars.end(), b.vars.begin(), b.vars.end());
    else blocks.push_back(b);
  }

  auto eliminate = [&](pa::Formula g, const QuantBlock& b) {
    for (const auto& x : b.vars) {
      auto it = tr.ids().find(x);
      if (it == tr.ids().end()) continue;
      bool is_bool = x.sort == Sort::boolean();
      if (b.q == Quantifier::Exists) g = is_bool ? pa::exists_bool(g, it->second) : pa::exists_int(g, it->second);
      else g = is_bool ? pa::forall_bool(g, it->second) : pa::forall_int(g, it->second);
    }
    return g;
  };
  for (std::size_t i = blocks.size(); i-- > 1;) f = eliminate(f, blocks[i]);

  // f now only mentions the outermost universal block.
  pa::Formula neg = pa::negate(f);
  std::vector<pa::VarId> ints, bools;
  for (const auto& x : blocks[0].vars) {
    auto it = tr.ids().find(x);
    if (it == tr.ids().end()) continue;
    (x.sort == Sort::boolean() ? bools : ints).push_back(it->second);
  }
  auto cex = pa::find_model(neg, ints, bools);
  SolverVerdict v;
  if (!cex) {
    v.kind = VerdictKind::Valid;
    return v;
  }
  v.kind = VerdictKind::Invalid;
  Valuation all = tr.valuation(*cex);
  for (const auto& x : blocks[0].vars) v.model[x] = all.count(x) ? all[x] : default_value(x.sort);
  return v;
}

std::vector<Valuation> Solver::models(const Term& phi, std::size_t limit, const VarSet& project) const {
  std::vector<Valuation> out;
  VarSet free = vars(phi);
  VarSet proj;
  for (const auto& x : (project.empty() ? free : project))
    if (free.count(x)) proj.insert(x);
  Term query = phi;
  while (out.size() < limit) {
    SolverVerdict v = is_satisfiable(query);
    if (!v.sat()) break;
    out.push_back(v.model);
    if (proj.empty()) break;
    std::vector<Term> differs;
    for (const auto& x : proj) differs.push_back(mk_ne(Term::variable(x), Term::value(v.model.at(x))));
    Term block = differs.front();
    for (std::size_t i = 1; i < differs.size(); ++i) block = mk_or(block, differs[i]);
    query = mk_and(query, block);
  }
  return out;
}

}  // namespace lctrs
