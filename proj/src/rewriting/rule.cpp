#include "lctrs/rewriting/rule.hpp"

#include <algorithm>
#include <stdexcept>

#include "lctrs/core/theory.hpp"
#include "lctrs/logic/interpret.hpp"

namespace lctrs {

std::string Rule::to_string() const {
  std::string s = lhs.to_string() + " -> " + rhs.to_string();
  if (!is_true(guard)) s += " [" + guard.to_string() + "]";
  return s;
}

Rule make_rule(Term lhs, Term rhs, Term guard) {
  if (lhs.sort() != rhs.sort())
    throw std::invalid_argument("rule sides have different sorts: " + lhs.sort().name() + " and " +
                                rhs.sort().name());
  if (guard.sort() != Sort::boolean()) throw std::invalid_argument("guard is not of sort Bool");
  if (!is_logical(guard)) throw std::invalid_argument("guard is not a logical term: " + guard.to_string());
  if (lhs.is_var() || lhs.symbol().is_theory())
    throw std::invalid_argument("root of left-hand side must be a term symbol: " + lhs.to_string());
  return Rule{std::move(lhs), std::move(rhs), std::move(guard), false};
}

VarSet vars(const Rule& rule) {
  VarSet out;
  collect_vars(rule.lhs, out);
  collect_vars(rule.rhs, out);
  collect_vars(rule.guard, out);
  return out;
}

VarSet logical_vars(const Rule& rule) {
  VarSet out = vars(rule.guard);
  VarSet left = vars(rule.lhs);
  for (const auto& x : vars(rule.rhs))
    if (!left.count(x)) out.insert(x);
  return out;
}

VarSet extra_vars(const Rule& rule) {
  VarSet left = vars(rule.lhs);
  VarSet guard = vars(rule.guard);
  VarSet out;
  for (const auto& x : vars(rule.rhs))
    if (!left.count(x) && !guard.count(x)) out.insert(x);
  return out;
}

Term extra_var_constraint(const Rule& rule) {
  std::vector<Term> parts;
  for (const auto& x : extra_vars(rule)) parts.push_back(mk_eq(Term::variable(x), Term::variable(x)));
  return conj(parts);
}

Rule substitute(const Rule& rule, const Substitution& sigma) {
  return Rule{sigma.apply(rule.lhs), sigma.apply(rule.rhs), sigma.apply(rule.guard), rule.calculation};
}

bool are_variants(const Rule& a, const Rule& b) {
  return variant_renaming({a.lhs, a.rhs, a.guard}, {b.lhs, b.rhs, b.guard}).has_value();
}

std::vector<Rule> calc_rules(const Signature& sig) {
  std::vector<Rule> out;
  for (const auto& f : sig.theory_symbols()) {
    std::vector<Term> args;
    for (std::size_t i = 0; i < f->arity(); ++i)
      args.push_back(Term::variable(Var{"x" + std::to_string(i + 1), 0, f->arg_sorts[i]}));
    Term lhs = Term::apply(f, args);
    Term y = Term::variable(Var{"y", 0, f->result_sort});
    out.push_back(Rule{lhs, y, mk_eq(y, lhs), true});
  }
  return out;
}

bool respects(const Substitution& sigma, const Rule& rule) {
  for (const auto& x : vars(rule))
    if (!sigma.contains(x)) return false;
  for (const auto& x : logical_vars(rule))
    if (!sigma.lookup(x)->is_value()) return false;
  auto v = try_interpret(sigma.apply(rule.guard));
  return v && v->as_bool();
}

Lctrs::Lctrs(Signature sig, std::vector<Rule> rules)
    : sig_(std::move(sig)), rules_(std::move(rules)), calc_(calc_rules(sig_)) {
  rc_ = rules_;
  rc_.insert(rc_.end(), calc_.begin(), calc_.end());
}

namespace {
void collect_literals(const Term& t, std::vector<Integer>& out) {
  if (t.is_var()) return;
  if (t.is_value() && t.value_of().is_int()) out.push_back(t.value_of().as_int());
  for (const auto& a : t.args()) collect_literals(a, out);
}
}  // namespace

std::vector<Integer> Lctrs::literals() const {
  std::vector<Integer> out;
  for (const auto& r : rules_) {
    collect_literals(r.lhs, out);
    collect_literals(r.rhs, out);
    collect_literals(r.guard, out);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace lctrs
