#include "lctrs/logic/interpret.hpp"

namespace lctrs {

Value apply_op(Op op, const std::vector<Value>& a) {
  switch (op) {
    case Op::Add: return Value(a[0].as_int() + a[1].as_int());
    case Op::Sub: return Value(a[0].as_int() - a[1].as_int());
    case Op::Neg: return Value(Integer(-a[0].as_int()));
    case Op::Mul: return Value(a[0].as_int() * a[1].as_int());
    case Op::EqInt: return Value(a[0].as_int() == a[1].as_int());
    case Op::NeInt: return Value(a[0].as_int() != a[1].as_int());
    case Op::Lt: return Value(a[0].as_int() < a[1].as_int());
    case Op::Le: return Value(a[0].as_int() <= a[1].as_int());
    case Op::Gt: return Value(a[0].as_int() > a[1].as_int());
    case Op::Ge: return Value(a[0].as_int() >= a[1].as_int());
    case Op::EqBool: return Value(a[0].as_bool() == a[1].as_bool());
    case Op::NeBool: return Value(a[0].as_bool() != a[1].as_bool());
    case Op::And: return Value(a[0].as_bool() && a[1].as_bool());
    case Op::Or: return Value(a[0].as_bool() || a[1].as_bool());
    case Op::Not: return Value(!a[0].as_bool());
    case Op::Implies: return Value(!a[0].as_bool() || a[1].as_bool());
  }
  throw EvalError("unknown operator");
}

namespace {

Value eval(const Term& t, const Valuation* v) {
  if (t.is_var()) {
    if (v) {
      auto it = v->find(t.var());
      if (it != v->end()) return it->second;
    }
    throw EvalError("unassigned variable " + t.var().to_string());
  }
  if (t.is_value()) return t.value_of();
  auto op = theory_op(t.symbol());
  if (!op) throw EvalError("not a logical term: " + t.to_string());
  std::vector<Value> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(eval(a, v));
  return apply_op(*op, args);
}

}  // namespace

Value interpret(const Term& t) { return eval(t, nullptr); }

std::optional<Value> try_interpret(const Term& t) {
  if (!is_ground(t) || !is_logical(t)) return std::nullopt;
  return interpret(t);
}

Term fold_ground(const Term& t) {
  if (t.is_var() || t.args().empty()) return t;
  std::vector<Term> args;
  bool changed = false;
  bool all_values = true;
  for (const auto& a : t.args()) {
    args.push_back(fold_ground(a));
    if (!(args.back() == a)) changed = true;
    if (!args.back().is_value()) all_values = false;
  }
  if (all_values && t.symbol().kind == SymbolKind::Theory) {
    auto op = theory_op(t.symbol());
    if (op) {
      std::vector<Value> vs;
      for (const auto& a : args) vs.push_back(a.value_of());
      return Term::value(apply_op(*op, vs));
    }
  }
  return changed ? Term::apply(t.symbol_ref(), std::move(args)) : t;
}

Value evaluate(const Term& t, const Valuation& v) { return eval(t, &v); }

Term substitute_values(const Term& t, const Valuation& v) {
  if (t.is_var()) {
    auto it = v.find(t.var());
    return it == v.end() ? t : Term::value(it->second);
  }
  if (t.args().empty()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(substitute_values(a, v));
  return Term::apply(t.symbol_ref(), std::move(args));
}

std::string to_string(const Valuation& v) {
  std::string s = "{";
  bool first = true;
  for (const auto& [x, val] : v) {
    if (!first) s += ", ";
    first = false;
    s += x.to_string() + " ↦ " + val.to_string();
  }
  return s + "}";
}

}  // namespace lctrs
