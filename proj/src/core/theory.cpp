#include "lctrs/core/theory.hpp"

#include <array>
#include <map>

namespace lctrs {

namespace {

struct OpInfo {
  Op op;
  const char* name;
  std::vector<Sort> args;
  Sort result;
};

const std::vector<OpInfo>& op_table() {
  static const std::vector<OpInfo> table = [] {
    const Sort I = Sort::integer();
    const Sort B = Sort::boolean();
    return std::vector<OpInfo>{
        {Op::Add, "+", {I, I}, I},        {Op::Sub, "-", {I, I}, I},
        {Op::Neg, "-", {I}, I},           {Op::Mul, "*", {I, I}, I},
        {Op::EqInt, "=", {I, I}, B},      {Op::NeInt, "!=", {I, I}, B},
        {Op::Lt, "<", {I, I}, B},         {Op::Le, "<=", {I, I}, B},
        {Op::Gt, ">", {I, I}, B},         {Op::Ge, ">=", {I, I}, B},
        {Op::EqBool, "=", {B, B}, B},     {Op::NeBool, "!=", {B, B}, B},
        {Op::And, "and", {B, B}, B},      {Op::Or, "or", {B, B}, B},
        {Op::Not, "not", {B}, B},         {Op::Implies, "=>", {B, B}, B},
    };
  }();
  return table;
}

}  // namespace

const std::vector<SymbolRef>& theory_symbols() {
  static const std::vector<SymbolRef> syms = [] {
    std::vector<SymbolRef> out;
    for (const auto& info : op_table()) {
      auto f = std::make_shared<FunSym>();
      f->name = info.name;
      f->arg_sorts = info.args;
      f->result_sort = info.result;
      f->kind = SymbolKind::Theory;
      out.push_back(std::move(f));
    }
    return out;
  }();
  return syms;
}

const SymbolRef& theory_symbol(Op op) { return theory_symbols()[static_cast<std::size_t>(op)]; }

std::optional<Op> theory_op(const FunSym& f) {
  if (f.kind != SymbolKind::Theory) return std::nullopt;
  return resolve_theory(f.name, f.arg_sorts);
}

std::optional<Op> resolve_theory(const std::string& name, const std::vector<Sort>& arg_sorts) {
  for (const auto& info : op_table())
    if (name == info.name && arg_sorts == info.args) return info.op;
  return std::nullopt;
}

bool is_theory_name(const std::string& name) {
  for (const auto& info : op_table())
    if (name == info.name) return true;
  return false;
}

Term int_term(const Integer& i) { return Term::value(Value(i)); }
Term bool_term(bool b) { return Term::value(Value(b)); }

Term mk(Op op, std::vector<Term> args) { return Term::apply(theory_symbol(op), std::move(args)); }

Term mk_add(const Term& a, const Term& b) { return mk(Op::Add, {a, b}); }
Term mk_sub(const Term& a, const Term& b) { return mk(Op::Sub, {a, b}); }
Term mk_mul(const Term& a, const Term& b) { return mk(Op::Mul, {a, b}); }
Term mk_neg(const Term& a) { return mk(Op::Neg, {a}); }
Term mk_eq(const Term& a, const Term& b) {
  return mk(a.sort() == Sort::boolean() ? Op::EqBool : Op::EqInt, {a, b});
}
Term mk_ne(const Term& a, const Term& b) {
  return mk(a.sort() == Sort::boolean() ? Op::NeBool : Op::NeInt, {a, b});
}
Term mk_lt(const Term& a, const Term& b) { return mk(Op::Lt, {a, b}); }
Term mk_le(const Term& a, const Term& b) { return mk(Op::Le, {a, b}); }
Term mk_gt(const Term& a, const Term& b) { return mk(Op::Gt, {a, b}); }
Term mk_ge(const Term& a, const Term& b) { return mk(Op::Ge, {a, b}); }
Term mk_and(const Term& a, const Term& b) { return mk(Op::And, {a, b}); }
Term mk_or(const Term& a, const Term& b) { return mk(Op::Or, {a, b}); }
Term mk_not(const Term& a) { return mk(Op::Not, {a}); }
Term mk_implies(const Term& a, const Term& b) { return mk(Op::Implies, {a, b}); }

Term conj(const std::vector<Term>& parts) {
  std::vector<Term> kept;
  for (const auto& p : parts)
    if (!is_true(p)) kept.push_back(p);
  if (kept.empty()) return bool_term(true);
  Term acc = kept.back();
  for (auto it = std::next(kept.rbegin()); it != kept.rend(); ++it) acc = mk_and(*it, acc);
  return acc;
}

namespace {
void flatten(const Term& t, std::vector<Term>& out) {
  if (is_op(t, Op::And)) {
    flatten(t.args()[0], out);
    flatten(t.args()[1], out);
  } else {
    out.push_back(t);
  }
}
}  // namespace

std::vector<Term> conjuncts(const Term& phi) {
  std::vector<Term> out;
  flatten(phi, out);
  return out;
}

bool is_true(const Term& t) { return t.is_value() && t.value_of().is_bool() && t.value_of().as_bool(); }
bool is_false(const Term& t) { return t.is_value() && t.value_of().is_bool() && !t.value_of().as_bool(); }

bool is_op(const Term& t, Op op) {
  if (!t.is_app() || t.symbol().kind != SymbolKind::Theory) return false;
  if (t.symbol_ref().get() == theory_symbol(op).get()) return true;
  return theory_op(t.symbol()) == op;
}

}  // namespace lctrs
