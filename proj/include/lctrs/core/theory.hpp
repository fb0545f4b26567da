#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lctrs/core/term.hpp"

namespace lctrs {

/// Non-value theory symbols of the integer/boolean theory.
enum class Op {
  Add, Sub, Neg, Mul,
  EqInt, NeInt, Lt, Le, Gt, Ge,
  EqBool, NeBool, And, Or, Not, Implies,
};

/// The shared symbol object for op. There is exactly one per Op.
const SymbolRef& theory_symbol(Op op);
/// All sixteen non-value theory symbols, in Op order.
const std::vector<SymbolRef>& theory_symbols();
std::optional<Op> theory_op(const FunSym& f);
/// Resolves a surface name (`+`, `=`, `and`, ...) with argument sorts.
std::optional<Op> resolve_theory(const std::string& name, const std::vector<Sort>& arg_sorts);
bool is_theory_name(const std::string& name);

Term int_term(const Integer& i);
Term bool_term(bool b);
Term mk(Op op, std::vector<Term> args);

Term mk_add(const Term& a, const Term& b);
Term mk_sub(const Term& a, const Term& b);
Term mk_mul(const Term& a, const Term& b);
Term mk_neg(const Term& a);
/// `=` / `!=` pick the Int or Bool overload from the argument sort.
Term mk_eq(const Term& a, const Term& b);
Term mk_ne(const Term& a, const Term& b);
Term mk_lt(const Term& a, const Term& b);
Term mk_le(const Term& a, const Term& b);
Term mk_gt(const Term& a, const Term& b);
Term mk_ge(const Term& a, const Term& b);
Term mk_and(const Term& a, const Term& b);
Term mk_or(const Term& a, const Term& b);
Term mk_not(const Term& a);
Term mk_implies(const Term& a, const Term& b);

/// Right-associated conjunction with `true` components dropped.
Term conj(const std::vector<Term>& parts);
/// Flattens nested `and`.
std::vector<Term> conjuncts(const Term& phi);

bool is_true(const Term& t);
bool is_false(const Term& t);
bool is_op(const Term& t, Op op);

}  // namespace lctrs
