#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lctrs/core/term.hpp"
#include "lctrs/core/theory.hpp"

namespace lctrs {

/// Raised when interpret is given a non-ground or non-logical term.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Valuation = std::map<Var, Value>;

/// f_J applied to values.
Value apply_op(Op op, const std::vector<Value>& args);

/// ⟦t⟧ for a ground logical term.
Value interpret(const Term& t);
std::optional<Value> try_interpret(const Term& t);

/// Replaces every maximal ground logical subterm by its value.
Term fold_ground(const Term& t);

/// Evaluates a logical term under a valuation; throws EvalError if a
/// variable is unassigned.
Value evaluate(const Term& t, const Valuation& v);
Term substitute_values(const Term& t, const Valuation& v);

std::string to_string(const Valuation& v);

}  // namespace lctrs
