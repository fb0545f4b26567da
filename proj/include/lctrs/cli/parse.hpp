#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "lctrs/core/sexpr.hpp"
#include "lctrs/rewriting/constrained.hpp"
#include "lctrs/rewriting/rule.hpp"

namespace lctrs {

/// Reads a system in the s-expression format:
///
///   (theory Ints)
///   (sort S)
///   (fun f (S1 … Sn) S)
///   (rule LHS RHS)  or  (rule LHS RHS :guard C)
///
/// Undeclared identifiers are variables, scoped per rule, whose sorts are
/// inferred from their occurrences. Throws ParseError with a position.
Lctrs parse_lctrs(std::string_view text);

/// Prints the canonical document; parse_lctrs(print_lctrs(r)) reproduces r.
std::string print_lctrs(const Lctrs& r);

/// Reads a term and a constraint over a signature with shared variables.
/// `sort`, when given, is the expected sort of the term.
CTerm parse_cterm(const Signature& sig, std::string_view term, std::string_view constraint = "true",
                  const std::optional<Sort>& sort = std::nullopt);

}  // namespace lctrs
