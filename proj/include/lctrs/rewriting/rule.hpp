#pragma once

#include <string>
#include <vector>

#include "lctrs/core/signature.hpp"
#include "lctrs/core/substitution.hpp"
#include "lctrs/core/term.hpp"

namespace lctrs {

/// A constrained rewrite rule ℓ → r [φ]. Calculation rules have a theory
/// symbol at the root of ℓ; all other rules have a term symbol there.
struct Rule {
  Term lhs;
  Term rhs;
  Term guard;
  bool calculation = false;

  std::string to_string() const;
};

/// Checks sorts and the root condition; throws std::invalid_argument.
Rule make_rule(Term lhs, Term rhs, Term guard);

VarSet vars(const Rule& rule);
/// Var(φ) ∪ (Var(r) ∖ Var(ℓ)).
VarSet logical_vars(const Rule& rule);
/// Var(r) ∖ (Var(ℓ) ∪ Var(φ)).
VarSet extra_vars(const Rule& rule);
/// ⋀ {x = x | x ∈ EVar}.
Term extra_var_constraint(const Rule& rule);

Rule substitute(const Rule& rule, const Substitution& sigma);
inline VarSet vars_of(const Rule& rule) { return vars(rule); }

/// True iff the rules are equal up to a variable renaming.
bool are_variants(const Rule& a, const Rule& b);

/// f(x₁,…,xₙ) → y [y = f(x₁,…,xₙ)] for every non-value theory symbol.
std::vector<Rule> calc_rules(const Signature& sig);

/// σ ⊨ ρ: σ covers all rule variables, maps LVar to values and makes φ true.
bool respects(const Substitution& sigma, const Rule& rule);

/// A signature with its user rules; R_rc adds the calculation rules.
class Lctrs {
 public:
  Lctrs() = default;
  Lctrs(Signature sig, std::vector<Rule> rules);

  const Signature& signature() const { return sig_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<Rule>& calc() const { return calc_; }
  /// R ∪ R_ca.
  const std::vector<Rule>& rc() const { return rc_; }

  /// Every integer literal occurring in a rule.
  std::vector<Integer> literals() const;

 private:
  Signature sig_;
  std::vector<Rule> rules_;
  std::vector<Rule> calc_;
  std::vector<Rule> rc_;
};

}  // namespace lctrs
