#pragma once

#include <string>
#include <vector>

#include "lctrs/core/term.hpp"
#include "lctrs/logic/solver.hpp"

namespace lctrs {

/// Three-valued answer of a semi-decision.
enum class Tri { Yes, No, Unknown };
std::string to_string(Tri t);

/// A constrained term s [φ]. Var(φ) are the logical variables; every other
/// variable of s is non-logical and is never renamed by ~.
struct CTerm {
  Term term;
  Term constraint;

  std::string to_string() const;
  friend bool operator==(const CTerm&, const CTerm&) = default;
};

/// s ≈ t as a term: a binary symbol ≈ whose argument positions 1 and 2 hold
/// the sides, so position filters ≥1 and ≥2 are prefix tests.
Term make_pair(const Term& s, const Term& t);
bool is_pair(const Term& t);
/// Prints `s ≈ t` for pair terms and the s-expression otherwise.
std::string show(const Term& t);

/// Decides s [φ] ~ t [ψ] by structural alignment and a ∀∃ query in each
/// direction. Unknown only when the solver cannot decide.
Tri equiv(const CTerm& a, const CTerm& b, const Solver& solver);

/// A ~-equivalent simplification: variables the constraint determines are
/// replaced by their values, and conjuncts that do not constrain the term are
/// dropped. Unsatisfiable or undecided constraints are only folded.
CTerm normalize(const CTerm& ct, const Solver& solver);

/// ~-equivalent reformulations: definitional extensions φ ∧ z = f(ū) for
/// theory subterms f(ū) of s with ū ⊆ Val ∪ Var(φ), one at a time and all
/// together, and optionally a renaming of the constraint variables.
std::vector<CTerm> equiv_extensions(const CTerm& ct, bool with_renaming = true);

/// Identifies constrained terms up to renaming of logical variables.
std::string canonical_key(const CTerm& ct);

}  // namespace lctrs
