#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lctrs/logic/solver.hpp"
#include "lctrs/rewriting/rule.hpp"
#include "lctrs/rewriting/steps.hpp"

namespace lctrs {

/// Outcome of a randomized property suite.
struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty() && cases > 0; }
  std::string summary() const;
};

/// Soundness and generality of unify: random pairs, plus pairs built as a
/// term and a generalization of one of its instances, whose known unifier
/// must be an instance of the computed one.
SuiteResult unification_suite(std::size_t cases = 1000, unsigned seed = 1);

/// ⟦f(t₁,…,tₙ)⟧ = f_J(⟦t₁⟧,…,⟦tₙ⟧) on random ground theory terms, checked
/// against a reference evaluator.
SuiteResult interpret_suite(std::size_t cases = 500, unsigned seed = 1);

/// The internal procedure and an external SMT solver agree on random
/// linear constraints; models of both are checked by evaluation.
SuiteResult solver_agreement_suite(const std::string& smt_command, std::size_t cases = 200, unsigned seed = 1,
                                   int timeout_ms = 5000);

/// encode(decode(n, N), N) = n for N ∈ [1, max_n], n ∈ [0, max_value].
SuiteResult encoding_suite(std::size_t max_n = 5, long max_value = 2000);

/// Critical pair correspondence and step equivalence of a system over D.
SuiteResult correspondence_suite(const Lctrs& r, const ValueDomain& d, const Solver& solver,
                                 std::size_t samples = 200);

}  // namespace lctrs
