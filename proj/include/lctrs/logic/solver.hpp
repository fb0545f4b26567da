#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lctrs/core/term.hpp"
#include "lctrs/logic/interpret.hpp"

namespace lctrs {

enum class VerdictKind { Valid, Invalid, Sat, Unsat, Unknown };

/// Result of a satisfiability or validity query. For Sat the model satisfies
/// the query; for Invalid it falsifies it. Models cover every free variable.
struct SolverVerdict {
  VerdictKind kind = VerdictKind::Unknown;
  Valuation model;
  std::string diagnostic;

  bool valid() const { return kind == VerdictKind::Valid; }
  bool invalid() const { return kind == VerdictKind::Invalid; }
  bool sat() const { return kind == VerdictKind::Sat; }
  bool unsat() const { return kind == VerdictKind::Unsat; }
  bool unknown() const { return kind == VerdictKind::Unknown; }
};

std::string to_string(VerdictKind k);

enum class Quantifier { Forall, Exists };

struct QuantBlock {
  Quantifier q;
  std::vector<Var> vars;
};

struct SolverConfig {
  /// Shell command of an SMT-LIB 2 solver reading a script on stdin,
  /// e.g. "z3 -in". Empty means internal procedure only.
  std::string smt_command;
  int timeout_ms = 2000;
};

/// Satisfiability, validity and ∀∃-validity of constraints over Int/Bool.
///
/// Linear queries are decided internally by Cooper's quantifier elimination.
/// Products of two non-literal terms are abstracted; an abstract Unsat is
/// trusted, otherwise the query goes to the external backend if configured,
/// and is Unknown if not. Queries are cached; the object is thread-safe.
class Solver {
 public:
  explicit Solver(SolverConfig config = {});

  SolverVerdict is_satisfiable(const Term& phi) const;
  SolverVerdict is_valid(const Term& phi) const;
  /// Validity of Q₁X₁ … QₙXₙ. φ; variables free in φ and bound by no block
  /// are universally quantified outermost.
  SolverVerdict is_valid_quantified(const std::vector<QuantBlock>& prefix, const Term& phi) const;

  /// Up to `limit` distinct models of φ, each differing from the previous
  /// ones on `project` (all free variables if empty).
  std::vector<Valuation> models(const Term& phi, std::size_t limit, const VarSet& project = {}) const;

  const SolverConfig& config() const { return config_; }

 private:
  SolverVerdict satisfiable_uncached(const Term& phi) const;

  SolverConfig config_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

/// Internal procedure only, no preprocessing shortcuts beyond translation.
/// Unknown for nonlinear input.
SolverVerdict internal_satisfiable(const Term& phi);

/// SMT-LIB 2 script for a quantifier-free or prenex query.
std::string smtlib_script(const std::vector<QuantBlock>& prefix, const Term& phi);
std::string to_smtlib(const Term& t);

/// Runs the external solver on φ (quantifier-free: satisfiability;
/// with a prefix: truth of the closed sentence, Sat meaning true).
/// Returned models are re-checked with interpret.
SolverVerdict smt_backend(const std::string& command, const std::vector<QuantBlock>& prefix,
                          const Term& phi, int timeout_ms);

}  // namespace lctrs
