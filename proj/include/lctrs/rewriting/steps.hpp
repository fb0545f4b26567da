#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lctrs/logic/solver.hpp"
#include "lctrs/rewriting/constrained.hpp"
#include "lctrs/rewriting/rule.hpp"

namespace lctrs {

/// Finite instantiation domain for variables that rewriting cannot determine
/// (extra variables, underdetermined guards). Bool always has both values.
struct ValueDomain {
  std::vector<Integer> ints;

  static ValueDomain interval(const Integer& lo, const Integer& hi);
  /// Adds values, keeping the list sorted and duplicate-free.
  ValueDomain with(const std::vector<Integer>& extra) const;
  std::vector<Value> of(const Sort& s) const;
  bool contains(const Value& v) const;
  std::string to_string() const;
};

/// [-4,4] together with every integer literal of the system.
ValueDomain default_domain(const Lctrs& r);

enum class StepFlavor { Plain, Constrained, Parallel, Multi };

/// Replayable description of a step. Single steps set `position`; parallel
/// and multi-steps list their outermost contracted positions in `positions`.
struct StepRecord {
  StepFlavor flavor = StepFlavor::Plain;
  Position position;
  Rule rule;
  Substitution sigma;
  PositionSet positions;
};

struct Successor {
  Term term;
  StepRecord step;
};

/// `complete` is false when some rule had infinitely many applicable
/// instantiations and only a finite part was produced.
struct Successors {
  std::vector<Successor> items;
  bool complete = true;
};

/// One-step →_R successors of a term. Calculation results are computed;
/// extra variables range over D; guard-only variables are solved exactly
/// when the guard determines them and otherwise drawn from D and models.
Successors plain_successors(const Term& s, const std::vector<Rule>& rules, const ValueDomain& d,
                            const Solver& solver);

/// Reducts of a term by →_R, breadth first. `closed` holds when every
/// reduct was expanded with complete successor sets within the bounds, so
/// `terms` is the full reduct set.
struct ReachSet {
  std::vector<Term> terms;
  /// Index of the predecessor of each term; the start has itself.
  std::vector<std::size_t> parent;
  std::vector<bool> normal;
  bool closed = true;

  std::vector<Term> path_to(std::size_t i) const;
  std::vector<Term> normal_forms() const;
  bool contains(const Term& t) const;
};

ReachSet reach(const Term& s, const std::vector<Rule>& rules, const ValueDomain& d, const Solver& solver,
               int max_depth, std::size_t max_terms);

/// A root match ℓσ = t of a (renamed) rule. For constrained matches
/// `extension` lists conjuncts x = x for fresh variables bound to extra
/// variables, i.e. a ~-step preceding the rewrite step.
struct RuleMatch {
  Rule rule;
  Substitution sigma;
  std::vector<Term> extension;
};

/// Root-step instantiations σ ⊨ ρ with ℓσ = t.
std::vector<RuleMatch> plain_root_matches(const Term& t, const std::vector<Rule>& rules, const ValueDomain& d,
                                          const Solver& solver, bool* complete = nullptr);

struct CSuccessor {
  CTerm result;
  StepRecord step;
};

struct SearchLimits {
  /// Case-3 nesting depth of multi-steps.
  int multi_depth = 3;
  /// Cap on results produced for a single term by parallel/multi-steps.
  std::size_t max_results = 512;
};

/// The constrained root matches of `rules` against t under φ, which must be
/// satisfiable. With `fresh_extra` extra variables get fresh logical
/// variables, otherwise they range over Var(φ).
std::vector<RuleMatch> constrained_root_matches(const Term& t, const Term& phi, const std::vector<Rule>& rules,
                                                const Solver& solver, bool fresh_extra);

/// s [φ] → s[rσ]_p [φ]. Only positions below `within` are rewritten.
std::vector<CSuccessor> cstep(const CTerm& s, const std::vector<Rule>& rules, const Solver& solver,
                              const std::optional<Position>& within = std::nullopt);

/// ~ · → · ~ using equiv_extensions and normalize as the ~-moves.
std::vector<CSuccessor> cstep_tilde(const CTerm& s, const std::vector<Rule>& rules, const Solver& solver,
                                    const std::optional<Position>& within = std::nullopt);

struct ParallelResult {
  Term term;
  PositionSet positions;
};

/// ⊸→ on terms (including the empty step).
std::vector<ParallelResult> parallel_successors(const Term& s, const std::vector<Rule>& rules,
                                                const ValueDomain& d, const Solver& solver,
                                                const SearchLimits& limits = {});
/// ○→ on terms (including the empty step).
std::vector<ParallelResult> multi_successors(const Term& s, const std::vector<Rule>& rules,
                                             const ValueDomain& d, const Solver& solver,
                                             const SearchLimits& limits = {});

struct CParallelResult {
  CTerm result;
  PositionSet positions;
};

/// ⊸→ and ○→ for a given root-step generator.
using RootMatcher = std::function<std::vector<RuleMatch>(const Term&)>;
std::vector<ParallelResult> parallel_with(const Term& s, const RootMatcher& matcher, const SearchLimits& limits = {});
std::vector<ParallelResult> multi_with(const Term& s, const RootMatcher& matcher, const SearchLimits& limits = {});

/// ⊸̃→ and ○̃→ on constrained terms, restricted to positions below `within`.
/// Results are normalized and include the empty step.
std::vector<CParallelResult> parallel_tilde(const CTerm& s, const std::vector<Rule>& rules,
                                            const Solver& solver,
                                            const std::optional<Position>& within = std::nullopt,
                                            const SearchLimits& limits = {});
std::vector<CParallelResult> multi_tilde(const CTerm& s, const std::vector<Rule>& rules, const Solver& solver,
                                         const std::optional<Position>& within = std::nullopt,
                                         const SearchLimits& limits = {});

/// The un-tilded relations on a fixed constraint φ (no ~-moves).
std::vector<CParallelResult> parallel_constrained(const CTerm& s, const std::vector<Rule>& rules,
                                                  const Solver& solver,
                                                  const std::optional<Position>& within = std::nullopt,
                                                  const SearchLimits& limits = {});
std::vector<CParallelResult> multi_constrained(const CTerm& s, const std::vector<Rule>& rules,
                                               const Solver& solver,
                                               const std::optional<Position>& within = std::nullopt,
                                               const SearchLimits& limits = {});

}  // namespace lctrs
