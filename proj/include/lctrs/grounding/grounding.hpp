#pragma once

#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lctrs/analysis/analysis.hpp"
#include "lctrs/logic/solver.hpp"
#include "lctrs/rewriting/rule.hpp"
#include "lctrs/rewriting/steps.hpp"

namespace lctrs {

/// The rules of R̄ whose instantiating values lie in D: ℓτ → rτ for
/// τ ⊨ ρ with Dom(τ) = LVar(ρ), and f(v̄) → ⟦f(v̄)⟧ for v̄ ∈ Dⁿ.
struct GroundFragment {
  Lctrs source;
  ValueDomain domain;
  /// Instances of the rules of R, grouped by rule in rule order.
  std::vector<Rule> rules;
  /// Index in source.rules() of the rule each instance comes from.
  std::vector<std::size_t> origin;
  /// Calculation instances.
  std::vector<Rule> calc;

  std::vector<Rule> all() const;
};

GroundFragment ground_fragment(const Lctrs& r, const ValueDomain& d);

/// A critical pair of a TRS. Parallel critical pairs set `positions`.
struct PlainCP {
  Term left;
  Term right;
  bool overlay = false;
  Term source;
  PositionSet positions;

  std::string to_string() const;
};

/// Critical pairs ℓ₂σ[r₁σ]_p ≈ r₂σ of the fragment, excluding root
/// overlaps of variants, up to renaming.
std::vector<PlainCP> trs_cps(const GroundFragment& f);
/// Parallel critical pairs ℓσ[r_pσ]_{p∈P} ≈ rσ of the fragment.
std::vector<PlainCP> trs_pcps(const GroundFragment& f);

/// One-step successors by the fragment rules, indexed by root symbol.
class TrsStepper {
 public:
  explicit TrsStepper(std::vector<Rule> rules);

  std::vector<Term> successors(const Term& t) const;
  std::vector<Term> root_successors(const Term& t) const;
  std::vector<RuleMatch> root_matches(const Term& t) const;
  /// Reducts within `depth` steps; `closed` when nothing was cut off.
  ReachSet reach(const Term& t, int depth, std::size_t max_terms) const;
  /// ⊸→ and ○→ results with the contracted outermost positions.
  std::vector<ParallelResult> parallel(const Term& t, std::size_t max_results = 4096) const;
  std::vector<ParallelResult> multi(const Term& t, int nesting = 3, std::size_t max_results = 4096) const;

 private:
  std::vector<Rule> rules_;
  std::map<std::string, std::vector<std::size_t>> by_root_;
};

enum class JoinKind { Joinable, NotWithinBound, DisjointNormalForms };
std::string to_string(JoinKind k);

struct Joinability {
  JoinKind kind = JoinKind::NotWithinBound;
  /// s →* u and t →* u for the meeting term u, when joinable.
  std::vector<Term> left_path;
  std::vector<Term> right_path;
};

Joinability joinable(const TrsStepper& f, const Term& s, const Term& t, int depth, std::size_t max_terms = 4096);
Joinability joinable(const GroundFragment& f, const Term& s, const Term& t, int depth);

struct CorrespondenceReport {
  std::size_t fragment_cps = 0;
  std::size_t fragment_pcps = 0;
  std::size_t samples = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Both directions of the critical pair correspondence on the fragment over
/// D: every fragment CP and PCP is an instance of a CCP or CPCP, and every
/// sampled instance of a CCP is trivial or an instance of a fragment CP.
CorrespondenceReport check_cp_correspondence(const Lctrs& r, const ValueDomain& d, const Solver& solver,
                                             std::size_t samples = 200);

struct StepReport {
  std::size_t samples = 0;
  std::size_t successors = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Compares →_R with →_F on sampled terms over D, keeping only R-steps
/// whose instantiating values lie in D.
StepReport check_step_equivalence(const Lctrs& r, const ValueDomain& d, const Solver& solver,
                                  std::size_t samples = 200, unsigned seed = 1);

struct TrsClosednessReport {
  bool development_closed = true;
  bool almost_development_closed = true;
  bool parallel_closed_1 = true;
  bool parallel_closed_2 = true;
  std::vector<std::string> failures;
  bool parallel_closed() const { return parallel_closed_1 && parallel_closed_2; }
};

/// The TRS criteria checked directly on the fragment's (parallel) critical
/// pairs; `depth` bounds the ←* and →* parts.
TrsClosednessReport trs_closedness_check(const GroundFragment& f, int depth = 4);

/// Random ground term of the given sort over the signature with values
/// from D, mixing in variables of non-theory sorts.
Term random_term(const Signature& sig, const Sort& sort, const ValueDomain& d, std::mt19937& rng, int depth);

}  // namespace lctrs
