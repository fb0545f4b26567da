#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lctrs/logic/solver.hpp"
#include "lctrs/rewriting/constrained.hpp"
#include "lctrs/rewriting/rule.hpp"
#include "lctrs/rewriting/steps.hpp"

namespace lctrs {

/// ⟨ρ₁, p, ρ₂⟩_σ: ℓ₁σ = ℓ₂|_p σ for variable-disjoint variants ρ₁, ρ₂.
struct Overlap {
  Rule rho1;
  Position position;
  Rule rho2;
  Substitution mgu;
};

/// ℓ₂σ[r₁σ]_p ≈ r₂σ [φ₁σ ∧ φ₂σ ∧ ψσ] with ψ = EC_ρ₁ ∧ EC_ρ₂.
struct CCPRecord {
  Overlap overlap;
  Term left;
  Term right;
  Term constraint;
  bool overlay = false;
  /// The peak source ℓ₂σ.
  Term source;
  /// Both rules are calculation rules (always trivial).
  bool calculation = false;
  /// Satisfiability of φ₁σ ∧ φ₂σ was undecided; the pair is kept.
  bool undecided = false;

  CTerm pair() const;
  std::string to_string() const;
};

/// ℓσ[r_pσ]_{p∈P} ≈ rσ [φσ ∧ ψσ ∧ ⋀φ_pσ].
struct CPCPRecord {
  Rule rho;
  std::vector<std::pair<Position, Rule>> inner;
  Substitution mgu;
  Term left;
  Term right;
  Term constraint;
  PositionSet positions;
  /// The peak source ℓσ.
  Term source;
  bool calculation = false;
  bool undecided = false;

  CTerm pair() const;
  std::string to_string() const;
};

std::vector<CCPRecord> ccps(const Lctrs& r, const Solver& solver);
std::vector<CPCPRecord> cpcps(const Lctrs& r, const Solver& solver);

/// Whether sσ = tσ for every σ ⊨ φ, for a pair term s ≈ t [φ].
Tri is_trivial(const CTerm& pair, const Solver& solver);
Tri is_trivial(const Term& s, const Term& t, const Term& phi, const Solver& solver);

/// TVar(t, φ, P): the variables of t below P that do not occur in φ.
VarSet tvar(const Term& t, const Term& phi, const PositionSet& positions);

enum class Closedness { Closed, NotClosed, Unknown };
std::string to_string(Closedness c);

/// Outcome of a closing search. `sequence` starts with the pair and ends in
/// a trivial pair when Closed; `q` holds the positions of the first step.
struct Closing {
  Closedness status = Closedness::NotClosed;
  std::vector<CTerm> sequence;
  PositionSet q;
  std::string reason;
};

struct ClosingLimits {
  /// Bound on the →̃ tail.
  int depth = 4;
  SearchLimits steps;
};

/// Almost development closedness: ○̃→_{≥1} to a trivial pair, followed for
/// overlays by up to `depth` →̃_{≥2} steps.
Closing dev_closed_check(const CCPRecord& ccp, const Lctrs& r, const Solver& solver, const ClosingLimits& limits = {});
/// ⊸̃→_{≥1} · →̃*_{≥2} to a trivial pair.
Closing parallel_closed_1(const CCPRecord& ccp, const Lctrs& r, const Solver& solver,
                          const ClosingLimits& limits = {});
/// ⊸̃→^Q_{≥2} · →̃*_{≥1} to a trivial u ≈ v [ψ] with
/// TVar(v, ψ, Q) ⊆ TVar(ℓσ, φ, P).
Closing parallel_closed_2(const CPCPRecord& cpcp, const Lctrs& r, const Solver& solver,
                          const ClosingLimits& limits = {});

/// Linear in the non-logical variables of every left-hand side.
bool is_left_linear(const Lctrs& r);
Tri is_weakly_orthogonal(const Lctrs& r, const Solver& solver);

enum class Criterion { WeakOrthogonality, AlmostDevelopmentClosed, ParallelClosed };
std::string to_string(Criterion c);
/// Accepts `wo`, `adc`, `pc` and the full names.
std::optional<Criterion> parse_criterion(const std::string& s);

struct AnalysisConfig {
  std::set<Criterion> criteria{Criterion::WeakOrthogonality, Criterion::AlmostDevelopmentClosed,
                               Criterion::ParallelClosed};
  ClosingLimits closing;
  /// Instantiation domain of the non-confluence search; default_domain if unset.
  std::optional<ValueDomain> domain;
  /// Worker threads for per-pair checks; 0 uses the hardware concurrency.
  unsigned threads = 0;
  /// Bounds of the non-confluence search.
  int peak_depth = 12;
  std::size_t peak_terms = 4096;
  std::size_t peak_samples = 8;
};

/// A peak s ← source → t whose sides have disjoint, fully explored reach sets.
struct PeakWitness {
  Term source;
  Term left;
  Term right;
  Valuation instance;
  std::size_t ccp_index = 0;
  std::vector<Term> left_normal_forms;
  std::vector<Term> right_normal_forms;
};

struct CriterionReport {
  Criterion criterion;
  Tri holds = Tri::Unknown;
  std::vector<std::string> reasons;
  /// Per-pair closings: CCPs first, then CPCPs for parallel closedness.
  std::vector<Closing> closings;
};

enum class VerdictKind3 { Yes, No, Maybe };

struct Verdict {
  VerdictKind3 kind = VerdictKind3::Maybe;
  std::optional<Criterion> criterion;
  std::optional<PeakWitness> witness;
  std::string to_string() const;
};

struct AnalysisResult {
  Verdict verdict;
  bool left_linear = false;
  std::vector<CCPRecord> ccps;
  std::vector<CPCPRecord> cpcps;
  std::vector<CriterionReport> criteria;
};

/// YES when the system is left-linear and a selected criterion holds; NO
/// when a ground peak has non-joinable sides; MAYBE otherwise.
AnalysisResult analyze(const Lctrs& r, const Solver& solver, const AnalysisConfig& config = {});

/// Bounded search for a non-joinable instance of a critical peak.
std::optional<PeakWitness> find_nonjoinable_peak(const Lctrs& r, const std::vector<CCPRecord>& pairs,
                                                 const Solver& solver, const AnalysisConfig& config = {});

}  // namespace lctrs
