#include "lctrs/rewriting/steps.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "lctrs/core/theory.hpp"
#include "lctrs/logic/interpret.hpp"

namespace lctrs {

// ---- ValueDomain ------------------------------------------------------------

ValueDomain ValueDomain::interval(const Integer& lo, const Integer& hi) {
  ValueDomain d;
  for (Integer i = lo; i <= hi; ++i) d.ints.push_back(i);
  return d;
}

ValueDomain ValueDomain::with(const std::vector<Integer>& extra) const {
  ValueDomain d = *this;
  d.ints.insert(d.ints.end(), extra.begin(), extra.end());
  std::sort(d.ints.begin(), d.ints.end());
  d.ints.erase(std::unique(d.ints.begin(), d.ints.end()), d.ints.end());
  return d;
}

std::vector<Value> ValueDomain::of(const Sort& s) const {
  if (s == Sort::boolean()) return {Value(false), Value(true)};
  if (s == Sort::integer()) return {ints.begin(), ints.end()};
  return {};
}

bool ValueDomain::contains(const Value& v) const {
  if (v.is_bool()) return true;
  return std::binary_search(ints.begin(), ints.end(), v.as_int());
}

std::string ValueDomain::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < ints.size(); ++i) s += (i ? "," : "") + ints[i].str();
  return s + "}";
}

ValueDomain default_domain(const Lctrs& r) { return ValueDomain::interval(-4, 4).with(r.literals()); }

// ---- Shared helpers -----------------------------------------------------------

namespace {

constexpr std::size_t kMaxAssignments = 64;

Rule renamed_apart(const Rule& r, const VarSet& avoid) {
  VarSet rv = vars(r);
  bool clash = std::any_of(rv.begin(), rv.end(), [&](const Var& x) { return avoid.count(x) != 0; });
  return clash ? substitute(r, fresh_renaming(rv)) : r;
}

/// All combinations of per-variable candidates extending σ, capped.
std::vector<Substitution> combine(const Substitution& sigma, const std::vector<Var>& xs,
                                  const std::vector<std::vector<Term>>& options) {
  std::vector<Substitution> out{sigma};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<Substitution> next;
    for (const auto& s : out)
      for (const auto& t : options[i]) {
        if (next.size() >= kMaxAssignments) break;
        Substitution e = s;
        e.bind(xs[i], t);
        next.push_back(std::move(e));
      }
    out = std::move(next);
  }
  return out;
}

void add_unique(std::vector<Term>& v, const Term& t) {
  if (std::find(v.begin(), v.end(), t) == v.end()) v.push_back(t);
}

bool below(const Position& p, const std::optional<Position>& within) {
  return !within || within->is_prefix_of(p);
}

/// p is on a path leading into `within`, or already below it.
bool relevant(const Position& p, const std::optional<Position>& within) {
  return !within || within->is_prefix_of(p) || p.is_prefix_of(*within);
}

}  // namespace

// ---- Plain rewriting ----------------------------------------------------------

std::vector<RuleMatch> plain_root_matches(const Term& t, const std::vector<Rule>& rules, const ValueDomain& d,
                                          const Solver& solver, bool* complete) {
  std::vector<RuleMatch> out;
  if (t.is_var() || t.is_value()) return out;
  VarSet avoid = vars(t);
  for (const auto& original : rules) {
    if (!same_symbol(original.lhs.symbol(), t.symbol())) continue;
    Rule rule = renamed_apart(original, avoid);
    auto sigma = match(rule.lhs, t);
    if (!sigma) continue;
    VarSet lv = logical_vars(rule);
    VarSet left = vars(rule.lhs);
    bool ok = true;
    for (const auto& x : lv)
      if (left.count(x) && !sigma->lookup(x)->is_value()) ok = false;
    if (!ok) continue;

    std::vector<Var> extra, guard_only;
    VarSet ev = extra_vars(rule);
    for (const auto& x : lv) {
      if (left.count(x)) continue;
      (ev.count(x) ? extra : guard_only).push_back(x);
    }

    std::vector<Substitution> candidates;
    if (rule.calculation) {
      auto v = try_interpret(sigma->apply(rule.lhs));
      if (!v) continue;
      Substitution s = *sigma;
      s.bind(rule.rhs.var(), Term::value(*v));
      candidates.push_back(std::move(s));
    } else {
      std::vector<std::vector<Term>> options;
      for (const auto& x : extra) {
        std::vector<Term> vs;
        for (const auto& v : d.of(x.sort)) vs.push_back(Term::value(v));
        if (x.sort != Sort::boolean() && complete) *complete = false;
        options.push_back(std::move(vs));
      }
      std::vector<Substitution> guard_sols;
      if (guard_only.empty()) {
        guard_sols.push_back(*sigma);
      } else {
        Term g = sigma->apply(rule.guard);
        VarSet project(guard_only.begin(), guard_only.end());
        constexpr std::size_t kModels = 8;
        auto models = solver.models(g, kModels, project);
        if (models.size() >= kModels && complete) *complete = false;
        std::set<std::string> seen;
        auto push = [&](const Substitution& s) {
          if (seen.insert(s.to_string()).second) guard_sols.push_back(s);
        };
        for (const auto& m : models) {
          Substitution s = *sigma;
          for (const auto& x : guard_only) s.bind(x, Term::value(m.at(x)));
          push(s);
        }
        if (guard_only.size() <= 2) {
          std::vector<std::vector<Term>> dom;
          for (const auto& x : guard_only) {
            std::vector<Term> vs;
            for (const auto& v : d.of(x.sort)) vs.push_back(Term::value(v));
            dom.push_back(std::move(vs));
          }
          for (const auto& s : combine(*sigma, guard_only, dom)) {
            auto v = try_interpret(s.apply(rule.guard));
            if (v && v->as_bool()) push(s);
          }
        }
      }
      for (const auto& s : guard_sols)
        for (auto& c : combine(s, extra, options)) candidates.push_back(std::move(c));
    }
    for (auto& s : candidates)
      if (respects(s, rule)) out.push_back(RuleMatch{rule, std::move(s), {}});
  }
  return out;
}

Successors plain_successors(const Term& s, const std::vector<Rule>& rules, const ValueDomain& d,
                            const Solver& solver) {
  Successors out;
  std::unordered_set<Term, TermHash> seen;
  for (const auto& p : positions(s, PositionFilter::Function)) {
    const Term& sub = subterm_at(s, p);
    if (sub.is_value()) continue;
    for (auto& m : plain_root_matches(sub, rules, d, solver, &out.complete)) {
      Term t = replace_at(s, p, m.sigma.apply(m.rule.rhs));
      if (!seen.insert(t).second) continue;
      out.items.push_back(Successor{t, StepRecord{StepFlavor::Plain, p, m.rule, m.sigma, {p}}});
    }
  }
  return out;
}

// ---- Constrained rewriting ----------------------------------------------------

std::vector<Term> ReachSet::path_to(std::size_t i) const {
  std::vector<Term> path{terms[i]};
  while (parent[i] != i) {
    i = parent[i];
    path.push_back(terms[i]);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<Term> ReachSet::normal_forms() const {
  std::vector<Term> out;
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (normal[i]) out.push_back(terms[i]);
  return out;
}

bool ReachSet::contains(const Term& t) const { return std::find(terms.begin(), terms.end(), t) != terms.end(); }

ReachSet reach(const Term& s, const std::vector<Rule>& rules, const ValueDomain& d, const Solver& solver,
               int max_depth, std::size_t max_terms) {
  ReachSet r;
  std::unordered_map<Term, std::size_t, TermHash> index{{s, 0}};
  r.terms.push_back(s);
  r.parent.push_back(0);
  r.normal.push_back(false);
  std::vector<int> depth{0};
  for (std::size_t i = 0; i < r.terms.size(); ++i) {
    auto succ = plain_successors(r.terms[i], rules, d, solver);
    if (!succ.complete) r.closed = false;
    r.normal[i] = succ.complete && succ.items.empty();
    if (depth[i] >= max_depth) {
      if (!succ.items.empty()) r.closed = false;
      continue;
    }
    for (const auto& x : succ.items) {
      if (index.count(x.term)) continue;
      if (r.terms.size() >= max_terms) {
        r.closed = false;
        break;
      }
      index.emplace(x.term, r.terms.size());
      r.terms.push_back(x.term);
      r.parent.push_back(i);
      r.normal.push_back(false);
      depth.push_back(depth[i] + 1);
    }
  }
  return r;
}

std::vector<RuleMatch> constrained_root_matches(const Term& t, const Term& phi, const std::vector<Rule>& rules,
                                                const Solver& solver, bool fresh_extra) {
  std::vector<RuleMatch> out;
  if (t.is_var() || t.is_value()) return out;
  VarSet logical = vars(phi);
  VarSet avoid = vars(t);
  avoid.insert(logical.begin(), logical.end());
  auto admissible = [&](const Term& u) { return u.is_value() || (u.is_var() && logical.count(u.var())); };

  for (const auto& original : rules) {
    if (!same_symbol(original.lhs.symbol(), t.symbol())) continue;
    Rule rule = renamed_apart(original, avoid);
    auto sigma = match(rule.lhs, t);
    if (!sigma) continue;
    VarSet lv = logical_vars(rule);
    VarSet left = vars(rule.lhs);
    bool ok = true;
    for (const auto& x : lv)
      if (left.count(x) && !admissible(*sigma->lookup(x))) ok = false;
    if (!ok) continue;

    VarSet ev = extra_vars(rule);
    std::vector<Var> open;
    std::vector<std::vector<Term>> options;
    std::vector<Term> extension;
    Substitution base = *sigma;
    for (const auto& x : lv) {
      if (left.count(x) || !ev.count(x)) continue;
      if (fresh_extra) {
        Term z = Term::variable(fresh_var(x));
        base.bind(x, z);
        extension.push_back(mk_eq(z, z));
      } else {
        std::vector<Term> vs;
        for (const auto& y : logical)
          if (y.sort == x.sort) vs.push_back(Term::variable(y));
        open.push_back(x);
        options.push_back(std::move(vs));
      }
    }
    std::vector<Var> guard_only;
    for (const auto& x : lv)
      if (!left.count(x) && !ev.count(x)) guard_only.push_back(x);
    if (!guard_only.empty()) {
      Term g = base.apply(rule.guard);
      auto model = solver.is_satisfiable(mk_and(phi, g));
      if (model.unsat()) continue;
      for (const auto& x : guard_only) {
        std::vector<Term> vs;
        for (const auto& y : logical)
          if (y.sort == x.sort) vs.push_back(Term::variable(y));
        if (model.sat()) add_unique(vs, Term::value(model.model.at(x)));
        open.push_back(x);
        options.push_back(std::move(vs));
      }
    }
    for (auto& s : combine(base, open, options)) {
      auto v = solver.is_valid(mk_implies(phi, s.apply(rule.guard)));
      if (v.valid()) out.push_back(RuleMatch{rule, std::move(s), extension});
    }
  }
  return out;
}

std::vector<CSuccessor> cstep(const CTerm& s, const std::vector<Rule>& rules, const Solver& solver,
                              const std::optional<Position>& within) {
  std::vector<CSuccessor> out;
  if (!solver.is_satisfiable(s.constraint).sat()) return out;
  for (const auto& p : positions(s.term, PositionFilter::Function)) {
    if (!below(p, within)) continue;
    for (auto& m : constrained_root_matches(subterm_at(s.term, p), s.constraint, rules, solver, false)) {
      Term t = replace_at(s.term, p, m.sigma.apply(m.rule.rhs));
      out.push_back(CSuccessor{CTerm{t, s.constraint},
                               StepRecord{StepFlavor::Constrained, p, m.rule, m.sigma, {p}}});
    }
  }
  return out;
}

namespace {

Term extend(const Term& phi, const std::vector<Term>& ext) {
  if (ext.empty()) return phi;
  std::vector<Term> parts = ext;
  if (!is_true(phi)) parts.push_back(phi);
  return conj(parts);
}

/// The starting points of a ~-step: s, its normal form and the definitional
/// extensions of the normal form.
std::vector<CTerm> tilde_bases(const CTerm& s, const Solver& solver) {
  std::vector<CTerm> bases{s};
  CTerm n = normalize(s, solver);
  std::set<std::string> keys{canonical_key(s)};
  if (keys.insert(canonical_key(n)).second) bases.push_back(n);
  for (auto& e : equiv_extensions(n, false)) bases.push_back(std::move(e));
  return bases;
}

}  // namespace

std::vector<CSuccessor> cstep_tilde(const CTerm& s, const std::vector<Rule>& rules, const Solver& solver,
                                    const std::optional<Position>& within) {
  std::vector<CSuccessor> out;
  std::set<std::string> seen;
  for (const auto& b : tilde_bases(s, solver)) {
    if (!solver.is_satisfiable(b.constraint).sat()) continue;
    for (const auto& p : positions(b.term, PositionFilter::Function)) {
      if (!below(p, within)) continue;
      for (auto& m : constrained_root_matches(subterm_at(b.term, p), b.constraint, rules, solver, true)) {
        CTerm r{replace_at(b.term, p, m.sigma.apply(m.rule.rhs)), extend(b.constraint, m.extension)};
        r = normalize(r, solver);
        if (!seen.insert(canonical_key(r)).second) continue;
        out.push_back(CSuccessor{std::move(r), StepRecord{StepFlavor::Constrained, p, m.rule, m.sigma, {p}}});
      }
    }
  }
  return out;
}

// ---- Parallel and multi-steps -----------------------------------------------

namespace {

struct Partial {
  Term term;
  PositionSet positions;
  std::vector<Term> extension;
};

using Matcher = std::function<std::vector<RuleMatch>(const Term&)>;

class StepEngine {
 public:
  StepEngine(Matcher matcher, std::optional<Position> within, const SearchLimits& limits)
      : matcher_(std::move(matcher)), within_(std::move(within)), limits_(limits) {}

  std::vector<Partial> parallel(const Term& t, const Position& p) { return run(t, p, false, 0); }
  std::vector<Partial> multi(const Term& t, const Position& p) { return run(t, p, true, limits_.multi_depth); }

 private:
  std::vector<Partial> run(const Term& t, const Position& p, bool multi, int depth) {
    std::vector<Partial> out{{t, {}, {}}};
    if (t.is_var() || t.is_value() || !relevant(p, within_)) return out;
    if (below(p, within_) && (!multi || depth > 0)) {
      for (const auto& m : matcher_(t)) {
        if (out.size() >= limits_.max_results) break;
        if (!multi) {
          out.push_back({m.sigma.apply(m.rule.rhs), {p}, m.extension});
          continue;
        }
        // Case 3: ℓσ ○→ rτ with σ(x) ○→ τ(x) for the non-logical variables.
        VarSet lv = logical_vars(m.rule);
        std::vector<Partial> taus{{Term(), {p}, m.extension}};
        std::vector<Substitution> subs{m.sigma};
        for (const auto& x : vars(m.rule.lhs)) {
          if (lv.count(x)) continue;
          auto inner = run(*m.sigma.lookup(x), p, true, depth - 1);
          std::vector<Substitution> next_subs;
          std::vector<Partial> next_taus;
          for (std::size_t i = 0; i < subs.size(); ++i)
            for (const auto& r : inner) {
              if (next_subs.size() >= limits_.max_results) break;
              Substitution s = subs[i];
              s.bind(x, r.term);
              next_subs.push_back(std::move(s));
              Partial q = taus[i];
              q.extension.insert(q.extension.end(), r.extension.begin(), r.extension.end());
              next_taus.push_back(std::move(q));
            }
          subs = std::move(next_subs);
          taus = std::move(next_taus);
        }
        for (std::size_t i = 0; i < subs.size() && out.size() < limits_.max_results; ++i)
          out.push_back({subs[i].apply(m.rule.rhs), {p}, taus[i].extension});
      }
    }
    // Congruence: combine independent results of the arguments.
    std::vector<Partial> combos{{Term(), {}, {}}};
    std::vector<std::vector<Term>> arg_lists{{}};
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      auto kids = run(t.args()[i], p.child(static_cast<int>(i + 1)), multi, depth);
      std::vector<Partial> next;
      std::vector<std::vector<Term>> next_args;
      for (std::size_t j = 0; j < combos.size(); ++j)
        for (const auto& k : kids) {
          if (next.size() >= limits_.max_results) break;
          Partial c = combos[j];
          c.positions.insert(k.positions.begin(), k.positions.end());
          c.extension.insert(c.extension.end(), k.extension.begin(), k.extension.end());
          auto args = arg_lists[j];
          args.push_back(k.term);
          next.push_back(std::move(c));
          next_args.push_back(std::move(args));
        }
      combos = std::move(next);
      arg_lists = std::move(next_args);
    }
    for (std::size_t j = 0; j < combos.size() && out.size() < limits_.max_results; ++j) {
      if (combos[j].positions.empty()) continue;
      combos[j].term = Term::apply(t.symbol_ref(), arg_lists[j]);
      out.push_back(std::move(combos[j]));
    }
    return out;
  }

  Matcher matcher_;
  std::optional<Position> within_;
  SearchLimits limits_;
};

std::vector<ParallelResult> plain_results(std::vector<Partial> parts) {
  std::vector<ParallelResult> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (auto& p : parts)
    if (seen.insert({p.term.to_string(), to_string(p.positions)}).second)
      out.push_back(ParallelResult{std::move(p.term), std::move(p.positions)});
  return out;
}

Matcher plain_matcher(const std::vector<Rule>& rules, const ValueDomain& d, const Solver& solver) {
  return [&rules, &d, &solver](const Term& t) { return plain_root_matches(t, rules, d, solver); };
}

Matcher constrained_matcher(const std::vector<Rule>& rules, const Term& phi, const Solver& solver, bool fresh) {
  return [&rules, phi, &solver, fresh](const Term& t) {
    return constrained_root_matches(t, phi, rules, solver, fresh);
  };
}

enum class Shape { Parallel, Multi };

std::vector<CParallelResult> constrained_steps(const CTerm& s, const std::vector<Rule>& rules,
                                               const Solver& solver, const std::optional<Position>& within,
                                               const SearchLimits& limits, Shape shape, bool tilde) {
  std::vector<CParallelResult> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<CTerm> bases = tilde ? tilde_bases(s, solver) : std::vector<CTerm>{s};
  for (const auto& b : bases) {
    if (!solver.is_satisfiable(b.constraint).sat()) continue;
    StepEngine engine(constrained_matcher(rules, b.constraint, solver, tilde), within, limits);
    auto parts = shape == Shape::Parallel ? engine.parallel(b.term, Position()) : engine.multi(b.term, Position());
    for (auto& p : parts) {
      CTerm r{p.term, extend(b.constraint, p.extension)};
      if (tilde) r = normalize(r, solver);
      std::string key = tilde ? canonical_key(r) : r.to_string();
      if (!seen.insert({key, to_string(p.positions)}).second) continue;
      out.push_back(CParallelResult{std::move(r), std::move(p.positions)});
    }
  }
  return out;
}

}  // namespace

std::vector<ParallelResult> parallel_with(const Term& s, const RootMatcher& matcher, const SearchLimits& limits) {
  StepEngine engine(matcher, std::nullopt, limits);
  return plain_results(engine.parallel(s, Position()));
}

std::vector<ParallelResult> multi_with(const Term& s, const RootMatcher& matcher, const SearchLimits& limits) {
  StepEngine engine(matcher, std::nullopt, limits);
  return plain_results(engine.multi(s, Position()));
}

std::vector<ParallelResult> parallel_successors(const Term& s, const std::vector<Rule>& rules,
                                                const ValueDomain& d, const Solver& solver,
                                                const SearchLimits& limits) {
  StepEngine engine(plain_matcher(rules, d, solver), std::nullopt, limits);
  return plain_results(engine.parallel(s, Position()));
}

std::vector<ParallelResult> multi_successors(const Term& s, const std::vector<Rule>& rules,
                                             const ValueDomain& d, const Solver& solver,
                                             const SearchLimits& limits) {
  StepEngine engine(plain_matcher(rules, d, solver), std::nullopt, limits);
  return plain_results(engine.multi(s, Position()));
}

std::vector<CParallelResult> parallel_tilde(const CTerm& s, const std::vector<Rule>& rules, const Solver& solver,
                                            const std::optional<Position>& within, const SearchLimits& limits) {
  return constrained_steps(s, rules, solver, within, limits, Shape::Parallel, true);
}

std::vector<CParallelResult> multi_tilde(const CTerm& s, const std::vector<Rule>& rules, const Solver& solver,
                                         const std::optional<Position>& within, const SearchLimits& limits) {
  return constrained_steps(s, rules, solver, within, limits, Shape::Multi, true);
}

std::vector<CParallelResult> parallel_constrained(const CTerm& s, const std::vector<Rule>& rules,
                                                  const Solver& solver, const std::optional<Position>& within,
                                                  const SearchLimits& limits) {
  return constrained_steps(s, rules, solver, within, limits, Shape::Parallel, false);
}

std::vector<CParallelResult> multi_constrained(const CTerm& s, const std::vector<Rule>& rules,
                                               const Solver& solver, const std::optional<Position>& within,
                                               const SearchLimits& limits) {
  return constrained_steps(s, rules, solver, within, limits, Shape::Multi, false);
}

}  // namespace lctrs
