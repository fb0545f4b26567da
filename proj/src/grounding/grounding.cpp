#include "lctrs/grounding/grounding.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

#include "lctrs/core/theory.hpp"
#include "lctrs/logic/interpret.hpp"

namespace lctrs {

namespace {

constexpr std::size_t kMaxInstances = 1000000;
constexpr std::size_t kMaxCombinations = 100000;

/// Calls `each` with every assignment of options[i] to xs[i].
void for_each_assignment(const std::vector<Var>& xs, const std::vector<std::vector<Value>>& options,
                         const std::function<void(const Substitution&)>& each) {
  if (std::any_of(options.begin(), options.end(), [](const auto& o) { return o.empty(); })) return;
  std::vector<std::size_t> idx(xs.size(), 0);
  for (std::size_t n = 0; n < kMaxInstances; ++n) {
    Substitution s;
    for (std::size_t i = 0; i < xs.size(); ++i) s.bind(xs[i], Term::value(options[i][idx[i]]));
    each(s);
    std::size_t k = 0;
    while (k < xs.size() && ++idx[k] == options[k].size()) idx[k++] = 0;
    if (k == xs.size()) return;
  }
}

Rule rename_apart_from(const Rule& r, const VarSet& avoid) {
  VarSet rv = vars(r);
  bool clash = std::any_of(rv.begin(), rv.end(), [&](const Var& x) { return avoid.count(x) != 0; });
  return clash ? substitute(r, fresh_renaming(rv)) : r;
}

std::string root_key(const Term& t) { return t.symbol().name; }

bool variant_of_any(const Term& pair, const std::vector<Term>& seen) {
  return std::any_of(seen.begin(), seen.end(),
                     [&](const Term& s) { return variant_renaming({s}, {pair}).has_value(); });
}

/// Function positions that can host a redex (values never do).
std::vector<Position> redex_positions(const Term& t) {
  std::vector<Position> out;
  for (const auto& p : positions(t, PositionFilter::Function))
    if (!subterm_at(t, p).is_value()) out.push_back(p);
  return out;
}

std::vector<std::vector<Position>> parallel_subsets(const std::vector<Position>& all) {
  std::vector<std::vector<Position>> out;
  std::vector<Position> cur;
  std::function<void(std::size_t)> go = [&](std::size_t from) {
    for (std::size_t i = from; i < all.size(); ++i) {
      if (!std::all_of(cur.begin(), cur.end(), [&](const Position& q) { return q.parallel_to(all[i]); })) continue;
      cur.push_back(all[i]);
      out.push_back(cur);
      go(i + 1);
      cur.pop_back();
    }
  };
  go(0);
  return out;
}

VarSet vars_below(const Term& t, const PositionSet& ps) {
  VarSet out;
  for (const auto& p : ps) collect_vars(subterm_at(t, p), out);
  return out;
}

bool subset(const VarSet& a, const VarSet& b) {
  return std::all_of(a.begin(), a.end(), [&](const Var& x) { return b.count(x) != 0; });
}

/// γ with s'γ = u, t'γ = v and γ ⊨ φ', extending the match by a model.
bool instance_of(const Term& pattern, const Term& phi, const Term& subject, const Solver& solver) {
  auto delta = match(pattern, subject);
  if (!delta) return false;
  VarSet pv = vars(pattern);
  for (const auto& x : vars(phi))
    if (pv.count(x) && !delta->apply(Term::variable(x)).is_value()) return false;
  return solver.is_satisfiable(delta->apply(phi)).sat();
}

/// φ with every integer variable bounded by the range of D.
Term bounded(const Term& phi, const ValueDomain& d) {
  std::vector<Term> parts{phi};
  if (d.ints.empty()) return phi;
  for (const auto& x : vars(phi))
    if (x.sort == Sort::integer()) {
      parts.push_back(mk_le(int_term(d.ints.front()), Term::variable(x)));
      parts.push_back(mk_le(Term::variable(x), int_term(d.ints.back())));
    }
  return conj(parts);
}

bool within_domain(const Valuation& v, const ValueDomain& d) {
  return std::all_of(v.begin(), v.end(), [&](const auto& kv) { return d.contains(kv.second); });
}

}  // namespace

// ---- Fragment -----------------------------------------------------------------------

std::vector<Rule> GroundFragment::all() const {
  std::vector<Rule> out = rules;
  out.insert(out.end(), calc.begin(), calc.end());
  return out;
}

GroundFragment ground_fragment(const Lctrs& r, const ValueDomain& d) {
  GroundFragment f{r, d, {}, {}, {}};
  for (std::size_t k = 0; k < r.rules().size(); ++k) {
    const Rule& rule = r.rules()[k];
    VarSet lv = logical_vars(rule);
    std::vector<Var> xs(lv.begin(), lv.end());
    std::vector<std::vector<Value>> options;
    for (const auto& x : xs) options.push_back(d.of(x.sort));
    std::set<std::pair<Term, Term>> seen;
    for_each_assignment(xs, options, [&](const Substitution& tau) {
      auto g = try_interpret(tau.apply(rule.guard));
      if (!g || !g->as_bool()) return;
      Rule inst{tau.apply(rule.lhs), tau.apply(rule.rhs), bool_term(true), false};
      if (!seen.insert({inst.lhs, inst.rhs}).second) return;
      f.rules.push_back(std::move(inst));
      f.origin.push_back(k);
    });
  }
  for (const auto& sym : r.signature().theory_symbols()) {
    std::vector<Var> xs;
    std::vector<std::vector<Value>> options;
    for (std::size_t i = 0; i < sym->arity(); ++i) {
      xs.push_back(Var{"x" + std::to_string(i + 1), 0, sym->arg_sorts[i]});
      options.push_back(d.of(sym->arg_sorts[i]));
    }
    std::vector<Term> args;
    for (const auto& x : xs) args.push_back(Term::variable(x));
    Term pattern = Term::apply(sym, args);
    for_each_assignment(xs, options, [&](const Substitution& tau) {
      Term lhs = tau.apply(pattern);
      auto v = try_interpret(lhs);
      if (!v) return;
      f.calc.push_back(Rule{lhs, Term::value(*v), bool_term(true), true});
    });
  }
  return f;
}

std::string PlainCP::to_string() const {
  std::string s = show(make_pair(left, right));
  if (!positions.empty()) s += " P=" + lctrs::to_string(positions);
  return s;
}

// ---- TRS rewriting ------------------------------------------------------------------

TrsStepper::TrsStepper(std::vector<Rule> rules) : rules_(std::move(rules)) {
  for (std::size_t i = 0; i < rules_.size(); ++i) by_root_[root_key(rules_[i].lhs)].push_back(i);
}

std::vector<RuleMatch> TrsStepper::root_matches(const Term& t) const {
  std::vector<RuleMatch> out;
  if (t.is_var() || t.is_value()) return out;
  auto it = by_root_.find(root_key(t));
  if (it == by_root_.end()) return out;
  VarSet tv = vars(t);
  for (std::size_t i : it->second) {
    Rule rule = rename_apart_from(rules_[i], tv);
    if (auto sigma = match(rule.lhs, t)) out.push_back(RuleMatch{rule, *sigma, {}});
  }
  return out;
}

std::vector<Term> TrsStepper::root_successors(const Term& t) const {
  std::vector<Term> out;
  for (const auto& m : root_matches(t)) {
    Term r = m.sigma.apply(m.rule.rhs);
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(std::move(r));
  }
  return out;
}

std::vector<Term> TrsStepper::successors(const Term& t) const {
  std::vector<Term> out;
  for (const auto& p : redex_positions(t))
    for (const auto& r : root_successors(subterm_at(t, p))) {
      Term s = replace_at(t, p, r);
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
    }
  return out;
}

ReachSet TrsStepper::reach(const Term& s, int depth, std::size_t max_terms) const {
  ReachSet r;
  std::unordered_map<Term, std::size_t, TermHash> index{{s, 0}};
  r.terms.push_back(s);
  r.parent.push_back(0);
  r.normal.push_back(false);
  std::vector<int> level{0};
  for (std::size_t i = 0; i < r.terms.size(); ++i) {
    auto succ = successors(r.terms[i]);
    r.normal[i] = succ.empty();
    if (level[i] >= depth) {
      if (!succ.empty()) r.closed = false;
      continue;
    }
    for (auto& x : succ) {
      if (index.count(x)) continue;
      if (r.terms.size() >= max_terms) {
        r.closed = false;
        break;
      }
      index.emplace(x, r.terms.size());
      r.terms.push_back(std::move(x));
      r.parent.push_back(i);
      r.normal.push_back(false);
      level.push_back(level[i] + 1);
    }
  }
  return r;
}

std::vector<ParallelResult> TrsStepper::parallel(const Term& t, std::size_t max_results) const {
  SearchLimits lim;
  lim.max_results = max_results;
  return parallel_with(t, [this](const Term& s) { return root_matches(s); }, lim);
}

std::vector<ParallelResult> TrsStepper::multi(const Term& t, int nesting, std::size_t max_results) const {
  SearchLimits lim;
  lim.multi_depth = nesting;
  lim.max_results = max_results;
  return multi_with(t, [this](const Term& s) { return root_matches(s); }, lim);
}

std::string to_string(JoinKind k) {
  switch (k) {
    case JoinKind::Joinable:
      return "joinable";
    case JoinKind::NotWithinBound:
      return "not joinable within the bound";
    case JoinKind::DisjointNormalForms:
      return "disjoint normal forms";
  }
  return "?";
}

Joinability joinable(const TrsStepper& f, const Term& s, const Term& t, int depth, std::size_t max_terms) {
  Joinability j;
  ReachSet rs = f.reach(s, depth, max_terms);
  ReachSet rt = f.reach(t, depth, max_terms);
  std::unordered_map<Term, std::size_t, TermHash> right;
  for (std::size_t i = 0; i < rt.terms.size(); ++i) right.emplace(rt.terms[i], i);
  for (std::size_t i = 0; i < rs.terms.size(); ++i) {
    auto it = right.find(rs.terms[i]);
    if (it == right.end()) continue;
    j.kind = JoinKind::Joinable;
    j.left_path = rs.path_to(i);
    j.right_path = rt.path_to(it->second);
    return j;
  }
  j.kind = rs.closed && rt.closed ? JoinKind::DisjointNormalForms : JoinKind::NotWithinBound;
  return j;
}

Joinability joinable(const GroundFragment& f, const Term& s, const Term& t, int depth) {
  return joinable(TrsStepper(f.all()), s, t, depth);
}

// ---- Critical pairs of the fragment ---------------------------------------------------

std::vector<PlainCP> trs_cps(const GroundFragment& f) {
  std::vector<Rule> rules = f.all();
  TrsStepper index(rules);
  std::map<std::string, std::vector<std::size_t>> by_root;
  for (std::size_t i = 0; i < rules.size(); ++i) by_root[root_key(rules[i].lhs)].push_back(i);
  std::vector<PlainCP> out;
  std::vector<Term> seen;
  for (std::size_t j = 0; j < rules.size(); ++j) {
    const Rule& rho2 = rules[j];
    for (const auto& p : redex_positions(rho2.lhs)) {
      const Term& sub = subterm_at(rho2.lhs, p);
      auto it = by_root.find(root_key(sub));
      if (it == by_root.end()) continue;
      for (std::size_t i : it->second) {
        Rule rho1 = rename_apart_from(rules[i], vars(rho2));
        if (p.is_root() && are_variants(rho1, rho2)) continue;
        auto mgu = unify({{sub, rho1.lhs}});
        if (!mgu) continue;
        PlainCP cp;
        cp.source = mgu->apply(rho2.lhs);
        cp.left = replace_at(cp.source, p, mgu->apply(rho1.rhs));
        cp.right = mgu->apply(rho2.rhs);
        cp.overlay = p.is_root();
        Term key = make_pair(cp.left, cp.right);
        if (variant_of_any(key, seen)) continue;
        seen.push_back(key);
        out.push_back(std::move(cp));
      }
    }
  }
  return out;
}

std::vector<PlainCP> trs_pcps(const GroundFragment& f) {
  std::vector<Rule> rules = f.all();
  std::map<std::string, std::vector<std::size_t>> by_root;
  for (std::size_t i = 0; i < rules.size(); ++i) by_root[root_key(rules[i].lhs)].push_back(i);
  std::vector<PlainCP> out;
  std::vector<Term> seen;
  for (const auto& rho : rules) {
    for (const auto& P : parallel_subsets(redex_positions(rho.lhs))) {
      std::vector<const std::vector<std::size_t>*> cands;
      for (const auto& p : P) {
        auto it = by_root.find(root_key(subterm_at(rho.lhs, p)));
        cands.push_back(it == by_root.end() ? nullptr : &it->second);
      }
      if (std::any_of(cands.begin(), cands.end(), [](auto* c) { return c == nullptr; })) continue;
      std::vector<std::size_t> choice(P.size(), 0);
      for (std::size_t n = 0; n < kMaxCombinations; ++n) {
        VarSet avoid = vars(rho);
        std::vector<Rule> inner;
        std::vector<Equation> eqs;
        for (std::size_t k = 0; k < P.size(); ++k) {
          Rule rp = rename_apart_from(rules[(*cands[k])[choice[k]]], avoid);
          for (const auto& x : vars(rp)) avoid.insert(x);
          eqs.emplace_back(rp.lhs, subterm_at(rho.lhs, P[k]));
          inner.push_back(std::move(rp));
        }
        bool excluded = P.size() == 1 && P[0].is_root() && are_variants(inner[0], rho);
        auto mgu = excluded ? std::nullopt : unify(eqs);
        if (mgu) {
          PlainCP cp;
          cp.source = mgu->apply(rho.lhs);
          std::map<Position, Term> parts;
          for (std::size_t k = 0; k < P.size(); ++k) parts[P[k]] = mgu->apply(inner[k].rhs);
          cp.left = replace_at(cp.source, parts);
          cp.right = mgu->apply(rho.rhs);
          cp.positions = PositionSet(P.begin(), P.end());
          cp.overlay = P.size() == 1 && P[0].is_root();
          Term key = make_pair(cp.left, cp.right);
          if (!variant_of_any(key, seen)) {
            seen.push_back(key);
            out.push_back(std::move(cp));
          }
        }
        std::size_t k = 0;
        while (k < P.size() && ++choice[k] == cands[k]->size()) choice[k++] = 0;
        if (k == P.size()) break;
      }
    }
  }
  return out;
}

// ---- Oracles ---------------------------------------------------------------------------

CorrespondenceReport check_cp_correspondence(const Lctrs& r, const ValueDomain& d, const Solver& solver,
                                             std::size_t samples) {
  CorrespondenceReport rep;
  GroundFragment f = ground_fragment(r, d);
  auto cps = trs_cps(f);
  auto pcps = trs_pcps(f);
  auto cc = ccps(r, solver);
  auto pc = cpcps(r, solver);
  rep.fragment_cps = cps.size();
  rep.fragment_pcps = pcps.size();

  for (const auto& cp : cps) {
    Term subject = make_pair(cp.left, cp.right);
    bool found = std::any_of(cc.begin(), cc.end(), [&](const CCPRecord& c) {
      return instance_of(make_pair(c.left, c.right), c.constraint, subject, solver);
    });
    if (!found) rep.violations.push_back("fragment CP " + cp.to_string() + " is no instance of a CCP");
  }
  for (const auto& cp : pcps) {
    Term subject = make_pair(cp.left, cp.right);
    bool found = std::any_of(pc.begin(), pc.end(), [&](const CPCPRecord& c) {
      return instance_of(make_pair(c.left, c.right), c.constraint, subject, solver);
    });
    if (!found) rep.violations.push_back("fragment PCP " + cp.to_string() + " is no instance of a CPCP");
  }

  // Round-robin over the CCPs so that pairs with few models leave their share to the others.
  std::vector<std::vector<Valuation>> pools;
  for (const auto& c : cc) {
    std::vector<Valuation> pool;
    for (auto& sigma : solver.models(bounded(c.constraint, d), samples))
      if (within_domain(sigma, d)) pool.push_back(std::move(sigma));
    pools.push_back(std::move(pool));
  }
  for (std::size_t round = 0; rep.samples < samples; ++round) {
    bool any = false;
    for (std::size_t k = 0; k < cc.size() && rep.samples < samples; ++k) {
      if (round >= pools[k].size()) continue;
      any = true;
      ++rep.samples;
      const auto& c = cc[k];
      const Valuation& sigma = pools[k][round];
      Term s = substitute_values(c.left, sigma);
      Term t = substitute_values(c.right, sigma);
      if (s == t) continue;
      Term subject = make_pair(s, t);
      bool found = std::any_of(cps.begin(), cps.end(), [&](const PlainCP& cp) {
        return match(make_pair(cp.left, cp.right), subject).has_value();
      });
      if (!found)
        rep.violations.push_back("instance " + show(subject) + " of CCP " + c.to_string() +
                                 " is neither trivial nor an instance of a fragment CP");
    }
    if (!any) break;
  }
  return rep;
}

Term random_term(const Signature& sig, const Sort& sort, const ValueDomain& d, std::mt19937& rng, int depth) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  std::vector<SymbolRef> cands;
  for (const auto& f : sig.term_symbols())
    if (f->result_sort == sort && (depth > 0 || f->arity() == 0)) cands.push_back(f);
  if (depth > 0 && sort.is_theory())
    for (const auto& f : sig.theory_symbols())
      if (f->result_sort == sort) cands.push_back(f);
  auto vals = d.of(sort);
  if (!vals.empty() && (cands.empty() || pick(3) == 0)) return Term::value(vals[pick(vals.size())]);
  if (cands.empty() || (!sort.is_theory() && pick(8) == 0))
    return Term::variable(Var{"v" + std::to_string(pick(2)), 0, sort});
  const auto& f = cands[pick(cands.size())];
  std::vector<Term> args;
  for (const auto& s : f->arg_sorts) args.push_back(random_term(sig, s, d, rng, depth - 1));
  return Term::apply(f, args);
}

StepReport check_step_equivalence(const Lctrs& r, const ValueDomain& d, const Solver& solver, std::size_t samples,
                                  unsigned seed) {
  StepReport rep;
  GroundFragment f = ground_fragment(r, d);
  TrsStepper stepper(f.all());
  std::mt19937 rng(seed);
  const auto& sorts = r.signature().sorts();
  for (std::size_t i = 0; i < samples; ++i) {
    // Bias towards terms headed by a term symbol, where the rules live.
    Sort sort = sorts[sorts.size() > 2 && rng() % 4 != 0 ? 2 + rng() % (sorts.size() - 2) : rng() % sorts.size()];
    Term t = random_term(r.signature(), sort, d, rng, 3);
    ++rep.samples;
    std::vector<Term> by_r;
    for (const auto& s : plain_successors(t, r.rc(), d, solver).items) {
      bool in_d = true;
      const Rule& rule = s.step.rule;
      VarSet lv = rule.calculation ? vars(rule.lhs) : logical_vars(rule);
      for (const auto& x : lv) {
        const Term* img = s.step.sigma.lookup(x);
        if (!img || !img->is_value() || !d.contains(img->value_of())) in_d = false;
      }
      if (in_d && std::find(by_r.begin(), by_r.end(), s.term) == by_r.end()) by_r.push_back(s.term);
    }
    std::vector<Term> by_f = stepper.successors(t);
    rep.successors += by_f.size();
    for (const auto& x : by_r)
      if (std::find(by_f.begin(), by_f.end(), x) == by_f.end())
        rep.violations.push_back(t.to_string() + " → " + x.to_string() + " by R but not by the fragment");
    for (const auto& x : by_f)
      if (std::find(by_r.begin(), by_r.end(), x) == by_r.end())
        rep.violations.push_back(t.to_string() + " → " + x.to_string() + " by the fragment but not by R");
  }
  return rep;
}

TrsClosednessReport trs_closedness_check(const GroundFragment& f, int depth) {
  TrsClosednessReport rep;
  TrsStepper stepper(f.all());
  constexpr std::size_t kMaxTerms = 4096;
  for (const auto& cp : trs_cps(f)) {
    auto ms = stepper.multi(cp.left);
    bool dc = std::any_of(ms.begin(), ms.end(), [&](const ParallelResult& m) { return m.term == cp.right; });
    ReachSet rt = stepper.reach(cp.right, depth, kMaxTerms);
    bool adc = cp.overlay ? std::any_of(ms.begin(), ms.end(), [&](const ParallelResult& m) { return rt.contains(m.term); })
                          : dc;
    auto ps = stepper.parallel(cp.left);
    bool pc1 = std::any_of(ps.begin(), ps.end(), [&](const ParallelResult& m) { return rt.contains(m.term); });
    if (!dc) rep.development_closed = false;
    if (!adc) {
      rep.almost_development_closed = false;
      rep.failures.push_back("CP " + cp.to_string() + " is not almost development closed");
    }
    if (!pc1) {
      rep.parallel_closed_1 = false;
      rep.failures.push_back("CP " + cp.to_string() + " is not 1-parallel closed");
    }
  }
  for (const auto& cp : trs_pcps(f)) {
    ReachSet rs = stepper.reach(cp.left, depth, kMaxTerms);
    VarSet allowed = vars_below(cp.source, cp.positions);
    auto ps = stepper.parallel(cp.right);
    bool pc2 = std::any_of(ps.begin(), ps.end(), [&](const ParallelResult& m) {
      return rs.contains(m.term) && subset(vars_below(m.term, m.positions), allowed);
    });
    if (!pc2) {
      rep.parallel_closed_2 = false;
      rep.failures.push_back("PCP " + cp.to_string() + " is not 2-parallel closed");
    }
  }
  return rep;
}

}  // namespace lctrs
