#include "lctrs/analysis/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "lctrs/core/theory.hpp"
#include "lctrs/logic/interpret.hpp"

namespace lctrs {

namespace {

/// Renames the variables of r to names with `primes` trailing primes,
/// adding further primes on a clash with `avoid`.
Rule primed(const Rule& r, int primes, const VarSet& avoid) {
  Substitution s;
  VarSet taken = avoid;
  for (const auto& x : vars(r)) {
    Var y{x.name + std::string(static_cast<std::size_t>(primes), '\''), 0, x.sort};
    while (taken.count(y)) y.name += '\'';
    taken.insert(y);
    s.bind(x, Term::variable(y));
  }
  return substitute(r, s);
}

bool subset(const VarSet& a, const VarSet& b) {
  return std::all_of(a.begin(), a.end(), [&](const Var& x) { return b.count(x) != 0; });
}

/// σ(x) ∈ Val ∪ V for every x in `logical`.
bool logical_images_ok(const Substitution& sigma, const VarSet& logical) {
  return std::all_of(logical.begin(), logical.end(), [&](const Var& x) {
    Term t = sigma.apply(Term::variable(x));
    return t.is_var() || t.is_value();
  });
}

/// Same pair and constraint up to renaming of all variables.
bool duplicate(const Term& pair, const Term& phi, const std::vector<std::pair<Term, Term>>& seen) {
  return std::any_of(seen.begin(), seen.end(), [&](const std::pair<Term, Term>& s) {
    return variant_renaming({s.first, s.second}, {pair, phi}).has_value();
  });
}

/// Non-empty sets of pairwise parallel positions, in a fixed order.
std::vector<std::vector<Position>> parallel_subsets(const PositionSet& ps) {
  std::vector<Position> all(ps.begin(), ps.end());
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

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < n;) {
          try {
            f(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
  }
  if (error) std::rethrow_exception(error);
}

bool is_leaf(const Term& t, const VarSet& logical) {
  return t.is_value() || (t.is_var() && logical.count(t.var()));
}

/// Collects leaf equations where s and t differ; false on a rigid mismatch.
bool align(const Term& s, const Term& t, const VarSet& logical, std::vector<Term>& eqs) {
  if (s == t) return true;
  if (is_leaf(s, logical) && is_leaf(t, logical)) {
    eqs.push_back(mk_eq(s, t));
    return true;
  }
  if (s.is_var() || t.is_var() || s.is_value() || t.is_value()) return false;
  if (!same_symbol(s.symbol(), t.symbol())) return false;
  for (std::size_t i = 0; i < s.args().size(); ++i)
    if (!align(s.args()[i], t.args()[i], logical, eqs)) return false;
  return true;
}

const Position kLeft({1});
const Position kRight({2});

/// Breadth-first →̃ search below `within` from several sources at once.
class ClosingSearch {
 public:
  using Accept = std::function<bool(const CTerm&)>;

  ClosingSearch(const Lctrs& r, const Solver& solver, int depth) : r_(r), solver_(solver), depth_(depth) {}

  /// Path from one of the sources to an accepted state, source first.
  std::optional<std::pair<std::size_t, std::vector<CTerm>>> run(const std::vector<CTerm>& sources,
                                                                const Position& within, const Accept& accept) {
    struct Node {
      CTerm ct;
      std::size_t parent;
      std::size_t source;
      int depth;
    };
    std::vector<Node> nodes;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < sources.size(); ++i)
      if (seen.insert(canonical_key(sources[i])).second) nodes.push_back({sources[i], nodes.size(), i, 0});
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (accept(nodes[i].ct)) {
        std::vector<CTerm> path;
        for (std::size_t k = i;; k = nodes[k].parent) {
          path.push_back(nodes[k].ct);
          if (nodes[k].parent == k) break;
        }
        std::reverse(path.begin(), path.end());
        return std::pair{nodes[i].source, path};
      }
      if (nodes[i].depth >= depth_) continue;
      for (const auto& next : cstep_tilde(nodes[i].ct, r_.rc(), solver_, within)) {
        if (!seen.insert(canonical_key(next.result)).second) continue;
        nodes.push_back({next.result, i, nodes[i].source, nodes[i].depth + 1});
      }
    }
    return std::nullopt;
  }

  bool trivial(const CTerm& ct) {
    Tri t = is_trivial(ct, solver_);
    if (t == Tri::Unknown) undecided_ = true;
    return t == Tri::Yes;
  }

  bool undecided() const { return undecided_; }

 private:
  const Lctrs& r_;
  const Solver& solver_;
  int depth_;
  bool undecided_ = false;
};

Closing not_closed(bool undecided, const std::string& what) {
  Closing c;
  c.status = undecided ? Closedness::Unknown : Closedness::NotClosed;
  c.reason = undecided ? "triviality undecided on some reachable pair; " + what : what;
  return c;
}

/// A first step, then a →̃ tail below `tail_within` to a trivial pair.
Closing first_then_tail(const CTerm& start, const std::vector<CParallelResult>& firsts, const Position& tail_within,
                        int depth, const Lctrs& r, const Solver& solver, const std::string& shape) {
  ClosingSearch search(r, solver, depth);
  std::vector<CTerm> sources;
  for (const auto& f : firsts) sources.push_back(f.result);
  auto found = search.run(sources, tail_within, [&](const CTerm& ct) { return search.trivial(ct); });
  if (!found) return not_closed(search.undecided(), "no " + shape + " sequence reaches a trivial pair");
  Closing c;
  c.status = Closedness::Closed;
  c.q = firsts[found->first].positions;
  c.sequence.push_back(start);
  for (auto& ct : found->second) c.sequence.push_back(std::move(ct));
  return c;
}

std::string tvar_string(const VarSet& vs) {
  std::string s = "{";
  bool first = true;
  for (const auto& x : vs) {
    s += (first ? "" : ",") + x.to_string();
    first = false;
  }
  return s + "}";
}

}  // namespace

// ---- Records --------------------------------------------------------------------

CTerm CCPRecord::pair() const { return CTerm{make_pair(left, right), constraint}; }
std::string CCPRecord::to_string() const { return pair().to_string(); }
CTerm CPCPRecord::pair() const { return CTerm{make_pair(left, right), constraint}; }
std::string CPCPRecord::to_string() const { return pair().to_string() + " P=" + lctrs::to_string(positions); }

std::vector<CCPRecord> ccps(const Lctrs& r, const Solver& solver) {
  const auto& rules = r.rc();
  std::vector<CCPRecord> out;
  std::vector<std::pair<Term, Term>> seen;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Rule& rho1 = rules[i];
    for (std::size_t j = 0; j < rules.size(); ++j) {
      Rule rho2 = primed(rules[j], 1, vars(rho1));
      VarSet logical = logical_vars(rho1);
      for (const auto& x : logical_vars(rho2)) logical.insert(x);
      for (const auto& p : positions(rho2.lhs, PositionFilter::Function)) {
        const Term& sub = subterm_at(rho2.lhs, p);
        if (sub.is_value() || !same_symbol(sub.symbol(), rho1.lhs.symbol())) continue;
        auto mgu = unify({{sub, rho1.lhs}});
        if (!mgu || !logical_images_ok(*mgu, logical)) continue;
        if (p.is_root() && are_variants(rho1, rho2) && subset(vars(rho1.rhs), vars(rho1.lhs))) continue;
        Term g1 = mgu->apply(rho1.guard), g2 = mgu->apply(rho2.guard);
        auto sat = solver.is_satisfiable(conj({g1, g2}));
        if (sat.unsat()) continue;
        CCPRecord c;
        c.overlap = Overlap{rho1, p, rho2, *mgu};
        c.source = mgu->apply(rho2.lhs);
        c.left = replace_at(c.source, p, mgu->apply(rho1.rhs));
        c.right = mgu->apply(rho2.rhs);
        c.constraint = conj({g1, g2, mgu->apply(conj({extra_var_constraint(rho1), extra_var_constraint(rho2)}))});
        c.overlay = p.is_root();
        c.calculation = rho1.calculation && rho2.calculation;
        c.undecided = sat.unknown();
        Term key = make_pair(c.left, c.right);
        if (duplicate(key, c.constraint, seen)) continue;
        seen.emplace_back(key, c.constraint);
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

std::vector<CPCPRecord> cpcps(const Lctrs& r, const Solver& solver) {
  constexpr std::size_t kMaxCombinations = 100000;
  const auto& rules = r.rc();
  std::vector<CPCPRecord> out;
  std::vector<std::pair<Term, Term>> seen;
  for (const auto& rho : rules) {
    for (const auto& P : parallel_subsets(positions(rho.lhs, PositionFilter::Function))) {
      std::vector<std::vector<std::size_t>> cands(P.size());
      for (std::size_t k = 0; k < P.size(); ++k) {
        const Term& sub = subterm_at(rho.lhs, P[k]);
        if (sub.is_value()) continue;
        for (std::size_t j = 0; j < rules.size(); ++j)
          if (same_symbol(rules[j].lhs.symbol(), sub.symbol())) cands[k].push_back(j);
      }
      if (std::any_of(cands.begin(), cands.end(), [](const auto& c) { return c.empty(); })) continue;
      std::vector<std::size_t> choice(P.size(), 0);
      for (std::size_t combos = 0; combos < kMaxCombinations; ++combos) {
        VarSet avoid = vars(rho);
        VarSet logical = logical_vars(rho);
        std::vector<std::pair<Position, Rule>> inner;
        std::vector<Equation> eqs;
        for (std::size_t k = 0; k < P.size(); ++k) {
          Rule rp = primed(rules[cands[k][choice[k]]], static_cast<int>(k + 1), avoid);
          for (const auto& x : vars(rp)) avoid.insert(x);
          for (const auto& x : logical_vars(rp)) logical.insert(x);
          eqs.emplace_back(rp.lhs, subterm_at(rho.lhs, P[k]));
          inner.emplace_back(P[k], std::move(rp));
        }
        auto mgu = unify(eqs);
        bool ok = mgu && logical_images_ok(*mgu, logical);
        if (ok && P.size() == 1 && P[0].is_root() && are_variants(inner[0].second, rho) &&
            subset(vars(rho.rhs), vars(rho.lhs)))
          ok = false;
        if (ok) {
          std::vector<Term> guards{mgu->apply(rho.guard)};
          for (const auto& [p, rp] : inner) guards.push_back(mgu->apply(rp.guard));
          auto sat = solver.is_satisfiable(conj(guards));
          if (!sat.unsat()) {
            CPCPRecord c;
            c.rho = rho;
            c.inner = inner;
            c.mgu = *mgu;
            c.source = mgu->apply(rho.lhs);
            std::map<Position, Term> parts;
            for (const auto& [p, rp] : inner) parts[p] = mgu->apply(rp.rhs);
            c.left = replace_at(c.source, parts);
            c.right = mgu->apply(rho.rhs);
            std::vector<Term> psi{extra_var_constraint(rho)};
            for (const auto& [p, rp] : inner) psi.push_back(extra_var_constraint(rp));
            std::vector<Term> phi{guards[0], mgu->apply(conj(psi))};
            phi.insert(phi.end(), guards.begin() + 1, guards.end());
            c.constraint = conj(phi);
            c.positions = PositionSet(P.begin(), P.end());
            c.calculation = rho.calculation && std::all_of(inner.begin(), inner.end(), [](const auto& x) {
                              return x.second.calculation;
                            });
            c.undecided = sat.unknown();
            Term key = make_pair(c.left, c.right);
            if (!duplicate(key, c.constraint, seen)) {
              seen.emplace_back(key, c.constraint);
              out.push_back(std::move(c));
            }
          }
        }
        std::size_t k = 0;
        while (k < P.size() && ++choice[k] == cands[k].size()) choice[k++] = 0;
        if (k == P.size()) break;
      }
    }
  }
  return out;
}

// ---- Triviality and closedness ----------------------------------------------------

Tri is_trivial(const Term& s, const Term& t, const Term& phi, const Solver& solver) {
  VarSet logical = vars(phi);
  std::vector<Term> eqs;
  if (!align(s, t, logical, eqs)) {
    auto sat = solver.is_satisfiable(phi);
    if (sat.unsat()) return Tri::Yes;
    return sat.sat() ? Tri::No : Tri::Unknown;
  }
  if (eqs.empty()) return Tri::Yes;
  auto v = solver.is_valid(mk_implies(phi, conj(eqs)));
  if (v.valid()) return Tri::Yes;
  return v.invalid() ? Tri::No : Tri::Unknown;
}

Tri is_trivial(const CTerm& pair, const Solver& solver) {
  if (!is_pair(pair.term)) throw std::invalid_argument("is_trivial expects a pair s ≈ t");
  return is_trivial(pair.term.args()[0], pair.term.args()[1], pair.constraint, solver);
}

VarSet tvar(const Term& t, const Term& phi, const PositionSet& ps) {
  VarSet logical = vars(phi);
  VarSet out;
  for (const auto& p : ps)
    for (const auto& x : vars(subterm_at(t, p)))
      if (!logical.count(x)) out.insert(x);
  return out;
}

std::string to_string(Closedness c) {
  switch (c) {
    case Closedness::Closed:
      return "closed";
    case Closedness::NotClosed:
      return "not closed";
    case Closedness::Unknown:
      return "unknown";
  }
  return "?";
}

Closing dev_closed_check(const CCPRecord& ccp, const Lctrs& r, const Solver& solver, const ClosingLimits& limits) {
  CTerm start = ccp.pair();
  auto firsts = multi_tilde(start, r.rc(), solver, kLeft, limits.steps);
  return first_then_tail(start, firsts, kRight, ccp.overlay ? limits.depth : 0, r, solver,
                         ccp.overlay ? "○̃→≥1 · →̃*≥2" : "○̃→≥1");
}

Closing parallel_closed_1(const CCPRecord& ccp, const Lctrs& r, const Solver& solver, const ClosingLimits& limits) {
  CTerm start = ccp.pair();
  auto firsts = parallel_tilde(start, r.rc(), solver, kLeft, limits.steps);
  return first_then_tail(start, firsts, kRight, limits.depth, r, solver, "⊸̃→≥1 · →̃*≥2");
}

Closing parallel_closed_2(const CPCPRecord& cpcp, const Lctrs& r, const Solver& solver,
                          const ClosingLimits& limits) {
  CTerm start = cpcp.pair();
  VarSet allowed = tvar(cpcp.source, cpcp.constraint, cpcp.positions);
  ClosingSearch search(r, solver, limits.depth);
  std::string rejected;
  for (const auto& first : parallel_tilde(start, r.rc(), solver, kRight, limits.steps)) {
    PositionSet q;
    for (const auto& p : first.positions) q.insert(*p.strip_prefix(kRight));
    auto accept = [&](const CTerm& ct) {
      if (!search.trivial(ct)) return false;
      VarSet tv = tvar(ct.term.args()[1], ct.constraint, q);
      if (subset(tv, allowed)) return true;
      if (rejected.empty())
        rejected = "; the closing to " + ct.to_string() + " violates TVar: " + tvar_string(tv) + " ⊄ " +
                   tvar_string(allowed);
      return false;
    };
    auto found = search.run({first.result}, kLeft, accept);
    if (!found) continue;
    Closing c;
    c.status = Closedness::Closed;
    c.q = first.positions;
    c.sequence.push_back(start);
    for (auto& ct : found->second) c.sequence.push_back(std::move(ct));
    return c;
  }
  return not_closed(search.undecided(), "no ⊸̃→≥2 · →̃*≥1 sequence reaches a trivial pair" + rejected);
}

// ---- System-level checks ------------------------------------------------------------

bool is_left_linear(const Lctrs& r) {
  for (const auto& rule : r.rc()) {
    VarSet logical = logical_vars(rule);
    for (const auto& [x, n] : var_occurrences(rule.lhs))
      if (n > 1 && !logical.count(x)) return false;
  }
  return true;
}

Tri is_weakly_orthogonal(const Lctrs& r, const Solver& solver) {
  if (!is_left_linear(r)) return Tri::No;
  Tri all = Tri::Yes;
  for (const auto& c : ccps(r, solver)) {
    Tri t = is_trivial(c.pair(), solver);
    if (t == Tri::No) return Tri::No;
    if (t == Tri::Unknown) all = Tri::Unknown;
  }
  return all;
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::WeakOrthogonality:
      return "weak-orthogonality";
    case Criterion::AlmostDevelopmentClosed:
      return "almost-development-closed";
    case Criterion::ParallelClosed:
      return "parallel-closed";
  }
  return "?";
}

std::optional<Criterion> parse_criterion(const std::string& s) {
  if (s == "wo" || s == "weak-orthogonality") return Criterion::WeakOrthogonality;
  if (s == "adc" || s == "almost-development-closed") return Criterion::AlmostDevelopmentClosed;
  if (s == "pc" || s == "parallel-closed") return Criterion::ParallelClosed;
  return std::nullopt;
}

std::string Verdict::to_string() const {
  switch (kind) {
    case VerdictKind3::Yes:
      return "YES";
    case VerdictKind3::No:
      return "NO";
    case VerdictKind3::Maybe:
      return "MAYBE";
  }
  return "?";
}

std::optional<PeakWitness> find_nonjoinable_peak(const Lctrs& r, const std::vector<CCPRecord>& pairs,
                                                 const Solver& solver, const AnalysisConfig& config) {
  ValueDomain d = config.domain ? *config.domain : default_domain(r);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& c = pairs[i];
    if (c.calculation) continue;
    for (const auto& gamma : solver.models(c.constraint, config.peak_samples)) {
      Term source = substitute_values(c.source, gamma);
      Term s = substitute_values(c.left, gamma);
      Term t = substitute_values(c.right, gamma);
      if (s == t) continue;
      auto from = plain_successors(source, r.rc(), d, solver);
      auto has = [&](const Term& x) {
        return std::any_of(from.items.begin(), from.items.end(), [&](const Successor& y) { return y.term == x; });
      };
      if (!has(s) || !has(t)) continue;
      auto rs = reach(s, r.rc(), d, solver, config.peak_depth, config.peak_terms);
      if (!rs.closed) continue;
      auto rt = reach(t, r.rc(), d, solver, config.peak_depth, config.peak_terms);
      if (!rt.closed) continue;
      bool meet = std::any_of(rs.terms.begin(), rs.terms.end(), [&](const Term& x) { return rt.contains(x); });
      if (meet) continue;
      return PeakWitness{source, s, t, gamma, i, rs.normal_forms(), rt.normal_forms()};
    }
  }
  return std::nullopt;
}

AnalysisResult analyze(const Lctrs& r, const Solver& solver, const AnalysisConfig& config) {
  AnalysisResult res;
  res.left_linear = is_left_linear(r);
  res.ccps = ccps(r, solver);
  bool want_pc = config.criteria.count(Criterion::ParallelClosed) != 0;
  if (want_pc) res.cpcps = cpcps(r, solver);

  const std::vector<Criterion> order{Criterion::WeakOrthogonality, Criterion::AlmostDevelopmentClosed,
                                     Criterion::ParallelClosed};
  struct Task {
    std::size_t report;
    std::size_t slot;
    std::function<Closing()> run;
  };
  std::vector<Task> tasks;
  for (Criterion crit : order) {
    if (!config.criteria.count(crit)) continue;
    std::size_t ri = res.criteria.size();
    res.criteria.push_back(CriterionReport{crit, Tri::Unknown, {}, {}});
    std::size_t n = res.ccps.size() + (crit == Criterion::ParallelClosed ? res.cpcps.size() : 0);
    res.criteria[ri].closings.resize(n);
    for (std::size_t i = 0; i < res.ccps.size(); ++i) {
      const CCPRecord* c = &res.ccps[i];
      std::function<Closing()> run;
      switch (crit) {
        case Criterion::WeakOrthogonality:
          run = [c, &solver] {
            Closing cl;
            Tri t = is_trivial(c->pair(), solver);
            cl.status = t == Tri::Yes ? Closedness::Closed : t == Tri::No ? Closedness::NotClosed : Closedness::Unknown;
            cl.sequence.push_back(c->pair());
            if (t != Tri::Yes) cl.reason = t == Tri::No ? "not trivial" : "triviality undecided";
            return cl;
          };
          break;
        case Criterion::AlmostDevelopmentClosed:
          run = [c, &r, &solver, &config] { return dev_closed_check(*c, r, solver, config.closing); };
          break;
        case Criterion::ParallelClosed:
          run = [c, &r, &solver, &config] { return parallel_closed_1(*c, r, solver, config.closing); };
          break;
      }
      tasks.push_back({ri, i, std::move(run)});
    }
    if (crit == Criterion::ParallelClosed)
      for (std::size_t i = 0; i < res.cpcps.size(); ++i) {
        const CPCPRecord* c = &res.cpcps[i];
        tasks.push_back({ri, res.ccps.size() + i,
                         [c, &r, &solver, &config] { return parallel_closed_2(*c, r, solver, config.closing); }});
      }
  }
  parallel_for(tasks.size(), config.threads,
               [&](std::size_t k) { res.criteria[tasks[k].report].closings[tasks[k].slot] = tasks[k].run(); });

  for (auto& rep : res.criteria) {
    bool any_no = false, any_unknown = false;
    for (std::size_t i = 0; i < rep.closings.size(); ++i) {
      const Closing& cl = rep.closings[i];
      if (cl.status == Closedness::Closed) continue;
      bool is_ccp = i < res.ccps.size();
      std::string what = is_ccp ? "CCP " + res.ccps[i].to_string()
                                : "CPCP " + res.cpcps[i - res.ccps.size()].to_string();
      std::string check = rep.criterion == Criterion::ParallelClosed ? (is_ccp ? "1-parallel: " : "2-parallel: ")
                                                                      : "";
      rep.reasons.push_back(what + ": " + check + cl.reason);
      (cl.status == Closedness::NotClosed ? any_no : any_unknown) = true;
    }
    if (!res.left_linear) {
      rep.reasons.insert(rep.reasons.begin(), "not left-linear");
      rep.holds = Tri::No;
    } else {
      rep.holds = any_no ? Tri::No : any_unknown ? Tri::Unknown : Tri::Yes;
    }
  }

  for (const auto& rep : res.criteria)
    if (rep.holds == Tri::Yes) {
      res.verdict.kind = VerdictKind3::Yes;
      res.verdict.criterion = rep.criterion;
      return res;
    }
  if (auto w = find_nonjoinable_peak(r, res.ccps, solver, config)) {
    res.verdict.kind = VerdictKind3::No;
    res.verdict.witness = std::move(w);
  }
  return res;
}

}  // namespace lctrs
