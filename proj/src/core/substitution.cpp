#include "lctrs/core/substitution.hpp"

#include <atomic>

namespace lctrs {

Substitution::Substitution(std::initializer_list<std::pair<const Var, Term>> init) {
  for (const auto& [x, t] : init) bind(x, t);
}

void Substitution::bind(const Var& x, const Term& t) {
  if (t.sort() != x.sort)
    throw SortError("cannot bind " + x.to_string() + ":" + x.sort.name() + " to a term of sort " +
                    t.sort().name());
  if (t.is_var() && t.var() == x) {
    map_.erase(x);
    return;
  }
  map_.insert_or_assign(x, t);
}

const Term* Substitution::lookup(const Var& x) const {
  auto it = map_.find(x);
  return it == map_.end() ? nullptr : &it->second;
}

VarSet Substitution::domain() const {
  VarSet out;
  for (const auto& [x, _] : map_) out.insert(x);
  return out;
}

Term Substitution::apply(const Term& t) const {
  if (map_.empty()) return t;
  if (t.is_var()) {
    const Term* img = lookup(t.var());
    return img ? *img : t;
  }
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(apply(a));
    if (!(args.back() == a)) changed = true;
  }
  return changed ? Term::apply(t.symbol_ref(), std::move(args)) : t;
}

Substitution Substitution::then(const Substitution& tau) const {
  Substitution out;
  for (const auto& [x, t] : map_) out.bind(x, tau.apply(t));
  for (const auto& [x, t] : tau.map_)
    if (!contains(x)) out.bind(x, t);
  return out;
}

Substitution Substitution::restrict(const VarSet& keep) const {
  Substitution out;
  for (const auto& [x, t] : map_)
    if (keep.count(x)) out.map_.emplace(x, t);
  return out;
}

std::string Substitution::to_string() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [x, t] : map_) {
    if (!first) s += ", ";
    first = false;
    s += x.to_string() + " ↦ " + t.to_string();
  }
  return s + "}";
}

Term apply(const Substitution& sigma, const Term& t) { return sigma.apply(t); }

namespace {

bool match_into(const Term& p, const Term& s, Substitution::Map& m) {
  if (p.is_var()) {
    if (p.sort() != s.sort()) return false;
    auto [it, inserted] = m.emplace(p.var(), s);
    return inserted || it->second == s;
  }
  if (s.is_var()) return false;
  if (!same_symbol(p.symbol(), s.symbol())) return false;
  for (std::size_t i = 0; i < p.args().size(); ++i)
    if (!match_into(p.args()[i], s.args()[i], m)) return false;
  return true;
}

}  // namespace

std::optional<Substitution> match(const Term& pattern, const Term& subject, Substitution init) {
  Substitution::Map m = init.map();
  if (!match_into(pattern, subject, m)) return std::nullopt;
  Substitution out;
  for (const auto& [x, t] : m) out.bind(x, t);
  return out;
}

std::optional<Substitution> unify(const std::vector<Equation>& equations) {
  Substitution sigma;
  std::vector<Equation> work(equations.rbegin(), equations.rend());
  while (!work.empty()) {
    auto [s, t] = work.back();
    work.pop_back();
    s = sigma.apply(s);
    t = sigma.apply(t);
    if (s == t) continue;
    if (s.sort() != t.sort()) return std::nullopt;
    if (!s.is_var() && t.is_var()) std::swap(s, t);
    if (s.is_var()) {
      if (occurs(s.var(), t)) return std::nullopt;
      // Keep sigma idempotent: eliminate s everywhere before adding it.
      sigma = sigma.then(Substitution{{s.var(), t}});
      continue;
    }
    if (!same_symbol(s.symbol(), t.symbol())) return std::nullopt;
    for (std::size_t i = s.args().size(); i-- > 0;) work.emplace_back(s.args()[i], t.args()[i]);
  }
  return sigma;
}

namespace {
std::atomic<std::uint64_t> fresh_counter{0};
}

Var fresh_var(const Var& base) {
  return Var{base.name, ++fresh_counter, base.sort};
}

Substitution fresh_renaming(const VarSet& vs) {
  Substitution out;
  for (const auto& x : vs) out.bind(x, Term::variable(fresh_var(x)));
  return out;
}

namespace {

bool variant_into(const Term& a, const Term& b, std::map<Var, Var>& fwd, std::map<Var, Var>& bwd) {
  if (a.is_var() != b.is_var()) return false;
  if (a.is_var()) {
    if (a.sort() != b.sort()) return false;
    auto f = fwd.find(a.var());
    auto g = bwd.find(b.var());
    if (f == fwd.end() && g == bwd.end()) {
      fwd.emplace(a.var(), b.var());
      bwd.emplace(b.var(), a.var());
      return true;
    }
    return f != fwd.end() && g != bwd.end() && f->second == b.var() && g->second == a.var();
  }
  if (!same_symbol(a.symbol(), b.symbol())) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!variant_into(a.args()[i], b.args()[i], fwd, bwd)) return false;
  return true;
}

}  // namespace

std::optional<Substitution> variant_renaming(const std::vector<Term>& from, const std::vector<Term>& to) {
  if (from.size() != to.size()) return std::nullopt;
  std::map<Var, Var> fwd, bwd;
  for (std::size_t i = 0; i < from.size(); ++i)
    if (!variant_into(from[i], to[i], fwd, bwd)) return std::nullopt;
  Substitution out;
  for (const auto& [x, y] : fwd) out.bind(x, Term::variable(y));
  return out;
}

}  // namespace lctrs
