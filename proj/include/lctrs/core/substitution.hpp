#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lctrs/core/term.hpp"

namespace lctrs {

/// A finite, sort-preserving map from variables to terms. Identity bindings
/// are never stored, so the domain is exactly the set of moved variables.
class Substitution {
 public:
  using Map = std::map<Var, Term>;

  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const Var, Term>> init);

  /// Throws SortError if sorts differ; binding x to x removes x.
  void bind(const Var& x, const Term& t);
  void erase(const Var& x) { map_.erase(x); }
  const Term* lookup(const Var& x) const;
  bool contains(const Var& x) const { return map_.count(x) != 0; }

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  Map::const_iterator begin() const { return map_.begin(); }
  Map::const_iterator end() const { return map_.end(); }
  const Map& map() const { return map_; }
  VarSet domain() const;

  Term apply(const Term& t) const;
  /// The composition στ with apply(στ, t) = apply(τ, apply(σ, t)).
  Substitution then(const Substitution& tau) const;
  Substitution restrict(const VarSet& keep) const;

  std::string to_string() const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  Map map_;
};

Term apply(const Substitution& sigma, const Term& t);

/// One-sided matching: the minimal σ extending `init` with σ(pattern) = subject.
std::optional<Substitution> match(const Term& pattern, const Term& subject, Substitution init = {});

using Equation = std::pair<Term, Term>;
/// Idempotent most general unifier of a simultaneous system, or none.
std::optional<Substitution> unify(const std::vector<Equation>& equations);

/// Fresh variable with the same base name and sort. Thread-safe.
Var fresh_var(const Var& base);
/// Maps every variable of `vs` to a fresh one.
Substitution fresh_renaming(const VarSet& vs);

/// If the lists are equal up to an injective variable renaming, returns it.
std::optional<Substitution> variant_renaming(const std::vector<Term>& from, const std::vector<Term>& to);

inline VarSet vars_of(const Term& t) { return vars(t); }
inline Term substitute(const Term& t, const Substitution& s) { return s.apply(t); }

/// Renames each object apart from all others. T must provide
/// `VarSet vars_of(const T&)` and `T substitute(const T&, const Substitution&)`.
template <class T>
std::vector<T> rename_apart(const std::vector<T>& objects) {
  std::vector<T> out;
  out.reserve(objects.size());
  for (const auto& o : objects) out.push_back(substitute(o, fresh_renaming(vars_of(o))));
  return out;
}

}  // namespace lctrs
