#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lctrs/core/value.hpp"

namespace lctrs::pa {

/// Variables are small integers; the caller keeps the naming table.
using VarId = int;

/// Σ cᵢ·xᵢ + k with no zero coefficients stored.
struct Linear {
  std::map<VarId, Integer> coeffs;
  Integer constant = 0;

  static Linear of_var(VarId x);
  static Linear of_const(Integer k);

  bool is_constant() const { return coeffs.empty(); }
  Integer coeff(VarId x) const;
  bool mentions(VarId x) const { return coeffs.count(x) != 0; }

  Linear& operator+=(const Linear& o);
  Linear& operator*=(const Integer& k);
  friend Linear operator+(Linear a, const Linear& b) { return a += b; }
  friend Linear operator-(Linear a, Linear b) { return a += (b *= -1); }
  friend Linear operator*(Linear a, const Integer& k) { return a *= k; }

  /// Replaces x by `by` (x's coefficient times `by`).
  Linear substitute(VarId x, const Linear& by) const;
  Integer eval(const std::map<VarId, Integer>& env) const;

  friend bool operator==(const Linear&, const Linear&) = default;
  friend bool operator<(const Linear& a, const Linear& b) {
    if (a.coeffs != b.coeffs) return a.coeffs < b.coeffs;
    return a.constant < b.constant;
  }
};

enum class AtomKind { Lt, Eq, Ne, Dvd, NDvd };

/// `t < 0`, `t = 0`, `t ≠ 0`, `d | t` or `¬(d | t)`.
struct Atom {
  AtomKind kind;
  Integer divisor = 0;
  Linear t;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.divisor != b.divisor) return a.divisor < b.divisor;
    return a.t < b.t;
  }
};

struct Node;
using Formula = std::shared_ptr<const Node>;

enum class Kind { True, False, Atom, BoolVar, And, Or };

/// Quantifier-free formula in negation normal form.
struct Node {
  Kind kind;
  Atom atom{AtomKind::Eq, 0, {}};
  VarId bvar = 0;
  bool positive = true;
  std::vector<Formula> kids;
};

Formula top();
Formula bottom();
Formula atom(Atom a);
Formula bool_var(VarId b, bool positive = true);
Formula conj(std::vector<Formula> fs);
Formula disj(std::vector<Formula> fs);
Formula negate(const Formula& f);

Formula lt(const Linear& a, const Linear& b);
Formula le(const Linear& a, const Linear& b);
Formula eq(const Linear& a, const Linear& b);
Formula ne(const Linear& a, const Linear& b);

bool is_top(const Formula& f);
bool is_bottom(const Formula& f);
bool mentions(const Formula& f, VarId x);

Formula substitute(const Formula& f, VarId x, const Linear& by);
Formula assign_bool(const Formula& f, VarId b, bool value);

/// ∃x. f for an integer variable x (Cooper's method).
Formula exists_int(const Formula& f, VarId x);
Formula forall_int(const Formula& f, VarId x);
Formula exists_bool(const Formula& f, VarId b);
Formula forall_bool(const Formula& f, VarId b);

struct Assignment {
  std::map<VarId, Integer> ints;
  std::map<VarId, bool> bools;
};

/// Truth value of f under a total assignment of its variables.
bool holds(const Formula& f, const Assignment& a);

/// Decides satisfiability over the given variables (all free variables of f
/// must be listed) and returns a model when one exists.
std::optional<Assignment> find_model(const Formula& f, const std::vector<VarId>& ints,
                                     const std::vector<VarId>& bools);

std::string to_string(const Formula& f);

}  // namespace lctrs::pa
