#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lctrs/core/value.hpp"

namespace lctrs {

/// Raised when a term is built with the wrong arity or argument sorts.
class SortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SymbolKind { Term, Theory, Value };

/// A function symbol of the signature F = F_te ∪ F_th.
///
/// Value symbols are the constants of Val; they carry their value and have no
/// arguments. Overloaded theory symbols (`=` on Int and on Bool) are distinct
/// FunSym objects that share a name, so identity is (name, argument sorts).
struct FunSym {
  std::string name;
  std::vector<Sort> arg_sorts;
  Sort result_sort;
  SymbolKind kind = SymbolKind::Term;
  std::optional<Value> value;

  std::size_t arity() const { return arg_sorts.size(); }
  bool is_value() const { return kind == SymbolKind::Value; }
  bool is_theory() const { return kind != SymbolKind::Term; }
};

using SymbolRef = std::shared_ptr<const FunSym>;

bool same_symbol(const FunSym& a, const FunSym& b);

/// A sorted variable. Variables introduced by renaming keep their base name
/// and receive a positive index; user variables have index 0.
struct Var {
  std::string name;
  std::uint64_t index = 0;
  Sort sort;

  std::string to_string() const;

  friend bool operator==(const Var&, const Var&) = default;
  friend auto operator<=>(const Var&, const Var&) = default;
};

using VarSet = std::set<Var>;

/// A position: a path of 1-based argument indices; the empty path is the root.
class Position {
 public:
  Position() = default;
  explicit Position(std::vector<int> path) : path_(std::move(path)) {}

  static Position root() { return {}; }

  const std::vector<int>& path() const { return path_; }
  bool is_root() const { return path_.empty(); }
  std::size_t depth() const { return path_.size(); }

  Position child(int i) const;
  Position operator+(const Position& suffix) const;
  /// p.is_prefix_of(q) iff p ≤ q (p is above or equal to q).
  bool is_prefix_of(const Position& other) const;
  bool parallel_to(const Position& other) const;
  /// If this = prefix + rest, returns rest.
  std::optional<Position> strip_prefix(const Position& prefix) const;

  std::string to_string() const;

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;

 private:
  std::vector<int> path_;
};

using PositionSet = std::set<Position>;

bool pairwise_parallel(const PositionSet& positions);
std::string to_string(const PositionSet& positions);

/// Immutable first-order term with structural sharing.
class Term {
 public:
  Term() = default;

  static Term variable(Var v);
  /// Builds f(args); throws SortError on arity or argument sort mismatch.
  static Term apply(SymbolRef f, std::vector<Term> args = {});
  static Term value(const Value& v);

  bool valid() const { return node_ != nullptr; }
  bool is_var() const;
  bool is_app() const { return !is_var(); }
  bool is_value() const;

  const Var& var() const;
  const FunSym& symbol() const;
  const SymbolRef& symbol_ref() const;
  const std::vector<Term>& args() const;
  const Value& value_of() const;

  Sort sort() const;
  std::size_t hash() const;
  std::size_t size() const;

  /// S-expression rendering: `x`, `a`, `(f x (g 1))`.
  std::string to_string() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

enum class PositionFilter { All, Function };

/// Returns the sort of t, re-validating arities and argument sorts.
Sort sort_of(const Term& t);

PositionSet positions(const Term& t, PositionFilter filter = PositionFilter::All);
/// Throws std::out_of_range if p does not address a subterm of t.
const Term& subterm_at(const Term& t, const Position& p);
/// Simultaneous replacement t[u_p]_{p ∈ P}. Positions must be pairwise
/// parallel and replacements sort-correct; otherwise throws.
Term replace_at(const Term& t, const std::map<Position, Term>& assignments);
Term replace_at(const Term& t, const Position& p, const Term& replacement);

void collect_vars(const Term& t, VarSet& out);
VarSet vars(const Term& t);
/// Variables in order of first occurrence (left to right).
std::vector<Var> vars_in_order(const Term& t);
bool is_ground(const Term& t);
bool occurs(const Var& x, const Term& t);
/// True iff every function symbol of t is a theory or value symbol.
bool is_logical(const Term& t);
/// Number of occurrences of each variable.
std::map<Var, int> var_occurrences(const Term& t);

}  // namespace lctrs
