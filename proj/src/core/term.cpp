#include "lctrs/core/term.hpp"

#include <functional>
#include <sstream>

namespace lctrs {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

bool same_symbol(const FunSym& a, const FunSym& b) {
  if (&a == &b) return true;
  return a.name == b.name && a.kind == b.kind && a.arg_sorts == b.arg_sorts &&
         a.result_sort == b.result_sort;
}

std::string Var::to_string() const {
  if (index == 0) return name;
  return name + "_" + std::to_string(index);
}

// ---- Position -------------------------------------------------------------

Position Position::child(int i) const {
  auto p = path_;
  p.push_back(i);
  return Position(std::move(p));
}

Position Position::operator+(const Position& suffix) const {
  auto p = path_;
  p.insert(p.end(), suffix.path_.begin(), suffix.path_.end());
  return Position(std::move(p));
}

bool Position::is_prefix_of(const Position& other) const {
  if (path_.size() > other.path_.size()) return false;
  return std::equal(path_.begin(), path_.end(), other.path_.begin());
}

bool Position::parallel_to(const Position& other) const {
  return !is_prefix_of(other) && !other.is_prefix_of(*this);
}

std::optional<Position> Position::strip_prefix(const Position& prefix) const {
  if (!prefix.is_prefix_of(*this)) return std::nullopt;
  return Position(std::vector<int>(path_.begin() + static_cast<long>(prefix.depth()), path_.end()));
}

std::string Position::to_string() const {
  if (path_.empty()) return "ε";
  std::string s;
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(path_[i]);
  }
  return s;
}

bool pairwise_parallel(const PositionSet& positions) {
  for (auto i = positions.begin(); i != positions.end(); ++i)
    for (auto j = std::next(i); j != positions.end(); ++j)
      if (!i->parallel_to(*j)) return false;
  return true;
}

std::string to_string(const PositionSet& positions) {
  std::string s = "{";
  bool first = true;
  for (const auto& p : positions) {
    if (!first) s += ",";
    first = false;
    s += p.to_string();
  }
  return s + "}";
}

// ---- Term -----------------------------------------------------------------

struct Term::Node {
  std::optional<Var> var;
  SymbolRef sym;
  std::vector<Term> args;
  std::size_t hash = 0;
  std::size_t size = 1;
};

Term Term::variable(Var v) {
  if (v.sort.empty()) throw SortError("variable " + v.name + " has no sort");
  auto n = std::make_shared<Node>();
  n->hash = mix(mix(std::hash<std::string>{}(v.name), v.index), std::hash<std::string>{}(v.sort.name()));
  n->var = std::move(v);
  return Term(std::move(n));
}

Term Term::apply(SymbolRef f, std::vector<Term> args) {
  if (!f) throw SortError("null function symbol");
  if (args.size() != f->arity())
    throw SortError("symbol " + f->name + " expects " + std::to_string(f->arity()) +
                    " arguments, got " + std::to_string(args.size()));
  auto n = std::make_shared<Node>();
  n->hash = mix(std::hash<std::string>{}(f->name), args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!args[i].valid()) throw SortError("null argument to " + f->name);
    if (args[i].sort() != f->arg_sorts[i])
      throw SortError("argument " + std::to_string(i + 1) + " of " + f->name + " has sort " +
                      args[i].sort().name() + ", expected " + f->arg_sorts[i].name());
    n->hash = mix(n->hash, args[i].hash());
    n->size += args[i].size();
  }
  n->sym = std::move(f);
  n->args = std::move(args);
  return Term(std::move(n));
}

Term Term::value(const Value& v) {
  auto f = std::make_shared<FunSym>();
  f->name = v.to_string();
  f->result_sort = v.sort();
  f->kind = SymbolKind::Value;
  f->value = v;
  return apply(std::move(f), {});
}

bool Term::is_var() const { return node_->var.has_value(); }
bool Term::is_value() const { return !is_var() && node_->sym->is_value(); }
const Var& Term::var() const { return *node_->var; }
const FunSym& Term::symbol() const { return *node_->sym; }
const SymbolRef& Term::symbol_ref() const { return node_->sym; }
const std::vector<Term>& Term::args() const { return node_->args; }
const Value& Term::value_of() const { return *node_->sym->value; }
Sort Term::sort() const { return is_var() ? node_->var->sort : node_->sym->result_sort; }
std::size_t Term::hash() const { return node_->hash; }
std::size_t Term::size() const { return node_->size; }

std::string Term::to_string() const {
  if (is_var()) return var().to_string();
  if (args().empty()) return symbol().name;
  std::string s = "(" + symbol().name;
  for (const auto& a : args()) s += " " + a.to_string();
  return s + ")";
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  if (a.is_var() != b.is_var()) return false;
  if (a.is_var()) return a.var() == b.var();
  if (!same_symbol(a.symbol(), b.symbol())) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!(a.args()[i] == b.args()[i])) return false;
  return true;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (a.is_var() != b.is_var()) return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.is_var()) return a.var() <=> b.var();
  const auto& fa = a.symbol();
  const auto& fb = b.symbol();
  if (auto c = fa.name <=> fb.name; c != 0) return c;
  if (auto c = fa.arity() <=> fb.arity(); c != 0) return c;
  if (auto c = fa.arg_sorts <=> fb.arg_sorts; c != 0) return c;
  if (auto c = fa.result_sort <=> fb.result_sort; c != 0) return c;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (auto c = a.args()[i] <=> b.args()[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

// ---- Free functions ----------------------------------------------------------

Sort sort_of(const Term& t) {
  if (t.is_var()) return t.var().sort;
  const auto& f = t.symbol();
  if (t.args().size() != f.arity()) throw SortError("arity mismatch at " + f.name);
  for (std::size_t i = 0; i < t.args().size(); ++i)
    if (sort_of(t.args()[i]) != f.arg_sorts[i]) throw SortError("sort mismatch below " + f.name);
  return f.result_sort;
}

namespace {

void collect_positions(const Term& t, Position& here, PositionFilter filter, PositionSet& out) {
  if (t.is_var()) {
    if (filter == PositionFilter::All) out.insert(here);
    return;
  }
  out.insert(here);
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    Position child = here.child(static_cast<int>(i + 1));
    collect_positions(t.args()[i], child, filter, out);
  }
}

}  // namespace

PositionSet positions(const Term& t, PositionFilter filter) {
  PositionSet out;
  Position root;
  collect_positions(t, root, filter, out);
  return out;
}

const Term& subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (int i : p.path()) {
    if (cur->is_var() || i < 1 || static_cast<std::size_t>(i) > cur->args().size())
      throw std::out_of_range("position " + p.to_string() + " not in " + t.to_string());
    cur = &cur->args()[static_cast<std::size_t>(i - 1)];
  }
  return *cur;
}

namespace {

Term replace_rec(const Term& t, std::size_t depth,
                 std::map<Position, Term>::const_iterator begin,
                 std::map<Position, Term>::const_iterator end) {
  if (begin == end) return t;
  if (begin->first.depth() == depth) {
    if (std::next(begin) != end) throw std::invalid_argument("replacement positions overlap");
    if (begin->second.sort() != t.sort())
      throw SortError("replacement at " + begin->first.to_string() + " changes sort");
    return begin->second;
  }
  if (t.is_var()) throw std::out_of_range("position " + begin->first.to_string() + " below a variable");
  std::vector<Term> args = t.args();
  // Positions are sorted, so those sharing the next index are contiguous.
  auto it = begin;
  while (it != end) {
    int idx = it->first.path()[depth];
    if (idx < 1 || static_cast<std::size_t>(idx) > args.size())
      throw std::out_of_range("position " + it->first.to_string() + " out of range");
    auto group_end = it;
    while (group_end != end && group_end->first.path()[depth] == idx) ++group_end;
    auto& slot = args[static_cast<std::size_t>(idx - 1)];
    slot = replace_rec(slot, depth + 1, it, group_end);
    it = group_end;
  }
  return Term::apply(t.symbol_ref(), std::move(args));
}

}  // namespace

Term replace_at(const Term& t, const std::map<Position, Term>& assignments) {
  PositionSet ps;
  for (const auto& [p, _] : assignments) ps.insert(p);
  if (!pairwise_parallel(ps)) throw std::invalid_argument("replacement positions are not parallel");
  return replace_rec(t, 0, assignments.begin(), assignments.end());
}

Term replace_at(const Term& t, const Position& p, const Term& replacement) {
  return replace_at(t, std::map<Position, Term>{{p, replacement}});
}

void collect_vars(const Term& t, VarSet& out) {
  if (t.is_var()) {
    out.insert(t.var());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

VarSet vars(const Term& t) {
  VarSet out;
  collect_vars(t, out);
  return out;
}

namespace {
void vars_ordered(const Term& t, VarSet& seen, std::vector<Var>& out) {
  if (t.is_var()) {
    if (seen.insert(t.var()).second) out.push_back(t.var());
    return;
  }
  for (const auto& a : t.args()) vars_ordered(a, seen, out);
}
}  // namespace

std::vector<Var> vars_in_order(const Term& t) {
  VarSet seen;
  std::vector<Var> out;
  vars_ordered(t, seen, out);
  return out;
}

bool is_ground(const Term& t) {
  if (t.is_var()) return false;
  for (const auto& a : t.args())
    if (!is_ground(a)) return false;
  return true;
}

bool occurs(const Var& x, const Term& t) {
  if (t.is_var()) return t.var() == x;
  for (const auto& a : t.args())
    if (occurs(x, a)) return true;
  return false;
}

bool is_logical(const Term& t) {
  if (t.is_var()) return true;
  if (!t.symbol().is_theory()) return false;
  for (const auto& a : t.args())
    if (!is_logical(a)) return false;
  return true;
}

namespace {
void count_vars(const Term& t, std::map<Var, int>& out) {
  if (t.is_var()) {
    ++out[t.var()];
    return;
  }
  for (const auto& a : t.args()) count_vars(a, out);
}
}  // namespace

std::map<Var, int> var_occurrences(const Term& t) {
  std::map<Var, int> out;
  count_vars(t, out);
  return out;
}

}  // namespace lctrs
