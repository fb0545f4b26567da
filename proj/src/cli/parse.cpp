#include "lctrs/cli/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

#include "lctrs/core/theory.hpp"

namespace lctrs {

namespace {

[[noreturn]] void fail(const SExpr& e, const std::string& msg) { throw ParseError(e.line, e.column, msg); }

bool is_int_literal(const std::string& s) {
  std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (i >= s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(i), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

/// Builds terms of one scope (a rule, or a term with its constraint),
/// inferring variable sorts by repeated passes.
class Scope {
 public:
  explicit Scope(const Signature& sig) : sig_(sig) {}

  std::optional<Sort> infer(const SExpr& e, const std::optional<Sort>& expected) {
    if (e.is_atom) return infer_atom(e, expected);
    if (e.items.empty() || !e.items[0].is_atom) fail(e, "expected a function symbol at the head of a list");
    const std::string& head = e.items[0].atom;
    std::size_t n = e.items.size() - 1;
    auto arg = [&](std::size_t i) -> const SExpr& { return e.items[i + 1]; };

    if (auto f = sig_.find_function(head)) {
      if (n != f->arity())
        fail(e, "symbol " + head + " expects " + std::to_string(f->arity()) + " arguments, got " + std::to_string(n));
      for (std::size_t i = 0; i < n; ++i) infer(arg(i), f->arg_sorts[i]);
      return check(e, f->result_sort, expected);
    }
    const Sort I = Sort::integer(), B = Sort::boolean();
    if (head == "=" || head == "!=") {
      if (n != 2) fail(e, head + " expects 2 arguments");
      auto a = infer(arg(0), std::nullopt);
      auto b = infer(arg(1), std::nullopt);
      if (a && b && *a != *b) fail(e, "arguments of " + head + " have sorts " + a->name() + " and " + b->name());
      auto s = a ? a : b;
      if (s) {
        if (!s->is_theory()) fail(e, head + " is only defined on Int and Bool");
        infer(arg(0), s);
        infer(arg(1), s);
      }
      return check(e, B, expected);
    }
    if (head == "-") {
      if (n != 1 && n != 2) fail(e, "- expects 1 or 2 arguments");
      for (std::size_t i = 0; i < n; ++i) infer(arg(i), I);
      return check(e, I, expected);
    }
    if (head == "+" || head == "*") {
      if (n != 2) fail(e, head + " expects 2 arguments");
      for (std::size_t i = 0; i < n; ++i) infer(arg(i), I);
      return check(e, I, expected);
    }
    if (head == "<" || head == "<=" || head == ">" || head == ">=") {
      if (n != 2) fail(e, head + " expects 2 arguments");
      for (std::size_t i = 0; i < n; ++i) infer(arg(i), I);
      return check(e, B, expected);
    }
    if (head == "and" || head == "or") {
      if (n < 2) fail(e, head + " expects at least 2 arguments");
      for (std::size_t i = 0; i < n; ++i) infer(arg(i), B);
      return check(e, B, expected);
    }
    if (head == "not" || head == "=>") {
      if (n != (head == "not" ? 1u : 2u)) fail(e, head + " has the wrong number of arguments");
      for (std::size_t i = 0; i < n; ++i) infer(arg(i), B);
      return check(e, B, expected);
    }
    fail(e.items[0], "unknown function symbol " + head);
  }

  /// Runs inference to a fixpoint over the given roots.
  void solve(const std::vector<std::pair<const SExpr*, std::optional<Sort>>>& roots) {
    for (int pass = 0; pass < 64; ++pass) {
      std::size_t before = sorts_.size();
      for (const auto& [e, s] : roots) infer(*e, s);
      if (sorts_.size() == before) break;
    }
  }

  Term build(const SExpr& e) {
    if (e.is_atom) {
      const std::string& a = e.atom;
      if (is_int_literal(a)) return int_term(Integer(a));
      if (a == "true" || a == "false") return bool_term(a == "true");
      if (auto f = sig_.find_function(a)) return Term::apply(f, {});
      auto it = sorts_.find(a);
      if (it == sorts_.end()) fail(e, "cannot infer the sort of variable " + a);
      return Term::variable(Var{a, 0, it->second});
    }
    const std::string& head = e.items[0].atom;
    std::vector<Term> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(build(e.items[i]));
    if (auto f = sig_.find_function(head)) return Term::apply(f, std::move(args));
    if (head == "and" || head == "or") {
      Term acc = args.back();
      for (std::size_t i = args.size() - 1; i-- > 0;) acc = head == "and" ? mk_and(args[i], acc) : mk_or(args[i], acc);
      return acc;
    }
    std::vector<Sort> sorts;
    for (const auto& a : args) sorts.push_back(a.sort());
    auto op = resolve_theory(head, sorts);
    if (!op) fail(e, "ill-sorted application of " + head);
    return mk(*op, std::move(args));
  }

 private:
  std::optional<Sort> infer_atom(const SExpr& e, const std::optional<Sort>& expected) {
    const std::string& a = e.atom;
    if (is_int_literal(a)) return check(e, Sort::integer(), expected);
    if (a == "true" || a == "false") return check(e, Sort::boolean(), expected);
    if (auto f = sig_.find_function(a)) {
      if (f->arity() != 0) fail(e, "symbol " + a + " expects " + std::to_string(f->arity()) + " arguments");
      return check(e, f->result_sort, expected);
    }
    if (is_theory_name(a) || a.empty() || a[0] == ':') fail(e, "unexpected " + a);
    auto it = sorts_.find(a);
    if (it != sorts_.end()) return check(e, it->second, expected);
    if (expected) sorts_.emplace(a, *expected);
    return expected;
  }

  std::optional<Sort> check(const SExpr& e, const Sort& actual, const std::optional<Sort>& expected) {
    if (expected && *expected != actual)
      fail(e, e.to_string() + " has sort " + actual.name() + ", expected " + expected->name());
    return actual;
  }

  const Signature& sig_;
  std::map<std::string, Sort> sorts_;
};

void parse_fun(Signature& sig, const SExpr& e) {
  if (e.items.size() != 4 || !e.items[1].is_atom || e.items[2].is_atom || !e.items[3].is_atom)
    fail(e, "expected (fun NAME (ARG-SORTS…) RESULT-SORT)");
  std::vector<Sort> args;
  for (const auto& s : e.items[2].items) {
    if (!s.is_atom) fail(s, "expected a sort name");
    if (!sig.has_sort(Sort(s.atom))) fail(s, "unknown sort " + s.atom);
    args.emplace_back(s.atom);
  }
  if (!sig.has_sort(Sort(e.items[3].atom))) fail(e.items[3], "unknown sort " + e.items[3].atom);
  try {
    sig.add_function(e.items[1].atom, std::move(args), Sort(e.items[3].atom));
  } catch (const SortError& err) {
    fail(e.items[1], err.what());
  }
}

Rule parse_rule(const Signature& sig, const SExpr& e) {
  const auto& it = e.items;
  bool guarded = it.size() == 5 && it[3].is_atom && it[3].atom == ":guard";
  if (it.size() != 3 && !guarded) fail(e, "expected (rule LHS RHS) or (rule LHS RHS :guard C)");
  Scope scope(sig);
  std::optional<Sort> side = scope.infer(it[1], std::nullopt);
  if (!side) side = scope.infer(it[2], std::nullopt);
  std::vector<std::pair<const SExpr*, std::optional<Sort>>> roots{{&it[1], side}, {&it[2], side}};
  if (guarded) roots.push_back({&it[4], Sort::boolean()});
  scope.solve(roots);
  Term lhs = scope.build(it[1]);
  Term rhs = scope.build(it[2]);
  Term guard = guarded ? scope.build(it[4]) : bool_term(true);
  if (lhs.is_var() || lhs.symbol().is_theory())
    fail(it[1], "root of the left-hand side must be a declared function symbol, not a theory symbol or variable");
  try {
    return make_rule(lhs, rhs, guard);
  } catch (const std::invalid_argument& err) {
    fail(e, err.what());
  }
}

}  // namespace

Lctrs parse_lctrs(std::string_view text) {
  Signature sig;
  std::vector<Rule> rules;
  for (const auto& e : read_sexprs(text)) {
    if (e.is_atom || e.items.empty() || !e.items[0].is_atom) fail(e, "expected a declaration");
    const std::string& kw = e.items[0].atom;
    if (kw == "theory") {
      if (e.items.size() != 2 || !e.items[1].is_atom || e.items[1].atom != "Ints")
        fail(e, "only (theory Ints) is supported");
    } else if (kw == "sort") {
      if (e.items.size() != 2 || !e.items[1].is_atom) fail(e, "expected (sort NAME)");
      try {
        sig.add_sort(Sort(e.items[1].atom));
      } catch (const SortError& err) {
        fail(e.items[1], err.what());
      }
    } else if (kw == "fun") {
      parse_fun(sig, e);
    } else if (kw == "rule") {
      rules.push_back(parse_rule(sig, e));
    } else {
      fail(e.items[0], "unknown declaration " + kw);
    }
  }
  return Lctrs(std::move(sig), std::move(rules));
}

std::string print_lctrs(const Lctrs& r) {
  std::string out = "(theory Ints)\n";
  for (const auto& s : r.signature().sorts())
    if (!s.is_theory()) out += "(sort " + s.name() + ")\n";
  for (const auto& f : r.signature().term_symbols()) {
    out += "(fun " + f->name + " (";
    for (std::size_t i = 0; i < f->arg_sorts.size(); ++i) out += (i ? " " : "") + f->arg_sorts[i].name();
    out += ") " + f->result_sort.name() + ")\n";
  }
  for (const auto& rule : r.rules()) {
    out += "(rule " + rule.lhs.to_string() + " " + rule.rhs.to_string();
    if (!is_true(rule.guard)) out += " :guard " + rule.guard.to_string();
    out += ")\n";
  }
  return out;
}

CTerm parse_cterm(const Signature& sig, std::string_view term, std::string_view constraint,
                  const std::optional<Sort>& sort) {
  SExpr t = read_sexpr(term);
  SExpr c = read_sexpr(constraint);
  Scope scope(sig);
  scope.solve({{&t, sort}, {&c, Sort::boolean()}});
  return CTerm{scope.build(t), scope.build(c)};
}

}  // namespace lctrs
