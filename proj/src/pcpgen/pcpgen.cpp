#include "lctrs/pcpgen/pcpgen.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "lctrs/core/theory.hpp"
#include "lctrs/rewriting/steps.hpp"

namespace lctrs {

namespace {

bool is_binary_word(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t from = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(from, i - from));
      from = i + 1;
    }
  return out;
}

}  // namespace

PCPInstance::PCPInstance(std::vector<std::pair<std::string, std::string>> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw std::invalid_argument("a PCP instance needs at least one pair");
  for (const auto& [a, b] : pairs_)
    if (!is_binary_word(a) || !is_binary_word(b))
      throw std::invalid_argument("PCP words must be non-empty strings over {0,1}: " + a + "," + b);
  if (std::all_of(pairs_.begin(), pairs_.end(), [](const auto& p) { return p.first == p.second; }))
    throw std::invalid_argument("every pair has equal components; the instance is trivially solvable");
}

PCPInstance PCPInstance::parse(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (auto part : split(text, ';')) {
    auto comps = split(part, ',');
    if (comps.size() != 2) throw std::invalid_argument("expected α,β in PCP pair '" + trim(part) + "'");
    pairs.emplace_back(trim(comps[0]), trim(comps[1]));
  }
  return PCPInstance(std::move(pairs));
}

std::string PCPInstance::to_string() const {
  std::string s;
  for (const auto& [a, b] : pairs_) s += (s.empty() ? "" : ";") + a + "," + b;
  return s;
}

std::string PCPInstance::alpha_word(const std::vector<std::size_t>& w) const {
  std::string s;
  for (auto i : w) s += alpha(i);
  return s;
}

std::string PCPInstance::beta_word(const std::vector<std::size_t>& w) const {
  std::string s;
  for (auto i : w) s += beta(i);
  return s;
}

bool PCPInstance::is_solution(const std::vector<std::size_t>& w) const {
  return !w.empty() && alpha_word(w) == beta_word(w);
}

Integer encode_string(const std::vector<std::size_t>& indices, std::size_t n_pairs) {
  Integer n = 0;
  for (auto it = indices.rbegin(); it != indices.rend(); ++it) {
    if (*it < 1 || *it > n_pairs)
      throw std::out_of_range("index " + std::to_string(*it) + " outside 1.." + std::to_string(n_pairs));
    n = Integer(n_pairs) * n + Integer(*it);
  }
  return n;
}

std::vector<std::size_t> decode(const Integer& n, std::size_t n_pairs) {
  if (n < 0) throw std::invalid_argument("cannot decode a negative number");
  if (n_pairs == 0) throw std::invalid_argument("N must be positive");
  std::vector<std::size_t> w;
  Integer big_n(n_pairs);
  for (Integer k = n; k > 0;) {
    // k = N·m + i with 1 ≤ i ≤ N.
    Integer m = (k - 1) / big_n;
    w.push_back(static_cast<std::size_t>(k - big_n * m));
    k = m;
  }
  return w;
}

std::string index_string(const std::vector<std::size_t>& w, std::size_t n_pairs) {
  std::string s;
  for (auto i : w) s += (n_pairs > 9 && !s.empty() ? "." : "") + std::to_string(i);
  return s.empty() ? "ε" : s;
}

Lctrs build_rp(const PCPInstance& p) {
  Signature sig;
  Sort pcp("PCP"), str("String"), ints = Sort::integer();
  sig.add_sort(pcp);
  sig.add_sort(str);
  auto e = sig.add_function("e", {}, str);
  auto b0 = sig.add_function("bit0", {str}, str);
  auto b1 = sig.add_function("bit1", {str}, str);
  auto start = sig.add_function("start", {}, pcp);
  auto top = sig.add_function("top", {}, pcp);
  auto bot = sig.add_function("bot", {}, pcp);
  auto test = sig.add_function("test", {str, str, ints}, pcp);
  auto alpha = sig.add_function("alpha", {ints}, str);
  auto beta = sig.add_function("beta", {ints}, str);

  Term x = Term::variable(Var{"x", 0, str});
  Term y = Term::variable(Var{"y", 0, str});
  Term n = Term::variable(Var{"n", 0, ints});
  Term m = Term::variable(Var{"m", 0, ints});
  Term ee = Term::apply(e);
  auto app = [](SymbolRef f, std::vector<Term> args) { return Term::apply(f, std::move(args)); };
  Term yes = bool_term(true);
  Term positive = mk_gt(n, int_term(0));

  std::vector<Rule> rules;
  rules.push_back(make_rule(Term::apply(start), app(test, {app(alpha, {n}), app(beta, {n}), n}), positive));
  rules.push_back(make_rule(app(test, {ee, ee, n}), Term::apply(top), yes));
  rules.push_back(make_rule(app(test, {app(b0, {x}), app(b0, {y}), n}), app(test, {x, y, n}), yes));
  rules.push_back(make_rule(app(test, {app(b0, {x}), app(b1, {y}), n}), Term::apply(bot), yes));
  rules.push_back(make_rule(app(test, {app(b1, {x}), app(b1, {y}), n}), app(test, {x, y, n}), yes));
  rules.push_back(make_rule(app(test, {app(b1, {x}), app(b0, {y}), n}), Term::apply(bot), yes));
  rules.push_back(make_rule(app(test, {app(b0, {x}), ee, n}), Term::apply(bot), yes));
  rules.push_back(make_rule(app(test, {ee, app(b0, {y}), n}), Term::apply(bot), yes));
  rules.push_back(make_rule(app(test, {app(b1, {x}), ee, n}), Term::apply(bot), yes));
  rules.push_back(make_rule(app(test, {ee, app(b1, {y}), n}), Term::apply(bot), yes));
  rules.push_back(make_rule(app(alpha, {int_term(0)}), ee, yes));
  rules.push_back(make_rule(app(beta, {int_term(0)}), ee, yes));

  // γ(t) for a word γ over {0,1}.
  auto gamma = [&](const std::string& word, Term t) {
    for (auto it = word.rbegin(); it != word.rend(); ++it) t = app(*it == '0' ? b0 : b1, {t});
    return t;
  };
  Integer big_n(p.size());
  for (std::size_t i = 1; i <= p.size(); ++i) {
    Term guard = mk_and(mk_eq(mk_add(mk_mul(int_term(big_n), m), int_term(Integer(i))), n), positive);
    rules.push_back(make_rule(app(alpha, {n}), gamma(p.alpha(i), app(alpha, {m})), guard));
    rules.push_back(make_rule(app(beta, {n}), gamma(p.beta(i), app(beta, {m})), guard));
  }
  return Lctrs(std::move(sig), std::move(rules));
}

std::string to_string(CandidateResult r) {
  switch (r) {
    case CandidateResult::Solution:
      return "solution";
    case CandidateResult::NonSolution:
      return "non-solution";
    case CandidateResult::OutOfFuel:
      return "out of fuel";
  }
  return "?";
}

CandidateResult check_candidate(const PCPInstance& p, const Integer& n, const Solver& solver,
                                std::optional<std::size_t> fuel) {
  return check_candidate(p, build_rp(p), n, solver, fuel);
}

CandidateResult check_candidate(const PCPInstance& p, const Lctrs& rp, const Integer& n, const Solver& solver,
                                std::optional<std::size_t> fuel) {
  if (n <= 0) throw std::invalid_argument("candidates are positive numbers");
  auto w = decode(n, p.size());
  std::size_t steps = fuel.value_or(10 * (p.alpha_word(w).size() + p.beta_word(w).size()));
  const Signature& sig = rp.signature();
  Term nt = int_term(n);
  Term t = Term::apply(sig.find_function("test"), {Term::apply(sig.find_function("alpha"), {nt}),
                                                   Term::apply(sig.find_function("beta"), {nt}), nt});
  ValueDomain d = ValueDomain::interval(0, 0);
  std::map<std::string, std::vector<Rule>> by_root;
  for (const auto& rule : rp.rc()) by_root[rule.lhs.symbol().name].push_back(rule);
  // Leftmost-outermost step; R_P is deterministic on candidate terms.
  std::function<std::optional<Term>(const Term&)> step = [&](const Term& u) -> std::optional<Term> {
    if (u.is_var() || u.is_value()) return std::nullopt;
    auto it = by_root.find(u.symbol().name);
    if (it != by_root.end()) {
      auto ms = plain_root_matches(u, it->second, d, solver);
      if (!ms.empty()) return ms.front().sigma.apply(ms.front().rule.rhs);
    }
    for (std::size_t i = 0; i < u.args().size(); ++i)
      if (auto r = step(u.args()[i])) return replace_at(u, Position({static_cast<int>(i) + 1}), *r);
    return std::nullopt;
  };
  for (std::size_t k = 0; k <= steps; ++k) {
    auto next = step(t);
    if (!next) {
      const std::string& root = t.symbol().name;
      if (root == "top") return CandidateResult::Solution;
      if (root == "bot") return CandidateResult::NonSolution;
      return CandidateResult::OutOfFuel;
    }
    if (k == steps) break;
    t = std::move(*next);
  }
  return CandidateResult::OutOfFuel;
}

std::optional<std::vector<std::size_t>> find_solution(const PCPInstance& p, std::size_t max_length) {
  std::vector<std::size_t> w;
  for (std::size_t len = 1; len <= max_length; ++len) {
    // Index strings of length len in encoding order: the first index varies fastest.
    w.assign(len, 1);
    while (true) {
      if (p.is_solution(w)) return w;
      std::size_t k = 0;
      while (k < len && ++w[k] > p.size()) w[k++] = 1;
      if (k == len) break;
    }
  }
  return std::nullopt;
}

}  // namespace lctrs
