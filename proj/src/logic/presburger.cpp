#include "lctrs/logic/presburger.hpp"

#include <algorithm>
#include <set>

namespace lctrs::pa {

// ---- Linear ---------------------------------------------------------------

Linear Linear::of_var(VarId x) {
  Linear l;
  l.coeffs[x] = 1;
  return l;
}

Linear Linear::of_const(Integer k) {
  Linear l;
  l.constant = std::move(k);
  return l;
}

Integer Linear::coeff(VarId x) const {
  auto it = coeffs.find(x);
  return it == coeffs.end() ? Integer(0) : it->second;
}

Linear& Linear::operator+=(const Linear& o) {
  for (const auto& [x, c] : o.coeffs) {
    Integer& slot = coeffs[x];
    slot += c;
    if (slot == 0) coeffs.erase(x);
  }
  constant += o.constant;
  return *this;
}

Linear& Linear::operator*=(const Integer& k) {
  if (k == 0) {
    coeffs.clear();
    constant = 0;
    return *this;
  }
  for (auto& [x, c] : coeffs) c *= k;
  constant *= k;
  return *this;
}

Linear Linear::substitute(VarId x, const Linear& by) const {
  auto it = coeffs.find(x);
  if (it == coeffs.end()) return *this;
  Integer c = it->second;
  Linear out = *this;
  out.coeffs.erase(x);
  out += by * c;
  return out;
}

Integer Linear::eval(const std::map<VarId, Integer>& env) const {
  Integer v = constant;
  for (const auto& [x, c] : coeffs) {
    auto it = env.find(x);
    if (it != env.end()) v += c * it->second;
  }
  return v;
}

// ---- Construction -----------------------------------------------------------

namespace {

Formula make(Node n) { return std::make_shared<const Node>(std::move(n)); }

const Formula& true_node() {
  static const Formula f = make(Node{Kind::True});
  return f;
}

const Formula& false_node() {
  static const Formula f = make(Node{Kind::False});
  return f;
}

Integer coeff_gcd(const Linear& t) {
  Integer g = 0;
  for (const auto& [x, c] : t.coeffs) g = gcd(g, c);
  return g;
}

int cmp(const Formula& a, const Formula& b);

int cmp_atom(const Atom& a, const Atom& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

int cmp(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case Kind::True:
    case Kind::False:
      return 0;
    case Kind::Atom:
      return cmp_atom(a->atom, b->atom);
    case Kind::BoolVar:
      if (a->bvar != b->bvar) return a->bvar < b->bvar ? -1 : 1;
      if (a->positive != b->positive) return a->positive ? 1 : -1;
      return 0;
    case Kind::And:
    case Kind::Or: {
      std::size_t n = std::min(a->kids.size(), b->kids.size());
      for (std::size_t i = 0; i < n; ++i)
        if (int c = cmp(a->kids[i], b->kids[i])) return c;
      if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

Formula junction(Kind kind, std::vector<Formula> fs) {
  const bool is_and = kind == Kind::And;
  const Kind unit = is_and ? Kind::True : Kind::False;
  const Kind absorbing = is_and ? Kind::False : Kind::True;
  std::vector<Formula> flat;
  for (auto& f : fs) {
    if (f->kind == unit) continue;
    if (f->kind == absorbing) return f;
    if (f->kind == kind) {
      flat.insert(flat.end(), f->kids.begin(), f->kids.end());
    } else {
      flat.push_back(std::move(f));
    }
  }
  std::sort(flat.begin(), flat.end(), [](const Formula& a, const Formula& b) { return cmp(a, b) < 0; });
  flat.erase(std::unique(flat.begin(), flat.end(), [](const Formula& a, const Formula& b) { return cmp(a, b) == 0; }),
             flat.end());
  // Complementary literals.
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const auto& f = flat[i];
    if (f->kind != Kind::Atom && f->kind != Kind::BoolVar) continue;
    Formula neg = negate(f);
    for (std::size_t j = i + 1; j < flat.size(); ++j)
      if (cmp(flat[j], neg) == 0) return is_and ? bottom() : top();
  }
  if (flat.empty()) return is_and ? top() : bottom();
  if (flat.size() == 1) return flat.front();
  return make(Node{kind, {AtomKind::Eq, 0, {}}, 0, true, std::move(flat)});
}

}  // namespace

Formula top() { return true_node(); }
Formula bottom() { return false_node(); }

Formula atom(Atom a) {
  Linear& t = a.t;
  switch (a.kind) {
    case AtomKind::Lt: {
      if (t.is_constant()) return t.constant < 0 ? top() : bottom();
      Integer g = coeff_gcd(t);
      if (g > 1) {
        for (auto& [x, c] : t.coeffs) c /= g;
        t.constant = floor_div(t.constant, g);
      }
      break;
    }
    case AtomKind::Eq:
    case AtomKind::Ne: {
      bool eq = a.kind == AtomKind::Eq;
      if (t.is_constant()) return (t.constant == 0) == eq ? top() : bottom();
      Integer g = coeff_gcd(t);
      if (floor_mod(t.constant, g) != 0) return eq ? bottom() : top();
      if (g > 1) {
        for (auto& [x, c] : t.coeffs) c /= g;
        t.constant /= g;
      }
      if (t.coeffs.begin()->second < 0) t *= -1;
      break;
    }
    case AtomKind::Dvd:
    case AtomKind::NDvd: {
      bool dvd = a.kind == AtomKind::Dvd;
      if (a.divisor < 0) a.divisor = -a.divisor;
      if (a.divisor == 0) throw std::invalid_argument("divisibility by zero");
      if (t.is_constant()) return (floor_mod(t.constant, a.divisor) == 0) == dvd ? top() : bottom();
      Integer g = gcd(coeff_gcd(t), a.divisor);
      g = gcd(g, t.constant);
      if (g > 1) {
        for (auto& [x, c] : t.coeffs) c /= g;
        t.constant /= g;
        a.divisor /= g;
      }
      if (a.divisor == 1) return dvd ? top() : bottom();
      t.constant = floor_mod(t.constant, a.divisor);
      break;
    }
  }
  return make(Node{Kind::Atom, std::move(a)});
}

Formula bool_var(VarId b, bool positive) {
  Node n{Kind::BoolVar};
  n.bvar = b;
  n.positive = positive;
  return make(std::move(n));
}

Formula conj(std::vector<Formula> fs) { return junction(Kind::And, std::move(fs)); }
Formula disj(std::vector<Formula> fs) { return junction(Kind::Or, std::move(fs)); }

Formula negate(const Formula& f) {
  switch (f->kind) {
    case Kind::True: return bottom();
    case Kind::False: return top();
    case Kind::BoolVar: return bool_var(f->bvar, !f->positive);
    case Kind::Atom: {
      Atom a = f->atom;
      switch (a.kind) {
        case AtomKind::Lt:
          a.t *= -1;
          a.t.constant -= 1;
          break;
        case AtomKind::Eq: a.kind = AtomKind::Ne; break;
        case AtomKind::Ne: a.kind = AtomKind::Eq; break;
        case AtomKind::Dvd: a.kind = AtomKind::NDvd; break;
        case AtomKind::NDvd: a.kind = AtomKind::Dvd; break;
      }
      return atom(std::move(a));
    }
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f->kids) kids.push_back(negate(k));
      return f->kind == Kind::And ? disj(std::move(kids)) : conj(std::move(kids));
    }
  }
  return f;
}

Formula lt(const Linear& a, const Linear& b) { return atom({AtomKind::Lt, 0, a - b}); }
Formula le(const Linear& a, const Linear& b) { return atom({AtomKind::Lt, 0, a - b - Linear::of_const(1)}); }
Formula eq(const Linear& a, const Linear& b) { return atom({AtomKind::Eq, 0, a - b}); }
Formula ne(const Linear& a, const Linear& b) { return atom({AtomKind::Ne, 0, a - b}); }

bool is_top(const Formula& f) { return f->kind == Kind::True; }
bool is_bottom(const Formula& f) { return f->kind == Kind::False; }

bool mentions(const Formula& f, VarId x) {
  switch (f->kind) {
    case Kind::Atom: return f->atom.t.mentions(x);
    case Kind::BoolVar: return f->bvar == x;
    case Kind::And:
    case Kind::Or:
      for (const auto& k : f->kids)
        if (mentions(k, x)) return true;
      return false;
    default: return false;
  }
}

namespace {

template <class AtomFn, class BoolFn>
Formula map_leaves(const Formula& f, const AtomFn& on_atom, const BoolFn& on_bool) {
  switch (f->kind) {
    case Kind::Atom: return on_atom(f);
    case Kind::BoolVar: return on_bool(f);
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      kids.reserve(f->kids.size());
      bool changed = false;
      for (const auto& k : f->kids) {
        kids.push_back(map_leaves(k, on_atom, on_bool));
        if (kids.back().get() != k.get()) changed = true;
      }
      if (!changed) return f;
      return f->kind == Kind::And ? conj(std::move(kids)) : disj(std::move(kids));
    }
    default: return f;
  }
}

Formula keep(const Formula& f) { return f; }

}  // namespace

Formula substitute(const Formula& f, VarId x, const Linear& by) {
  return map_leaves(
      f,
      [&](const Formula& a) {
        if (!a->atom.t.mentions(x)) return a;
        Atom n = a->atom;
        n.t = n.t.substitute(x, by);
        return atom(std::move(n));
      },
      keep);
}

Formula assign_bool(const Formula& f, VarId b, bool value) {
  return map_leaves(f, keep, [&](const Formula& v) {
    if (v->bvar != b) return v;
    return v->positive == value ? top() : bottom();
  });
}

// ---- Cooper's method ----------------------------------------------------------

namespace {

void collect_x_atoms(const Formula& f, VarId x, std::vector<Atom>& out) {
  if (f->kind == Kind::Atom) {
    if (f->atom.t.mentions(x)) out.push_back(f->atom);
  } else if (f->kind == Kind::And || f->kind == Kind::Or) {
    for (const auto& k : f->kids) collect_x_atoms(k, x, out);
  }
}

/// The x-free part of an atom whose x coefficient is ±1, solved for x:
/// for coefficient +1, x·1 + rest; returns rest.
Linear rest_of(const Atom& a, VarId x) {
  Linear r = a.t;
  r.coeffs.erase(x);
  return r;
}

Formula cooper(const Formula& f, VarId x) {
  std::vector<Atom> atoms;
  collect_x_atoms(f, x, atoms);
  Integer L = 1;
  for (const auto& a : atoms) L = lcm(L, a.t.coeff(x));

  // Scale every atom so x has coefficient ±L, then read L·x as the new x.
  auto unit = [&](const Formula& af) -> Formula {
    if (!af->atom.t.mentions(x)) return af;
    Atom a = af->atom;
    Integer c = a.t.coeff(x);
    Integer m = L / abs(c);
    a.t *= m;
    if (a.kind == AtomKind::Dvd || a.kind == AtomKind::NDvd) a.divisor *= m;
    a.t.coeffs[x] = c > 0 ? 1 : -1;
    return make(Node{Kind::Atom, std::move(a)});
  };
  Formula g = map_leaves(f, unit, keep);
  if (L > 1) g = conj({g, make(Node{Kind::Atom, Atom{AtomKind::Dvd, L, Linear::of_var(x)}})});

  atoms.clear();
  collect_x_atoms(g, x, atoms);
  Integer delta = 1;
  std::vector<Linear> lower, upper;  // B and A sets
  for (const auto& a : atoms) {
    bool pos = a.t.coeff(x) > 0;
    Linear r = rest_of(a, x);
    // Solve for x: coefficient +1 gives x = -r, coefficient -1 gives x = r.
    Linear e = pos ? r * Integer(-1) : r;
    switch (a.kind) {
      case AtomKind::Dvd:
      case AtomKind::NDvd:
        delta = lcm(delta, a.divisor);
        break;
      case AtomKind::Lt:
        if (pos) upper.push_back(e);       // x < e
        else lower.push_back(e);           // x > e
        break;
      case AtomKind::Eq:
        lower.push_back(e - Linear::of_const(1));
        upper.push_back(e + Linear::of_const(1));
        break;
      case AtomKind::Ne:
        lower.push_back(e);
        upper.push_back(e);
        break;
    }
  }
  std::sort(lower.begin(), lower.end());
  lower.erase(std::unique(lower.begin(), lower.end()), lower.end());
  std::sort(upper.begin(), upper.end());
  upper.erase(std::unique(upper.begin(), upper.end()), upper.end());

  const bool use_lower = lower.size() <= upper.size();
  Formula at_infinity = map_leaves(
      g,
      [&](const Formula& af) -> Formula {
        const Atom& a = af->atom;
        if (!a.t.mentions(x)) return af;
        bool pos = a.t.coeff(x) > 0;
        switch (a.kind) {
          case AtomKind::Lt: return (pos == use_lower) ? top() : bottom();
          case AtomKind::Eq: return bottom();
          case AtomKind::Ne: return top();
          default: return af;
        }
      },
      keep);

  std::vector<Formula> out;
  for (Integer j = 1; j <= delta; ++j) {
    Linear shift = Linear::of_const(use_lower ? j : Integer(-j));
    out.push_back(substitute(at_infinity, x, shift));
    if (is_top(out.back())) return top();
    for (const auto& b : use_lower ? lower : upper) {
      out.push_back(substitute(g, x, b + shift));
      if (is_top(out.back())) return top();
    }
  }
  return disj(std::move(out));
}

}  // namespace

Formula exists_int(const Formula& f, VarId x) {
  if (!mentions(f, x)) return f;
  if (f->kind == Kind::Or) {
    std::vector<Formula> parts;
    for (const auto& k : f->kids) {
      parts.push_back(exists_int(k, x));
      if (is_top(parts.back())) return top();
    }
    return disj(std::move(parts));
  }
  if (f->kind == Kind::And) {
    std::vector<Formula> with, without;
    for (const auto& k : f->kids) (mentions(k, x) ? with : without).push_back(k);
    // An equation with unit coefficient determines x.
    for (std::size_t i = 0; i < with.size(); ++i) {
      const auto& k = with[i];
      if (k->kind != Kind::Atom || k->atom.kind != AtomKind::Eq) continue;
      Integer c = k->atom.t.coeff(x);
      if (c != 1 && c != -1) continue;
      Linear e = rest_of(k->atom, x);
      if (c == 1) e *= -1;
      std::vector<Formula> rest = without;
      for (std::size_t j = 0; j < with.size(); ++j)
        if (j != i) rest.push_back(substitute(with[j], x, e));
      return conj(std::move(rest));
    }
    if (!without.empty()) {
      without.push_back(cooper(conj(std::move(with)), x));
      return conj(std::move(without));
    }
  }
  return cooper(f, x);
}

Formula forall_int(const Formula& f, VarId x) { return negate(exists_int(negate(f), x)); }

Formula exists_bool(const Formula& f, VarId b) {
  if (!mentions(f, b)) return f;
  return disj({assign_bool(f, b, true), assign_bool(f, b, false)});
}

Formula forall_bool(const Formula& f, VarId b) {
  if (!mentions(f, b)) return f;
  return conj({assign_bool(f, b, true), assign_bool(f, b, false)});
}

bool holds(const Formula& f, const Assignment& a) {
  switch (f->kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::BoolVar: {
      auto it = a.bools.find(f->bvar);
      bool v = it != a.bools.end() && it->second;
      return v == f->positive;
    }
    case Kind::Atom: {
      Integer v = f->atom.t.eval(a.ints);
      switch (f->atom.kind) {
        case AtomKind::Lt: return v < 0;
        case AtomKind::Eq: return v == 0;
        case AtomKind::Ne: return v != 0;
        case AtomKind::Dvd: return floor_mod(v, f->atom.divisor) == 0;
        case AtomKind::NDvd: return floor_mod(v, f->atom.divisor) != 0;
      }
      return false;
    }
    case Kind::And:
      for (const auto& k : f->kids)
        if (!holds(k, a)) return false;
      return true;
    case Kind::Or:
      for (const auto& k : f->kids)
        if (holds(k, a)) return true;
      return false;
  }
  return false;
}

namespace {

/// A value for x satisfying f, where x is the only free variable of f.
/// Beyond the largest constant the Lt/Eq/Ne atoms are fixed and divisibility
/// atoms repeat with the lcm of their divisors, so a bounded search suffices.
std::optional<Integer> solve_single(const Formula& f, VarId x) {
  std::vector<Atom> atoms;
  collect_x_atoms(f, x, atoms);
  Integer bound = 1;
  Integer period = 1;
  for (const auto& a : atoms) {
    Integer c = abs(a.t.coeff(x));
    Integer k = abs(a.t.constant) / c + 2;
    if (k > bound) bound = k;
    if (a.kind == AtomKind::Dvd || a.kind == AtomKind::NDvd) period = lcm(period, a.divisor);
  }
  Integer limit = bound + period + 1;
  Assignment env;
  for (Integer v = 0; v <= limit; ++v) {
    for (int sign : {1, -1}) {
      if (v == 0 && sign < 0) continue;
      env.ints[x] = v * sign;
      if (holds(f, env)) return env.ints[x];
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Assignment> find_model(const Formula& f, const std::vector<VarId>& ints,
                                     const std::vector<VarId>& bools) {
  struct Step {
    VarId v;
    bool is_bool;
  };
  std::vector<Step> order;
  for (VarId b : bools) order.push_back({b, true});
  for (VarId x : ints) order.push_back({x, false});

  // chain[k] has variables order[0..k) free; chain[n] = f.
  std::vector<Formula> chain(order.size() + 1);
  chain[order.size()] = f;
  for (std::size_t k = order.size(); k-- > 0;) {
    const auto& s = order[k];
    chain[k] = s.is_bool ? exists_bool(chain[k + 1], s.v) : exists_int(chain[k + 1], s.v);
  }
  if (!is_top(chain[0])) {
    if (is_bottom(chain[0])) return std::nullopt;
    if (!holds(chain[0], Assignment{})) return std::nullopt;
  }

  Assignment model;
  for (std::size_t k = 0; k < order.size(); ++k) {
    Formula g = chain[k + 1];
    for (const auto& [b, val] : model.bools) g = assign_bool(g, b, val);
    for (const auto& [x, val] : model.ints) g = substitute(g, x, Linear::of_const(val));
    const auto& s = order[k];
    if (s.is_bool) {
      Assignment probe = model;
      probe.bools[s.v] = false;
      bool ok = holds(assign_bool(g, s.v, false), probe);
      model.bools[s.v] = !ok;
    } else {
      auto v = solve_single(g, s.v);
      if (!v) throw std::logic_error("Cooper elimination produced no witness");
      model.ints[s.v] = *v;
    }
  }
  return model;
}

std::string to_string(const Formula& f) {
  switch (f->kind) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::BoolVar: return (f->positive ? "b" : "!b") + std::to_string(f->bvar);
    case Kind::Atom: {
      std::string t;
      for (const auto& [x, c] : f->atom.t.coeffs) t += c.str() + "*v" + std::to_string(x) + " + ";
      t += f->atom.t.constant.str();
      switch (f->atom.kind) {
        case AtomKind::Lt: return t + " < 0";
        case AtomKind::Eq: return t + " = 0";
        case AtomKind::Ne: return t + " != 0";
        case AtomKind::Dvd: return f->atom.divisor.str() + " | " + t;
        case AtomKind::NDvd: return f->atom.divisor.str() + " !| " + t;
      }
      return t;
    }
    case Kind::And:
    case Kind::Or: {
      std::string s = f->kind == Kind::And ? "(and" : "(or";
      for (const auto& k : f->kids) s += " " + to_string(k);
      return s + ")";
    }
  }
  return "?";
}

}  // namespace lctrs::pa
