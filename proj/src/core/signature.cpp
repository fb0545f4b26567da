#include "lctrs/core/signature.hpp"

#include <algorithm>
#include <cctype>

#include "lctrs/core/theory.hpp"

namespace lctrs {

namespace {
bool looks_numeric(const std::string& s) {
  std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (i >= s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(i), s.end(), [](unsigned char c) { return std::isdigit(c); });
}
}  // namespace

Signature::Signature() : sorts_{Sort::integer(), Sort::boolean()} {}

void Signature::add_sort(const Sort& s) {
  if (has_sort(s)) throw SortError("sort " + s.name() + " declared twice");
  sorts_.push_back(s);
}

bool Signature::has_sort(const Sort& s) const {
  return std::find(sorts_.begin(), sorts_.end(), s) != sorts_.end();
}

SymbolRef Signature::add_function(const std::string& name, std::vector<Sort> arg_sorts, Sort result) {
  if (by_name_.count(name)) throw SortError("function " + name + " declared twice");
  if (is_theory_name(name) || name == "true" || name == "false" || looks_numeric(name))
    throw SortError("function " + name + " clashes with a theory symbol");
  for (const auto& s : arg_sorts)
    if (!has_sort(s)) throw SortError("unknown sort " + s.name() + " in declaration of " + name);
  if (!has_sort(result)) throw SortError("unknown sort " + result.name() + " in declaration of " + name);
  auto f = std::make_shared<FunSym>();
  f->name = name;
  f->arg_sorts = std::move(arg_sorts);
  f->result_sort = std::move(result);
  f->kind = SymbolKind::Term;
  by_name_[name] = f;
  term_symbols_.push_back(f);
  return f;
}

SymbolRef Signature::find_function(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

const std::vector<SymbolRef>& Signature::theory_symbols() const { return lctrs::theory_symbols(); }

}  // namespace lctrs
