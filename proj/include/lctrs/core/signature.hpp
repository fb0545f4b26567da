#pragma once

#include <map>
#include <string>
#include <vector>

#include "lctrs/core/term.hpp"

namespace lctrs {

/// A many-sorted signature: the integer/boolean theory plus declared term
/// sorts and term symbols. Term symbol names are unique and may not collide
/// with theory names or literals.
class Signature {
 public:
  Signature();

  void add_sort(const Sort& s);
  bool has_sort(const Sort& s) const;
  const std::vector<Sort>& sorts() const { return sorts_; }

  /// Declares a term symbol; throws SortError on redeclaration or bad sorts.
  SymbolRef add_function(const std::string& name, std::vector<Sort> arg_sorts, Sort result);
  SymbolRef find_function(const std::string& name) const;
  const std::vector<SymbolRef>& term_symbols() const { return term_symbols_; }
  /// Non-value theory symbols (F_th ∖ Val).
  const std::vector<SymbolRef>& theory_symbols() const;

 private:
  std::vector<Sort> sorts_;
  std::vector<SymbolRef> term_symbols_;
  std::map<std::string, SymbolRef> by_name_;
};

}  // namespace lctrs
