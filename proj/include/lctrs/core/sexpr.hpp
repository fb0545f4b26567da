#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lctrs {

/// A syntax or sort error at a 1-based line and column.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

struct SExpr {
  bool is_atom = true;
  std::string atom;
  std::vector<SExpr> items;
  int line = 1;
  int column = 1;

  bool is_list() const { return !is_atom; }
  std::string to_string() const;
};

/// Reads all top-level s-expressions. `;` starts a comment to end of line.
std::vector<SExpr> read_sexprs(std::string_view text);
SExpr read_sexpr(std::string_view text);

}  // namespace lctrs
