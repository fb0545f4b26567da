#pragma once

#include <compare>
#include <string>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

namespace lctrs {

/// Arbitrary-precision integer; the value set of sort Int is all of Z.
using Integer = boost::multiprecision::cpp_int;

/// Floor division and the matching non-negative remainder.
Integer floor_div(const Integer& a, const Integer& b);
Integer floor_mod(const Integer& a, const Integer& b);
Integer gcd(Integer a, Integer b);
Integer lcm(const Integer& a, const Integer& b);

/// Name of a sort. Sorts are compared by name.
class Sort {
 public:
  Sort() = default;
  explicit Sort(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  bool empty() const { return name_.empty(); }

  static Sort integer() { return Sort("Int"); }
  static Sort boolean() { return Sort("Bool"); }

  bool is_theory() const { return name_ == "Int" || name_ == "Bool"; }

  friend bool operator==(const Sort&, const Sort&) = default;
  friend auto operator<=>(const Sort&, const Sort&) = default;

 private:
  std::string name_;
};

/// A theory value: an integer or a boolean.
class Value {
 public:
  Value() : data_(Integer(0)) {}
  Value(Integer i) : data_(std::move(i)) {}  // NOLINT(google-explicit-constructor)
  Value(bool b) : data_(b) {}                 // NOLINT(google-explicit-constructor)
  Value(int i) : data_(Integer(i)) {}         // NOLINT(google-explicit-constructor)

  bool is_bool() const { return std::holds_alternative<bool>(data_); }
  bool is_int() const { return std::holds_alternative<Integer>(data_); }
  bool as_bool() const { return std::get<bool>(data_); }
  const Integer& as_int() const { return std::get<Integer>(data_); }

  Sort sort() const { return is_bool() ? Sort::boolean() : Sort::integer(); }
  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b) { return a.data_ == b.data_; }
  friend bool operator<(const Value& a, const Value& b) { return a.data_ < b.data_; }

 private:
  std::variant<bool, Integer> data_;
};

}  // namespace lctrs
