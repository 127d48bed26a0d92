#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace twr {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Name of the variable that carries constant (purely numeric) lengths.
inline const std::string kUnitVariable = "1";

// A finite rational linear combination of named length variables.
// Zero coefficients are never stored, so structural equality is value equality.
class LinearForm {
public:
  LinearForm() = default;
  explicit LinearForm(const std::string& variable, Rat coefficient = 1);
  static LinearForm constant(Rat value);

  const std::map<std::string, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rat coefficient(const std::string& variable) const;

  // True when every coefficient is strictly positive and the form is nonzero,
  // i.e. the value is positive under every positive assignment.
  bool is_positive() const;
  bool has_nonnegative_coefficients() const;

  LinearForm& operator+=(const LinearForm& other);
  LinearForm& operator-=(const LinearForm& other);
  LinearForm& operator*=(const Rat& factor);
  LinearForm& operator/=(const Rat& divisor);

  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator-(LinearForm a) { return a *= Rat(-1); }
  friend LinearForm operator*(LinearForm a, const Rat& c) { return a *= c; }
  friend LinearForm operator*(const Rat& c, LinearForm a) { return a *= c; }
  friend LinearForm operator/(LinearForm a, const Rat& c) { return a /= c; }
  friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const LinearForm& a, const LinearForm& b) { return !(a == b); }
  friend bool operator<(const LinearForm& a, const LinearForm& b) { return a.terms_ < b.terms_; }

  Rat evaluate(const std::map<std::string, Rat>& assignment) const;

  // Renders terms as `c*var` joined by `+`/`-`; variables listed in `order`
  // come first in that order, any others follow alphabetically, and the unit
  // variable is printed as a bare number at the end.
  std::string to_string(const std::vector<std::string>& order = {}) const;

private:
  std::map<std::string, Rat> terms_;
};

std::string format_rational(const Rat& value);

// Parses a rational literal such as `3`, `-2/5`.
bool parse_rational(std::string_view text, Rat& out);

// Parses `2*l1+l2-1/3*l3+4`. On failure returns false and sets `error` to a
// description and `error_offset` to the byte offset of the problem.
bool parse_linear_form(std::string_view text, LinearForm& out, std::string& error,
                       std::size_t& error_offset);

}  // namespace twr
