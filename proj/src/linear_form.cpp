#include "twr/linear_form.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace twr {

LinearForm::LinearForm(const std::string& variable, Rat coefficient) {
  if (coefficient != 0) terms_[variable] = coefficient;
}

LinearForm LinearForm::constant(Rat value) { return LinearForm(kUnitVariable, value); }

Rat LinearForm::coefficient(const std::string& variable) const {
  auto it = terms_.find(variable);
  return it == terms_.end() ? Rat(0) : it->second;
}

bool LinearForm::is_positive() const {
  if (terms_.empty()) return false;
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second > 0; });
}

bool LinearForm::has_nonnegative_coefficients() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second > 0; });
}

LinearForm& LinearForm::operator+=(const LinearForm& other) {
  for (const auto& [var, c] : other.terms_) {
    Rat& slot = terms_[var];
    slot += c;
    if (slot == 0) terms_.erase(var);
  }
  return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& other) {
  for (const auto& [var, c] : other.terms_) {
    Rat& slot = terms_[var];
    slot -= c;
    if (slot == 0) terms_.erase(var);
  }
  return *this;
}

LinearForm& LinearForm::operator*=(const Rat& factor) {
  if (factor == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& term : terms_) term.second *= factor;
  return *this;
}

LinearForm& LinearForm::operator/=(const Rat& divisor) {
  for (auto& term : terms_) term.second /= divisor;
  return *this;
}

Rat LinearForm::evaluate(const std::map<std::string, Rat>& assignment) const {
  Rat total = 0;
  for (const auto& [var, c] : terms_) {
    if (var == kUnitVariable) {
      total += c;
      continue;
    }
    auto it = assignment.find(var);
    if (it == assignment.end()) throw std::out_of_range(var);
    total += c * it->second;
  }
  return total;
}

std::string format_rational(const Rat& value) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

std::string LinearForm::to_string(const std::vector<std::string>& order) const {
  if (terms_.empty()) return "0";
  std::vector<std::string> vars;
  std::set<std::string> seen;
  for (const auto& v : order) {
    if (v != kUnitVariable && terms_.count(v) && seen.insert(v).second) vars.push_back(v);
  }
  for (const auto& [v, c] : terms_) {
    if (v != kUnitVariable && !seen.count(v)) vars.push_back(v);
  }
  if (terms_.count(kUnitVariable)) vars.push_back(kUnitVariable);

  std::string out;
  for (const auto& v : vars) {
    Rat c = terms_.at(v);
    bool negative = c < 0;
    if (negative) c = -c;
    if (!out.empty() || negative) out += negative ? "-" : "+";
    if (v == kUnitVariable) {
      out += format_rational(c);
    } else {
      if (c != 1) out += format_rational(c) + "*";
      out += v;
    }
  }
  return out;
}

bool parse_rational(std::string_view text, Rat& out) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  auto digits = [&](Int& value) {
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) return false;
    value = Int(std::string(text.substr(start, i - start)));
    return true;
  };
  Int num, den = 1;
  if (!digits(num)) return false;
  if (i < text.size() && text[i] == '/') {
    ++i;
    if (!digits(den) || den == 0) return false;
  }
  if (i != text.size()) return false;
  out = Rat(num, den);
  if (negative) out = -out;
  return true;
}

namespace {

bool is_variable_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.';
}

}  // namespace

bool parse_linear_form(std::string_view text, LinearForm& out, std::string& error,
                       std::size_t& error_offset) {
  out = LinearForm();
  std::size_t i = 0;
  bool first = true;
  auto skip_spaces = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_spaces();
  while (i < text.size()) {
    std::size_t term_start = i;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
      negative = text[i] == '-';
      ++i;
    } else if (!first) {
      error = "expected '+' or '-' between terms";
      error_offset = i;
      return false;
    }
    first = false;
    skip_spaces();
    // Optional rational coefficient.
    std::size_t coef_start = i;
    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/')) ++i;
    Rat coefficient = 1;
    bool has_coefficient = i > coef_start;
    if (has_coefficient && !parse_rational(text.substr(coef_start, i - coef_start), coefficient)) {
      error = "malformed rational coefficient";
      error_offset = coef_start;
      return false;
    }
    std::string variable;
    if (i < text.size() && text[i] == '*') {
      if (!has_coefficient) {
        error = "'*' without a coefficient";
        error_offset = i;
        return false;
      }
      ++i;
      std::size_t var_start = i;
      while (i < text.size() && is_variable_char(text[i])) ++i;
      if (i == var_start) {
        error = "expected a variable name after '*'";
        error_offset = var_start;
        return false;
      }
      variable = std::string(text.substr(var_start, i - var_start));
    } else if (has_coefficient) {
      variable = kUnitVariable;
    } else {
      std::size_t var_start = i;
      while (i < text.size() && is_variable_char(text[i])) ++i;
      if (i == var_start) {
        error = "expected a term";
        error_offset = term_start;
        return false;
      }
      variable = std::string(text.substr(var_start, i - var_start));
    }
    if (negative) coefficient = -coefficient;
    out += LinearForm(variable, coefficient);
    skip_spaces();
  }
  if (first) {
    error = "empty length expression";
    error_offset = 0;
    return false;
  }
  return true;
}

}  // namespace twr
