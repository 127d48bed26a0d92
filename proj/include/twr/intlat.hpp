#pragma once

#include "twr/linear_form.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace twr {

// Dense row-major matrix over an exact ring (Int or Rat).
template <class T>
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const;
  void set_column(std::size_t j, const std::vector<T>& values);
  Matrix transpose() const;
  bool is_zero() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator*(const Int& c, const IntMatrix& a);
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
std::vector<Int> operator*(const IntMatrix& a, const std::vector<Int>& v);
RatMatrix to_rational(const IntMatrix& m);

// Horizontal concatenation of matrices with equal row counts.
IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b);

Int determinant(const IntMatrix& m);
Rat determinant(const RatMatrix& m);
bool is_unimodular(const IntMatrix& m);
// Inverse of a unimodular matrix; throws NotUnimodular otherwise.
IntMatrix unimodular_inverse(const IntMatrix& m);

struct SmithForm {
  IntMatrix U;  // rows x rows, unimodular
  IntMatrix D;  // rows x cols, diagonal with D(i,i) | D(i+1,i+1), nonnegative
  IntMatrix V;  // cols x cols, unimodular
  std::size_t rank = 0;
  // The nonzero diagonal entries of D.
  std::vector<Int> invariant_factors() const;
};

// Returns U, D, V with U * M * V = D.
SmithForm smith_normal_form(const IntMatrix& m);

// Columns form a saturated Z-basis of {x : M x = 0}.
IntMatrix integer_kernel(const IntMatrix& m);

// Exact solution x of A x = b when A has full column rank; nullopt when b is not
// in the column span or the solution is not integral.
std::optional<std::vector<Int>> solve_integral(const IntMatrix& a, const std::vector<Int>& b);

// Symmetric matrix of linear forms.
class GramMatrix {
public:
  GramMatrix() = default;
  explicit GramMatrix(std::size_t n) : n_(n), entries_(n * n) {}
  GramMatrix(std::initializer_list<std::initializer_list<LinearForm>> rows);

  std::size_t size() const { return n_; }
  LinearForm& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  const LinearForm& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  bool is_symmetric() const;
  std::vector<std::string> variables() const;

  friend bool operator==(const GramMatrix& a, const GramMatrix& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const GramMatrix& a, const GramMatrix& b) { return !(a == b); }

  // `[[a,b],[b,c]]` with each entry rendered by LinearForm::to_string.
  std::string to_string(const std::vector<std::string>& order = {}) const;

private:
  std::size_t n_ = 0;
  std::vector<LinearForm> entries_;
};

// Uᵀ G U for an integer matrix U.
GramMatrix congruence_transform(const GramMatrix& g, const IntMatrix& u);

// Exhaustive search over integer matrices with entries in [-bound, bound] for a
// unimodular U with Uᵀ G1 U = G2. Candidates are visited column by column with
// entries in increasing order, so the witness returned is the least one in
// column-major lexicographic order.
std::optional<IntMatrix> congruence_search(const GramMatrix& g1, const GramMatrix& g2, int bound);

RatMatrix specialize(const GramMatrix& g, const std::map<std::string, Rat>& assignment);
bool is_positive_definite(const RatMatrix& m);

std::string format_matrix(const IntMatrix& m);
// Parses `[[1,2],[3,4]]`.
std::optional<IntMatrix> parse_int_matrix(const std::string& text);
// Parses `[[2*l1+l2, l1],[l1, 3*l2]]`; throws Error("ParseError") on malformed input.
GramMatrix parse_gram_matrix(const std::string& text);

}  // namespace twr
