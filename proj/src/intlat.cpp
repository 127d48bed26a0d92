#include "twr/intlat.hpp"

#include "twr/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace twr {

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error("DimensionMismatch", "ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

template <class T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

template <class T>
std::vector<T> Matrix<T>::column(std::size_t j) const {
  std::vector<T> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

template <class T>
void Matrix<T>::set_column(std::size_t j, const std::vector<T>& values) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

template <class T>
Matrix<T> Matrix<T>::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

template <class T>
bool Matrix<T>::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
}

template class Matrix<Int>;
template class Matrix<Rat>;

namespace {

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw Error("DimensionMismatch", "matrix product dimensions differ");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

void require_same_shape(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error("DimensionMismatch", "matrix shapes differ");
}

}  // namespace

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) { return multiply(a, b); }
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) { return multiply(a, b); }

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  require_same_shape(a, b);
  IntMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  require_same_shape(a, b);
  IntMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

IntMatrix operator*(const Int& c, const IntMatrix& a) {
  IntMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) *= c;
  return out;
}

std::vector<Int> operator*(const IntMatrix& a, const std::vector<Int>& v) {
  if (a.cols() != v.size()) throw Error("DimensionMismatch", "matrix-vector dimensions differ");
  std::vector<Int> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
  return r;
}

IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw Error("DimensionMismatch", "row counts differ");
  IntMatrix c(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

Rat determinant(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw Error("DimensionMismatch", "determinant of a non-square matrix");
  RatMatrix a = m;
  std::size_t n = a.rows();
  Rat det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && a(pivot, k) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rat factor = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  return det;
}

Int determinant(const IntMatrix& m) {
  Rat d = determinant(to_rational(m));
  return boost::multiprecision::numerator(d);
}

bool is_unimodular(const IntMatrix& m) {
  if (m.rows() != m.cols()) return false;
  Int d = determinant(m);
  return d == 1 || d == -1;
}

namespace {

// Gauss-Jordan inverse over the rationals; nullopt for singular input.
std::optional<RatMatrix> rational_inverse(const RatMatrix& m) {
  std::size_t n = m.rows();
  RatMatrix a = m;
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && a(pivot, k) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a(k, j), a(pivot, j));
      std::swap(inv(k, j), inv(pivot, j));
    }
    Rat p = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= p;
      inv(k, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Rat factor = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= factor * a(k, j);
        inv(i, j) -= factor * inv(k, j);
      }
    }
  }
  return inv;
}

}  // namespace

IntMatrix unimodular_inverse(const IntMatrix& m) {
  if (!is_unimodular(m)) throw Error("NotUnimodular", "matrix is not unimodular");
  auto inv = rational_inverse(to_rational(m));
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = boost::multiprecision::numerator((*inv)(i, j));
  return out;
}

std::vector<Int> SmithForm::invariant_factors() const {
  std::vector<Int> out;
  for (std::size_t i = 0; i < rank; ++i) out.push_back(D(i, i));
  return out;
}

SmithForm smith_normal_form(const IntMatrix& m) {
  SmithForm s;
  const std::size_t r = m.rows(), c = m.cols();
  s.D = m;
  s.U = IntMatrix::identity(r);
  s.V = IntMatrix::identity(c);
  IntMatrix& D = s.D;

  auto swap_rows = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < c; ++j) std::swap(D(a, j), D(b, j));
    for (std::size_t j = 0; j < r; ++j) std::swap(s.U(a, j), s.U(b, j));
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < r; ++i) std::swap(D(i, a), D(i, b));
    for (std::size_t i = 0; i < c; ++i) std::swap(s.V(i, a), s.V(i, b));
  };
  // row_a -= q * row_b
  auto row_sub = [&](std::size_t a, std::size_t b, const Int& q) {
    for (std::size_t j = 0; j < c; ++j) D(a, j) -= q * D(b, j);
    for (std::size_t j = 0; j < r; ++j) s.U(a, j) -= q * s.U(b, j);
  };
  auto col_sub = [&](std::size_t a, std::size_t b, const Int& q) {
    for (std::size_t i = 0; i < r; ++i) D(i, a) -= q * D(i, b);
    for (std::size_t i = 0; i < c; ++i) s.V(i, a) -= q * s.V(i, b);
  };

  std::size_t t = 0;
  for (; t < std::min(r, c); ++t) {
    bool found_any = false;
    while (true) {
      // Move the smallest nonzero entry of the trailing block to (t, t).
      std::size_t pi = r, pj = c;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (D(i, j) != 0 && (pi == r || abs(D(i, j)) < abs(D(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == r) break;
      found_any = true;
      swap_rows(t, pi);
      swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (D(i, t) == 0) continue;
        row_sub(i, t, D(i, t) / D(t, t));
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (D(t, j) == 0) continue;
        col_sub(j, t, D(t, j) / D(t, t));
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Enforce the divisibility chain.
      bool divisible = true;
      for (std::size_t i = t + 1; i < r && divisible; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (D(i, j) % D(t, t) != 0) {
            row_sub(t, i, Int(-1));
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (!found_any) break;
    if (D(t, t) < 0) {
      for (std::size_t j = 0; j < c; ++j) D(t, j) = -D(t, j);
      for (std::size_t j = 0; j < r; ++j) s.U(t, j) = -s.U(t, j);
    }
  }
  s.rank = t;
  return s;
}

IntMatrix integer_kernel(const IntMatrix& m) {
  SmithForm s = smith_normal_form(m);
  const std::size_t n = m.cols();
  IntMatrix basis(n, n - s.rank);
  for (std::size_t j = s.rank; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) basis(i, j - s.rank) = s.V(i, j);
  return basis;
}

std::optional<std::vector<Int>> solve_integral(const IntMatrix& a, const std::vector<Int>& b) {
  const std::size_t r = a.rows(), c = a.cols();
  if (b.size() != r) throw Error("DimensionMismatch", "right-hand side has wrong length");
  RatMatrix aug(r, c + 1);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) aug(i, j) = Rat(a(i, j));
    aug(i, c) = Rat(b[i]);
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t j = 0; j < c && row < r; ++j) {
    std::size_t p = row;
    while (p < r && aug(p, j) == 0) ++p;
    if (p == r) continue;
    for (std::size_t k = 0; k <= c; ++k) std::swap(aug(row, k), aug(p, k));
    Rat pv = aug(row, j);
    for (std::size_t k = 0; k <= c; ++k) aug(row, k) /= pv;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == row || aug(i, j) == 0) continue;
      Rat f = aug(i, j);
      for (std::size_t k = 0; k <= c; ++k) aug(i, k) -= f * aug(row, k);
    }
    pivot_col.push_back(j);
    ++row;
  }
  if (pivot_col.size() != c) throw Error("DimensionMismatch", "matrix does not have full column rank");
  for (std::size_t i = row; i < r; ++i)
    if (aug(i, c) != 0) return std::nullopt;
  std::vector<Int> x(c);
  for (std::size_t k = 0; k < pivot_col.size(); ++k) {
    const Rat& v = aug(k, c);
    if (boost::multiprecision::denominator(v) != 1) return std::nullopt;
    x[pivot_col[k]] = boost::multiprecision::numerator(v);
  }
  return x;
}

GramMatrix::GramMatrix(std::initializer_list<std::initializer_list<LinearForm>> rows) {
  n_ = rows.size();
  for (const auto& row : rows) {
    if (row.size() != n_) throw Error("DimensionMismatch", "Gram matrix literal is not square");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

bool GramMatrix::is_symmetric() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

std::vector<std::string> GramMatrix::variables() const {
  std::set<std::string> vars;
  for (const auto& e : entries_)
    for (const auto& [v, c] : e.terms()) vars.insert(v);
  return {vars.begin(), vars.end()};
}

std::string GramMatrix::to_string(const std::vector<std::string>& order) const {
  std::string out = "[";
  for (std::size_t i = 0; i < n_; ++i) {
    out += i ? ",[" : "[";
    for (std::size_t j = 0; j < n_; ++j) {
      if (j) out += ",";
      out += (*this)(i, j).to_string(order);
    }
    out += "]";
  }
  return out + "]";
}

GramMatrix congruence_transform(const GramMatrix& g, const IntMatrix& u) {
  const std::size_t n = g.size();
  if (u.rows() != n) throw Error("DimensionMismatch", "transform has wrong row count");
  const std::size_t k = u.cols();
  GramMatrix out(k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      LinearForm sum;
      for (std::size_t i = 0; i < n; ++i) {
        if (u(i, a) == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (u(j, b) == 0 || g(i, j).is_zero()) continue;
          sum += g(i, j) * Rat(u(i, a) * u(j, b));
        }
      }
      out(a, b) = sum;
    }
  return out;
}

namespace {

// One integer coefficient matrix per variable, scaled to a common denominator.
struct CoefficientStack {
  std::vector<IntMatrix> a;  // for G1
  std::vector<IntMatrix> b;  // for G2
};

CoefficientStack coefficient_stack(const GramMatrix& g1, const GramMatrix& g2) {
  std::set<std::string> vars;
  for (const auto& v : g1.variables()) vars.insert(v);
  for (const auto& v : g2.variables()) vars.insert(v);
  Int lcm = 1;
  const std::size_t n = g1.size();
  auto absorb = [&](const GramMatrix& g) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (const auto& [v, c] : g(i, j).terms()) lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(c));
  };
  absorb(g1);
  absorb(g2);
  CoefficientStack stack;
  for (const auto& v : vars) {
    IntMatrix a(n, n), b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) = boost::multiprecision::numerator(g1(i, j).coefficient(v) * lcm);
        b(i, j) = boost::multiprecision::numerator(g2(i, j).coefficient(v) * lcm);
      }
    stack.a.push_back(std::move(a));
    stack.b.push_back(std::move(b));
  }
  return stack;
}

Int bilinear(const IntMatrix& a, const std::vector<int>& u, const std::vector<int>& v) {
  Int total = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!u[i]) continue;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (v[j]) total += a(i, j) * (u[i] * v[j]);
  }
  return total;
}

}  // namespace

std::optional<IntMatrix> congruence_search(const GramMatrix& g1, const GramMatrix& g2, int bound) {
  if (g1.size() != g2.size()) throw Error("DimensionMismatch", "Gram matrices have different sizes");
  if (bound < 0) throw Error("InvalidArgument", "bound must be nonnegative");
  const std::size_t n = g1.size();
  if (n == 0) return IntMatrix(0, 0);

  // Prefilter: congruent matrices have equal determinants at every specialization.
  std::set<std::string> all_vars;
  for (const auto& v : g1.variables()) all_vars.insert(v);
  for (const auto& v : g2.variables()) all_vars.insert(v);
  std::map<std::string, Rat> sample;
  const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  int index = 0;
  for (const auto& v : all_vars) {
    sample[v] = Rat(primes[index % 16]) + Rat(index / 16, 97);
    ++index;
  }
  if (determinant(specialize(g1, sample)) != determinant(specialize(g2, sample))) return std::nullopt;

  CoefficientStack stack = coefficient_stack(g1, g2);
  const std::size_t nv = stack.a.size();

  // All vectors of [-bound, bound]^n in lexicographic order.
  std::vector<std::vector<int>> vectors;
  std::vector<int> cur(n, -bound);
  while (true) {
    vectors.push_back(cur);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (cur[pos] < bound) {
        ++cur[pos];
        break;
      }
      cur[pos] = -bound;
      if (pos == 0) {
        pos = n + 1;
        break;
      }
    }
    if (pos == n + 1) break;
  }

  // Candidates per column: vectors whose self-pairing matches the diagonal.
  std::vector<std::vector<std::size_t>> candidates(n);
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t idx = 0; idx < vectors.size(); ++idx) {
      bool ok = true;
      for (std::size_t k = 0; k < nv && ok; ++k)
        ok = bilinear(stack.a[k], vectors[idx], vectors[idx]) == stack.b[k](col, col);
      if (ok) candidates[col].push_back(idx);
    }

  std::vector<std::size_t> chosen(n);
  std::optional<IntMatrix> result;
  auto recurse = [&](auto&& self, std::size_t col) -> bool {
    if (col == n) {
      IntMatrix u(n, n);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) u(i, j) = vectors[chosen[j]][i];
      if (!is_unimodular(u)) return false;
      result = u;
      return true;
    }
    for (std::size_t idx : candidates[col]) {
      bool ok = true;
      for (std::size_t prev = 0; prev < col && ok; ++prev)
        for (std::size_t k = 0; k < nv && ok; ++k)
          ok = bilinear(stack.a[k], vectors[chosen[prev]], vectors[idx]) == stack.b[k](prev, col);
      if (!ok) continue;
      chosen[col] = idx;
      if (self(self, col + 1)) return true;
    }
    return false;
  };
  recurse(recurse, 0);
  return result;
}

RatMatrix specialize(const GramMatrix& g, const std::map<std::string, Rat>& assignment) {
  const std::size_t n = g.size();
  RatMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& [v, c] : g(i, j).terms()) {
        if (v != kUnitVariable && !assignment.count(v))
          throw Error("UnassignedVariable", "no value assigned to variable '" + v + "'");
      }
      out(i, j) = g(i, j).evaluate(assignment);
    }
  return out;
}

bool is_positive_definite(const RatMatrix& m) {
  if (m.rows() != m.cols()) return false;
  RatMatrix a = m;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rat f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return true;
}

std::string format_matrix(const IntMatrix& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += i ? ",[" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ",";
      out += m(i, j).str();
    }
    out += "]";
  }
  return out + "]";
}

namespace {

// Splits `[[a,b],[c,d]]` into rows of raw entry strings (whitespace removed).
std::optional<std::vector<std::vector<std::string>>> split_nested(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') return std::nullopt;
  std::vector<std::vector<std::string>> rows;
  std::size_t i = 1;
  if (s == "[]") return rows;
  while (i < s.size() - 1) {
    if (s[i] != '[') return std::nullopt;
    std::size_t close = s.find(']', i);
    if (close == std::string::npos) return std::nullopt;
    std::vector<std::string> row;
    std::string body = s.substr(i + 1, close - i - 1);
    std::size_t start = 0;
    while (true) {
      std::size_t comma = body.find(',', start);
      row.push_back(body.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(row);
    i = close + 1;
    if (i < s.size() - 1) {
      if (s[i] != ',') return std::nullopt;
      ++i;
    }
  }
  return rows;
}

}  // namespace

std::optional<IntMatrix> parse_int_matrix(const std::string& text) {
  auto rows = split_nested(text);
  if (!rows) return std::nullopt;
  const std::size_t r = rows->size();
  const std::size_t c = r ? (*rows)[0].size() : 0;
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if ((*rows)[i].size() != c) return std::nullopt;
    for (std::size_t j = 0; j < c; ++j) {
      Rat value;
      if (!parse_rational((*rows)[i][j], value) || boost::multiprecision::denominator(value) != 1)
        return std::nullopt;
      m(i, j) = boost::multiprecision::numerator(value);
    }
  }
  return m;
}

GramMatrix parse_gram_matrix(const std::string& text) {
  auto rows = split_nested(text);
  if (!rows) throw Error("ParseError", "expected a nested bracket matrix such as [[a,b],[b,c]]");
  const std::size_t n = rows->size();
  GramMatrix g(n);
  for (std::size_t i = 0; i < n; ++i) {
    if ((*rows)[i].size() != n) throw Error("ParseError", "Gram matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      std::string err;
      std::size_t offset = 0;
      if (!parse_linear_form((*rows)[i][j], g(i, j), err, offset))
        throw Error("ParseError", "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): " + err);
    }
  }
  if (!g.is_symmetric()) throw Error("ParseError", "Gram matrix must be symmetric");
  return g;
}

}  // namespace twr
