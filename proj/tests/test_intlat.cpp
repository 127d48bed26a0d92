#include <doctest.h>

#include "twr/error.hpp"
#include "twr/intlat.hpp"

#include <random>

using namespace twr;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int range) {
  std::uniform_int_distribution<int> d(-range, range);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = d(rng);
  return m;
}

LinearForm lf(const char* text) {
  LinearForm f;
  std::string error;
  std::size_t offset = 0;
  REQUIRE(parse_linear_form(text, f, error, offset));
  return f;
}

std::size_t rank_of(const IntMatrix& m) { return smith_normal_form(m).rank; }

bool in_kernel(const IntMatrix& m, const std::vector<Int>& x) {
  for (const Int& v : m * x)
    if (v != 0) return false;
  return true;
}

// Every vector of the box [-bound, bound]^n, in lexicographic order.
template <class F>
void for_each_in_box(std::size_t n, int bound, F&& f) {
  std::vector<Int> x(n, -bound);
  while (true) {
    f(x);
    std::size_t k = 0;
    while (k < n && x[k] == bound) x[k++] = -bound;
    if (k == n) return;
    ++x[k];
  }
}

GramMatrix example_input_gram() {
  return {{lf("2*l1+2*l2+2*l3"), lf("l1+2*l2+3*l3")}, {lf("l1+2*l2+3*l3"), lf("2*l1+4*l2+6*l3")}};
}

GramMatrix example_output_gram() {
  return {{lf("2*l1+2*l2+2*l3"), lf("l1-l3")}, {lf("l1-l3"), lf("2*l1+2*l2+2*l3")}};
}

}  // namespace

TEST_CASE("Smith normal form of small matrices") {
  SmithForm id = smith_normal_form(IntMatrix::identity(3));
  CHECK(id.D == IntMatrix::identity(3));
  CHECK(id.U == IntMatrix::identity(3));
  CHECK(id.V == IntMatrix::identity(3));
  SmithForm two = smith_normal_form(IntMatrix{{2, 0}, {0, 2}});
  CHECK(two.D == IntMatrix{{2, 0}, {0, 2}});
  SmithForm mixed = smith_normal_form(IntMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  CHECK(mixed.invariant_factors() == std::vector<Int>{2, 6, 12});
  CHECK(mixed.U * IntMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}} * mixed.V == mixed.D);
}

TEST_CASE("property: Smith form invariants on random matrices") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 150; ++iter) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    IntMatrix m = random_matrix(rng, r, c, 6);
    SmithForm s = smith_normal_form(m);
    REQUIRE(s.U * m * s.V == s.D);
    CHECK(is_unimodular(s.U));
    CHECK(is_unimodular(s.V));
    auto f = s.invariant_factors();
    CHECK(f.size() == s.rank);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j) CHECK(s.D(i, j) == 0);
    for (std::size_t i = 0; i + 1 < f.size(); ++i) CHECK(f[i + 1] % f[i] == 0);
    for (const Int& d : f) CHECK(d > 0);
  }
}

TEST_CASE("integer kernels") {
  IntMatrix k = integer_kernel(IntMatrix{{1, 1}});
  REQUIRE(k.cols() == 1);
  CHECK(((k(0, 0) == 1 && k(1, 0) == -1) || (k(0, 0) == -1 && k(1, 0) == 1)));
  CHECK(integer_kernel(IntMatrix{{2, 1}, {1, 1}}).cols() == 0);
  CHECK(integer_kernel(IntMatrix(0, 3)).cols() == 3);
}

TEST_CASE("property: kernel bases are saturated and agree with a brute-force search") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 60; ++iter) {
    std::size_t r = 1 + rng() % 3, c = 2 + rng() % 3;
    IntMatrix m = random_matrix(rng, r, c, 3);
    IntMatrix k = integer_kernel(m);
    CHECK(k.cols() == c - rank_of(m));
    for (std::size_t j = 0; j < k.cols(); ++j) CHECK(in_kernel(m, k.column(j)));
    if (k.cols() > 0) {
      for (const Int& d : smith_normal_form(k).invariant_factors()) CHECK(d == 1);
    }
    // Every small kernel vector is an integral combination of the basis.
    for_each_in_box(c, 2, [&](const std::vector<Int>& x) {
      if (!in_kernel(m, x)) return;
      if (k.cols() == 0) {
        for (const Int& v : x) CHECK(v == 0);
        return;
      }
      CHECK(solve_integral(k, x).has_value());
    });
  }
}

TEST_CASE("determinants, unimodularity and inverses") {
  CHECK(determinant(IntMatrix{{2, 1}, {-3, -2}}) == -1);
  CHECK(is_unimodular(IntMatrix{{1, 1}, {0, -1}}));
  CHECK_FALSE(is_unimodular(IntMatrix{{2, 0}, {0, 1}}));
  IntMatrix u{{2, 1, 0}, {-3, -2, 0}, {-2, -2, 1}};
  CHECK(u * unimodular_inverse(u) == IntMatrix::identity(3));
  try {
    unimodular_inverse(IntMatrix{{2, 0}, {0, 1}});
    FAIL("expected NotUnimodular");
  } catch (const Error& e) {
    CHECK(e.code() == "NotUnimodular");
  }
}

TEST_CASE("block factorization matrices AU = 2UV with V unimodular") {
  struct Case {
    IntMatrix u, a;
  };
  std::vector<Case> cases = {
      {{{2, 1, 0, 0}, {0, -1, 1, 0}, {0, 0, -1, 1}, {0, 0, 0, -1}},
       {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}}},
      {{{2, 1, 0}, {0, -1, 1}, {0, 0, -1}}, {{1, 1, 1}, {1, 1, -1}, {2, -2, 0}}},
      {{{2, 1}, {0, -1}}, {{1, 1}, {3, -1}}},
  };
  for (const auto& c : cases) {
    IntMatrix au = c.a * c.u;
    // V = (2U)^{-1} A U must be integral and unimodular.
    std::size_t n = c.u.rows();
    IntMatrix v(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      auto col = solve_integral(Int(2) * c.u, au.column(j));
      REQUIRE(col.has_value());
      v.set_column(j, *col);
    }
    CHECK(au == Int(2) * c.u * v);
    CHECK(is_unimodular(v));
  }
}

TEST_CASE("congruence search") {
  GramMatrix g = example_input_gram();
  auto self = congruence_search(g, g, 1);
  REQUIRE(self.has_value());
  CHECK(congruence_transform(g, *self) == g);

  auto w = congruence_search(example_input_gram(), example_output_gram(), 2);
  REQUIRE(w.has_value());
  CHECK(congruence_transform(example_input_gram(), *w) == example_output_gram());
  CHECK(is_unimodular(*w));
  CHECK(congruence_transform(example_input_gram(), IntMatrix{{1, 1}, {0, -1}}) == example_output_gram());

  GramMatrix a{{LinearForm("l1")}}, b{{LinearForm("l2")}};
  CHECK_FALSE(congruence_search(a, b, 3).has_value());
  try {
    congruence_search(a, g, 1);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == "DimensionMismatch");
  }
}

TEST_CASE("property: congruence witnesses invert and commute with specialization") {
  std::mt19937_64 rng(3);
  std::map<std::string, Rat> point = {{"l1", Rat(2)}, {"l2", Rat(3, 2)}, {"l3", Rat(5)}};
  for (int iter = 0; iter < 25; ++iter) {
    IntMatrix u;
    do u = random_matrix(rng, 2, 2, 1);
    while (!is_unimodular(u));
    GramMatrix g2 = congruence_transform(example_input_gram(), u);
    auto w = congruence_search(example_input_gram(), g2, 2);
    REQUIRE(w.has_value());
    CHECK(congruence_transform(example_input_gram(), *w) == g2);
    auto back = congruence_search(g2, example_input_gram(), 3);
    REQUIRE(back.has_value());
    CHECK(congruence_transform(g2, unimodular_inverse(*w)) == example_input_gram());
    RatMatrix wr = to_rational(*w);
    CHECK(wr.transpose() * specialize(example_input_gram(), point) * wr == specialize(g2, point));
  }
}

TEST_CASE("specialization and positive definiteness") {
  GramMatrix one{{lf("2*l2+2*l3")}};
  RatMatrix s = specialize(one, {{"l2", Rat(1)}, {"l3", Rat(1)}});
  CHECK(s == RatMatrix{{Rat(4)}});
  CHECK(is_positive_definite(s));
  std::map<std::string, Rat> ones = {{"l1", Rat(1)}, {"l2", Rat(1)}, {"l3", Rat(1)}};
  RatMatrix e = specialize(example_input_gram(), ones);
  CHECK(e == RatMatrix{{Rat(6), Rat(6)}, {Rat(6), Rat(12)}});
  CHECK(is_positive_definite(e));
  CHECK_FALSE(is_positive_definite(RatMatrix(2, 2)));
  CHECK_FALSE(is_positive_definite(RatMatrix{{Rat(1), Rat(2)}, {Rat(2), Rat(1)}}));
  try {
    specialize(one, {{"l2", Rat(1)}});
    FAIL("expected UnassignedVariable");
  } catch (const Error& e2) {
    CHECK(e2.code() == "UnassignedVariable");
  }
}

TEST_CASE("matrix text round trips") {
  auto m = parse_int_matrix("[[1,-2],[3,4]]");
  REQUIRE(m.has_value());
  CHECK(*m == IntMatrix{{1, -2}, {3, 4}});
  CHECK(format_matrix(*m) == "[[1,-2],[3,4]]");
  CHECK_FALSE(parse_int_matrix("[[1,2],[3]]").has_value());
  GramMatrix g = parse_gram_matrix("[[2*l1+2*l2+2*l3, l1-l3],[l1-l3, 2*l1+2*l2+2*l3]]");
  CHECK(g == example_output_gram());
  CHECK(g.to_string({"l1", "l2", "l3"}) == "[[2*l1+2*l2+2*l3,l1-l3],[l1-l3,2*l1+2*l2+2*l3]]");
  CHECK_THROWS_AS(parse_gram_matrix("[[l1, l2],[l3, l1]"), Error);
}
