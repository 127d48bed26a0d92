#include <doctest.h>

#include "builders.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "twr/error.hpp"
#include "twr/prym.hpp"
#include "twr/towerio.hpp"

#include <random>

using namespace twr;
using namespace twr::testing;

namespace {

bool is_zero(const std::vector<Int>& v) {
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

GramMatrix example_input_gram() {
  return parse_gram_matrix("[[2*l1+2*l2+2*l3, l1+2*l2+3*l3],[l1+2*l2+3*l3, 2*l1+4*l2+6*l3]]");
}

GramMatrix example_output_gram() {
  return parse_gram_matrix("[[2*l1+2*l2+2*l3, l1-l3],[l1-l3, 2*l1+2*l2+2*l3]]");
}

std::map<std::string, Rat> random_lengths(const std::vector<std::string>& variables, Rng& rng) {
  std::map<std::string, Rat> point;
  for (const auto& v : variables) point[v] = Rat(1 + static_cast<int>(rng() % 9), 1 + static_cast<int>(rng() % 3));
  return point;
}

template <class F>
std::string error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("cycle bases") {
  CHECK(h1_basis(path_graph(4)).basis.cols() == 0);
  CHECK(h1_basis(cycle_graph(1)).basis.cols() == 1);
  CHECK(h1_basis(theta_graph()).basis.cols() == 2);
  Graph t = theta_graph();
  IntMatrix b = h1_basis(t).basis;
  IntMatrix d = boundary_matrix(t);
  for (std::size_t j = 0; j < b.cols(); ++j) CHECK(is_zero(d * b.column(j)));
  for (const Int& f : smith_normal_form(b).invariant_factors()) CHECK(f == 1);
  CHECK(error_code([] { h1_basis(disjoint_union(cycle_graph(1), cycle_graph(1))); }) == "DisconnectedGraph");
  CHECK(cycle_basis(disjoint_union(cycle_graph(1), theta_graph())).cols() == 3);
}

TEST_CASE("integration pairing") {
  Graph loop = cycle_graph(1);
  CHECK(integration_pairing(loop, {1}, {1}) == LinearForm("l1"));
  Graph t = theta_graph();
  CHECK(integration_pairing(t, {1, 0, 0}, {0, 1, 0}).is_zero());
  CHECK(integration_pairing(t, {1, -1, 0}, {1, -1, 0}) == LinearForm("l1") + LinearForm("l2"));
  CHECK(integration_pairing(t, {2, 0, 0}, {-1, 0, 0}) == LinearForm("l1", -2));
}

TEST_CASE("Prym lattice of the first worked example") {
  Tower t = load_fixture("ex1");
  PrymLattice p = prym_lattice(t);
  REQUIRE(p.rank() == 1);
  CHECK(p.gram.to_string(t.variables) == "[[2*l2+2*l3]]");
  // The generator is gamma - iota(gamma); its full integration pairing is twice the gram entry.
  std::vector<Int> g = p.basis.column(0);
  CHECK(integration_pairing(t.top, g, g) == LinearForm("l2", 4) + LinearForm("l3", 4));
  CHECK(is_antisymmetric(t.cover(), g));
}

TEST_CASE("Prym lattice of the second worked example") {
  Tower t = load_fixture("ex2");
  PrymLattice p = prym_lattice(t);
  REQUIRE(p.rank() == 2);
  auto w = congruence_search(p.gram, example_input_gram(), 2);
  REQUIRE(w.has_value());
  CHECK(congruence_transform(p.gram, *w) == example_input_gram());
  SplitOutput s = split(t);
  for (const Tower& o : s.towers) {
    auto v = congruence_search(prym_lattice(o).gram, example_output_gram(), 2);
    CHECK(v.has_value());
  }
}

TEST_CASE("Prym lattices of signed covers") {
  // A connected double cover of a circle has a trivial Prym lattice.
  CHECK(prym_lattice(signed_cover(cycle_graph(1), {0})).rank() == 0);
  DoubleCover c = signed_cover(theta_graph(), {0});
  PrymLattice p = prym_lattice(c);
  CHECK(static_cast<long>(p.rank()) == genus(c.top) - genus(c.base));
  CHECK(error_code([] { prym_lattice(signed_cover(theta_graph(), {})); }) == "DisconnectedInput");
  ParseResult r = parse_tower(dilated_top_tower_text());
  REQUIRE(r.ok());
  CHECK(error_code([&] { prym_lattice(*r.tower); }) == "DilatedCover");
}

TEST_CASE("correspondence identities on the worked examples") {
  for (const char* name : {"ex1", "ex2"}) {
    Tower t = load_fixture(name);
    SplitOutput s = split(t);
    PrymLattice p = prym_lattice(t);
    for (int i = 0; i < 2; ++i) {
      CheckResult points = verify_point_identities(t, s, i);
      CHECK_MESSAGE(points.passed, points.detail);
      Correspondence c = correspondence(t, s, i);
      CHECK(c.forward.rows() == t.top.num_edges());
      CHECK(c.forward.cols() == s.towers[i].top.num_edges());
      CHECK(c.backward.rows() == s.towers[i].top.num_edges());
      PrymLattice p1 = prym_lattice(s.towers[i]);
      RestrictedMaps m = restrict_to_pryms(c, p, p1);
      CheckResult four = verify_four_identity(m);
      CHECK_MESSAGE(four.passed, four.detail);
      CHECK(m.st * m.s == Int(4) * IntMatrix::identity(p1.rank()));
      CHECK(m.s * m.st == Int(4) * IntMatrix::identity(p.rank()));
      CheckResult doubling = verify_polarization_doubling(t, s.towers[i], c, p, p1);
      CHECK_MESSAGE(doubling.passed, doubling.detail);
      PsiFactor psi = factor_psi(c, p, p1);
      CHECK(psi.isometry);
      CHECK(is_unimodular(psi.psi));
      CHECK(congruence_transform(p.gram, psi.psi) == p1.gram);
      CHECK(Int(2) * psi.psi == m.s);
    }
  }
}

TEST_CASE("the first example has equal one by one grams") {
  Tower t = load_fixture("ex1");
  PsiReport r = prym_isomorphism_check(t);
  CHECK(r.passed);
  for (const auto& g : r.output_grams) CHECK(g == r.input_gram);
}

TEST_CASE("over a base with a cycle the correspondence is not divisible by two") {
  Tower t = load_fixture("nontree");
  CHECK(is_generic(t).generic);
  SplitOutput s = split(t);
  PrymLattice p = prym_lattice(t);
  for (int i = 0; i < 2; ++i) {
    Correspondence c = correspondence(t, s, i);
    PrymLattice p1 = prym_lattice(s.towers[i]);
    RestrictedMaps m = restrict_to_pryms(c, p, p1);
    CHECK(verify_four_identity(m).passed);
    bool some_odd = false;
    for (std::size_t r = 0; r < m.s.rows(); ++r)
      for (std::size_t col = 0; col < m.s.cols(); ++col) some_odd = some_odd || m.s(r, col) % 2 != 0;
    CHECK(some_odd);
    CHECK(error_code([&] { factor_psi(c, p, p1); }) == "NotDivisible");
  }
  PsiReport r = prym_isomorphism_check(t);
  CHECK_FALSE(r.passed);
  for (const auto& e : r.errors) CHECK(e.rfind("NotDivisible", 0) == 0);
}

TEST_CASE("identity suite on the corpus") {
  for (const auto& name : tetragonal_corpus()) {
    Tower t = load_fixture(name);
    SuiteReport r = identity_suite(t);
    CHECK_MESSAGE(r.passed, name);
    CHECK(r.dimensions_agree);
    for (const auto& o : r.outputs) CHECK(o.point_identities);
    if (name == "nontree") {
      CHECK_FALSE(r.base_is_tree);
      for (const auto& o : r.outputs) CHECK_FALSE(o.psi.has_value());
    }
  }
  SuiteReport c = identity_suite(load_fixture("connectivity"));
  int checked = int(c.outputs[0].prym_checked) + int(c.outputs[1].prym_checked);
  CHECK(checked == 1);
}

TEST_CASE("property: Prym lattices of random good towers") {
  Rng rng(101);
  for (int iter = 0; iter < 20; ++iter) {
    Tower t = random_good_tree_tower(rng, 5);
    PrymLattice p = prym_lattice(t);
    CHECK(static_cast<long>(p.rank()) == genus(t.top) - genus(t.mid));
    CHECK(static_cast<long>(p.rank()) == prym_dimension(t));
    IntMatrix push = pushforward_matrix(t.cover());
    IntMatrix d = boundary_matrix(t.top);
    for (std::size_t j = 0; j < p.rank(); ++j) {
      CHECK(is_zero(push * p.basis.column(j)));
      CHECK(is_zero(d * p.basis.column(j)));
      CHECK(is_antisymmetric(t.cover(), p.basis.column(j)));
    }
    CHECK(p.gram == lattice_gram(t.top, p.basis, Rat(1, 2)));
    if (p.rank() > 0) {
      CHECK(is_positive_definite(specialize(p.gram, random_lengths(t.variables, rng))));
      // Negating a basis vector negates its row and column of the gram.
      IntMatrix flipped = p.basis;
      std::size_t k = rng() % p.rank();
      for (std::size_t r = 0; r < flipped.rows(); ++r) flipped(r, k) = -flipped(r, k);
      GramMatrix g = lattice_gram(t.top, flipped, Rat(1, 2));
      for (std::size_t i = 0; i < p.rank(); ++i)
        for (std::size_t j = 0; j < p.rank(); ++j) {
          LinearForm expected = (i == k) != (j == k) ? -p.gram(i, j) : p.gram(i, j);
          CHECK(g(i, j) == expected);
        }
    }
  }
}

TEST_CASE("property: psi is an isometry over random trees and agrees with the congruence search") {
  Rng rng(202);
  int searched = 0;
  for (int iter = 0; iter < 20; ++iter) {
    Tower t = random_good_tree_tower(rng, 5);
    SuiteReport r = identity_suite(t);
    CHECK(r.passed);
    CHECK(r.base_is_tree);
    PsiReport psi = prym_isomorphism_check(t);
    REQUIRE(psi.passed);
    for (int i = 0; i < 2; ++i) {
      REQUIRE(psi.factors[i].has_value());
      CHECK(psi.factors[i]->isometry);
      CHECK(congruence_transform(psi.input_gram, psi.factors[i]->psi) == psi.output_grams[i]);
      if (psi.input_gram.size() <= 2) {
        CHECK(congruence_search(psi.input_gram, psi.output_grams[i], 2).has_value());
        ++searched;
      }
    }
  }
  CHECK(searched > 0);
}
