#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "twr/error.hpp"
#include "twr/ngonal.hpp"
#include "twr/prym.hpp"
#include "twr/towerio.hpp"

#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace twr;
using namespace twr::testing;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::function<Outcome()> run;
  // Reason the criterion is known not to hold; empty when it is expected to pass.
  std::string known_failure;
};

const std::vector<Tower>& random_trees() {
  static const std::vector<Tower> trees = [] {
    Rng rng(20240915);
    std::vector<Tower> out;
    for (int i = 0; i < 50; ++i) out.push_back(random_good_tree_tower(rng, 6));
    return out;
  }();
  return trees;
}

std::vector<Tower> triality_corpus() {
  std::vector<Tower> corpus = {load_fixture("ex1"), load_fixture("ex2"), load_fixture("connectivity")};
  for (const Tower& t : random_trees()) corpus.push_back(t);
  return corpus;
}

bool iso(const Tower& a, const Tower& b) { return tower_isomorphism(a, b).has_value(); }

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

Outcome first_example() {
  Tower t = load_fixture("ex1");
  SplitOutput s = split(t);
  GramMatrix input = prym_lattice(t).gram;
  bool ok = input.to_string(t.variables) == "[[2*l2+2*l3]]";
  std::vector<std::string> notes = {"input " + input.to_string(t.variables)};
  for (int i = 0; i < 2; ++i) {
    GramMatrix out = prym_lattice(s.towers[i]).gram;
    auto w = congruence_search(input, out, 2);
    ok = ok && w.has_value();
    notes.push_back(s.towers[i].name + " " + out.to_string(t.variables) + (w ? " congruent" : " not congruent"));
  }
  return {ok, join(notes)};
}

Outcome second_example() {
  Tower t = load_fixture("ex2");
  GramMatrix stated_input =
      parse_gram_matrix("[[2*l1+2*l2+2*l3, l1+2*l2+3*l3],[l1+2*l2+3*l3, 2*l1+4*l2+6*l3]]");
  GramMatrix stated_output = parse_gram_matrix("[[2*l1+2*l2+2*l3, l1-l3],[l1-l3, 2*l1+2*l2+2*l3]]");
  GramMatrix input = prym_lattice(t).gram;
  bool ok = congruence_search(input, stated_input, 2).has_value();
  std::vector<std::string> notes = {"input " + input.to_string(t.variables) + (ok ? " matches" : " does not match")};
  SplitOutput s = split(t);
  for (int i = 0; i < 2; ++i) {
    bool c = congruence_search(prym_lattice(s.towers[i]).gram, stated_output, 2).has_value();
    ok = ok && c;
    notes.push_back(s.towers[i].name + (c ? " matches" : " does not match"));
  }
  // The stated witness W acts as W G Wᵀ; a found witness U acts as Uᵀ G U.
  IntMatrix stated_witness{{1, 0}, {1, -1}};
  IntMatrix as_column_form = stated_witness.transpose();
  bool stated_ok = congruence_transform(stated_input, as_column_form) == stated_output;
  auto w = congruence_search(stated_input, stated_output, 2);
  bool found_ok = w.has_value() && congruence_transform(stated_input, *w) == stated_output;
  bool equivalent = false;
  if (found_ok) {
    IntMatrix a = unimodular_inverse(*w) * as_column_form;
    equivalent = congruence_transform(stated_output, a) == stated_output;
    notes.push_back("witness " + format_matrix(*w) + " differs from the stated one by an automorphism " + format_matrix(a));
  }
  ok = ok && stated_ok && found_ok && equivalent;
  return {ok, join(notes)};
}

Outcome triality() {
  std::size_t passed = 0, total = 0;
  std::string failure;
  for (const Tower& t : triality_corpus()) {
    TrialityReport r = triality_check(t);
    ++total;
    if (r.passed) ++passed;
    else if (failure.empty()) failure = r.detail;
  }
  return {passed == total, std::to_string(passed) + "/" + std::to_string(total) + " towers" +
                               (failure.empty() ? "" : ", first failure: " + failure)};
}

Outcome identity_suites() {
  std::size_t passed = 0, total = 0, psi_checked = 0;
  for (const Tower& t : triality_corpus()) {
    SuiteReport r = identity_suite(t);
    bool ok = r.passed;
    for (const auto& o : r.outputs) {
      if (!o.prym_checked) continue;
      ok = ok && o.four_identity && o.doubling;
      if (r.base_is_tree) {
        ok = ok && o.psi.value_or(false);
        ++psi_checked;
      }
    }
    ++total;
    if (ok) ++passed;
  }
  return {passed == total, std::to_string(passed) + "/" + std::to_string(total) + " towers, " +
                               std::to_string(psi_checked) + " unimodular isometries psi"};
}

Outcome block_matrices() {
  struct Case {
    IntMatrix u, a, v;
  };
  std::vector<Case> cases = {
      {{{2, 1, 0, 0}, {0, -1, 1, 0}, {0, 0, -1, 1}, {0, 0, 0, -1}},
       {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}},
       {{2, 1, 0, 0}, {-3, -2, 0, 0}, {-2, -2, 1, 0}, {-1, -1, 0, 1}}},
      {{{2, 1, 0}, {0, -1, 1}, {0, 0, -1}}, {{1, 1, 1}, {1, 1, -1}, {2, -2, 0}}, {{2, 1, 0}, {-3, -2, 0}, {-2, -2, 1}}},
      {{{2, 1}, {0, -1}}, {{1, 1}, {3, -1}}, {{2, 1}, {-3, -2}}},
  };
  std::vector<std::string> notes;
  bool ok = true;
  for (const Case& c : cases) {
    bool identity = c.a * c.u == Int(2) * c.u * c.v;
    bool unimodular = is_unimodular(c.v);
    ok = ok && identity && unimodular;
    notes.push_back(std::to_string(c.u.rows()) + "x" + std::to_string(c.u.rows()) + (identity ? " AU=2UV" : " AU!=2UV") +
                    (unimodular ? ", V unimodular" : ", V not unimodular"));
  }
  return {ok, join(notes)};
}

Outcome non_tree() {
  Tower t = load_fixture("nontree");
  PsiReport report = prym_isomorphism_check(t);
  bool ok = !report.passed;
  for (const auto& e : report.errors) ok = ok && e.rfind("NotDivisible", 0) == 0;

  // gamma - iota(gamma) for the plus lift of the triangle f0 m0 h0.
  PrymLattice p = prym_lattice(t);
  std::vector<Int> element(t.top.num_edges(), 0);
  auto put = [&](const char* name, int sign) { element[*t.top.find_edge(name)] += sign; };
  put("f0_m0+", 1), put("m0_h0+", 1), put("f0_h0+", -1);
  put("f0_m0-", -1), put("m0_h0-", -1), put("f0_h0-", 1);
  bool in_lattice = solve_integral(p.basis, element).has_value();
  ok = ok && in_lattice;
  SplitOutput s = split(t);
  std::vector<std::string> notes;
  for (int i = 0; i < 2; ++i) {
    Correspondence c = correspondence(t, s, i);
    std::vector<Int> image = c.backward * element;
    PrymLattice p1 = prym_lattice(s.towers[i]);
    auto coords = solve_integral(p1.basis, image);
    bool small = true, some_odd = false;
    for (const Int& x : image) small = small && x >= -1 && x <= 1;
    if (coords)
      for (const Int& x : *coords) some_odd = some_odd || x % 2 != 0;
    ok = ok && coords.has_value() && small && some_odd;
    notes.push_back(s.towers[i].name + ": image has edge coefficients in {-1,0,1}" +
                    (some_odd ? " and odd lattice coordinates" : " but even lattice coordinates"));
  }
  return {ok, "psi reports NotDivisible; " + join(notes)};
}

Outcome wd4_facts() {
  const WD4Group& g = wd4();
  SubgroupCensus census = bitransposition_subgroup_census();
  bool ok = g.elements.size() == 192 && census.transitive == 1 && census.transitive_order == 192;
  Rng rng(77031);
  std::size_t agree = 0;
  std::set<std::size_t> orders;
  for (int i = 0; i < 20; ++i) {
    Graph base = random_base(rng, 2 + static_cast<int>(rng() % 4), static_cast<int>(rng() % 3));
    ConnectivityPrediction p = predict_connectivity(random_octuple_quotient(rng, base));
    if (p.agrees()) ++agree;
    orders.insert(p.group_order);
  }
  ok = ok && agree == 20;
  std::ostringstream d;
  d << "|WD4| = " << g.elements.size() << ", " << census.subgroups << " subgroups generated by bitranspositions, "
    << census.transitive << " transitive (order " << census.transitive_order << "), predictions " << agree
    << "/20 (" << orders.size() << " distinct group orders)";
  return {ok, d.str()};
}

Outcome connectivity() {
  SplitOutput s = split(load_fixture("connectivity"));
  int connected = int(is_connected(s.towers[0].top)) + int(is_connected(s.towers[1].top));
  bool example = connected == 1;
  // Conclusion to check: the middle graph is two connected double covers of the base.
  Rng rng(8080);
  std::size_t holds = 0, middle_disconnected = 0;
  std::string counterexample;
  for (int i = 0; i < 20; ++i) {
    Tower t = random_disconnected_top_tower(rng, true);
    Components c = components(t.mid);
    if (c.count > 1) ++middle_disconnected;
    std::vector<long> degrees(c.count, 0);
    for (std::size_t v = 0; v < t.mid.num_vertices(); ++v)
      if (t.f.vmap[v] == 0) degrees[c.vertex_component[v]] += t.f.vdeg[v];
    if (c.count == 2 && degrees[0] == 2 && degrees[1] == 2) {
      ++holds;
    } else if (counterexample.empty()) {
      std::ostringstream d;
      d << "components of degree";
      for (long x : degrees) d << " " << x;
      d << " over a base of genus " << genus(t.base);
      counterexample = d.str();
    }
  }
  std::ostringstream d;
  d << "example: " << connected << " of 2 outputs connected; conclusion holds on " << holds
    << "/20 random towers (middle graph disconnected on " << middle_disconnected << "/20)";
  if (!counterexample.empty()) d << ", first counterexample has " << counterexample;
  return {example && holds == 20, d.str()};
}

Outcome dimensions() {
  std::vector<Tower> corpus;
  for (const auto& name : tetragonal_corpus()) corpus.push_back(load_fixture(name));
  corpus.push_back(load_fixture("disconnected_middle"));
  for (const Tower& t : random_trees()) corpus.push_back(t);
  std::size_t agree = 0;
  for (const Tower& t : corpus) {
    long input = cycle_rank(t.top) - cycle_rank(t.mid);
    SplitOutput s = split(t);
    bool ok = true;
    for (const Tower& o : s.towers) ok = ok && cycle_rank(o.top) - cycle_rank(o.mid) == input;
    if (ok) ++agree;
  }
  return {agree == corpus.size(), std::to_string(agree) + "/" + std::to_string(corpus.size()) + " towers"};
}

Outcome discontinuity() {
  Tower b = load_fixture("bigonal");
  std::size_t e = *b.base.find_edge("e");
  Tower contract_first = donagi_tower(donagi_construct(contract_tower(b, e), 2));
  Tower c = donagi_tower(donagi_construct(b, 2));
  Tower construct_first = contract_tower(c, *c.base.find_edge("e"));
  bool bigonal = !iso(contract_first, construct_first) &&
                 iso(contract_first, load_fixture("bigonal_contract_construct")) &&
                 iso(construct_first, load_fixture("bigonal_construct_contract"));

  Tower r1 = load_fixture("tetragonal_row1"), r2 = load_fixture("tetragonal_row2");
  std::size_t f = *r1.base.find_edge("e");
  bool inputs = iso(contract_tower(r1, f), contract_tower(r2, f));
  std::vector<Tower> outputs;
  for (const Tower* r : {&r1, &r2}) {
    SplitOutput s = split(*r);
    for (const Tower& o : s.towers) outputs.push_back(contract_tower(o, f));
  }
  std::size_t distinct = 0, pairs = 0;
  for (std::size_t i = 0; i < outputs.size(); ++i)
    for (std::size_t j = i + 1; j < outputs.size(); ++j) {
      ++pairs;
      if (!iso(outputs[i], outputs[j])) ++distinct;
    }
  std::ostringstream d;
  d << "bigonal orders " << (bigonal ? "differ" : "agree or mismatch the drawings") << "; contracted inputs "
    << (inputs ? "isomorphic" : "not isomorphic") << "; " << distinct << "/" << pairs
    << " pairs of contracted outputs non-isomorphic";
  return {bigonal && inputs && distinct == pairs, d.str()};
}

Outcome oracles() {
  Rng rng(110011);
  std::size_t kernel_ok = 0, max_rank = 0;
  for (int i = 0; i < 10; ++i) {
    Tower t = small_connected_tower(rng, 10);
    KernelOracleResult r = kernel_oracle(t, 1);
    if (r.agrees) ++kernel_ok;
    max_rank = std::max(max_rank, r.rank);
  }
  std::size_t parity_ok = 0;
  for (int i = 0; i < 10; ++i) {
    Graph base = random_base(rng, 2 + static_cast<int>(rng() % 2), static_cast<int>(rng() % 2));
    Tower t = random_octuple_quotient(rng, base);
    DonagiOutput o = donagi_construct(t, 4);
    std::uint64_t salt = rng();
    PlusLiftChoice relabel = [salt](const Point& p) { return static_cast<int>((p.index * 2654435761u ^ salt) >> 7 & 1); };
    if (parity_mismatches(t, o) == 0 && parity_mismatches(t, o, relabel) == 0) ++parity_ok;
  }
  std::ostringstream d;
  d << "kernel " << kernel_ok << "/10 (ranks up to " << max_rank << "), parity " << parity_ok << "/10";
  return {kernel_ok == 10 && parity_ok == 10, d.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "first worked example", first_example, ""},
      {2, "second worked example", second_example, ""},
      {3, "triality", triality, ""},
      {4, "identity suite", identity_suites, ""},
      {5, "block factorization matrices", block_matrices, ""},
      {6, "non-tree base", non_tree, ""},
      {7, "WD4 and connectivity predictions", wd4_facts, ""},
      {8, "connectivity structure", connectivity,
       "over bases with cycles a disconnected top with a connected output can have a middle graph with "
       "components of degree 3 and 1 (see fixtures/disconnected_middle.twr)"},
      {9, "dimensions", dimensions, ""},
      {10, "discontinuity under contraction", discontinuity, ""},
      {11, "oracle equivalence", oracles, ""},
  };
  int unexpected = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << c.id << " (" << c.title << "): " << (o.passed ? "PASS" : "FAIL") << ": " << o.detail;
    if (!c.known_failure.empty()) {
      if (o.passed) {
        std::cout << " [expected to fail, but passed]";
        ++unexpected;
      } else {
        std::cout << " [known failure: " << c.known_failure << "]";
      }
    } else if (!o.passed) {
      ++unexpected;
    }
    std::cout << "\n";
  }
  return unexpected == 0 ? 0 : 1;
}
