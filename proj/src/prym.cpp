#include "twr/prym.hpp"

#include "twr/error.hpp"

#include <sstream>

namespace twr {

namespace {

using RatVector = std::map<Point, Rat>;

void add_to(RatVector& v, const Point& p, const Rat& c) {
  Rat& slot = v[p];
  slot += c;
  if (slot == 0) v.erase(p);
}

bool is_tree(const Graph& g) { return is_connected(g) && cycle_rank(g) == 0; }

std::string format_vector(const std::vector<Int>& v) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  out << "]";
  return out.str();
}

// Chain with coefficient c_e on edge e written as a sum of signed edge names.
std::string format_chain(const Graph& g, const std::vector<Int>& v) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t e = 0; e < v.size(); ++e) {
    if (v[e] == 0) continue;
    Int c = v[e];
    if (c < 0) {
      out << (first ? "-" : " - ");
      c = -c;
    } else if (!first) {
      out << " + ";
    }
    if (c != 1) out << c << "*";
    out << g.edge_names[e];
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

bool boundary_free(const IntMatrix& boundary, const IntMatrix& chains) {
  return (boundary * chains).is_zero();
}

}  // namespace

IntMatrix boundary_matrix(const Graph& g) {
  IntMatrix m(g.num_vertices(), g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    m(g.root[2 * e + 1], e) += 1;
    m(g.root[2 * e], e) -= 1;
  }
  return m;
}

IntMatrix cycle_basis(const Graph& g) {
  const std::size_t nv = g.num_vertices(), ne = g.num_edges();
  auto tangent = g.tangent_spaces();
  std::vector<bool> seen(nv, false), tree_edge(ne, false);
  // path[v]: chain from the root of v's component to v along the tree.
  std::vector<std::vector<Int>> path(nv, std::vector<Int>(ne));
  for (std::size_t r = 0; r < nv; ++r) {
    if (seen[r]) continue;
    seen[r] = true;
    std::vector<std::size_t> queue{r};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::size_t v = queue[qi];
      for (std::size_t h : tangent[v]) {
        std::size_t w = g.root[Graph::mate(h)];
        if (seen[w]) continue;
        seen[w] = true;
        std::size_t e = Graph::edge_of(h);
        tree_edge[e] = true;
        path[w] = path[v];
        path[w][e] += (h % 2 == 0) ? 1 : -1;
        queue.push_back(w);
      }
    }
  }
  std::vector<std::vector<Int>> columns;
  for (std::size_t e = 0; e < ne; ++e) {
    if (tree_edge[e]) continue;
    std::vector<Int> c(ne);
    const auto& ps = path[g.root[2 * e]];
    const auto& pe = path[g.root[2 * e + 1]];
    for (std::size_t i = 0; i < ne; ++i) c[i] = ps[i] - pe[i];
    c[e] += 1;
    columns.push_back(std::move(c));
  }
  IntMatrix basis(ne, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) basis.set_column(j, columns[j]);
  return basis;
}

CycleLattice h1_basis(const Graph& g) {
  if (!is_connected(g)) throw Error("DisconnectedGraph", "graph '" + g.name + "' is not connected");
  return {g, cycle_basis(g)};
}

LinearForm integration_pairing(const Graph& g, const std::vector<Int>& u, const std::vector<Int>& v) {
  if (u.size() != g.num_edges() || v.size() != g.num_edges())
    throw Error("DimensionMismatch", "chain length differs from the number of edges");
  LinearForm total;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    Int c = u[e] * v[e];
    if (c != 0) total += g.length[e] * Rat(c);
  }
  return total;
}

GramMatrix lattice_gram(const Graph& g, const IntMatrix& basis, const Rat& scale) {
  GramMatrix gram(basis.cols());
  std::vector<std::vector<Int>> cols;
  for (std::size_t j = 0; j < basis.cols(); ++j) cols.push_back(basis.column(j));
  for (std::size_t i = 0; i < cols.size(); ++i)
    for (std::size_t j = i; j < cols.size(); ++j) {
      LinearForm entry = integration_pairing(g, cols[i], cols[j]) * scale;
      gram(i, j) = entry;
      gram(j, i) = entry;
    }
  return gram;
}

IntMatrix pushforward_matrix(const DoubleCover& c) {
  IntMatrix m(c.base.num_edges(), c.top.num_edges());
  for (std::size_t e = 0; e < c.top.num_edges(); ++e) m(c.pi.edge_image(e), e) += c.pi.flips(e) ? -1 : 1;
  return m;
}

bool is_antisymmetric(const DoubleCover& c, const std::vector<Int>& v) {
  for (std::size_t e = 0; e < c.top.num_edges(); ++e) {
    std::size_t h = c.iota_h[2 * e];
    Int image = v[Graph::edge_of(h)];
    if (h % 2 == 1) image = -image;
    if (image != -v[e]) return false;
  }
  return true;
}

PrymLattice prym_lattice(const DoubleCover& c) {
  if (!c.is_free()) throw Error("DilatedCover", "the double cover has dilated points");
  if (!is_connected(c.top) || !is_connected(c.base))
    throw Error("DisconnectedInput", "the double cover must have connected source and target");
  if (!c.top.is_metric()) throw Error("InvalidArgument", "the double cover is not metric");
  IntMatrix z = h1_basis(c.top).basis;
  IntMatrix basis = z * integer_kernel(pushforward_matrix(c) * z);
  for (std::size_t j = 0; j < basis.cols(); ++j)
    if (!is_antisymmetric(c, basis.column(j)))
      throw Error("ValidationFailure", "Prym basis vector is not antisymmetric");
  return {basis, lattice_gram(c.top, basis, Rat(1, 2))};
}

PrymLattice prym_lattice(const Tower& t) { return prym_lattice(t.cover()); }

Correspondence correspondence(const Tower& t, const SplitOutput& outputs, int i) {
  const Tower& out = outputs.towers[i];
  const DonagiOutput& d = outputs.donagi;
  const Morphism g = t.top_to_base();
  const Morphism p = out.top_to_base();
  Correspondence c;
  c.output = i;
  c.forward = IntMatrix(t.top.num_edges(), out.top.num_edges());
  c.backward = IntMatrix(out.top.num_edges(), t.top.num_edges());
  for (std::size_t z = 0; z < out.top.num_edges(); ++z) {
    Point source = Point::half_edge(outputs.half_edge_source[i][2 * z]);
    const DonagiPoint& dp = d.point(source);
    const auto& support = d.support(dp.base_point);
    for (std::size_t j = 0; j < support.size(); ++j) {
      long coeff = dp.coeffs[j];
      if (coeff == 0) continue;
      std::size_t h = support[j].index;
      std::size_t x = Graph::edge_of(h);
      int sign = (h % 2 == 0) ? 1 : -1;
      c.forward(x, z) += coeff * sign;
      Int numerator = Int(p.edeg[z]) * coeff;
      if (numerator % g.edeg[x] != 0)
        throw Error("ValidationFailure", "adjoint weight at edge '" + out.top.edge_names[z] + "' is not integral");
      c.backward(z, x) += Int(numerator / g.edeg[x]) * sign;
    }
  }
  if (!boundary_free(boundary_matrix(t.top), c.forward * cycle_basis(out.top)))
    throw Error("ValidationFailure", "S does not send cycles of '" + out.top.name + "' to cycles");
  if (!boundary_free(boundary_matrix(out.top), c.backward * cycle_basis(t.top)))
    throw Error("ValidationFailure", "the adjoint of S does not send cycles to cycles");
  return c;
}

CheckResult verify_point_identities(const Tower& t, const SplitOutput& outputs, int i) {
  const Tower& out = outputs.towers[i];
  const DonagiOutput& d = outputs.donagi;
  const Morphism g = t.top_to_base();
  const Morphism p = out.top_to_base();

  auto out_points = [&] {
    std::vector<Point> pts;
    for (std::size_t v = 0; v < out.top.num_vertices(); ++v) pts.push_back(Point::vertex(v));
    for (std::size_t h = 0; h < out.top.num_half_edges(); ++h) pts.push_back(Point::half_edge(h));
    return pts;
  }();
  auto in_points = [&] {
    std::vector<Point> pts;
    for (std::size_t v = 0; v < t.top.num_vertices(); ++v) pts.push_back(Point::vertex(v));
    for (std::size_t h = 0; h < t.top.num_half_edges(); ++h) pts.push_back(Point::half_edge(h));
    return pts;
  }();

  // Divisor of each output point on the input top, and the transpose incidence.
  std::map<Point, std::vector<std::pair<Point, long>>> divisor, incident;
  for (const Point& z : out_points) {
    std::size_t s = z.is_vertex() ? outputs.vertex_source[i][z.index] : outputs.half_edge_source[i][z.index];
    Point source = z.is_vertex() ? Point::vertex(s) : Point::half_edge(s);
    const DonagiPoint& dp = d.point(source);
    const auto& support = d.support(dp.base_point);
    for (std::size_t j = 0; j < support.size(); ++j) {
      if (dp.coeffs[j] == 0) continue;
      divisor[z].push_back({support[j], dp.coeffs[j]});
      incident[support[j]].push_back({z, dp.coeffs[j]});
    }
  }
  auto apply_s = [&](const RatVector& v) {
    RatVector r;
    for (const auto& [z, c] : v)
      for (const auto& [x, k] : divisor[z]) add_to(r, x, c * k);
    return r;
  };
  auto apply_st = [&](const RatVector& v) {
    RatVector r;
    for (const auto& [x, c] : v)
      for (const auto& [z, k] : incident[x]) add_to(r, z, c * Rat(p.deg(z) * k, g.deg(x)));
    return r;
  };
  auto iota = [](const Tower& tw, const Point& x) {
    return x.is_vertex() ? Point::vertex(tw.iota_v[x.index]) : Point::half_edge(tw.iota_h[x.index]);
  };
  auto expected = [&](const Tower& tw, const Graph& top, const Morphism& m, const Point& x) {
    RatVector r;
    for (const auto& [y, k] : pullback(top, m, m.image(x))) add_to(r, y, Rat(2 * k));
    add_to(r, x, Rat(2));
    add_to(r, iota(tw, x), Rat(-2));
    return r;
  };

  for (const Point& z : out_points) {
    RatVector unit{{z, Rat(1)}};
    if (apply_st(apply_s(unit)) != expected(out, out.top, p, z))
      return {false, "composite at " + point_name(out.top, z) + " of " + out.top.name + " differs"};
  }
  for (const Point& x : in_points) {
    RatVector unit{{x, Rat(1)}};
    if (apply_s(apply_st(unit)) != expected(t, t.top, g, x))
      return {false, "composite at " + point_name(t.top, x) + " of " + t.top.name + " differs"};
  }
  return {true, ""};
}

RestrictedMaps restrict_to_pryms(const Correspondence& c, const PrymLattice& p, const PrymLattice& p1) {
  RestrictedMaps r{IntMatrix(p.rank(), p1.rank()), IntMatrix(p1.rank(), p.rank())};
  IntMatrix images = c.forward * p1.basis;
  for (std::size_t j = 0; j < images.cols(); ++j) {
    auto x = solve_integral(p.basis, images.column(j));
    if (!x) throw Error("ValidationFailure", "S does not map the output Prym lattice into the input one");
    r.s.set_column(j, *x);
  }
  IntMatrix back = c.backward * p.basis;
  for (std::size_t j = 0; j < back.cols(); ++j) {
    auto x = solve_integral(p1.basis, back.column(j));
    if (!x) throw Error("ValidationFailure", "the adjoint does not map the input Prym lattice into the output one");
    r.st.set_column(j, *x);
  }
  return r;
}

CheckResult verify_four_identity(const RestrictedMaps& m) {
  if (m.st * m.s != Int(4) * IntMatrix::identity(m.s.cols())) return {false, "adjoint after S is not 4 times the identity"};
  if (m.s * m.st != Int(4) * IntMatrix::identity(m.s.rows())) return {false, "S after its adjoint is not 4 times the identity"};
  return {true, ""};
}

CheckResult verify_polarization_doubling(const Tower& t, const Tower& out, const Correspondence& c,
                                         const PrymLattice& p, const PrymLattice& p1) {
  auto scaled = [](GramMatrix g) {
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) g(i, j) *= Rat(4);
    return g;
  };
  if (lattice_gram(t.top, c.forward * p1.basis, Rat(1, 2)) != scaled(p1.gram))
    return {false, "S does not double the polarization of " + out.top.name};
  if (lattice_gram(out.top, c.backward * p.basis, Rat(1, 2)) != scaled(p.gram))
    return {false, "the adjoint does not double the polarization of " + t.top.name};
  return {true, ""};
}

PsiFactor factor_psi(const Correspondence& c, const PrymLattice& p, const PrymLattice& p1) {
  RestrictedMaps m = restrict_to_pryms(c, p, p1);
  for (std::size_t j = 0; j < m.s.cols(); ++j)
    for (std::size_t i = 0; i < m.s.rows(); ++i)
      if (m.s(i, j) % 2 != 0) {
        std::ostringstream msg;
        msg << "element " << format_vector(p1.basis.column(j)) << " of the output Prym lattice maps to "
            << format_vector(m.s.column(j)) << " in Prym lattice coordinates, which is not divisible by 2";
        throw Error("NotDivisible", msg.str());
      }
  for (std::size_t j = 0; j < m.st.cols(); ++j)
    for (std::size_t i = 0; i < m.st.rows(); ++i)
      if (m.st(i, j) % 2 != 0) {
        std::ostringstream msg;
        msg << "element " << format_vector(p.basis.column(j)) << " of the input Prym lattice maps to "
            << format_vector(m.st.column(j)) << " under the adjoint, which is not divisible by 2";
        throw Error("NotDivisible", msg.str());
      }
  PsiFactor f;
  f.psi = IntMatrix(m.s.rows(), m.s.cols());
  for (std::size_t i = 0; i < m.s.rows(); ++i)
    for (std::size_t j = 0; j < m.s.cols(); ++j) f.psi(i, j) = m.s(i, j) / 2;
  f.psi_t = IntMatrix(m.st.rows(), m.st.cols());
  for (std::size_t i = 0; i < m.st.rows(); ++i)
    for (std::size_t j = 0; j < m.st.cols(); ++j) f.psi_t(i, j) = m.st(i, j) / 2;
  if (f.psi.rows() != f.psi.cols() || !is_unimodular(f.psi))
    throw Error("NotUnimodular", "S/2 is not unimodular on the Prym lattices");
  f.isometry = congruence_transform(p.gram, f.psi) == p1.gram;
  return f;
}


PsiReport prym_isomorphism_check(const Tower& t) {
  PsiReport report;
  SplitOutput outputs = split(t);
  PrymLattice p = prym_lattice(t);
  report.input_gram = p.gram;
  bool all = true;
  for (int i = 0; i < 2; ++i) {
    try {
      PrymLattice p1 = prym_lattice(outputs.towers[i]);
      report.output_grams[i] = p1.gram;
      Correspondence c = correspondence(t, outputs, i);
      try {
        report.factors[i] = factor_psi(c, p, p1);
        if (!report.factors[i]->isometry) {
          report.errors[i] = "ValidationFailure: S/2 is not an isometry of the Gram matrices";
          all = false;
        }
      } catch (const Error& e) {
        std::string message = e.what();
        if (e.code() == "NotDivisible") {
          // Spell the offending element in edge names of the output top.
          RestrictedMaps m = restrict_to_pryms(c, p, p1);
          for (std::size_t j = 0; j < m.s.cols(); ++j) {
            bool odd = false;
            for (std::size_t r = 0; r < m.s.rows(); ++r) odd = odd || m.s(r, j) % 2 != 0;
            if (!odd) continue;
            message = "element " + format_chain(outputs.towers[i].top, p1.basis.column(j)) +
                      " of the Prym lattice of " + outputs.towers[i].name + " maps to " +
                      format_chain(t.top, c.forward * p1.basis.column(j)) +
                      ", whose Prym lattice coordinates " + format_vector(m.s.column(j)) + " are not all even";
            break;
          }
        }
        report.errors[i] = e.code() + ": " + message;
        all = false;
      }
    } catch (const Error& e) {
      report.errors[i] = e.code() + ": " + e.what();
      all = false;
    }
  }
  report.passed = all;
  return report;
}

long prym_dimension(const Tower& t) { return cycle_rank(t.top) - cycle_rank(t.mid); }

SuiteReport identity_suite(const Tower& t) {
  SuiteReport r;
  SplitOutput outputs = split(t);
  r.input_dimension = prym_dimension(t);
  r.base_is_tree = is_tree(t.base);
  r.dimensions_agree = true;
  bool all = true;
  std::optional<PrymLattice> p;
  if (is_connected(t.top)) p = prym_lattice(t);
  for (int i = 0; i < 2; ++i) {
    const Tower& out = outputs.towers[i];
    auto& o = r.outputs[i];
    o.dimension = prym_dimension(out);
    if (o.dimension != r.input_dimension) r.dimensions_agree = false;
    CheckResult points = verify_point_identities(t, outputs, i);
    o.point_identities = points.passed;
    if (!points.passed) o.detail = points.detail;
    if (!p || !is_connected(out.top)) {
      all = all && points.passed;
      if (o.detail.empty())
        o.detail = std::string("lattice checks skipped: ") + (p ? "output" : "input") + " top disconnected";
      continue;
    }
    o.prym_checked = true;
    try {
      PrymLattice p1 = prym_lattice(out);
      Correspondence c = correspondence(t, outputs, i);
      CheckResult four = verify_four_identity(restrict_to_pryms(c, *p, p1));
      o.four_identity = four.passed;
      CheckResult doubling = verify_polarization_doubling(t, out, c, *p, p1);
      o.doubling = doubling.passed;
      for (const auto* check : {&four, &doubling})
        if (!check->passed && o.detail.empty()) o.detail = check->detail;
      try {
        o.psi = factor_psi(c, *p, p1).isometry;
      } catch (const Error& e) {
        o.psi_error = e.code() + ": " + e.what();
      }
    } catch (const Error& e) {
      o.detail = e.code() + ": " + e.what();
    }
    bool ok = o.point_identities && o.four_identity && o.doubling;
    if (r.base_is_tree) ok = ok && o.psi.value_or(false);
    all = all && ok;
  }
  r.passed = all && r.dimensions_agree;
  return r;
}

}  // namespace twr
