#include "twr/ngonal.hpp"

#include "twr/error.hpp"
#include "twr/towerio.hpp"

#include <algorithm>

namespace twr {

namespace {

long binomial(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<FiberGroup> fiber_groups(const Tower& t, const Point& x) {
  std::vector<FiberGroup> groups;
  for (const Point& y : fiber(t.mid, t.f, x)) {
    FiberGroup g;
    g.mid = y;
    g.degree = t.f.deg(y);
    g.lifts = fiber(t.top, t.pi, y);
    groups.push_back(std::move(g));
  }
  return groups;
}

// All admissible coefficient vectors over one base point, in increasing
// lexicographic order.
std::vector<std::vector<long>> enumerate_coefficients(const std::vector<FiberGroup>& groups) {
  std::vector<std::vector<long>> out{{}};
  for (const FiberGroup& g : groups) {
    std::vector<std::vector<long>> next;
    for (const auto& prefix : out) {
      if (g.lifts.size() == 1) {
        auto v = prefix;
        v.push_back(g.degree);
        next.push_back(std::move(v));
      } else {
        for (long a = 0; a <= g.degree; ++a) {
          auto v = prefix;
          v.push_back(a);
          v.push_back(g.degree - a);
          next.push_back(std::move(v));
        }
      }
    }
    out = std::move(next);
  }
  return out;
}

long local_degree(const std::vector<FiberGroup>& groups, const std::vector<long>& coeffs) {
  long d = 1;
  std::size_t pos = 0;
  for (const FiberGroup& g : groups) {
    if (g.lifts.size() == 1) {
      d *= 1L << g.degree;
      pos += 1;
    } else {
      d *= binomial(g.degree, coeffs[pos]);
      pos += 2;
    }
  }
  return d;
}

std::string point_code(const std::vector<FiberGroup>& groups, const std::vector<long>& coeffs) {
  std::string code;
  std::size_t pos = 0;
  for (const FiberGroup& g : groups) {
    if (g.lifts.size() == 1) {
      code += 'd';
      pos += 1;
      continue;
    }
    long a = coeffs[pos];
    if (g.degree == 1) code += a == 1 ? 'p' : 'm';
    else code += std::to_string(a);
    pos += 2;
  }
  return code;
}

std::vector<Point> flatten(const std::vector<FiberGroup>& groups) {
  std::vector<Point> out;
  for (const auto& g : groups) out.insert(out.end(), g.lifts.begin(), g.lifts.end());
  return out;
}

// Coefficients on the iota-image of a fiber: swap the two lifts of each free point.
std::vector<long> swap_lifts(const std::vector<FiberGroup>& groups, const std::vector<long>& coeffs) {
  std::vector<long> out = coeffs;
  std::size_t pos = 0;
  for (const FiberGroup& g : groups) {
    if (g.lifts.size() == 2) std::swap(out[pos], out[pos + 1]);
    pos += g.lifts.size();
  }
  return out;
}

void require_free_top(const Tower& t) {
  for (long d : t.pi.vdeg)
    if (d != 1) throw Error("UnsupportedDilatedTop", "the double cover is dilated; parity classes are undefined");
  for (long d : t.pi.edeg)
    if (d != 1) throw Error("UnsupportedDilatedTop", "the double cover is dilated; parity classes are undefined");
}

}  // namespace

std::optional<Point> DonagiOutput::find(const Point& x, const std::vector<long>& coeffs) const {
  auto it = index.find({x, coeffs});
  if (it == index.end()) return std::nullopt;
  return x.is_vertex() ? Point::vertex(it->second) : Point::half_edge(it->second);
}

DonagiOutput donagi_construct(const Tower& t, long n) {
  if (n != t.n())
    throw Error("InvalidTower", "requested n = " + std::to_string(n) + " but the bottom map has degree " + std::to_string(t.n()));
  if (n > 16) throw Error("InvalidTower", "degree too large for the construction");
  DonagiOutput o;
  o.n = n;
  o.variables = t.variables;
  o.base = t.base;
  o.graph.name = "Pt";
  const Graph& K = t.base;
  for (std::size_t v = 0; v < K.num_vertices(); ++v) {
    o.vertex_groups.push_back(fiber_groups(t, Point::vertex(v)));
    o.vertex_support.push_back(flatten(o.vertex_groups.back()));
  }
  for (std::size_t h = 0; h < K.num_half_edges(); ++h) {
    o.half_edge_groups.push_back(fiber_groups(t, Point::half_edge(h)));
    o.half_edge_support.push_back(flatten(o.half_edge_groups.back()));
  }

  for (std::size_t v = 0; v < K.num_vertices(); ++v) {
    const auto& groups = o.vertex_groups[v];
    for (auto& coeffs : enumerate_coefficients(groups)) {
      std::size_t id = o.graph.add_vertex(K.vertex_names[v] + "." + point_code(groups, coeffs));
      long d = local_degree(groups, coeffs);
      o.index[{Point::vertex(v), coeffs}] = id;
      o.to_base.vmap.push_back(v);
      o.to_base.vdeg.push_back(d);
      o.vertex_points.push_back({Point::vertex(v), std::move(coeffs), d});
    }
  }

  // Coefficients of the root vertex of a half-edge point over k.
  auto root_coeffs = [&](std::size_t k, const std::vector<long>& coeffs) {
    const auto& sup = o.half_edge_support[k];
    const auto& vsup = o.vertex_support[K.root[k]];
    std::vector<long> out(vsup.size(), 0);
    for (std::size_t i = 0; i < sup.size(); ++i) {
      std::size_t r = t.top.root[sup[i].index];
      auto it = std::find(vsup.begin(), vsup.end(), Point::vertex(r));
      if (it == vsup.end()) throw Error("InvalidTower", "root of a top half-edge lies outside the expected fiber");
      out[it - vsup.begin()] += coeffs[i];
    }
    return out;
  };
  auto mate_coeffs = [&](std::size_t k, const std::vector<long>& coeffs) {
    const auto& sup = o.half_edge_support[k];
    const auto& msup = o.half_edge_support[Graph::mate(k)];
    std::vector<long> out(msup.size(), 0);
    for (std::size_t i = 0; i < sup.size(); ++i) {
      auto it = std::find(msup.begin(), msup.end(), Point::half_edge(Graph::mate(sup[i].index)));
      if (it == msup.end()) throw Error("InvalidTower", "mate of a top half-edge lies outside the expected fiber");
      out[it - msup.begin()] = coeffs[i];
    }
    return out;
  };

  const bool metric = t.is_metric();
  for (std::size_t e = 0; e < K.num_edges(); ++e) {
    const std::size_t k = 2 * e;
    const auto& groups = o.half_edge_groups[k];
    const auto& mate_groups = o.half_edge_groups[k + 1];
    for (auto& coeffs : enumerate_coefficients(groups)) {
      auto mc = mate_coeffs(k, coeffs);
      auto from = o.index.find({Point::vertex(K.root[k]), root_coeffs(k, coeffs)});
      auto to = o.index.find({Point::vertex(K.root[k + 1]), root_coeffs(k + 1, mc)});
      if (from == o.index.end() || to == o.index.end())
        throw Error("InvalidTower", "endpoint of an edge divisor is not a fiber divisor; the maps are not harmonic");
      long d = local_degree(groups, coeffs);
      LinearForm len = metric ? K.length[e] / Rat(d) : LinearForm();
      std::size_t id = o.graph.add_edge(K.edge_names[e] + "." + point_code(groups, coeffs), from->second, to->second, len);
      o.index[{Point::half_edge(k), coeffs}] = 2 * id;
      o.index[{Point::half_edge(k + 1), mc}] = 2 * id + 1;
      o.to_base.hmap.push_back(k);
      o.to_base.hmap.push_back(k + 1);
      o.to_base.edeg.push_back(d);
      o.half_edge_points.push_back({Point::half_edge(k), coeffs, d});
      if (local_degree(mate_groups, mc) != d) throw Error("InvalidTower", "local degrees differ at the two ends of an edge");
      o.half_edge_points.push_back({Point::half_edge(k + 1), std::move(mc), d});
    }
  }
  if (metric) o.graph.length.resize(o.graph.num_edges());

  o.iota_v.resize(o.graph.num_vertices());
  for (std::size_t v = 0; v < o.graph.num_vertices(); ++v) {
    const auto& p = o.vertex_points[v];
    o.iota_v[v] = o.index.at({p.base_point, swap_lifts(o.groups(p.base_point), p.coeffs)});
  }
  o.iota_h.resize(o.graph.num_half_edges());
  for (std::size_t h = 0; h < o.graph.num_half_edges(); ++h) {
    const auto& p = o.half_edge_points[h];
    o.iota_h[h] = o.index.at({p.base_point, swap_lifts(o.groups(p.base_point), p.coeffs)});
  }

  if (auto v = validate(o.graph, o.base, o.to_base))
    throw Error("InvalidTower", "construction is not harmonic: " + v->message);
  long deg = degree(o.graph, o.base, o.to_base);
  if (deg != (1L << n)) throw Error("InvalidTower", "construction has degree " + std::to_string(deg));
  for (std::size_t h = 0; h < o.graph.num_half_edges(); ++h)
    if (o.graph.root[o.iota_h[h]] != o.iota_v[o.graph.root[h]] || o.iota_h[Graph::mate(h)] != Graph::mate(o.iota_h[h]))
      throw Error("InvalidTower", "induced involution does not commute with the graph structure");
  return o;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> output_involution(const DonagiOutput& o) {
  return {o.iota_v, o.iota_h};
}

Tower donagi_tower(const DonagiOutput& o) {
  Tower t = quotient_by_involution("P", o.graph, o.base, o.to_base, o.iota_v, o.iota_h);
  t.mid.name = "P";
  t.variables = o.variables;
  return t;
}

ParityClasses parity_classes(const Tower& t, const DonagiOutput& o, const PlusLiftChoice& plus_lift) {
  require_free_top(t);
  auto parity = [&](const DonagiPoint& p) {
    long sum = 0;
    std::size_t pos = 0;
    for (const FiberGroup& g : o.groups(p.base_point)) {
      int which = plus_lift ? plus_lift(g.mid) : 0;
      sum += p.coeffs[pos + which];
      pos += 2;
    }
    return static_cast<int>(sum % 2);
  };
  ParityClasses c;
  for (const auto& p : o.vertex_points) c.vertex.push_back(parity(p));
  for (const auto& p : o.half_edge_points) c.half_edge.push_back(parity(p));
  return c;
}

DoubleCover orientation_cover(const Tower& t, const DonagiOutput& o) {
  require_free_top(t);
  ParityClasses cls = parity_classes(t, o);
  const Graph& K = t.base;
  DoubleCover c;
  c.base = K;
  c.top.name = K.name + "o";
  static const char* kClassName[2] = {"even", "odd"};
  for (std::size_t v = 0; v < K.num_vertices(); ++v)
    for (int p = 0; p < 2; ++p) {
      c.top.add_vertex(K.vertex_names[v] + "." + kClassName[p]);
      c.pi.vmap.push_back(v);
    }
  // For half-edge k and class p: the class of the root and of the mate.
  const std::size_t H = K.num_half_edges();
  std::vector<std::array<int, 2>> root_class(H, {-1, -1}), mate_class(H, {-1, -1});
  for (std::size_t h = 0; h < o.graph.num_half_edges(); ++h) {
    std::size_t k = o.to_base.hmap[h];
    int p = cls.half_edge[h];
    int rc = cls.vertex[o.graph.root[h]];
    int mc = cls.half_edge[Graph::mate(h)];
    if (root_class[k][p] == -1) {
      root_class[k][p] = rc;
      mate_class[k][p] = mc;
    } else if (root_class[k][p] != rc || mate_class[k][p] != mc) {
      throw Error("InvalidTower", "parity classes are not compatible with the graph structure over " +
                                      point_name(K, Point::half_edge(k)));
    }
  }
  for (std::size_t k = 0; k < H; ++k)
    for (int p = 0; p < 2; ++p)
      if (root_class[k][p] == -1) throw Error("InvalidTower", "a parity class is empty over " + point_name(K, Point::half_edge(k)));
  for (std::size_t e = 0; e < K.num_edges(); ++e)
    for (int p = 0; p < 2; ++p) {
      std::size_t k = 2 * e;
      std::size_t from = 2 * K.root[k] + root_class[k][p];
      int q = mate_class[k][p];
      std::size_t to = 2 * K.root[k + 1] + root_class[k + 1][q];
      c.top.add_edge(K.edge_names[e] + "." + kClassName[p], from, to, K.is_metric() ? K.length[e] : LinearForm());
      c.pi.hmap.push_back(k);
      c.pi.hmap.push_back(k + 1);
    }
  if (K.is_metric()) c.top.length.resize(c.top.num_edges());
  c.pi.vdeg.assign(c.top.num_vertices(), 1);
  c.pi.edeg.assign(c.top.num_edges(), 1);
  if (auto v = validate(c.top, c.base, c.pi)) throw Error("InvalidTower", "orientation cover is not a cover: " + v->message);
  derive_involution(c.top, c.base, c.pi, c.iota_v, c.iota_h);
  return c;
}

DoubleCover orientation_cover(const Tower& t) {
  require_free_top(t);
  return orientation_cover(t, donagi_construct(t, t.n()));
}

bool is_orientable(const Tower& t) { return components(orientation_cover(t).top).count == 2; }

SplitOutput split(const Tower& t) {
  GenericReport gen = is_generic(t);
  if (!gen.generic) throw Error("NotGeneric", gen.reason);
  SplitOutput out;
  out.donagi = donagi_construct(t, 4);
  const DonagiOutput& o = out.donagi;
  DoubleCover cover = orientation_cover(t, o);
  Components comps = components(cover.top);
  if (comps.count != 2) throw Error("NotOrientable", "the orientation double cover is connected");
  ParityClasses cls = parity_classes(t, o);
  auto half_of_vertex = [&](std::size_t v) {
    return comps.vertex_component[2 * o.vertex_points[v].base_point.index + cls.vertex[v]];
  };
  const std::size_t first = half_of_vertex(0);

  std::array<Tower, 2> towers;
  std::array<std::string, 2> text;
  for (int half = 0; half < 2; ++half) {
    std::vector<std::size_t> verts;
    for (std::size_t v = 0; v < o.graph.num_vertices(); ++v)
      if ((half_of_vertex(v) == first) == (half == 0)) verts.push_back(v);
    Subgraph sub = induced_subgraph(o.graph, verts);
    sub.graph.name = "Ct";
    std::vector<std::size_t> new_v(o.graph.num_vertices(), 0), new_h(o.graph.num_half_edges(), 0);
    for (std::size_t i = 0; i < sub.vertices.size(); ++i) new_v[sub.vertices[i]] = i;
    for (std::size_t j = 0; j < sub.edges.size(); ++j) {
      new_h[2 * sub.edges[j]] = 2 * j;
      new_h[2 * sub.edges[j] + 1] = 2 * j + 1;
    }
    Morphism m;
    std::vector<std::size_t> iv, ih;
    for (std::size_t v : sub.vertices) {
      m.vmap.push_back(o.to_base.vmap[v]);
      m.vdeg.push_back(o.to_base.vdeg[v]);
      iv.push_back(new_v[o.iota_v[v]]);
    }
    std::vector<std::size_t> hsrc;
    for (std::size_t e : sub.edges) {
      for (std::size_t h : {2 * e, 2 * e + 1}) {
        m.hmap.push_back(o.to_base.hmap[h]);
        ih.push_back(new_h[o.iota_h[h]]);
        hsrc.push_back(h);
      }
      m.edeg.push_back(o.to_base.edeg[e]);
    }
    towers[half] = quotient_by_involution("out", sub.graph, o.base, m, iv, ih);
    towers[half].mid.name = "C";
    towers[half].variables = t.variables;
    out.vertex_source[half] = sub.vertices;
    out.half_edge_source[half] = hsrc;
    text[half] = serialize_tower(towers[half]);
  }
  int order[2] = {0, 1};
  if (text[1] < text[0]) std::swap(order[0], order[1]);
  auto vs = out.vertex_source;
  auto hs = out.half_edge_source;
  for (int i = 0; i < 2; ++i) {
    out.towers[i] = std::move(towers[order[i]]);
    out.towers[i].name = "out" + std::to_string(i + 1);
    out.towers[i].top.name = "C" + std::to_string(i + 1) + "t";
    out.towers[i].mid.name = "C" + std::to_string(i + 1);
    out.vertex_source[i] = vs[order[i]];
    out.half_edge_source[i] = hs[order[i]];
  }
  return out;
}

Tower contract_tower(const Tower& t, std::size_t e) {
  if (e >= t.base.num_edges()) throw Error("InvalidArgument", "edge index out of range");
  if (t.base.is_loop(e)) throw Error("LoopContraction", "cannot contract loop '" + t.base.edge_names[e] + "'");
  std::set<std::size_t> base_edges{e}, mid_edges, top_edges;
  for (std::size_t m = 0; m < t.mid.num_edges(); ++m)
    if (t.f.edge_image(m) == e) mid_edges.insert(m);
  for (std::size_t m = 0; m < t.top.num_edges(); ++m)
    if (mid_edges.count(t.pi.edge_image(m))) top_edges.insert(m);
  Contraction cb = contract_edges(t.base, base_edges);
  Contraction cm = contract_edges(t.mid, mid_edges);
  Contraction ct = contract_edges(t.top, top_edges);

  // Degree of a merged vertex: sum over the members lying over one fixed old vertex.
  auto contract_map = [](const Graph& src, const Graph& dst, const Morphism& m, const Contraction& cs,
                         const Contraction& cd) {
    Morphism r;
    const std::size_t nv = cs.graph.num_vertices();
    r.vmap.assign(nv, 0);
    r.vdeg.assign(nv, 0);
    std::vector<std::size_t> anchor(nv, static_cast<std::size_t>(-1));
    for (std::size_t v = 0; v < src.num_vertices(); ++v) {
      std::size_t nvx = cs.vertex_map[v];
      if (anchor[nvx] == static_cast<std::size_t>(-1)) anchor[nvx] = m.vmap[v];
      r.vmap[nvx] = cd.vertex_map[m.vmap[v]];
    }
    for (std::size_t v = 0; v < src.num_vertices(); ++v)
      if (m.vmap[v] == anchor[cs.vertex_map[v]]) r.vdeg[cs.vertex_map[v]] += m.vdeg[v];
    r.hmap.assign(cs.graph.num_half_edges(), 0);
    r.edeg.assign(cs.graph.num_edges(), 0);
    for (std::size_t x = 0; x < src.num_edges(); ++x) {
      if (!cs.edge_map[x]) continue;
      std::size_t nx = *cs.edge_map[x];
      std::size_t target = *cd.edge_map[m.edge_image(x)];
      r.hmap[2 * nx] = 2 * target + m.hmap[2 * x] % 2;
      r.hmap[2 * nx + 1] = 2 * target + 1 - m.hmap[2 * x] % 2;
      r.edeg[nx] = m.edeg[x];
    }
    (void)dst;
    return r;
  };
  Morphism f = contract_map(t.mid, t.base, t.f, cm, cb);
  Morphism pi = contract_map(t.top, t.mid, t.pi, ct, cm);
  Tower r = make_tower(t.name, ct.graph, cm.graph, cb.graph, pi, f);
  r.variables = t.variables;
  return r;
}

}  // namespace twr
