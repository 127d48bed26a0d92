#include "twr/harmonic.hpp"

#include "twr/error.hpp"
#include "twr/iso.hpp"

#include <algorithm>
#include <tuple>

namespace twr {

Morphism identity_morphism(const Graph& g) {
  Morphism m;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) m.vmap.push_back(v);
  for (std::size_t h = 0; h < g.num_half_edges(); ++h) m.hmap.push_back(h);
  m.vdeg.assign(g.num_vertices(), 1);
  m.edeg.assign(g.num_edges(), 1);
  return m;
}

Morphism compose(const Morphism& a, const Morphism& b) {
  Morphism c;
  c.vmap.resize(a.vmap.size());
  c.vdeg.resize(a.vmap.size());
  for (std::size_t v = 0; v < a.vmap.size(); ++v) {
    c.vmap[v] = b.vmap[a.vmap[v]];
    c.vdeg[v] = a.vdeg[v] * b.vdeg[a.vmap[v]];
  }
  c.hmap.resize(a.hmap.size());
  for (std::size_t h = 0; h < a.hmap.size(); ++h) c.hmap[h] = b.hmap[a.hmap[h]];
  c.edeg.resize(a.edeg.size());
  for (std::size_t e = 0; e < a.edeg.size(); ++e) c.edeg[e] = a.edeg[e] * b.edeg[a.edge_image(e)];
  return c;
}

std::string point_name(const Graph& g, const Point& p) {
  if (p.is_vertex()) return g.vertex_names[p.index];
  return g.edge_names[p.index / 2] + (p.index % 2 ? ":t" : ":s");
}

std::optional<Violation> validate(const Graph& source, const Graph& target, const Morphism& m) {
  auto fail = [](std::string msg, std::optional<std::size_t> v = {}, std::optional<std::size_t> h = {}) {
    return std::optional<Violation>(Violation{std::move(msg), v, h});
  };
  if (m.vmap.size() != source.num_vertices() || m.vdeg.size() != source.num_vertices())
    return fail("vertex map does not cover the source vertices");
  if (m.hmap.size() != source.num_half_edges() || m.edeg.size() != source.num_edges())
    return fail("half-edge map does not cover the source edges");
  for (std::size_t v = 0; v < source.num_vertices(); ++v) {
    if (m.vmap[v] >= target.num_vertices()) return fail("vertex image out of range", v);
    if (m.vdeg[v] <= 0) return fail("degree must be positive at vertex " + source.vertex_names[v], v);
  }
  for (std::size_t h = 0; h < source.num_half_edges(); ++h) {
    if (m.hmap[h] >= target.num_half_edges()) return fail("half-edge image out of range");
    if (m.hmap[Graph::mate(h)] != Graph::mate(m.hmap[h]))
      return fail("map does not commute with the involution on edge " + source.edge_names[h / 2]);
    if (target.root[m.hmap[h]] != m.vmap[source.root[h]])
      return fail("map does not commute with the root map on edge " + source.edge_names[h / 2],
                  source.root[h], m.hmap[h]);
  }
  for (std::size_t e = 0; e < source.num_edges(); ++e)
    if (m.edeg[e] <= 0) return fail("degree must be positive on edge " + source.edge_names[e]);

  auto src_tangent = source.tangent_spaces();
  auto dst_tangent = target.tangent_spaces();
  for (std::size_t v = 0; v < source.num_vertices(); ++v) {
    for (std::size_t k : dst_tangent[m.vmap[v]]) {
      long sum = 0;
      for (std::size_t h : src_tangent[v])
        if (m.hmap[h] == k) sum += m.edeg[h / 2];
      if (sum != m.vdeg[v])
        return fail("harmonicity fails at vertex " + source.vertex_names[v] + " over " + point_name(target, Point::half_edge(k)) +
                        ": degree " + std::to_string(m.vdeg[v]) + " but edge degrees sum to " + std::to_string(sum),
                    v, k);
    }
  }
  if (source.is_metric() && target.is_metric()) {
    for (std::size_t e = 0; e < source.num_edges(); ++e) {
      if (source.length[e] * Rat(m.edeg[e]) != target.length[m.edge_image(e)])
        return fail("length of edge " + source.edge_names[e] + " times its degree differs from the length of " +
                    target.edge_names[m.edge_image(e)]);
    }
  }
  return std::nullopt;
}

long degree(const Graph& source, const Graph& target, const Morphism& m) {
  if (target.num_vertices() == 0 || !is_connected(target))
    throw Error("DisconnectedTarget", "degree is defined only over a connected target");
  std::vector<long> vsum(target.num_vertices(), 0), esum(target.num_edges(), 0);
  for (std::size_t v = 0; v < source.num_vertices(); ++v) vsum[m.vmap[v]] += m.vdeg[v];
  for (std::size_t e = 0; e < source.num_edges(); ++e) esum[m.edge_image(e)] += m.edeg[e];
  long d = vsum[0];
  for (long s : vsum)
    if (s != d) throw Error("InvalidTower", "fiber sums are not constant");
  for (long s : esum)
    if (s != d) throw Error("InvalidTower", "fiber sums are not constant");
  return d;
}

Graph metrize_source(const Graph& source, const Graph& target, const Morphism& m) {
  Graph g = source;
  g.length.assign(source.num_edges(), LinearForm());
  for (std::size_t e = 0; e < source.num_edges(); ++e) g.length[e] = target.length[m.edge_image(e)] / Rat(m.edeg[e]);
  return g;
}

std::vector<Point> fiber(const Graph& source, const Morphism& m, const Point& x) {
  std::vector<Point> out;
  if (x.is_vertex()) {
    for (std::size_t v = 0; v < source.num_vertices(); ++v)
      if (m.vmap[v] == x.index) out.push_back(Point::vertex(v));
  } else {
    for (std::size_t h = 0; h < source.num_half_edges(); ++h)
      if (m.hmap[h] == x.index) out.push_back(Point::half_edge(h));
  }
  return out;
}

PointVector pullback(const Graph& source, const Morphism& m, const Point& x) {
  PointVector out;
  for (const Point& y : fiber(source, m, x)) out[y] = m.deg(y);
  return out;
}

PointVector pushforward(const Morphism& m, const PointVector& d) {
  PointVector out;
  for (const auto& [p, c] : d) {
    if (c == 0) continue;
    long& slot = out[m.image(p)];
    slot += c;
    if (slot == 0) out.erase(m.image(p));
  }
  return out;
}

bool DoubleCover::is_free() const {
  return std::all_of(pi.vdeg.begin(), pi.vdeg.end(), [](long d) { return d == 1; }) &&
         std::all_of(pi.edeg.begin(), pi.edeg.end(), [](long d) { return d == 1; });
}

DoubleCover signed_cover(const Graph& base, const std::set<std::size_t>& dashed) {
  DoubleCover c;
  c.base = base;
  c.top.name = base.name + "t";
  for (std::size_t v = 0; v < base.num_vertices(); ++v) {
    c.top.add_vertex(base.vertex_names[v] + "+");
    c.top.add_vertex(base.vertex_names[v] + "-");
    c.pi.vmap.insert(c.pi.vmap.end(), {v, v});
  }
  for (std::size_t e = 0; e < base.num_edges(); ++e) {
    std::size_t a = base.root[2 * e], b = base.root[2 * e + 1];
    bool cross = dashed.count(e) > 0;
    LinearForm len = base.is_metric() ? base.length[e] : LinearForm();
    c.top.add_edge(base.edge_names[e] + "+", 2 * a, 2 * b + (cross ? 1 : 0), len);
    c.top.add_edge(base.edge_names[e] + "-", 2 * a + 1, 2 * b + (cross ? 0 : 1), len);
    c.pi.hmap.insert(c.pi.hmap.end(), {2 * e, 2 * e + 1, 2 * e, 2 * e + 1});
  }
  c.pi.vdeg.assign(c.top.num_vertices(), 1);
  c.pi.edeg.assign(c.top.num_edges(), 1);
  derive_involution(c.top, c.base, c.pi, c.iota_v, c.iota_h);
  return c;
}

void derive_involution(const Graph& top, const Graph& mid, const Morphism& pi, std::vector<std::size_t>& iota_v,
                       std::vector<std::size_t>& iota_h) {
  auto pair_up = [](const std::vector<std::vector<std::size_t>>& pre, const std::vector<long>& deg, std::size_t size,
                    const auto& describe) {
    std::vector<std::size_t> iota(size);
    for (std::size_t y = 0; y < pre.size(); ++y) {
      const auto& p = pre[y];
      if (p.size() == 2 && deg[p[0]] == 1 && deg[p[1]] == 1) {
        iota[p[0]] = p[1];
        iota[p[1]] = p[0];
      } else if (p.size() == 1 && deg[p[0]] == 2) {
        iota[p[0]] = p[0];
      } else {
        throw Error("InvalidTower", "top map is not a double cover over " + describe(y));
      }
    }
    return iota;
  };
  std::vector<std::vector<std::size_t>> pre_v(mid.num_vertices()), pre_h(mid.num_half_edges());
  for (std::size_t v = 0; v < top.num_vertices(); ++v) pre_v[pi.vmap[v]].push_back(v);
  for (std::size_t h = 0; h < top.num_half_edges(); ++h) pre_h[pi.hmap[h]].push_back(h);
  std::vector<long> hdeg(top.num_half_edges());
  for (std::size_t h = 0; h < top.num_half_edges(); ++h) hdeg[h] = pi.edeg[h / 2];
  iota_v = pair_up(pre_v, pi.vdeg, top.num_vertices(), [&](std::size_t y) { return mid.vertex_names[y]; });
  iota_h = pair_up(pre_h, hdeg, top.num_half_edges(),
                   [&](std::size_t k) { return point_name(mid, Point::half_edge(k)); });
  for (std::size_t h = 0; h < top.num_half_edges(); ++h)
    if (top.root[iota_h[h]] != iota_v[top.root[h]])
      throw Error("InvalidTower", "covering involution does not commute with the root map");
}

long Tower::n() const {
  long d = 0;
  for (std::size_t v = 0; v < mid.num_vertices(); ++v)
    if (f.vmap[v] == 0) d += f.vdeg[v];
  return d;
}

Tower make_tower(std::string name, Graph top, Graph mid, Graph base, Morphism pi, Morphism f) {
  if (base.num_vertices() == 0 || !is_connected(base)) throw Error("InvalidTower", "base graph must be connected");
  if (base.is_metric()) {
    if (!mid.is_metric()) mid = metrize_source(mid, base, f);
    if (!top.is_metric()) top = metrize_source(top, mid, pi);
  } else if (mid.is_metric() || top.is_metric()) {
    throw Error("InvalidTower", "lengths given on a cover but not on the base");
  }
  if (auto v = validate(mid, base, f)) throw Error("InvalidTower", "map " + mid.name + " -> " + base.name + ": " + v->message);
  if (auto v = validate(top, mid, pi)) throw Error("InvalidTower", "map " + top.name + " -> " + mid.name + ": " + v->message);
  degree(mid, base, f);
  Tower t;
  t.name = std::move(name);
  derive_involution(top, mid, pi, t.iota_v, t.iota_h);
  t.top = std::move(top);
  t.mid = std::move(mid);
  t.base = std::move(base);
  t.pi = std::move(pi);
  t.f = std::move(f);
  return t;
}

std::string FiberType::to_string() const {
  switch (kind) {
    case Kind::I: return "I";
    case Kind::II: return "II";
    case Kind::III: return "III";
    case Kind::Other: break;
  }
  std::string s = "Other(";
  for (std::size_t i = 0; i < profile.size(); ++i) s += (i ? "," : "") + std::to_string(profile[i]);
  return s + ")";
}

FiberType classify_fiber(const Tower& t, const Point& x) {
  FiberType ft;
  for (const Point& y : fiber(t.mid, t.f, x)) ft.profile.push_back(t.f.deg(y));
  std::sort(ft.profile.rbegin(), ft.profile.rend());
  if (ft.profile == std::vector<long>{3, 1}) ft.kind = FiberType::Kind::I;
  else if (ft.profile == std::vector<long>{2, 1, 1}) ft.kind = FiberType::Kind::II;
  else if (ft.profile == std::vector<long>{1, 1, 1, 1}) ft.kind = FiberType::Kind::III;
  return ft;
}

GenericReport is_generic(const Tower& t) {
  GenericReport r;
  if (t.n() != 4) {
    r.generic = false;
    r.reason = "bottom map has degree " + std::to_string(t.n()) + ", not 4";
    return r;
  }
  for (std::size_t v = 0; v < t.mid.num_vertices(); ++v)
    if (t.iota_v[v] == v) {
      r.generic = false;
      r.offending = Point::vertex(t.pi.vmap[v]);
      r.reason = "double cover is dilated over " + t.mid.vertex_names[t.pi.vmap[v]];
      return r;
    }
  for (std::size_t h = 0; h < t.top.num_half_edges(); ++h)
    if (t.iota_h[h] == h) {
      r.generic = false;
      r.offending = Point::half_edge(t.pi.hmap[h]);
      r.reason = "double cover is dilated over " + point_name(t.mid, Point::half_edge(t.pi.hmap[h]));
      return r;
    }
  auto check = [&](const Point& x) {
    FiberType ft = classify_fiber(t, x);
    if (ft.kind != FiberType::Kind::Other) return true;
    r.generic = false;
    r.offending = x;
    r.reason = "fiber over " + point_name(t.base, x) + " has profile " + ft.to_string();
    return false;
  };
  for (std::size_t v = 0; v < t.base.num_vertices(); ++v)
    if (!check(Point::vertex(v))) return r;
  for (std::size_t h = 0; h < t.base.num_half_edges(); ++h)
    if (!check(Point::half_edge(h))) return r;
  return r;
}

namespace {

using ColorKey = std::tuple<int, int, long, std::string, long>;

UnaryStructure encode_tower(const Tower& t, bool fix_base, bool lengths, Interner<ColorKey>& colors) {
  const Graph* layers[3] = {&t.top, &t.mid, &t.base};
  std::size_t offset[4] = {0, 0, 0, 0};
  for (int l = 0; l < 3; ++l) offset[l + 1] = offset[l] + layers[l]->num_points();
  UnaryStructure s;
  s.color.resize(offset[3]);
  s.functions.assign(3, std::vector<std::size_t>(offset[3]));
  for (int l = 0; l < 3; ++l) {
    const Graph& g = *layers[l];
    const Morphism* down = l == 0 ? &t.pi : l == 1 ? &t.f : nullptr;
    const std::size_t nv = g.num_vertices();
    for (std::size_t v = 0; v < nv; ++v) {
      std::size_t x = offset[l] + v;
      long d = down ? down->vdeg[v] : 0;
      s.color[x] = colors({l, 0, d, "", fix_base && l == 2 ? static_cast<long>(v) : -1});
      s.functions[0][x] = x;
      s.functions[1][x] = x;
      s.functions[2][x] = down ? offset[l + 1] + down->vmap[v] : x;
    }
    for (std::size_t h = 0; h < g.num_half_edges(); ++h) {
      std::size_t x = offset[l] + nv + h;
      long d = down ? down->edeg[h / 2] : 0;
      std::string len = lengths ? g.length[h / 2].to_string() : "";
      s.color[x] = colors({l, 1, d, len, fix_base && l == 2 ? static_cast<long>(h) : -1});
      s.functions[0][x] = offset[l] + g.root[h];
      s.functions[1][x] = offset[l] + nv + Graph::mate(h);
      s.functions[2][x] = down ? offset[l + 1] + layers[l + 1]->num_vertices() + down->hmap[h] : x;
    }
  }
  return s;
}

}  // namespace

std::optional<TowerIsomorphism> tower_isomorphism(const Tower& a, const Tower& b, bool fix_base) {
  if (a.top.num_points() != b.top.num_points() || a.mid.num_points() != b.mid.num_points() ||
      a.base.num_points() != b.base.num_points())
    return std::nullopt;
  bool lengths = a.is_metric() && b.is_metric();
  Interner<ColorKey> colors;
  auto sa = encode_tower(a, fix_base, lengths, colors);
  auto sb = encode_tower(b, fix_base, lengths, colors);
  auto map = find_isomorphism(sa, sb);
  if (!map) return std::nullopt;
  TowerIsomorphism iso;
  std::size_t off = 0;
  auto take = [&](const Graph& ga, const Graph& gb, std::vector<std::size_t>& vm, std::vector<std::size_t>& hm) {
    for (std::size_t v = 0; v < ga.num_vertices(); ++v) vm.push_back((*map)[off + v] - off);
    for (std::size_t h = 0; h < ga.num_half_edges(); ++h)
      hm.push_back((*map)[off + ga.num_vertices() + h] - off - gb.num_vertices());
    off += ga.num_points();
  };
  take(a.top, b.top, iso.top_v, iso.top_h);
  take(a.mid, b.mid, iso.mid_v, iso.mid_h);
  take(a.base, b.base, iso.base_v, iso.base_h);
  return iso;
}

Tower quotient_by_involution(std::string name, const Graph& top, const Graph& base, const Morphism& to_base,
                             const std::vector<std::size_t>& iota_v, const std::vector<std::size_t>& iota_h) {
  Graph mid;
  mid.name = top.name + "q";
  Morphism pi, f;
  pi.vmap.resize(top.num_vertices());
  pi.vdeg.resize(top.num_vertices());
  std::vector<std::size_t> orbit(top.num_vertices());
  for (std::size_t v = 0; v < top.num_vertices(); ++v) {
    std::size_t w = iota_v[v];
    if (iota_v[w] != v) throw Error("InvalidTower", "map is not an involution");
    if (w < v) continue;
    std::size_t id = mid.add_vertex(top.vertex_names[v]);
    orbit[v] = orbit[w] = id;
    bool fixed = w == v;
    pi.vdeg[v] = pi.vdeg[w] = fixed ? 2 : 1;
    long d = to_base.vdeg[v];
    if (fixed && d % 2 != 0) throw Error("InvalidTower", "fixed vertex " + top.vertex_names[v] + " has odd degree");
    f.vmap.push_back(to_base.vmap[v]);
    f.vdeg.push_back(fixed ? d / 2 : d);
  }
  for (std::size_t v = 0; v < top.num_vertices(); ++v) pi.vmap[v] = orbit[v];

  pi.hmap.resize(top.num_half_edges());
  pi.edeg.resize(top.num_edges());
  for (std::size_t e = 0; e < top.num_edges(); ++e) {
    std::size_t image = iota_h[2 * e];
    if (image == 2 * e + 1) throw Error("InvalidTower", "involution reverses edge " + top.edge_names[e]);
    if (iota_h[2 * e + 1] != Graph::mate(image)) throw Error("InvalidTower", "involution does not commute with the mate map");
    if (image / 2 < e) continue;
    bool fixed = image / 2 == e;
    LinearForm len = top.is_metric() ? top.length[e] * Rat(fixed ? 2 : 1) : LinearForm();
    std::size_t id = mid.add_edge(top.edge_names[e], orbit[top.root[2 * e]], orbit[top.root[2 * e + 1]], len);
    pi.hmap[2 * e] = 2 * id;
    pi.hmap[2 * e + 1] = 2 * id + 1;
    pi.hmap[image] = 2 * id;
    pi.hmap[Graph::mate(image)] = 2 * id + 1;
    pi.edeg[e] = pi.edeg[image / 2] = fixed ? 2 : 1;
    long d = to_base.edeg[e];
    if (fixed && d % 2 != 0) throw Error("InvalidTower", "fixed edge " + top.edge_names[e] + " has odd degree");
    f.hmap.push_back(to_base.hmap[2 * e]);
    f.hmap.push_back(to_base.hmap[2 * e + 1]);
    f.edeg.push_back(fixed ? d / 2 : d);
  }
  if (top.is_metric()) mid.length.resize(mid.num_edges());
  return make_tower(std::move(name), top, std::move(mid), base, std::move(pi), std::move(f));
}

}  // namespace twr
