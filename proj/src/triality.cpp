#include "twr/error.hpp"
#include "twr/ngonal.hpp"

#include <algorithm>

namespace twr {

namespace {

struct Owner {
  int output = -1;
  std::size_t index = 0;
};

// Point-level map from the top of one half to the top of a target tower.
struct PointMap {
  std::vector<std::size_t> v, h;
};

// The original fiber divisor attached to a top point of output i.
const DonagiPoint& original_divisor(const SplitOutput& first, int i, const Point& z) {
  if (z.is_vertex()) return first.donagi.vertex_points[first.vertex_source[i][z.index]];
  return first.donagi.half_edge_points[first.half_edge_source[i][z.index]];
}

// Summands of a second-level point: (original divisor, multiplicity).
std::vector<std::pair<const DonagiPoint*, long>> summands(const SplitOutput& first, int i, const SplitOutput& second,
                                                          int half, const Point& q) {
  const DonagiPoint& z = q.is_vertex()
                             ? second.donagi.vertex_points[second.vertex_source[half][q.index]]
                             : second.donagi.half_edge_points[second.half_edge_source[half][q.index]];
  const auto& sup = second.donagi.support(z.base_point);
  std::vector<std::pair<const DonagiPoint*, long>> out;
  for (std::size_t k = 0; k < sup.size(); ++k)
    if (z.coeffs[k] > 0) out.push_back({&original_divisor(first, i, sup[k]), z.coeffs[k]});
  return out;
}

// Summed fiber divisor S of the parts; the image is the unique x with
// S - 2 f*(y) = 2 (x - iota x).
std::optional<std::size_t> difference_point(const Tower& t, const SplitOutput& first,
                                            const std::vector<std::pair<const DonagiPoint*, long>>& parts) {
  const Point x = parts.front().first->base_point;
  const auto& sup = first.donagi.support(x);
  std::optional<std::size_t> plus, minus;
  for (std::size_t k = 0; k < sup.size(); ++k) {
    long s = 0;
    for (const auto& [d, c] : parts) s += c * d->coeffs[k];
    Point y = sup[k].is_vertex() ? Point::vertex(t.pi.vmap[sup[k].index]) : Point::half_edge(t.pi.hmap[sup[k].index]);
    long diff = s - 2 * t.f.deg(y);
    if (diff == 0) continue;
    if (diff == 2 && !plus) plus = k;
    else if (diff == -2 && !minus) minus = k;
    else return std::nullopt;
  }
  if (!plus || !minus) return std::nullopt;
  std::size_t p = sup[*plus].index, m = sup[*minus].index;
  std::size_t partner = sup[*plus].is_vertex() ? t.iota_v[p] : t.iota_h[p];
  if (partner != m) return std::nullopt;
  return p;
}

std::optional<std::size_t> residual_point(const Tower& t, const SplitOutput& first, int other,
                                          const std::vector<Owner>& owner_v, const std::vector<Owner>& owner_h,
                                          const std::vector<std::pair<const DonagiPoint*, long>>& parts) {
  const Point x = parts.front().first->base_point;
  const auto& sup = first.donagi.support(x);
  std::vector<long> coeffs(sup.size(), 0);
  for (std::size_t k = 0; k < sup.size(); ++k) {
    long s = 0;
    for (const auto& [d, c] : parts) s += c * d->coeffs[k];
    Point y = sup[k].is_vertex() ? Point::vertex(t.pi.vmap[sup[k].index]) : Point::half_edge(t.pi.hmap[sup[k].index]);
    long diff = s - t.f.deg(y);
    if (diff < 0 || diff % 2 != 0) return std::nullopt;
    coeffs[k] = diff / 2;
  }
  auto p = first.donagi.find(x, coeffs);
  if (!p) return std::nullopt;
  const Owner& o = p->is_vertex() ? owner_v[p->index] : owner_h[p->index];
  if (o.output != other) return std::nullopt;
  return o.index;
}

// Checks that m is an isomorphism from the top of `from` onto the top of `to`
// commuting with the involutions and the maps to the base.
bool verify(const Tower& from, const Tower& to, const PointMap& m) {
  const Graph& a = from.top;
  const Graph& b = to.top;
  if (a.num_vertices() != b.num_vertices() || a.num_half_edges() != b.num_half_edges()) return false;
  std::vector<bool> hit_v(b.num_vertices(), false), hit_h(b.num_half_edges(), false);
  for (std::size_t v : m.v) {
    if (hit_v[v]) return false;
    hit_v[v] = true;
  }
  for (std::size_t h : m.h) {
    if (hit_h[h]) return false;
    hit_h[h] = true;
  }
  Morphism da = from.top_to_base(), db = to.top_to_base();
  for (std::size_t v = 0; v < a.num_vertices(); ++v) {
    if (m.v[from.iota_v[v]] != to.iota_v[m.v[v]]) return false;
    if (da.vmap[v] != db.vmap[m.v[v]] || da.vdeg[v] != db.vdeg[m.v[v]]) return false;
  }
  for (std::size_t h = 0; h < a.num_half_edges(); ++h) {
    if (m.v[a.root[h]] != b.root[m.h[h]]) return false;
    if (m.h[Graph::mate(h)] != Graph::mate(m.h[h])) return false;
    if (m.h[from.iota_h[h]] != to.iota_h[m.h[h]]) return false;
    if (da.hmap[h] != db.hmap[m.h[h]] || da.edeg[h / 2] != db.edeg[m.h[h] / 2]) return false;
  }
  return true;
}

}  // namespace

TrialityMaps canonical_triality_maps(const Tower& t, const SplitOutput& outputs) {
  // Owner of every original DonagiPoint: which output and which top point.
  std::vector<Owner> owner_v(outputs.donagi.graph.num_vertices());
  std::vector<Owner> owner_h(outputs.donagi.graph.num_half_edges());
  for (int i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < outputs.vertex_source[i].size(); ++k) owner_v[outputs.vertex_source[i][k]] = {i, k};
    for (std::size_t k = 0; k < outputs.half_edge_source[i].size(); ++k)
      owner_h[outputs.half_edge_source[i][k]] = {i, k};
  }

  TrialityMaps maps;
  for (int i = 0; i < 2; ++i) {
    const int other = 1 - i;
    SplitOutput second = split(outputs.towers[i]);
    std::array<std::optional<PointMap>, 2> rule_a, rule_b;
    for (int half = 0; half < 2; ++half) {
      const Tower& h = second.towers[half];
      PointMap a, b;
      bool a_ok = true, b_ok = true;
      auto apply = [&](const Point& q, std::vector<std::size_t>& out_a, std::vector<std::size_t>& out_b) {
        auto parts = summands(outputs, i, second, half, q);
        if (a_ok) {
          auto c = difference_point(t, outputs, parts);
          if (c) out_a.push_back(*c);
          else a_ok = false;
        }
        if (b_ok) {
          auto r = residual_point(t, outputs, other, owner_v, owner_h, parts);
          if (r) out_b.push_back(*r);
          else b_ok = false;
        }
      };
      for (std::size_t v = 0; v < h.top.num_vertices(); ++v) apply(Point::vertex(v), a.v, b.v);
      for (std::size_t e = 0; e < h.top.num_half_edges(); ++e) apply(Point::half_edge(e), a.h, b.h);
      if (a_ok && verify(h, t, a)) rule_a[half] = a;
      if (b_ok && verify(h, outputs.towers[other], b)) rule_b[half] = b;
    }
    bool assigned = false;
    for (int first_half : {0, 1}) {
      int second_half = 1 - first_half;
      if (rule_a[first_half] && rule_b[second_half]) {
        maps.halves[i][first_half] = {0, rule_a[first_half]->v, rule_a[first_half]->h};
        maps.halves[i][second_half] = {1, rule_b[second_half]->v, rule_b[second_half]->h};
        assigned = true;
        break;
      }
    }
    if (!assigned)
      throw Error("TrialityFailure", "canonical maps for output " + std::to_string(i + 1) +
                                         " are not isomorphisms onto the input and the other output");
  }
  return maps;
}

TrialityReport triality_check(const Tower& t) {
  TrialityReport r;
  try {
    SplitOutput first = split(t);
    for (int i = 0; i < 2; ++i) {
      SplitOutput second = split(first.towers[i]);
      const Tower& other = first.towers[1 - i];
      bool direct = tower_isomorphism(second.towers[0], t, true) && tower_isomorphism(second.towers[1], other, true);
      bool swapped = !direct && tower_isomorphism(second.towers[0], other, true) &&
                     tower_isomorphism(second.towers[1], t, true);
      r.isomorphic[i] = direct || swapped;
      if (!r.isomorphic[i]) r.detail += "construction on output " + std::to_string(i + 1) + " does not return the input and the other output; ";
    }
    try {
      canonical_triality_maps(t, first);
      r.canonical_maps = true;
    } catch (const Error& e) {
      r.detail += e.what();
    }
  } catch (const Error& e) {
    r.detail += std::string(e.code()) + ": " + e.what();
  }
  r.passed = r.isomorphic[0] && r.isomorphic[1] && r.canonical_maps;
  return r;
}

}  // namespace twr
