#include "twr/graph.hpp"

#include "twr/error.hpp"
#include "twr/iso.hpp"

#include <algorithm>
#include <numeric>

namespace twr {

std::size_t Graph::add_vertex(const std::string& vertex_name) {
  vertex_names.push_back(vertex_name);
  return vertex_names.size() - 1;
}

std::size_t Graph::add_edge(const std::string& edge_name, std::size_t from, std::size_t to,
                            const LinearForm& len) {
  edge_names.push_back(edge_name);
  root.push_back(from);
  root.push_back(to);
  if (!len.is_zero()) {
    length.resize(edge_names.size() - 1);
    length.push_back(len);
  } else if (is_metric()) {
    length.push_back(len);
  }
  return edge_names.size() - 1;
}

std::optional<std::size_t> Graph::find_vertex(const std::string& vertex_name) const {
  auto it = std::find(vertex_names.begin(), vertex_names.end(), vertex_name);
  if (it == vertex_names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vertex_names.begin());
}

std::optional<std::size_t> Graph::find_edge(const std::string& edge_name) const {
  auto it = std::find(edge_names.begin(), edge_names.end(), edge_name);
  if (it == edge_names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - edge_names.begin());
}

std::vector<std::vector<std::size_t>> Graph::tangent_spaces() const {
  std::vector<std::vector<std::size_t>> t(num_vertices());
  for (std::size_t h = 0; h < num_half_edges(); ++h) t[root[h]].push_back(h);
  return t;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
};

}  // namespace

Components components(const Graph& g) {
  UnionFind uf(g.num_vertices());
  for (std::size_t e = 0; e < g.num_edges(); ++e) uf.unite(g.root[2 * e], g.root[2 * e + 1]);
  Components c;
  std::vector<std::size_t> id(g.num_vertices(), static_cast<std::size_t>(-1));
  c.vertex_component.resize(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    std::size_t r = uf.find(v);
    if (id[r] == static_cast<std::size_t>(-1)) id[r] = c.count++;
    c.vertex_component[v] = id[r];
  }
  c.half_edge_component.resize(g.num_half_edges());
  for (std::size_t h = 0; h < g.num_half_edges(); ++h) c.half_edge_component[h] = c.vertex_component[g.root[h]];
  return c;
}

bool is_connected(const Graph& g) { return components(g).count == 1; }

long genus(const Graph& g) {
  if (!is_connected(g))
    throw Error("DisconnectedGraph", "graph '" + g.name + "' is not connected");
  return static_cast<long>(g.num_edges()) - static_cast<long>(g.num_vertices()) + 1;
}

long cycle_rank(const Graph& g) {
  return static_cast<long>(g.num_edges()) - static_cast<long>(g.num_vertices()) +
         static_cast<long>(components(g).count);
}

Contraction contract_edges(const Graph& g, const std::set<std::size_t>& edges) {
  for (std::size_t e : edges) {
    if (e >= g.num_edges()) throw Error("InvalidArgument", "edge index out of range");
    if (g.is_loop(e)) throw Error("LoopContraction", "cannot contract loop '" + g.edge_names[e] + "'");
  }
  UnionFind uf(g.num_vertices());
  for (std::size_t e : edges) uf.unite(g.root[2 * e], g.root[2 * e + 1]);

  Contraction c;
  c.graph.name = g.name;
  c.vertex_map.assign(g.num_vertices(), 0);
  std::vector<std::size_t> new_id(g.num_vertices(), static_cast<std::size_t>(-1));
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    std::size_t r = uf.find(v);
    if (new_id[r] == static_cast<std::size_t>(-1)) new_id[r] = c.graph.add_vertex(g.vertex_names[r]);
    c.vertex_map[v] = new_id[r];
  }
  c.edge_map.assign(g.num_edges(), std::nullopt);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (edges.count(e)) continue;
    c.edge_map[e] = c.graph.add_edge(g.edge_names[e], c.vertex_map[g.root[2 * e]], c.vertex_map[g.root[2 * e + 1]],
                                     g.is_metric() ? g.length[e] : LinearForm());
  }
  if (g.is_metric() && c.graph.length.size() != c.graph.num_edges()) c.graph.length.resize(c.graph.num_edges());
  return c;
}

Subgraph induced_subgraph(const Graph& g, const std::vector<std::size_t>& vertices) {
  Subgraph s;
  s.graph.name = g.name;
  std::vector<std::size_t> new_id(g.num_vertices(), static_cast<std::size_t>(-1));
  for (std::size_t v : vertices) {
    new_id[v] = s.graph.add_vertex(g.vertex_names[v]);
    s.vertices.push_back(v);
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    std::size_t a = new_id[g.root[2 * e]], b = new_id[g.root[2 * e + 1]];
    if (a == static_cast<std::size_t>(-1) || b == static_cast<std::size_t>(-1)) continue;
    s.graph.add_edge(g.edge_names[e], a, b, g.is_metric() ? g.length[e] : LinearForm());
    s.edges.push_back(e);
  }
  if (g.is_metric()) s.graph.length.resize(s.graph.num_edges());
  return s;
}

std::optional<GraphIsomorphism> graph_isomorphic(const Graph& a, const Graph& b, bool respect_lengths) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return std::nullopt;
  Interner<std::pair<int, std::string>> colors;
  auto encode = [&](const Graph& g) {
    UnaryStructure s;
    const std::size_t nv = g.num_vertices();
    s.color.resize(g.num_points());
    s.functions.assign(2, std::vector<std::size_t>(g.num_points()));
    for (std::size_t v = 0; v < nv; ++v) {
      s.color[v] = colors({0, ""});
      s.functions[0][v] = v;
      s.functions[1][v] = v;
    }
    for (std::size_t h = 0; h < g.num_half_edges(); ++h) {
      std::string len = respect_lengths && g.is_metric() ? g.length[h / 2].to_string() : "";
      s.color[nv + h] = colors({1, len});
      s.functions[0][nv + h] = g.root[h];
      s.functions[1][nv + h] = nv + Graph::mate(h);
    }
    return s;
  };
  auto map = find_isomorphism(encode(a), encode(b));
  if (!map) return std::nullopt;
  GraphIsomorphism iso;
  const std::size_t nv = a.num_vertices();
  iso.vertex_map.assign(map->begin(), map->begin() + nv);
  for (std::size_t h = 0; h < a.num_half_edges(); ++h) iso.half_edge_map.push_back((*map)[nv + h] - nv);
  return iso;
}

}  // namespace twr
