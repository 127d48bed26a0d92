#include "builders.hpp"

namespace twr::testing {
namespace {

LinearForm var(std::size_t e) { return LinearForm("l" + std::to_string(e + 1)); }

Graph with_vertices(const std::string& name, std::size_t n) {
  Graph g;
  g.name = name;
  for (std::size_t v = 0; v < n; ++v) g.add_vertex("v" + std::to_string(v));
  return g;
}

}  // namespace

Graph path_graph(std::size_t vertices) {
  Graph g = with_vertices("P", vertices);
  for (std::size_t v = 0; v + 1 < vertices; ++v) g.add_edge("e" + std::to_string(v + 1), v, v + 1, var(v));
  return g;
}

Graph cycle_graph(std::size_t vertices) {
  Graph g = with_vertices("C", vertices);
  for (std::size_t v = 0; v < vertices; ++v) g.add_edge("e" + std::to_string(v + 1), v, (v + 1) % vertices, var(v));
  return g;
}

Graph theta_graph() {
  Graph g = with_vertices("Theta", 2);
  for (std::size_t e = 0; e < 3; ++e) g.add_edge("e" + std::to_string(e + 1), 0, 1, var(e));
  return g;
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  Graph g = a;
  std::size_t shift = a.num_vertices();
  for (const auto& name : b.vertex_names) g.add_vertex(name + "'");
  for (std::size_t e = 0; e < b.num_edges(); ++e)
    g.add_edge(b.edge_names[e] + "'", b.root[2 * e] + shift, b.root[2 * e + 1] + shift,
               b.is_metric() ? b.length[e] : LinearForm());
  return g;
}

// Trivial 4-sheeted middle graph over a single edge; the top is free except over
// the first sheet, where the double cover is dilated.
std::string dilated_top_tower_text() {
  std::string s = "twr 1\nlengths l\ngraph K\n  vertex a b\n  edge e a -- b len l\n";
  s += "graph G\n  vertex a1 b1 a2 b2 a3 b3 a4 b4\n";
  for (int i = 1; i <= 4; ++i)
    s += "  edge e" + std::to_string(i) + " a" + std::to_string(i) + " -- b" + std::to_string(i) + " len auto\n";
  s += "graph Gt\n  vertex a1 b1";
  for (int i = 2; i <= 4; ++i)
    for (const char* sign : {"p", "m"}) s += " a" + std::to_string(i) + sign + " b" + std::to_string(i) + sign;
  s += "\n  edge d1 a1 -- b1 len auto\n";
  for (int i = 2; i <= 4; ++i)
    for (const char* sign : {"p", "m"})
      s += "  edge e" + std::to_string(i) + sign + " a" + std::to_string(i) + sign + " -- b" + std::to_string(i) + sign +
           " len auto\n";
  s += "map pi Gt -> G\n  vertex a1 -> a1 deg 2\n  vertex b1 -> b1 deg 2\n  edge d1 -> e1 deg 2 same\n";
  for (int i = 2; i <= 4; ++i)
    for (const char* sign : {"p", "m"}) {
      std::string k = std::to_string(i);
      s += "  vertex a" + k + sign + " -> a" + k + "\n  vertex b" + k + sign + " -> b" + k + "\n";
      s += "  edge e" + k + sign + " -> e" + k + " deg 1 same\n";
    }
  s += "map f G -> K\n";
  for (int i = 1; i <= 4; ++i) {
    std::string k = std::to_string(i);
    s += "  vertex a" + k + " -> a\n  vertex b" + k + " -> b\n  edge e" + k + " -> e deg 1 same\n";
  }
  s += "tower D = pi ; f\n";
  return s;
}

}  // namespace twr::testing
