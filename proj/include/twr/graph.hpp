#pragma once

#include "twr/linear_form.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace twr {

// Half-edge graph. Edge e owns half-edges 2e and 2e+1, so the fixed-point-free
// involution is h -> h ^ 1. Half-edge 2e is rooted at the declared first endpoint,
// which defines the reference orientation of e. Loops are allowed.
struct Graph {
  std::string name;
  std::vector<std::string> vertex_names;
  std::vector<std::string> edge_names;
  std::vector<std::size_t> root;    // per half-edge
  std::vector<LinearForm> length;   // per edge; empty for a non-metric graph

  std::size_t num_vertices() const { return vertex_names.size(); }
  std::size_t num_edges() const { return edge_names.size(); }
  std::size_t num_half_edges() const { return root.size(); }
  std::size_t num_points() const { return num_vertices() + num_half_edges(); }
  static std::size_t mate(std::size_t h) { return h ^ 1; }
  static std::size_t edge_of(std::size_t h) { return h / 2; }
  bool is_metric() const { return !length.empty(); }
  bool is_loop(std::size_t e) const { return root[2 * e] == root[2 * e + 1]; }

  std::size_t add_vertex(const std::string& vertex_name);
  // Returns the edge index; pass a zero form for a non-metric graph.
  std::size_t add_edge(const std::string& edge_name, std::size_t from, std::size_t to,
                       const LinearForm& len = LinearForm());

  std::optional<std::size_t> find_vertex(const std::string& vertex_name) const;
  std::optional<std::size_t> find_edge(const std::string& edge_name) const;

  // Half-edges rooted at each vertex, in increasing order.
  std::vector<std::vector<std::size_t>> tangent_spaces() const;
};

// A point of a graph: a vertex or a half-edge.
struct Point {
  enum class Kind { Vertex, HalfEdge };
  Kind kind = Kind::Vertex;
  std::size_t index = 0;

  static Point vertex(std::size_t v) { return {Kind::Vertex, v}; }
  static Point half_edge(std::size_t h) { return {Kind::HalfEdge, h}; }
  bool is_vertex() const { return kind == Kind::Vertex; }
  friend auto operator<=>(const Point&, const Point&) = default;
};

struct Components {
  std::size_t count = 0;
  std::vector<std::size_t> vertex_component;     // per vertex
  std::vector<std::size_t> half_edge_component;  // per half-edge
};

Components components(const Graph& g);
bool is_connected(const Graph& g);

// |E| - |V| + 1; throws DisconnectedGraph unless g is connected.
long genus(const Graph& g);

// First Betti number of a possibly disconnected graph: |E| - |V| + #components.
long cycle_rank(const Graph& g);

struct Contraction {
  Graph graph;
  std::vector<std::size_t> vertex_map;              // old vertex -> new vertex
  std::vector<std::optional<std::size_t>> edge_map;  // old edge -> new edge, none if contracted
};

// Contracts every edge of `edges` simultaneously. Throws LoopContraction when one of
// them is a loop. A merged vertex keeps the name of its lowest-index member.
Contraction contract_edges(const Graph& g, const std::set<std::size_t>& edges);

struct Subgraph {
  Graph graph;
  std::vector<std::size_t> vertices;  // new vertex -> old vertex
  std::vector<std::size_t> edges;     // new edge -> old edge
};

// The subgraph on the given vertices, keeping every edge with both ends inside.
Subgraph induced_subgraph(const Graph& g, const std::vector<std::size_t>& vertices);

struct GraphIsomorphism {
  std::vector<std::size_t> vertex_map;     // a-vertex -> b-vertex
  std::vector<std::size_t> half_edge_map;  // a-half-edge -> b-half-edge
};

// Root- and mate-preserving bijection a -> b, found by deterministic backtracking.
// With respect_lengths the bijection must also preserve edge lengths.
std::optional<GraphIsomorphism> graph_isomorphic(const Graph& a, const Graph& b,
                                                 bool respect_lengths = false);

}  // namespace twr
