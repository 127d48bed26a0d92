#pragma once

#include "twr/graph.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace twr {

// A graph map with local degrees. hmap sends half-edges to half-edges, so it also
// records whether an edge is mapped with or against the reference orientation.
struct Morphism {
  std::vector<std::size_t> vmap;
  std::vector<std::size_t> hmap;
  std::vector<long> vdeg;  // per source vertex
  std::vector<long> edeg;  // per source edge

  Point image(const Point& p) const {
    return p.is_vertex() ? Point::vertex(vmap[p.index]) : Point::half_edge(hmap[p.index]);
  }
  long deg(const Point& p) const { return p.is_vertex() ? vdeg[p.index] : edeg[p.index / 2]; }
  std::size_t edge_image(std::size_t e) const { return hmap[2 * e] / 2; }
  // True when edge e is mapped against the reference orientation of its image.
  bool flips(std::size_t e) const { return hmap[2 * e] % 2 == 1; }
};

Morphism identity_morphism(const Graph& g);
// a: A -> B, b: B -> C; returns b after a.
Morphism compose(const Morphism& a, const Morphism& b);

struct Violation {
  std::string message;
  std::optional<std::size_t> vertex;     // source vertex
  std::optional<std::size_t> half_edge;  // target half-edge
};

// Checks structure, positivity, harmonicity and metric compatibility; returns the
// first violation found, or nothing when the morphism is valid.
std::optional<Violation> validate(const Graph& source, const Graph& target, const Morphism& m);

// Constant fiber sum. Throws DisconnectedTarget for a disconnected target and
// InvalidTower when the fiber sums differ.
long degree(const Graph& source, const Graph& target, const Morphism& m);

// Source with lengths len(f(e)) / deg(e).
Graph metrize_source(const Graph& source, const Graph& target, const Morphism& m);

using PointVector = std::map<Point, long>;

std::vector<Point> fiber(const Graph& source, const Morphism& m, const Point& x);
PointVector pullback(const Graph& source, const Morphism& m, const Point& x);
PointVector pushforward(const Morphism& m, const PointVector& d);

struct DoubleCover {
  Graph top;
  Graph base;
  Morphism pi;
  std::vector<std::size_t> iota_v;
  std::vector<std::size_t> iota_h;

  bool is_free() const;
};

// Two sheets v+ / v-, e+ / e-; dashed edges join opposite sheets.
DoubleCover signed_cover(const Graph& base, const std::set<std::size_t>& dashed);

// Involution swapping the two preimages of free points and fixing dilated ones.
// Throws InvalidTower when pi is not a double cover.
void derive_involution(const Graph& top, const Graph& mid, const Morphism& pi,
                       std::vector<std::size_t>& iota_v, std::vector<std::size_t>& iota_h);

struct Tower {
  std::string name = "T";
  Graph top;
  Graph mid;
  Graph base;
  Morphism pi;  // top -> mid, degree 2
  Morphism f;   // mid -> base, degree n
  std::vector<std::size_t> iota_v;
  std::vector<std::size_t> iota_h;
  // Declared length variables, in the order used for printing.
  std::vector<std::string> variables;
  // Middle edges drawn dashed when the top was given as a signed cover of the middle.
  std::optional<std::set<std::size_t>> signed_edges;

  long n() const;
  bool is_metric() const { return base.is_metric(); }
  Morphism top_to_base() const { return compose(pi, f); }
  DoubleCover cover() const { return {top, mid, pi, iota_v, iota_h}; }
};

// Validates both maps, requires a connected base and a degree-2 top map, and fills
// in the involution. Throws InvalidTower.
Tower make_tower(std::string name, Graph top, Graph mid, Graph base, Morphism pi, Morphism f);

struct FiberType {
  enum class Kind { I, II, III, Other };
  Kind kind = Kind::Other;
  std::vector<long> profile;  // decreasing local degrees
  std::string to_string() const;
};

FiberType classify_fiber(const Tower& t, const Point& x);

struct GenericReport {
  bool generic = true;
  std::optional<Point> offending;  // point of the base, or of the mid graph for a dilated top
  std::string reason;
};

GenericReport is_generic(const Tower& t);

struct TowerIsomorphism {
  std::vector<std::size_t> top_v, top_h, mid_v, mid_h, base_v, base_h;
};

// Isomorphism of towers commuting with all maps and preserving local degrees.
// With fix_base the base map must be the identity (both towers over the same base).
// Lengths are compared when both towers are metric.
std::optional<TowerIsomorphism> tower_isomorphism(const Tower& a, const Tower& b, bool fix_base = false);

// Quotient of `top` by an involution compatible with `to_base`; returns the tower
// top -> top/iota -> base. Throws InvalidTower when an edge is reversed by iota or a
// fixed point has odd degree.
Tower quotient_by_involution(std::string name, const Graph& top, const Graph& base, const Morphism& to_base,
                             const std::vector<std::size_t>& iota_v, const std::vector<std::size_t>& iota_h);

std::string point_name(const Graph& g, const Point& p);

}  // namespace twr
