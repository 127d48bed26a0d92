#pragma once

#include "twr/harmonic.hpp"

#include <array>
#include <bitset>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace twr {

// A nonnegative divisor on the top fiber over a base point whose push-forward to
// the middle graph equals the pull-back of the base point.
struct DonagiPoint {
  Point base_point;
  std::vector<long> coeffs;  // aligned with DonagiOutput::support(base_point)
  long local_degree = 1;
};

// Middle point over a base point together with its lifts to the top.
struct FiberGroup {
  Point mid;
  long degree = 1;           // local degree of the bottom map at mid
  std::vector<Point> lifts;  // two lifts for a free point, one for a dilated point
};

struct DonagiOutput {
  long n = 0;
  std::vector<std::string> variables;
  Graph graph;        // vertices and half-edges are DonagiPoints
  Graph base;
  Morphism to_base;   // degree 2^n
  std::vector<std::size_t> iota_v;
  std::vector<std::size_t> iota_h;
  std::vector<DonagiPoint> vertex_points;     // per vertex of graph
  std::vector<DonagiPoint> half_edge_points;  // per half-edge of graph
  // Top points over each base point, ordered by middle point and then by index.
  std::vector<std::vector<Point>> vertex_support;
  std::vector<std::vector<Point>> half_edge_support;
  std::vector<std::vector<FiberGroup>> vertex_groups;
  std::vector<std::vector<FiberGroup>> half_edge_groups;

  const DonagiPoint& point(const Point& p) const {
    return p.is_vertex() ? vertex_points[p.index] : half_edge_points[p.index];
  }
  const std::vector<Point>& support(const Point& x) const {
    return x.is_vertex() ? vertex_support[x.index] : half_edge_support[x.index];
  }
  const std::vector<FiberGroup>& groups(const Point& x) const {
    return x.is_vertex() ? vertex_groups[x.index] : half_edge_groups[x.index];
  }
  // The DonagiPoint over x with the given coefficients, if there is one.
  std::optional<Point> find(const Point& x, const std::vector<long>& coeffs) const;

  std::map<std::pair<Point, std::vector<long>>, std::size_t> index;  // internal lookup
};

// Enumerates all DonagiPoints fiberwise and builds the graph with coordinatewise
// root, mate and involution. Throws InvalidTower when n differs from the degree of
// the bottom map.
DonagiOutput donagi_construct(const Tower& t, long n);

// The induced involution, as (vertex map, half-edge map).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> output_involution(const DonagiOutput& o);

// The construction as a tower P -> P/iota -> K.
Tower donagi_tower(const DonagiOutput& o);

// For a free top: class 0 or 1 of every DonagiPoint. `plus_lift`, when given,
// chooses which of the two lifts of a middle point counts as the plus lift
// (returns 0 for the lower-index lift, 1 for the other).
struct ParityClasses {
  std::vector<int> vertex;
  std::vector<int> half_edge;
};
using PlusLiftChoice = std::function<int(const Point& middle_point)>;
ParityClasses parity_classes(const Tower& t, const DonagiOutput& o, const PlusLiftChoice& plus_lift = {});

// Free double cover of the base whose sheets are the parity classes. Throws
// UnsupportedDilatedTop for a dilated top.
DoubleCover orientation_cover(const Tower& t);
DoubleCover orientation_cover(const Tower& t, const DonagiOutput& o);
bool is_orientable(const Tower& t);

struct SplitOutput {
  DonagiOutput donagi;
  std::array<Tower, 2> towers;
  // Top point of each output tower -> point of donagi.graph.
  std::array<std::vector<std::size_t>, 2> vertex_source;
  std::array<std::vector<std::size_t>, 2> half_edge_source;
};

// The two output towers of the tetragonal construction, ordered by serialized text.
// Throws NotGeneric or NotOrientable.
SplitOutput split(const Tower& t);

// ---- signed permutations of N = {+1..+4, -1..-4} ----
// Index i in 0..3 stands for +(i+1), index 4+i for -(i+1).
using SignedPerm = std::array<std::uint8_t, 8>;

struct WD4Group {
  std::vector<SignedPerm> elements;         // elements[0] is the identity
  std::vector<std::vector<std::size_t>> mul;  // mul[a][b] = index of a after b
  std::vector<std::size_t> bitranspositions;

  std::size_t index_of(const SignedPerm& p) const;
  // Closure of the given elements as a membership bitset.
  std::bitset<192> generate(const std::vector<std::size_t>& generators) const;
};

const WD4Group& wd4();
std::string format_signed_perm(const SignedPerm& p);

// Brute force over all subgroups generated by sets of bitranspositions; returns
// the number of such subgroups and the number that act transitively on N.
struct SubgroupCensus {
  std::size_t subgroups = 0;
  std::size_t transitive = 0;
  std::size_t transitive_order = 0;
};
SubgroupCensus bitransposition_subgroup_census();

// Images of the eight sheets at every point of the base.
struct SheetLabeling {
  std::vector<std::array<std::size_t, 8>> vertex;     // per base vertex: top vertices
  std::vector<std::array<std::size_t, 8>> half_edge;  // per base half-edge: top half-edges
};

// First witness in search order that the top is a fiberwise quotient of the
// trivial octuple cover; the labeling is compatible with the involution.
std::optional<SheetLabeling> octuple_quotient_witness(const Tower& t);

// Bitranspositions fixing the labeling at x, as element indices of wd4().
std::vector<std::size_t> fiber_stabilizer(const SheetLabeling& s, const Point& x);
// All elements of WD4 fixing the labeling at x.
std::bitset<192> full_fiber_stabilizer(const SheetLabeling& s, const Point& x);

struct ConnectivityPrediction {
  std::size_t group_order = 0;
  std::size_t predicted_top_components = 0;     // orbits on N
  std::size_t predicted_donagi_components = 0;  // orbits on the 16 sign transversals
  std::size_t actual_top_components = 0;
  std::size_t actual_donagi_components = 0;
  bool agrees() const {
    return predicted_top_components == actual_top_components &&
           predicted_donagi_components == actual_donagi_components;
  }
};

// Throws NoWitnessLabeling when the tower is not an octuple quotient.
ConnectivityPrediction predict_connectivity(const Tower& t);

// Explicit isomorphisms from the halves of the construction on output i to the
// input tower and to the other output.
struct TrialityMaps {
  struct Half {
    int target = 0;  // 0: input tower, 1: the other output
    std::vector<std::size_t> vertex_map;     // half top vertex -> target top vertex
    std::vector<std::size_t> half_edge_map;  // half top half-edge -> target top half-edge
  };
  std::array<std::array<Half, 2>, 2> halves;  // [output][half]
};

// Throws TrialityFailure when the maps cannot be built or fail verification.
TrialityMaps canonical_triality_maps(const Tower& t, const SplitOutput& outputs);

struct TrialityReport {
  bool passed = false;
  std::array<bool, 2> isomorphic = {false, false};  // per output: construction returns {input, other}
  bool canonical_maps = false;
  std::string detail;
};
TrialityReport triality_check(const Tower& t);

// Contracts e in the base, all its preimages in the middle graph and all theirs in
// the top. Throws LoopContraction.
Tower contract_tower(const Tower& t, std::size_t e);

}  // namespace twr
