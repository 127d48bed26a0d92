#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace twr {

// A finite set of colored elements with total unary functions. Isomorphisms are
// color-preserving bijections commuting with every function. Graphs, morphisms and
// towers are all encoded this way.
struct UnaryStructure {
  std::vector<std::size_t> color;
  std::vector<std::vector<std::size_t>> functions;

  std::size_t size() const { return color.size(); }
};

// Colors of `a` and `b` must come from a shared numbering. Returns the map from
// elements of `a` to elements of `b`.
std::optional<std::vector<std::size_t>> find_isomorphism(const UnaryStructure& a,
                                                         const UnaryStructure& b);

// Assigns dense ids to arbitrary ordered keys; used to build shared colorings.
template <class Key>
class Interner {
public:
  std::size_t operator()(const Key& key) { return ids_.try_emplace(key, ids_.size()).first->second; }

private:
  std::map<Key, std::size_t> ids_;
};

}  // namespace twr
