#pragma once

#include "twr/harmonic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twr {

struct Diagnostic {
  std::string severity = "error";
  std::string message;
  std::size_t line = 0;    // 1-based; 0 when not tied to a line
  std::size_t column = 0;  // 1-based
  std::string to_string() const;
};

struct ParseResult {
  std::optional<Tower> tower;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return tower.has_value(); }
};

ParseResult parse_tower(const std::string& text);
ParseResult parse_tower_file(const std::string& path);

// Canonical text form: explicit lengths, explicit maps, or the signed-cover
// shorthand when the tower records one.
std::string serialize_tower(const Tower& t);

enum class Layer { Base, Mid, Top };
std::optional<Layer> parse_layer(const std::string& text);

// Graphviz text for one layer. Pen width is the local degree of the map down from
// that layer; edges over dashed edges of a signed cover are dashed.
std::string export_dot(const Tower& t, Layer layer);

}  // namespace twr
