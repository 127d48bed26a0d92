#include "fixtures.hpp"

#include "twr/error.hpp"
#include "twr/towerio.hpp"

namespace twr::testing {

std::string fixture_path(const std::string& name) { return std::string(TWR_FIXTURE_DIR) + "/" + name + ".twr"; }

Tower load_fixture(const std::string& name) {
  ParseResult r = parse_tower_file(fixture_path(name));
  if (!r.ok()) {
    std::string message = "cannot load fixture " + name;
    for (const auto& d : r.diagnostics) message += "\n" + d.to_string();
    throw Error("ParseError", message);
  }
  return *r.tower;
}

const std::vector<std::string>& tetragonal_corpus() {
  static const std::vector<std::string> names = {"ex1",     "ex2",             "connectivity",
                                                 "nontree", "tetragonal_row1", "tetragonal_row2"};
  return names;
}

}  // namespace twr::testing
