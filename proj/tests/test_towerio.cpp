#include <doctest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "twr/ngonal.hpp"
#include "twr/towerio.hpp"

#include <dirent.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

using namespace twr;
using namespace twr::testing;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

Diagnostic first_error(const ParseResult& r) {
  REQUIRE_FALSE(r.ok());
  REQUIRE_FALSE(r.diagnostics.empty());
  return r.diagnostics.front();
}

std::vector<std::string> all_fixture_names() {
  std::vector<std::string> names;
  DIR* dir = opendir(TWR_FIXTURE_DIR);
  REQUIRE(dir != nullptr);
  while (dirent* entry = readdir(dir)) {
    std::string file = entry->d_name;
    if (file.size() > 4 && file.substr(file.size() - 4) == ".twr") names.push_back(file.substr(0, file.size() - 4));
  }
  closedir(dir);
  std::sort(names.begin(), names.end());
  return names;
}

void check_round_trip(const Tower& t) {
  std::string text = serialize_tower(t);
  ParseResult r = parse_tower(text);
  REQUIRE_MESSAGE(r.ok(), (r.diagnostics.empty() ? text : r.diagnostics[0].to_string()));
  CHECK(tower_isomorphism(t, *r.tower, true).has_value());
  CHECK(serialize_tower(*r.tower) == text);
  CHECK(r.tower->variables == t.variables);
}

}  // namespace

TEST_CASE("the minimal fixture") {
  ParseResult r = parse_tower_file(fixture_path("minimal"));
  REQUIRE(r.ok());
  CHECK(r.diagnostics.empty());
  const Tower& t = *r.tower;
  CHECK(t.name == "minimal");
  CHECK(t.n() == 4);
  CHECK(degree(t.top, t.base, t.top_to_base()) == 8);
  CHECK(t.top.num_vertices() == 16);
  CHECK(t.mid.length[0] == LinearForm("l"));
  CHECK(t.signed_edges.has_value());
}

TEST_CASE("the first worked example parses and is generic") {
  Tower t = load_fixture("ex1");
  CHECK(t.variables == std::vector<std::string>{"l1", "l2", "l3"});
  CHECK(is_generic(t).generic);
  CHECK(t.signed_edges->size() == 1);
}

TEST_CASE("a zero local degree is reported with its position") {
  ParseResult r = parse_tower_file(fixture_path("bad_deg"));
  Diagnostic d = first_error(r);
  CHECK(d.message == "degree must be positive");
  CHECK(d.line == 28);
  CHECK(d.column == 20);
  CHECK(d.severity == "error");
  CHECK(d.to_string() == "line 28, column 20: error: degree must be positive");
}

TEST_CASE("diagnostics for malformed input") {
  std::string good = read_file(fixture_path("minimal"));

  Diagnostic unknown = first_error(parse_tower(replace_once(good, "vertex a4 -> a", "vertex a4 -> zz")));
  CHECK(unknown.message == "unknown vertex 'zz' of graph K");
  CHECK(unknown.line == 23);
  CHECK(unknown.column == 16);

  Diagnostic length = first_error(parse_tower(replace_once(good, "len l\n", "len l+*2\n")));
  CHECK(length.message.rfind("bad length", 0) == 0);
  CHECK(length.line == 7);

  Diagnostic variable = first_error(parse_tower(replace_once(good, "len l\n", "len q\n")));
  CHECK(variable.message == "bad length: unknown length variable 'q'");

  CHECK(first_error(parse_tower(replace_once(good, "twr 1", "twr 9"))).message == "expected header 'twr 1'");
  CHECK(first_error(parse_tower(replace_once(good, "twr 1\n", ""))).message == "expected header 'twr 1'");
  CHECK(first_error(parse_tower(replace_once(good, "tower minimal = Gt ; f\n", ""))).message == "no tower statement");
  CHECK(first_error(parse_tower(replace_once(good, "  edge e4 -> e deg 1\n", ""))).message ==
        "edge 'e4' of G is not mapped by f");

  std::string loop = "twr 1\nlengths l\ngraph K\n  vertex a\n  edge e a -- a len l\ngraph G\n  vertex b\n";
  for (int i = 1; i <= 4; ++i) loop += "  edge g" + std::to_string(i) + " b -- b len auto\n";
  loop += "map f G -> K\n  vertex b -> a deg 4\n";
  std::string oriented = loop, ambiguous = loop;
  for (int i = 1; i <= 4; ++i) {
    oriented += "  edge g" + std::to_string(i) + " -> e deg 1 same\n";
    ambiguous += "  edge g" + std::to_string(i) + " -> e deg 1\n";
  }
  oriented += "cover Gt over G dashed g1\ntower L = Gt ; f\n";
  ambiguous += "cover Gt over G dashed g1\ntower L = Gt ; f\n";
  ParseResult ok = parse_tower(oriented);
  CHECK_MESSAGE(ok.ok(), (ok.diagnostics.empty() ? "" : ok.diagnostics[0].to_string()));
  CHECK(first_error(parse_tower(ambiguous)).message.rfind("ambiguous orientation", 0) == 0);
}

TEST_CASE("every fixture except the malformed one parses") {
  auto names = all_fixture_names();
  CHECK(names.size() >= 15);
  for (const auto& name : names) {
    ParseResult r = parse_tower_file(fixture_path(name));
    CHECK_MESSAGE(r.ok() == (name != "bad_deg"), name);
  }
  ParseResult missing = parse_tower_file(fixture_path("no_such_file"));
  CHECK_FALSE(missing.ok());
  CHECK_FALSE(missing.diagnostics.empty());
}

TEST_CASE("serialization round trips on the fixtures") {
  for (const auto& name : all_fixture_names()) {
    if (name == "bad_deg") continue;
    INFO(name);
    check_round_trip(load_fixture(name));
  }
}

TEST_CASE("serialization writes explicit tops for constructed towers") {
  SplitOutput s = split(load_fixture("ex1"));
  for (const Tower& t : s.towers) {
    std::string text = serialize_tower(t);
    CHECK(text.find("cover ") == std::string::npos);
    CHECK(text.rfind("twr 1\n", 0) == 0);
    check_round_trip(t);
  }
}

TEST_CASE("property: serialization round trips on random towers") {
  Rng rng(55);
  for (int iter = 0; iter < 30; ++iter) {
    Graph base = random_base(rng, 2 + static_cast<int>(rng() % 3), static_cast<int>(rng() % 2));
    check_round_trip(random_octuple_quotient(rng, base));
  }
  for (int iter = 0; iter < 5; ++iter) check_round_trip(random_disconnected_top_tower(rng));
}

TEST_CASE("Graphviz export") {
  Tower t = load_fixture("ex1");
  CHECK(parse_layer("mid") == Layer::Mid);
  CHECK_FALSE(parse_layer("middle").has_value());
  struct Expect {
    Layer layer;
    const Graph& g;
    std::size_t dashed;
  };
  for (const Expect& e : {Expect{Layer::Base, t.base, 0}, Expect{Layer::Mid, t.mid, 1}, Expect{Layer::Top, t.top, 2}}) {
    std::string dot = export_dot(t, e.layer);
    CHECK(dot.rfind("graph \"" + e.g.name + "\" {", 0) == 0);
    CHECK(count(dot, " -- ") == e.g.num_edges());
    CHECK(count(dot, "\n") == e.g.num_vertices() + e.g.num_edges() + 2);
    CHECK(count(dot, "style=dashed") == e.dashed);
    CHECK(export_dot(t, e.layer) == dot);
  }
  std::string mid = export_dot(t, Layer::Mid);
  CHECK(mid.find("[label=\"g1 l3\", penwidth=1, style=dashed]") != std::string::npos);
  CHECK(mid.find("[penwidth=3]") != std::string::npos);
}
