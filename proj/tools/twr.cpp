#include "twr/error.hpp"
#include "twr/intlat.hpp"
#include "twr/ngonal.hpp"
#include "twr/prym.hpp"
#include "twr/towerio.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Outcome {
  std::string status = "ok";  // ok | fail | error
  json data = json::object();
  std::vector<twr::Diagnostic> diagnostics;
  std::vector<std::string> codes;  // per diagnostic, empty when not from a library error
  std::string text;                // human-readable stdout
  bool echoed = false;             // diagnostics already part of text
  int exit_code() const { return status == "ok" ? 0 : 1; }

  void error(const std::string& code, const std::string& message) {
    status = "error";
    twr::Diagnostic d;
    d.message = code.empty() ? message : code + ": " + message;
    diagnostics.push_back(d);
    codes.push_back(code);
  }
  void warn(const std::string& message) {
    twr::Diagnostic d;
    d.severity = "warning";
    d.message = message;
    diagnostics.push_back(d);
    codes.push_back("");
  }
};

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw twr::Error("InvalidArgument", "cannot write '" + path.string() + "'");
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw twr::Error("InvalidArgument", "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Parses the tower or records its diagnostics.
std::optional<twr::Tower> load(const std::string& path, Outcome& o) {
  twr::ParseResult r = twr::parse_tower_file(path);
  for (const auto& d : r.diagnostics) {
    o.diagnostics.push_back(d);
    o.codes.push_back(d.severity == "error" ? "ParseError" : "");
  }
  if (!r.ok()) o.status = "error";
  return r.tower;
}

std::vector<std::vector<std::string>> matrix_rows(const twr::IntMatrix& m) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    rows.emplace_back();
    for (std::size_t j = 0; j < m.cols(); ++j) rows.back().push_back(m(i, j).str());
  }
  return rows;
}

json gram_json(const twr::GramMatrix& g, const std::vector<std::string>& order) {
  json rows = json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < g.size(); ++j) row.push_back(g(i, j).to_string(order));
    rows.push_back(row);
  }
  return rows;
}

std::string yes_no(bool b) { return b ? "pass" : "FAIL"; }

void cmd_validate(const std::string& file, Outcome& o) {
  auto t = load(file, o);
  if (!t) return;
  twr::GenericReport g = twr::is_generic(*t);
  o.data = {{"tower", t->name},
            {"degree", t->n()},
            {"total_degree", 2 * t->n()},
            {"metric", t->is_metric()},
            {"generic", g.generic},
            {"top", {{"vertices", t->top.num_vertices()}, {"edges", t->top.num_edges()}}},
            {"mid", {{"vertices", t->mid.num_vertices()}, {"edges", t->mid.num_edges()}}},
            {"base", {{"vertices", t->base.num_vertices()}, {"edges", t->base.num_edges()}}}};
  std::ostringstream s;
  s << "valid: tower " << t->name << ", degree " << t->n() << " (" << 2 * t->n() << " from the top), " << (g.generic ? "generic" : "not generic");
  if (!g.generic) s << " (" << g.reason << ")";
  s << "\n";
  o.text = s.str();
}

void cmd_construct(const std::string& file, long n, const std::string& out_dir, bool do_split, Outcome& o) {
  auto t = load(file, o);
  if (!t) return;
  fs::path dir(out_dir);
  if (do_split && n == 4 && twr::is_orientable(*t)) {
    twr::SplitOutput s = twr::split(*t);
    json files = json::array();
    for (int i = 0; i < 2; ++i) {
      fs::path path = dir / ("out" + std::to_string(i + 1) + ".twr");
      write_file(path, twr::serialize_tower(s.towers[i]));
      files.push_back(path.string());
      o.text += "wrote " + path.string() + "\n";
    }
    o.data = {{"n", n}, {"split", true}, {"donagi_vertices", s.donagi.graph.num_vertices()},
              {"donagi_edges", s.donagi.graph.num_edges()}, {"files", files}};
    return;
  }
  if (do_split) o.warn(n != 4 ? "--split requires n = 4; writing the unsplit construction"
                              : "tower is not orientable; writing the unsplit construction");
  twr::DonagiOutput d = twr::donagi_construct(*t, n);
  fs::path path = dir / "p.twr";
  write_file(path, twr::serialize_tower(twr::donagi_tower(d)));
  o.text = "wrote " + path.string() + "\n";
  o.data = {{"n", n}, {"split", false}, {"donagi_vertices", d.graph.num_vertices()},
            {"donagi_edges", d.graph.num_edges()}, {"files", json::array({path.string()})}};
}

void cmd_orientable(const std::string& file, Outcome& o) {
  auto t = load(file, o);
  if (!t) return;
  bool orientable = twr::is_orientable(*t);
  o.data = {{"orientable", orientable}};
  o.text = orientable ? "orientable\n" : "non-orientable\n";
}

void cmd_triality(const std::string& file, Outcome& o) {
  auto t = load(file, o);
  if (!t) return;
  twr::TrialityReport r = twr::triality_check(*t);
  o.data = {{"passed", r.passed},
            {"out1_reproduces", r.isomorphic[0]},
            {"out2_reproduces", r.isomorphic[1]},
            {"canonical_maps", r.canonical_maps},
            {"detail", r.detail}};
  std::ostringstream s;
  s << "out1: construction returns {input, out2}: " << yes_no(r.isomorphic[0]) << "\n";
  s << "out2: construction returns {input, out1}: " << yes_no(r.isomorphic[1]) << "\n";
  s << "canonical maps: " << yes_no(r.canonical_maps) << "\n";
  if (!r.detail.empty()) s << r.detail << "\n";
  s << "triality: " << (r.passed ? "pass" : "FAIL") << "\n";
  o.text = s.str();
  if (!r.passed) o.status = "fail";
}

void cmd_gram(const std::string& file, const std::string& of, Outcome& o) {
  auto t = load(file, o);
  if (!t) return;
  twr::Tower target = *t;
  if (of != "input") target = twr::split(*t).towers[of == "out1" ? 0 : 1];
  twr::PrymLattice p = twr::prym_lattice(target);
  o.data = {{"of", of}, {"rank", p.rank()}, {"gram", gram_json(p.gram, t->variables)},
            {"text", p.gram.to_string(t->variables)}};
  o.text = p.gram.to_string(t->variables) + "\n";
}

void cmd_congruent(const std::string& f1, const std::string& f2, int bound, Outcome& o) {
  twr::GramMatrix g1 = twr::parse_gram_matrix(read_file(f1));
  twr::GramMatrix g2 = twr::parse_gram_matrix(read_file(f2));
  if (g1.size() != g2.size()) throw twr::Error("DimensionMismatch", "Gram matrices have different sizes");
  auto w = twr::congruence_search(g1, g2, bound);
  o.data = {{"bound", bound}, {"found", w.has_value()}};
  if (w) {
    o.data["witness"] = matrix_rows(*w);
    o.text = twr::format_matrix(*w) + "\n";
  } else {
    o.data["witness"] = nullptr;
    o.text = "none within bound " + std::to_string(bound) + "\n";
    o.status = "fail";
  }
}

void cmd_psi(const std::string& file, Outcome& o) {
  auto t = load(file, o);
  if (!t) return;
  twr::PsiReport r = twr::prym_isomorphism_check(*t);
  o.data = {{"passed", r.passed}, {"input_gram", r.input_gram.to_string(t->variables)}, {"outputs", json::array()}};
  std::ostringstream s;
  for (int i = 0; i < 2; ++i) {
    json entry = {{"output", "out" + std::to_string(i + 1)}};
    s << "out" << i + 1 << ": ";
    if (r.factors[i]) {
      entry["psi"] = matrix_rows(r.factors[i]->psi);
      entry["isometry"] = r.factors[i]->isometry;
      entry["output_gram"] = r.output_grams[i].to_string(t->variables);
      s << "psi = " << twr::format_matrix(r.factors[i]->psi)
        << (r.factors[i]->isometry ? " (isometry)" : " (not an isometry)") << "\n";
    }
    if (!r.errors[i].empty()) {
      entry["error"] = r.errors[i];
      std::string code = r.errors[i].substr(0, r.errors[i].find(':'));
      o.codes.push_back(code);
      o.diagnostics.push_back({"error", r.errors[i], 0, 0});
      if (!r.factors[i]) s << r.errors[i] << "\n";
      o.echoed = true;
    }
    o.data["outputs"].push_back(entry);
  }
  o.text = s.str();
  if (!r.passed) o.status = "fail";
}

void cmd_contract(const std::string& file, const std::string& edge, const std::string& out, Outcome& o) {
  auto t = load(file, o);
  if (!t) return;
  auto e = t->base.find_edge(edge);
  if (!e) throw twr::Error("InvalidArgument", "unknown base edge '" + edge + "'");
  twr::Tower c = twr::contract_tower(*t, *e);
  write_file(out, twr::serialize_tower(c));
  o.data = {{"edge", edge}, {"file", out}};
  o.text = "wrote " + out + "\n";
}

void cmd_predict(const std::string& file, Outcome& o) {
  auto t = load(file, o);
  if (!t) return;
  twr::ConnectivityPrediction p = twr::predict_connectivity(*t);
  o.data = {{"group_order", p.group_order},
            {"predicted_top_components", p.predicted_top_components},
            {"actual_top_components", p.actual_top_components},
            {"predicted_donagi_components", p.predicted_donagi_components},
            {"actual_donagi_components", p.actual_donagi_components},
            {"agrees", p.agrees()}};
  std::ostringstream s;
  s << "monodromy group order: " << p.group_order << "\n"
    << "top components: predicted " << p.predicted_top_components << ", actual " << p.actual_top_components << "\n"
    << "construction components: predicted " << p.predicted_donagi_components << ", actual "
    << p.actual_donagi_components << "\n"
    << (p.agrees() ? "agrees" : "DISAGREES") << "\n";
  o.text = s.str();
  if (!p.agrees()) o.status = "fail";
}

void cmd_dot(const std::string& file, const std::string& layer, const std::string& out, Outcome& o) {
  auto t = load(file, o);
  if (!t) return;
  auto l = twr::parse_layer(layer);
  if (!l) throw twr::Error("InvalidArgument", "layer must be base, mid or top");
  std::string dot = twr::export_dot(*t, *l);
  if (out.empty()) {
    o.text = dot;
  } else {
    write_file(out, dot);
    o.text = "wrote " + out + "\n";
  }
  o.data = {{"layer", layer}, {"file", out.empty() ? json(nullptr) : json(out)}};
}

void cmd_check(const std::string& file, Outcome& o) {
  auto t = load(file, o);
  if (!t) return;
  twr::SuiteReport r = twr::identity_suite(*t);
  o.data = {{"passed", r.passed},
            {"base_is_tree", r.base_is_tree},
            {"input_dimension", r.input_dimension},
            {"dimensions_agree", r.dimensions_agree},
            {"outputs", json::array()}};
  std::ostringstream s;
  s << "input Prym dimension: " << r.input_dimension << "\n";
  for (int i = 0; i < 2; ++i) {
    const auto& out = r.outputs[i];
    std::string name = "out" + std::to_string(i + 1);
    json entry = {{"output", name},
                  {"dimension", out.dimension},
                  {"prym_checked", out.prym_checked},
                  {"point_identities", out.point_identities},
                  {"four_identity", out.four_identity},
                  {"doubling", out.doubling},
                  {"psi_isometry", out.psi ? json(*out.psi) : json(nullptr)},
                  {"psi_error", out.psi_error},
                  {"detail", out.detail}};
    o.data["outputs"].push_back(entry);
    s << name << ": dimension " << out.dimension << "\n";
    s << "  composite identities on points: " << yes_no(out.point_identities) << "\n";
    if (!out.prym_checked) {
      s << "  " << out.detail << "\n";
      continue;
    }
    s << "  4 * identity on Prym lattices: " << yes_no(out.four_identity) << "\n";
    s << "  polarization doubling: " << yes_no(out.doubling) << "\n";
    if (out.psi)
      s << "  psi isometry: " << yes_no(*out.psi) << "\n";
    else
      s << "  psi: " << out.psi_error << (r.base_is_tree ? "" : " (base is not a tree)") << "\n";
    if (!out.detail.empty()) s << "  " << out.detail << "\n";
  }
  s << "dimensions agree: " << yes_no(r.dimensions_agree) << "\n";
  s << "check: " << (r.passed ? "pass" : "FAIL") << "\n";
  o.text = s.str();
  if (!r.passed) o.status = "fail";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Towers of metric graphs: n-gonal construction and Prym lattices"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Emit a single JSON object");

  std::string file, file2, of = "input", out, edge, layer = "base";
  long n = 4;
  int bound = 3;
  bool do_split = false;

  auto add = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_flag("--json", as_json, "Emit a single JSON object");
    return sub;
  };
  auto* validate = add("validate", "Parse and validate a tower file");
  validate->add_option("FILE", file)->required();
  auto* construct = add("construct", "Run the n-gonal construction");
  construct->add_option("FILE", file)->required();
  construct->add_option("--n", n, "Degree of the bottom map")->required();
  construct->add_option("--out", out, "Output directory")->required();
  construct->add_flag("--split", do_split, "Split into the two tetragonal outputs");
  auto* orientable = add("orientable", "Decide orientability");
  orientable->add_option("FILE", file)->required();
  auto* triality = add("triality", "Verify triality");
  triality->add_option("FILE", file)->required();
  auto* gram = add("gram", "Print a Prym Gram matrix");
  gram->add_option("FILE", file)->required();
  gram->add_option("--of", of, "input, out1 or out2")->check(CLI::IsMember({"input", "out1", "out2"}));
  auto* congruent = add("congruent", "Search for a unimodular congruence");
  congruent->add_option("G1FILE", file)->required();
  congruent->add_option("G2FILE", file2)->required();
  congruent->add_option("--bound", bound, "Entry bound")->check(CLI::PositiveNumber);
  auto* psi = add("psi", "Factor the correspondence on Prym lattices");
  psi->add_option("FILE", file)->required();
  auto* contract = add("contract", "Contract a base edge of a tower");
  contract->add_option("FILE", file)->required();
  contract->add_option("--edge", edge, "Base edge name")->required();
  contract->add_option("--out", out, "Output file")->required();
  auto* predict = add("predict", "Predict connectivity from the monodromy group");
  predict->add_option("FILE", file)->required();
  auto* dot = add("dot", "Export one layer as Graphviz text");
  dot->add_option("FILE", file)->required();
  dot->add_option("--layer", layer, "base, mid or top");
  dot->add_option("--out", out, "Output file (stdout when omitted)");
  auto* check = add("check", "Run the identity suite and dimension checks");
  check->add_option("FILE", file)->required();

  CLI11_PARSE(app, argc, argv);

  std::string command = app.get_subcommands().front()->get_name();
  Outcome o;
  try {
    if (command == "validate") cmd_validate(file, o);
    else if (command == "construct") cmd_construct(file, n, out, do_split, o);
    else if (command == "orientable") cmd_orientable(file, o);
    else if (command == "triality") cmd_triality(file, o);
    else if (command == "gram") cmd_gram(file, of, o);
    else if (command == "congruent") cmd_congruent(file, file2, bound, o);
    else if (command == "psi") cmd_psi(file, o);
    else if (command == "contract") cmd_contract(file, edge, out, o);
    else if (command == "predict") cmd_predict(file, o);
    else if (command == "dot") cmd_dot(file, layer, out, o);
    else if (command == "check") cmd_check(file, o);
  } catch (const twr::Error& e) {
    o.error(e.code(), e.what());
  } catch (const std::exception& e) {
    o.error("", e.what());
  }

  if (as_json) {
    json diagnostics = json::array();
    for (std::size_t i = 0; i < o.diagnostics.size(); ++i) {
      const auto& d = o.diagnostics[i];
      diagnostics.push_back({{"severity", d.severity},
                             {"code", o.codes[i]},
                             {"message", d.message},
                             {"line", d.line},
                             {"column", d.column}});
    }
    json report = {{"command", command},
                   {"input", command == "congruent" ? json::array({file, file2}) : json(file)},
                   {"status", o.status},
                   {"data", o.data},
                   {"diagnostics", diagnostics}};
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << o.text;
    if (!o.echoed)
      for (const auto& d : o.diagnostics) std::cerr << d.to_string() << "\n";
  }
  return o.exit_code();
}
