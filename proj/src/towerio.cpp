#include "twr/towerio.hpp"

#include "twr/error.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace twr {

std::string Diagnostic::to_string() const {
  std::string s;
  if (line) s += "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
  return s + severity + ": " + message;
}

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == ';') {
      out.push_back({";", i + 1});
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#' && line[i] != ';')
      ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || s == "--" || s == "->") return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'' || c == '+' || c == '-';
  });
}

struct GraphDecl {
  Graph graph;
  std::size_t line = 0;
  std::vector<std::size_t> edge_line;
  std::vector<bool> auto_length;
  std::vector<bool> has_length;
};

struct MapDecl {
  std::string name, src, dst;
  std::size_t line = 0;
  std::vector<std::optional<std::size_t>> vtarget;
  std::vector<std::optional<long>> vdeg;
  std::vector<std::size_t> vline;
  std::vector<std::optional<std::size_t>> etarget;
  std::vector<long> edeg;
  std::vector<std::optional<bool>> flip;
  std::vector<std::size_t> eline, ecol;
};

struct CoverDecl {
  std::string name, over;
  std::size_t line = 0;
  std::set<std::size_t> dashed;
};

struct TowerDecl {
  std::string name, upper, lower;
  std::size_t line = 0, upper_col = 0, lower_col = 0;
};

class Parser {
public:
  ParseResult run(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    bool header = false;
    while (std::getline(in, raw)) {
      ++line_;
      auto tokens = tokenize(raw);
      if (tokens.empty()) continue;
      bool indented = !raw.empty() && (raw[0] == ' ' || raw[0] == '\t');
      if (!header) {
        if (tokens.size() != 2 || tokens[0].text != "twr" || tokens[1].text != "1") {
          error("expected header 'twr 1'", tokens[0].column);
          return finish();
        }
        header = true;
        continue;
      }
      if (indented) block_line(tokens);
      else statement(tokens);
    }
    if (!header) error("expected header 'twr 1'", 1);
    if (diags_.empty()) assemble();
    return finish();
  }

private:
  enum class Block { None, Graph, Map };

  void error(const std::string& message, std::size_t column, std::size_t line = 0) {
    diags_.push_back({"error", message, line ? line : line_, column});
  }

  ParseResult finish() {
    ParseResult r;
    r.diagnostics = diags_;
    if (diags_.empty()) r.tower = std::move(tower_);
    return r;
  }

  bool name_taken(const std::string& n) const {
    return graphs_.count(n) || maps_.count(n) || covers_.count(n);
  }

  void statement(const std::vector<Token>& t) {
    block_ = Block::None;
    const std::string& kw = t[0].text;
    if (kw == "lengths") {
      for (std::size_t i = 1; i < t.size(); ++i) {
        if (!is_identifier(t[i].text) || t[i].text == kUnitVariable) {
          error("invalid length variable '" + t[i].text + "'", t[i].column);
          continue;
        }
        if (std::find(variables_.begin(), variables_.end(), t[i].text) != variables_.end()) {
          error("length variable '" + t[i].text + "' declared twice", t[i].column);
          continue;
        }
        variables_.push_back(t[i].text);
      }
    } else if (kw == "graph") {
      if (t.size() != 2 || !is_identifier(t[1].text)) return error("expected 'graph <name>'", t[0].column);
      if (name_taken(t[1].text)) return error("name '" + t[1].text + "' already declared", t[1].column);
      GraphDecl g;
      g.graph.name = t[1].text;
      g.line = line_;
      graph_order_.push_back(t[1].text);
      current_ = t[1].text;
      graphs_[current_] = std::move(g);
      block_ = Block::Graph;
    } else if (kw == "map") {
      if (t.size() != 5 || t[3].text != "->" || !is_identifier(t[1].text))
        return error("expected 'map <name> <Src> -> <Dst>'", t[0].column);
      if (name_taken(t[1].text)) return error("name '" + t[1].text + "' already declared", t[1].column);
      for (std::size_t i : {2, 4})
        if (!graphs_.count(t[i].text)) return error("unknown graph '" + t[i].text + "'", t[i].column);
      MapDecl m;
      m.name = t[1].text;
      m.src = t[2].text;
      m.dst = t[4].text;
      m.line = line_;
      const Graph& s = graphs_[m.src].graph;
      m.vtarget.assign(s.num_vertices(), std::nullopt);
      m.vdeg.assign(s.num_vertices(), std::nullopt);
      m.vline.assign(s.num_vertices(), 0);
      m.etarget.assign(s.num_edges(), std::nullopt);
      m.edeg.assign(s.num_edges(), 0);
      m.flip.assign(s.num_edges(), std::nullopt);
      m.eline.assign(s.num_edges(), 0);
      m.ecol.assign(s.num_edges(), 0);
      current_ = m.name;
      maps_[current_] = std::move(m);
      block_ = Block::Map;
    } else if (kw == "cover") {
      if (t.size() < 4 || t[2].text != "over" || !is_identifier(t[1].text))
        return error("expected 'cover <name> over <Graph> dashed <edge>...'", t[0].column);
      if (name_taken(t[1].text)) return error("name '" + t[1].text + "' already declared", t[1].column);
      auto g = graphs_.find(t[3].text);
      if (g == graphs_.end()) return error("unknown graph '" + t[3].text + "'", t[3].column);
      CoverDecl c;
      c.name = t[1].text;
      c.over = t[3].text;
      c.line = line_;
      std::size_t i = 4;
      if (i < t.size()) {
        if (t[i].text != "dashed") return error("expected 'dashed'", t[i].column);
        ++i;
      }
      for (; i < t.size(); ++i) {
        auto e = g->second.graph.find_edge(t[i].text);
        if (!e) {
          error("unknown edge '" + t[i].text + "' of graph " + c.over, t[i].column);
          continue;
        }
        c.dashed.insert(*e);
      }
      covers_[c.name] = std::move(c);
    } else if (kw == "tower") {
      if (t.size() != 6 || t[2].text != "=" || t[4].text != ";" || !is_identifier(t[1].text))
        return error("expected 'tower <name> = <cover-or-map> ; <map>'", t[0].column);
      if (tower_decl_) return error("only one tower statement is allowed", t[0].column);
      if (!maps_.count(t[3].text) && !covers_.count(t[3].text))
        return error("unknown cover or map '" + t[3].text + "'", t[3].column);
      if (!maps_.count(t[5].text)) return error("unknown map '" + t[5].text + "'", t[5].column);
      tower_decl_ = TowerDecl{t[1].text, t[3].text, t[5].text, line_, t[3].column, t[5].column};
    } else {
      error("unknown statement '" + kw + "'", t[0].column);
    }
  }

  void block_line(const std::vector<Token>& t) {
    if (block_ == Block::Graph) graph_line(t);
    else if (block_ == Block::Map) map_line(t);
    else error("indented line outside a graph or map block", t[0].column);
  }

  void graph_line(const std::vector<Token>& t) {
    GraphDecl& g = graphs_[current_];
    if (t[0].text == "vertex") {
      if (t.size() < 2) return error("expected at least one vertex name", t[0].column);
      for (std::size_t i = 1; i < t.size(); ++i) {
        if (!is_identifier(t[i].text)) {
          error("invalid vertex name '" + t[i].text + "'", t[i].column);
          continue;
        }
        if (g.graph.find_vertex(t[i].text)) {
          error("vertex '" + t[i].text + "' declared twice", t[i].column);
          continue;
        }
        g.graph.add_vertex(t[i].text);
      }
    } else if (t[0].text == "edge") {
      if (t.size() < 5 || t[3].text != "--") return error("expected 'edge <id> <v1> -- <v2> [len <length>]'", t[0].column);
      if (!is_identifier(t[1].text)) return error("invalid edge name '" + t[1].text + "'", t[1].column);
      if (g.graph.find_edge(t[1].text)) return error("edge '" + t[1].text + "' declared twice", t[1].column);
      auto a = g.graph.find_vertex(t[2].text);
      if (!a) return error("unknown vertex '" + t[2].text + "'", t[2].column);
      auto b = g.graph.find_vertex(t[4].text);
      if (!b) return error("unknown vertex '" + t[4].text + "'", t[4].column);
      LinearForm len;
      bool has = false, automatic = false;
      if (t.size() > 5) {
        if (t[5].text != "len") return error("expected 'len'", t[5].column);
        if (t.size() == 6) return error("bad length: missing value", t[5].column);
        has = true;
        if (t.size() == 7 && t[6].text == "auto") {
          automatic = true;
        } else {
          std::string expr;
          for (std::size_t i = 6; i < t.size(); ++i) expr += t[i].text;
          std::string err;
          std::size_t offset = 0;
          if (!parse_linear_form(expr, len, err, offset)) return error("bad length: " + err, t[6].column);
          for (const auto& [v, c] : len.terms())
            if (v != kUnitVariable && std::find(variables_.begin(), variables_.end(), v) == variables_.end())
              return error("bad length: unknown length variable '" + v + "'", t[6].column);
          if (!len.is_positive()) return error("bad length: length must be positive", t[6].column);
        }
      }
      std::size_t e = g.graph.num_edges();
      g.graph.edge_names.push_back(t[1].text);
      g.graph.root.push_back(*a);
      g.graph.root.push_back(*b);
      g.graph.length.push_back(len);
      g.edge_line.push_back(line_);
      g.auto_length.push_back(automatic);
      g.has_length.push_back(has);
      (void)e;
    } else {
      error("expected 'vertex' or 'edge' in graph block", t[0].column);
    }
  }

  void map_line(const std::vector<Token>& t) {
    MapDecl& m = maps_[current_];
    const Graph& s = graphs_[m.src].graph;
    const Graph& d = graphs_[m.dst].graph;
    if (t[0].text == "vertex") {
      if (t.size() != 4 && t.size() != 6) return error("expected 'vertex <id> -> <id> [deg <k>]'", t[0].column);
      if (t[2].text != "->") return error("expected '->'", t[2].column);
      auto v = s.find_vertex(t[1].text);
      if (!v) return error("unknown vertex '" + t[1].text + "' of graph " + m.src, t[1].column);
      auto w = d.find_vertex(t[3].text);
      if (!w) return error("unknown vertex '" + t[3].text + "' of graph " + m.dst, t[3].column);
      if (m.vtarget[*v]) return error("vertex '" + t[1].text + "' mapped twice", t[1].column);
      m.vtarget[*v] = *w;
      m.vline[*v] = line_;
      if (t.size() == 6) {
        if (t[4].text != "deg") return error("expected 'deg'", t[4].column);
        auto k = parse_degree(t[5]);
        if (!k) return;
        m.vdeg[*v] = *k;
      }
    } else if (t[0].text == "edge") {
      if (t.size() != 6 && t.size() != 7) return error("expected 'edge <id> -> <id> deg <k> [same|flip]'", t[0].column);
      if (t[2].text != "->") return error("expected '->'", t[2].column);
      if (t[4].text != "deg") return error("expected 'deg'", t[4].column);
      auto x = s.find_edge(t[1].text);
      if (!x) return error("unknown edge '" + t[1].text + "' of graph " + m.src, t[1].column);
      auto y = d.find_edge(t[3].text);
      if (!y) return error("unknown edge '" + t[3].text + "' of graph " + m.dst, t[3].column);
      if (m.etarget[*x]) return error("edge '" + t[1].text + "' mapped twice", t[1].column);
      auto k = parse_degree(t[5]);
      if (!k) return;
      m.etarget[*x] = *y;
      m.edeg[*x] = *k;
      m.eline[*x] = line_;
      m.ecol[*x] = t[0].column;
      if (t.size() == 7) {
        if (t[6].text == "same") m.flip[*x] = false;
        else if (t[6].text == "flip") m.flip[*x] = true;
        else return error("expected 'same' or 'flip'", t[6].column);
      }
    } else {
      error("expected 'vertex' or 'edge' in map block", t[0].column);
    }
  }

  std::optional<long> parse_degree(const Token& tok) {
    long k = 0;
    try {
      std::size_t used = 0;
      k = std::stol(tok.text, &used);
      if (used != tok.text.size()) throw std::invalid_argument(tok.text);
    } catch (const std::exception&) {
      error("degree must be an integer", tok.column);
      return std::nullopt;
    }
    if (k <= 0) {
      error("degree must be positive", tok.column);
      return std::nullopt;
    }
    return k;
  }

  // Builds the morphism of a map declaration; reports problems at their lines.
  std::optional<Morphism> build_map(const MapDecl& m) {
    const Graph& s = graphs_[m.src].graph;
    const Graph& d = graphs_[m.dst].graph;
    Morphism r;
    bool ok = true;
    for (std::size_t v = 0; v < s.num_vertices(); ++v)
      if (!m.vtarget[v]) {
        error("vertex '" + s.vertex_names[v] + "' of " + m.src + " is not mapped by " + m.name, 1, m.line);
        ok = false;
      }
    for (std::size_t e = 0; e < s.num_edges(); ++e)
      if (!m.etarget[e]) {
        error("edge '" + s.edge_names[e] + "' of " + m.src + " is not mapped by " + m.name, 1, m.line);
        ok = false;
      }
    if (!ok) return std::nullopt;
    for (std::size_t v = 0; v < s.num_vertices(); ++v) r.vmap.push_back(*m.vtarget[v]);
    r.hmap.resize(s.num_half_edges());
    r.edeg = m.edeg;
    for (std::size_t e = 0; e < s.num_edges(); ++e) {
      std::size_t y = *m.etarget[e];
      std::size_t a = r.vmap[s.root[2 * e]], b = r.vmap[s.root[2 * e + 1]];
      std::size_t c = d.root[2 * y], dd = d.root[2 * y + 1];
      bool flip;
      if (m.flip[e]) {
        flip = *m.flip[e];
      } else if (c == dd) {
        error("ambiguous orientation: edge '" + s.edge_names[e] + "' maps to loop '" + d.edge_names[y] +
                  "'; add 'same' or 'flip'", m.ecol[e], m.eline[e]);
        ok = false;
        continue;
      } else if (a == c && b == dd) {
        flip = false;
      } else if (a == dd && b == c) {
        flip = true;
      } else {
        error("endpoints of edge '" + s.edge_names[e] + "' do not map to the endpoints of '" + d.edge_names[y] + "'",
              m.ecol[e], m.eline[e]);
        ok = false;
        continue;
      }
      r.hmap[2 * e] = 2 * y + (flip ? 1 : 0);
      r.hmap[2 * e + 1] = 2 * y + (flip ? 0 : 1);
    }
    if (!ok) return std::nullopt;
    auto src_tangent = s.tangent_spaces();
    auto dst_tangent = d.tangent_spaces();
    for (std::size_t v = 0; v < s.num_vertices(); ++v) {
      if (m.vdeg[v]) {
        r.vdeg.push_back(*m.vdeg[v]);
        continue;
      }
      const auto& targets = dst_tangent[r.vmap[v]];
      if (targets.empty()) {
        error("degree of vertex '" + s.vertex_names[v] + "' must be given: its image is isolated", 1, m.vline[v]);
        ok = false;
        r.vdeg.push_back(1);
        continue;
      }
      long sum = 0;
      for (std::size_t h : src_tangent[v])
        if (r.hmap[h] == targets.front()) sum += r.edeg[h / 2];
      if (sum == 0) {
        error("vertex '" + s.vertex_names[v] + "' has no edge over '" +
                  point_name(d, Point::half_edge(targets.front())) + "'; harmonicity fails",
              1, m.vline[v]);
        ok = false;
        r.vdeg.push_back(1);
        continue;
      }
      r.vdeg.push_back(sum);
    }
    if (!ok) return std::nullopt;
    return r;
  }

  // Fills `len auto` edges and checks that length declarations are uniform.
  bool resolve_lengths(GraphDecl& g, const Graph* target, const Morphism* m) {
    bool any = std::any_of(g.has_length.begin(), g.has_length.end(), [](bool b) { return b; });
    bool all = std::all_of(g.has_length.begin(), g.has_length.end(), [](bool b) { return b; });
    if (!any) {
      g.graph.length.clear();
      return true;
    }
    if (!all) {
      for (std::size_t e = 0; e < g.graph.num_edges(); ++e)
        if (!g.has_length[e]) {
          error("bad length: edge '" + g.graph.edge_names[e] + "' has no length while other edges of " + g.graph.name + " do",
                1, g.edge_line[e]);
          return false;
        }
    }
    for (std::size_t e = 0; e < g.graph.num_edges(); ++e) {
      if (!g.auto_length[e]) continue;
      if (!target || !target->is_metric()) {
        error("bad length: 'len auto' needs a map to a graph with lengths", 1, g.edge_line[e]);
        return false;
      }
      g.graph.length[e] = target->length[m->edge_image(e)] / Rat(m->edeg[e]);
    }
    return true;
  }

  void assemble() {
    if (!tower_decl_) {
      error("no tower statement", 1, line_ ? line_ : 1);
      return;
    }
    const TowerDecl& td = *tower_decl_;
    const MapDecl& lower = maps_[td.lower];
    GraphDecl& base = graphs_[lower.dst];
    GraphDecl& mid = graphs_[lower.src];
    auto f = build_map(lower);
    if (!f) return;
    if (!resolve_lengths(base, nullptr, nullptr)) return;
    if (!resolve_lengths(mid, &base.graph, &*f)) return;
    if (auto v = validate(mid.graph, base.graph, *f)) {
      std::size_t at = v->vertex ? lower.vline[*v->vertex] : lower.line;
      error(v->message, 1, at);
      return;
    }

    Graph top;
    Morphism pi;
    std::optional<std::set<std::size_t>> signed_edges;
    if (covers_.count(td.upper)) {
      const CoverDecl& c = covers_[td.upper];
      if (c.over != lower.src) {
        error("cover '" + c.name + "' is over " + c.over + " but map '" + lower.name + "' starts at " + lower.src,
              td.upper_col, td.line);
        return;
      }
      DoubleCover dc = signed_cover(mid.graph, c.dashed);
      top = std::move(dc.top);
      pi = std::move(dc.pi);
      signed_edges = c.dashed;
    } else {
      const MapDecl& upper = maps_[td.upper];
      if (upper.dst != lower.src) {
        error("map '" + upper.name + "' ends at " + upper.dst + " but map '" + lower.name + "' starts at " + lower.src,
              td.upper_col, td.line);
        return;
      }
      if (upper.src == lower.dst || upper.src == lower.src) {
        error("the three graphs of a tower must be distinct", td.upper_col, td.line);
        return;
      }
      auto p = build_map(upper);
      if (!p) return;
      GraphDecl& topd = graphs_[upper.src];
      if (!resolve_lengths(topd, &mid.graph, &*p)) return;
      if (auto v = validate(topd.graph, mid.graph, *p)) {
        std::size_t at = v->vertex ? upper.vline[*v->vertex] : upper.line;
        error(v->message, 1, at);
        return;
      }
      top = topd.graph;
      pi = std::move(*p);
    }
    try {
      tower_ = make_tower(td.name, std::move(top), mid.graph, base.graph, std::move(pi), std::move(*f));
      tower_->variables = variables_;
      tower_->signed_edges = signed_edges;
    } catch (const Error& e) {
      error(e.what(), 1, td.line);
    }
  }

  std::size_t line_ = 0;
  Block block_ = Block::None;
  std::string current_;
  std::vector<std::string> variables_;
  std::vector<std::string> graph_order_;
  std::map<std::string, GraphDecl> graphs_;
  std::map<std::string, MapDecl> maps_;
  std::map<std::string, CoverDecl> covers_;
  std::optional<TowerDecl> tower_decl_;
  std::optional<Tower> tower_;
  std::vector<Diagnostic> diags_;
};

std::vector<std::string> length_variables(const Tower& t) {
  if (!t.variables.empty()) return t.variables;
  std::set<std::string> vars;
  for (const auto& l : t.base.length)
    for (const auto& [v, c] : l.terms())
      if (v != kUnitVariable) vars.insert(v);
  return {vars.begin(), vars.end()};
}

void write_graph(std::ostringstream& out, const Graph& g, const std::string& name,
                 const std::vector<std::string>& order) {
  out << "graph " << name << "\n";
  for (std::size_t i = 0; i < g.num_vertices(); i += 8) {
    out << "  vertex";
    for (std::size_t v = i; v < std::min(i + 8, g.num_vertices()); ++v) out << " " << g.vertex_names[v];
    out << "\n";
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    out << "  edge " << g.edge_names[e] << " " << g.vertex_names[g.root[2 * e]] << " -- "
        << g.vertex_names[g.root[2 * e + 1]];
    if (g.is_metric()) out << " len " << g.length[e].to_string(order);
    out << "\n";
  }
}

void write_map(std::ostringstream& out, const std::string& name, const Graph& s, const std::string& sname,
               const Graph& d, const std::string& dname, const Morphism& m) {
  out << "map " << name << " " << sname << " -> " << dname << "\n";
  for (std::size_t v = 0; v < s.num_vertices(); ++v)
    out << "  vertex " << s.vertex_names[v] << " -> " << d.vertex_names[m.vmap[v]] << " deg " << m.vdeg[v] << "\n";
  for (std::size_t e = 0; e < s.num_edges(); ++e)
    out << "  edge " << s.edge_names[e] << " -> " << d.edge_names[m.edge_image(e)] << " deg " << m.edeg[e] << " "
        << (m.flips(e) ? "flip" : "same") << "\n";
}

}  // namespace

ParseResult parse_tower(const std::string& text) { return Parser().run(text); }

ParseResult parse_tower_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.diagnostics.push_back({"error", "cannot read file '" + path + "'", 0, 0});
    return r;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_tower(buf.str());
}

std::string serialize_tower(const Tower& t) {
  std::string kname = t.base.name, gname = t.mid.name, tname = t.top.name;
  std::set<std::string> names{kname, gname, tname};
  if (names.size() != 3 || !is_identifier(kname) || !is_identifier(gname) || !is_identifier(tname)) {
    kname = "K";
    gname = "G";
    tname = "Gt";
  }
  std::string tower_name = is_identifier(t.name) ? t.name : "T";
  auto order = length_variables(t);
  std::ostringstream out;
  out << "twr 1\n";
  if (t.is_metric() && !order.empty()) {
    out << "lengths";
    for (const auto& v : order) out << " " << v;
    out << "\n";
  }
  write_graph(out, t.base, kname, order);
  write_graph(out, t.mid, gname, order);
  if (t.signed_edges) {
    out << "cover pi over " << gname << " dashed";
    for (std::size_t e : *t.signed_edges) out << " " << t.mid.edge_names[e];
    out << "\n";
  } else {
    write_graph(out, t.top, tname, order);
    write_map(out, "pi", t.top, tname, t.mid, gname, t.pi);
  }
  write_map(out, "f", t.mid, gname, t.base, kname, t.f);
  out << "tower " << tower_name << " = pi ; f\n";
  return out.str();
}

std::optional<Layer> parse_layer(const std::string& text) {
  if (text == "base") return Layer::Base;
  if (text == "mid") return Layer::Mid;
  if (text == "top") return Layer::Top;
  return std::nullopt;
}

std::string export_dot(const Tower& t, Layer layer) {
  const Graph& g = layer == Layer::Base ? t.base : layer == Layer::Mid ? t.mid : t.top;
  Morphism down = layer == Layer::Base ? identity_morphism(t.base) : layer == Layer::Mid ? t.f : t.top_to_base();
  auto dashed = [&](std::size_t e) {
    if (!t.signed_edges || layer == Layer::Base) return false;
    std::size_t mid_edge = layer == Layer::Mid ? e : t.pi.edge_image(e);
    return t.signed_edges->count(mid_edge) > 0;
  };
  auto order = length_variables(t);
  auto quote = [](const std::string& s) { return "\"" + s + "\""; };
  std::ostringstream out;
  out << "graph " << quote(g.name) << " {\n";
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    out << "  " << quote(g.vertex_names[v]) << " [penwidth=" << down.vdeg[v] << "];\n";
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    out << "  " << quote(g.vertex_names[g.root[2 * e]]) << " -- " << quote(g.vertex_names[g.root[2 * e + 1]])
        << " [label=" << quote(g.is_metric() ? g.edge_names[e] + " " + g.length[e].to_string(order) : g.edge_names[e])
        << ", penwidth=" << down.edeg[e];
    if (dashed(e)) out << ", style=dashed";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace twr
