#include "twr/error.hpp"
#include "twr/ngonal.hpp"

#include <deque>
#include <numeric>
#include <set>
#include <unordered_set>

namespace twr {

namespace {

SignedPerm identity_perm() {
  SignedPerm p;
  for (std::uint8_t i = 0; i < 8; ++i) p[i] = i;
  return p;
}

// Signed transposition product: swaps indices a and b, and their negatives.
SignedPerm bitransposition(int a, int b) {
  SignedPerm p = identity_perm();
  auto neg = [](int i) { return (i + 4) % 8; };
  p[a] = static_cast<std::uint8_t>(b);
  p[b] = static_cast<std::uint8_t>(a);
  p[neg(a)] = static_cast<std::uint8_t>(neg(b));
  p[neg(b)] = static_cast<std::uint8_t>(neg(a));
  return p;
}

SignedPerm compose_perm(const SignedPerm& a, const SignedPerm& b) {
  SignedPerm c;
  for (int i = 0; i < 8; ++i) c[i] = a[b[i]];
  return c;
}

WD4Group build_wd4() {
  WD4Group g;
  // (1,2)(-1,-2), (1,3)(-1,-3), (1,4)(-1,-4), (1,-1)(2,-2)
  SignedPerm sign_flip = {4, 5, 2, 3, 0, 1, 6, 7};
  std::vector<SignedPerm> gens = {bitransposition(0, 1), bitransposition(0, 2), bitransposition(0, 3), sign_flip};
  std::map<SignedPerm, std::size_t> index;
  g.elements.push_back(identity_perm());
  index[identity_perm()] = 0;
  for (std::size_t i = 0; i < g.elements.size(); ++i)
    for (const auto& s : gens) {
      SignedPerm p = compose_perm(s, g.elements[i]);
      if (index.emplace(p, g.elements.size()).second) g.elements.push_back(p);
    }
  const std::size_t n = g.elements.size();
  g.mul.assign(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) g.mul[a][b] = index.at(compose_perm(g.elements[a], g.elements[b]));
  for (std::size_t a = 0; a < n; ++a) {
    const SignedPerm& p = g.elements[a];
    int moved = 0;
    for (int i = 0; i < 8; ++i) moved += p[i] != i;
    if (moved == 4 && g.mul[a][a] == 0) g.bitranspositions.push_back(a);
  }
  return g;
}

std::size_t count_orbits(std::size_t n, const std::vector<std::vector<std::size_t>>& actions) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& act : actions)
    for (std::size_t x = 0; x < n; ++x) parent[find(x)] = find(act[x]);
  std::size_t count = 0;
  for (std::size_t x = 0; x < n; ++x) count += find(x) == x;
  return count;
}

// Sign transversals: bit i of m set means -(i+1) is chosen instead of +(i+1).
std::vector<std::size_t> action_on_transversals(const SignedPerm& p) {
  std::vector<std::size_t> act(16);
  for (std::size_t m = 0; m < 16; ++m) {
    std::size_t image = 0;
    for (int i = 0; i < 4; ++i) {
      int idx = (m >> i & 1) ? i + 4 : i;
      int j = p[idx];
      if (j >= 4) image |= std::size_t{1} << (j - 4);
    }
    act[m] = image;
  }
  return act;
}

}  // namespace

std::size_t WD4Group::index_of(const SignedPerm& p) const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == p) return i;
  throw Error("InvalidArgument", "not an element of WD4");
}

std::bitset<192> WD4Group::generate(const std::vector<std::size_t>& generators) const {
  std::bitset<192> in;
  std::vector<std::size_t> list{0};
  in.set(0);
  for (std::size_t i = 0; i < list.size(); ++i)
    for (std::size_t s : generators) {
      std::size_t p = mul[s][list[i]];
      if (!in.test(p)) {
        in.set(p);
        list.push_back(p);
      }
    }
  return in;
}

const WD4Group& wd4() {
  static const WD4Group group = build_wd4();
  return group;
}

std::string format_signed_perm(const SignedPerm& p) {
  auto label = [](int i) { return std::string(i >= 4 ? "-" : "") + std::to_string(i % 4 + 1); };
  std::string out;
  std::vector<bool> seen(8, false);
  for (int i = 0; i < 8; ++i) {
    if (seen[i] || p[i] == i) continue;
    out += "(";
    int j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      out += (first ? "" : ",") + label(j);
      first = false;
      j = p[j];
    }
    out += ")";
  }
  return out.empty() ? "()" : out;
}

SubgroupCensus bitransposition_subgroup_census() {
  const WD4Group& g = wd4();
  SubgroupCensus census;
  std::unordered_set<std::bitset<192>> seen;
  std::deque<std::pair<std::bitset<192>, std::vector<std::size_t>>> queue;
  std::bitset<192> trivial;
  trivial.set(0);
  seen.insert(trivial);
  queue.push_back({trivial, {}});
  while (!queue.empty()) {
    auto [members, gens] = queue.front();
    queue.pop_front();
    ++census.subgroups;
    std::vector<std::vector<std::size_t>> actions;
    for (std::size_t s : gens) {
      std::vector<std::size_t> act(8);
      for (int i = 0; i < 8; ++i) act[i] = g.elements[s][i];
      actions.push_back(act);
    }
    if (count_orbits(8, actions) == 1) {
      ++census.transitive;
      census.transitive_order = members.count();
    }
    for (std::size_t b : g.bitranspositions) {
      if (members.test(b)) continue;
      auto next_gens = gens;
      next_gens.push_back(b);
      auto next = g.generate(next_gens);
      if (seen.insert(next).second) queue.push_back({next, next_gens});
    }
  }
  return census;
}

std::optional<SheetLabeling> octuple_quotient_witness(const Tower& t) {
  if (t.n() != 4) return std::nullopt;
  const Graph& K = t.base;
  const Morphism down = t.top_to_base();
  const std::size_t none = static_cast<std::size_t>(-1);

  std::vector<std::vector<std::size_t>> over_h(K.num_half_edges());
  for (std::size_t h = 0; h < t.top.num_half_edges(); ++h) over_h[down.hmap[h]].push_back(h);

  auto counts_ok_v = [&](const std::array<std::size_t, 8>& s) {
    std::map<std::size_t, long> c;
    for (std::size_t x : s) ++c[x];
    for (const auto& [v, n] : c)
      if (n != down.vdeg[v]) return false;
    return true;
  };
  auto counts_ok_h = [&](const std::array<std::size_t, 8>& s) {
    std::map<std::size_t, long> c;
    for (std::size_t x : s) ++c[x];
    for (const auto& [h, n] : c)
      if (n != down.edeg[h / 2]) return false;
    return true;
  };

  std::vector<std::optional<std::array<std::size_t, 8>>> sv(K.num_vertices()), sh(K.num_half_edges());

  // Canonical labeling at the first vertex.
  {
    std::array<std::size_t, 8> s0;
    std::size_t i = 0;
    for (const Point& y : fiber(t.mid, t.f, Point::vertex(0))) {
      std::size_t lift = fiber(t.top, t.pi, y).front().index;
      for (long c = 0; c < t.f.deg(y); ++c, ++i) {
        s0[i] = lift;
        s0[i + 4] = t.iota_v[lift];
      }
    }
    if (i != 4 || !counts_ok_v(s0)) return std::nullopt;
    sv[0] = s0;
  }

  auto search = [&](auto&& self) -> bool {
    std::size_t k = none;
    for (std::size_t h = 0; h < K.num_half_edges(); ++h)
      if (!sh[h] && sv[K.root[h]]) {
        k = h;
        break;
      }
    if (k == none) return true;
    const auto& sroot = *sv[K.root[k]];
    std::array<std::vector<std::size_t>, 4> options;
    for (int i = 0; i < 4; ++i)
      for (std::size_t h : over_h[k])
        if (t.top.root[h] == sroot[i]) options[i].push_back(h);
    for (int i = 0; i < 4; ++i)
      if (options[i].empty()) return false;
    std::array<std::size_t, 4> pick = {0, 0, 0, 0};
    const std::size_t km = Graph::mate(k);
    const std::size_t w = K.root[km];
    while (true) {
      std::array<std::size_t, 8> s;
      for (int i = 0; i < 4; ++i) {
        s[i] = options[i][pick[i]];
        s[i + 4] = t.iota_h[s[i]];
      }
      if (counts_ok_h(s)) {
        std::array<std::size_t, 8> sm, sw;
        for (int i = 0; i < 8; ++i) {
          sm[i] = Graph::mate(s[i]);
          sw[i] = t.top.root[sm[i]];
        }
        bool had_w = sv[w].has_value();
        bool ok = had_w ? *sv[w] == sw : counts_ok_v(sw);
        if (ok) {
          sh[k] = s;
          sh[km] = sm;
          if (!had_w) sv[w] = sw;
          if (self(self)) return true;
          sh[k].reset();
          sh[km].reset();
          if (!had_w) sv[w].reset();
        }
      }
      int pos = 3;
      while (pos >= 0 && ++pick[pos] == options[pos].size()) pick[pos--] = 0;
      if (pos < 0) break;
    }
    return false;
  };
  if (!search(search)) return std::nullopt;
  SheetLabeling out;
  for (auto& v : sv) out.vertex.push_back(*v);
  for (auto& h : sh) out.half_edge.push_back(*h);
  return out;
}

namespace {

const std::array<std::size_t, 8>& labels_at(const SheetLabeling& s, const Point& x) {
  return x.is_vertex() ? s.vertex[x.index] : s.half_edge[x.index];
}

bool fixes(const SignedPerm& p, const std::array<std::size_t, 8>& labels) {
  for (int i = 0; i < 8; ++i)
    if (labels[p[i]] != labels[i]) return false;
  return true;
}

}  // namespace

std::vector<std::size_t> fiber_stabilizer(const SheetLabeling& s, const Point& x) {
  const WD4Group& g = wd4();
  std::vector<std::size_t> out;
  for (std::size_t b : g.bitranspositions)
    if (fixes(g.elements[b], labels_at(s, x))) out.push_back(b);
  return out;
}

std::bitset<192> full_fiber_stabilizer(const SheetLabeling& s, const Point& x) {
  const WD4Group& g = wd4();
  std::bitset<192> out;
  for (std::size_t a = 0; a < g.elements.size(); ++a)
    if (fixes(g.elements[a], labels_at(s, x))) out.set(a);
  return out;
}

ConnectivityPrediction predict_connectivity(const Tower& t) {
  auto witness = octuple_quotient_witness(t);
  if (!witness) throw Error("NoWitnessLabeling", "the tower is not a fiberwise quotient of the trivial octuple cover");
  const WD4Group& g = wd4();
  std::set<std::size_t> gens;
  for (std::size_t v = 0; v < t.base.num_vertices(); ++v)
    for (std::size_t b : fiber_stabilizer(*witness, Point::vertex(v))) gens.insert(b);
  for (std::size_t h = 0; h < t.base.num_half_edges(); ++h)
    for (std::size_t b : fiber_stabilizer(*witness, Point::half_edge(h))) gens.insert(b);
  std::vector<std::size_t> gen_list(gens.begin(), gens.end());
  ConnectivityPrediction p;
  p.group_order = g.generate(gen_list).count();
  std::vector<std::vector<std::size_t>> on_n, on_m;
  for (std::size_t s : gen_list) {
    std::vector<std::size_t> act(8);
    for (int i = 0; i < 8; ++i) act[i] = g.elements[s][i];
    on_n.push_back(act);
    on_m.push_back(action_on_transversals(g.elements[s]));
  }
  p.predicted_top_components = count_orbits(8, on_n);
  p.predicted_donagi_components = count_orbits(16, on_m);
  p.actual_top_components = components(t.top).count;
  p.actual_donagi_components = components(donagi_construct(t, 4).graph).count;
  return p;
}

}  // namespace twr
