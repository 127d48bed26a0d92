#include "twr/iso.hpp"

#include <algorithm>
#include <map>

namespace twr {

namespace {

// Color refinement run jointly on the disjoint union of both structures.
std::vector<std::size_t> refine(const UnaryStructure& a, const UnaryStructure& b) {
  const std::size_t na = a.size();
  const std::size_t n = na + b.size();
  const std::size_t nf = a.functions.size();
  auto image = [&](std::size_t f, std::size_t x) {
    return x < na ? a.functions[f][x] : na + b.functions[f][x - na];
  };
  std::vector<std::vector<std::vector<std::size_t>>> pre(nf, std::vector<std::vector<std::size_t>>(n));
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t x = 0; x < n; ++x)
      if (image(f, x) != x) pre[f][image(f, x)].push_back(x);

  std::vector<std::size_t> color(n);
  {
    std::map<std::size_t, std::size_t> dense;
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t c = x < na ? a.color[x] : b.color[x - na];
      color[x] = dense.try_emplace(c, dense.size()).first->second;
    }
  }
  std::size_t classes = 0;
  while (true) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t x = 0; x < n; ++x) {
      std::vector<std::size_t> sig{color[x]};
      for (std::size_t f = 0; f < nf; ++f) sig.push_back(image(f, x) == x ? n : color[image(f, x)]);
      for (std::size_t f = 0; f < nf; ++f) {
        std::vector<std::size_t> ms;
        for (std::size_t y : pre[f][x]) ms.push_back(color[y]);
        std::sort(ms.begin(), ms.end());
        sig.push_back(n + 1 + ms.size());
        sig.insert(sig.end(), ms.begin(), ms.end());
      }
      next[x] = ids.try_emplace(std::move(sig), ids.size()).first->second;
    }
    color = std::move(next);
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return color;
}

class Matcher {
public:
  Matcher(const UnaryStructure& a, const UnaryStructure& b, std::vector<std::size_t> color)
      : a_(a), b_(b), na_(a.size()), color_(std::move(color)) {
    const std::size_t nf = a.functions.size();
    pre_b_.assign(nf, std::vector<std::vector<std::size_t>>(b.size()));
    for (std::size_t f = 0; f < nf; ++f)
      for (std::size_t y = 0; y < b.size(); ++y)
        if (b.functions[f][y] != y) pre_b_[f][b.functions[f][y]].push_back(y);
    for (std::size_t y = 0; y < b.size(); ++y) by_color_[color_[na_ + y]].push_back(y);
    map_.assign(a.size(), kNone);
    inverse_.assign(b.size(), kNone);
  }

  std::optional<std::vector<std::size_t>> run() {
    if (search()) return map_;
    return std::nullopt;
  }

private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool same_color(std::size_t x, std::size_t y) const { return color_[x] == color_[na_ + y]; }

  // Assigns x -> y and everything forced by the functions; false on conflict.
  bool assign(std::size_t x, std::size_t y) {
    std::vector<std::pair<std::size_t, std::size_t>> queue{{x, y}};
    while (!queue.empty()) {
      auto [p, q] = queue.back();
      queue.pop_back();
      if (map_[p] != kNone) {
        if (map_[p] != q) return false;
        continue;
      }
      if (inverse_[q] != kNone || !same_color(p, q)) return false;
      map_[p] = q;
      inverse_[q] = p;
      trail_.push_back(p);
      for (std::size_t f = 0; f < a_.functions.size(); ++f)
        queue.emplace_back(a_.functions[f][p], b_.functions[f][q]);
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      std::size_t p = trail_.back();
      trail_.pop_back();
      inverse_[map_[p]] = kNone;
      map_[p] = kNone;
    }
  }

  std::vector<std::size_t> candidates(std::size_t x) const {
    std::vector<std::size_t> best;
    bool constrained = false;
    for (std::size_t f = 0; f < a_.functions.size(); ++f) {
      std::size_t fx = a_.functions[f][x];
      if (fx == x || map_[fx] == kNone) continue;
      std::vector<std::size_t> cand;
      for (std::size_t y : pre_b_[f][map_[fx]])
        if (inverse_[y] == kNone && same_color(x, y)) cand.push_back(y);
      if (!constrained || cand.size() < best.size()) best = std::move(cand);
      constrained = true;
    }
    if (constrained) return best;
    auto it = by_color_.find(color_[x]);
    if (it != by_color_.end())
      for (std::size_t y : it->second)
        if (inverse_[y] == kNone) best.push_back(y);
    return best;
  }

  bool search() {
    std::size_t pick = kNone;
    std::vector<std::size_t> pick_cand;
    for (std::size_t x = 0; x < na_; ++x) {
      if (map_[x] != kNone) continue;
      auto cand = candidates(x);
      if (pick == kNone || cand.size() < pick_cand.size()) {
        pick = x;
        pick_cand = std::move(cand);
        if (pick_cand.size() <= 1) break;
      }
    }
    if (pick == kNone) return true;
    for (std::size_t y : pick_cand) {
      std::size_t mark = trail_.size();
      if (assign(pick, y) && search()) return true;
      undo(mark);
    }
    return false;
  }

  const UnaryStructure& a_;
  const UnaryStructure& b_;
  std::size_t na_;
  std::vector<std::size_t> color_;
  std::vector<std::vector<std::vector<std::size_t>>> pre_b_;
  std::map<std::size_t, std::vector<std::size_t>> by_color_;
  std::vector<std::size_t> map_, inverse_, trail_;
};

}  // namespace

std::optional<std::vector<std::size_t>> find_isomorphism(const UnaryStructure& a,
                                                         const UnaryStructure& b) {
  if (a.size() != b.size() || a.functions.size() != b.functions.size()) return std::nullopt;
  std::vector<std::size_t> color = refine(a, b);
  std::map<std::size_t, long> balance;
  for (std::size_t x = 0; x < a.size(); ++x) ++balance[color[x]];
  for (std::size_t y = 0; y < b.size(); ++y) --balance[color[a.size() + y]];
  for (const auto& [c, count] : balance)
    if (count != 0) return std::nullopt;
  return Matcher(a, b, std::move(color)).run();
}

}  // namespace twr
