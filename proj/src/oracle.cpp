#include "geoapprox/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <unordered_map>

namespace geo {

std::vector<std::vector<size_t>> intersection_adjacency(const ObjectSet& s, bool bichromatic) {
  std::vector<std::vector<size_t>> adj(s.size());
  for (size_t i = 0; i < s.size(); ++i)
    for (size_t j = i + 1; j < s.size(); ++j) {
      if (bichromatic && (s[i].color == Color::none || s[i].color == s[j].color)) continue;
      if (bichromatic && s[j].color == Color::none) continue;
      if (!intersects(s[i], s[j])) continue;
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  return adj;
}

std::vector<std::pair<size_t, size_t>> intersection_edges(const ObjectSet& s, bool bichromatic) {
  std::vector<std::pair<size_t, size_t>> out;
  auto adj = intersection_adjacency(s, bichromatic);
  for (size_t i = 0; i < adj.size(); ++i)
    for (size_t j : adj[i])
      if (i < j) out.emplace_back(i, j);
  return out;
}

namespace {

constexpr size_t kEngineCap = 64;

uint64_t bit(size_t i) { return uint64_t{1} << i; }

// ---- maximum-weight independent set, mask branch and bound ----

struct MisEngine {
  size_t n = 0;
  std::vector<uint64_t> adj;
  std::vector<double> w;
  uint64_t best_mask = 0;
  double best_val = -1.0;

  double weight_sum(uint64_t m) const {
    double t = 0.0;
    while (m) {
      size_t v = static_cast<size_t>(std::countr_zero(m));
      t += w[v];
      m &= m - 1;
    }
    return t;
  }

  void greedy_seed(uint64_t comp, uint64_t& mask, double& val) const {
    uint64_t cand = comp;
    while (cand) {
      size_t pick = kEngineCap;
      double bw = -1.0;
      for (uint64_t m = cand; m;) {
        size_t v = static_cast<size_t>(std::countr_zero(m));
        m &= m - 1;
        if (w[v] > bw) {
          bw = w[v];
          pick = v;
        }
      }
      mask |= bit(pick);
      val += w[pick];
      cand &= ~(adj[pick] | bit(pick));
    }
  }

  void rec(uint64_t cand, uint64_t cur, double cur_val) {
    // auto-include isolated-in-cand vertices
    for (uint64_t m = cand; m;) {
      size_t v = static_cast<size_t>(std::countr_zero(m));
      m &= m - 1;
      if ((adj[v] & cand) == 0) {
        cand &= ~bit(v);
        cur |= bit(v);
        cur_val += w[v];
      }
    }
    if (cur_val > best_val) {
      best_val = cur_val;
      best_mask = cur;
    }
    if (!cand) return;
    if (cur_val + weight_sum(cand) <= best_val) return;
    size_t pivot = 0;
    int bd = -1;
    for (uint64_t m = cand; m;) {
      size_t v = static_cast<size_t>(std::countr_zero(m));
      m &= m - 1;
      int d = std::popcount(adj[v] & cand);
      if (d > bd) {
        bd = d;
        pivot = v;
      }
    }
    rec(cand & ~(adj[pivot] | bit(pivot)), cur | bit(pivot), cur_val + w[pivot]);
    rec(cand & ~bit(pivot), cur, cur_val);
  }

  uint64_t solve(uint64_t comp) {
    best_mask = 0;
    best_val = 0.0;
    greedy_seed(comp, best_mask, best_val);
    rec(comp, 0, 0.0);
    return best_mask;
  }
};

std::vector<uint64_t> mask_components(size_t n, const std::vector<uint64_t>& adj) {
  std::vector<uint64_t> comps;
  uint64_t left = n == 64 ? ~uint64_t{0} : (bit(n) - 1);
  while (left) {
    uint64_t comp = bit(static_cast<size_t>(std::countr_zero(left)));
    while (true) {
      uint64_t grown = comp;
      for (uint64_t m = comp; m;) {
        size_t v = static_cast<size_t>(std::countr_zero(m));
        m &= m - 1;
        grown |= adj[v] & left;
      }
      if (grown == comp) break;
      comp = grown;
    }
    comps.push_back(comp);
    left &= ~comp;
  }
  return comps;
}

std::vector<uint64_t> mask_adjacency(const ObjectSet& s, bool bichromatic = false) {
  std::vector<uint64_t> adj(s.size(), 0);
  for (const auto& [i, j] : intersection_edges(s, bichromatic)) {
    adj[i] |= bit(j);
    adj[j] |= bit(i);
  }
  return adj;
}

// ---- set cover branch and bound over candidate points ----

struct CoverEngine {
  size_t n = 0;                                       // universe size
  std::vector<std::pair<uint64_t, Point>> cands;      // deduped candidate points
  std::vector<std::vector<size_t>> covering;          // per element: candidate list
  size_t best = 0;
  std::vector<size_t> best_pick, pick;
  int max_cover = 1;

  void dedupe() {
    std::map<uint64_t, Point> seen;
    for (auto& [m, p] : cands)
      if (m) seen.try_emplace(m, p);
    std::vector<std::pair<uint64_t, Point>> out(seen.begin(), seen.end());
    if (out.size() <= 4096) {  // keep only maximal coverage masks
      std::vector<char> drop(out.size(), 0);
      for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = 0; j < out.size(); ++j)
          if (i != j && !drop[j] && (out[i].first | out[j].first) == out[j].first &&
              out[i].first != out[j].first)
            drop[i] = 1;
      std::vector<std::pair<uint64_t, Point>> kept;
      for (size_t i = 0; i < out.size(); ++i)
        if (!drop[i]) kept.push_back(out[i]);
      out = std::move(kept);
    }
    cands = std::move(out);
  }

  void greedy_seed() {
    uint64_t uncov = n == 64 ? ~uint64_t{0} : (bit(n) - 1);
    std::vector<size_t> sol;
    while (uncov) {
      size_t pickc = 0;
      int bc = -1;
      for (size_t c = 0; c < cands.size(); ++c) {
        int cc = std::popcount(cands[c].first & uncov);
        if (cc > bc) {
          bc = cc;
          pickc = c;
        }
      }
      require(bc > 0, "uncoverable element in set cover");
      sol.push_back(pickc);
      uncov &= ~cands[pickc].first;
    }
    best = sol.size();
    best_pick = std::move(sol);
  }

  void rec(uint64_t uncov) {
    if (!uncov) {
      if (pick.size() < best) {
        best = pick.size();
        best_pick = pick;
      }
      return;
    }
    size_t lb = (static_cast<size_t>(std::popcount(uncov)) + static_cast<size_t>(max_cover) - 1) /
                static_cast<size_t>(max_cover);
    if (pick.size() + lb >= best) return;
    size_t e = static_cast<size_t>(std::countr_zero(uncov));
    for (size_t c : covering[e]) {
      pick.push_back(c);
      rec(uncov & ~cands[c].first);
      pick.pop_back();
    }
  }

  std::vector<Point> solve() {
    if (n == 0) return {};
    dedupe();
    covering.assign(n, {});
    for (size_t c = 0; c < cands.size(); ++c) {
      max_cover = std::max(max_cover, std::popcount(cands[c].first));
      for (uint64_t m = cands[c].first; m;) {
        size_t e = static_cast<size_t>(std::countr_zero(m));
        m &= m - 1;
        covering[e].push_back(c);
      }
    }
    for (size_t e = 0; e < n; ++e) require(!covering[e].empty(), "element with no covering candidate");
    greedy_seed();
    rec(n == 64 ? ~uint64_t{0} : (bit(n) - 1));
    std::vector<Point> out;
    for (size_t c : best_pick) out.push_back(cands[c].second);
    return out;
  }
};

uint64_t coverage_mask(const ObjectSet& s, const Point& p) {
  uint64_t m = 0;
  for (size_t i = 0; i < s.size(); ++i)
    if (contains(s[i], p)) m |= bit(i);
  return m;
}

std::vector<std::pair<uint64_t, Point>> box_candidates(const ObjectSet& s) {
  int d = s.front().dim();
  std::vector<std::vector<double>> axes(static_cast<size_t>(d));
  for (int a = 0; a < d; ++a) {
    for (const auto& o : s) axes[static_cast<size_t>(a)].push_back(o.box().hi[a]);
    auto& v = axes[static_cast<size_t>(a)];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  std::vector<std::pair<uint64_t, Point>> out;
  std::vector<size_t> at(static_cast<size_t>(d), 0);
  while (true) {
    Point p;
    p.dim = d;
    for (int a = 0; a < d; ++a) p.c[static_cast<size_t>(a)] = axes[static_cast<size_t>(a)][at[static_cast<size_t>(a)]];
    out.emplace_back(coverage_mask(s, p), p);
    int a = 0;
    while (a < d) {
      if (++at[static_cast<size_t>(a)] < axes[static_cast<size_t>(a)].size()) break;
      at[static_cast<size_t>(a)] = 0;
      ++a;
    }
    if (a == d) break;
  }
  return out;
}

std::vector<std::pair<uint64_t, Point>> disk_candidates(const ObjectSet& s) {
  std::vector<Point> pts;
  for (const auto& o : s) pts.push_back(o.disk().center);
  for (size_t i = 0; i < s.size(); ++i)
    for (size_t j = i + 1; j < s.size(); ++j) {
      const Disk& a = s[i].disk();
      const Disk& b = s[j].disk();
      double dx = b.center[0] - a.center[0], dy = b.center[1] - a.center[1];
      double d2 = dx * dx + dy * dy;
      if (d2 == 0.0) continue;
      double t = (a.radius * a.radius - b.radius * b.radius + d2) / (2.0 * d2);
      double h2 = a.radius * a.radius - t * t * d2;
      if (h2 < 0.0) continue;
      double px = a.center[0] + t * dx, py = a.center[1] + t * dy;
      pts.push_back(make_point(px, py));  // lens midpoint (radical chord center)
      double h = std::sqrt(h2 / d2);
      pts.push_back(make_point(px - h * dy, py + h * dx));
      pts.push_back(make_point(px + h * dy, py - h * dx));
    }
  std::vector<std::pair<uint64_t, Point>> out;
  for (const auto& p : pts) out.emplace_back(coverage_mask(s, p), p);
  return out;
}

// ---- bipartite matcher (Kuhn) ----

struct Kuhn {
  size_t nl = 0, nr = 0;
  std::vector<std::vector<size_t>> adj;  // left -> right
  std::vector<int> ml, mr;

  bool try_augment(size_t u, std::vector<char>& seen) {
    for (size_t v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (mr[v] < 0 || try_augment(static_cast<size_t>(mr[v]), seen)) {
        ml[u] = static_cast<int>(v);
        mr[v] = static_cast<int>(u);
        return true;
      }
    }
    return false;
  }

  size_t run() {
    ml.assign(nl, -1);
    mr.assign(nr, -1);
    size_t total = 0;
    for (size_t u = 0; u < nl; ++u) {
      std::vector<char> seen(nr, 0);
      if (try_augment(u, seen)) ++total;
    }
    return total;
  }
};

// ---- general matching: DP and exhaustive augmentation ----

struct MatchDp {
  size_t n = 0;
  std::vector<uint32_t> adj;
  std::unordered_map<uint32_t, int> memo;

  int f(uint32_t mask) {
    if (!mask) return 0;
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    size_t v = static_cast<size_t>(std::countr_zero(mask));
    uint32_t rest = mask & (mask - 1);
    int best = f(rest);
    for (uint32_t m = adj[v] & rest; m;) {
      size_t u = static_cast<size_t>(std::countr_zero(m));
      m &= m - 1;
      best = std::max(best, 1 + f(rest & ~(uint32_t{1} << u)));
    }
    memo.emplace(mask, best);
    return best;
  }

  std::vector<std::pair<size_t, size_t>> reconstruct(uint32_t mask) {
    std::vector<std::pair<size_t, size_t>> out;
    while (mask) {
      size_t v = static_cast<size_t>(std::countr_zero(mask));
      uint32_t rest = mask & (mask - 1);
      if (f(mask) == f(rest)) {
        mask = rest;
        continue;
      }
      for (uint32_t m = adj[v] & rest; m;) {
        size_t u = static_cast<size_t>(std::countr_zero(m));
        m &= m - 1;
        if (f(mask) == 1 + f(rest & ~(uint32_t{1} << u))) {
          out.emplace_back(v, u);
          mask = rest & ~(uint32_t{1} << u);
          break;
        }
      }
    }
    return out;
  }
};

struct AugSearch {
  const std::vector<std::vector<size_t>>* adj = nullptr;
  std::vector<int>* match = nullptr;
  std::vector<char> in_path;
  std::vector<size_t> path;
  size_t max_edges = 0;
  uint64_t budget = 50'000'000;

  bool extend(size_t u, bool need_matched, size_t edges_used) {
    if (edges_used >= max_edges) return false;
    require(budget-- > 0, "augmenting-path search budget exceeded");
    for (size_t w : (*adj)[u]) {
      if (in_path[w]) continue;
      bool edge_matched = (*match)[u] == static_cast<int>(w);
      if (edge_matched != need_matched) continue;
      if (!need_matched && (*match)[w] < 0) {
        path.push_back(w);
        return true;
      }
      path.push_back(w);
      in_path[w] = 1;
      if (extend(w, !need_matched, edges_used + 1)) return true;
      in_path[w] = 0;
      path.pop_back();
    }
    return false;
  }

  // returns index path or empty
  std::vector<size_t> find(size_t n, size_t cap_edges) {
    max_edges = cap_edges;
    for (size_t v = 0; v < n; ++v) {
      if ((*match)[v] >= 0) continue;
      in_path.assign(n, 0);
      path.assign(1, v);
      in_path[v] = 1;
      if (extend(v, false, 0)) return path;
    }
    return {};
  }
};

void apply_path(std::vector<int>& match, const std::vector<size_t>& path) {
  for (size_t k = 0; k + 1 < path.size(); k += 2) {
    match[path[k]] = static_cast<int>(path[k + 1]);
    match[path[k + 1]] = static_cast<int>(path[k]);
  }
}

std::vector<int> greedy_maximal(size_t n, const std::vector<std::vector<size_t>>& adj) {
  std::vector<int> match(n, -1);
  for (size_t i = 0; i < n; ++i) {
    if (match[i] >= 0) continue;
    for (size_t j : adj[i])
      if (j > i && match[j] < 0) {
        match[i] = static_cast<int>(j);
        match[j] = static_cast<int>(i);
        break;
      }
  }
  return match;
}

Matching pairs_from_match(const ObjectSet& s, const std::vector<int>& match) {
  Matching m;
  for (size_t i = 0; i < match.size(); ++i)
    if (match[i] >= 0 && static_cast<size_t>(match[i]) > i)
      m.pairs.emplace_back(s[i].id, s[static_cast<size_t>(match[i])].id);
  return m;
}

}  // namespace

PiercingSolution exact_mps(const ObjectSet& s, size_t cap_boxes, size_t cap_disks) {
  if (s.empty()) return {};
  bool all_boxes = std::all_of(s.begin(), s.end(), [](const GeomObject& o) { return o.is_box(); });
  bool all_disks = std::all_of(s.begin(), s.end(), [](const GeomObject& o) { return o.is_disk(); });
  require(all_boxes || all_disks, "piercing oracle needs all-box or all-disk input");
  size_t cap = all_boxes ? cap_boxes : cap_disks;
  require(cap <= kEngineCap, "piercing oracle cap exceeds engine limit");
  require(s.size() <= cap, "piercing oracle size cap exceeded");
  CoverEngine eng;
  eng.n = s.size();
  eng.cands = all_boxes ? box_candidates(s) : disk_candidates(s);
  PiercingSolution sol;
  sol.points = eng.solve();
  return sol;
}

ISolution exact_mis(const ObjectSet& s, bool weighted, size_t cap) {
  require(cap <= kEngineCap, "independent-set oracle cap exceeds engine limit");
  require(s.size() <= cap, "independent-set oracle size cap exceeded");
  ISolution out;
  if (s.empty()) return out;
  MisEngine eng;
  eng.n = s.size();
  eng.adj = mask_adjacency(s);
  eng.w.resize(s.size());
  for (size_t i = 0; i < s.size(); ++i) eng.w[i] = weighted ? s[i].weight : 1.0;
  uint64_t chosen = 0;
  for (uint64_t comp : mask_components(s.size(), eng.adj)) chosen |= eng.solve(comp);
  for (uint64_t m = chosen; m;) {
    size_t v = static_cast<size_t>(std::countr_zero(m));
    m &= m - 1;
    out.ids.push_back(s[v].id);
    out.value += weighted ? s[v].weight : 1.0;
  }
  return out;
}

VCSolution exact_vc(const ObjectSet& s, size_t cap) {
  ISolution mis = exact_mis(s, false, cap);
  std::vector<char> in_mis_by_pos(s.size(), 0);
  {
    IdIndex idx(s);
    for (int64_t id : mis.ids) in_mis_by_pos[*idx.find(id)] = 1;
  }
  VCSolution out;
  for (size_t i = 0; i < s.size(); ++i)
    if (!in_mis_by_pos[i]) out.ids.push_back(s[i].id);
  return out;
}

double exact_fractional_vc(const ObjectSet& s, size_t cap) {
  require(s.size() <= cap, "fractional-cover oracle size cap exceeded");
  auto edges = intersection_edges(s);
  size_t n = s.size();

  // reference value: half the maximum matching of the bipartite double cover
  Kuhn dc;
  dc.nl = n;
  dc.nr = n;
  dc.adj.assign(n, {});
  for (const auto& [u, v] : edges) {
    dc.adj[u].push_back(v);
    dc.adj[v].push_back(u);
  }
  double dc_value = static_cast<double>(dc.run()) / 2.0;

  // pruned {0, 1/2, 1} enumeration (values in half units)
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<size_t> deg(n, 0);
  for (const auto& [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return deg[a] > deg[b]; });
  std::vector<size_t> pos(n);
  for (size_t k = 0; k < n; ++k) pos[order[k]] = k;
  // edges keyed by the later-assigned endpoint
  std::vector<std::vector<std::pair<size_t, size_t>>> by_later(n);
  for (const auto& [u, v] : edges) {
    size_t later = std::max(pos[u], pos[v]);
    by_later[later].push_back({pos[u], pos[v]});
  }
  std::vector<int> val(n, 0);
  int best = 2 * static_cast<int>(n) + 1;
  auto dfs = [&](auto&& self, size_t k, int sum) -> void {
    if (sum >= best) return;
    if (k == n) {
      best = sum;
      return;
    }
    for (int x : {0, 1, 2}) {
      val[k] = x;
      bool ok = true;
      for (const auto& [pu, pv] : by_later[k])
        if (val[pu] + val[pv] < 2) {
          ok = false;
          break;
        }
      if (ok) self(self, k + 1, sum + x);
    }
  };
  dfs(dfs, 0, 0);
  double enum_value = static_cast<double>(best) / 2.0;
  require(std::abs(enum_value - dc_value) < 1e-9,
          "fractional-cover enumeration disagrees with double-cover matching");
  return enum_value;
}

Matching exact_mcm(const ObjectSet& s, bool bipartite, size_t cap) {
  if (bipartite) {
    size_t limit = cap ? cap : 60;
    require(s.size() <= limit, "bipartite matching oracle size cap exceeded");
    std::vector<size_t> left, right;
    for (size_t i = 0; i < s.size(); ++i) {
      require(s[i].color != Color::none, "bipartite matching needs colored objects");
      (s[i].color == Color::A ? left : right).push_back(i);
    }
    Kuhn k;
    k.nl = left.size();
    k.nr = right.size();
    k.adj.assign(k.nl, {});
    for (size_t a = 0; a < left.size(); ++a)
      for (size_t b = 0; b < right.size(); ++b)
        if (intersects(s[left[a]], s[right[b]])) k.adj[a].push_back(b);
    k.run();
    Matching m;
    for (size_t a = 0; a < left.size(); ++a)
      if (k.ml[a] >= 0) m.pairs.emplace_back(s[left[a]].id, s[right[static_cast<size_t>(k.ml[a])]].id);
    return m;
  }
  size_t limit = cap ? cap : 24;
  require(limit <= kEngineCap, "matching oracle cap exceeds engine limit");
  require(s.size() <= limit, "matching oracle size cap exceeded");
  if (s.size() <= 24) {
    MatchDp dp;
    dp.n = s.size();
    dp.adj.assign(s.size(), 0);
    for (const auto& [i, j] : intersection_edges(s)) {
      dp.adj[i] |= uint32_t{1} << j;
      dp.adj[j] |= uint32_t{1} << i;
    }
    uint32_t full = s.size() == 32 ? ~uint32_t{0} : ((uint32_t{1} << s.size()) - 1);
    dp.f(full);
    Matching m;
    for (const auto& [i, j] : dp.reconstruct(full)) m.pairs.emplace_back(s[i].id, s[j].id);
    std::sort(m.pairs.begin(), m.pairs.end());
    return m;
  }
  // exhaustive-augmentation saturation: exact once no augmenting path exists
  auto adj = intersection_adjacency(s);
  std::vector<int> match = greedy_maximal(s.size(), adj);
  AugSearch as;
  as.adj = &adj;
  as.match = &match;
  while (true) {
    auto path = as.find(s.size(), s.size());
    if (path.empty()) break;
    apply_path(match, path);
  }
  return pairs_from_match(s, match);
}

std::optional<std::vector<int64_t>> find_aug_path(const ObjectSet& s, const Matching& m,
                                                  size_t max_edges, bool bichromatic) {
  IdIndex idx(s);
  auto adj = intersection_adjacency(s, bichromatic);
  std::vector<int> match(s.size(), -1);
  for (const auto& [a, b] : m.pairs) {
    auto ka = idx.find(a), kb = idx.find(b);
    require(ka && kb, "matching references unknown id");
    match[*ka] = static_cast<int>(*kb);
    match[*kb] = static_cast<int>(*ka);
  }
  AugSearch as;
  as.adj = &adj;
  as.match = &match;
  auto path = as.find(s.size(), max_edges);
  if (path.empty()) return std::nullopt;
  std::vector<int64_t> ids;
  for (size_t v : path) ids.push_back(s[v].id);
  return ids;
}

}  // namespace geo
