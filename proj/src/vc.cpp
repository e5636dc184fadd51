#include "geoapprox/vc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "geoapprox/depth.hpp"
#include "geoapprox/mis.hpp"
#include "geoapprox/oracle.hpp"
#include "geoapprox/validate.hpp"

namespace geo {

namespace {

// ---------------------------------------------------------------------------
// min-weight intersecting pair oracle
// ---------------------------------------------------------------------------

// Candidate pairs live in a lazy min-heap keyed by weight sum. Every weight
// change or insertion pushes fresh candidates for the affected vertex; stale
// entries (dead id, outdated weight) are skipped on pop. Invariant: every
// live intersecting pair with its current weights has an entry in the heap,
// so an empty heap means an edgeless graph.
struct PairEntry {
  double sum;
  int64_t u, v;  // u < v
  double wu, wv;
};

struct PairOrder {
  bool operator()(const PairEntry& a, const PairEntry& b) const {
    if (a.sum != b.sum) return a.sum > b.sum;
    if (a.u != b.u) return a.u > b.u;
    return a.v > b.v;
  }
};

class NaiveEdgeOracle final : public MinWeightEdgeOracle {
 public:
  explicit NaiveEdgeOracle(const ObjectSet& s) {
    for (const auto& o : s) NaiveEdgeOracle::insert(o);
  }

  std::optional<EdgeCandidate> min_edge() override {
    while (!heap_.empty()) {
      const PairEntry& e = heap_.top();
      auto iu = pos_.find(e.u);
      auto iv = pos_.find(e.v);
      if (iu != pos_.end() && iv != pos_.end() && w_[iu->second] == e.wu &&
          w_[iv->second] == e.wv && intersects(objs_[iu->second], objs_[iv->second])) {
        return EdgeCandidate{e.u, e.v, e.sum};
      }
      heap_.pop();
    }
    return std::nullopt;
  }

  void set_weight(int64_t id, double w) override {
    auto it = pos_.find(id);
    require(it != pos_.end(), "edge oracle: set_weight on unknown id");
    require(w > 0.0, "edge oracle: weights must be positive");
    if (w_[it->second] == w) return;
    w_[it->second] = w;
    push_pairs_of(it->second);
  }

  double weight(int64_t id) const override {
    auto it = pos_.find(id);
    require(it != pos_.end(), "edge oracle: weight of unknown id");
    return w_[it->second];
  }

  void insert(const GeomObject& o) override {
    require(pos_.find(o.id) == pos_.end(), "edge oracle: duplicate id");
    pos_[o.id] = objs_.size();
    objs_.push_back(o);
    w_.push_back(1.0);
    push_pairs_of(objs_.size() - 1);
  }

  void remove(int64_t id) override {
    auto it = pos_.find(id);
    require(it != pos_.end(), "edge oracle: remove of unknown id");
    const size_t i = it->second;
    pos_.erase(it);
    const size_t last = objs_.size() - 1;
    if (i != last) {
      objs_[i] = std::move(objs_[last]);
      w_[i] = w_[last];
      pos_[objs_[i].id] = i;
    }
    objs_.pop_back();
    w_.pop_back();
  }

  std::vector<int64_t> live_ids() const override {
    std::vector<int64_t> r;
    r.reserve(objs_.size());
    for (const auto& o : objs_) r.push_back(o.id);
    std::sort(r.begin(), r.end());
    return r;
  }

  size_t size() const override { return objs_.size(); }

 private:
  void push_pair(size_t i, size_t j) {
    int64_t u = objs_[i].id, v = objs_[j].id;
    double wu = w_[i], wv = w_[j];
    if (u > v) {
      std::swap(u, v);
      std::swap(wu, wv);
    }
    heap_.push(PairEntry{wu + wv, u, v, wu, wv});
  }

  void push_pairs_of(size_t i) {
    maybe_compact();
    for (size_t j = 0; j < objs_.size(); ++j) {
      if (j == i) continue;
      if (intersects(objs_[i], objs_[j])) push_pair(i, j);
    }
  }

  // bound heap growth: rebuild from the current pair set once stale entries
  // dominate
  void maybe_compact() {
    const size_t n = objs_.size();
    if (heap_.size() <= std::max<size_t>(4096, 4 * n * n)) return;
    heap_ = decltype(heap_){};
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        if (intersects(objs_[i], objs_[j])) push_pair(i, j);
  }

  ObjectSet objs_;
  std::vector<double> w_;
  std::unordered_map<int64_t, size_t> pos_;
  std::priority_queue<PairEntry, std::vector<PairEntry>, PairOrder> heap_;
};

// rectangle a is narrower than b and pierces b's full vertical extent
bool four_crossing(const AxisBox& a, const AxisBox& b) {
  return b.lo[0] < a.lo[0] && a.hi[0] < b.hi[0] && a.lo[1] < b.lo[1] && b.hi[1] < a.hi[1];
}

// Remove every rectangle that fully contains another live rectangle,
// scanning largest area first so nested chains keep an innermost member and
// exactly one copy of duplicates survives. Swapping a removed rectangle for
// a surviving one inside it turns any independent set of the input into an
// equally large independent set of the output.
ObjectSet drop_containers(const ObjectSet& s) {
  auto covers = [](const AxisBox& a, const AxisBox& b) {
    return a.lo[0] <= b.lo[0] && a.lo[1] <= b.lo[1] && b.hi[0] <= a.hi[0] && b.hi[1] <= a.hi[1];
  };
  std::vector<size_t> order(s.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double aa = s[a].box().extent(0) * s[a].box().extent(1);
    const double ab = s[b].box().extent(0) * s[b].box().extent(1);
    if (aa != ab) return aa > ab;
    return s[a].id < s[b].id;
  });
  std::vector<char> live(s.size(), 1);
  for (size_t oi : order) {
    for (size_t j = 0; j < s.size(); ++j) {
      if (j == oi || !live[j]) continue;
      if (covers(s[oi].box(), s[j].box())) {
        live[oi] = 0;
        break;
      }
    }
  }
  ObjectSet out;
  for (size_t i = 0; i < s.size(); ++i)
    if (live[i]) out.push_back(s[i]);
  return out;
}

void require_planar_rects(const ObjectSet& s, const char* what) {
  for (const auto& o : s)
    require(o.is_box() && o.dim() == 2, std::string(what) + ": planar rectangles only");
}

}  // namespace

std::unique_ptr<MinWeightEdgeOracle> naive_min_weight_edge_oracle(const ObjectSet& s) {
  return std::make_unique<NaiveEdgeOracle>(s);
}

// ---------------------------------------------------------------------------
// multiplicative weight updates
// ---------------------------------------------------------------------------

double MWUState::weight(int64_t id) const {
  auto it = exponents.find(id);
  return it == exponents.end() ? 1.0 : std::pow(1.0 + delta, double(it->second));
}

std::optional<FractionalVC> mwu_try_budget(MinWeightEdgeOracle& oracle, size_t n, double z,
                                           double delta, MWUStats* stats) {
  require(delta > 0.0 && delta <= 0.25, "mwu: delta must be in (0, 1/4]");
  require(z >= 1.0, "mwu: budget must be at least 1");
  std::vector<int64_t> universe = oracle.live_ids();
  const size_t m = universe.size();
  for (int64_t id : universe)
    require(oracle.weight(id) == 1.0, "mwu: oracle weights must start at 1");

  const double logn = std::log(double(std::max({n, m, size_t(2)})));
  const double rate = std::log1p(delta) - delta / (1.0 + delta);
  const size_t t_max = size_t(std::ceil(z * logn / rate)) + 1;

  double W = double(m);
  std::vector<int64_t> touched;
  size_t iters = 0;
  bool ok = true;
  while (true) {
    auto e = oracle.min_edge();
    if (!e) break;
    if (e->weight_sum >= W / z) break;  // every pair sum now clears the bar
    if (iters >= t_max) {
      ok = false;
      break;
    }
    ++iters;
    W += delta * e->weight_sum;
    oracle.set_weight(e->u, oracle.weight(e->u) * (1.0 + delta));
    oracle.set_weight(e->v, oracle.weight(e->v) * (1.0 + delta));
    touched.push_back(e->u);
    touched.push_back(e->v);
    if ((iters & 1023u) == 0) {  // resync the running sum against drift
      double acc = 0.0;
      for (int64_t id : universe) acc += oracle.weight(id);
      W = acc;
    }
  }
  if (stats) {
    stats->iterations = iters;
    stats->t_max = t_max;
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  std::optional<FractionalVC> out;
  if (ok) {
    FractionalVC f;
    f.universe = universe;
    f.default_x = std::min(z / W, 1.0);
    double total = f.default_x * double(m - touched.size());
    for (int64_t id : touched) {
      const double xv = std::min(z * oracle.weight(id) / W, 1.0);
      f.x.emplace(id, xv);
      total += xv;
    }
    f.size = total;
    out = std::move(f);
  }
  for (int64_t id : touched) oracle.set_weight(id, 1.0);
  return out;
}

FractionalVC mwu_fractional_vc(MinWeightEdgeOracle& oracle, size_t n, double delta,
                               MWUStats* stats) {
  MWUStats st{};
  if (oracle.size() == 0 || !oracle.min_edge()) {
    // edgeless instance: the all-zeros vector is already feasible
    if (stats) *stats = st;
    FractionalVC f;
    f.universe = oracle.live_ids();
    return f;
  }
  double lo = 0.0;  // largest refuted budget
  std::optional<FractionalVC> best;
  double best_z = 0.0;
  MWUStats best_st{};
  auto attempt = [&](double budget) -> bool {
    ++st.runs;
    MWUStats run_st{};
    auto got = mwu_try_budget(oracle, n, budget, delta, &run_st);
    if (got) {
      if (!best || budget < best_z) {
        best = std::move(got);
        best_z = budget;
        best_st = run_st;
      }
      return true;
    }
    lo = std::max(lo, budget);
    st.lower_bound = std::max(st.lower_bound, budget / (1.0 + delta));
    return false;
  };
  double z = 1.0;
  while (!attempt(z)) z *= 2.0;
  best_z = std::max(best_z, 1.0);
  // Shrink the (refuted, accepted] bracket geometrically until the accepted
  // budget is within (1+delta) of a refuted one; the result is then at most
  // (1+delta)^2 times the optimum the refutations certify.
  while (lo > 0.0 && best_z > (1.0 + delta) * lo) {
    const double mid = std::sqrt(lo * best_z);
    if (!(mid > lo && mid < best_z)) break;
    attempt(mid);
  }
  st.z = best_z;
  st.iterations = best_st.iterations;
  st.t_max = best_st.t_max;
  if (stats) *stats = st;
  return *best;
}

// ---------------------------------------------------------------------------
// kernel
// ---------------------------------------------------------------------------

KernelResult kernelize(const FractionalVC& x, double gamma, double delta) {
  require(delta > 0.0 && delta < gamma && gamma < 0.25, "kernelize: need 0 < delta < gamma < 1/4");
  const double lambda = std::sqrt(gamma * delta);
  const double lo = 0.5 - gamma - lambda;
  const double hi = 0.5 - lambda;

  std::vector<double> vals;
  vals.reserve(x.x.size());
  for (const auto& kv : x.x) vals.push_back(kv.second);
  std::sort(vals.begin(), vals.end());
  const size_t untouched = x.universe.size() - x.x.size();
  auto count_in = [&](double a, double b) {  // half-open [a, b)
    size_t c = size_t(std::lower_bound(vals.begin(), vals.end(), b) -
                      std::lower_bound(vals.begin(), vals.end(), a));
    if (x.default_x >= a && x.default_x < b) c += untouched;
    return c;
  };

  // pick the sparsest width-lambda band of coordinate values; its lower edge
  // becomes the threshold
  double best_alpha = -1.0;
  size_t best_count = 0;
  const int64_t k_lo = int64_t(std::ceil(lo / lambda - 1e-12));
  const int64_t k_hi = int64_t(std::floor(hi / lambda + 1e-12));
  for (int64_t k = k_lo; k <= k_hi; ++k) {
    const double a = double(k) * lambda;
    if (a < lo - 1e-12 || a > hi + 1e-12) continue;
    const size_t c = count_in(a, a + lambda);
    if (best_alpha < 0.0 || c < best_count) {
      best_alpha = a;
      best_count = c;
    }
  }
  require(best_alpha > 0.0, "kernelize: empty threshold range");

  KernelResult kr;
  kr.alpha = best_alpha;
  for (int64_t id : x.universe) {
    const double v = x.value(id);
    if (v < best_alpha)
      kr.L.push_back(id);
    else if (v > 1.0 - best_alpha)
      kr.H.push_back(id);
    else
      kr.K.push_back(id);
  }
  return kr;
}

VCSolution vc_from_kernel(const ObjectSet& s, const KernelResult& kr, const PromiseSolver& inner) {
  IdIndex idx(s);
  ObjectSet ks;
  ks.reserve(kr.K.size());
  for (int64_t id : kr.K) {
    auto p = idx.find(id);
    require(p.has_value(), "vc_from_kernel: kernel id not in the object set");
    ks.push_back(s[*p]);
  }
  std::vector<int64_t> ids = ks.empty() ? std::vector<int64_t>{} : inner(ks).ids;
  ids.insert(ids.end(), kr.H.begin(), kr.H.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  VCSolution out{std::move(ids)};
  auto v = check_vertex_cover(s, out.ids);
  require(v.ok, "vc_from_kernel: " + v.reason);
  return out;
}

// ---------------------------------------------------------------------------
// separator
// ---------------------------------------------------------------------------

SeparatorResult separator(const ObjectSet& s) {
  const size_t n = s.size();
  require(n >= 2, "separator: need at least two objects");
  const int d = s[0].dim();
  for (const auto& o : s) require(o.dim() == d, "separator: mixed dimensions");
  constexpr size_t kGrid = 64;

  // per-axis quantile grid; each center snaps to its nearest grid line
  std::vector<Point> centers(n);
  for (size_t i = 0; i < n; ++i) centers[i] = inner_point(s[i]);
  std::vector<std::vector<double>> lines(static_cast<size_t>(d));
  for (int k = 0; k < d; ++k) {
    std::vector<double> cs(n);
    for (size_t i = 0; i < n; ++i) cs[i] = centers[i][k];
    std::sort(cs.begin(), cs.end());
    auto& ln = lines[size_t(k)];
    for (size_t q = 0; q < kGrid; ++q) ln.push_back(cs[std::min(n - 1, q * n / kGrid)]);
    std::sort(ln.begin(), ln.end());
    ln.erase(std::unique(ln.begin(), ln.end()), ln.end());
  }
  std::vector<Point> rounded = centers;
  for (auto& p : rounded) {
    for (int k = 0; k < d; ++k) {
      const auto& ln = lines[size_t(k)];
      auto it = std::lower_bound(ln.begin(), ln.end(), p[k]);
      double best = it != ln.end() ? *it : ln.back();
      if (it != ln.begin()) {
        const double below = *(it - 1);
        if (p[k] - below <= best - p[k]) best = below;  // ties snap downward
      }
      p[k] = best;
    }
  }

  // smallest hypercube holding at least a 1/(2^d+1) fraction of the snapped
  // centers; corners and sides both come from the grid
  const size_t q = (size_t(1) << d) + 1;
  const size_t T = (n + q - 1) / q;
  std::vector<double> sides{0.0};
  for (int k = 0; k < d; ++k)
    for (size_t a = 0; a < lines[size_t(k)].size(); ++a)
      for (size_t b2 = a + 1; b2 < lines[size_t(k)].size(); ++b2)
        sides.push_back(lines[size_t(k)][b2] - lines[size_t(k)][a]);
  std::sort(sides.begin(), sides.end());
  sides.erase(std::unique(sides.begin(), sides.end()), sides.end());

  auto count_best = [&](double r) -> std::pair<size_t, Point> {
    Point corner{d, {}};
    Point best_corner{d, {}};
    size_t best = 0;
    std::vector<std::vector<size_t>> sets(size_t(d) + 1);
    sets[0].resize(n);
    std::iota(sets[0].begin(), sets[0].end(), size_t{0});
    std::function<void(int)> rec = [&](int axis) {
      const auto& cur = sets[size_t(axis)];
      if (cur.size() < T || best >= T) return;
      if (axis == d) {
        if (cur.size() > best) {
          best = cur.size();
          best_corner = corner;
        }
        return;
      }
      for (double lo : lines[size_t(axis)]) {
        auto& nxt = sets[size_t(axis) + 1];
        nxt.clear();
        for (size_t i : cur) {
          const double v = rounded[i][axis];
          if (v >= lo && v <= lo + r) nxt.push_back(i);
        }
        corner[axis] = lo;
        rec(axis + 1);
        if (best >= T) return;
      }
    };
    rec(0);
    return {best, best_corner};
  };

  size_t flo = 0, fhi = sides.size() - 1;
  while (flo < fhi) {
    const size_t mid = (flo + fhi) / 2;
    if (count_best(sides[mid]).first >= T)
      fhi = mid;
    else
      flo = mid + 1;
  }
  const double r = sides[flo];
  auto seed = count_best(r);
  require(seed.first >= T, "separator: seed cube search failed");
  const Point& corner0 = seed.second;

  int64_t h = int64_t(std::ceil(std::pow(double(n), 1.0 / double(d)) - 1e-9));
  h = std::max<int64_t>(h, 2);

  // grow the cube by one of h-1 scalings; keep the one crossed by the fewest
  // small objects
  auto make_cube = [&](double t) {
    AxisBox B;
    B.lo.dim = B.hi.dim = d;
    for (int k = 0; k < d; ++k) {
      const double c = corner0[k] + r / 2.0;
      const double half = (1.0 + t) * r / 2.0;
      B.lo[k] = c - half;
      B.hi[k] = c + half;
    }
    return B;
  };
  auto classify = [&](const GeomObject& o, const AxisBox& B) -> int {
    const AxisBox bb = bbox(o);
    bool ins = true;
    for (int k = 0; k < d; ++k) {
      if (!(bb.lo[k] > B.lo[k] && bb.hi[k] < B.hi[k])) {
        ins = false;
        break;
      }
    }
    if (ins) return 0;
    const bool touch = o.is_box() ? intersects(o.box(), B) : intersects(B, o.disk());
    return touch ? 1 : 2;  // crossing : outside
  };

  double best_t = 0.0;
  size_t best_small = std::numeric_limits<size_t>::max();
  for (int64_t k = 1; k < h; ++k) {
    const double t = double(k) / double(h);
    const AxisBox B = make_cube(t);
    size_t small = 0;
    for (const auto& o : s)
      if (classify(o, B) == 1 && linf_diameter(o) <= r / double(h)) ++small;
    if (small < best_small) {
      best_small = small;
      best_t = t;
    }
  }

  SeparatorResult res;
  res.t = best_t;
  res.base_side = r;
  res.h = h;
  res.small_crossing = best_small;
  res.box = make_cube(best_t);
  for (size_t i = 0; i < n; ++i) {
    bool in_cube = true;
    for (int k = 0; k < d; ++k)
      if (rounded[i][k] < res.box.lo[k] || rounded[i][k] > res.box.hi[k]) {
        in_cube = false;
        break;
      }
    if (in_cube)
      ++res.centers_inside;
    else
      ++res.centers_outside;
  }
  for (const auto& o : s) {
    const int c = classify(o, res.box);
    (c == 0 ? res.inside : c == 1 ? res.crossing : res.outside).push_back(o.id);
  }
  std::sort(res.inside.begin(), res.inside.end());
  std::sort(res.outside.begin(), res.outside.end());
  std::sort(res.crossing.begin(), res.crossing.end());
  return res;
}

// ---------------------------------------------------------------------------
// fat promise solver
// ---------------------------------------------------------------------------

ISolution mis_fat_additive(const ObjectSet& s, double eps) {
  require(eps >= 0.125, "mis_fat_additive: exact base case needs eps >= 1/8");
  const size_t b = size_t(std::ceil(1.0 / (eps * eps)));

  std::function<std::vector<int64_t>(const ObjectSet&)> rec =
      [&](const ObjectSet& cur) -> std::vector<int64_t> {
    if (cur.size() <= std::max<size_t>(b, 2)) return exact_mis(cur, false, 64).ids;
    SeparatorResult sep = separator(cur);
    if (sep.inside.size() == cur.size() || sep.outside.size() == cur.size() ||
        (sep.inside.empty() && sep.outside.empty())) {
      return greedy_fat_mis(cur, false).ids;  // degenerate split, no progress possible
    }
    IdIndex idx(cur);
    ObjectSet in_set, out_set;
    in_set.reserve(sep.inside.size());
    out_set.reserve(sep.outside.size());
    for (int64_t id : sep.inside) in_set.push_back(cur[*idx.find(id)]);
    for (int64_t id : sep.outside) out_set.push_back(cur[*idx.find(id)]);
    // inner picks stay strictly inside the cube, outer picks never touch it,
    // and crossers are dropped, so the union stays independent
    std::vector<int64_t> ids = rec(in_set);
    std::vector<int64_t> oids = rec(out_set);
    ids.insert(ids.end(), oids.begin(), oids.end());
    return ids;
  };

  std::vector<int64_t> ids = rec(s);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  ISolution out{std::move(ids), 0.0};
  out.value = double(out.ids.size());
  if (s.size() <= 2000) {
    auto v = check_independent(s, out.ids);
    require(v.ok, "mis_fat_additive: " + v.reason);
  }
  return out;
}

VCSolution vc_fat_promise(const ObjectSet& s, double eps) {
  ISolution mis = mis_fat_additive(s, eps);
  std::unordered_set<int64_t> keep(mis.ids.begin(), mis.ids.end());
  std::vector<int64_t> ids;
  ids.reserve(s.size() - mis.ids.size());
  for (const auto& o : s)
    if (!keep.count(o.id)) ids.push_back(o.id);
  std::sort(ids.begin(), ids.end());
  VCSolution out{std::move(ids)};
  auto v = check_vertex_cover(s, out.ids);
  require(v.ok, "vc_fat_promise: " + v.reason);
  return out;
}

// ---------------------------------------------------------------------------
// rectangle promise solver
// ---------------------------------------------------------------------------

std::pair<ObjectSet, ObjectSet> dominance_decompose(const ObjectSet& s) {
  require_planar_rects(s, "dominance_decompose");
  require(max_depth(s).depth <= 2, "dominance_decompose: depth must be at most 2");
  ObjectSet s1, s2;
  for (const auto& o : s) {
    bool dominated = false;
    for (const auto& p : s) {
      if (p.id != o.id && four_crossing(p.box(), o.box())) {
        dominated = true;
        break;
      }
    }
    (dominated ? s2 : s1).push_back(o);
  }
  return {std::move(s1), std::move(s2)};
}

TriangleRemoval triangle_removal_sweep(const ObjectSet& s) {
  require_planar_rects(s, "triangle_removal_sweep");
  std::vector<double> ys;
  ys.reserve(2 * s.size());
  for (const auto& o : s) {
    ys.push_back(o.box().lo[1]);
    ys.push_back(o.box().hi[1]);
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  auto iy = [&](double v) {
    return int(std::lower_bound(ys.begin(), ys.end(), v) - ys.begin());
  };

  struct Ev {
    double x;
    int kind;  // 0 = enter, 1 = leave; enters first at equal x (closed boxes)
    size_t idx;
  };
  std::vector<Ev> evs;
  evs.reserve(2 * s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    evs.push_back({s[i].box().lo[0], 0, i});
    evs.push_back({s[i].box().hi[0], 1, i});
  }
  std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.idx < b.idx;
  });

  MaxAddSegTree tree(int(ys.size()));
  std::vector<char> active(s.size(), 0), dead(s.size(), 0);
  TriangleRemoval out;
  for (const auto& ev : evs) {
    if (dead[ev.idx]) continue;
    const AxisBox& b = s[ev.idx].box();
    if (ev.kind == 1) {
      if (active[ev.idx]) {
        tree.add(iy(b.lo[1]), iy(b.hi[1]), -1);
        active[ev.idx] = 0;
      }
      continue;
    }
    tree.add(iy(b.lo[1]), iy(b.hi[1]), +1);
    active[ev.idx] = 1;
    const auto [mx, pos] = tree.max_arg();
    if (mx >= 3) {
      // one insertion raises depth by one, so the maximum is exactly 3 and
      // every depth-3 point lies under the new rectangle; removing the three
      // rectangles over one such point restores depth <= 2 everywhere
      require(mx == 3, "triangle_removal_sweep: depth jumped past three");
      const double ystar = ys[size_t(pos)];
      std::array<int64_t, 3> tri{};
      int cnt = 0;
      for (size_t j = 0; j < s.size(); ++j) {
        if (!active[j]) continue;
        const AxisBox& bj = s[j].box();
        if (bj.lo[1] <= ystar && ystar <= bj.hi[1]) {
          require(cnt < 3, "triangle_removal_sweep: more than three rectangles at a depth-3 point");
          tri[size_t(cnt++)] = s[j].id;
          tree.add(iy(bj.lo[1]), iy(bj.hi[1]), -1);
          active[j] = 0;
          dead[j] = 1;
        }
      }
      require(cnt == 3, "triangle_removal_sweep: missing rectangles at a depth-3 point");
      std::sort(tri.begin(), tri.end());
      out.triangles.push_back(tri);
    }
  }
  for (size_t i = 0; i < s.size(); ++i)
    if (!dead[i]) out.remaining.push_back(s[i]);
  require(max_depth(out.remaining).depth <= 2, "triangle_removal_sweep: residual depth exceeds 2");
  return out;
}

ISolution planar_mis_inner(const ObjectSet& s, double eps, bool* exact) {
  require(eps > 0.0, "planar_mis_inner: eps must be positive");
  if (exact) *exact = true;
  const size_t n = s.size();
  if (n == 0) return ISolution{};

  const size_t words = (n + 63) / 64;
  std::vector<uint64_t> adj(n * words, 0);
  auto set_bit = [&](size_t row, size_t j) { adj[row * words + j / 64] |= uint64_t(1) << (j % 64); };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (intersects(s[i], s[j])) {
        set_bit(i, j);
        set_bit(j, i);
      }
  std::vector<uint64_t> full(words, 0);
  for (size_t i = 0; i < n; ++i) full[i / 64] |= uint64_t(1) << (i % 64);

  auto test = [&](const std::vector<uint64_t>& m, size_t v) {
    return (m[v / 64] >> (v % 64)) & 1;
  };
  auto clear = [&](std::vector<uint64_t>& m, size_t v) { m[v / 64] &= ~(uint64_t(1) << (v % 64)); };
  auto deg_in = [&](const std::vector<uint64_t>& m, size_t v) {
    size_t c = 0;
    for (size_t j = 0; j < words; ++j) c += size_t(std::popcount(m[j] & adj[v * words + j]));
    return c;
  };
  auto pop_all = [&](const std::vector<uint64_t>& m) {
    size_t c = 0;
    for (uint64_t w : m) c += size_t(std::popcount(w));
    return c;
  };

  // node budget scaled so total work stays bounded regardless of n
  const double work = std::min(8e8, 1e8 / std::max(eps, 0.05));
  const size_t budget = std::max<size_t>(1000, size_t(work / double(n * words + 1)));
  size_t nodes = 0;
  bool overflow = false;
  std::vector<int> best_pick, cur_pick;

  std::function<void(std::vector<uint64_t>)> rec = [&](std::vector<uint64_t> live) {
    if (overflow) return;
    if (++nodes > budget) {
      overflow = true;
      return;
    }
    const size_t mark = cur_pick.size();
    // take isolated and degree-1 vertices outright
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t v = 0; v < n; ++v) {
        if (!test(live, v)) continue;
        if (deg_in(live, v) <= 1) {
          cur_pick.push_back(int(v));
          for (size_t j = 0; j < words; ++j) live[j] &= ~adj[v * words + j];
          clear(live, v);
          changed = true;
        }
      }
    }
    const size_t rem = pop_all(live);
    if (rem == 0) {
      if (cur_pick.size() > best_pick.size()) best_pick = cur_pick;
      cur_pick.resize(mark);
      return;
    }
    if (cur_pick.size() + rem <= best_pick.size()) {  // cannot beat the incumbent
      cur_pick.resize(mark);
      return;
    }
    size_t bv = SIZE_MAX, bd = 0;
    for (size_t v = 0; v < n; ++v) {
      if (!test(live, v)) continue;
      const size_t dg = deg_in(live, v);
      if (bv == SIZE_MAX || dg > bd) {
        bv = v;
        bd = dg;
      }
    }
    std::vector<uint64_t> take = live;
    for (size_t j = 0; j < words; ++j) take[j] &= ~adj[bv * words + j];
    clear(take, bv);
    cur_pick.push_back(int(bv));
    rec(std::move(take));
    cur_pick.pop_back();
    std::vector<uint64_t> skip = std::move(live);
    clear(skip, bv);
    rec(std::move(skip));
    cur_pick.resize(mark);
  };
  rec(full);

  if (overflow) {
    if (exact) *exact = false;
    // repeatedly take a minimum-degree vertex
    best_pick.clear();
    std::vector<uint64_t> live = full;
    while (true) {
      size_t bv = SIZE_MAX, bd = 0;
      for (size_t v = 0; v < n; ++v) {
        if (!test(live, v)) continue;
        const size_t dg = deg_in(live, v);
        if (bv == SIZE_MAX || dg < bd) {
          bv = v;
          bd = dg;
        }
      }
      if (bv == SIZE_MAX) break;
      best_pick.push_back(int(bv));
      for (size_t j = 0; j < words; ++j) live[j] &= ~adj[bv * words + j];
      clear(live, bv);
    }
  }

  std::vector<int64_t> ids;
  ids.reserve(best_pick.size());
  for (int v : best_pick) ids.push_back(s[size_t(v)].id);
  std::sort(ids.begin(), ids.end());
  ISolution out{std::move(ids), 0.0};
  out.value = double(out.ids.size());
  auto v = check_independent(s, out.ids);
  require(v.ok, "planar_mis_inner: " + v.reason);
  return out;
}

VCSolution vc_rects_trifree_promise(const ObjectSet& s, double eps) {
  require_planar_rects(s, "vc_rects_trifree_promise");
  require(max_depth(s).depth <= 2, "vc_rects_trifree_promise: depth must be at most 2");
  auto parts = dominance_decompose(s);

  auto solve_part = [&](const ObjectSet& part) {
    // containment removal preserves the independence number, so the
    // complement against the full part is still a minimum-size cover
    ObjectSet reduced = drop_containers(part);
    ISolution mis = planar_mis_inner(reduced, eps, nullptr);
    std::unordered_set<int64_t> keep(mis.ids.begin(), mis.ids.end());
    std::vector<int64_t> cover;
    for (const auto& o : part)
      if (!keep.count(o.id)) cover.push_back(o.id);
    return cover;
  };

  std::vector<int64_t> a = solve_part(parts.first);   // X1
  std::vector<int64_t> b = solve_part(parts.second);  // X2
  for (const auto& o : parts.second) a.push_back(o.id);
  for (const auto& o : parts.first) b.push_back(o.id);
  std::vector<int64_t>& pick = a.size() <= b.size() ? a : b;
  std::sort(pick.begin(), pick.end());
  pick.erase(std::unique(pick.begin(), pick.end()), pick.end());
  VCSolution out{std::move(pick)};
  auto v = check_vertex_cover(s, out.ids);
  require(v.ok, "vc_rects_trifree_promise: " + v.reason);
  return out;
}

VCSolution vc_rects_promise(const ObjectSet& s, double eps) {
  TriangleRemoval tr = triangle_removal_sweep(s);
  VCSolution base = vc_rects_trifree_promise(tr.remaining, eps);
  std::vector<int64_t> ids = std::move(base.ids);
  for (const auto& t : tr.triangles) ids.insert(ids.end(), t.begin(), t.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  VCSolution out{std::move(ids)};
  auto v = check_vertex_cover(s, out.ids);
  require(v.ok, "vc_rects_promise: " + v.reason);
  return out;
}

VCSolution vc_bipartite_promise(const ObjectSet& a, const ObjectSet& b) {
  const ObjectSet& pick = b.size() < a.size() ? b : a;
  std::vector<int64_t> ids;
  ids.reserve(pick.size());
  for (const auto& o : pick) ids.push_back(o.id);
  std::sort(ids.begin(), ids.end());
  ObjectSet all = a;
  all.insert(all.end(), b.begin(), b.end());
  VCSolution out{std::move(ids)};
  auto v = check_vertex_cover(all, out.ids);
  require(v.ok, "vc_bipartite_promise: an edge joins two objects of the same side");
  return out;
}

PromiseSolver fat_promise_solver(double eps) {
  return [eps](const ObjectSet& s) { return vc_fat_promise(s, eps); };
}

PromiseSolver rect_promise_solver(double eps) {
  return [eps](const ObjectSet& s) { return vc_rects_promise(s, eps); };
}

PromiseSolver bipartite_promise_solver() {
  return [](const ObjectSet& s) {
    ObjectSet a, b;
    for (const auto& o : s) {
      require(o.color == Color::A || o.color == Color::B,
              "bipartite_promise_solver: every object needs a side color");
      (o.color == Color::A ? a : b).push_back(o);
    }
    return vc_bipartite_promise(a, b);
  };
}

// ---------------------------------------------------------------------------
// dynamic cover
// ---------------------------------------------------------------------------

struct DynVC::Impl {
  double eps, gamma, delta, inner_ratio;
  PromiseSolver inner;

  ObjectSet live;
  std::unordered_map<int64_t, size_t> pos;
  std::unique_ptr<MinWeightEdgeOracle> oracle = naive_min_weight_edge_oracle();
  size_t phases = 0;
  size_t update_stamp = 0;
  size_t matching_stamp = std::numeric_limits<size_t>::max();
  size_t matching_lb = 0;

  // one lazily maintained cover per guessed optimum range [b, 2b)
  struct Instance {
    size_t b = 1;
    size_t phase_len = 1;
    std::set<int64_t> cover;
    size_t updates = 0;
    bool mwu_ok = false;
    size_t backoff = 0;    // phases to sit out after a failed budget
    size_t skip_left = 0;
  };
  std::vector<Instance> instances;

  Impl(double e, double g, double dl, PromiseSolver in, double ratio)
      : eps(e), gamma(g), delta(dl), inner_ratio(ratio), inner(std::move(in)) {
    require(eps > 0.0, "DynVC: eps must be positive");
    require(delta > 0.0 && delta < gamma && gamma < 0.25, "DynVC: need 0 < delta < gamma < 1/4");
    require(inner_ratio >= 1.0, "DynVC: inner ratio must be at least 1");
    require(static_cast<bool>(inner), "DynVC: inner solver required");
  }

  // greedy maximal matching size: a lower bound on every vertex cover,
  // recomputed at most once per update
  size_t matching_bound() {
    if (matching_stamp == update_stamp) return matching_lb;
    matching_stamp = update_stamp;
    std::vector<char> used(live.size(), 0);
    size_t m = 0;
    for (size_t i = 0; i < live.size(); ++i) {
      if (used[i]) continue;
      for (size_t j = i + 1; j < live.size(); ++j) {
        if (used[j]) continue;
        if (intersects(live[i], live[j])) {
          used[i] = used[j] = 1;
          ++m;
          break;
        }
      }
    }
    matching_lb = m;
    return m;
  }

  void fallback_cover(Instance& ins) {
    ins.cover.clear();
    for (const auto& o : live) ins.cover.insert(o.id);
  }

  void ensure_instances() {
    size_t need = 1;
    while (need < 2 * std::max<size_t>(live.size(), 1)) need *= 2;
    for (size_t b = instances.empty() ? 1 : instances.back().b * 2; b <= need; b *= 2) {
      Instance ins;
      ins.b = b;
      ins.phase_len = std::max<size_t>(1, size_t(std::ceil(eps * double(b))));
      for (const auto& o : live) ins.cover.insert(o.id);
      ins.updates = ins.phase_len;  // recompute on the next update
      instances.push_back(std::move(ins));
    }
  }

  void recompute(Instance& ins) {
    ins.updates = 0;
    if (ins.skip_left > 0) {
      --ins.skip_left;
      return;
    }
    if (live.empty() || matching_bound() == 0) {
      ins.cover.clear();  // no intersecting pair, nothing to cover
      ins.mwu_ok = true;
      ins.backoff = 0;
      return;
    }
    if (matching_bound() > 2 * ins.b) {
      // the optimum certifiably exceeds this guess; keep the trivial cover
      ins.mwu_ok = false;
      fallback_cover(ins);
      return;
    }
    const double z = std::max(1.0, 2.0 * (1.0 + delta) * double(ins.b));
    auto fr = mwu_try_budget(*oracle, live.size(), z, delta, nullptr);
    if (!fr) {
      // budget refuted: guess too small; retry with exponential backoff
      ins.mwu_ok = false;
      ins.backoff = std::min<size_t>(ins.backoff == 0 ? 1 : 2 * ins.backoff, 8);
      ins.skip_left = ins.backoff;
      fallback_cover(ins);
      return;
    }
    KernelResult kr = kernelize(*fr, gamma, delta);
    VCSolution sol = vc_from_kernel(live, kr, inner);
    ins.cover = std::set<int64_t>(sol.ids.begin(), sol.ids.end());
    ins.mwu_ok = true;
    ins.backoff = 0;
    ++phases;
  }

  void apply_insert(const GeomObject& o) {
    require(pos.find(o.id) == pos.end(), "DynVC: duplicate id");
    pos[o.id] = live.size();
    live.push_back(o);
    oracle->insert(o);
    ++update_stamp;
    ensure_instances();
    for (auto& ins : instances) {
      ins.cover.insert(o.id);  // the new vertex covers all of its own edges
      if (++ins.updates >= ins.phase_len) recompute(ins);
    }
  }

  void apply_erase(int64_t id) {
    auto it = pos.find(id);
    require(it != pos.end(), "DynVC: erase of unknown id");
    const size_t i = it->second;
    pos.erase(it);
    const size_t last = live.size() - 1;
    if (i != last) {
      live[i] = std::move(live[last]);
      pos[live[i].id] = i;
    }
    live.pop_back();
    oracle->remove(id);
    ++update_stamp;
    for (auto& ins : instances) {
      ins.cover.erase(id);  // only edges of the deleted vertex lose coverage
      if (++ins.updates >= ins.phase_len) recompute(ins);
    }
  }

  const Instance* best_instance() const {
    const Instance* best = nullptr;
    for (const auto& ins : instances)
      if (!best || ins.cover.size() < best->cover.size()) best = &ins;
    return best;
  }
};

DynVC::DynVC(double eps, double gamma, double delta, PromiseSolver inner, double inner_ratio)
    : impl_(std::make_unique<Impl>(eps, gamma, delta, std::move(inner), inner_ratio)) {}
DynVC::~DynVC() = default;
DynVC::DynVC(DynVC&&) noexcept = default;
DynVC& DynVC::operator=(DynVC&&) noexcept = default;

void DynVC::insert(const GeomObject& o) { impl_->apply_insert(o); }
void DynVC::erase(int64_t id) { impl_->apply_erase(id); }

VCSolution DynVC::current() const {
  const Impl::Instance* best = impl_->best_instance();
  VCSolution out;
  if (best) out.ids.assign(best->cover.begin(), best->cover.end());
  return out;
}

double DynVC::optimum_estimate() const {
  const Impl::Instance* best = impl_->best_instance();
  if (!best) return 0.0;
  return double(best->cover.size()) / impl_->inner_ratio;
}

size_t DynVC::size() const { return impl_->live.size(); }
size_t DynVC::phase_count() const { return impl_->phases; }

}  // namespace geo
