#include "geoapprox/depth.hpp"

#include <algorithm>
#include <cmath>

namespace geo {

int64_t depth_at(const ObjectSet& s, const Point& p) {
  int64_t c = 0;
  for (const auto& o : s) c += contains(o, p) ? 1 : 0;
  return c;
}

MaxAddSegTree::MaxAddSegTree(int n) { reset(n); }

void MaxAddSegTree::reset(int n) {
  n_ = n;
  t_.assign(n > 0 ? 4 * static_cast<size_t>(n) : 1, Node{});
  if (n_ > 0) build(1, 0, n_ - 1);
}

void MaxAddSegTree::build(int node, int lo, int hi) {
  t_[node].arg = lo;
  if (lo == hi) return;
  int mid = lo + (hi - lo) / 2;
  build(2 * node, lo, mid);
  build(2 * node + 1, mid + 1, hi);
}

void MaxAddSegTree::add(int lo, int hi, int64_t v) {
  if (n_ == 0 || lo > hi) return;
  add(1, 0, n_ - 1, std::max(lo, 0), std::min(hi, n_ - 1), v);
}

void MaxAddSegTree::add(int node, int lo, int hi, int qlo, int qhi, int64_t v) {
  if (qhi < lo || hi < qlo) return;
  if (qlo <= lo && hi <= qhi) {
    t_[node].mx += v;
    t_[node].lazy += v;
    return;
  }
  int mid = lo + (hi - lo) / 2;
  add(2 * node, lo, mid, qlo, qhi, v);
  add(2 * node + 1, mid + 1, hi, qlo, qhi, v);
  const Node& l = t_[2 * node];
  const Node& r = t_[2 * node + 1];
  t_[node].mx = std::max(l.mx, r.mx) + t_[node].lazy;
  t_[node].arg = (r.mx > l.mx) ? r.arg : l.arg;
}

std::pair<int64_t, int> MaxAddSegTree::max_arg() const {
  if (n_ == 0) return {0, -1};
  return {t_[1].mx, t_[1].arg};
}

namespace {

// d=2 sweep over x events; depth counted on compressed y intervals
DepthResult sweep_boxes_2d(const ObjectSet& s) {
  std::vector<double> ys;
  ys.reserve(2 * s.size());
  for (const auto& o : s) {
    ys.push_back(o.box().lo[1]);
    ys.push_back(o.box().hi[1]);
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  auto yidx = [&](double v) {
    return static_cast<int>(std::lower_bound(ys.begin(), ys.end(), v) - ys.begin());
  };

  struct Ev { double x; size_t i; };
  std::vector<Ev> ins, del;
  std::vector<double> xs;
  for (size_t i = 0; i < s.size(); ++i) {
    ins.push_back({s[i].box().lo[0], i});
    del.push_back({s[i].box().hi[0], i});
    xs.push_back(s[i].box().lo[0]);
    xs.push_back(s[i].box().hi[0]);
  }
  auto by_x = [](const Ev& a, const Ev& b) { return a.x < b.x; };
  std::sort(ins.begin(), ins.end(), by_x);
  std::sort(del.begin(), del.end(), by_x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  MaxAddSegTree tree(static_cast<int>(ys.size()));
  DepthResult best;
  size_t pi = 0, pd = 0;
  for (double x : xs) {
    while (pd < del.size() && del[pd].x < x) {  // closed boxes: drop only past hi
      const auto& b = s[del[pd].i].box();
      tree.add(yidx(b.lo[1]), yidx(b.hi[1]), -1);
      ++pd;
    }
    while (pi < ins.size() && ins[pi].x == x) {
      const auto& b = s[ins[pi].i].box();
      tree.add(yidx(b.lo[1]), yidx(b.hi[1]), +1);
      ++pi;
    }
    auto [mx, arg] = tree.max_arg();
    if (mx > best.depth) {
      best.depth = mx;
      best.witness = make_point(x, ys[static_cast<size_t>(arg)]);
    }
  }
  return best;
}

DepthResult scan_boxes_1d(const ObjectSet& s) {
  DepthResult best;
  for (const auto& o : s) {
    double x = o.box().lo[0];
    int64_t c = 0;
    for (const auto& q : s)
      if (q.box().lo[0] <= x && x <= q.box().hi[0]) ++c;
    if (c > best.depth) {
      best.depth = c;
      Point p;
      p.dim = 1;
      p.c[0] = x;
      best.witness = p;
    }
  }
  return best;
}

GeomObject project_drop_last(const GeomObject& o) {
  const auto& b = o.box();
  AxisBox r;
  r.lo = b.lo;
  r.hi = b.hi;
  r.lo.dim = b.lo.dim - 1;
  r.hi.dim = b.hi.dim - 1;
  return make_obj(o.id, r, o.weight, o.color);
}

DepthResult sweep_boxes_rec(const ObjectSet& s) {
  int d = s.front().dim();
  if (d == 1) return scan_boxes_1d(s);
  if (d == 2) return sweep_boxes_2d(s);
  int ax = d - 1;
  std::vector<double> vs;
  for (const auto& o : s) vs.push_back(o.box().lo[ax]);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  DepthResult best;
  for (double v : vs) {
    ObjectSet slab;
    for (const auto& o : s)
      if (o.box().lo[ax] <= v && v <= o.box().hi[ax]) slab.push_back(project_drop_last(o));
    if (slab.empty()) continue;
    DepthResult sub = sweep_boxes_rec(slab);
    if (sub.depth > best.depth) {
      best.depth = sub.depth;
      Point p = *sub.witness;
      p.dim = d;
      p.c[static_cast<size_t>(ax)] = v;
      best.witness = p;
    }
  }
  return best;
}

void push_candidate(std::vector<Point>& out, double x, double y) {
  out.push_back(make_point(x, y));
}

// boundary-boundary intersection candidates for 2d sets containing disks
std::vector<Point> candidates_2d(const ObjectSet& s) {
  std::vector<Point> cand;
  std::vector<double> xs, ys;
  for (const auto& o : s) {
    cand.push_back(inner_point(o));
    if (o.is_box()) {
      xs.push_back(o.box().lo[0]);
      xs.push_back(o.box().hi[0]);
      ys.push_back(o.box().lo[1]);
      ys.push_back(o.box().hi[1]);
    } else {
      const auto& dk = o.disk();
      double cx = dk.center[0], cy = dk.center[1], r = dk.radius;
      push_candidate(cand, cx - r, cy);
      push_candidate(cand, cx + r, cy);
      push_candidate(cand, cx, cy - r);
      push_candidate(cand, cx, cy + r);
    }
  }
  for (double x : xs)
    for (double y : ys) push_candidate(cand, x, y);
  for (size_t i = 0; i < s.size(); ++i) {
    if (!s[i].is_disk()) continue;
    const auto& a = s[i].disk();
    for (size_t j = 0; j < s.size(); ++j) {
      if (i == j) continue;
      if (s[j].is_disk()) {
        if (j < i) continue;
        const auto& b = s[j].disk();
        double dx = b.center[0] - a.center[0], dy = b.center[1] - a.center[1];
        double d2 = dx * dx + dy * dy;
        if (d2 == 0.0) continue;
        double t = (a.radius * a.radius - b.radius * b.radius + d2) / (2.0 * d2);
        double h2 = a.radius * a.radius - t * t * d2;
        if (h2 < 0.0) continue;
        double h = std::sqrt(h2 / d2);
        double px = a.center[0] + t * dx, py = a.center[1] + t * dy;
        push_candidate(cand, px - h * dy, py + h * dx);
        push_candidate(cand, px + h * dy, py - h * dx);
      } else {
        const auto& b = s[j].box();
        // circle against the four box edges
        for (int side = 0; side < 2; ++side) {
          double x = side ? b.hi[0] : b.lo[0];
          double q = a.radius * a.radius - (x - a.center[0]) * (x - a.center[0]);
          if (q >= 0.0) {
            double rt = std::sqrt(q);
            for (double y : {a.center[1] - rt, a.center[1] + rt})
              if (b.lo[1] <= y && y <= b.hi[1]) push_candidate(cand, x, y);
          }
          double y = side ? b.hi[1] : b.lo[1];
          q = a.radius * a.radius - (y - a.center[1]) * (y - a.center[1]);
          if (q >= 0.0) {
            double rt = std::sqrt(q);
            for (double xx : {a.center[0] - rt, a.center[0] + rt})
              if (b.lo[0] <= xx && xx <= b.hi[0]) push_candidate(cand, xx, y);
          }
        }
      }
    }
  }
  return cand;
}

// pure boxes: the deepest cell has a corner at per-axis lo coordinates
DepthResult naive_boxes(const ObjectSet& s) {
  int d = s.front().dim();
  std::vector<std::vector<double>> axes(static_cast<size_t>(d));
  for (int a = 0; a < d; ++a) {
    for (const auto& o : s) axes[static_cast<size_t>(a)].push_back(o.box().lo[a]);
    auto& v = axes[static_cast<size_t>(a)];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  DepthResult best;
  Point p;
  p.dim = d;
  std::vector<size_t> at(static_cast<size_t>(d), 0);
  while (true) {
    for (int a = 0; a < d; ++a) p.c[static_cast<size_t>(a)] = axes[static_cast<size_t>(a)][at[static_cast<size_t>(a)]];
    int64_t c = depth_at(s, p);
    if (c > best.depth) {
      best.depth = c;
      best.witness = p;
    }
    int a = 0;
    while (a < d) {
      if (++at[static_cast<size_t>(a)] < axes[static_cast<size_t>(a)].size()) break;
      at[static_cast<size_t>(a)] = 0;
      ++a;
    }
    if (a == d) break;
  }
  return best;
}

}  // namespace

DepthResult max_depth_naive(const ObjectSet& s) {
  if (s.empty()) return {};
  bool all_boxes = std::all_of(s.begin(), s.end(), [](const GeomObject& o) { return o.is_box(); });
  if (all_boxes) return naive_boxes(s);
  require(s.front().dim() == 2, "disk depth requires dimension 2");
  DepthResult best;
  for (const auto& p : candidates_2d(s)) {
    int64_t c = depth_at(s, p);
    if (c > best.depth) {
      best.depth = c;
      best.witness = p;
    }
  }
  return best;
}

DepthResult max_depth(const ObjectSet& s) {
  if (s.empty()) return {};
  bool all_boxes = std::all_of(s.begin(), s.end(), [](const GeomObject& o) { return o.is_box(); });
  if (all_boxes) return sweep_boxes_rec(s);
  return max_depth_naive(s);
}

}  // namespace geo
