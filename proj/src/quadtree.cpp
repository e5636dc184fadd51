#include "geoapprox/quadtree.hpp"

#include <algorithm>
#include <cmath>

namespace geo {

namespace {
constexpr double kDomainHi = 1048576.0;  // 2^20
constexpr int kMinLevel = -25;

void check_domain(const AxisBox& b) {
  for (int k = 0; k < b.dim(); ++k) {
    require(std::isfinite(b.lo[k]) && std::isfinite(b.hi[k]), "quadtree: non-finite coordinate");
    require(b.lo[k] >= 0.0 && b.hi[k] < kDomainHi, "quadtree: object outside supported domain");
  }
}
}  // namespace

double QuadtreeBox::side() const { return std::ldexp(1.0, -level); }
double QuadtreeBox::coord_lo(int k) const {
  return std::ldexp(static_cast<double>(idx[static_cast<size_t>(k)]), -level);
}
double QuadtreeBox::coord_hi(int k) const {
  return std::ldexp(static_cast<double>(idx[static_cast<size_t>(k)] + 1), -level);
}

AxisBox QuadtreeBox::to_box() const {
  AxisBox r;
  r.lo.dim = r.hi.dim = dim;
  for (int k = 0; k < dim; ++k) {
    r.lo[k] = coord_lo(k);
    r.hi[k] = coord_hi(k);
  }
  return r;
}

bool QuadtreeBox::operator==(const QuadtreeBox& o) const {
  if (whole_space != o.whole_space) return false;
  if (whole_space) return dim == o.dim;
  if (level != o.level || dim != o.dim) return false;
  for (int k = 0; k < dim; ++k) if (idx[size_t(k)] != o.idx[size_t(k)]) return false;
  return true;
}

bool qbox_contains_point(const QuadtreeBox& b, const Point& p) {
  if (b.whole_space) return true;
  for (int k = 0; k < b.dim; ++k) {
    double scaled = std::ldexp(p[k], b.level);
    if (std::floor(scaled) != static_cast<double>(b.idx[size_t(k)])) return false;
  }
  return true;
}

bool qbox_contains_object(const QuadtreeBox& b, const AxisBox& r) {
  if (b.whole_space) return true;
  for (int k = 0; k < b.dim; ++k) {
    if (r.lo[k] < b.coord_lo(k) || r.hi[k] > b.coord_hi(k)) return false;
  }
  return true;
}

bool qbox_within(const QuadtreeBox& inner, const QuadtreeBox& outer) {
  if (outer.whole_space) return !inner.whole_space;
  if (inner.whole_space) return false;
  if (inner.level < outer.level) return false;
  if (inner.level == outer.level) return false;  // equal or sibling, not strict
  for (int k = 0; k < outer.dim; ++k) {
    int64_t anc = inner.idx[size_t(k)] >> (inner.level - outer.level);
    if (anc != outer.idx[size_t(k)]) return false;
  }
  return true;
}

QuadtreeBox smallest_enclosing_qbox(const std::vector<Point>& pts, int max_level) {
  require(!pts.empty(), "smallest_enclosing_qbox: empty point set");
  int d = pts[0].dim;
  AxisBox bb;
  bb.lo = bb.hi = pts[0];
  for (const auto& p : pts) {
    require(p.dim == d, "smallest_enclosing_qbox: dimension mismatch");
    for (int k = 0; k < d; ++k) {
      bb.lo[k] = std::min(bb.lo[k], p[k]);
      bb.hi[k] = std::max(bb.hi[k], p[k]);
    }
  }
  check_domain(bb);
  // largest level where min and max land in the same half-open cell per axis
  for (int lv = max_level; lv >= kMinLevel; --lv) {
    bool same = true;
    for (int k = 0; k < d && same; ++k)
      same = std::floor(std::ldexp(bb.lo[k], lv)) == std::floor(std::ldexp(bb.hi[k], lv));
    if (same) {
      QuadtreeBox q;
      q.level = lv;
      q.dim = d;
      for (int k = 0; k < d; ++k)
        q.idx[size_t(k)] = static_cast<int64_t>(std::floor(std::ldexp(bb.lo[k], lv)));
      return q;
    }
  }
  throw std::invalid_argument("smallest_enclosing_qbox: domain exhausted");
}

std::optional<QuadtreeBox> smallest_enclosing_qbox(const AxisBox& r, int min_level) {
  check_domain(r);
  int d = r.dim();
  double w = 0;
  for (int k = 0; k < d; ++k) w = std::max(w, r.extent(k));
  // start at the deepest level whose boxes could still fit the object
  int lv = 0;
  if (w > 0) {
    while (lv < 50 && std::ldexp(1.0, -(lv + 1)) >= w) ++lv;
    while (lv > min_level && std::ldexp(1.0, -lv) < w) --lv;
  } else {
    lv = 50;
  }
  for (; lv >= min_level; --lv) {
    bool ok = true;
    QuadtreeBox q;
    q.level = lv;
    q.dim = d;
    for (int k = 0; k < d && ok; ++k) {
      double i = std::floor(std::ldexp(r.lo[k], lv));
      q.idx[size_t(k)] = static_cast<int64_t>(i);
      ok = r.hi[k] <= std::ldexp(i + 1.0, -lv);
    }
    if (ok) return q;
  }
  return std::nullopt;
}

bool is_good(const GeomObject& o, double c0) {
  require(c0 > 0, "is_good: c0 must be positive");
  double w = linf_diameter(o);
  if (w <= 0) return false;
  auto q = smallest_enclosing_qbox(bbox(o));
  if (!q) return false;
  return q->side() <= c0 * w;
}

std::vector<Point> shifts(int d) {
  require(d >= 2 && d <= kMaxDim, "shifts: dimension out of range");
  std::vector<Point> out;
  for (int j = 0; j <= d; ++j) {
    Point v;
    v.dim = d;
    for (int k = 0; k < d; ++k) v[k] = static_cast<double>(j) / (d + 1);
    out.push_back(v);
  }
  return out;
}

std::vector<Point> pipeline_shifts(int d) {
  require(d >= 2 && d <= kMaxDim, "pipeline_shifts: dimension out of range");
  int count = (d % 2 == 0) ? d + 1 : d + 2;
  std::vector<Point> out;
  for (int j = 0; j < count; ++j) {
    Point v;
    v.dim = d;
    for (int k = 0; k < d; ++k) v[k] = static_cast<double>(j) / count;
    out.push_back(v);
  }
  return out;
}

GeomObject shift_object(const GeomObject& o, const Point& v) {
  GeomObject s = o;
  if (s.is_box()) {
    AxisBox b = s.box();
    require(b.dim() == v.dim, "shift_object: dimension mismatch");
    for (int k = 0; k < v.dim; ++k) {
      b.lo[k] += v[k];
      b.hi[k] += v[k];
    }
    s.shape = b;
  } else {
    Disk dk = s.disk();
    require(v.dim == 2, "shift_object: dimension mismatch");
    dk.center[0] += v[0];
    dk.center[1] += v[1];
    s.shape = dk;
  }
  return s;
}

// ── cells ─────────────────────────────────────────────────────────────────

bool cell_contains_point(const Cell& c, const Point& p) {
  if (!qbox_contains_point(c.outer, p)) return false;
  if (c.inner && qbox_contains_point(*c.inner, p)) return false;
  return true;
}

namespace {
// closed bbox strictly inside the open interior of a qbox
bool bbox_strictly_in(const QuadtreeBox& q, const AxisBox& r) {
  if (q.whole_space) return true;
  for (int k = 0; k < q.dim; ++k)
    if (r.lo[k] <= q.coord_lo(k) || r.hi[k] >= q.coord_hi(k)) return false;
  return true;
}
// closed bbox disjoint from the closed qbox
bool bbox_disjoint_closed(const QuadtreeBox& q, const AxisBox& r) {
  if (q.whole_space) return false;
  for (int k = 0; k < q.dim; ++k)
    if (r.hi[k] < q.coord_lo(k) || r.lo[k] > q.coord_hi(k)) return true;
  return false;
}
}  // namespace

bool object_strictly_inside(const Cell& c, const GeomObject& o) {
  AxisBox r = bbox(o);
  if (!bbox_strictly_in(c.outer, r)) return false;
  if (c.inner && !bbox_disjoint_closed(*c.inner, r)) return false;
  return true;
}

bool object_touches_cell(const Cell& c, const GeomObject& o) {
  // o intersects closure(outer) and is not swallowed by the open inner hole
  if (!c.outer.whole_space) {
    AxisBox ob = c.outer.to_box();
    bool hit = o.is_box() ? intersects(o.box(), ob) : intersects(ob, o.disk());
    if (!hit) return false;
  }
  if (c.inner && bbox_strictly_in(*c.inner, bbox(o))) return false;
  return true;
}

int64_t locate_cell(const std::vector<Cell>& cells, const Point& p) {
  for (size_t i = 0; i < cells.size(); ++i)
    if (cell_contains_point(cells[i], p)) return static_cast<int64_t>(i);
  return -1;
}

// ── partition ─────────────────────────────────────────────────────────────

namespace {

struct Carver {
  const std::vector<Point>& pts;
  size_t cap;  // max points per cell
  std::vector<Cell> out;

  QuadtreeBox enclosing(const std::vector<size_t>& is) const {
    std::vector<Point> sub;
    sub.reserve(is.size());
    for (size_t i : is) sub.push_back(pts[i]);
    return smallest_enclosing_qbox(sub);
  }

  void carve(QuadtreeBox box, std::vector<size_t> is) {
    if (is.size() <= cap) {
      out.push_back({box, std::nullopt});
      return;
    }
    QuadtreeBox tight = enclosing(is);
    if (!(tight == box)) {
      out.push_back({box, tight});  // empty annulus between box and tight
      box = tight;
    }
    if (box.level >= 50) {
      // coincident points cannot be separated further; overfull cell, documented
      out.push_back({box, std::nullopt});
      return;
    }
    // split into the 2^d children, grouping points by half-open membership
    int d = box.dim;
    int nch = 1 << d;
    std::vector<std::vector<size_t>> groups(static_cast<size_t>(nch));
    for (size_t i : is) {
      int child = 0;
      for (int k = 0; k < d; ++k) {
        int64_t ci = static_cast<int64_t>(std::floor(std::ldexp(pts[i][k], box.level + 1)));
        if (ci & 1) child |= 1 << k;
      }
      groups[static_cast<size_t>(child)].push_back(i);
    }
    for (int ch = 0; ch < nch; ++ch) {
      QuadtreeBox cb;
      cb.level = box.level + 1;
      cb.dim = d;
      for (int k = 0; k < d; ++k)
        cb.idx[size_t(k)] = box.idx[size_t(k)] * 2 + ((ch >> k) & 1);
      auto& g = groups[static_cast<size_t>(ch)];
      if (g.empty())
        out.push_back({cb, std::nullopt});
      else
        carve(cb, std::move(g));
    }
  }
};

}  // namespace

std::vector<Cell> quadtree_partition(const std::vector<Point>& pts, int64_t b) {
  int64_t n = static_cast<int64_t>(pts.size());
  require(n >= 1, "quadtree_partition: need at least one point");
  require(b >= 1 && b <= n, "quadtree_partition: b out of range");
  int d = pts[0].dim;

  QuadtreeBox whole;
  whole.whole_space = true;
  whole.dim = d;
  if (b == 1) return {{whole, std::nullopt}};

  QuadtreeBox root = smallest_enclosing_qbox(pts);
  Carver cv{pts, static_cast<size_t>(std::max<int64_t>(1, (2 * n + b - 1) / b)), {}};
  cv.out.push_back({whole, root});  // unbounded leftover, holds no input point
  std::vector<size_t> all(pts.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  cv.carve(root, std::move(all));
  return std::move(cv.out);
}

}  // namespace geo
