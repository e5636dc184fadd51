#include "geoapprox/geom.hpp"

#include <algorithm>
#include <cmath>

namespace geo {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

AxisBox bbox(const GeomObject& o) {
  if (o.is_box()) return o.box();
  const Disk& d = o.disk();
  AxisBox b;
  b.lo = make_point(d.center[0] - d.radius, d.center[1] - d.radius);
  b.hi = make_point(d.center[0] + d.radius, d.center[1] + d.radius);
  return b;
}

double linf_diameter(const GeomObject& o) {
  if (o.is_disk()) return 2.0 * o.disk().radius;
  const AxisBox& b = o.box();
  double w = 0;
  for (int k = 0; k < b.dim(); ++k) w = std::max(w, b.extent(k));
  return w;
}

bool contains(const AxisBox& b, const Point& p) {
  require(b.dim() == p.dim, "contains: dimension mismatch");
  for (int k = 0; k < p.dim; ++k)
    if (p[k] < b.lo[k] || p[k] > b.hi[k]) return false;
  return true;
}

bool contains(const Disk& d, const Point& p) {
  require(p.dim == 2, "contains: disk is planar");
  return dist2_le_exact(d.center[0], d.center[1], p[0], p[1], d.radius);
}

bool contains(const GeomObject& o, const Point& p) {
  return o.is_box() ? contains(o.box(), p) : contains(o.disk(), p);
}

bool intersects(const AxisBox& a, const AxisBox& b) {
  require(a.dim() == b.dim(), "intersects: dimension mismatch");
  for (int k = 0; k < a.dim(); ++k)
    if (a.lo[k] > b.hi[k] || b.lo[k] > a.hi[k]) return false;
  return true;
}

bool intersects(const Disk& a, const Disk& b) {
  return dist2_le_exact(a.center[0], a.center[1], b.center[0], b.center[1],
                        a.radius + b.radius);
}

bool intersects(const AxisBox& b, const Disk& d) {
  require(b.dim() == 2, "intersects: box-disk needs d=2");
  // closest point of the box to the disk center
  double qx = std::clamp(d.center[0], b.lo[0], b.hi[0]);
  double qy = std::clamp(d.center[1], b.lo[1], b.hi[1]);
  return dist2_le_exact(qx, qy, d.center[0], d.center[1], d.radius);
}

bool intersects(const GeomObject& a, const GeomObject& b) {
  if (a.is_box() && b.is_box()) return intersects(a.box(), b.box());
  if (a.is_disk() && b.is_disk()) return intersects(a.disk(), b.disk());
  if (a.is_box()) return intersects(a.box(), b.disk());
  return intersects(b.box(), a.disk());
}

Point inner_point(const GeomObject& o) {
  if (o.is_disk()) return o.disk().center;
  const AxisBox& b = o.box();
  Point p;
  p.dim = b.dim();
  for (int k = 0; k < p.dim; ++k) p[k] = b.lo[k] + 0.5 * (b.hi[k] - b.lo[k]);
  return p;
}

// Decide (ax-bx)^2 + (ay-by)^2 <= rhs^2 exactly when the inputs are dyadic
// rationals that scale into 26-bit integers (then every product fits a double
// and an int64 without rounding). Otherwise the plain double evaluation is
// used; it is still deterministic, just not tie-exact for adversarial inputs.
bool dist2_le_exact(double ax, double ay, double bx, double by, double rhs) {
  double dx = ax - bx, dy = ay - by;
  // try the scaled-integer route
  for (int shift = 0; shift <= 26; ++shift) {
    double s = std::ldexp(1.0, shift);
    double vals[3] = {dx * s, dy * s, rhs * s};
    bool ok = true;
    for (double v : vals) {
      if (!(std::abs(v) <= 67108864.0) || v != std::nearbyint(v)) { ok = false; break; }
    }
    if (ok) {
      int64_t ix = static_cast<int64_t>(vals[0]);
      int64_t iy = static_cast<int64_t>(vals[1]);
      int64_t ir = static_cast<int64_t>(vals[2]);
      if (ir < 0) return false;
      return ix * ix + iy * iy <= ir * ir;
    }
    // values with a fractional part keep scaling; values already too big bail out
    if (std::abs(dx * s) > 67108864.0 || std::abs(dy * s) > 67108864.0 ||
        std::abs(rhs * s) > 67108864.0)
      break;
  }
  if (rhs < 0) return false;
  return dx * dx + dy * dy <= rhs * rhs;
}

IdIndex::IdIndex(const ObjectSet& s) {
  ids.reserve(s.size());
  for (const auto& o : s) ids.push_back(o.id);
  order_.resize(s.size());
  for (size_t i = 0; i < s.size(); ++i) order_[i] = i;
  std::sort(order_.begin(), order_.end(),
            [&](size_t a, size_t b) { return ids[a] < ids[b]; });
}

std::optional<size_t> IdIndex::find(int64_t id) const {
  auto it = std::lower_bound(order_.begin(), order_.end(), id,
                             [&](size_t a, int64_t v) { return ids[a] < v; });
  if (it == order_.end() || ids[*it] != id) return std::nullopt;
  return *it;
}

}  // namespace geo
