#pragma once
// Shared scaffolding for the fat-object pipelines: uniform rescale of an
// instance into [0.025, 0.475]^d so that every diagonally shifted copy stays
// inside the quadtree helpers' supported domain, plus the inverse transform
// for solution points.

#include <array>

#include "geoapprox/geom.hpp"

namespace geo::detail {

struct NormMap {
  int dim = 2;
  double sc = 1.0;
  std::array<double, kMaxDim> off{};

  static NormMap fit(const ObjectSet& s) {
    NormMap m;
    m.dim = s.empty() ? 2 : s[0].dim();
    if (s.empty()) return m;
    AxisBox world = bbox(s[0]);
    for (const auto& o : s) {
      AxisBox bb = bbox(o);
      for (int a = 0; a < m.dim; ++a) {
        world.lo[a] = std::min(world.lo[a], bb.lo[a]);
        world.hi[a] = std::max(world.hi[a], bb.hi[a]);
      }
    }
    double maxext = 0.0;
    for (int a = 0; a < m.dim; ++a) maxext = std::max(maxext, world.hi[a] - world.lo[a]);
    m.sc = maxext > 0 ? 0.45 / maxext : 1.0;
    for (int a = 0; a < m.dim; ++a) m.off[static_cast<size_t>(a)] = 0.025 - m.sc * world.lo[a];
    return m;
  }

  GeomObject apply(const GeomObject& o) const {
    GeomObject r = o;
    if (o.is_box()) {
      AxisBox b = o.box();
      for (int a = 0; a < b.dim(); ++a) {
        b.lo[a] = b.lo[a] * sc + off[static_cast<size_t>(a)];
        b.hi[a] = b.hi[a] * sc + off[static_cast<size_t>(a)];
      }
      r.shape = b;
    } else {
      Disk d = o.disk();
      d.center.c[0] = d.center.c[0] * sc + off[0];
      d.center.c[1] = d.center.c[1] * sc + off[1];
      d.radius *= sc;
      r.shape = d;
    }
    return r;
  }

  Point unapply(Point p) const {
    for (int a = 0; a < dim; ++a)
      p.c[static_cast<size_t>(a)] = (p.c[static_cast<size_t>(a)] - off[static_cast<size_t>(a)]) / sc;
    return p;
  }
};

}  // namespace geo::detail
