#pragma once
// Batch geometric predicate kernels: scalar reference implementations plus
// AVX2 variants selected at runtime. Consumers: solution validators, the
// naive min-weight-edge oracle's adjacency build, neighbor-oracle scans and
// brute-force depth counts. Semantics are identical across backends (exact
// float comparisons, closed sets); the test suite checks equivalence on
// random and boundary-touching batches.

#include <cstdint>
#include <string>
#include <vector>

#include "geoapprox/geom.hpp"

namespace geo::kernels {

// structure-of-arrays layouts (planar fast paths)
struct Boxes2 {
  std::vector<double> lox, loy, hix, hiy;
  size_t size() const { return lox.size(); }
  void push(const AxisBox& b) {
    lox.push_back(b.lo[0]); loy.push_back(b.lo[1]);
    hix.push_back(b.hi[0]); hiy.push_back(b.hi[1]);
  }
};

struct Disks2 {
  std::vector<double> cx, cy, rad;
  size_t size() const { return cx.size(); }
  void push(const Disk& d) {
    cx.push_back(d.center[0]); cy.push_back(d.center[1]); rad.push_back(d.radius);
  }
};

struct Points2 {
  std::vector<double> xs, ys;
  size_t size() const { return xs.size(); }
  void push(const Point& p) { xs.push_back(p[0]); ys.push_back(p[1]); }
};

// `mask`: optional liveness bitset (bit i = entry i participates); null = all.
struct Backend {
  std::string name;
  // first index >= start whose box intersects the closed query box, or -1
  int64_t (*first_box_hit)(const Boxes2&, double qlox, double qloy, double qhix,
                           double qhiy, const uint64_t* mask, size_t start);
  // number of boxes containing point (x, y)
  int64_t (*count_boxes_containing)(const Boxes2&, double x, double y);
  // first index >= start whose disk intersects the query disk, or -1
  int64_t (*first_disk_hit)(const Disks2&, double qx, double qy, double qr,
                            const uint64_t* mask, size_t start);
  // true if any point of the batch lies in the closed box
  bool (*any_point_in_box)(const Points2&, double lox, double loy, double hix, double hiy);
  // true if any point of the batch lies in the closed disk
  bool (*any_point_in_disk)(const Points2&, double cx, double cy, double r);
};

const Backend& scalar_backend();
const Backend& active_backend();   // AVX2 when the CPU supports it
bool avx2_available();
const Backend* avx2_backend_or_null();

// convenience wrappers over the active backend
inline int64_t first_box_hit(const Boxes2& s, const AxisBox& q,
                             const uint64_t* mask = nullptr, size_t start = 0) {
  return active_backend().first_box_hit(s, q.lo[0], q.lo[1], q.hi[0], q.hi[1], mask, start);
}
inline int64_t count_boxes_containing(const Boxes2& s, double x, double y) {
  return active_backend().count_boxes_containing(s, x, y);
}
inline int64_t first_disk_hit(const Disks2& s, const Disk& q,
                              const uint64_t* mask = nullptr, size_t start = 0) {
  return active_backend().first_disk_hit(s, q.center[0], q.center[1], q.radius, mask, start);
}
inline bool any_point_in_box(const Points2& p, const AxisBox& b) {
  return active_backend().any_point_in_box(p, b.lo[0], b.lo[1], b.hi[0], b.hi[1]);
}
inline bool any_point_in_disk(const Points2& p, const Disk& d) {
  return active_backend().any_point_in_disk(p, d.center[0], d.center[1], d.radius);
}

}  // namespace geo::kernels
