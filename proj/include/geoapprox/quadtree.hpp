#pragma once
// Quadtree boxes over the hierarchical power-of-two grid, object goodness,
// diagonal shifts, and the partition of R^d into O(b) cells (each one
// quadtree box or the difference of two) with ~n/b points per cell.
//
// Conventions: a quadtree box at level l with index vector i covers
// [i*2^-l, (i+1)*2^-l) per axis (half-open, so cells tile space exactly);
// *object* containment uses the closed upper bound (hi <= upper) so closed
// objects that end exactly on a grid line still count as contained. All box
// arithmetic multiplies by powers of two only, hence stays exact in doubles.
// Supported coordinate domain for these helpers: [0, 2^20).

#include <cstdint>
#include <optional>
#include <vector>

#include "geoapprox/geom.hpp"

namespace geo {

struct QuadtreeBox {
  bool whole_space = false;  // sentinel: all of R^d
  int level = 0;             // side = 2^-level (level may be negative)
  int dim = 2;
  std::array<int64_t, kMaxDim> idx{};

  double side() const;
  double coord_lo(int k) const;
  double coord_hi(int k) const;
  AxisBox to_box() const;  // closed box [lo, hi]
  bool operator==(const QuadtreeBox& o) const;
};

bool qbox_contains_point(const QuadtreeBox& b, const Point& p);     // half-open
bool qbox_contains_object(const QuadtreeBox& b, const AxisBox& r);  // closed hi
// strict nesting a within b (as regions; whole_space contains everything)
bool qbox_within(const QuadtreeBox& inner, const QuadtreeBox& outer);

// smallest quadtree box containing all points (half-open membership);
// level capped at `max_level` for coincident points
QuadtreeBox smallest_enclosing_qbox(const std::vector<Point>& pts, int max_level = 50);
// smallest quadtree box containing the closed box (closed containment)
std::optional<QuadtreeBox> smallest_enclosing_qbox(const AxisBox& r, int min_level = -25);

// An object is c0-good if its smallest enclosing quadtree box has side
// <= c0 * linf_diameter(object). Zero-diameter objects are never good.
bool is_good(const GeomObject& o, double c0);

// The d+1 diagonal shift vectors v_j = (j/(d+1), ..., j/(d+1)).
std::vector<Point> shifts(int d);
// Shift set the fat pipelines use: d+1 vectors for even d, d+2 (spacing
// 1/(d+2)) for odd d where the power-of-two grid defeats d+1 offsets.
std::vector<Point> pipeline_shifts(int d);
GeomObject shift_object(const GeomObject& o, const Point& v);

// ── partition of R^d ──────────────────────────────────────────────────────

// cell = outer minus inner (inner optional; inner strictly within outer)
struct Cell {
  QuadtreeBox outer;
  std::optional<QuadtreeBox> inner;
};

bool cell_contains_point(const Cell& c, const Point& p);  // half-open semantics
// object (closed) lies strictly in the cell's interior, touching no boundary
bool object_strictly_inside(const Cell& c, const GeomObject& o);
// object intersects the closure of the cell
bool object_touches_cell(const Cell& c, const GeomObject& o);
// object touches the cell boundary = intersects the closure of >= 1 cell
// while not being strictly inside any
int64_t locate_cell(const std::vector<Cell>& cells, const Point& p);  // -1 if none

// Partition R^d into cells, each holding <= max(1, ceil(2|P|/b)) points of P.
// Cell count is O(b) on non-adversarial inputs (exactly 1 for b = 1). Points
// must lie in [0, 2^20)^d.
std::vector<Cell> quadtree_partition(const std::vector<Point>& pts, int64_t b);

}  // namespace geo
