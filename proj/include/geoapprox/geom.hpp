#pragma once
// Core geometric types and predicates. All sets are closed (boundary touch
// counts as intersection); all comparisons are exact float comparisons — no
// epsilons. Supported dimensions: 2..4 for boxes; disks are planar (d = 2).

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace geo {

constexpr int kMaxDim = 4;

struct Point {
  int dim = 2;
  std::array<double, kMaxDim> c{};

  double operator[](int k) const { return c[static_cast<size_t>(k)]; }
  double& operator[](int k) { return c[static_cast<size_t>(k)]; }
  bool operator==(const Point& o) const {
    if (dim != o.dim) return false;
    for (int k = 0; k < dim; ++k) if (c[size_t(k)] != o.c[size_t(k)]) return false;
    return true;
  }
};

inline Point make_point(double x, double y) { return Point{2, {x, y, 0, 0}}; }
inline Point make_point(double x, double y, double z) { return Point{3, {x, y, z, 0}}; }

// Axis-aligned closed box [lo, hi] per axis. Degenerate (zero-extent) sides allowed.
struct AxisBox {
  Point lo, hi;

  int dim() const { return lo.dim; }
  double extent(int k) const { return hi[k] - lo[k]; }
  bool valid() const {
    if (lo.dim != hi.dim) return false;
    for (int k = 0; k < dim(); ++k) if (lo[k] > hi[k]) return false;
    return true;
  }
};

inline AxisBox make_box(double x1, double y1, double x2, double y2) {
  return AxisBox{make_point(x1, y1), make_point(x2, y2)};
}

struct Disk {
  Point center;  // dim must be 2
  double radius = 0;
};

inline Disk make_disk(double x, double y, double r) { return Disk{make_point(x, y), r}; }

// none = -1, A = 0, B = 1 (bipartite instances)
enum class Color : int8_t { none = -1, A = 0, B = 1 };

struct GeomObject {
  int64_t id = 0;
  std::variant<AxisBox, Disk> shape;
  double weight = 1.0;
  Color color = Color::none;

  bool is_box() const { return std::holds_alternative<AxisBox>(shape); }
  bool is_disk() const { return std::holds_alternative<Disk>(shape); }
  const AxisBox& box() const { return std::get<AxisBox>(shape); }
  const Disk& disk() const { return std::get<Disk>(shape); }
  int dim() const { return is_box() ? box().dim() : 2; }
};

using ObjectSet = std::vector<GeomObject>;

inline GeomObject make_obj(int64_t id, const AxisBox& b, double w = 1.0, Color col = Color::none) {
  return GeomObject{id, b, w, col};
}
inline GeomObject make_obj(int64_t id, const Disk& d, double w = 1.0, Color col = Color::none) {
  return GeomObject{id, d, w, col};
}

// ── predicates ────────────────────────────────────────────────────────────

AxisBox bbox(const GeomObject& o);
double linf_diameter(const GeomObject& o);

bool contains(const AxisBox& b, const Point& p);
bool contains(const Disk& d, const Point& p);
bool contains(const GeomObject& o, const Point& p);

bool intersects(const AxisBox& a, const AxisBox& b);
bool intersects(const Disk& a, const Disk& b);
bool intersects(const AxisBox& b, const Disk& d);
bool intersects(const GeomObject& a, const GeomObject& b);

// a point guaranteed inside the (closed, nonempty) object
Point inner_point(const GeomObject& o);

// Exact-comparison helper for disk predicates: when all participating values
// are dyadic rationals small enough to square without rounding, the double
// computation below is already exact; otherwise fall back to a scaled-integer
// comparison when representable. Returns dist2(a,b) <= rhs^2 decided exactly
// where possible.
bool dist2_le_exact(double ax, double ay, double bx, double by, double rhs);

// id -> index lookup helper
struct IdIndex {
  std::vector<int64_t> ids;
  explicit IdIndex(const ObjectSet& s);
  std::optional<size_t> find(int64_t id) const;
 private:
  std::vector<size_t> order_;
};

void require(bool cond, const std::string& msg);

}  // namespace geo
