#pragma once
// Maximum independent set solvers.
//
// Rectangles/boxes: class rounding with max-weight representatives feeding a
// pluggable oracle; the same b-ary interval tree as the piercing solver, but
// node solutions are unioned only within one tree level (disjoint slabs keep
// them independent) and the best single level is returned. Higher dimensions
// reduce by median-hyperplane binary divide. Fat objects: shifted-quadtree
// recursion with boundary classes, best level and best shift selected.

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "geoapprox/geom.hpp"
#include "geoapprox/quadtree.hpp"
#include "geoapprox/rounding.hpp"
#include "geoapprox/solution.hpp"

namespace geo {

// Subproblem oracle: returns an independent subset of its input.
// `ratio` is the declared approximation factor (1 = exact, 0 = heuristic).
struct MISOracle {
  std::string name;
  double ratio = 1.0;
  bool weighted_capable = true;
  std::function<ISolution(const ObjectSet&)> solve;
};

// Exact branch-and-bound (valid up to `cap` objects).
MISOracle exact_mis_oracle(bool weighted = false, size_t cap = 64);
// Exact below `exact_cap`, disjointness-greedy above (declared heuristic).
MISOracle auto_mis_oracle(bool weighted = false, size_t exact_cap = 64);

// Classes under the grid with max-weight representatives (ties: smaller id).
ClassIndex round_select_representatives(const ObjectSet& s, const StabbingGrid& grid);

// Solve on the representative set; the result is independent in s as-is.
ISolution mis_stabbed_rects(const ObjectSet& s, const StabbingGrid& grid, const MISOracle& oracle);

// Test utility: max depth of the representatives of the chosen members'
// classes. `chosen` must be independent in s.
int64_t depth_of_representatives(const ObjectSet& s, const std::vector<int64_t>& chosen,
                                 const StabbingGrid& grid);

// Random slab filter: samples every vertical and horizontal grid slab
// independently with probability 1/2 and keeps the representatives of chosen
// members whose left/bottom edge slab is sampled and right/top edge slab is
// not. Output is independent; each member survives with probability exactly
// 1/16.
std::vector<int64_t> random_Z_filter(const ObjectSet& s, const std::vector<int64_t>& chosen,
                                     const StabbingGrid& grid, std::mt19937_64& rng);

// Rectangles (d=2). `level_values` (optional) receives the per-level sums of
// the top axis tree, for recomputation checks.
ISolution mis_rects(const ObjectSet& s, int64_t b, const MISOracle& oracle,
                    std::vector<double>* level_values = nullptr);

// Dynamic version of mis_rects (same update and rebuild discipline as
// DynPierceBoxes; current() recombines cached leaf solutions).
class DynMisRects {
 public:
  explicit DynMisRects(int64_t b, MISOracle oracle = auto_mis_oracle());
  ~DynMisRects();
  DynMisRects(DynMisRects&&) noexcept;
  DynMisRects& operator=(DynMisRects&&) noexcept;

  void insert(const GeomObject& o);
  void erase(int64_t id);
  ISolution current(std::vector<double>* level_values = nullptr) const;
  size_t size() const;
  size_t rebuild_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Boxes in d >= 3: binary divide on the median endpoint of the last axis;
// boxes crossing the median hyperplane drop that axis and recurse toward the
// d=2 solver; best single level returned.
ISolution mis_boxes_highdim(const ObjectSet& s, int64_t b, const MISOracle& oracle);

// Constant-factor greedy for fat families: unweighted takes the smallest
// object first and discards its neighbors; weighted solves exactly up to 64
// objects and falls back to weight-greedy above.
ISolution greedy_fat_mis(const ObjectSet& s, bool weighted = false);

// Independent set among objects that cross cell boundaries: group by the set
// of touched cells, take max-weight representatives, solve with the oracle.
ISolution mis_fat_boundary(const ObjectSet& s, const std::vector<Cell>& cells, double c0,
                           const MISOracle& oracle);

// Full fat pipeline: per shift, quadtree-partition recursion separating
// boundary-crossing objects per node; per-level sums within a shift, best
// level then best shift selected. c0 <= 0 selects 4 * (dim + 1).
ISolution mis_fat(const ObjectSet& s, int64_t b, double c0 = 0.0, bool weighted = false);

// Dynamic fat variant: keeps the last pipeline solution valid under updates
// (inserts extend it greedily, deletes shrink it) and recomputes after
// max(1, ceil(n/b)) updates.
class DynMisFat {
 public:
  explicit DynMisFat(int64_t b, double c0 = 0.0, bool weighted = false);

  void insert(const GeomObject& o);
  void erase(int64_t id);
  ISolution current() const;
  size_t size() const;
  size_t rebuild_count() const;

 private:
  void maybe_rebuild();

  int64_t b_;
  double c0_;
  bool weighted_;
  std::vector<GeomObject> live_;
  std::vector<int64_t> chosen_;
  double value_ = 0.0;
  size_t updates_ = 0;
  size_t size_at_build_ = 0;
  size_t rebuilds_ = 0;
};

}  // namespace geo
