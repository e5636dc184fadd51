#pragma once
// Minimum piercing set solvers.
//
// Boxes: grid-class rounding plus a b-ary interval-tree recursion that
// reduces every subproblem to a set stabbed by few axis lines, solved
// through a pluggable subproblem oracle and re-expanded to grid-cell
// corners. A dynamic variant maintains the same tree under insertions and
// deletions with counter-triggered subtree rebuilds.
//
// Fat objects: shifted-quadtree pipeline; each node separates objects that
// cross cell boundaries, groups them by which cells they touch, pierces
// class representatives with a constant-factor greedy, and replaces each
// oracle point by a bounded boundary grid.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "geoapprox/geom.hpp"
#include "geoapprox/quadtree.hpp"
#include "geoapprox/rounding.hpp"
#include "geoapprox/solution.hpp"

namespace geo {

// Subproblem oracle for sets of boxes stabbed by the given grid.
// `ratio` is the oracle's declared approximation factor (1 = exact).
struct PierceOracle {
  std::string name;
  double ratio = 1.0;
  std::function<PiercingSolution(const ObjectSet&, const StabbingGrid&)> solve;
};

// Exact branch-and-bound piercing, valid up to `cap` objects.
PierceOracle exact_pierce_oracle(size_t cap = 64);
// Greedy set cover over grid corner points (logarithmic factor, any size).
PierceOracle greedy_pierce_oracle();
// Exact below `exact_cap` objects, greedy above.
PierceOracle auto_pierce_oracle(size_t exact_cap = 64);

// Group boxes into grid classes (same contained-line range per axis).
// Throws if some box is not stabbed by the grid.
ClassIndex round_to_classes(const ObjectSet& s, const StabbingGrid& grid);

// Pierce a grid-stabbed set: solve the class representatives with the
// oracle, then replace each oracle point by its grid-cell corners.
// The result pierces all of `s` and has at most 2^dim * |oracle points|
// points.
PiercingSolution pierce_stabbed_boxes(const ObjectSet& s, const StabbingGrid& grid,
                                      const PierceOracle& oracle);

// Pierce arbitrary boxes via the b-ary interval-tree recursion.
PiercingSolution pierce_boxes(const ObjectSet& s, int64_t b, const PierceOracle& oracle);

// Dynamic version of pierce_boxes: same tree, updates route to a leaf and
// re-solve it; a subtree is rebuilt when its update counter reaches
// max(1, ceil(n_sub / b)) where n_sub is its size at the last rebuild.
class DynPierceBoxes {
 public:
  DynPierceBoxes(int dim, int64_t b, PierceOracle oracle = auto_pierce_oracle());
  ~DynPierceBoxes();
  DynPierceBoxes(DynPierceBoxes&&) noexcept;
  DynPierceBoxes& operator=(DynPierceBoxes&&) noexcept;

  void insert(const GeomObject& o);
  void erase(int64_t id);
  PiercingSolution current() const;
  size_t size() const;
  size_t rebuild_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Bounded point set that pierces every object of diameter >= dmin touching
// the cell's boundary (outer and inner box): a grid of spacing dmin/4 kept
// within a band of width dmin/4 + dmin/8 around each boundary.
std::vector<Point> lambda_points(const Cell& cell, double c0, double dmin);

// Oracle over fat objects (no stabbing grid involved).
using FatPierceOracle = std::function<PiercingSolution(const ObjectSet&)>;

// Constant-factor greedy piercing for fat objects: repeatedly take the
// object of smallest diameter and add a bounded canonical grid around it,
// which pierces every remaining object touching it.
PiercingSolution greedy_fat_piercing(const ObjectSet& s);

// Observability counters for the fat pipeline.
struct FatPierceStats {
  size_t patched = 0;            // objects fixed up by adding an inner point
  size_t fallback_objects = 0;   // objects good under no shift, solved directly
  size_t oracle_points = 0;      // total oracle points before boundary-grid replacement
  size_t max_lambda = 0;         // largest boundary grid used for one cell
};

// Pierce objects that cross cell boundaries: group by the set of touched
// cells, pierce class representatives with the oracle, replace each oracle
// point by the boundary grid of its cell. Objects the grids happen to miss
// get an explicit inner point (counted in stats->patched).
PiercingSolution pierce_boundary_fat(const ObjectSet& s, const std::vector<Cell>& cells,
                                     double c0, const FatPierceOracle& oracle,
                                     FatPierceStats* stats = nullptr);

// Full pipeline for fat objects (boxes of bounded aspect ratio and disks):
// shifted copies, per-shift quadtree partition recursion with boundary
// handling at every node, greedy fallback for objects good under no shift.
// c0 <= 0 selects the default 4 * (dim + 1).
PiercingSolution pierce_fat(const ObjectSet& s, int64_t b, double c0 = 0.0,
                            FatPierceStats* stats = nullptr);

}  // namespace geo
