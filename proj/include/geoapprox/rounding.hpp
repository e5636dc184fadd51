#pragma once
// Class rounding for boxes against a grid of stabbing lines. Two boxes are
// in the same class when, on every axis, they contain exactly the same
// contiguous run of grid lines. Each class keeps one representative (max
// weight, ties to the smaller id); solving on representatives and expanding
// oracle points back to grid corners preserves piercing of all members.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "geoapprox/geom.hpp"

namespace geo {

struct StabbingGrid {
  int dim = 0;
  std::array<std::vector<double>, kMaxDim> lines;  // sorted, strictly increasing

  static StabbingGrid from_lines(int dim, std::vector<std::vector<double>> per_axis);
  bool stabs(const AxisBox& b) const;  // every axis holds at least one line
};

struct ClassKey {
  int dim = 0;
  std::array<int, 2 * kMaxDim> ab{};  // (first, last) contained line per axis

  int first(int axis) const { return ab[2 * static_cast<size_t>(axis)]; }
  int last(int axis) const { return ab[2 * static_cast<size_t>(axis) + 1]; }
  bool operator==(const ClassKey& o) const { return dim == o.dim && ab == o.ab; }
  bool operator<(const ClassKey& o) const { return ab < o.ab; }
};

// nullopt when some axis of the box contains no grid line
std::optional<ClassKey> class_key(const StabbingGrid& g, const AxisBox& b);

struct BoxClass {
  ClassKey key;
  std::vector<size_t> members;  // indices into the input set
  size_t rep = 0;               // index of the representative
};

class ClassIndex {
 public:
  // every object must be a box stabbed by the grid
  ClassIndex(const ObjectSet& s, const StabbingGrid& g);
  const std::vector<BoxClass>& classes() const { return classes_; }
  ObjectSet representatives(const ObjectSet& s) const;

 private:
  std::vector<BoxClass> classes_;
};

// per-axis bracketing grid lines around p (own coordinate when a side has no
// line); any grid-stabbed box containing p contains one of the results
std::vector<Point> corner_expansion(const StabbingGrid& g, const Point& p);

}  // namespace geo
