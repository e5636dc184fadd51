#pragma once
// Maximum depth of an object arrangement (deepest point count) plus a
// reusable range-add/global-max segment tree. Pure-box inputs are computed
// exactly (sweep for d=2, recursive sweep for d=3/4). Sets containing disks
// use boundary-intersection candidates whose coordinates involve sqrt; exact
// on boxes, numerically robust (not tie-exact) on random disk inputs.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "geoapprox/geom.hpp"

namespace geo {

struct DepthResult {
  int64_t depth = 0;
  std::optional<Point> witness;
};

// exact sweep for boxes; candidate brute force when disks are present
DepthResult max_depth(const ObjectSet& s);
// candidate brute force regardless of shape mix (test oracle for the sweep)
DepthResult max_depth_naive(const ObjectSet& s);

// depth of the arrangement at one point
int64_t depth_at(const ObjectSet& s, const Point& p);

// segment tree over positions 0..n-1: range add, global max with smallest
// achieving position
class MaxAddSegTree {
 public:
  explicit MaxAddSegTree(int n = 0);
  void reset(int n);
  void add(int lo, int hi, int64_t v);  // inclusive range
  std::pair<int64_t, int> max_arg() const;

 private:
  struct Node { int64_t mx = 0, lazy = 0; int arg = 0; };
  int n_ = 0;
  std::vector<Node> t_;
  void build(int node, int lo, int hi);
  void add(int node, int lo, int hi, int qlo, int qhi, int64_t v);
};

}  // namespace geo
