#pragma once
// Internal b-ary interval-tree recursion shared by the box piercing and
// rectangle independent-set solvers (static and dynamic).
//
// A node splits one axis with up to b-1 dividers drawn from endpoint
// quantiles. Objects containing a divider are "stored": they form one
// subproblem on the next axis (rooted at `stored`). The rest fall strictly
// inside open slabs and descend to same-axis children. After the last axis
// everything in a leaf is stabbed, per axis, by the accumulated divider
// lines (`gamma`), and a problem-specific leaf solver runs.
//
// Dynamic updates route geometrically (the route is determined by the frozen
// dividers), bump an update counter on every visited node, and rebuild the
// topmost node whose counter reaches max(1, ceil(size_at_build / b)).

#include <array>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "geoapprox/geom.hpp"
#include "geoapprox/solution.hpp"

namespace geo::detail {

struct TypeNode {
  int axis = 0;
  int level = 0;  // depth within its own axis tree (root of each tree = 0)
  bool leaf = false;
  std::vector<double> dividers;  // sorted, distinct
  std::vector<std::unique_ptr<TypeNode>> children;  // dividers.size()+1 slots
  std::unique_ptr<TypeNode> stored;                 // next-axis subproblem tree
  std::array<std::vector<double>, kMaxDim> gamma;   // divider lines accumulated so far
  std::vector<int64_t> ids;                         // leaf members
  size_t live = 0;
  size_t updates = 0;
  size_t size_at_build = 0;
  // leaf solution caches (one of these is used, depending on the problem)
  PiercingSolution pierce_cache;
  ISolution mis_cache;
};

class TypeTree {
 public:
  using LeafSolve = std::function<void(TypeNode&, const ObjectSet&)>;

  TypeTree(int dim, int64_t b, LeafSolve leaf_solve)
      : dim_(dim), b_(b), leaf_solve_(std::move(leaf_solve)) {
    require(dim >= 1 && dim <= kMaxDim, "tree dimension out of range");
    require(b >= 2, "tree fan-out must be at least 2");
    root_ = make_node(0, 0, {}, {});
  }

  void build(const ObjectSet& s) {
    live_.clear();
    std::vector<int64_t> ids;
    for (const auto& o : s) {
      check_object(o);
      require(live_.emplace(o.id, o).second, "duplicate id " + std::to_string(o.id));
      ids.push_back(o.id);
    }
    root_ = make_node(0, 0, ids, {});
  }

  void insert(const GeomObject& o) {
    check_object(o);
    require(live_.emplace(o.id, o).second, "insert of live id " + std::to_string(o.id));
    route(o, true);
  }

  void erase(int64_t id) {
    auto it = live_.find(id);
    require(it != live_.end(), "delete of unknown id " + std::to_string(id));
    GeomObject o = it->second;
    live_.erase(it);
    route(o, false);
  }

  size_t size() const { return live_.size(); }
  size_t rebuild_count() const { return rebuilds_; }
  const TypeNode& root() const { return *root_; }

  template <class F>
  void for_each_leaf(F&& f) const {
    walk_leaves(root_.get(), f);
  }

 private:
  int dim_;
  int64_t b_;
  LeafSolve leaf_solve_;
  std::unique_ptr<TypeNode> root_;
  std::unordered_map<int64_t, GeomObject> live_;
  size_t rebuilds_ = 0;

  void check_object(const GeomObject& o) const {
    require(o.is_box(), "interval-tree solvers take boxes");
    require(o.dim() == dim_, "object dimension mismatch");
  }

  size_t threshold(const TypeNode& n) const {
    return std::max<size_t>(1, (n.size_at_build + static_cast<size_t>(b_) - 1) / static_cast<size_t>(b_));
  }

  ObjectSet materialize(const std::vector<int64_t>& ids) const {
    ObjectSet out;
    out.reserve(ids.size());
    for (int64_t id : ids) {
      auto it = live_.find(id);
      if (it != live_.end()) out.push_back(it->second);
    }
    return out;
  }

  std::unique_ptr<TypeNode> make_node(int axis, int level, const std::vector<int64_t>& ids,
                                      std::array<std::vector<double>, kMaxDim> gamma) {
    auto nd = std::make_unique<TypeNode>();
    nd->axis = axis;
    nd->level = level;
    nd->gamma = std::move(gamma);
    nd->live = nd->size_at_build = ids.size();
    if (axis == dim_) {
      nd->leaf = true;
      nd->ids = ids;
      leaf_solve_(*nd, materialize(ids));
      return nd;
    }
    if (ids.empty()) return nd;  // hollow; first routed update rebuilds it

    std::vector<double> ends;
    ends.reserve(2 * ids.size());
    for (int64_t id : ids) {
      const AxisBox& bx = live_.at(id).box();
      ends.push_back(bx.lo[axis]);
      ends.push_back(bx.hi[axis]);
    }
    std::sort(ends.begin(), ends.end());
    for (int64_t k = 1; k < b_; ++k) {
      size_t at = static_cast<size_t>(k) * ends.size() / static_cast<size_t>(b_);
      nd->dividers.push_back(ends[std::min(at, ends.size() - 1)]);
    }
    std::sort(nd->dividers.begin(), nd->dividers.end());
    nd->dividers.erase(std::unique(nd->dividers.begin(), nd->dividers.end()), nd->dividers.end());

    std::vector<int64_t> stored_ids;
    std::vector<std::vector<int64_t>> slabs(nd->dividers.size() + 1);
    for (int64_t id : ids) {
      const AxisBox& bx = live_.at(id).box();
      size_t slab;
      if (contains_divider(*nd, bx, &slab))
        stored_ids.push_back(id);
      else
        slabs[slab].push_back(id);
    }
    require(!stored_ids.empty(), "divider stabs no object");  // dividers are endpoints
    auto sub_gamma = nd->gamma;
    sub_gamma[static_cast<size_t>(axis)] = nd->dividers;
    nd->stored = make_node(axis + 1, 0, stored_ids, std::move(sub_gamma));
    nd->children.resize(slabs.size());
    for (size_t k = 0; k < slabs.size(); ++k)
      if (!slabs[k].empty()) nd->children[k] = make_node(axis, level + 1, slabs[k], nd->gamma);
    return nd;
  }

  // true if the box contains one of the node's dividers on the node's axis;
  // otherwise *slab gets the open slab index the box lies strictly inside
  static bool contains_divider(const TypeNode& nd, const AxisBox& bx, size_t* slab) {
    auto it = std::lower_bound(nd.dividers.begin(), nd.dividers.end(), bx.lo[nd.axis]);
    if (it != nd.dividers.end() && *it <= bx.hi[nd.axis]) return true;
    *slab = static_cast<size_t>(it - nd.dividers.begin());
    return false;
  }

  void rebuild(TypeNode& nd, const GeomObject* pending_insert) {
    std::vector<int64_t> ids;
    collect_ids(&nd, ids);
    std::vector<int64_t> alive;
    for (int64_t id : ids)
      if (live_.count(id)) alive.push_back(id);
    if (pending_insert) alive.push_back(pending_insert->id);
    auto fresh = make_node(nd.axis, nd.level, alive, nd.gamma);
    nd = std::move(*fresh);
    ++rebuilds_;
  }

  void route(const GeomObject& o, bool inserting) {
    TypeNode* nd = root_.get();
    while (true) {
      ++nd->updates;
      nd->live += inserting ? 1 : static_cast<size_t>(-1);
      if (nd->updates >= threshold(*nd)) {
        rebuild(*nd, inserting ? &o : nullptr);
        return;
      }
      if (nd->leaf) {
        if (inserting) {
          nd->ids.push_back(o.id);
        } else {
          auto it = std::find(nd->ids.begin(), nd->ids.end(), o.id);
          require(it != nd->ids.end(), "routed delete missed its leaf");
          nd->ids.erase(it);
        }
        leaf_solve_(*nd, materialize(nd->ids));
        return;
      }
      size_t slab = 0;
      if (contains_divider(*nd, o.box(), &slab)) {
        if (!nd->stored) {
          auto g = nd->gamma;
          g[static_cast<size_t>(nd->axis)] = nd->dividers;
          nd->stored = make_node(nd->axis + 1, 0, {}, std::move(g));
        }
        nd = nd->stored.get();
      } else {
        if (nd->children.size() <= slab) nd->children.resize(nd->dividers.size() + 1);
        if (!nd->children[slab]) nd->children[slab] = make_node(nd->axis, nd->level + 1, {}, nd->gamma);
        nd = nd->children[slab].get();
      }
    }
  }

  static void collect_ids(const TypeNode* nd, std::vector<int64_t>& out) {
    if (!nd) return;
    if (nd->leaf) {
      out.insert(out.end(), nd->ids.begin(), nd->ids.end());
      return;
    }
    collect_ids(nd->stored.get(), out);
    for (const auto& c : nd->children) collect_ids(c.get(), out);
  }

  template <class F>
  static void walk_leaves(const TypeNode* nd, F&& f) {
    if (!nd) return;
    if (nd->leaf) {
      f(*nd);
      return;
    }
    walk_leaves(nd->stored.get(), f);
    for (const auto& c : nd->children) walk_leaves(c.get(), f);
  }
};

}  // namespace geo::detail
