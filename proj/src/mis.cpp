#include "geoapprox/mis.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "fat_common.hpp"
#include "geoapprox/depth.hpp"
#include "geoapprox/oracle.hpp"
#include "geoapprox/validate.hpp"
#include "type_tree.hpp"

namespace geo {
namespace {

double member_value(const GeomObject& o, bool weighted) { return weighted ? o.weight : 1.0; }

ISolution greedy_disjoint(const ObjectSet& s, bool weighted) {
  std::vector<size_t> order(s.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (s[a].weight != s[b].weight) return s[a].weight > s[b].weight;
    return s[a].id < s[b].id;
  });
  ISolution out;
  std::vector<size_t> picked;
  for (size_t i : order) {
    bool clash = false;
    for (size_t j : picked)
      if (intersects(s[i], s[j])) {
        clash = true;
        break;
      }
    if (clash) continue;
    picked.push_back(i);
    out.ids.push_back(s[i].id);
    out.value += member_value(s[i], weighted);
  }
  std::sort(out.ids.begin(), out.ids.end());
  return out;
}

void check_result(const ObjectSet& s, const ISolution& sol, const char* what) {
  if (sol.ids.size() <= 1000)
    require(check_independent(s, sol.ids).ok, std::string(what) + ": result not independent");
}

// best-of-levels combine over one axis tree: per level, sum the next-axis
// subproblem solutions of that level's nodes (their slabs are disjoint, so
// the union stays independent); return the best single level (ties: lowest)
ISolution combine_levels(const detail::TypeNode* nd, std::vector<double>* lvls) {
  if (lvls) lvls->clear();
  ISolution best;
  if (!nd) return best;
  if (nd->leaf) {
    if (lvls) *lvls = {nd->mis_cache.value};
    return nd->mis_cache;
  }
  std::vector<std::vector<const detail::TypeNode*>> by_level;
  std::vector<const detail::TypeNode*> stack{nd};
  while (!stack.empty()) {
    const detail::TypeNode* v = stack.back();
    stack.pop_back();
    auto lvl = static_cast<size_t>(v->level);
    if (by_level.size() <= lvl) by_level.resize(lvl + 1);
    by_level[lvl].push_back(v);
    for (const auto& c : v->children)
      if (c) stack.push_back(c.get());
  }
  for (size_t lvl = 0; lvl < by_level.size(); ++lvl) {
    ISolution acc;
    for (const detail::TypeNode* v : by_level[lvl]) {
      if (!v->stored) continue;
      ISolution sub = combine_levels(v->stored.get(), nullptr);
      acc.value += sub.value;
      acc.ids.insert(acc.ids.end(), sub.ids.begin(), sub.ids.end());
    }
    if (lvls) lvls->push_back(acc.value);
    if (acc.value > best.value) best = std::move(acc);
  }
  std::sort(best.ids.begin(), best.ids.end());
  return best;
}

detail::TypeTree::LeafSolve mis_leaf_solver(const MISOracle& oracle) {
  return [&oracle](detail::TypeNode& nd, const ObjectSet& members) {
    if (members.empty()) {
      nd.mis_cache = {};
      return;
    }
    StabbingGrid g = StabbingGrid::from_lines(2, {nd.gamma[0], nd.gamma[1]});
    nd.mis_cache = mis_stabbed_rects(members, g, oracle);
  };
}

}  // namespace

MISOracle exact_mis_oracle(bool weighted, size_t cap) {
  MISOracle o;
  o.name = "exact";
  o.ratio = 1.0;
  o.weighted_capable = true;
  o.solve = [weighted, cap](const ObjectSet& s) { return exact_mis(s, weighted, cap); };
  return o;
}

MISOracle auto_mis_oracle(bool weighted, size_t exact_cap) {
  MISOracle o;
  o.name = "auto";
  o.ratio = 1.0;
  o.weighted_capable = true;
  o.solve = [weighted, exact_cap](const ObjectSet& s) {
    return s.size() <= exact_cap ? exact_mis(s, weighted, exact_cap) : greedy_fat_mis(s, weighted);
  };
  return o;
}

ClassIndex round_select_representatives(const ObjectSet& s, const StabbingGrid& grid) {
  return ClassIndex(s, grid);
}

ISolution mis_stabbed_rects(const ObjectSet& s, const StabbingGrid& grid, const MISOracle& oracle) {
  if (s.empty()) return {};
  ClassIndex classes(s, grid);
  ObjectSet reps = classes.representatives(s);
  ISolution sol = oracle.solve(reps);
  check_result(s, sol, "mis_stabbed_rects");
  return sol;
}

int64_t depth_of_representatives(const ObjectSet& s, const std::vector<int64_t>& chosen,
                                 const StabbingGrid& grid) {
  if (chosen.empty()) return 0;
  require(check_independent(s, chosen).ok, "chosen set is not independent");
  ClassIndex classes(s, grid);
  std::vector<size_t> rep_of(s.size(), 0);
  for (const BoxClass& bc : classes.classes())
    for (size_t m : bc.members) rep_of[m] = bc.rep;
  IdIndex idx(s);
  std::set<size_t> reps;
  for (int64_t id : chosen) {
    auto i = idx.find(id);
    require(i.has_value(), "unknown id " + std::to_string(id));
    reps.insert(rep_of[*i]);
  }
  ObjectSet rep_objs;
  for (size_t r : reps) rep_objs.push_back(s[r]);
  return max_depth(rep_objs).depth;
}

std::vector<int64_t> random_Z_filter(const ObjectSet& s, const std::vector<int64_t>& chosen,
                                     const StabbingGrid& grid, std::mt19937_64& rng) {
  require(grid.dim == 2, "slab filter is defined for two axes");
  std::vector<char> zc(grid.lines[0].size() + 1), zr(grid.lines[1].size() + 1);
  for (auto& z : zc) z = static_cast<char>(rng() & 1);
  for (auto& z : zr) z = static_cast<char>(rng() & 1);
  if (chosen.empty()) return {};

  ClassIndex classes(s, grid);
  std::vector<size_t> rep_of(s.size(), 0);
  for (const BoxClass& bc : classes.classes())
    for (size_t m : bc.members) rep_of[m] = bc.rep;
  IdIndex idx(s);
  std::set<size_t> kept;
  for (int64_t id : chosen) {
    auto i = idx.find(id);
    require(i.has_value(), "unknown id " + std::to_string(id));
    auto key = class_key(grid, s[*i].box());
    require(key.has_value(), "member not stabbed by the grid");
    // slab left of the first contained line, slab right of the last one
    size_t lo0 = static_cast<size_t>(key->first(0)), hi0 = static_cast<size_t>(key->last(0)) + 1;
    size_t lo1 = static_cast<size_t>(key->first(1)), hi1 = static_cast<size_t>(key->last(1)) + 1;
    if (zc[lo0] && !zc[hi0] && zr[lo1] && !zr[hi1]) kept.insert(rep_of[*i]);
  }
  std::vector<int64_t> out;
  for (size_t r : kept) out.push_back(s[r].id);
  std::sort(out.begin(), out.end());
  require(check_independent(s, out).ok, "slab filter produced a dependent set");
  return out;
}

ISolution mis_rects(const ObjectSet& s, int64_t b, const MISOracle& oracle,
                    std::vector<double>* level_values) {
  if (level_values) level_values->clear();
  if (s.empty()) return {};
  detail::TypeTree tree(2, b, mis_leaf_solver(oracle));
  tree.build(s);
  ISolution best = combine_levels(&tree.root(), level_values);
  check_result(s, best, "mis_rects");
  return best;
}

struct DynMisRects::Impl {
  MISOracle oracle;
  detail::TypeTree tree;
  Impl(int64_t b, MISOracle orc) : oracle(std::move(orc)), tree(2, b, mis_leaf_solver(oracle)) {}
};

DynMisRects::DynMisRects(int64_t b, MISOracle oracle)
    : impl_(std::make_unique<Impl>(b, std::move(oracle))) {}
DynMisRects::~DynMisRects() = default;
DynMisRects::DynMisRects(DynMisRects&&) noexcept = default;
DynMisRects& DynMisRects::operator=(DynMisRects&&) noexcept = default;

void DynMisRects::insert(const GeomObject& o) { impl_->tree.insert(o); }
void DynMisRects::erase(int64_t id) { impl_->tree.erase(id); }
size_t DynMisRects::size() const { return impl_->tree.size(); }
size_t DynMisRects::rebuild_count() const { return impl_->tree.rebuild_count(); }

ISolution DynMisRects::current(std::vector<double>* level_values) const {
  return combine_levels(&impl_->tree.root(), level_values);
}

namespace {

struct HiDimItem {
  AxisBox box;
  int64_t id;
  double weight;
};

ISolution solve_highdim(const std::vector<HiDimItem>& items, int dims, int64_t b,
                        const MISOracle& oracle);

// one binary interval tree over the last axis; crossing boxes drop the axis
void highdim_rec(const std::vector<HiDimItem>& items, int dims, int64_t b,
                 const MISOracle& oracle, int level, std::map<int, ISolution>& acc) {
  if (items.empty()) return;
  if (items.size() <= static_cast<size_t>(std::max<int64_t>(b, 2))) {
    ObjectSet flat;
    for (const auto& it : items) flat.push_back(make_obj(it.id, it.box, it.weight));
    ISolution sub = oracle.solve(flat);
    ISolution& slot = acc[level];
    slot.value += sub.value;
    slot.ids.insert(slot.ids.end(), sub.ids.begin(), sub.ids.end());
    return;
  }
  const int axis = dims - 1;
  std::vector<double> ends;
  ends.reserve(2 * items.size());
  for (const auto& it : items) {
    ends.push_back(it.box.lo[axis]);
    ends.push_back(it.box.hi[axis]);
  }
  std::sort(ends.begin(), ends.end());
  const double m = ends[ends.size() / 2];

  std::vector<HiDimItem> cross, left, right;
  for (const auto& it : items) {
    if (it.box.lo[axis] <= m && m <= it.box.hi[axis]) {
      HiDimItem proj = it;
      proj.box.lo.dim = proj.box.hi.dim = axis;  // drop the split axis
      cross.push_back(proj);
    } else if (it.box.hi[axis] < m) {
      left.push_back(it);
    } else {
      right.push_back(it);
    }
  }
  require(!cross.empty(), "median hyperplane crosses no box");
  ISolution sub;
  if (axis == 2) {
    ObjectSet flat;
    for (const auto& it : cross) flat.push_back(make_obj(it.id, it.box, it.weight));
    sub = mis_rects(flat, b, oracle);
  } else {
    sub = solve_highdim(cross, axis, b, oracle);
  }
  ISolution& slot = acc[level];
  slot.value += sub.value;
  slot.ids.insert(slot.ids.end(), sub.ids.begin(), sub.ids.end());
  highdim_rec(left, dims, b, oracle, level + 1, acc);
  highdim_rec(right, dims, b, oracle, level + 1, acc);
}

ISolution solve_highdim(const std::vector<HiDimItem>& items, int dims, int64_t b,
                        const MISOracle& oracle) {
  std::map<int, ISolution> acc;
  highdim_rec(items, dims, b, oracle, 0, acc);
  ISolution best;
  for (auto& [lvl, sol] : acc)
    if (sol.value > best.value) best = std::move(sol);
  std::sort(best.ids.begin(), best.ids.end());
  return best;
}

}  // namespace

ISolution mis_boxes_highdim(const ObjectSet& s, int64_t b, const MISOracle& oracle) {
  if (s.empty()) return {};
  const int dim = s[0].dim();
  require(dim >= 3, "use the rectangle solver below three dimensions");
  std::vector<HiDimItem> items;
  items.reserve(s.size());
  for (const auto& o : s) {
    require(o.is_box(), "high-dimensional solver takes boxes");
    require(o.dim() == dim, "mixed dimensions in object set");
    items.push_back({o.box(), o.id, o.weight});
  }
  ISolution best = solve_highdim(items, dim, b, oracle);
  check_result(s, best, "mis_boxes_highdim");
  return best;
}

ISolution greedy_fat_mis(const ObjectSet& s, bool weighted) {
  if (s.empty()) return {};
  ISolution out;
  if (!weighted) {
    std::vector<size_t> order(s.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      double da = linf_diameter(s[a]), db = linf_diameter(s[b]);
      if (da != db) return da < db;
      return s[a].id < s[b].id;
    });
    std::vector<bool> active(s.size(), true);
    for (size_t i : order) {
      if (!active[i]) continue;
      out.ids.push_back(s[i].id);
      out.value += 1.0;
      for (size_t j = 0; j < s.size(); ++j)
        if (active[j] && intersects(s[i], s[j])) active[j] = false;
    }
    std::sort(out.ids.begin(), out.ids.end());
  } else if (s.size() <= 64) {
    out = exact_mis(s, true, 64);
  } else {
    out = greedy_disjoint(s, true);
  }
  check_result(s, out, "greedy_fat_mis");
  return out;
}

ISolution mis_fat_boundary(const ObjectSet& s, const std::vector<Cell>& cells, double c0,
                           const MISOracle& oracle) {
  if (s.empty()) return {};
  require(!cells.empty(), "cell list is empty");
  require(c0 > 0, "goodness constant must be positive");
  std::map<std::vector<int64_t>, size_t> rep_by_sig;  // signature -> best member index
  for (size_t i = 0; i < s.size(); ++i) {
    std::vector<int64_t> sig;
    bool strictly = false;
    for (size_t ci = 0; ci < cells.size(); ++ci) {
      if (object_touches_cell(cells[ci], s[i])) sig.push_back(static_cast<int64_t>(ci));
      if (object_strictly_inside(cells[ci], s[i])) strictly = true;
    }
    require(!sig.empty(), "object touches no cell");
    require(!strictly, "object does not cross any cell boundary");
    auto [it, fresh] = rep_by_sig.emplace(std::move(sig), i);
    if (!fresh) {
      size_t cur = it->second;
      if (s[i].weight > s[cur].weight || (s[i].weight == s[cur].weight && s[i].id < s[cur].id))
        it->second = i;
    }
  }
  ObjectSet reps;
  for (const auto& [sig, i] : rep_by_sig) reps.push_back(s[i]);
  ISolution sol = oracle.solve(reps);
  check_result(s, sol, "mis_fat_boundary");
  return sol;
}

namespace {

void mis_fat_rec(const ObjectSet& s, int64_t b, double c0, const MISOracle& oracle, int depth,
                 std::map<int, ISolution>& acc) {
  auto add = [&acc](int lvl, ISolution sub) {
    ISolution& slot = acc[lvl];
    slot.value += sub.value;
    slot.ids.insert(slot.ids.end(), sub.ids.begin(), sub.ids.end());
  };
  if (s.size() <= static_cast<size_t>(std::max<int64_t>(b, 2))) {
    add(depth, oracle.solve(s));
    return;
  }
  std::vector<Point> centers;
  centers.reserve(s.size());
  for (const auto& o : s) centers.push_back(inner_point(o));
  std::vector<Cell> cells = quadtree_partition(centers, b);

  ObjectSet stored;
  std::map<int64_t, ObjectSet> per_cell;
  for (size_t i = 0; i < s.size(); ++i) {
    int64_t ci = locate_cell(cells, centers[i]);
    require(ci >= 0, "partition does not cover an object center");
    if (object_strictly_inside(cells[static_cast<size_t>(ci)], s[i]))
      per_cell[ci].push_back(s[i]);
    else
      stored.push_back(s[i]);
  }
  if (!stored.empty()) add(depth, mis_fat_boundary(stored, cells, c0, oracle));
  for (auto& [ci, subset] : per_cell) {
    if (subset.size() == s.size())
      add(depth + 1, oracle.solve(subset));  // no progress; solve directly
    else
      mis_fat_rec(subset, b, c0, oracle, depth + 1, acc);
  }
}

}  // namespace

ISolution mis_fat(const ObjectSet& s, int64_t b, double c0, bool weighted) {
  if (s.empty()) return {};
  const int dim = s[0].dim();
  for (const auto& o : s) require(o.dim() == dim, "mixed dimensions in object set");
  if (c0 <= 0) c0 = 4.0 * (dim + 1);
  const MISOracle oracle = auto_mis_oracle(weighted);
  if (s.size() <= static_cast<size_t>(std::max<int64_t>(b, 2))) {
    ISolution sol = oracle.solve(s);
    check_result(s, sol, "mis_fat");
    return sol;
  }

  const detail::NormMap nm = detail::NormMap::fit(s);
  const std::vector<Point> vs = shifts(dim);
  std::vector<ObjectSet> buckets(vs.size());
  ObjectSet fallback;
  for (const auto& o : s) {
    GeomObject n = nm.apply(o);
    bool placed = false;
    for (size_t j = 0; j < vs.size() && !placed; ++j) {
      GeomObject shifted = shift_object(n, vs[j]);
      if (is_good(shifted, c0)) {
        buckets[j].push_back(shifted);
        placed = true;
      }
    }
    if (!placed) fallback.push_back(n);
  }

  ISolution best;
  for (const auto& bucket : buckets) {
    if (bucket.empty()) continue;
    std::map<int, ISolution> acc;
    mis_fat_rec(bucket, b, c0, oracle, 0, acc);
    for (auto& [lvl, sol] : acc)
      if (sol.value > best.value) best = std::move(sol);
  }
  if (!fallback.empty()) {
    ISolution fb = greedy_fat_mis(fallback, weighted);
    if (fb.value > best.value) best = std::move(fb);
  }
  std::sort(best.ids.begin(), best.ids.end());
  check_result(s, best, "mis_fat");
  return best;
}

DynMisFat::DynMisFat(int64_t b, double c0, bool weighted) : b_(b), c0_(c0), weighted_(weighted) {
  require(b >= 2, "tree fan-out must be at least 2");
}

void DynMisFat::insert(const GeomObject& o) {
  for (const auto& e : live_) require(e.id != o.id, "insert of live id " + std::to_string(o.id));
  bool clash = false;
  for (const auto& e : live_) {
    if (clash) break;
    if (std::binary_search(chosen_.begin(), chosen_.end(), e.id) && intersects(e, o)) clash = true;
  }
  live_.push_back(o);
  if (!clash) {
    chosen_.insert(std::lower_bound(chosen_.begin(), chosen_.end(), o.id), o.id);
    value_ += member_value(o, weighted_);
  }
  ++updates_;
  maybe_rebuild();
}

void DynMisFat::erase(int64_t id) {
  auto it = std::find_if(live_.begin(), live_.end(), [id](const GeomObject& e) { return e.id == id; });
  require(it != live_.end(), "delete of unknown id " + std::to_string(id));
  GeomObject gone = *it;
  live_.erase(it);
  auto c = std::lower_bound(chosen_.begin(), chosen_.end(), id);
  if (c != chosen_.end() && *c == id) {
    chosen_.erase(c);
    value_ -= member_value(gone, weighted_);
  }
  ++updates_;
  maybe_rebuild();
}

void DynMisFat::maybe_rebuild() {
  size_t threshold = std::max<size_t>(1, (size_at_build_ + static_cast<size_t>(b_) - 1) / static_cast<size_t>(b_));
  if (updates_ < threshold) return;
  ISolution sol = live_.empty() ? ISolution{} : mis_fat(live_, b_, c0_, weighted_);
  chosen_ = sol.ids;
  value_ = sol.value;
  size_at_build_ = live_.size();
  updates_ = 0;
  ++rebuilds_;
}

ISolution DynMisFat::current() const { return {chosen_, value_}; }
size_t DynMisFat::size() const { return live_.size(); }
size_t DynMisFat::rebuild_count() const { return rebuilds_; }

}  // namespace geo
