#include "geoapprox/mps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fat_common.hpp"
#include "geoapprox/kernels.hpp"
#include "geoapprox/oracle.hpp"
#include "geoapprox/validate.hpp"
#include "type_tree.hpp"

namespace geo {
namespace {

bool point_less(const Point& a, const Point& b) {
  if (a.dim != b.dim) return a.dim < b.dim;
  for (int k = 0; k < a.dim; ++k)
    if (a.c[static_cast<size_t>(k)] != b.c[static_cast<size_t>(k)])
      return a.c[static_cast<size_t>(k)] < b.c[static_cast<size_t>(k)];
  return false;
}

bool point_eq(const Point& a, const Point& b) { return !point_less(a, b) && !point_less(b, a); }

void dedupe_points(std::vector<Point>& pts) {
  std::sort(pts.begin(), pts.end(), point_less);
  pts.erase(std::unique(pts.begin(), pts.end(), point_eq), pts.end());
}

// batched containment probe: does any of the points hit the object?
struct Probe {
  const std::vector<Point>& pts;
  kernels::Points2 soa;
  bool use_soa = false;

  Probe(const std::vector<Point>& p, int dim) : pts(p) {
    if (dim == 2) {
      use_soa = true;
      for (const Point& q : pts) soa.push(q);
    }
  }
  bool pierces(const GeomObject& o) const {
    if (use_soa && o.dim() == 2)
      return o.is_box() ? kernels::any_point_in_box(soa, o.box())
                        : kernels::any_point_in_disk(soa, o.disk());
    for (const Point& q : pts)
      if (contains(o, q)) return true;
    return false;
  }
};

// greedy set cover: pick the candidate point covering the most unpierced
// objects until everything is pierced (ties to the earlier candidate)
PiercingSolution greedy_cover(const ObjectSet& s, const std::vector<Point>& cands) {
  const size_t n = s.size();
  const size_t words = (n + 63) / 64;
  std::vector<std::vector<uint64_t>> masks;
  std::vector<size_t> cand_idx;
  for (size_t c = 0; c < cands.size(); ++c) {
    std::vector<uint64_t> m(words, 0);
    bool any = false;
    for (size_t i = 0; i < n; ++i)
      if (contains(s[i], cands[c])) {
        m[i / 64] |= uint64_t{1} << (i % 64);
        any = true;
      }
    if (any) {
      masks.push_back(std::move(m));
      cand_idx.push_back(c);
    }
  }
  std::vector<uint64_t> covered(words, 0);
  size_t covered_count = 0;
  PiercingSolution out;
  while (covered_count < n) {
    size_t best = masks.size(), best_gain = 0;
    for (size_t j = 0; j < masks.size(); ++j) {
      size_t gain = 0;
      for (size_t w = 0; w < words; ++w)
        gain += static_cast<size_t>(__builtin_popcountll(masks[j][w] & ~covered[w]));
      if (gain > best_gain) {
        best_gain = gain;
        best = j;
      }
    }
    require(best < masks.size(), "candidate points cannot pierce the set");
    for (size_t w = 0; w < words; ++w) covered[w] |= masks[best][w];
    covered_count += best_gain;
    out.points.push_back(cands[cand_idx[best]]);
  }
  return out;
}

std::vector<Point> grid_corners(const StabbingGrid& g) {
  size_t total = 1;
  for (int a = 0; a < g.dim; ++a) {
    const auto& ls = g.lines[static_cast<size_t>(a)];
    require(!ls.empty(), "grid line set has an empty axis");
    require(total <= (size_t{1} << 20) / ls.size(), "grid corner count too large");
    total *= ls.size();
  }
  std::vector<Point> out;
  out.reserve(total);
  std::array<size_t, kMaxDim> it{};
  for (size_t c = 0; c < total; ++c) {
    Point p;
    p.dim = g.dim;
    for (int a = 0; a < g.dim; ++a) p.c[static_cast<size_t>(a)] = g.lines[static_cast<size_t>(a)][it[static_cast<size_t>(a)]];
    out.push_back(p);
    for (int a = 0; a < g.dim; ++a) {
      auto& i = it[static_cast<size_t>(a)];
      if (++i < g.lines[static_cast<size_t>(a)].size()) break;
      i = 0;
    }
  }
  return out;
}

// removing points that pierce nothing keeps every object pierced: an
// object's piercing witness pierces >= 1 object, hence survives
void drop_useless_points(const ObjectSet& s, std::vector<Point>& pts) {
  std::vector<Point> kept;
  kept.reserve(pts.size());
  for (const Point& p : pts) {
    for (const auto& o : s)
      if (contains(o, p)) {
        kept.push_back(p);
        break;
      }
  }
  pts.swap(kept);
}

double cell_dmin(const Cell& cell, double c0) {
  double side = 1.0;
  if (!cell.outer.whole_space)
    side = cell.outer.side();
  else if (cell.inner)
    side = cell.inner->side();
  return side / c0;
}

// L-infinity distance from p to the boundary of box B
double boundary_dist(const AxisBox& B, const Point& p) {
  bool inside = true;
  double out_dist = 0.0, in_margin = std::numeric_limits<double>::infinity();
  for (int a = 0; a < B.dim(); ++a) {
    double x = p.c[static_cast<size_t>(a)];
    double below = B.lo[a] - x, above = x - B.hi[a];
    if (below > 0 || above > 0) {
      inside = false;
      out_dist = std::max(out_dist, std::max(below, above));
    } else {
      in_margin = std::min(in_margin, std::min(x - B.lo[a], B.hi[a] - x));
    }
  }
  return inside ? in_margin : out_dist;
}

FatPierceOracle default_fat_oracle() {
  return [](const ObjectSet& reps) { return greedy_fat_piercing(reps); };
}

void fat_rec(const ObjectSet& s, int64_t b, double c0, std::vector<Point>& out,
             FatPierceStats* stats) {
  if (s.size() <= static_cast<size_t>(std::max<int64_t>(b, 2))) {
    auto base = greedy_fat_piercing(s);
    out.insert(out.end(), base.points.begin(), base.points.end());
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
    const Cell& cell = cells[static_cast<size_t>(ci)];
    if (!object_strictly_inside(cell, s[i]) && linf_diameter(s[i]) >= cell_dmin(cell, c0))
      stored.push_back(s[i]);
    else
      per_cell[ci].push_back(s[i]);
  }
  if (!stored.empty()) {
    auto oracle = default_fat_oracle();
    auto sol = pierce_boundary_fat(stored, cells, c0, oracle, stats);
    out.insert(out.end(), sol.points.begin(), sol.points.end());
  }
  for (auto& [ci, subset] : per_cell) {
    if (subset.size() == s.size()) {  // no progress; finish directly
      auto base = greedy_fat_piercing(subset);
      out.insert(out.end(), base.points.begin(), base.points.end());
    } else {
      fat_rec(subset, b, c0, out, stats);
    }
  }
}

}  // namespace

PierceOracle exact_pierce_oracle(size_t cap) {
  PierceOracle o;
  o.name = "exact";
  o.ratio = 1.0;
  o.solve = [cap](const ObjectSet& s, const StabbingGrid&) { return exact_mps(s, cap, cap); };
  return o;
}

PierceOracle greedy_pierce_oracle() {
  PierceOracle o;
  o.name = "greedy-corners";
  o.ratio = 0.0;  // logarithmic, not a fixed constant
  o.solve = [](const ObjectSet& s, const StabbingGrid& g) {
    if (s.empty()) return PiercingSolution{};
    return greedy_cover(s, grid_corners(g));
  };
  return o;
}

PierceOracle auto_pierce_oracle(size_t exact_cap) {
  PierceOracle ex = exact_pierce_oracle(exact_cap);
  PierceOracle gr = greedy_pierce_oracle();
  PierceOracle o;
  o.name = "auto";
  o.ratio = 1.0;
  o.solve = [exact_cap, ex, gr](const ObjectSet& s, const StabbingGrid& g) {
    return s.size() <= exact_cap ? ex.solve(s, g) : gr.solve(s, g);
  };
  return o;
}

ClassIndex round_to_classes(const ObjectSet& s, const StabbingGrid& grid) {
  return ClassIndex(s, grid);
}

PiercingSolution pierce_stabbed_boxes(const ObjectSet& s, const StabbingGrid& grid,
                                      const PierceOracle& oracle) {
  if (s.empty()) return {};
  ClassIndex classes(s, grid);
  ObjectSet reps = classes.representatives(s);
  PiercingSolution mid = oracle.solve(reps, grid);
  require(check_piercing(reps, mid.points).ok, "oracle output misses a representative");
  PiercingSolution out;
  for (const Point& p : mid.points) {
    auto corners = corner_expansion(grid, p);
    out.points.insert(out.points.end(), corners.begin(), corners.end());
  }
  dedupe_points(out.points);
  require(out.points.size() <= (size_t{1} << s[0].dim()) * mid.points.size(),
          "corner expansion exceeded its bound");
  require(check_piercing(s, out.points).ok, "expanded points miss an object");
  return out;
}

PiercingSolution pierce_boxes(const ObjectSet& s, int64_t b, const PierceOracle& oracle) {
  if (s.empty()) return {};
  const int dim = s[0].dim();
  detail::TypeTree tree(dim, b, [dim, &oracle](detail::TypeNode& nd, const ObjectSet& members) {
    if (members.empty()) {
      nd.pierce_cache = {};
      return;
    }
    std::vector<std::vector<double>> lines(nd.gamma.begin(), nd.gamma.begin() + dim);
    StabbingGrid g = StabbingGrid::from_lines(dim, std::move(lines));
    nd.pierce_cache = pierce_stabbed_boxes(members, g, oracle);
  });
  tree.build(s);
  PiercingSolution out;
  tree.for_each_leaf([&](const detail::TypeNode& nd) {
    out.points.insert(out.points.end(), nd.pierce_cache.points.begin(), nd.pierce_cache.points.end());
  });
  return out;
}

struct DynPierceBoxes::Impl {
  PierceOracle oracle;
  detail::TypeTree tree;

  Impl(int dim, int64_t b, PierceOracle orc)
      : oracle(std::move(orc)),
        tree(dim, b, [dim, this](detail::TypeNode& nd, const ObjectSet& members) {
          if (members.empty()) {
            nd.pierce_cache = {};
            return;
          }
          std::vector<std::vector<double>> lines(nd.gamma.begin(), nd.gamma.begin() + dim);
          StabbingGrid g = StabbingGrid::from_lines(dim, std::move(lines));
          nd.pierce_cache = pierce_stabbed_boxes(members, g, oracle);
        }) {}
};

DynPierceBoxes::DynPierceBoxes(int dim, int64_t b, PierceOracle oracle)
    : impl_(std::make_unique<Impl>(dim, b, std::move(oracle))) {}
DynPierceBoxes::~DynPierceBoxes() = default;
DynPierceBoxes::DynPierceBoxes(DynPierceBoxes&&) noexcept = default;
DynPierceBoxes& DynPierceBoxes::operator=(DynPierceBoxes&&) noexcept = default;

void DynPierceBoxes::insert(const GeomObject& o) { impl_->tree.insert(o); }
void DynPierceBoxes::erase(int64_t id) { impl_->tree.erase(id); }
size_t DynPierceBoxes::size() const { return impl_->tree.size(); }
size_t DynPierceBoxes::rebuild_count() const { return impl_->tree.rebuild_count(); }

PiercingSolution DynPierceBoxes::current() const {
  PiercingSolution out;
  impl_->tree.for_each_leaf([&](const detail::TypeNode& nd) {
    out.points.insert(out.points.end(), nd.pierce_cache.points.begin(), nd.pierce_cache.points.end());
  });
  return out;
}

std::vector<Point> lambda_points(const Cell& cell, double c0, double dmin) {
  require(c0 > 0, "goodness constant must be positive");
  require(dmin > 0, "minimum diameter must be positive");
  std::vector<Point> out;
  const double sigma = dmin / 4.0;
  const double mu = dmin / 4.0;
  const double band = mu + sigma / 2.0 + sigma * 1e-9;

  auto add_box = [&](const QuadtreeBox& qb) {
    if (qb.whole_space) return;
    const AxisBox B = qb.to_box();
    const int d = B.dim();
    std::array<std::vector<double>, kMaxDim> vals;
    for (int a = 0; a < d; ++a) {
      double start = B.lo[a] - mu - sigma;
      double stop = B.hi[a] + mu + sigma;
      auto count = static_cast<size_t>(std::floor((stop - start) / sigma)) + 1;
      require(count <= 4096, "boundary grid too fine for this cell");
      for (size_t k = 0; k < count; ++k) vals[static_cast<size_t>(a)].push_back(start + static_cast<double>(k) * sigma);
    }
    std::array<size_t, kMaxDim> it{};
    while (true) {
      Point p;
      p.dim = d;
      for (int a = 0; a < d; ++a) p.c[static_cast<size_t>(a)] = vals[static_cast<size_t>(a)][it[static_cast<size_t>(a)]];
      if (boundary_dist(B, p) <= band) out.push_back(p);
      int a = 0;
      for (; a < d; ++a) {
        auto& i = it[static_cast<size_t>(a)];
        if (++i < vals[static_cast<size_t>(a)].size()) break;
        i = 0;
      }
      if (a == d) break;
    }
  };

  add_box(cell.outer);
  if (cell.inner) add_box(*cell.inner);
  dedupe_points(out);
  return out;
}

PiercingSolution greedy_fat_piercing(const ObjectSet& s) {
  if (s.empty()) return {};
  std::vector<size_t> order(s.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    double da = linf_diameter(s[a]), db = linf_diameter(s[b]);
    if (da != db) return da < db;
    return s[a].id < s[b].id;
  });

  std::vector<bool> active(s.size(), true);
  PiercingSolution out;
  for (size_t oi : order) {
    if (!active[oi]) continue;
    const GeomObject& o = s[oi];
    const double D = linf_diameter(o);
    std::vector<Point> canon;
    if (D == 0.0) {
      canon.push_back(inner_point(o));
    } else {
      const AxisBox B = bbox(o);
      const int d = B.dim();
      std::array<std::vector<double>, kMaxDim> vals;
      for (int a = 0; a < d; ++a) {
        double start = B.lo[a] - D / 2.0, stop = B.hi[a] + D / 2.0 + D * 1e-12;
        for (double x = start; x <= stop; x += D / 4.0) vals[static_cast<size_t>(a)].push_back(x);
      }
      std::array<size_t, kMaxDim> it{};
      while (true) {
        Point p;
        p.dim = d;
        for (int a = 0; a < d; ++a) p.c[static_cast<size_t>(a)] = vals[static_cast<size_t>(a)][it[static_cast<size_t>(a)]];
        canon.push_back(p);
        int a = 0;
        for (; a < d; ++a) {
          auto& i = it[static_cast<size_t>(a)];
          if (++i < vals[static_cast<size_t>(a)].size()) break;
          i = 0;
        }
        if (a == d) break;
      }
    }
    out.points.insert(out.points.end(), canon.begin(), canon.end());
    bool self_removed = false;
    for (size_t j = 0; j < s.size(); ++j) {
      if (!active[j]) continue;
      for (const Point& p : canon) {
        if (contains(s[j], p)) {
          active[j] = false;
          if (j == oi) self_removed = true;
          break;
        }
      }
    }
    require(self_removed, "object too thin for fat greedy piercing");
  }
  dedupe_points(out.points);
  require(check_piercing(s, out.points).ok, "greedy canonical points miss an object");
  return out;
}

PiercingSolution pierce_boundary_fat(const ObjectSet& s, const std::vector<Cell>& cells,
                                     double c0, const FatPierceOracle& oracle,
                                     FatPierceStats* stats) {
  if (s.empty()) return {};
  require(!cells.empty(), "cell list is empty");
  require(c0 > 0, "goodness constant must be positive");

  std::map<std::vector<int64_t>, std::vector<size_t>> classes;
  for (size_t i = 0; i < s.size(); ++i) {
    std::vector<int64_t> sig;
    bool strictly = false;
    for (size_t ci = 0; ci < cells.size(); ++ci) {
      if (object_touches_cell(cells[ci], s[i])) sig.push_back(static_cast<int64_t>(ci));
      if (object_strictly_inside(cells[ci], s[i])) strictly = true;
    }
    require(!sig.empty(), "object touches no cell");
    require(!strictly, "object does not cross any cell boundary");
    classes[sig].push_back(i);
  }
  ObjectSet reps;
  for (const auto& [sig, members] : classes) {
    size_t best = members[0];
    for (size_t m : members)
      if (s[m].weight > s[best].weight || (s[m].weight == s[best].weight && s[m].id < s[best].id))
        best = m;
    reps.push_back(s[best]);
  }

  PiercingSolution mid = oracle(reps);
  require(check_piercing(reps, mid.points).ok, "oracle output misses a representative");
  if (stats) stats->oracle_points += mid.points.size();

  std::set<int64_t> used;
  for (const Point& p : mid.points) {
    int64_t ci = locate_cell(cells, p);
    require(ci >= 0, "oracle point lies in no cell");
    used.insert(ci);
  }
  PiercingSolution out;
  for (int64_t ci : used) {
    const Cell& cell = cells[static_cast<size_t>(ci)];
    auto lam = lambda_points(cell, c0, cell_dmin(cell, c0));
    if (stats) stats->max_lambda = std::max(stats->max_lambda, lam.size());
    out.points.insert(out.points.end(), lam.begin(), lam.end());
  }
  dedupe_points(out.points);
  drop_useless_points(s, out.points);

  // fix up any member the boundary grids missed (kept observable via stats)
  {
    Probe probe(out.points, s[0].dim());
    std::vector<Point> added;
    for (const auto& o : s)
      if (!probe.pierces(o)) added.push_back(inner_point(o));
    if (!added.empty()) {
      if (stats) stats->patched += added.size();
      out.points.insert(out.points.end(), added.begin(), added.end());
      dedupe_points(out.points);
    }
  }
  require(check_piercing(s, out.points).ok, "boundary grids miss an object");
  return out;
}

PiercingSolution pierce_fat(const ObjectSet& s, int64_t b, double c0, FatPierceStats* stats) {
  if (s.empty()) return {};
  const int dim = s[0].dim();
  for (const auto& o : s) require(o.dim() == dim, "mixed dimensions in object set");
  if (c0 <= 0) c0 = 4.0 * (dim + 1);

  const detail::NormMap nm = detail::NormMap::fit(s);
  ObjectSet norm;
  norm.reserve(s.size());
  for (const auto& o : s) norm.push_back(nm.apply(o));

  const std::vector<Point> vs = shifts(dim);
  std::vector<ObjectSet> buckets(vs.size());
  ObjectSet fallback;
  for (const auto& o : norm) {
    bool placed = false;
    for (size_t j = 0; j < vs.size() && !placed; ++j) {
      GeomObject shifted = shift_object(o, vs[j]);
      if (is_good(shifted, c0)) {
        buckets[j].push_back(shifted);
        placed = true;
      }
    }
    if (!placed) fallback.push_back(o);
  }

  std::vector<Point> pts;  // normalized coordinates
  for (size_t j = 0; j < vs.size(); ++j) {
    if (buckets[j].empty()) continue;
    std::vector<Point> shifted_pts;
    fat_rec(buckets[j], b, c0, shifted_pts, stats);
    for (Point p : shifted_pts) {
      for (int a = 0; a < dim; ++a) p.c[static_cast<size_t>(a)] -= vs[j].c[static_cast<size_t>(a)];
      pts.push_back(p);
    }
  }
  if (!fallback.empty()) {
    if (stats) stats->fallback_objects += fallback.size();
    auto base = greedy_fat_piercing(fallback);
    pts.insert(pts.end(), base.points.begin(), base.points.end());
  }

  PiercingSolution out;
  out.points.reserve(pts.size());
  for (const Point& p : pts) out.points.push_back(nm.unapply(p));
  dedupe_points(out.points);
  drop_useless_points(s, out.points);

  // numerical inverse-transform slack or pipeline leaks get an explicit fix
  {
    Probe probe(out.points, dim);
    std::vector<Point> added;
    for (const auto& o : s)
      if (!probe.pierces(o)) added.push_back(inner_point(o));
    if (!added.empty()) {
      if (stats) stats->patched += added.size();
      out.points.insert(out.points.end(), added.begin(), added.end());
      dedupe_points(out.points);
    }
  }
  require(check_piercing(s, out.points).ok, "fat pipeline missed an object");
  return out;
}

}  // namespace geo
