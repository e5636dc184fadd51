#include "geoapprox/rounding.hpp"

#include <algorithm>
#include <map>

namespace geo {

StabbingGrid StabbingGrid::from_lines(int dim, std::vector<std::vector<double>> per_axis) {
  require(dim >= 1 && dim <= kMaxDim, "grid dimension out of range");
  require(static_cast<int>(per_axis.size()) == dim, "one line list per axis required");
  StabbingGrid g;
  g.dim = dim;
  for (int a = 0; a < dim; ++a) {
    auto& v = per_axis[static_cast<size_t>(a)];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    g.lines[static_cast<size_t>(a)] = std::move(v);
  }
  return g;
}

bool StabbingGrid::stabs(const AxisBox& b) const {
  if (b.dim() != dim) return false;
  for (int a = 0; a < dim; ++a) {
    const auto& ls = lines[static_cast<size_t>(a)];
    auto it = std::lower_bound(ls.begin(), ls.end(), b.lo[a]);
    if (it == ls.end() || *it > b.hi[a]) return false;
  }
  return true;
}

std::optional<ClassKey> class_key(const StabbingGrid& g, const AxisBox& b) {
  require(b.dim() == g.dim, "box/grid dimension mismatch");
  ClassKey k;
  k.dim = g.dim;
  for (int a = 0; a < g.dim; ++a) {
    const auto& ls = g.lines[static_cast<size_t>(a)];
    auto first = std::lower_bound(ls.begin(), ls.end(), b.lo[a]);
    auto past = std::upper_bound(ls.begin(), ls.end(), b.hi[a]);
    if (first == past) return std::nullopt;
    k.ab[2 * static_cast<size_t>(a)] = static_cast<int>(first - ls.begin());
    k.ab[2 * static_cast<size_t>(a) + 1] = static_cast<int>(past - ls.begin()) - 1;
  }
  return k;
}

ClassIndex::ClassIndex(const ObjectSet& s, const StabbingGrid& g) {
  std::map<ClassKey, BoxClass> by_key;
  for (size_t i = 0; i < s.size(); ++i) {
    require(s[i].is_box(), "class rounding applies to boxes");
    auto k = class_key(g, s[i].box());
    require(k.has_value(), "box not stabbed by the grid");
    auto [it, fresh] = by_key.try_emplace(*k);
    BoxClass& c = it->second;
    if (fresh) {
      c.key = *k;
      c.rep = i;
    } else {
      const GeomObject& cur = s[c.rep];
      if (s[i].weight > cur.weight || (s[i].weight == cur.weight && s[i].id < cur.id)) c.rep = i;
    }
    c.members.push_back(i);
  }
  classes_.reserve(by_key.size());
  for (auto& [k, c] : by_key) classes_.push_back(std::move(c));
}

ObjectSet ClassIndex::representatives(const ObjectSet& s) const {
  ObjectSet reps;
  reps.reserve(classes_.size());
  for (const auto& c : classes_) reps.push_back(s[c.rep]);
  return reps;
}

std::vector<Point> corner_expansion(const StabbingGrid& g, const Point& p) {
  require(p.dim == g.dim, "point/grid dimension mismatch");
  std::array<std::array<double, 2>, kMaxDim> choices{};
  std::array<int, kMaxDim> counts{};
  for (int a = 0; a < g.dim; ++a) {
    const auto& ls = g.lines[static_cast<size_t>(a)];
    auto right = std::lower_bound(ls.begin(), ls.end(), p[a]);
    double lo = (right == ls.begin()) ? p[a] : *(right - 1);
    double hi = (right == ls.end()) ? p[a] : *right;
    choices[static_cast<size_t>(a)][0] = lo;
    counts[static_cast<size_t>(a)] = (lo == hi) ? 1 : 2;
    choices[static_cast<size_t>(a)][1] = hi;
  }
  std::vector<Point> out;
  std::array<int, kMaxDim> at{};
  while (true) {
    Point q;
    q.dim = g.dim;
    for (int a = 0; a < g.dim; ++a)
      q.c[static_cast<size_t>(a)] = choices[static_cast<size_t>(a)][static_cast<size_t>(at[static_cast<size_t>(a)])];
    out.push_back(q);
    int a = 0;
    while (a < g.dim) {
      if (++at[static_cast<size_t>(a)] < counts[static_cast<size_t>(a)]) break;
      at[static_cast<size_t>(a)] = 0;
      ++a;
    }
    if (a == g.dim) break;
  }
  return out;
}

}  // namespace geo
