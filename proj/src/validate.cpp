#include "geoapprox/validate.hpp"

#include <algorithm>
#include <set>

#include "geoapprox/kernels.hpp"

namespace geo {

namespace {

ValidationResult fail(std::string reason) { return {false, std::move(reason)}; }

bool all_dim2(const ObjectSet& s) {
  return std::all_of(s.begin(), s.end(), [](const GeomObject& o) { return o.dim() == 2; });
}

}  // namespace

ValidationResult check_piercing(const ObjectSet& s, const std::vector<Point>& points) {
  if (s.empty()) return {};
  if (all_dim2(s)) {
    kernels::Points2 pts;
    for (const auto& p : points) pts.push(p);
    for (const auto& o : s) {
      bool hit = o.is_box() ? kernels::any_point_in_box(pts, o.box())
                            : kernels::any_point_in_disk(pts, o.disk());
      if (!hit) return fail("object " + std::to_string(o.id) + " is not pierced");
    }
    return {};
  }
  for (const auto& o : s) {
    bool hit = std::any_of(points.begin(), points.end(), [&](const Point& p) { return contains(o, p); });
    if (!hit) return fail("object " + std::to_string(o.id) + " is not pierced");
  }
  return {};
}

ValidationResult check_independent(const ObjectSet& s, const std::vector<int64_t>& ids) {
  IdIndex idx(s);
  std::set<int64_t> seen;
  std::vector<size_t> at;
  for (int64_t id : ids) {
    auto k = idx.find(id);
    if (!k) return fail("unknown id " + std::to_string(id));
    if (!seen.insert(id).second) return fail("duplicate id " + std::to_string(id));
    at.push_back(*k);
  }
  for (size_t i = 0; i < at.size(); ++i)
    for (size_t j = i + 1; j < at.size(); ++j)
      if (intersects(s[at[i]], s[at[j]]))
        return fail("ids " + std::to_string(s[at[i]].id) + " and " + std::to_string(s[at[j]].id) + " intersect");
  return {};
}

ValidationResult check_vertex_cover(const ObjectSet& s, const std::vector<int64_t>& ids) {
  IdIndex idx(s);
  std::set<int64_t> cover;
  for (int64_t id : ids) {
    if (!idx.find(id)) return fail("unknown id " + std::to_string(id));
    cover.insert(id);
  }
  for (size_t i = 0; i < s.size(); ++i)
    for (size_t j = i + 1; j < s.size(); ++j) {
      if (!intersects(s[i], s[j])) continue;
      if (!cover.count(s[i].id) && !cover.count(s[j].id))
        return fail("edge (" + std::to_string(s[i].id) + "," + std::to_string(s[j].id) + ") uncovered");
    }
  return {};
}

ValidationResult check_matching(const ObjectSet& s,
                                const std::vector<std::pair<int64_t, int64_t>>& pairs,
                                bool bichromatic) {
  IdIndex idx(s);
  std::set<int64_t> used;
  for (const auto& [a, b] : pairs) {
    auto ka = idx.find(a), kb = idx.find(b);
    if (!ka || !kb) return fail("unknown id in pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
    if (a == b) return fail("self-loop at id " + std::to_string(a));
    if (!used.insert(a).second) return fail("id " + std::to_string(a) + " matched twice");
    if (!used.insert(b).second) return fail("id " + std::to_string(b) + " matched twice");
    if (!intersects(s[*ka], s[*kb]))
      return fail("pair (" + std::to_string(a) + "," + std::to_string(b) + ") does not intersect");
    if (bichromatic) {
      if (s[*ka].color == Color::none || s[*kb].color == Color::none || s[*ka].color == s[*kb].color)
        return fail("pair (" + std::to_string(a) + "," + std::to_string(b) + ") is not bichromatic");
    }
  }
  return {};
}

}  // namespace geo
