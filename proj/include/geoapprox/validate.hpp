#pragma once
// Solution validators. All checks are exhaustive (no sampling) and use the
// SIMD kernels for homogeneous 2-d sets when profitable.

#include <cstdint>
#include <string>
#include <vector>

#include "geoapprox/geom.hpp"

namespace geo {

struct ValidationResult {
  bool ok = true;
  std::string reason;  // first violation, empty when ok
};

// every object contains at least one point
ValidationResult check_piercing(const ObjectSet& s, const std::vector<Point>& points);

// ids exist, are unique, and the chosen objects are pairwise disjoint
ValidationResult check_independent(const ObjectSet& s, const std::vector<int64_t>& ids);

// ids exist and every intersecting pair has an endpoint among them
ValidationResult check_vertex_cover(const ObjectSet& s, const std::vector<int64_t>& ids);

// pairs are vertex-disjoint existing ids whose objects intersect; when
// bichromatic, endpoints must carry different colors
ValidationResult check_matching(const ObjectSet& s,
                                const std::vector<std::pair<int64_t, int64_t>>& pairs,
                                bool bichromatic = false);

}  // namespace geo
