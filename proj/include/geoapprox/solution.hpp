#pragma once
// Solution value types shared by solvers, oracles, validators, and the CLI.

#include <cstdint>
#include <utility>
#include <vector>

#include "geoapprox/geom.hpp"

namespace geo {

struct PiercingSolution {
  std::vector<Point> points;
  size_t value() const { return points.size(); }
};

struct ISolution {
  std::vector<int64_t> ids;
  double value = 0.0;  // cardinality, or total weight in weighted mode
};

struct VCSolution {
  std::vector<int64_t> ids;
  size_t value() const { return ids.size(); }
};

struct Matching {
  std::vector<std::pair<int64_t, int64_t>> pairs;
  size_t value() const { return pairs.size(); }
};

}  // namespace geo
