#include "geoapprox/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <unordered_map>

#include "type_tree.hpp"

namespace geo {
namespace {

constexpr size_t kMaxDraws = 50'000'000;  // refuse absurd sample budgets

double weight_at(const TermSource& src, size_t i) {
  return src.weights.empty() ? 1.0 : src.weights[i];
}

double total_weight(const TermSource& src) {
  if (src.weights.empty()) return static_cast<double>(src.m);
  double w = 0.0;
  for (double x : src.weights) w += x;
  return w;
}

// Shared state for the tree-backed estimators: the solver's recursion tree
// built with an inert leaf callback (leaves are solved only when sampled),
// plus one record per nonempty leaf.
struct LeafTerms {
  detail::TypeTree tree;
  std::vector<const detail::TypeNode*> leaves;  // nonempty only
  std::vector<size_t> group_of;                 // level-combination index per leaf
  std::vector<double> max_weight;               // heaviest member weight per leaf
  std::vector<std::vector<size_t>> groups;      // leaf indices per level combination
  double B = 1.0;
  int dim = 0;

  LeafTerms(const ObjectSet& s, int dim_in, int64_t b)
      : tree(dim_in, b, [](detail::TypeNode& nd, const ObjectSet&) {
          nd.pierce_cache = {};
          nd.mis_cache = {};
        }),
        dim(dim_in) {
    tree.build(s);
    std::unordered_map<int64_t, double> weight_of;
    weight_of.reserve(s.size());
    for (const auto& o : s) weight_of.emplace(o.id, o.weight);

    // A leaf's level combination records, per axis, the depth of the node
    // whose dividers captured it.  Leaves reached under the same combination
    // live in disjoint slabs on every axis, so their solutions combine by
    // plain summation.
    std::map<std::array<int, kMaxDim>, size_t> group_index;
    size_t max_lines = 0;
    std::array<int, kMaxDim> levels{};
    levels.fill(-1);
    walk(&tree.root(), levels, group_index, weight_of, max_lines);
    B = std::pow(static_cast<double>(max_lines) + 1.0, dim);
  }

  void walk(const detail::TypeNode* nd, std::array<int, kMaxDim>& levels,
            std::map<std::array<int, kMaxDim>, size_t>& group_index,
            const std::unordered_map<int64_t, double>& weight_of, size_t& max_lines) {
    if (!nd) return;
    if (nd->leaf) {
      if (nd->ids.empty()) return;  // empty subproblems carry no value
      for (int a = 0; a < dim; ++a) {
        require(levels[static_cast<size_t>(a)] >= 0, "leaf reached with an unsplit axis");
        max_lines = std::max(max_lines, nd->gamma[static_cast<size_t>(a)].size());
      }
      auto [it, fresh] = group_index.try_emplace(levels, groups.size());
      if (fresh) groups.emplace_back();
      double w = 0.0;
      for (int64_t id : nd->ids) w = std::max(w, weight_of.at(id));
      groups[it->second].push_back(leaves.size());
      group_of.push_back(it->second);
      max_weight.push_back(w);
      leaves.push_back(nd);
      return;
    }
    const auto axis = static_cast<size_t>(nd->axis);
    const int saved = levels[axis];
    levels[axis] = nd->level;
    walk(nd->stored.get(), levels, group_index, weight_of, max_lines);
    levels[axis] = saved;
    for (const auto& c : nd->children) walk(c.get(), levels, group_index, weight_of, max_lines);
  }

  ObjectSet members(const ObjectSet& s, const detail::TypeNode& nd) const {
    std::unordered_map<int64_t, size_t> at;
    at.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) at.emplace(s[i].id, i);
    ObjectSet out;
    out.reserve(nd.ids.size());
    for (int64_t id : nd.ids) out.push_back(s[at.at(id)]);
    return out;
  }
};

// Sum the weights of `members` of one group and build a TermSource whose
// evaluator solves the leaf on first touch and then serves the cached value.
TermSource group_source(const std::vector<size_t>& members, const std::vector<double>* weights,
                        double B, const std::function<double(size_t)>& leaf_value,
                        std::vector<double>& cache, std::vector<char>& have, size_t& evaluations) {
  TermSource src;
  src.m = members.size();
  src.B = B;
  if (weights) {
    src.weights.reserve(members.size());
    for (size_t leaf : members) src.weights.push_back((*weights)[leaf]);
    std::vector<double> cum(src.weights.size());
    double run = 0.0;
    for (size_t i = 0; i < src.weights.size(); ++i) {
      require(src.weights[i] > 0.0, "importance sampling needs positive weights");
      run += src.weights[i];
      cum[i] = run;
    }
    src.sampler = [cum, run](Rng& rng) {
      const double u = rng.uniform() * run;
      const auto it = std::upper_bound(cum.begin(), cum.end(), u);
      return std::min(static_cast<size_t>(it - cum.begin()), cum.size() - 1);
    };
  } else {
    const size_t m = members.size();
    src.sampler = [m](Rng& rng) { return rng.uniform_index(m); };
  }
  src.evaluator = [&, members, leaf_value](size_t i) {
    const size_t leaf = members[i];
    if (!have[leaf]) {
      cache[leaf] = leaf_value(leaf);
      have[leaf] = 1;
      ++evaluations;
    }
    return cache[leaf];
  };
  return src;
}

}  // namespace

TermSource basic_source(std::vector<double> values, double B) {
  TermSource src;
  src.m = values.size();
  src.B = B;
  const size_t m = values.size();
  src.sampler = [m](Rng& rng) { return rng.uniform_index(m); };
  src.evaluator = [vals = std::move(values)](size_t i) { return vals[i]; };
  return src;
}

TermSource importance_source(std::vector<double> values, std::vector<double> weights, double B) {
  require(values.size() == weights.size(), "one weight per term required");
  TermSource src;
  src.m = values.size();
  src.B = B;
  std::vector<double> cum(weights.size());
  double run = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    require(weights[i] > 0.0, "importance sampling needs positive weights");
    run += weights[i];
    cum[i] = run;
  }
  src.weights = std::move(weights);
  src.sampler = [cum, run](Rng& rng) {
    const double u = rng.uniform() * run;
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    return std::min(static_cast<size_t>(it - cum.begin()), cum.size() - 1);
  };
  src.evaluator = [vals = std::move(values)](size_t i) { return vals[i]; };
  return src;
}

double estimate_sum(const TermSource& src, double eps, Rng& rng, size_t* samples) {
  require(eps > 0.0 && eps <= 1.0, "accuracy parameter must lie in (0, 1]");
  require(src.m > 0, "cannot estimate an empty sum");
  require(static_cast<bool>(src.sampler) && static_cast<bool>(src.evaluator),
          "term source lacks a sampler or evaluator");
  require(src.B >= 1.0 && std::isfinite(src.B), "per-term bound ratio must be finite and >= 1");
  require(src.weights.empty() || src.weights.size() == src.m, "one weight per term required");

  const double raw = std::ceil(4.0 * src.B / (eps * eps));
  require(raw <= static_cast<double>(kMaxDraws), "sample budget too large");
  const auto draws = static_cast<size_t>(raw);
  if (samples) *samples = draws;

  const double W = total_weight(src);
  double acc = 0.0;
  for (size_t t = 0; t < draws; ++t) {
    const size_t i = src.sampler(rng);
    require(i < src.m, "sampler returned an out-of-range index");
    const double a = src.evaluator(i);
    const double w = weight_at(src, i);
    require(a >= w, "evaluated term fell below its declared lower bound");
    require(a <= src.B * w, "evaluated term exceeded its declared upper bound");
    acc += a * (W / w);
  }
  return acc / static_cast<double>(draws);
}

double median_boost(const std::function<double(size_t)>& trial, size_t trials) {
  require(trials % 2 == 1, "median needs an odd trial count");
  require(static_cast<bool>(trial), "missing trial function");
  std::vector<double> vals;
  vals.reserve(trials);
  for (size_t t = 0; t < trials; ++t) vals.push_back(trial(t));
  auto mid = vals.begin() + static_cast<std::ptrdiff_t>(trials / 2);
  std::nth_element(vals.begin(), mid, vals.end());
  return *mid;
}

double estimate_mps_value(const ObjectSet& s, int64_t b, const PierceOracle& oracle, double eps,
                          uint64_t seed, size_t trial, EstimateStats* stats) {
  if (s.empty()) {
    if (stats) *stats = {};
    return 0.0;
  }
  const int dim = s[0].dim();
  LeafTerms terms(s, dim, b);
  require(!terms.leaves.empty(), "nonempty input produced no leaf subproblems");

  std::vector<double> cache(terms.leaves.size(), 0.0);
  std::vector<char> have(terms.leaves.size(), 0);
  size_t evaluations = 0;
  auto leaf_value = [&](size_t leaf) {
    const detail::TypeNode& nd = *terms.leaves[leaf];
    std::vector<std::vector<double>> lines(nd.gamma.begin(), nd.gamma.begin() + dim);
    StabbingGrid g = StabbingGrid::from_lines(dim, std::move(lines));
    return static_cast<double>(pierce_stabbed_boxes(terms.members(s, nd), g, oracle).points.size());
  };

  std::vector<size_t> all(terms.leaves.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  TermSource src = group_source(all, nullptr, terms.B, leaf_value, cache, have, evaluations);

  Rng rng = derive_rng(seed, "pierce-estimate", trial);
  size_t draws = 0;
  const double x = estimate_sum(src, eps, rng, &draws);
  if (stats) {
    *stats = {};
    stats->B = terms.B;
    stats->terms = terms.leaves.size();
    stats->levels = 1;
    stats->samples = draws;
    stats->evaluations = evaluations;
  }
  return x;
}

double estimate_mis_value(const ObjectSet& s, int64_t b, const MISOracle& oracle, double eps,
                          bool weighted, uint64_t seed, size_t trial, EstimateStats* stats) {
  if (s.empty()) {
    if (stats) *stats = {};
    return 0.0;
  }
  require(s[0].dim() == 2, "independent-set estimation covers planar rectangles");
  LeafTerms terms(s, 2, b);
  require(!terms.leaves.empty(), "nonempty input produced no leaf subproblems");

  std::vector<double> cache(terms.leaves.size(), 0.0);
  std::vector<char> have(terms.leaves.size(), 0);
  size_t evaluations = 0;
  auto leaf_value = [&](size_t leaf) {
    const detail::TypeNode& nd = *terms.leaves[leaf];
    StabbingGrid g = StabbingGrid::from_lines(2, {nd.gamma[0], nd.gamma[1]});
    return mis_stabbed_rects(terms.members(s, nd), g, oracle).value;
  };

  Rng rng = derive_rng(seed, "independent-estimate", trial);
  double best = 0.0;
  size_t draws = 0;
  for (const auto& group : terms.groups) {
    TermSource src = group_source(group, weighted ? &terms.max_weight : nullptr, terms.B,
                                  leaf_value, cache, have, evaluations);
    best = std::max(best, estimate_sum(src, eps, rng, &draws));
  }
  if (stats) {
    *stats = {};
    stats->B = terms.B;
    stats->terms = terms.leaves.size();
    stats->levels = terms.groups.size();
    stats->samples = draws;
    stats->evaluations = evaluations;
  }
  return best;
}

double boosted_mps_estimate(const ObjectSet& s, int64_t b, const PierceOracle& oracle, double eps,
                            size_t trials, uint64_t seed, EstimateStats* stats) {
  const double x = median_boost(
      [&](size_t t) { return estimate_mps_value(s, b, oracle, eps, seed, t, t == 0 ? stats : nullptr); },
      trials);
  if (stats) stats->trials = trials;
  return x;
}

double boosted_mis_estimate(const ObjectSet& s, int64_t b, const MISOracle& oracle, double eps,
                            bool weighted, size_t trials, uint64_t seed, EstimateStats* stats) {
  const double x = median_boost(
      [&](size_t t) {
        return estimate_mis_value(s, b, oracle, eps, weighted, seed, t, t == 0 ? stats : nullptr);
      },
      trials);
  if (stats) stats->trials = trials;
  return x;
}

}  // namespace geo
