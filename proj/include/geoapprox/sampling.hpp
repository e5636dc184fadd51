#pragma once
// Monte Carlo value estimators.
//
// The box piercing and rectangle independent-set solvers both decompose the
// input into per-axis-stabbed subproblems whose individual solution values
// are bounded: between 1 and B (unweighted), or between w_i and B*w_i where
// w_i is the largest member weight of subproblem i (weighted).  Under those
// bounds the total value can be estimated from a small random sample of
// subproblems instead of solving all of them: `estimate_sum` draws
// ceil(4*B/eps^2) terms and returns an unbiased estimator that lands within
// (1 +- eps) of the true sum with probability at least 3/4, and
// `median_boost` drives the failure probability down exponentially by taking
// the median of independent repetitions.
//
// `estimate_mps_value` / `estimate_mis_value` apply this to the solver trees:
// they build the same divide-and-conquer tree as the full solver, enumerate
// the nonempty fully-stabbed leaf subproblems as terms (empty leaves are
// removed so the lower bound holds), and estimate the leaf-value sum — for
// the independent-set case one sum per combination of per-axis tree levels,
// returning the best combination.  Only the optimal VALUE is estimated; no
// witness set is produced.  All randomness comes from the caller's seed via
// labeled stream derivation, so results are reproducible bit for bit.

#include <cstdint>
#include <functional>
#include <vector>

#include "geoapprox/geom.hpp"
#include "geoapprox/mis.hpp"
#include "geoapprox/mps.hpp"
#include "geoapprox/rng.hpp"

namespace geo {

// A finite family of lazily evaluated terms a_1..a_m together with the
// sampling distribution and the declared per-term bounds.  With `weights`
// empty every w_i is 1 and `sampler` draws uniformly; otherwise `sampler`
// draws index i with probability w_i / sum(w).  Every evaluated term must
// satisfy w_i <= a_i <= B * w_i; `estimate_sum` checks this on each draw.
struct TermSource {
  size_t m = 0;                            // term count
  std::function<size_t(Rng&)> sampler;     // draw an index in [0, m)
  std::function<double(size_t)> evaluator; // a_i, computed on demand
  double B = 1.0;                          // per-term bound ratio
  std::vector<double> weights;             // empty in the unweighted case
};

// Uniform-draw source over explicit values with every w_i = 1.
TermSource basic_source(std::vector<double> values, double B);

// Weight-proportional source over explicit values; weights must be positive.
TermSource importance_source(std::vector<double> values, std::vector<double> weights, double B);

// One sampling pass: draws ceil(4*B/eps^2) independent terms and returns
//   X = (1/l) * sum over draws of a_i * W / w_i,   W = sum of all weights,
// an unbiased estimate of S = sum a_i with Pr[|X - S| <= eps*S] >= 3/4.
// Requires eps in (0, 1], a nonempty source, and in-bounds evaluations.
// If `samples` is non-null it receives the number of draws.
double estimate_sum(const TermSource& src, double eps, Rng& rng, size_t* samples = nullptr);

// Median of `trials` independent runs of `trial` (called with 0..trials-1).
// `trials` must be odd; the failure probability of the median decays
// exponentially in the trial count when each run fails with probability < 1/2.
double median_boost(const std::function<double(size_t)>& trial, size_t trials);

// Diagnostics from one tree-estimator call.
struct EstimateStats {
  double B = 1.0;          // bound used: (max stabbing lines per axis + 1)^dim
  size_t terms = 0;        // nonempty leaf subproblems enumerated
  size_t levels = 1;       // level combinations compared (independent set only)
  size_t samples = 0;      // draws per estimated sum
  size_t evaluations = 0;  // distinct leaf subproblems actually solved
  size_t trials = 1;       // repetitions contributing to a boosted result
};

// Estimates the total piercing-set size the tree solver would return on a set
// of axis-aligned boxes, by sampling leaf subproblems instead of solving all
// of them.  Deterministic for fixed (seed, trial).
double estimate_mps_value(const ObjectSet& s, int64_t b, const PierceOracle& oracle, double eps,
                          uint64_t seed, size_t trial = 0, EstimateStats* stats = nullptr);

// Estimates the independent-set value of planar axis-aligned rectangles: one
// sampled sum per combination of per-axis tree levels, best combination wins.
// In weighted mode terms are drawn proportionally to each subproblem's
// largest member weight.  Deterministic for fixed (seed, trial).
double estimate_mis_value(const ObjectSet& s, int64_t b, const MISOracle& oracle, double eps,
                          bool weighted, uint64_t seed, size_t trial = 0,
                          EstimateStats* stats = nullptr);

// Median-boosted variants: `trials` (odd, default 15) independent estimates,
// each on its own RNG stream derived from (seed, trial index).
double boosted_mps_estimate(const ObjectSet& s, int64_t b, const PierceOracle& oracle, double eps,
                            size_t trials, uint64_t seed, EstimateStats* stats = nullptr);
double boosted_mis_estimate(const ObjectSet& s, int64_t b, const MISOracle& oracle, double eps,
                            bool weighted, size_t trials, uint64_t seed,
                            EstimateStats* stats = nullptr);

}  // namespace geo
