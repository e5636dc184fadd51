#pragma once
// Vertex cover for geometric intersection graphs: a multiplicative-weights
// solver for the fractional LP, an approximate kernel, promise-case static
// solvers (fat objects, rectangles, bipartite families), and a phase-based
// dynamic wrapper that serves covers from guessed optimum ranges.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "geoapprox/geom.hpp"
#include "geoapprox/solution.hpp"

namespace geo {

// ---------------------------------------------------------------------------
// min-weight intersecting pair oracle
// ---------------------------------------------------------------------------

struct EdgeCandidate {
  int64_t u = 0;
  int64_t v = 0;
  double weight_sum = 0.0;
};

// Maintains vertex weights over live objects and reports an intersecting
// pair minimizing the weight sum. Weights start at 1 on insert.
class MinWeightEdgeOracle {
 public:
  virtual ~MinWeightEdgeOracle() = default;
  virtual std::optional<EdgeCandidate> min_edge() = 0;
  virtual void set_weight(int64_t id, double w) = 0;
  virtual double weight(int64_t id) const = 0;
  virtual void insert(const GeomObject& o) = 0;
  virtual void remove(int64_t id) = 0;
  virtual std::vector<int64_t> live_ids() const = 0;
  virtual size_t size() const = 0;
};

// exhaustive pair scan with a cached best pair, invalidated when a weight
// change or update could affect it
std::unique_ptr<MinWeightEdgeOracle> naive_min_weight_edge_oracle(const ObjectSet& s = {});

// ---------------------------------------------------------------------------
// fractional cover via multiplicative weight updates
// ---------------------------------------------------------------------------

// weights are (1+delta)^{c_v}; only touched exponents are materialized
struct MWUState {
  double delta = 0.1;
  double W = 0.0;  // running sum of all weights
  std::map<int64_t, int64_t> exponents;
  double weight(int64_t id) const;
};

struct FractionalVC {
  std::map<int64_t, double> x;    // touched coordinates
  double default_x = 0.0;         // value of every untouched coordinate
  std::vector<int64_t> universe;  // ids the vector is defined over
  double size = 0.0;              // sum over the universe
  double value(int64_t id) const {
    auto it = x.find(id);
    return it == x.end() ? default_x : it->second;
  }
};

struct MWUStats {
  double z = 0.0;            // accepted budget
  size_t iterations = 0;     // iterations of the accepted run
  size_t t_max = 0;          // iteration cap of the accepted run
  size_t runs = 0;           // total attempts over the budget search
  double lower_bound = 0.0;  // certified optimum lower bound from failed budgets
};

// One attempt with a fixed budget z: returns a feasible fractional cover of
// size <= z, or nullopt if the iteration cap is hit (certifying that the
// fractional optimum exceeds z/(1+delta)). All oracle weights must be 1 on
// entry; they are restored to 1 before returning. delta in (0, 1/4].
std::optional<FractionalVC> mwu_try_budget(MinWeightEdgeOracle& oracle, size_t n, double z,
                                           double delta, MWUStats* stats = nullptr);

// doubling search over budgets plus one bisection refinement
FractionalVC mwu_fractional_vc(MinWeightEdgeOracle& oracle, size_t n, double delta,
                               MWUStats* stats = nullptr);

// ---------------------------------------------------------------------------
// kernel
// ---------------------------------------------------------------------------

struct KernelResult {
  std::vector<int64_t> K, H, L;
  double alpha = 0.0;
};

// threshold split of a feasible fractional cover; 0 < delta < gamma < 1/4
KernelResult kernelize(const FractionalVC& x, double gamma, double delta);

using PromiseSolver = std::function<VCSolution(const ObjectSet&)>;

// cover = inner(K) union H; validated against the full set
VCSolution vc_from_kernel(const ObjectSet& s, const KernelResult& kr, const PromiseSolver& inner);

// ---------------------------------------------------------------------------
// fat-object promise solver: separator recursion with additive error
// ---------------------------------------------------------------------------

struct SeparatorResult {
  AxisBox box;  // separating hypercube
  std::vector<int64_t> inside, outside, crossing;
  double t = 0.0;            // chosen scaling in (0,1)
  double base_side = 0.0;    // side of the seed hypercube
  int64_t h = 0;             // number of candidate scalings + 1
  size_t small_crossing = 0; // crossing objects of diameter <= base_side/h
  size_t centers_inside = 0;   // grid-snapped centers in the closed hypercube
  size_t centers_outside = 0;  // grid-snapped centers not in it
};

// hypercube whose inside/outside object counts are both a constant fraction
// of n; requires n >= 2
SeparatorResult separator(const ObjectSet& s);

// independent set with additive error; base case solved exactly at size
// 1/eps^2, so eps >= 1/8 is required
ISolution mis_fat_additive(const ObjectSet& s, double eps);

// complement of mis_fat_additive
VCSolution vc_fat_promise(const ObjectSet& s, double eps);

// ---------------------------------------------------------------------------
// rectangle promise solver
// ---------------------------------------------------------------------------

// split into two parts, each free of four-crossing taller/shorter pairs;
// requires maximum depth <= 2
std::pair<ObjectSet, ObjectSet> dominance_decompose(const ObjectSet& s);

struct TriangleRemoval {
  ObjectSet remaining;  // maximum depth <= 2
  std::vector<std::array<int64_t, 3>> triangles;
};

// left-to-right sweep removing the three rectangles responsible for each
// depth-3 point; removed triples are vertex-disjoint triangles
TriangleRemoval triangle_removal_sweep(const ObjectSet& s);

// exact branch-and-bound independent set with a node cap; on cap overflow
// falls back to greedy and clears *exact
ISolution planar_mis_inner(const ObjectSet& s, double eps, bool* exact = nullptr);

VCSolution vc_rects_trifree_promise(const ObjectSet& s, double eps);
VCSolution vc_rects_promise(const ObjectSet& s, double eps);

// smaller of the two sides (ties: first side); valid when every edge is
// bichromatic
VCSolution vc_bipartite_promise(const ObjectSet& a, const ObjectSet& b);

// promise solvers packaged for the dynamic wrapper
PromiseSolver fat_promise_solver(double eps);
PromiseSolver rect_promise_solver(double eps);
PromiseSolver bipartite_promise_solver();  // splits by object color

// ---------------------------------------------------------------------------
// dynamic cover
// ---------------------------------------------------------------------------

class DynVC {
 public:
  // inner_ratio is the declared ratio of the promise solver, used only to
  // estimate the optimum when choosing which guessed instance to serve
  DynVC(double eps, double gamma, double delta, PromiseSolver inner, double inner_ratio);
  ~DynVC();
  DynVC(DynVC&&) noexcept;
  DynVC& operator=(DynVC&&) noexcept;

  void insert(const GeomObject& o);
  void erase(int64_t id);
  VCSolution current() const;
  // served cover size divided by the inner solver's ratio
  double optimum_estimate() const;
  size_t size() const;
  size_t phase_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace geo
