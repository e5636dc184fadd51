#pragma once
// Maximum-cardinality matching over geometric intersection graphs: maximal
// matching maintenance, layered DFS augmentation that finds a maximal
// vertex-disjoint collection of length-(2l+1) augmenting paths, static and
// dynamic bipartite approximation, and the label-subset family that reduces
// the general (non-bipartite) case to bipartite-style passes.

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "geoapprox/geom.hpp"
#include "geoapprox/solution.hpp"

namespace geo {

// ---------------------------------------------------------------------------
// matching state: symmetric partner map
// ---------------------------------------------------------------------------

struct MatchState {
  std::unordered_map<int64_t, int64_t> partner;

  size_t size() const { return partner.size() / 2; }
  bool matched(int64_t id) const { return partner.count(id) != 0; }
  // -1 when unmatched
  int64_t partner_of(int64_t id) const {
    auto it = partner.find(id);
    return it == partner.end() ? -1 : it->second;
  }
  void match(int64_t a, int64_t b);
  void unmatch(int64_t id);
  // pairs (min,max) sorted by first element
  Matching to_pairs() const;
};

MatchState match_state_from_pairs(const Matching& m);

// every matched pair must intersect; opposite colors when bipartite
void check_match_state(const ObjectSet& s, const MatchState& m, bool bipartite);

// lowest-id-first greedy scan; bipartite restricts edges to opposite colors
MatchState greedy_maximal_matching(const ObjectSet& s, bool bipartite);

// true when no unmatched intersecting pair remains
bool is_maximal_matching(const ObjectSet& s, const MatchState& m, bool bipartite);

// ---------------------------------------------------------------------------
// neighbor oracle: membership sets over a fixed universe with intersection
// queries. Reference implementation is a linear scan in ascending id order,
// so ties resolve to the lowest id.
// ---------------------------------------------------------------------------

class NeighborOracle {
 public:
  enum class ZFilter { none, in_z, not_in_z };

  // bipartite restricts query answers to objects colored oppositely to the
  // query object
  explicit NeighborOracle(const ObjectSet& universe, bool bipartite);

  size_t make_set(bool full);
  void set_insert(size_t handle, int64_t id);
  void set_erase(size_t handle, int64_t id);  // no-op when absent
  bool set_contains(size_t handle, int64_t id) const;

  // member flags by universe position (ascending id); empty clears
  void register_z(std::vector<char> in_z);
  bool in_registered_z(int64_t id) const;

  // lowest-id object in the set that intersects u, is not u or exclude, has
  // the opposite color in bipartite mode, and passes the Z filter
  std::optional<int64_t> query(int64_t u, size_t handle, ZFilter f = ZFilter::none,
                               int64_t exclude = -1) const;

  const ObjectSet& universe() const { return objs_; }
  size_t position_of(int64_t id) const;
  size_t query_count() const { return queries_; }

 private:
  ObjectSet objs_;  // sorted by id
  std::unordered_map<int64_t, size_t> pos_;
  std::vector<std::vector<char>> sets_;
  std::vector<char> z_;
  bool bipartite_ = false;
  mutable size_t queries_ = 0;
};

// ---------------------------------------------------------------------------
// layered augmenting-path search
// ---------------------------------------------------------------------------

// vertex ids w0,u1,v1,...,ul,vl,u(l+1): ends unmatched, (u_j,v_j) matched,
// 2l+1 edges in total
struct AugPath {
  std::vector<int64_t> seq;
};

// Finds a maximal collection of vertex-disjoint length-(2l+1) augmenting
// paths, assuming none of length <= 2l-1 exists. One membership set holds the
// unmatched vertices; l more hold candidate matched vertices per layer. A
// vertex leaves its layer permanently once a search through it fails (which
// is what makes the scan near-linear in queries), and every vertex of an
// accepted path leaves all sets (which keeps the collection vertex-
// disjoint). excluded (by universe
// position) drops vertices from every set up front; in_z (by universe
// position) restricts edges to pairs straddling the flag, used by the general
// non-bipartite reduction.
std::vector<AugPath> maximal_aug_paths(size_t ell, const MatchState& m, NeighborOracle& oracle,
                                       const std::vector<char>* excluded = nullptr,
                                       const std::vector<char>* in_z = nullptr);

// flips every path; each one grows the matching by exactly one edge
void augment(MatchState& m, const std::vector<AugPath>& paths, const ObjectSet& s,
             bool bipartite);

// ---------------------------------------------------------------------------
// static bipartite approximation
// ---------------------------------------------------------------------------

// rounds ell = 1..ceil(1/eps) of maximal_aug_paths + augmentation on a
// colored set; result size >= OPT/(1 + 1/(ceil(1/eps)+1)). m0 (maximal) seeds
// the run; when null a greedy maximal matching is used.
Matching approx_bipartite_mcm(const ObjectSet& s, double eps, const MatchState* m0 = nullptr);
// convenience: colors sides A and B, then merges
Matching approx_bipartite_mcm(const ObjectSet& side_a, const ObjectSet& side_b, double eps,
                              const MatchState* m0 = nullptr);

// ---------------------------------------------------------------------------
// label-subset family for the general case
// ---------------------------------------------------------------------------

// Subsets of [n] such that for any disjoint A,B with |A|+|B| <= ell some
// subset contains A and misses B. Randomized: t = ceil(e^ell * ell * ln n)
// random maps [n] -> [ell], each expanded over all 2^ell bucket subsets;
// per-pair failure probability <= n^-ell.
struct ZFamily {
  size_t n = 0;
  size_t ell = 0;
  std::vector<std::vector<char>> sets;  // each of length n
};

ZFamily build_z_family(size_t n, size_t ell, uint64_t seed);

// exhaustive separation check over all disjoint (A,B), |A|+|B| <= ell;
// intended for n <= 8, ell <= 2
bool z_family_separates(const ZFamily& fam);

// ---------------------------------------------------------------------------
// general (non-bipartite) approximation
// ---------------------------------------------------------------------------

// Rounds ell = 1..floor((1/eps - 2)/2). Each round sweeps the label-subset
// family built for set size 2*ell+2; within one subset Z the graph is
// restricted to edges straddling Z, which is bipartite-like, and vertices
// already used by accepted paths are excluded. Paths collected across the
// sweep are vertex-disjoint and augmented together. Result is >= (1-2eps)*OPT
// with high probability; with eps >= 1/3 no rounds run and the result is the
// maximal matching (always >= OPT/2).
Matching approx_general_mcm(const ObjectSet& s, double eps, uint64_t seed,
                            const MatchState* m0 = nullptr);

// ---------------------------------------------------------------------------
// dynamic variants
// ---------------------------------------------------------------------------

// maximal matching under insert/erase: insert matches the new object with an
// unmatched intersecting one when possible; erase frees the partner and
// re-inserts it
class MaximalMatcher {
 public:
  explicit MaximalMatcher(bool bipartite = false);
  void insert(const GeomObject& o);
  void erase(int64_t id);
  const MatchState& current() const { return m_; }
  const ObjectSet& live() const { return live_; }
  size_t size() const { return live_.size(); }

 private:
  void rematch(int64_t id);
  ObjectSet live_;
  std::unordered_map<int64_t, size_t> pos_;
  MatchState m_;
  bool bipartite_ = false;
};

// Phase framework shared by both dynamic solvers: a maximal matching tracks
// the optimum within a factor 2; each phase lasts max(1, ceil(eps*b)) updates
// with b the maximal size at recompute time; the served matching is repaired
// only on deletions inside a phase, so each update moves its size by at most
// one while the optimum also moves by at most one.
class DynBipartiteMcm {
 public:
  explicit DynBipartiteMcm(double eps);
  ~DynBipartiteMcm();
  DynBipartiteMcm(DynBipartiteMcm&&) noexcept;
  DynBipartiteMcm& operator=(DynBipartiteMcm&&) noexcept;

  void insert(const GeomObject& o);
  void erase(int64_t id);
  Matching current() const;
  size_t size() const;
  size_t maximal_size() const;  // current lower bound on OPT
  size_t phase_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class DynGeneralMcm {
 public:
  DynGeneralMcm(double eps, uint64_t seed);
  ~DynGeneralMcm();
  DynGeneralMcm(DynGeneralMcm&&) noexcept;
  DynGeneralMcm& operator=(DynGeneralMcm&&) noexcept;

  void insert(const GeomObject& o);
  void erase(int64_t id);
  Matching current() const;
  size_t size() const;
  size_t maximal_size() const;
  size_t phase_count() const;
  size_t label_capacity() const;  // doubles at full, halves at quarter load

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace geo
