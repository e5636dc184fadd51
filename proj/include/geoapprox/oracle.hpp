#pragma once
// Exact brute-force reference solvers. Everything here is deterministic and
// size-capped; caps exist to keep worst cases bounded, and callers that know
// their instances are benign may raise them explicitly.

#include <cstdint>
#include <optional>
#include <vector>

#include "geoapprox/geom.hpp"
#include "geoapprox/solution.hpp"

namespace geo {

// intersection-graph adjacency in input order; bichromatic restricts edges
// to differently colored endpoints
std::vector<std::vector<size_t>> intersection_adjacency(const ObjectSet& s, bool bichromatic = false);
std::vector<std::pair<size_t, size_t>> intersection_edges(const ObjectSet& s, bool bichromatic = false);

// minimum piercing via candidate points + set-cover branch and bound.
// Boxes: candidates are per-axis upper-coordinate combinations (provably
// sufficient, so the result is exactly optimal). Disks: candidates are
// centers, circle-circle crossings, and lens midpoints; optimal over that
// candidate set, reported as an upper bound on true OPT.
PiercingSolution exact_mps(const ObjectSet& s, size_t cap_boxes = 20, size_t cap_disks = 16);

// maximum(-weight) independent set, branch and bound with component
// splitting and weight-sum pruning; hard engine limit 64 objects
ISolution exact_mis(const ObjectSet& s, bool weighted = false, size_t cap = 40);

// complement of the unweighted exact_mis
VCSolution exact_vc(const ObjectSet& s, size_t cap = 40);

// LP vertex cover optimum (half-integral). Pruned {0,1/2,1} enumeration,
// cross-checked internally against half the bipartite-double-cover maximum
// matching; the two must agree.
double exact_fractional_vc(const ObjectSet& s, size_t cap = 12);

// maximum-cardinality matching. Bipartite (bichromatic colors) runs
// augmenting-path saturation. General runs match-or-skip bitmask DP up to
// cap, and exhaustive-augmentation saturation (exact by the no-augmenting-
// path optimality criterion) for larger sizes up to 64.
Matching exact_mcm(const ObjectSet& s, bool bipartite, size_t cap = 0 /* 0 = default */);

// exhaustive search for an augmenting path of at most max_edges edges;
// returns the vertex-id path (even ids unmatched-edge endpoints first).
// bichromatic restricts the graph to differently colored pairs
std::optional<std::vector<int64_t>> find_aug_path(const ObjectSet& s, const Matching& m,
                                                  size_t max_edges, bool bichromatic = false);

}  // namespace geo
