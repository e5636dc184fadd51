#include "geoapprox/matching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_set>

#include "geoapprox/oracle.hpp"
#include "geoapprox/rng.hpp"

namespace geo {

namespace {

bool opposite_colors(const GeomObject& a, const GeomObject& b) {
  return a.color != Color::none && b.color != Color::none && a.color != b.color;
}

bool edge_between(const GeomObject& a, const GeomObject& b, bool bipartite) {
  if (a.id == b.id) return false;
  if (bipartite && !opposite_colors(a, b)) return false;
  return intersects(a, b);
}

std::vector<int64_t> sorted_matched_ids(const MatchState& m) {
  std::vector<int64_t> ids;
  ids.reserve(m.partner.size());
  for (const auto& kv : m.partner) ids.push_back(kv.first);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

// ---------------------------------------------------------------------------
// MatchState
// ---------------------------------------------------------------------------

void MatchState::match(int64_t a, int64_t b) {
  require(a != b, "cannot match an object with itself");
  require(!matched(a) && !matched(b), "match endpoint already matched");
  partner[a] = b;
  partner[b] = a;
}

void MatchState::unmatch(int64_t id) {
  auto it = partner.find(id);
  require(it != partner.end(), "unmatch of an unmatched id");
  partner.erase(it->second);
  partner.erase(id);
}

Matching MatchState::to_pairs() const {
  Matching m;
  for (const auto& kv : partner)
    if (kv.first < kv.second) m.pairs.emplace_back(kv.first, kv.second);
  std::sort(m.pairs.begin(), m.pairs.end());
  return m;
}

MatchState match_state_from_pairs(const Matching& m) {
  MatchState st;
  for (const auto& [a, b] : m.pairs) st.match(a, b);
  return st;
}

void check_match_state(const ObjectSet& s, const MatchState& m, bool bipartite) {
  IdIndex idx(s);
  for (const auto& kv : m.partner) {
    const int64_t a = kv.first, b = kv.second;
    require(m.partner_of(b) == a, "partner map not symmetric");
    if (a > b) continue;
    auto ka = idx.find(a), kb = idx.find(b);
    require(ka && kb, "matched id not in the object set");
    require(intersects(s[*ka], s[*kb]), "matched pair does not intersect");
    if (bipartite) require(opposite_colors(s[*ka], s[*kb]), "matched pair not bichromatic");
  }
}

MatchState greedy_maximal_matching(const ObjectSet& s, bool bipartite) {
  std::vector<size_t> order(s.size());
  for (size_t i = 0; i < s.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t x, size_t y) { return s[x].id < s[y].id; });
  MatchState m;
  for (size_t oi = 0; oi < order.size(); ++oi) {
    const GeomObject& a = s[order[oi]];
    if (m.matched(a.id)) continue;
    for (size_t oj = oi + 1; oj < order.size(); ++oj) {
      const GeomObject& b = s[order[oj]];
      if (m.matched(b.id)) continue;
      if (edge_between(a, b, bipartite)) {
        m.match(a.id, b.id);
        break;
      }
    }
  }
  return m;
}

bool is_maximal_matching(const ObjectSet& s, const MatchState& m, bool bipartite) {
  for (size_t i = 0; i < s.size(); ++i) {
    if (m.matched(s[i].id)) continue;
    for (size_t j = i + 1; j < s.size(); ++j) {
      if (m.matched(s[j].id)) continue;
      if (edge_between(s[i], s[j], bipartite)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// NeighborOracle
// ---------------------------------------------------------------------------

NeighborOracle::NeighborOracle(const ObjectSet& universe, bool bipartite)
    : objs_(universe), bipartite_(bipartite) {
  std::sort(objs_.begin(), objs_.end(),
            [](const GeomObject& a, const GeomObject& b) { return a.id < b.id; });
  for (size_t i = 0; i < objs_.size(); ++i) {
    require(pos_.emplace(objs_[i].id, i).second, "duplicate object id");
    if (bipartite_) require(objs_[i].color != Color::none, "bipartite oracle needs colored objects");
  }
}

size_t NeighborOracle::make_set(bool full) {
  sets_.emplace_back(objs_.size(), full ? 1 : 0);
  return sets_.size() - 1;
}

size_t NeighborOracle::position_of(int64_t id) const {
  auto it = pos_.find(id);
  require(it != pos_.end(), "unknown object id");
  return it->second;
}

void NeighborOracle::set_insert(size_t handle, int64_t id) {
  require(handle < sets_.size(), "bad set handle");
  sets_[handle][position_of(id)] = 1;
}

void NeighborOracle::set_erase(size_t handle, int64_t id) {
  require(handle < sets_.size(), "bad set handle");
  sets_[handle][position_of(id)] = 0;
}

bool NeighborOracle::set_contains(size_t handle, int64_t id) const {
  require(handle < sets_.size(), "bad set handle");
  return sets_[handle][position_of(id)] != 0;
}

void NeighborOracle::register_z(std::vector<char> in_z) {
  require(in_z.empty() || in_z.size() == objs_.size(), "Z flags must cover the universe");
  z_ = std::move(in_z);
}

bool NeighborOracle::in_registered_z(int64_t id) const {
  require(!z_.empty(), "no Z-set registered");
  return z_[position_of(id)] != 0;
}

std::optional<int64_t> NeighborOracle::query(int64_t u, size_t handle, ZFilter f,
                                             int64_t exclude) const {
  require(handle < sets_.size(), "bad set handle");
  if (f != ZFilter::none) require(!z_.empty(), "Z filter without a registered Z-set");
  ++queries_;
  const GeomObject& ou = objs_[position_of(u)];
  const auto& member = sets_[handle];
  for (size_t i = 0; i < objs_.size(); ++i) {
    if (!member[i]) continue;
    const GeomObject& o = objs_[i];
    if (o.id == u || o.id == exclude) continue;
    if (bipartite_ && !opposite_colors(ou, o)) continue;
    if (f == ZFilter::in_z && !z_[i]) continue;
    if (f == ZFilter::not_in_z && z_[i]) continue;
    if (intersects(ou, o)) return o.id;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// layered augmenting-path search
// ---------------------------------------------------------------------------

namespace {

struct PathSearch {
  NeighborOracle& nf;
  const MatchState& m;
  size_t ell;
  const std::vector<char>* in_z;  // by universe position, may be null
  size_t free_set;                // unmatched vertices
  std::vector<size_t> layer;      // layer[j-1] holds candidates for u_j
  std::vector<std::unordered_set<int64_t>> dropped;  // per layer, failed u_j
  std::vector<int64_t> walk;      // v0,u1,v1,...
  std::vector<AugPath> out;

  bool side(int64_t id) const { return (*in_z)[nf.position_of(id)] != 0; }
  NeighborOracle::ZFilter want_opposite(int64_t id) const {
    if (!in_z) return NeighborOracle::ZFilter::none;
    return side(id) ? NeighborOracle::ZFilter::not_in_z : NeighborOracle::ZFilter::in_z;
  }
  void drop(size_t level, int64_t id) {
    nf.set_erase(layer[level - 1], id);
    dropped[level].insert(id);
  }

  void emit() {
    AugPath p{walk};
    require(p.seq.size() == 2 * ell + 2, "augmenting path has wrong length");
    std::unordered_set<int64_t> seen(p.seq.begin(), p.seq.end());
    require(seen.size() == p.seq.size(), "augmenting path repeats a vertex");
    require(!m.matched(p.seq.front()) && !m.matched(p.seq.back()),
            "augmenting path end is matched");
    for (size_t j = 1; j + 1 < p.seq.size(); j += 2) {
      require(m.partner_of(p.seq[j]) == p.seq[j + 1], "interior pair not matched");
      require(dropped[(j + 1) / 2].count(p.seq[j]) == 0,
              "dropped vertex reappeared in an output path");
    }
    for (size_t j = 0; j + 1 < p.seq.size(); j += 2) {
      const GeomObject& a = nf.universe()[nf.position_of(p.seq[j])];
      const GeomObject& b = nf.universe()[nf.position_of(p.seq[j + 1])];
      require(intersects(a, b), "augmenting path edge does not intersect");
      if (in_z) require(side(a.id) != side(b.id), "augmenting path edge inside one Z side");
    }
    out.push_back(std::move(p));
  }

  // walk ends at u_i; true once a full path was emitted
  bool extend(size_t i) {
    const int64_t ui = walk.back();
    const int64_t vi = m.partner_of(ui);
    require(vi >= 0, "layer vertex is unmatched");
    if (in_z && side(vi) == side(ui)) {
      // the matched edge stays on one side, so no walk through u_i can work
      drop(i, ui);
      return false;
    }
    walk.push_back(vi);
    if (i == ell) {
      auto tail = nf.query(vi, free_set, want_opposite(vi));
      if (!tail) {
        walk.pop_back();
        drop(i, ui);
        return false;
      }
      walk.push_back(*tail);
      emit();
      // Remove every vertex of the accepted path from every membership set.
      // Removing the matched interiors from all layers (not just the u_j
      // that were drawn from them) is what keeps later paths vertex-disjoint
      // from this one: a matched vertex can only re-enter a walk through its
      // own layer slot or through its partner, and the partner is in this
      // path too.
      nf.set_erase(free_set, walk.front());
      nf.set_erase(free_set, *tail);
      for (size_t lvl = 1; lvl <= ell; ++lvl)
        for (size_t j = 1; j + 1 < walk.size(); ++j) nf.set_erase(layer[lvl - 1], walk[j]);
      return true;
    }
    while (auto next = nf.query(vi, layer[i], want_opposite(vi), ui)) {
      walk.push_back(*next);
      if (extend(i + 1)) return true;
      walk.pop_back();  // the failed call removed *next from its layer
    }
    walk.pop_back();
    drop(i, ui);
    return false;
  }

  void run() {
    const auto starts = sorted_matched_ids(m);
    for (int64_t u1 : starts) {
      if (!nf.set_contains(layer[0], u1)) continue;
      walk.clear();
      auto v0 = nf.query(u1, free_set, want_opposite(u1));
      if (!v0) {
        drop(1, u1);
        continue;
      }
      walk.push_back(*v0);
      walk.push_back(u1);
      extend(1);
    }
  }
};

}  // namespace

std::vector<AugPath> maximal_aug_paths(size_t ell, const MatchState& m, NeighborOracle& oracle,
                                       const std::vector<char>* excluded,
                                       const std::vector<char>* in_z) {
  require(ell >= 1, "path length parameter must be at least 1");
  const ObjectSet& u = oracle.universe();
  if (excluded) require(excluded->size() == u.size(), "exclusion flags must cover the universe");
  if (in_z) {
    require(in_z->size() == u.size(), "Z flags must cover the universe");
    oracle.register_z(*in_z);
  }

  PathSearch ps{oracle, m, ell, in_z, 0, {}, {}, {}, {}};
  ps.free_set = oracle.make_set(false);
  for (size_t i = 0; i < u.size(); ++i)
    if (!m.matched(u[i].id) && !(excluded && (*excluded)[i])) oracle.set_insert(ps.free_set, u[i].id);
  for (size_t lvl = 0; lvl < ell; ++lvl) {
    size_t h = oracle.make_set(false);
    for (size_t i = 0; i < u.size(); ++i)
      if (m.matched(u[i].id) && !(excluded && (*excluded)[i])) oracle.set_insert(h, u[i].id);
    ps.layer.push_back(h);
  }
  ps.dropped.resize(ell + 1);
  ps.run();
  if (in_z) oracle.register_z({});
  return std::move(ps.out);
}

void augment(MatchState& m, const std::vector<AugPath>& paths, const ObjectSet& s,
             bool bipartite) {
  std::unordered_set<int64_t> used;
  for (const auto& p : paths) {
    require(p.seq.size() >= 2 && p.seq.size() % 2 == 0, "malformed augmenting path");
    for (int64_t id : p.seq) require(used.insert(id).second, "augmenting paths share a vertex");
    const size_t before = m.size();
    for (size_t j = 1; j + 1 < p.seq.size(); j += 2) {
      require(m.partner_of(p.seq[j]) == p.seq[j + 1], "interior pair not matched");
      m.unmatch(p.seq[j]);
    }
    for (size_t j = 0; j + 1 < p.seq.size(); j += 2) m.match(p.seq[j], p.seq[j + 1]);
    require(m.size() == before + 1, "augmentation must grow the matching by one");
  }
  check_match_state(s, m, bipartite);
}

// ---------------------------------------------------------------------------
// static bipartite approximation
// ---------------------------------------------------------------------------

namespace {

// runs rounds ell = 1..rounds of path search + augmentation; verify_small
// cross-checks the no-short-path invariant with the exhaustive oracle
MatchState bipartite_rounds(const ObjectSet& s, size_t rounds, MatchState m, bool verify_small) {
  NeighborOracle nf(s, true);
  const bool small = verify_small && s.size() <= 40;
  for (size_t ell = 1; ell <= rounds; ++ell) {
    if (small && ell <= 3)
      require(!find_aug_path(s, m.to_pairs(), 2 * ell - 1, true),
              "short augmenting path before round");
    auto paths = maximal_aug_paths(ell, m, nf);
    augment(m, paths, s, true);
    if (small && ell <= 3)
      require(!find_aug_path(s, m.to_pairs(), 2 * ell + 1, true),
              "augmenting path survived its round");
  }
  return m;
}

size_t rounds_for(double eps) {
  require(eps > 0.0 && eps <= 1.0, "eps must be in (0,1]");
  return size_t(std::ceil(1.0 / eps));
}

}  // namespace

Matching approx_bipartite_mcm(const ObjectSet& s, double eps, const MatchState* m0) {
  for (const auto& o : s) require(o.color != Color::none, "bipartite solver needs colored objects");
  MatchState m = m0 ? *m0 : greedy_maximal_matching(s, true);
  if (m0) {
    check_match_state(s, m, true);
    require(is_maximal_matching(s, m, true), "seed matching is not maximal");
  }
  return bipartite_rounds(s, rounds_for(eps), std::move(m), true).to_pairs();
}

Matching approx_bipartite_mcm(const ObjectSet& side_a, const ObjectSet& side_b, double eps,
                              const MatchState* m0) {
  ObjectSet s;
  s.reserve(side_a.size() + side_b.size());
  for (GeomObject o : side_a) {
    require(o.color != Color::B, "side A object colored B");
    o.color = Color::A;
    s.push_back(o);
  }
  for (GeomObject o : side_b) {
    require(o.color != Color::A, "side B object colored A");
    o.color = Color::B;
    s.push_back(o);
  }
  return approx_bipartite_mcm(s, eps, m0);
}

// ---------------------------------------------------------------------------
// label-subset family
// ---------------------------------------------------------------------------

ZFamily build_z_family(size_t n, size_t ell, uint64_t seed) {
  require(n >= 1, "family needs a nonempty label space");
  require(ell >= 1 && ell <= 12, "family parameter out of range");
  const double ln_n = std::log(double(std::max<size_t>(n, 2)));
  const size_t trials =
      std::max<size_t>(1, size_t(std::ceil(std::exp(double(ell)) * double(ell) * ln_n)));
  const size_t subsets = size_t(1) << ell;
  require(trials <= (size_t(5) << 20) / subsets, "family too large for this scale");
  ZFamily fam;
  fam.n = n;
  fam.ell = ell;
  fam.sets.reserve(trials * subsets);
  std::vector<uint8_t> bucket(n);
  for (size_t t = 0; t < trials; ++t) {
    Rng rng = derive_rng(seed, "label-subset-family", t);
    for (size_t i = 0; i < n; ++i) bucket[i] = uint8_t(rng.uniform_index(ell));
    for (size_t mask = 0; mask < subsets; ++mask) {
      std::vector<char> z(n);
      for (size_t i = 0; i < n; ++i) z[i] = char((mask >> bucket[i]) & 1);
      fam.sets.push_back(std::move(z));
    }
  }
  return fam;
}

bool z_family_separates(const ZFamily& fam) {
  require(fam.n <= 16, "exhaustive separation check is exponential in n");
  std::vector<uint64_t> masks;
  masks.reserve(fam.sets.size());
  for (const auto& z : fam.sets) {
    uint64_t m = 0;
    for (size_t i = 0; i < z.size(); ++i)
      if (z[i]) m |= uint64_t(1) << i;
    masks.push_back(m);
  }
  const uint64_t all = (fam.n == 64) ? ~uint64_t(0) : ((uint64_t(1) << fam.n) - 1);
  for (uint64_t support = 0; support <= all; ++support) {
    if (size_t(__builtin_popcountll(support)) > fam.ell) continue;
    // split the support into A (bits of sub) and B (rest of support)
    for (uint64_t sub = support;; sub = (sub - 1) & support) {
      const uint64_t a = sub, b = support ^ sub;
      bool ok = false;
      for (uint64_t zm : masks)
        if ((zm & a) == a && (zm & b) == 0) {
          ok = true;
          break;
        }
      if (!ok) return false;
      if (sub == 0) break;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// general approximation
// ---------------------------------------------------------------------------

namespace {

size_t general_rounds_for(double eps) {
  require(eps > 0.0 && eps <= 1.0, "eps must be in (0,1]");
  const double r = (1.0 / eps - 2.0) / 2.0;
  return r < 1.0 ? 0 : size_t(std::floor(r));
}

// One full pass: rounds ell = 1..rounds; each round sweeps the family,
// restricting edges to straddle the current subset and excluding vertices
// already used by accepted paths, then augments everything found.
// family_for(k) must return subsets over the oracle's universe positions.
MatchState general_rounds(const ObjectSet& s, size_t rounds, MatchState m,
                          const std::function<std::vector<std::vector<char>>(size_t)>& family_for) {
  if (s.size() < 2) return m;
  NeighborOracle nf(s, false);
  const size_t n = s.size();
  for (size_t ell = 1; ell <= rounds; ++ell) {
    const auto sets = family_for(2 * ell + 2);
    std::vector<char> used(n, 0);
    std::vector<AugPath> collected;
    std::unordered_set<std::string> seen;
    for (const auto& z : sets) {
      require(z.size() == n, "family subset does not cover the universe");
      const size_t ones = size_t(std::count(z.begin(), z.end(), char(1)));
      if (ones == 0 || ones == n) continue;  // no straddling edge possible
      if (!seen.insert(std::string(z.begin(), z.end())).second) continue;
      auto paths = maximal_aug_paths(ell, m, nf, &used, &z);
      for (auto& p : paths) {
        for (int64_t id : p.seq) used[nf.position_of(id)] = 1;
        collected.push_back(std::move(p));
      }
    }
    augment(m, collected, s, false);
  }
  return m;
}

}  // namespace

Matching approx_general_mcm(const ObjectSet& s, double eps, uint64_t seed,
                            const MatchState* m0) {
  for (const auto& o : s) require(o.color == Color::none, "general solver expects uncolored objects");
  MatchState m = m0 ? *m0 : greedy_maximal_matching(s, false);
  if (m0) {
    check_match_state(s, m, false);
    require(is_maximal_matching(s, m, false), "seed matching is not maximal");
  }
  const size_t rounds = general_rounds_for(eps);
  if (rounds == 0 || s.size() < 2) return m.to_pairs();
  ObjectSet sorted = s;
  std::sort(sorted.begin(), sorted.end(),
            [](const GeomObject& a, const GeomObject& b) { return a.id < b.id; });
  auto family_for = [&](size_t k) {
    return build_z_family(sorted.size(), k, seed ^ (uint64_t(k) << 40)).sets;
  };
  return general_rounds(sorted, rounds, std::move(m), family_for).to_pairs();
}

// ---------------------------------------------------------------------------
// dynamic maximal matching
// ---------------------------------------------------------------------------

MaximalMatcher::MaximalMatcher(bool bipartite) : bipartite_(bipartite) {}

void MaximalMatcher::insert(const GeomObject& o) {
  require(pos_.emplace(o.id, live_.size()).second, "duplicate object id");
  if (bipartite_) require(o.color != Color::none, "bipartite matcher needs colored objects");
  live_.push_back(o);
  rematch(o.id);
}

void MaximalMatcher::erase(int64_t id) {
  auto it = pos_.find(id);
  require(it != pos_.end(), "unknown object id");
  const int64_t mate = m_.partner_of(id);
  if (mate >= 0) m_.unmatch(id);
  const size_t p = it->second;
  pos_.erase(it);
  if (p + 1 != live_.size()) {
    live_[p] = live_.back();
    pos_[live_[p].id] = p;
  }
  live_.pop_back();
  if (mate >= 0) rematch(mate);
}

void MaximalMatcher::rematch(int64_t id) {
  if (m_.matched(id)) return;
  const GeomObject& o = live_[pos_.at(id)];
  int64_t best = -1;
  for (const auto& c : live_) {
    if (c.id == id || m_.matched(c.id)) continue;
    if (!edge_between(o, c, bipartite_)) continue;
    if (best < 0 || c.id < best) best = c.id;
  }
  if (best >= 0) m_.match(id, best);
}

// ---------------------------------------------------------------------------
// dynamic bipartite
// ---------------------------------------------------------------------------

struct DynBipartiteMcm::Impl {
  double eps;
  MaximalMatcher mm{true};
  MatchState served;
  size_t updates_left = 0;
  size_t phases = 0;

  explicit Impl(double e) : eps(e) { require(e > 0.0 && e <= 1.0, "eps must be in (0,1]"); }

  void recompute() {
    ++phases;
    const size_t b = std::max<size_t>(1, mm.current().size());
    updates_left = std::max<size_t>(1, size_t(std::ceil(eps * double(b))));
    served = bipartite_rounds(mm.live(), rounds_for(eps), mm.current(), mm.size() <= 40);
  }
  void tick() {
    if (updates_left <= 1)
      recompute();
    else
      --updates_left;
  }
};

DynBipartiteMcm::DynBipartiteMcm(double eps) : impl_(std::make_unique<Impl>(eps)) {}
DynBipartiteMcm::~DynBipartiteMcm() = default;
DynBipartiteMcm::DynBipartiteMcm(DynBipartiteMcm&&) noexcept = default;
DynBipartiteMcm& DynBipartiteMcm::operator=(DynBipartiteMcm&&) noexcept = default;

void DynBipartiteMcm::insert(const GeomObject& o) {
  impl_->mm.insert(o);
  impl_->tick();  // the served matching is untouched by insertions
}

void DynBipartiteMcm::erase(int64_t id) {
  impl_->mm.erase(id);
  if (impl_->served.matched(id)) impl_->served.unmatch(id);
  impl_->tick();
}

Matching DynBipartiteMcm::current() const { return impl_->served.to_pairs(); }
size_t DynBipartiteMcm::size() const { return impl_->mm.size(); }
size_t DynBipartiteMcm::maximal_size() const { return impl_->mm.current().size(); }
size_t DynBipartiteMcm::phase_count() const { return impl_->phases; }

// ---------------------------------------------------------------------------
// dynamic general
// ---------------------------------------------------------------------------

struct DynGeneralMcm::Impl {
  double eps;
  uint64_t seed;
  MaximalMatcher mm{false};
  MatchState served;
  size_t updates_left = 0;
  size_t phases = 0;

  // stable labels in [cap); the family is built over labels once per
  // capacity and reused until a rebuild changes the label space
  size_t cap = 4;
  std::unordered_map<int64_t, size_t> label_of;
  std::vector<size_t> free_labels;
  std::unordered_map<size_t, std::vector<std::vector<char>>> family_cache;

  Impl(double e, uint64_t sd) : eps(e), seed(sd) {
    require(e > 0.0 && e <= 1.0, "eps must be in (0,1]");
    reset_labels(cap);
  }

  void reset_labels(size_t new_cap) {
    cap = new_cap;
    free_labels.clear();
    family_cache.clear();
    // keep existing assignments, compacted below the new capacity
    size_t next = 0;
    for (const auto& o : mm.live()) label_of[o.id] = next++;
    require(next <= cap, "label capacity below live size");
    for (size_t v = cap; v-- > next;) free_labels.push_back(v);
  }

  void assign_label(int64_t id) {
    if (free_labels.empty()) reset_labels(cap * 2);
    if (label_of.count(id)) return;  // relabel already covered it
    label_of[id] = free_labels.back();
    free_labels.pop_back();
  }

  void release_label(int64_t id) {
    auto it = label_of.find(id);
    require(it != label_of.end(), "unknown label");
    free_labels.push_back(it->second);
    label_of.erase(it);
    if (cap > 4 && label_of.size() < cap / 4) reset_labels(cap / 2);
  }

  const std::vector<std::vector<char>>& family(size_t k) {
    auto it = family_cache.find(k);
    if (it == family_cache.end()) {
      auto fam = build_z_family(cap, k, seed ^ (uint64_t(cap) << 20) ^ (uint64_t(k) << 40));
      it = family_cache.emplace(k, std::move(fam.sets)).first;
    }
    return it->second;
  }

  void recompute() {
    ++phases;
    const size_t b = std::max<size_t>(1, mm.current().size());
    updates_left = std::max<size_t>(1, size_t(std::ceil(eps * double(b))));
    const size_t rounds = general_rounds_for(eps);
    if (rounds == 0 || mm.size() < 2) {
      served = mm.current();
      return;
    }
    ObjectSet sorted = mm.live();
    std::sort(sorted.begin(), sorted.end(),
              [](const GeomObject& a, const GeomObject& b) { return a.id < b.id; });
    // translate label-indexed family subsets to universe positions
    auto family_for = [&](size_t k) {
      const auto& label_sets = family(k);
      std::vector<std::vector<char>> by_pos(label_sets.size());
      for (size_t si = 0; si < label_sets.size(); ++si) {
        by_pos[si].resize(sorted.size());
        for (size_t i = 0; i < sorted.size(); ++i)
          by_pos[si][i] = label_sets[si][label_of.at(sorted[i].id)];
      }
      return by_pos;
    };
    served = general_rounds(sorted, rounds, mm.current(), family_for);
  }
  void tick() {
    if (updates_left <= 1)
      recompute();
    else
      --updates_left;
  }
};

DynGeneralMcm::DynGeneralMcm(double eps, uint64_t seed)
    : impl_(std::make_unique<Impl>(eps, seed)) {}
DynGeneralMcm::~DynGeneralMcm() = default;
DynGeneralMcm::DynGeneralMcm(DynGeneralMcm&&) noexcept = default;
DynGeneralMcm& DynGeneralMcm::operator=(DynGeneralMcm&&) noexcept = default;

void DynGeneralMcm::insert(const GeomObject& o) {
  require(o.color == Color::none, "general solver expects uncolored objects");
  impl_->mm.insert(o);
  impl_->assign_label(o.id);
  impl_->tick();
}

void DynGeneralMcm::erase(int64_t id) {
  impl_->mm.erase(id);
  impl_->release_label(id);
  if (impl_->served.matched(id)) impl_->served.unmatch(id);
  impl_->tick();
}

Matching DynGeneralMcm::current() const { return impl_->served.to_pairs(); }
size_t DynGeneralMcm::size() const { return impl_->mm.size(); }
size_t DynGeneralMcm::maximal_size() const { return impl_->mm.current().size(); }
size_t DynGeneralMcm::phase_count() const { return impl_->phases; }
size_t DynGeneralMcm::label_capacity() const { return impl_->cap; }

}  // namespace geo
