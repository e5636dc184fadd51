#include "geoapprox/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <utility>

#include <nlohmann/json.hpp>

#include "geoapprox/matching.hpp"
#include "geoapprox/mis.hpp"
#include "geoapprox/oracle.hpp"
#include "geoapprox/rng.hpp"
#include "geoapprox/sampling.hpp"
#include "geoapprox/validate.hpp"
#include "geoapprox/vc.hpp"

namespace geo {

using json = nlohmann::json;

namespace {

void check_spec(const GeneratorSpec& g) {
  require(g.family == "uniform-boxes" || g.family == "stabbed-boxes" || g.family == "disks" ||
              g.family == "bichromatic-strips",
          "unknown instance family \"" + g.family + "\"");
  require(g.dimension >= 1 && g.dimension <= kMaxDim, "dimension out of range");
  require(g.family != "disks" || g.dimension == 2, "disks are planar");
  require(g.family != "bichromatic-strips" || g.dimension == 2, "strips are planar");
  require(g.family != "bichromatic-strips" || g.n >= 1, "strip family needs n >= 1 for slots");
  require(g.s_min > 0.0 && g.s_min <= g.s_max, "size bounds need 0 < s_min <= s_max");
  require(g.aspect_max >= 1.0, "aspect bound must be at least 1");
  require(g.extent > 0.0, "extent must be positive");
  require(g.color_mix >= 0.0 && g.color_mix <= 1.0, "color mix must lie in [0,1]");
  require(g.w_min > 0.0 && g.w_min <= g.w_max, "weight bounds need 0 < w_min <= w_max");
  require(g.family != "stabbed-boxes" || g.grid_lines >= 1, "stabbed family needs grid lines");
}

Color draw_color(const GeneratorSpec& g, Rng& rng) {
  if (g.color_mix <= 0.0) return Color::none;
  return rng.uniform() < g.color_mix ? Color::A : Color::B;
}

// Draws instance objects one at a time.  Most families are stateless, but
// "bichromatic-strips" hands out per-color slot indices from a pool so that
// same-color objects occupy disjoint slots (and therefore never intersect)
// across every prefix of a stream; release() returns a deleted object's slot.
class ObjectSource {
 public:
  explicit ObjectSource(const GeneratorSpec& g) : g_(g) {
    if (g_.family == "stabbed-boxes") grid_ = stabbing_grid_for(g_);
    if (g_.family == "bichromatic-strips") {
      slots_ = std::max<size_t>(g_.n, 2);
      for (size_t i = slots_; i-- > 0;) {
        free_a_.push_back(i);
        free_b_.push_back(i);
      }
    }
  }

  GeomObject next(Rng& rng, int64_t id) {
    const double weight = rng.uniform(g_.w_min, g_.w_max);
    GeomObject o;
    if (g_.family == "disks") {
      const double cx = rng.uniform(0.0, g_.extent);
      const double cy = rng.uniform(0.0, g_.extent);
      o = make_obj(id, make_disk(cx, cy, rng.uniform(g_.s_min, g_.s_max) / 2.0), weight);
      o.color = draw_color(g_, rng);
    } else if (g_.family == "stabbed-boxes") {
      AxisBox b;
      b.lo.dim = b.hi.dim = g_.dimension;
      for (int a = 0; a < g_.dimension; ++a) {
        const auto& lines = grid_.lines[static_cast<size_t>(a)];
        const double line = lines[rng.uniform_index(lines.size())];
        b.lo[a] = line - rng.uniform(g_.s_min / 2.0, g_.s_max / 2.0);
        b.hi[a] = line + rng.uniform(g_.s_min / 2.0, g_.s_max / 2.0);
      }
      o = make_obj(id, b, weight);
      o.color = draw_color(g_, rng);
    } else if (g_.family == "bichromatic-strips") {
      o = next_strip(rng, id, weight);
    } else {  // uniform-boxes
      AxisBox b;
      b.lo.dim = b.hi.dim = g_.dimension;
      const double side0 = rng.uniform(g_.s_min, g_.s_max);
      for (int a = 0; a < g_.dimension; ++a) {
        const double lo = std::max(g_.s_min, side0 / g_.aspect_max);
        const double hi = std::min(g_.s_max, side0 * g_.aspect_max);
        const double side = (a == 0) ? side0 : rng.uniform(lo, hi);
        const double center = rng.uniform(0.0, g_.extent);
        b.lo[a] = center - side / 2.0;
        b.hi[a] = center + side / 2.0;
      }
      o = make_obj(id, b, weight);
      o.color = draw_color(g_, rng);
    }
    return o;
  }

  void release(int64_t id) {
    auto it = slot_of_.find(id);
    if (it == slot_of_.end()) return;
    (it->second.first ? free_a_ : free_b_).push_back(it->second.second);
    slot_of_.erase(it);
  }

 private:
  GeomObject next_strip(Rng& rng, int64_t id, double weight) {
    const double mix = g_.color_mix > 0.0 ? g_.color_mix : 0.5;
    bool vertical = rng.uniform() < mix;
    if (vertical && free_a_.empty()) vertical = false;
    if (!vertical && free_b_.empty()) {
      require(!free_a_.empty(), "strip slots exhausted; raise the family's n");
      vertical = true;
    }
    auto& pool = vertical ? free_a_ : free_b_;
    const size_t slot = pool.back();
    pool.pop_back();
    slot_of_.emplace(id, std::make_pair(vertical, slot));

    // The strip's thin axis stays strictly inside its slot, so same-color
    // strips are pairwise disjoint even as closed sets.
    const double sw = g_.extent / static_cast<double>(slots_);
    const double w_frac = rng.uniform(0.30, 0.80);
    const double off_frac = rng.uniform(0.04, 0.96 - w_frac);
    const double thin_lo = (static_cast<double>(slot) + off_frac) * sw;
    const double thin_hi = thin_lo + w_frac * sw;
    const double len = rng.uniform(0.35, 0.90) * g_.extent;
    const double long_lo = rng.uniform(0.0, g_.extent - len);
    const double long_hi = long_lo + len;

    GeomObject o;
    if (vertical) {
      o = make_obj(id, make_box(thin_lo, long_lo, thin_hi, long_hi), weight);
      o.color = Color::A;
    } else {
      o = make_obj(id, make_box(long_lo, thin_lo, long_hi, thin_hi), weight);
      o.color = Color::B;
    }
    return o;
  }

  GeneratorSpec g_;
  StabbingGrid grid_;
  size_t slots_ = 0;
  std::vector<size_t> free_a_, free_b_;
  std::unordered_map<int64_t, std::pair<bool, size_t>> slot_of_;
};

// ---------------------------------------------------------------------------
// report serialization
// ---------------------------------------------------------------------------

json row_json(const ReportRow& r) {
  json j;
  j["name"] = r.name;
  j["problem"] = r.problem;
  j["algorithm"] = r.algorithm;
  j["instance"] = r.instance;
  j["params"] = r.params;
  if (r.value) j["value"] = *r.value;
  if (r.oracle_value) j["oracle_value"] = *r.oracle_value;
  if (r.ratio) {
    j["ratio"] = *r.ratio;
    j["ratio_kind"] = r.ratio_kind;
  }
  j["valid"] = r.valid;
  if (!r.error.empty()) j["error"] = r.error;
  j["wall_ms"] = r.wall_ms;
  if (!r.counters.empty()) j["counters"] = r.counters;
  return j;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string num_str(double v) { return json(v).dump(); }

// ---------------------------------------------------------------------------
// suite config parsing
// ---------------------------------------------------------------------------

[[noreturn]] void bad(size_t line, const std::string& msg) { throw IoError(line, msg); }

double get_num(const json& v, size_t line, const std::string& key) {
  if (!v.is_number()) bad(line, "\"" + key + "\" must be a number");
  return v.get<double>();
}

size_t get_count(const json& v, size_t line, const std::string& key) {
  if (!v.is_number_integer() || v.get<int64_t>() < 0)
    bad(line, "\"" + key + "\" must be a nonnegative integer");
  return static_cast<size_t>(v.get<int64_t>());
}

std::string get_str(const json& v, size_t line, const std::string& key) {
  if (!v.is_string()) bad(line, "\"" + key + "\" must be a string");
  return v.get<std::string>();
}

bool get_bool(const json& v, size_t line, const std::string& key) {
  if (!v.is_boolean()) bad(line, "\"" + key + "\" must be a boolean");
  return v.get<bool>();
}

GeneratorSpec parse_generator(const json& j, size_t line) {
  if (!j.is_object()) bad(line, "\"instance\" must be an object");
  GeneratorSpec g;
  for (const auto& [k, v] : j.items()) {
    if (k == "family") g.family = get_str(v, line, k);
    else if (k == "n") g.n = get_count(v, line, k);
    else if (k == "dimension") g.dimension = static_cast<int>(get_count(v, line, k));
    else if (k == "s_min") g.s_min = get_num(v, line, k);
    else if (k == "s_max") g.s_max = get_num(v, line, k);
    else if (k == "aspect_max") g.aspect_max = get_num(v, line, k);
    else if (k == "extent") g.extent = get_num(v, line, k);
    else if (k == "color_mix") g.color_mix = get_num(v, line, k);
    else if (k == "w_min") g.w_min = get_num(v, line, k);
    else if (k == "w_max") g.w_max = get_num(v, line, k);
    else if (k == "grid_lines") g.grid_lines = get_count(v, line, k);
    else if (k == "seed") g.seed = static_cast<uint64_t>(get_count(v, line, k));
    else bad(line, "unknown instance key \"" + k + "\"");
  }
  return g;
}

SuiteJob parse_job(const json& j, size_t line, size_t index) {
  SuiteJob job;
  job.name = "job-" + std::to_string(index);
  bool have_problem = false, have_algorithm = false;
  for (const auto& [k, v] : j.items()) {
    if (k == "kind") continue;
    else if (k == "name") job.name = get_str(v, line, k);
    else if (k == "problem") { job.problem = get_str(v, line, k); have_problem = true; }
    else if (k == "algorithm") { job.algorithm = get_str(v, line, k); have_algorithm = true; }
    else if (k == "instance") job.instance = parse_generator(v, line);
    else if (k == "stream") {
      if (!v.is_object()) bad(line, "\"stream\" must be an object");
      for (const auto& [sk, sv] : v.items()) {
        if (sk == "ops") job.stream_ops = get_count(sv, line, sk);
        else if (sk == "churn") job.churn = get_num(sv, line, sk);
        else if (sk == "window") job.window = get_count(sv, line, sk);
        else if (sk == "checkpoint_every") job.checkpoint_every = get_count(sv, line, sk);
        else bad(line, "unknown stream key \"" + sk + "\"");
      }
    } else if (k == "b") job.b = static_cast<int64_t>(get_count(v, line, k));
    else if (k == "eps") job.eps = get_num(v, line, k);
    else if (k == "delta") job.delta = get_num(v, line, k);
    else if (k == "kernel_delta") job.kernel_delta = get_num(v, line, k);
    else if (k == "gamma") job.gamma = get_num(v, line, k);
    else if (k == "trials") job.trials = get_count(v, line, k);
    else if (k == "weighted") job.weighted = get_bool(v, line, k);
    else if (k == "oracle_cap") job.oracle_cap = get_count(v, line, k);
    else if (k == "seed") job.seed = static_cast<uint64_t>(get_count(v, line, k));
    else bad(line, "unknown job key \"" + k + "\"");
  }
  if (!have_problem) bad(line, "job is missing \"problem\"");
  if (!have_algorithm) bad(line, "job is missing \"algorithm\"");
  return job;
}

// ---------------------------------------------------------------------------
// job execution
// ---------------------------------------------------------------------------

std::string describe(const GeneratorSpec& g) {
  std::ostringstream os;
  os << g.family << ",n=" << g.n << ",d=" << g.dimension << ",seed=" << g.seed;
  if (g.color_mix > 0.0) os << ",mix=" << num_str(g.color_mix);
  return os.str();
}

std::string describe_params(const SuiteJob& job, bool dynamic) {
  std::ostringstream os;
  os << "b=" << job.b << ";eps=" << num_str(job.eps);
  if (job.problem == "vc")
    os << ";delta=" << num_str(job.delta) << ";gamma=" << num_str(job.gamma)
       << ";kernel_delta=" << num_str(job.kernel_delta);
  if (job.problem == "estimate") os << ";trials=" << job.trials;
  if (job.problem == "mis" || job.problem == "estimate")
    os << ";weighted=" << (job.weighted ? 1 : 0);
  if (job.problem == "mcm" || job.problem == "estimate") os << ";seed=" << job.seed;
  if (dynamic)
    os << ";ops=" << job.stream_ops << ";churn=" << num_str(job.churn)
       << ";window=" << job.window << ";checkpoints=" << job.checkpoint_every;
  return os.str();
}

bool all_boxes(const ObjectSet& s) {
  return std::all_of(s.begin(), s.end(), [](const GeomObject& o) { return o.is_box(); });
}

// ratio >= 1 means "this far from the reference": achieved/reference for
// minimization, reference/achieved for maximization
void set_ratio(ReportRow& row, double value, double reference, bool minimize,
               const std::string& kind) {
  row.oracle_value = reference;
  if (value == 0.0 && reference == 0.0) {
    row.ratio = 1.0;
  } else if (minimize && reference > 0.0) {
    row.ratio = value / reference;
  } else if (!minimize && value > 0.0) {
    row.ratio = reference / value;
  } else {
    return;  // degenerate; leave the ratio unset
  }
  row.ratio_kind = kind;
}

size_t cap_or(size_t cap, size_t fallback) { return cap == 0 ? fallback : cap; }

void run_static_mps(const SuiteJob& job, const ObjectSet& s, ReportRow& row) {
  PiercingSolution sol;
  if (job.algorithm == "tree") {
    sol = pierce_boxes(s, job.b, auto_pierce_oracle());
  } else if (job.algorithm == "fat") {
    sol = pierce_fat(s, job.b);
  } else {
    require(false, "unknown mps algorithm \"" + job.algorithm + "\"");
  }
  row.value = static_cast<double>(sol.points.size());
  row.valid = check_piercing(s, sol.points).ok;
  const bool boxes = all_boxes(s);
  const size_t cap = cap_or(job.oracle_cap, boxes ? 20 : 16);
  if (s.size() <= cap) {
    PiercingSolution opt = exact_mps(s, cap, cap);
    set_ratio(row, *row.value, static_cast<double>(opt.points.size()), true,
              boxes ? "vs-exact" : "vs-upper-bound");
  }
}

void run_static_mis(const SuiteJob& job, const ObjectSet& s, ReportRow& row) {
  MISOracle orc = auto_mis_oracle(job.weighted);
  ISolution sol;
  if (job.algorithm == "tree") {
    sol = mis_rects(s, job.b, orc);
  } else if (job.algorithm == "highdim") {
    sol = mis_boxes_highdim(s, job.b, orc);
  } else if (job.algorithm == "fat") {
    sol = mis_fat(s, job.b, 0.0, job.weighted);
  } else {
    require(false, "unknown mis algorithm \"" + job.algorithm + "\"");
  }
  row.value = sol.value;
  row.valid = check_independent(s, sol.ids).ok;
  const size_t cap = cap_or(job.oracle_cap, 40);
  if (s.size() <= cap) {
    ISolution opt = exact_mis(s, job.weighted, cap);
    set_ratio(row, *row.value, opt.value, false, "vs-exact");
  }
}

PromiseSolver promise_for(const SuiteJob& job) {
  const std::string& a = job.algorithm;
  if (a == "kernel-rect" || a == "dyn-rect") return rect_promise_solver(job.eps);
  if (a == "kernel-fat" || a == "dyn-fat") return fat_promise_solver(job.eps);
  if (a == "kernel-bipartite" || a == "dyn-bipartite") return bipartite_promise_solver();
  require(false, "unknown vc algorithm \"" + a + "\"");
  return {};
}

void run_static_vc(const SuiteJob& job, const ObjectSet& s, ReportRow& row) {
  auto edges = naive_min_weight_edge_oracle(s);
  MWUStats mst;
  FractionalVC frac = mwu_fractional_vc(*edges, s.size(), job.delta, &mst);
  KernelResult kr = kernelize(frac, job.gamma, job.kernel_delta);
  VCSolution sol = vc_from_kernel(s, kr, promise_for(job));
  row.value = static_cast<double>(sol.ids.size());
  row.valid = check_vertex_cover(s, sol.ids).ok;
  row.counters["mwu_iterations"] = static_cast<double>(mst.iterations);
  row.counters["mwu_runs"] = static_cast<double>(mst.runs);
  row.counters["kernel_size"] = static_cast<double>(kr.K.size());
  row.counters["kernel_forced"] = static_cast<double>(kr.H.size());
  const size_t cap = cap_or(job.oracle_cap, 40);
  if (s.size() <= cap) {
    VCSolution opt = exact_vc(s, cap);
    set_ratio(row, *row.value, static_cast<double>(opt.ids.size()), true, "vs-exact");
  }
}

void run_static_mcm(const SuiteJob& job, const ObjectSet& s, ReportRow& row) {
  Matching sol;
  bool bipartite = false;
  if (job.algorithm == "bipartite") {
    bipartite = true;
    sol = approx_bipartite_mcm(s, job.eps);
  } else if (job.algorithm == "general") {
    sol = approx_general_mcm(s, job.eps, job.seed);
  } else {
    require(false, "unknown mcm algorithm \"" + job.algorithm + "\"");
  }
  row.value = static_cast<double>(sol.pairs.size());
  row.valid = check_matching(s, sol.pairs, bipartite).ok;
  const size_t cap = cap_or(job.oracle_cap, bipartite ? 60 : 24);
  if (s.size() <= cap) {
    Matching opt = exact_mcm(s, bipartite, cap);
    set_ratio(row, *row.value, static_cast<double>(opt.pairs.size()), false, "vs-exact");
  }
}

void run_estimate(const SuiteJob& job, const ObjectSet& s, ReportRow& row) {
  EstimateStats st;
  double est = 0.0, full = 0.0;
  bool minimize = true;
  if (job.algorithm == "mps") {
    PierceOracle orc = auto_pierce_oracle();
    est = boosted_mps_estimate(s, job.b, orc, job.eps, job.trials, job.seed, &st);
    PiercingSolution ref = pierce_boxes(s, job.b, orc);
    full = static_cast<double>(ref.points.size());
    row.valid = check_piercing(s, ref.points).ok;
  } else if (job.algorithm == "mis") {
    MISOracle orc = auto_mis_oracle(job.weighted);
    est = boosted_mis_estimate(s, job.b, orc, job.eps, job.weighted, job.trials, job.seed, &st);
    ISolution ref = mis_rects(s, job.b, orc);
    full = ref.value;
    row.valid = check_independent(s, ref.ids).ok;
    minimize = false;
  } else {
    require(false, "unknown estimate algorithm \"" + job.algorithm + "\"");
  }
  row.value = est;
  set_ratio(row, est, full, minimize, "vs-solver");
  row.counters["bound_B"] = st.B;
  row.counters["terms"] = static_cast<double>(st.terms);
  row.counters["levels"] = static_cast<double>(st.levels);
  row.counters["samples"] = static_cast<double>(st.samples);
  row.counters["evaluations"] = static_cast<double>(st.evaluations);
  row.counters["trials"] = static_cast<double>(st.trials);
}

// Shared dynamic-replay scaffold: applies the stream, and at every checkpoint
// queries the structure, validates the witness against the live set, and
// remembers the final live set for the ratio and the static counterpart.
template <class Insert, class Erase, class AtCheckpoint>
void replay(const UpdateStream& st, Insert&& ins, Erase&& del, AtCheckpoint&& at) {
  size_t next_cp = 0;
  for (size_t i = 0; i < st.ops.size(); ++i) {
    const UpdateOp& op = st.ops[i];
    if (op.is_insert)
      ins(op.obj);
    else
      del(op.id);
    while (next_cp < st.checkpoints.size() && st.checkpoints[next_cp] == i + 1) {
      at(i + 1);
      ++next_cp;
    }
  }
}

void run_dynamic(const SuiteJob& job, ReportRow& row) {
  const UpdateStream st =
      generate_stream(job.instance, job.stream_ops, job.churn, job.window, job.checkpoint_every);
  bool every_checkpoint_valid = true;
  ObjectSet final_live;
  const int dim = job.instance.dimension;

  auto check_at = [&](size_t upto, auto&& witness_ok) {
    ObjectSet live = live_set(st, upto);
    if (!witness_ok(live)) every_checkpoint_valid = false;
    if (upto == st.ops.size()) final_live = std::move(live);
  };

  if (job.problem == "mps" && job.algorithm == "dyn-tree") {
    DynPierceBoxes dp(dim, job.b);
    replay(st, [&](const GeomObject& o) { dp.insert(o); }, [&](int64_t id) { dp.erase(id); },
           [&](size_t upto) {
             check_at(upto, [&](const ObjectSet& live) {
               return check_piercing(live, dp.current().points).ok;
             });
           });
    PiercingSolution cur = dp.current();
    row.value = static_cast<double>(cur.points.size());
    row.counters["rebuilds"] = static_cast<double>(dp.rebuild_count());
    const size_t cap = cap_or(job.oracle_cap, 20);
    if (final_live.size() <= cap) {
      PiercingSolution opt = exact_mps(final_live, cap, cap);
      set_ratio(row, *row.value, static_cast<double>(opt.points.size()), true, "vs-exact");
    }
    PiercingSolution stat = pierce_boxes(final_live, job.b, auto_pierce_oracle());
    row.counters["static_final_value"] = static_cast<double>(stat.points.size());
    row.valid = every_checkpoint_valid && check_piercing(final_live, stat.points).ok;
    return;
  }

  if (job.problem == "mis" && (job.algorithm == "dyn-tree" || job.algorithm == "dyn-fat")) {
    const bool fat = job.algorithm == "dyn-fat";
    MISOracle orc = auto_mis_oracle(job.weighted);
    DynMisRects tree(job.b, orc);
    DynMisFat fatd(job.b, 0.0, job.weighted);
    auto current = [&]() { return fat ? fatd.current() : tree.current(); };
    replay(
        st,
        [&](const GeomObject& o) { fat ? fatd.insert(o) : tree.insert(o); },
        [&](int64_t id) { fat ? fatd.erase(id) : tree.erase(id); },
        [&](size_t upto) {
          check_at(upto, [&](const ObjectSet& live) {
            return check_independent(live, current().ids).ok;
          });
        });
    ISolution cur = current();
    row.value = cur.value;
    row.counters["rebuilds"] = static_cast<double>(fat ? fatd.rebuild_count() : tree.rebuild_count());
    const size_t cap = cap_or(job.oracle_cap, 40);
    if (final_live.size() <= cap) {
      ISolution opt = exact_mis(final_live, job.weighted, cap);
      set_ratio(row, *row.value, opt.value, false, "vs-exact");
    }
    ISolution stat = fat ? mis_fat(final_live, job.b, 0.0, job.weighted)
                         : mis_rects(final_live, job.b, orc);
    row.counters["static_final_value"] = stat.value;
    row.valid = every_checkpoint_valid && check_independent(final_live, stat.ids).ok;
    return;
  }

  if (job.problem == "vc") {
    DynVC dv(job.eps, job.gamma, job.kernel_delta, promise_for(job), 1.0 + 3.0 * job.eps);
    replay(st, [&](const GeomObject& o) { dv.insert(o); }, [&](int64_t id) { dv.erase(id); },
           [&](size_t upto) {
             check_at(upto, [&](const ObjectSet& live) {
               return check_vertex_cover(live, dv.current().ids).ok;
             });
           });
    VCSolution cur = dv.current();
    row.value = static_cast<double>(cur.ids.size());
    row.counters["phases"] = static_cast<double>(dv.phase_count());
    const size_t cap = cap_or(job.oracle_cap, 40);
    if (final_live.size() <= cap) {
      VCSolution opt = exact_vc(final_live, cap);
      set_ratio(row, *row.value, static_cast<double>(opt.ids.size()), true, "vs-exact");
    }
    auto edges = naive_min_weight_edge_oracle(final_live);
    FractionalVC frac = mwu_fractional_vc(*edges, final_live.size(), job.delta);
    KernelResult kr = kernelize(frac, job.gamma, job.kernel_delta);
    VCSolution stat = vc_from_kernel(final_live, kr, promise_for(job));
    row.counters["static_final_value"] = static_cast<double>(stat.ids.size());
    row.valid = every_checkpoint_valid && check_vertex_cover(final_live, stat.ids).ok;
    return;
  }

  if (job.problem == "mcm" &&
      (job.algorithm == "dyn-bipartite" || job.algorithm == "dyn-general")) {
    const bool bipartite = job.algorithm == "dyn-bipartite";
    DynBipartiteMcm bp(job.eps);
    DynGeneralMcm gen(job.eps, job.seed);
    auto current = [&]() { return bipartite ? bp.current() : gen.current(); };
    replay(
        st,
        [&](const GeomObject& o) { bipartite ? bp.insert(o) : gen.insert(o); },
        [&](int64_t id) { bipartite ? bp.erase(id) : gen.erase(id); },
        [&](size_t upto) {
          check_at(upto, [&](const ObjectSet& live) {
            return check_matching(live, current().pairs, bipartite).ok;
          });
        });
    Matching cur = current();
    row.value = static_cast<double>(cur.pairs.size());
    row.counters["phases"] = static_cast<double>(bipartite ? bp.phase_count() : gen.phase_count());
    row.counters["maximal_size"] =
        static_cast<double>(bipartite ? bp.maximal_size() : gen.maximal_size());
    if (!bipartite) row.counters["label_capacity"] = static_cast<double>(gen.label_capacity());
    const size_t cap = cap_or(job.oracle_cap, bipartite ? 60 : 24);
    if (final_live.size() <= cap) {
      Matching opt = exact_mcm(final_live, bipartite, cap);
      set_ratio(row, *row.value, static_cast<double>(opt.pairs.size()), false, "vs-exact");
    }
    Matching stat = bipartite ? approx_bipartite_mcm(final_live, job.eps)
                              : approx_general_mcm(final_live, job.eps, job.seed);
    row.counters["static_final_value"] = static_cast<double>(stat.pairs.size());
    row.valid = every_checkpoint_valid && check_matching(final_live, stat.pairs, bipartite).ok;
    return;
  }

  require(false, "unknown dynamic job \"" + job.problem + "/" + job.algorithm + "\"");
}

ReportRow run_job(const SuiteJob& job, bool timing) {
  ReportRow row;
  row.name = job.name;
  row.problem = job.problem;
  row.algorithm = job.algorithm;
  row.instance = describe(job.instance);
  const bool dynamic = job.algorithm.rfind("dyn-", 0) == 0;
  row.params = describe_params(job, dynamic);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (dynamic) {
      run_dynamic(job, row);
    } else {
      ObjectSet s = generate(job.instance);
      if (job.problem == "mps") run_static_mps(job, s, row);
      else if (job.problem == "mis") run_static_mis(job, s, row);
      else if (job.problem == "vc") run_static_vc(job, s, row);
      else if (job.problem == "mcm") run_static_mcm(job, s, row);
      else if (job.problem == "estimate") run_estimate(job, s, row);
      else require(false, "unknown problem \"" + job.problem + "\"");
    }
  } catch (const std::exception& e) {
    row.error = e.what();
    row.valid = false;
  }
  if (timing) {
    const auto t1 = std::chrono::steady_clock::now();
    row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  return row;
}

}  // namespace

// ---------------------------------------------------------------------------
// public surface
// ---------------------------------------------------------------------------

ObjectSet generate(const GeneratorSpec& spec) {
  check_spec(spec);
  ObjectSource source(spec);
  Rng rng = derive_rng(spec.seed, "instance");
  ObjectSet out;
  out.reserve(spec.n);
  for (size_t i = 0; i < spec.n; ++i)
    out.push_back(source.next(rng, static_cast<int64_t>(i) + 1));
  return out;
}

StabbingGrid stabbing_grid_for(const GeneratorSpec& spec) {
  check_spec(spec);
  require(spec.family == "stabbed-boxes", "only the stabbed family carries a grid");
  std::vector<std::vector<double>> lines(static_cast<size_t>(spec.dimension));
  for (int a = 0; a < spec.dimension; ++a) {
    Rng rng = derive_rng(spec.seed, "stab-grid", static_cast<uint64_t>(a));
    auto& ls = lines[static_cast<size_t>(a)];
    ls.resize(spec.grid_lines);
    for (auto& v : ls) v = rng.uniform(0.15 * spec.extent, 0.85 * spec.extent);
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  }
  return StabbingGrid::from_lines(spec.dimension, std::move(lines));
}

UpdateStream generate_stream(const GeneratorSpec& spec, size_t ops, double churn, size_t window,
                             size_t checkpoint_every) {
  check_spec(spec);
  require(churn >= 0.0 && churn < 1.0, "churn must lie in [0,1)");
  ObjectSource source(spec);
  Rng rng = derive_rng(spec.seed, "stream");
  UpdateStream st;
  st.ops.reserve(ops);
  std::vector<int64_t> live;  // insertion order
  int64_t next_id = 1;
  for (size_t i = 0; i < ops; ++i) {
    bool remove;
    if (window > 0)
      remove = live.size() >= window;
    else
      remove = !live.empty() && rng.uniform() < churn;
    UpdateOp op;
    if (remove) {
      const size_t at = (window > 0) ? 0 : rng.uniform_index(live.size());
      op.is_insert = false;
      op.id = live[at];
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(at));
      source.release(op.id);
    } else {
      op.is_insert = true;
      op.obj = source.next(rng, next_id++);
      live.push_back(op.obj.id);
    }
    st.ops.push_back(std::move(op));
    if (checkpoint_every > 0 && (i + 1) % checkpoint_every == 0) st.checkpoints.push_back(i + 1);
  }
  if (ops > 0 && (st.checkpoints.empty() || st.checkpoints.back() != ops))
    st.checkpoints.push_back(ops);
  return st;
}

void write_report_ndjson(std::ostream& out, const Report& report) {
  for (const ReportRow& r : report.rows) out << row_json(r).dump() << "\n";
}

void write_report_csv(std::ostream& out, const Report& report) {
  out << "name,problem,algorithm,instance,params,value,oracle_value,ratio,ratio_kind,valid,"
         "error,wall_ms,counters\n";
  for (const ReportRow& r : report.rows) {
    std::ostringstream counters;
    bool first = true;
    for (const auto& [k, v] : r.counters) {
      if (!first) counters << ";";
      counters << k << "=" << num_str(v);
      first = false;
    }
    out << csv_escape(r.name) << "," << csv_escape(r.problem) << "," << csv_escape(r.algorithm)
        << "," << csv_escape(r.instance) << "," << csv_escape(r.params) << ","
        << (r.value ? num_str(*r.value) : "") << ","
        << (r.oracle_value ? num_str(*r.oracle_value) : "") << ","
        << (r.ratio ? num_str(*r.ratio) : "") << "," << csv_escape(r.ratio_kind) << ","
        << (r.valid ? "true" : "false") << "," << csv_escape(r.error) << "," << num_str(r.wall_ms)
        << "," << csv_escape(counters.str()) << "\n";
  }
}

SuiteConfig read_suite_config(std::istream& in) {
  SuiteConfig cfg;
  std::string text;
  size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) bad(line, "malformed JSON");
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
      bad(line, "record needs a string \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "options") {
      for (const auto& [k, v] : j.items()) {
        if (k == "kind") continue;
        else if (k == "workers") cfg.workers = std::max<size_t>(1, get_count(v, line, k));
        else if (k == "timing") cfg.timing = get_bool(v, line, k);
        else bad(line, "unknown options key \"" + k + "\"");
      }
    } else if (kind == "job") {
      cfg.jobs.push_back(parse_job(j, line, cfg.jobs.size() + 1));
    } else {
      bad(line, "kind must be \"options\" or \"job\"");
    }
  }
  return cfg;
}

SuiteConfig read_suite_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(0, "cannot open " + path);
  return read_suite_config(in);
}

Report run_suite(const SuiteConfig& cfg) {
  Report rep;
  rep.rows.resize(cfg.jobs.size());
  if (cfg.jobs.empty()) return rep;
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (size_t i = next.fetch_add(1); i < cfg.jobs.size(); i = next.fetch_add(1))
      rep.rows[i] = run_job(cfg.jobs[i], cfg.timing);
  };
  const size_t workers = std::max<size_t>(1, std::min(cfg.workers, cfg.jobs.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rep;
}

}  // namespace geo
