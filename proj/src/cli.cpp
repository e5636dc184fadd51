#include "geoapprox/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "geoapprox/bench.hpp"
#include "geoapprox/io.hpp"
#include "geoapprox/matching.hpp"
#include "geoapprox/mis.hpp"
#include "geoapprox/mps.hpp"
#include "geoapprox/oracle.hpp"
#include "geoapprox/sampling.hpp"
#include "geoapprox/validate.hpp"
#include "geoapprox/vc.hpp"

namespace geo {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// flags shared by every solve-style subcommand
struct CommonOpts {
  std::string input;
  std::string report;
  uint64_t seed = 1;
  bool validate = false;  // accepted for symmetry; validation always runs
  bool stub = false;      // swap the solver for a deliberately infeasible stub
  bool timing = false;    // include measured wall time (breaks byte equality)
  bool ref = false;       // also solve exactly, report oracle_value and ratio
  size_t ref_cap = 0;     // exact-reference size cap override (0 = default)
};

void add_common(CLI::App* sub, CommonOpts& c) {
  sub->add_option("--input", c.input, "instance file (static) or update-stream file (dynamic)")
      ->required();
  sub->add_option("--report", c.report, "write the JSON report to this file instead of stdout");
  sub->add_option("--seed", c.seed, "root seed; every random stream is derived from it by label");
  sub->add_flag("--validate", c.validate,
                "force witness validation (validation always runs; flag kept for symmetry)");
  sub->add_flag("--stub-infeasible", c.stub,
                "testing hook: replace the solver by a stub whose witness references an id "
                "absent from the input, so validation fails and the exit code is 2");
  sub->add_flag("--timing", c.timing,
                "report measured wall time; without it wall_ms is 0 so identical argv "
                "produce byte-identical reports");
  sub->add_flag("--ref", c.ref, "also solve exactly and report oracle_value plus ratio");
  sub->add_option("--ref-cap", c.ref_cap, "size cap override for --ref (0 = oracle default)");
}

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int64_t absent_id(const ObjectSet& s) {
  int64_t m = 0;
  for (const GeomObject& o : s) m = std::max(m, o.id);
  return m + 1;
}

int64_t absent_id(const UpdateStream& st) {
  int64_t m = 0;
  for (const UpdateOp& op : st.ops) m = std::max(m, op.is_insert ? op.obj.id : op.id);
  return m + 1;
}

int stream_dim(const UpdateStream& st) {
  for (const UpdateOp& op : st.ops)
    if (op.is_insert) return op.obj.dim();
  return 2;
}

// minimization: value / reference; maximization: reference / value
void put_min_ratio(json& j, double value, double ref) {
  if (ref > 0.0)
    j["ratio"] = value / ref;
  else if (value == 0.0)
    j["ratio"] = 1.0;
}

void put_max_ratio(json& j, double value, double ref) {
  if (value > 0.0)
    j["ratio"] = ref / value;
  else if (ref == 0.0)
    j["ratio"] = 1.0;
}

void put_validation(json& j, const ValidationResult& vr) {
  j["valid"] = vr.ok;
  if (!vr.ok) j["validation_error"] = vr.reason;
}

int emit_report(const CommonOpts& c, json& j, bool ok, double wall_ms, std::ostream& out,
                std::ostream& err) {
  j["wall_ms"] = c.timing ? wall_ms : 0.0;
  const std::string text = j.dump(2) + "\n";
  if (!c.report.empty()) {
    std::ofstream f(c.report, std::ios::binary);
    if (!f) {
      err << "error: cannot open report file " << c.report << "\n";
      return 1;
    }
    f << text;
    out << "report written to " << c.report << "\n";
  } else {
    out << text;
  }
  return ok ? 0 : 2;
}

// Replays a stream into apply(), probing value + validity after every
// checkpoint.  probe(upto) must evaluate the structure against the live set
// of the first `upto` ops.
template <class Apply, class Probe>
std::pair<json, bool> replay_stream(const UpdateStream& st, Apply&& apply, Probe&& probe) {
  json cps = json::array();
  bool all_valid = true;
  const std::set<size_t> marks(st.checkpoints.begin(), st.checkpoints.end());
  for (size_t i = 0; i < st.ops.size(); ++i) {
    apply(st.ops[i]);
    if (marks.count(i + 1) == 0) continue;
    auto [value, vr] = probe(i + 1);
    json e;
    e["op"] = i + 1;
    e["value"] = value;
    e["valid"] = vr.ok;
    if (!vr.ok) e["error"] = vr.reason;
    cps.push_back(std::move(e));
    all_valid = all_valid && vr.ok;
  }
  return {std::move(cps), all_valid};
}

// ---------------------------------------------------------------------------
// mps
// ---------------------------------------------------------------------------

struct MpsOpts {
  CommonOpts c;
  std::string mode = "static";
  std::string family = "box";
  std::string oracle = "auto";
  int64_t b = 4;
  double c0 = 0.0;
};

PierceOracle pick_pierce_oracle(const std::string& name) {
  if (name == "exact") return exact_pierce_oracle();
  if (name == "greedy") return greedy_pierce_oracle();
  return auto_pierce_oracle();
}

void add_mps_reference(json& j, const ObjectSet& s, size_t cap, double value) {
  const size_t cap_boxes = cap ? cap : 20, cap_disks = cap ? cap : 16;
  PiercingSolution ref = exact_mps(s, cap_boxes, cap_disks);
  j["oracle_value"] = ref.points.size();
  const bool any_disk = std::any_of(s.begin(), s.end(), [](const GeomObject& o) { return o.is_disk(); });
  j["ratio_kind"] = any_disk ? "vs-upper-bound" : "vs-exact";
  put_min_ratio(j, value, static_cast<double>(ref.points.size()));
}

int run_mps(const MpsOpts& o, std::ostream& out, std::ostream& err) {
  json j;
  j["problem"] = "mps";
  j["mode"] = o.mode;
  j["family"] = o.family;
  j["seed"] = o.c.seed;
  json counters(json::value_t::object);
  const auto t0 = Clock::now();

  if (o.mode == "static") {
    const ObjectSet s = read_instance_file(o.c.input);
    j["n"] = s.size();
    PiercingSolution sol;
    if (o.c.stub) {
      // stub: claims the input is pierced by no points at all
    } else if (o.family == "box") {
      sol = pierce_boxes(s, o.b, pick_pierce_oracle(o.oracle));
    } else {
      FatPierceStats fstats;
      sol = pierce_fat(s, o.b, o.c0, &fstats);
      counters["fat_patched"] = fstats.patched;
      counters["fat_fallback_objects"] = fstats.fallback_objects;
      counters["fat_oracle_points"] = fstats.oracle_points;
      counters["fat_max_lambda"] = fstats.max_lambda;
    }
    const ValidationResult vr = check_piercing(s, sol.points);
    j["value"] = sol.points.size();
    put_validation(j, vr);
    if (o.c.ref) add_mps_reference(j, s, o.c.ref_cap, static_cast<double>(sol.points.size()));
    j["counters"] = counters;
    return emit_report(o.c, j, vr.ok, elapsed_ms(t0), out, err);
  }

  require(o.mode == "dynamic", "mps: --mode must be static or dynamic");
  require(o.family == "box", "mps: dynamic mode supports --family box only");
  const UpdateStream st = read_stream_file(o.c.input);
  j["ops"] = st.ops.size();
  DynPierceBoxes dp(stream_dim(st), o.b, pick_pierce_oracle(o.oracle));
  auto [cps, cps_ok] = replay_stream(
      st,
      [&](const UpdateOp& op) {
        if (op.is_insert)
          dp.insert(op.obj);
        else
          dp.erase(op.id);
      },
      [&](size_t upto) {
        const PiercingSolution sol = dp.current();
        return std::make_pair(static_cast<double>(sol.points.size()),
                              check_piercing(live_set(st, upto), sol.points));
      });
  const ObjectSet live = live_set(st);
  PiercingSolution sol = dp.current();
  if (o.c.stub) sol.points.clear();
  const ValidationResult vr = check_piercing(live, sol.points);
  const bool ok = vr.ok && cps_ok;
  j["checkpoints"] = std::move(cps);
  j["final_live"] = live.size();
  j["value"] = sol.points.size();
  put_validation(j, vr);
  j["valid"] = ok;
  counters["rebuilds"] = dp.rebuild_count();
  if (o.c.ref) add_mps_reference(j, live, o.c.ref_cap, static_cast<double>(sol.points.size()));
  j["counters"] = counters;
  return emit_report(o.c, j, ok, elapsed_ms(t0), out, err);
}

// ---------------------------------------------------------------------------
// mis
// ---------------------------------------------------------------------------

struct MisOpts {
  CommonOpts c;
  std::string mode = "static";
  std::string family = "rect";
  bool weighted = false;
  int64_t b = 4;
  double c0 = 0.0;
};

void add_mis_reference(json& j, const ObjectSet& s, bool weighted, size_t cap, double value) {
  const ISolution ref = exact_mis(s, weighted, cap ? cap : 40);
  j["oracle_value"] = ref.value;
  j["ratio_kind"] = "vs-exact";
  put_max_ratio(j, value, ref.value);
}

int run_mis(const MisOpts& o, std::ostream& out, std::ostream& err) {
  json j;
  j["problem"] = "mis";
  j["mode"] = o.mode;
  j["family"] = o.family;
  j["weighted"] = o.weighted;
  j["seed"] = o.c.seed;
  json counters(json::value_t::object);
  const auto t0 = Clock::now();
  const MISOracle oracle = auto_mis_oracle(o.weighted);

  if (o.mode == "static") {
    const ObjectSet s = read_instance_file(o.c.input);
    j["n"] = s.size();
    ISolution sol;
    if (o.c.stub) {
      sol.ids = {absent_id(s)};
      sol.value = 1.0;
    } else if (o.family == "rect") {
      sol = mis_rects(s, o.b, oracle);
    } else if (o.family == "box") {
      sol = mis_boxes_highdim(s, o.b, oracle);
    } else {
      require(o.family == "fat", "mis: --family must be rect, box, or fat");
      sol = mis_fat(s, o.b, o.c0, o.weighted);
    }
    const ValidationResult vr = check_independent(s, sol.ids);
    j["value"] = sol.value;
    j["chosen"] = sol.ids.size();
    put_validation(j, vr);
    if (o.c.ref) add_mis_reference(j, s, o.weighted, o.c.ref_cap, sol.value);
    j["counters"] = counters;
    return emit_report(o.c, j, vr.ok, elapsed_ms(t0), out, err);
  }

  require(o.mode == "dynamic", "mis: --mode must be static or dynamic");
  const UpdateStream st = read_stream_file(o.c.input);
  j["ops"] = st.ops.size();

  auto finish = [&](ISolution sol, size_t rebuilds, auto&& cps, bool cps_ok) {
    const ObjectSet live = live_set(st);
    if (o.c.stub) {
      sol.ids = {absent_id(st)};
      sol.value = 1.0;
    }
    const ValidationResult vr = check_independent(live, sol.ids);
    const bool ok = vr.ok && cps_ok;
    j["checkpoints"] = std::move(cps);
    j["final_live"] = live.size();
    j["value"] = sol.value;
    j["chosen"] = sol.ids.size();
    put_validation(j, vr);
    j["valid"] = ok;
    counters["rebuilds"] = rebuilds;
    if (o.c.ref) add_mis_reference(j, live, o.weighted, o.c.ref_cap, sol.value);
    j["counters"] = counters;
    return emit_report(o.c, j, ok, elapsed_ms(t0), out, err);
  };

  if (o.family == "rect") {
    DynMisRects dm(o.b, oracle);
    auto [cps, cps_ok] = replay_stream(
        st,
        [&](const UpdateOp& op) {
          if (op.is_insert)
            dm.insert(op.obj);
          else
            dm.erase(op.id);
        },
        [&](size_t upto) {
          const ISolution sol = dm.current();
          return std::make_pair(sol.value, check_independent(live_set(st, upto), sol.ids));
        });
    return finish(dm.current(), dm.rebuild_count(), std::move(cps), cps_ok);
  }
  require(o.family == "fat", "mis: dynamic mode supports --family rect or fat");
  DynMisFat dm(o.b, o.c0, o.weighted);
  auto [cps, cps_ok] = replay_stream(
      st,
      [&](const UpdateOp& op) {
        if (op.is_insert)
          dm.insert(op.obj);
        else
          dm.erase(op.id);
      },
      [&](size_t upto) {
        const ISolution sol = dm.current();
        return std::make_pair(sol.value, check_independent(live_set(st, upto), sol.ids));
      });
  return finish(dm.current(), dm.rebuild_count(), std::move(cps), cps_ok);
}

// ---------------------------------------------------------------------------
// vc
// ---------------------------------------------------------------------------

struct VcOpts {
  CommonOpts c;
  std::string mode = "static";
  std::string family = "rect";
  double eps = 0.25;
  double gamma = 0.1;
  double delta = 0.1;         // multiplicative-weights accuracy
  double kernel_delta = 0.01; // kernel threshold split
};

PromiseSolver vc_promise_for(const VcOpts& o) {
  if (o.family == "rect") return rect_promise_solver(o.eps);
  if (o.family == "disk" || o.family == "fatbox") return fat_promise_solver(o.eps);
  require(o.family == "bipartite-disk" || o.family == "bipartite-box",
          "vc: --family must be disk, rect, fatbox, bipartite-disk, or bipartite-box");
  return bipartite_promise_solver();
}

void add_vc_reference(json& j, const ObjectSet& s, size_t cap, double value) {
  const VCSolution ref = exact_vc(s, cap ? cap : 40);
  j["oracle_value"] = ref.value();
  j["ratio_kind"] = "vs-exact";
  put_min_ratio(j, value, ref.value());
}

int run_vc(const VcOpts& o, std::ostream& out, std::ostream& err) {
  json j;
  j["problem"] = "vc";
  j["mode"] = o.mode;
  j["family"] = o.family;
  j["seed"] = o.c.seed;
  json counters(json::value_t::object);
  const auto t0 = Clock::now();
  const PromiseSolver inner = vc_promise_for(o);

  if (o.mode == "static") {
    const ObjectSet s = read_instance_file(o.c.input);
    j["n"] = s.size();
    VCSolution sol;
    if (o.c.stub) {
      sol.ids = {absent_id(s)};
    } else {
      auto edge_oracle = naive_min_weight_edge_oracle(s);
      MWUStats stats;
      const FractionalVC fx = mwu_fractional_vc(*edge_oracle, s.size(), o.delta, &stats);
      const KernelResult kr = kernelize(fx, o.gamma, o.kernel_delta);
      sol = vc_from_kernel(s, kr, inner);
      counters["mwu_budget"] = stats.z;
      counters["mwu_iterations"] = stats.iterations;
      counters["mwu_iteration_cap"] = stats.t_max;
      counters["mwu_runs"] = stats.runs;
      counters["mwu_lower_bound"] = stats.lower_bound;
      counters["fractional_size"] = fx.size;
      counters["kernel_size"] = kr.K.size();
      counters["kernel_forced"] = kr.H.size();
      counters["kernel_dropped"] = kr.L.size();
      counters["kernel_alpha"] = kr.alpha;
    }
    const ValidationResult vr = check_vertex_cover(s, sol.ids);
    j["value"] = sol.value();
    put_validation(j, vr);
    if (o.c.ref) add_vc_reference(j, s, o.c.ref_cap, sol.value());
    j["counters"] = counters;
    return emit_report(o.c, j, vr.ok, elapsed_ms(t0), out, err);
  }

  require(o.mode == "dynamic", "vc: --mode must be static or dynamic");
  const UpdateStream st = read_stream_file(o.c.input);
  j["ops"] = st.ops.size();
  DynVC dv(o.eps, o.gamma, o.kernel_delta, inner, 1.0 + 3.0 * o.eps);
  json boundaries = json::array();
  size_t phases_seen = 0, op_index = 0;
  auto [cps, cps_ok] = replay_stream(
      st,
      [&](const UpdateOp& op) {
        if (op.is_insert)
          dv.insert(op.obj);
        else
          dv.erase(op.id);
        ++op_index;
        if (dv.phase_count() != phases_seen) {
          phases_seen = dv.phase_count();
          boundaries.push_back(op_index);
        }
      },
      [&](size_t upto) {
        const VCSolution sol = dv.current();
        return std::make_pair(sol.value(), check_vertex_cover(live_set(st, upto), sol.ids));
      });
  const ObjectSet live = live_set(st);
  VCSolution sol = dv.current();
  if (o.c.stub) sol.ids = {absent_id(st)};
  const ValidationResult vr = check_vertex_cover(live, sol.ids);
  const bool ok = vr.ok && cps_ok;
  j["checkpoints"] = std::move(cps);
  j["phase_boundaries"] = std::move(boundaries);
  j["final_live"] = live.size();
  j["value"] = sol.value();
  put_validation(j, vr);
  j["valid"] = ok;
  counters["phases"] = dv.phase_count();
  counters["optimum_estimate"] = dv.optimum_estimate();
  if (o.c.ref) add_vc_reference(j, live, o.c.ref_cap, sol.value());
  j["counters"] = counters;
  return emit_report(o.c, j, ok, elapsed_ms(t0), out, err);
}

// ---------------------------------------------------------------------------
// mcm
// ---------------------------------------------------------------------------

struct McmOpts {
  CommonOpts c;
  std::string mode = "static";
  bool bipartite = false;
  bool general = false;
  double eps = 0.25;
};

void add_mcm_reference(json& j, const ObjectSet& s, bool bipartite, size_t cap, double value) {
  const Matching ref = exact_mcm(s, bipartite, cap);
  j["oracle_value"] = ref.value();
  j["ratio_kind"] = "vs-exact";
  put_max_ratio(j, value, ref.value());
}

int run_mcm(const McmOpts& o, std::ostream& out, std::ostream& err) {
  require(o.bipartite != o.general, "mcm: exactly one of --bipartite / --general is required");
  json j;
  j["problem"] = "mcm";
  j["mode"] = o.mode;
  j["graph"] = o.bipartite ? "bipartite" : "general";
  j["seed"] = o.c.seed;
  json counters(json::value_t::object);
  const auto t0 = Clock::now();

  if (o.mode == "static") {
    const ObjectSet s = read_instance_file(o.c.input);
    j["n"] = s.size();
    Matching sol;
    if (o.c.stub) {
      const int64_t ghost = absent_id(s);
      sol.pairs = {{ghost, ghost + 1}};
    } else if (o.bipartite) {
      sol = approx_bipartite_mcm(s, o.eps);
    } else {
      sol = approx_general_mcm(s, o.eps, o.c.seed);
    }
    const ValidationResult vr = check_matching(s, sol.pairs, o.bipartite);
    j["value"] = sol.value();
    put_validation(j, vr);
    if (o.c.ref) add_mcm_reference(j, s, o.bipartite, o.c.ref_cap, sol.value());
    j["counters"] = counters;
    return emit_report(o.c, j, vr.ok, elapsed_ms(t0), out, err);
  }

  require(o.mode == "dynamic", "mcm: --mode must be static or dynamic");
  const UpdateStream st = read_stream_file(o.c.input);
  j["ops"] = st.ops.size();

  auto finish = [&](Matching sol, auto&& cps, bool cps_ok) {
    const ObjectSet live = live_set(st);
    if (o.c.stub) {
      const int64_t ghost = absent_id(st);
      sol.pairs = {{ghost, ghost + 1}};
    }
    const ValidationResult vr = check_matching(live, sol.pairs, o.bipartite);
    const bool ok = vr.ok && cps_ok;
    j["checkpoints"] = std::move(cps);
    j["final_live"] = live.size();
    j["value"] = sol.value();
    put_validation(j, vr);
    j["valid"] = ok;
    if (o.c.ref) add_mcm_reference(j, live, o.bipartite, o.c.ref_cap, sol.value());
    j["counters"] = counters;
    return emit_report(o.c, j, ok, elapsed_ms(t0), out, err);
  };

  if (o.bipartite) {
    DynBipartiteMcm dm(o.eps);
    auto [cps, cps_ok] = replay_stream(
        st,
        [&](const UpdateOp& op) {
          if (op.is_insert)
            dm.insert(op.obj);
          else
            dm.erase(op.id);
        },
        [&](size_t upto) {
          const Matching sol = dm.current();
          return std::make_pair(sol.value(), check_matching(live_set(st, upto), sol.pairs, true));
        });
    counters["maximal_size"] = dm.maximal_size();
    counters["phases"] = dm.phase_count();
    return finish(dm.current(), std::move(cps), cps_ok);
  }
  DynGeneralMcm dm(o.eps, o.c.seed);
  auto [cps, cps_ok] = replay_stream(
      st,
      [&](const UpdateOp& op) {
        if (op.is_insert)
          dm.insert(op.obj);
        else
          dm.erase(op.id);
      },
      [&](size_t upto) {
        const Matching sol = dm.current();
        return std::make_pair(sol.value(), check_matching(live_set(st, upto), sol.pairs, false));
      });
  counters["maximal_size"] = dm.maximal_size();
  counters["phases"] = dm.phase_count();
  counters["label_capacity"] = dm.label_capacity();
  return finish(dm.current(), std::move(cps), cps_ok);
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

struct EstimateOpts {
  CommonOpts c;
  std::string problem;
  double eps = 0.25;
  size_t trials = 15;
  int64_t b = 4;
  bool weighted = false;
};

int run_estimate(const EstimateOpts& o, std::ostream& out, std::ostream& err) {
  json j;
  j["problem"] = "estimate-" + o.problem;
  j["eps"] = o.eps;
  j["trials"] = o.trials;
  j["seed"] = o.c.seed;
  json counters(json::value_t::object);
  const auto t0 = Clock::now();
  const ObjectSet s = read_instance_file(o.c.input);
  j["n"] = s.size();

  double est = 0.0, solver_value = 0.0;
  ValidationResult vr;
  EstimateStats stats;
  if (o.c.stub) {
    vr = o.problem == "mps" ? check_piercing(s, {}) : check_independent(s, {absent_id(s)});
    if (s.empty()) vr = {false, "infeasible stub"};
  } else if (o.problem == "mps") {
    const PierceOracle oracle = auto_pierce_oracle();
    est = boosted_mps_estimate(s, o.b, oracle, o.eps, o.trials, o.c.seed, &stats);
    const PiercingSolution full = pierce_boxes(s, o.b, oracle);
    solver_value = static_cast<double>(full.points.size());
    vr = check_piercing(s, full.points);
    put_min_ratio(j, est, solver_value);
  } else {
    require(o.problem == "mis", "estimate: --problem must be mps or mis");
    const MISOracle oracle = auto_mis_oracle(o.weighted);
    est = boosted_mis_estimate(s, o.b, oracle, o.eps, o.weighted, o.trials, o.c.seed, &stats);
    const ISolution full = mis_rects(s, o.b, oracle);
    solver_value = full.value;
    vr = check_independent(s, full.ids);
    put_max_ratio(j, est, solver_value);
  }
  j["value"] = est;
  j["oracle_value"] = solver_value;
  j["ratio_kind"] = "vs-solver";
  put_validation(j, vr);
  counters["bound_B"] = stats.B;
  counters["terms"] = stats.terms;
  counters["levels"] = stats.levels;
  counters["samples"] = stats.samples;
  counters["evaluations"] = stats.evaluations;
  counters["trials"] = stats.trials;
  j["counters"] = counters;
  return emit_report(o.c, j, vr.ok, elapsed_ms(t0), out, err);
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

struct OracleOpts {
  CommonOpts c;
  std::string op;
  bool weighted = false;
  bool bipartite = false;
  size_t cap = 0;
};

int run_oracle(const OracleOpts& o, std::ostream& out, std::ostream& err) {
  json j;
  j["problem"] = "oracle-" + o.op;
  j["seed"] = o.c.seed;
  const auto t0 = Clock::now();
  const ObjectSet s = read_instance_file(o.c.input);
  j["n"] = s.size();

  ValidationResult vr;
  if (o.op == "mps") {
    PiercingSolution sol;
    if (!o.c.stub) sol = exact_mps(s, o.cap ? o.cap : 20, o.cap ? o.cap : 16);
    vr = check_piercing(s, sol.points);
    if (o.c.stub && s.empty()) vr = {false, "infeasible stub"};
    j["value"] = sol.points.size();
  } else if (o.op == "mis") {
    ISolution sol;
    if (o.c.stub)
      sol.ids = {absent_id(s)};
    else
      sol = exact_mis(s, o.weighted, o.cap ? o.cap : 40);
    vr = check_independent(s, sol.ids);
    j["value"] = sol.value;
  } else if (o.op == "vc") {
    VCSolution sol;
    if (o.c.stub)
      sol.ids = {absent_id(s)};
    else
      sol = exact_vc(s, o.cap ? o.cap : 40);
    vr = check_vertex_cover(s, sol.ids);
    j["value"] = sol.value();
  } else if (o.op == "fvc") {
    if (o.c.stub) {
      j["value"] = -1.0;
      vr = {false, "infeasible stub"};
    } else {
      j["value"] = exact_fractional_vc(s, o.cap ? o.cap : 12);
      vr = {true, ""};
    }
  } else {
    require(o.op == "mcm", "oracle: --op must be mps, mis, vc, fvc, or mcm");
    Matching sol;
    if (o.c.stub) {
      const int64_t ghost = absent_id(s);
      sol.pairs = {{ghost, ghost + 1}};
    } else {
      sol = exact_mcm(s, o.bipartite, o.cap);
    }
    vr = check_matching(s, sol.pairs, o.bipartite);
    j["value"] = sol.value();
  }
  put_validation(j, vr);
  return emit_report(o.c, j, vr.ok, elapsed_ms(t0), out, err);
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchOpts {
  std::string config;
  std::string out_dir;
};

int run_bench(const BenchOpts& o, std::ostream& out, std::ostream& err) {
  const SuiteConfig cfg = read_suite_config_file(o.config);
  const Report rep = run_suite(cfg);
  fs::create_directories(o.out_dir);
  const fs::path nd_path = fs::path(o.out_dir) / "report.ndjson";
  const fs::path csv_path = fs::path(o.out_dir) / "report.csv";
  {
    std::ofstream nd(nd_path, std::ios::binary);
    if (!nd) {
      err << "error: cannot open " << nd_path.string() << "\n";
      return 1;
    }
    write_report_ndjson(nd, rep);
  }
  {
    std::ofstream cv(csv_path, std::ios::binary);
    if (!cv) {
      err << "error: cannot open " << csv_path.string() << "\n";
      return 1;
    }
    write_report_csv(cv, rep);
  }
  size_t valid = 0, errors = 0;
  for (const ReportRow& r : rep.rows) {
    if (!r.error.empty()) ++errors;
    else if (r.valid) ++valid;
  }
  out << "rows: " << rep.rows.size() << "  valid: " << valid << "  errors: " << errors << "\n"
      << "wrote " << nd_path.string() << " and " << csv_path.string() << "\n";
  return (errors == 0 && valid == rep.rows.size()) ? 0 : 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "geoapprox: approximation algorithms and dynamic structures for piercing, independent "
      "set, vertex cover, and matching over axis-aligned boxes and disks"};
  app.require_subcommand(1);

  MpsOpts mps;
  CLI::App* mps_cmd = app.add_subcommand("mps", "minimum piercing set");
  add_common(mps_cmd, mps.c);
  mps_cmd->add_option("--mode", mps.mode, "static (instance) or dynamic (update stream)")
      ->check(CLI::IsMember({"static", "dynamic"}))
      ->capture_default_str();
  mps_cmd->add_option("--family", mps.family, "box: partition-tree solver; fat: shifted quadtree pipeline for fat objects")
      ->check(CLI::IsMember({"box", "fat"}))
      ->capture_default_str();
  mps_cmd->add_option("--b", mps.b, "tree branching parameter (>= 2)")->capture_default_str();
  mps_cmd->add_option("--oracle", mps.oracle, "leaf sub-solver: exact, greedy, or auto (exact up to a cap)")
      ->check(CLI::IsMember({"auto", "exact", "greedy"}))
      ->capture_default_str();
  mps_cmd->add_option("--c0", mps.c0, "fat-pipeline boundary-grid constant (0 = default)")
      ->capture_default_str();

  MisOpts mis;
  CLI::App* mis_cmd = app.add_subcommand("mis", "maximum independent set");
  add_common(mis_cmd, mis.c);
  mis_cmd->add_option("--mode", mis.mode, "static (instance) or dynamic (update stream)")
      ->check(CLI::IsMember({"static", "dynamic"}))
      ->capture_default_str();
  mis_cmd->add_option("--family", mis.family,
                      "rect: planar level tuning; box: per-axis recursion; fat: quadtree pipeline")
      ->check(CLI::IsMember({"rect", "box", "fat"}))
      ->capture_default_str();
  mis_cmd->add_flag("--weighted", mis.weighted, "maximize total weight instead of cardinality");
  mis_cmd->add_option("--b", mis.b, "tree branching parameter (>= 2)")->capture_default_str();
  mis_cmd->add_option("--c0", mis.c0, "fat-pipeline boundary-grid constant (0 = default)")
      ->capture_default_str();

  VcOpts vc;
  CLI::App* vc_cmd = app.add_subcommand("vc", "minimum vertex cover of the intersection graph");
  add_common(vc_cmd, vc.c);
  vc_cmd->add_option("--mode", vc.mode, "static (instance) or dynamic (update stream)")
      ->check(CLI::IsMember({"static", "dynamic"}))
      ->capture_default_str();
  vc_cmd->add_option("--family", vc.family,
                     "inner promise solver: disk/fatbox (separator recursion), rect (sweep + "
                     "planar inner), bipartite-disk/bipartite-box (smaller color side)")
      ->check(CLI::IsMember({"disk", "rect", "fatbox", "bipartite-disk", "bipartite-box"}))
      ->capture_default_str();
  vc_cmd->add_option("--eps", vc.eps, "promise-solver accuracy")->capture_default_str();
  vc_cmd->add_option("--gamma", vc.gamma, "kernel threshold (kernel_delta < gamma < 1/4)")
      ->capture_default_str();
  vc_cmd->add_option("--delta", vc.delta, "multiplicative-weights accuracy in (0, 1/4]")
      ->capture_default_str();
  vc_cmd->add_option("--kernel-delta", vc.kernel_delta, "kernel split margin (0 < kernel_delta < gamma)")
      ->capture_default_str();

  McmOpts mcm;
  CLI::App* mcm_cmd = app.add_subcommand("mcm", "maximum-cardinality matching");
  add_common(mcm_cmd, mcm.c);
  mcm_cmd->add_option("--mode", mcm.mode, "static (instance) or dynamic (update stream)")
      ->check(CLI::IsMember({"static", "dynamic"}))
      ->capture_default_str();
  CLI::Option* bip_flag =
      mcm_cmd->add_flag("--bipartite", mcm.bipartite, "match only across the two color classes");
  CLI::Option* gen_flag =
      mcm_cmd->add_flag("--general", mcm.general, "match any intersecting pair");
  bip_flag->excludes(gen_flag);
  gen_flag->excludes(bip_flag);
  mcm_cmd->add_option("--eps", mcm.eps, "approximation slack (matching >= (1-2eps) optimum)")
      ->capture_default_str();

  EstimateOpts est;
  CLI::App* est_cmd = app.add_subcommand(
      "estimate", "sampling estimate of a solver's value without running every subproblem");
  add_common(est_cmd, est.c);
  est_cmd->add_option("--problem", est.problem, "mps or mis")
      ->check(CLI::IsMember({"mps", "mis"}))
      ->required();
  est_cmd->add_option("--eps", est.eps, "relative accuracy of each trial")->capture_default_str();
  est_cmd->add_option("--trials", est.trials, "median-boost repetitions (odd)")
      ->capture_default_str();
  est_cmd->add_option("--b", est.b, "tree branching parameter (>= 2)")->capture_default_str();
  est_cmd->add_flag("--weighted", est.weighted, "estimate the weighted independent-set value");

  OracleOpts orc;
  CLI::App* orc_cmd = app.add_subcommand("oracle", "exact brute-force reference solvers");
  add_common(orc_cmd, orc.c);
  orc_cmd->add_option("--op", orc.op, "mps, mis, vc, fvc (fractional cover value), or mcm")
      ->check(CLI::IsMember({"mps", "mis", "vc", "fvc", "mcm"}))
      ->required();
  orc_cmd->add_flag("--weighted", orc.weighted, "weighted independent set (op mis)");
  orc_cmd->add_flag("--bipartite", orc.bipartite, "bipartite matching (op mcm)");
  orc_cmd->add_option("--cap", orc.cap, "instance-size cap override (0 = oracle default)")
      ->capture_default_str();

  BenchOpts bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "run an experiment suite from a config file");
  bench_cmd->add_option("--config", bench.config, "newline-delimited JSON suite config")
      ->required();
  bench_cmd->add_option("--out", bench.out_dir,
                        "output directory for report.ndjson and report.csv (created if missing)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (app.got_subcommand(mps_cmd)) return run_mps(mps, out, err);
    if (app.got_subcommand(mis_cmd)) return run_mis(mis, out, err);
    if (app.got_subcommand(vc_cmd)) return run_vc(vc, out, err);
    if (app.got_subcommand(mcm_cmd)) return run_mcm(mcm, out, err);
    if (app.got_subcommand(est_cmd)) return run_estimate(est, out, err);
    if (app.got_subcommand(orc_cmd)) return run_oracle(orc, out, err);
    if (app.got_subcommand(bench_cmd)) return run_bench(bench, out, err);
    err << "error: no subcommand selected\n";
    return 1;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace geo
