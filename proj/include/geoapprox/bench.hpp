#pragma once
// Instance and update-stream generation, experiment orchestration, ratio
// measurement against the exact oracles, and report emission.
//
// Everything here is reproducible: all randomness derives from the seeds in
// the specs, so the same configuration produces byte-identical instances,
// streams, and (with timing disabled) reports.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geoapprox/geom.hpp"
#include "geoapprox/io.hpp"
#include "geoapprox/mps.hpp"

namespace geo {

// Deterministic instance generator.  Families:
//   "uniform-boxes"  boxes with uniform centers in [0,extent]^dimension and
//                    side lengths in [s_min,s_max], per-box aspect ratio
//                    capped by aspect_max
//   "stabbed-boxes"  like uniform-boxes but every box is forced to contain at
//                    least one line, per axis, of a pre-picked grid
//                    (grid_lines lines per axis; see stabbing_grid_for)
//   "disks"          uniform centers, diameters in [s_min,s_max]
//   "bichromatic-strips"
//                    planar boxes whose intersection graph is guaranteed
//                    bipartite: color-A objects are vertical strips drawn in
//                    disjoint x slots, color-B objects horizontal strips in
//                    disjoint y slots, so same-color objects never touch
//                    while cross-color pairs cross at random.  n sets the
//                    per-color slot count; streams recycle a deleted
//                    object's slot, so the invariant holds at every prefix.
//                    color_mix is the probability of drawing a vertical
//                    strip (0 means an even split).
// color_mix > 0 colors each object A with that probability and B otherwise;
// color_mix == 0 leaves objects uncolored.  Weights are uniform in
// [w_min,w_max].  Object ids are 1..n.
struct GeneratorSpec {
  std::string family = "uniform-boxes";
  size_t n = 0;
  int dimension = 2;
  double s_min = 0.3;
  double s_max = 1.5;
  double aspect_max = 4.0;
  double extent = 10.0;
  double color_mix = 0.0;
  double w_min = 1.0;
  double w_max = 1.0;
  size_t grid_lines = 3;
  uint64_t seed = 1;
};

ObjectSet generate(const GeneratorSpec& spec);

// The grid the "stabbed-boxes" family stabs its output with; every generated
// box contains at least one of these lines on every axis.
StabbingGrid stabbing_grid_for(const GeneratorSpec& spec);

// Update-stream generator over the same object distribution.
//   window > 0   sliding window: inserts until `window` objects are live,
//                then alternates deleting the oldest live object with fresh
//                inserts, so the live set never exceeds `window`
//   window == 0  random churn: each op deletes a uniform live object with
//                probability `churn` (when any is live) and inserts otherwise
// Checkpoints fall after every `checkpoint_every` ops (0 = none) and always
// after the final op.  Deletes always reference live ids.
UpdateStream generate_stream(const GeneratorSpec& spec, size_t ops, double churn,
                             size_t window = 0, size_t checkpoint_every = 50);

// One experiment row.  `valid` is always the verdict of the matching
// validator run on the produced witness, never assumed.  For minimization
// problems ratio = value / oracle_value; for maximization problems
// ratio = oracle_value / value (so good ratios are always >= 1 and close
// to 1).  ratio_kind records what the reference value is:
//   "vs-exact"        exact optimum
//   "vs-upper-bound"  feasible-but-possibly-suboptimal reference (disk
//                     piercing oracle)
//   "vs-solver"       full solver output (value estimators)
// Rows that fail carry the failure text in `error` and no value.
struct ReportRow {
  std::string name;
  std::string problem;
  std::string algorithm;
  std::string instance;
  std::string params;
  std::optional<double> value;
  std::optional<double> oracle_value;
  std::optional<double> ratio;
  std::string ratio_kind;
  bool valid = false;
  std::string error;
  double wall_ms = 0.0;
  std::map<std::string, double> counters;
};

struct Report {
  std::vector<ReportRow> rows;
};

void write_report_ndjson(std::ostream& out, const Report& report);
void write_report_csv(std::ostream& out, const Report& report);

// One suite job: a (problem, algorithm) pair applied to a generated instance
// or update stream.  Algorithms prefixed "dyn-" replay a stream generated
// from `instance` with the stream settings; all others solve the static
// instance.  Supported pairs:
//   mps:      tree | fat | dyn-tree
//   mis:      tree | highdim | fat | dyn-tree | dyn-fat
//   vc:       kernel-rect | kernel-fat | kernel-bipartite
//             | dyn-rect | dyn-fat | dyn-bipartite
//   mcm:      bipartite | general | dyn-bipartite | dyn-general
//   estimate: mps | mis
struct SuiteJob {
  std::string name;
  std::string problem;
  std::string algorithm;
  GeneratorSpec instance;
  // stream settings, used by dyn- algorithms
  size_t stream_ops = 200;
  double churn = 0.3;
  size_t window = 0;
  size_t checkpoint_every = 25;
  // solver parameters
  int64_t b = 4;             // tree fan-out
  double eps = 0.25;         // accuracy knob of approximate solvers
  double delta = 0.1;        // multiplicative-weights accuracy
  double kernel_delta = 0.01;  // kernel threshold split, must stay < gamma
  double gamma = 0.1;        // kernel threshold
  size_t trials = 15;        // estimator boosting repetitions
  bool weighted = false;     // weighted independent set / estimator mode
  size_t oracle_cap = 0;     // 0 = per-problem default; bigger instances skip ratios
  uint64_t seed = 1;         // solver-side randomness (matching families, estimators)
};

struct SuiteConfig {
  std::vector<SuiteJob> jobs;
  size_t workers = 1;
  bool timing = true;  // false zeroes wall_ms so reruns are byte-identical
};

// Config file: newline-delimited JSON.  {"kind":"options",...} sets workers
// and timing; {"kind":"job",...} appends a job, with the instance spec under
// "instance" and stream settings under "stream".  Unknown keys or malformed
// records raise IoError with the line number.
SuiteConfig read_suite_config(std::istream& in);
SuiteConfig read_suite_config_file(const std::string& path);

// Runs every job (worker pool of cfg.workers threads, one row per job, rows
// in job order).  A job that throws records its error and the suite
// continues.  Every ratio's reference value is computed during this call.
// Dynamic rows validate the served solution at every checkpoint and also run
// the static counterpart on the final live set, requiring both witnesses to
// pass validation.
Report run_suite(const SuiteConfig& cfg);

}  // namespace geo
