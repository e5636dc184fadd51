#pragma once
// Command-line front end: one binary exposing the solvers (mps, mis, vc,
// mcm), the sampling estimators (estimate), the exact references (oracle),
// and the experiment harness (bench).  run_cli implements the whole binary
// over caller-supplied streams so tests can drive it in-process.
//
// Exit codes:
//   0  solved, and the emitted witness passed its validator
//   1  usage or I/O error (bad flags, missing files, malformed records --
//      parse errors carry the offending line number)
//   2  the emitted witness failed validation
//
// Every solve validates its witness unconditionally; --validate is accepted
// for symmetry but cannot be turned off.  --stub-infeasible swaps the solver
// for a stub whose witness references an id absent from the input, driving
// the exit-2 path end to end.
//
// Reproducibility: all randomness derives from --seed via labeled stream
// splitting, and wall_ms is reported as 0 unless --timing is given, so
// identical argv produce byte-identical reports.

#include <iosfwd>

namespace geo {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geo
