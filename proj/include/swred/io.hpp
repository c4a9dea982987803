// Serialization and report plumbing for the command-line tools.
//
// Three kinds of artifact leave a run, all text, all diffable:
//   - configurations as JSON (.cfg): grid shape plus the four complex
//     fields as [re, im] pairs in row-major order; doubles are written
//     with shortest round-trip precision, so save -> load is exact;
//   - CSV dumps: fields as  i, j, x1, x2, re, im  rows, solve traces as
//     iter, energy, r1, r2, r3a, r3b, step  rows;
//   - gnuplot grids: one  x1 x2 re im abs  line per site with a blank
//     line between grid rows, ready for splot/pm3d.
//
// RunConfig carries every knob a command accepts, each optional so three
// layers can stack: per-command defaults, then a flat "key = value"
// config file, then command-line overrides.  Unknown keys and malformed
// values are rejected up front (ConfigError), before any work starts.

#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swred/configuration.hpp"
#include "swred/solver.hpp"

namespace swred {

// Version string embedded in every machine-readable report.
std::string tool_version();

// Thrown for malformed or invalid run configuration (unknown key, bad
// value, unreadable file); maps to the usage-error exit code.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what);
};

// Exact round-trip of a configuration through JSON.
void save_configuration(const std::string& path, const Configuration& c);
Configuration load_configuration(const std::string& path);

// CSV emitters (header row included).
void write_field_csv(std::ostream& out, const ScalarField& f);
void write_trace_csv(std::ostream& out, const std::vector<SolveStep>& trace);

// Gnuplot-ready grid of one field: blocks of "x1 x2 re im abs" rows.
void write_plot_grid(std::ostream& out, const ScalarField& f);

// Every tunable a command reads.  Unset fields take per-command defaults
// at dispatch; see merge order in the file comment.
struct RunConfig {
  std::optional<int> n;
  std::optional<double> side;
  std::optional<unsigned long long> seed;
  std::optional<double> c2;
  std::optional<double> phase;
  std::optional<double> tol;
  std::optional<int> samples;
  std::optional<int> max_iters;
  std::optional<double> energy_tol;
  std::optional<double> perturb;
  std::optional<double> t;
  std::optional<int> max_mode;
  std::optional<std::string> method;
};

// Parse a flat "key = value" stream ('#' starts a comment).  Unknown keys
// and unparseable values throw ConfigError.
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

// Overlay every field set in `over` onto `base`.
void merge_run_config(RunConfig& base, const RunConfig& over);

// Range checks shared by all commands (n even and >= 4, positive side and
// tolerances, samples >= 1, ...); throws ConfigError on violation.
void validate_run_config(const RunConfig& cfg);

}  // namespace swred
