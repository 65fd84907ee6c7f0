#pragma once

// Run configuration, command-line parsing and result files.
//
// Config files are flat `key = value` text with `#` comments. Precedence is
// command-line flag > config file > built-in default.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mimetic/mesh_topology.hpp"
#include "mimetic/ns_solver.hpp"
#include "mimetic/verification.hpp"

namespace mimetic {

enum class ExitCode : int { ok = 0, usage = 1, solver = 2, io = 3 };

/// Bad command line or config; carries the text to print.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `--help`: print the text and exit successfully.
class HelpRequested : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Unwritable output or unreadable input.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { run, convergence, cavity_bench };
enum class CaseName { kovasznay, cavity, custom };

const char* command_name(Command c);
const char* case_label(CaseName c);
std::optional<CaseName> parse_case(const std::string& s);

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "MIMETIC_OUT_DIR";

struct RunConfig {
  Command command = Command::run;
  std::optional<CaseName> case_name;

  int nel_x = 2;
  int nel_y = 2;
  int order = 4;
  double nu = 1.0 / 40.0;
  std::optional<double> re;  // cavity: nu = 1/re

  // custom case: uniform flow (velocity) over an arbitrary box
  Interval x_range{0.0, 1.0};
  Interval y_range{0.0, 1.0};
  double velocity_x = 1.0;
  double velocity_y = 0.0;

  double tolerance = 1e-10;
  int max_iterations = 200;
  double relaxation = 0.7;

  // convergence sweeps: every order against the nel list, or every nel at --order
  std::vector<int> orders;
  std::vector<int> nels;

  std::string out_dir = "out";
  int lattice = 101;
  bool timing = true;  // false: blank timing columns for byte-stable output

  void validate() const;
  /// Case resolved against the command (cavity-bench implies cavity).
  CaseName effective_case() const;
  /// Viscosity actually used: 1/re when re is set.
  double viscosity() const;
  SolverConfig solver_config() const;
  DomainSpec domain() const;
  std::vector<SweepEntry> sweep() const;

  bool operator==(const RunConfig&) const = default;
};

/// Default config with out_dir taken from the environment when set.
RunConfig default_run_config();

std::string serialize(const RunConfig& config);
/// Applies `key = value` lines onto `base`. Throws UsageError on unknown keys or bad values.
RunConfig parse_config_text(const std::string& text, RunConfig base = default_run_config());
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = default_run_config());

/// argv[0] is the program name. Throws UsageError with help text on bad
/// input and HelpRequested for `--help`.
RunConfig parse_cli(int argc, const char* const* argv);

/// Usage text for the program.
std::string usage_text();

// --- output ------------------------------------------------------------------------

/// Writes into `dir`:
///   fields.csv      x,y,u,v,p,psi on a lattice x lattice uniform grid
///   fields.vtk      the same lattice as legacy VTK structured points
///   edges.csv       primal edge flux cochain
///   cells.csv       primal cell pressure cochain
///   points.csv      streamfunction point cochain
/// Throws IoError when the directory cannot be written.
std::vector<std::filesystem::path> write_fields(const FlowState& state, const std::filesystem::path& dir,
                                                int lattice = 101);

/// convergence.csv with header nel_x,nel_y,p,dofs,err_v,err_p,rate_v,rate_p,seconds.
/// Undefined rates and (with timing off) seconds are left blank. Throws
/// std::invalid_argument on an empty report, IoError on write failure.
std::filesystem::path write_convergence(const ConvergenceReport& report, const std::filesystem::path& dir,
                                        bool timing = true);

/// cavity_centerlines.csv: line,coordinate,computed,reference,deviation.
std::filesystem::path write_centerlines(const CavityResult& result, const std::filesystem::path& dir);

/// Runs a parsed configuration; returns the process exit code.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_cli + execute with exit-code mapping.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mimetic
