#pragma once

// Exact solutions, error norms, convergence studies and the cavity benchmark.

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mimetic/mesh_topology.hpp"
#include "mimetic/mimetic_operators.hpp"
#include "mimetic/ns_solver.hpp"

namespace mimetic {

// --- Kovasznay flow ------------------------------------------------------------

struct KovasznayParams {
  double nu = 1.0 / 40.0;
  double lambda = 0.0;

  static KovasznayParams from_viscosity(double nu);
};

/// lambda = 1/(2 nu) - sqrt(1/(4 nu^2) + 4 pi^2), evaluated in T.
template <class T>
T kovasznay_lambda(T nu) {
  const T pi = std::numbers::pi_v<T>;
  return T(1) / (T(2) * nu) - std::sqrt(T(1) / (T(4) * nu * nu) + T(4) * pi * pi);
}

/// (u, v, p). Templated so tests can evaluate in extended precision.
template <class T>
std::array<T, 3> kovasznay_exact(T x, T y, const KovasznayParams& prm) {
  const T pi = std::numbers::pi_v<T>;
  const T lam = kovasznay_lambda<T>(static_cast<T>(prm.nu));
  const T ex = std::exp(lam * x);
  return {T(1) - ex * std::cos(T(2) * pi * y), lam / (T(2) * pi) * ex * std::sin(T(2) * pi * y),
          T(0.5) * (T(1) - std::exp(T(2) * lam * x))};
}

/// [-0.5, 1] x [-0.5, 1.5].
DomainSpec kovasznay_domain(int nel_x, int nel_y, int order);
BoundaryCondition kovasznay_boundary(const KovasznayParams& prm);
VectorField kovasznay_velocity(const KovasznayParams& prm);
ScalarField kovasznay_pressure(const KovasznayParams& prm);

// --- error norms -----------------------------------------------------------------

struct ErrorNorms {
  double velocity = 0.0;
  double pressure = 0.0;
};

/// L2 norms of reconstructed minus exact fields, max(p+3, kReductionPoints)^2
/// Gauss points per element. The pressure error is taken after removing the mean difference.
ErrorNorms l2_error(const Cochain& u, const Cochain& p, const VectorField& exact_velocity,
                    const ScalarField& exact_pressure);
ErrorNorms l2_error(const FlowState& state, const VectorField& exact_velocity, const ScalarField& exact_pressure);

// --- convergence studies ---------------------------------------------------------

struct SweepEntry {
  int nel_x = 1;
  int nel_y = 1;
  int order = 1;
};

struct ConvergenceRow {
  int nel_x = 0;
  int nel_y = 0;
  int order = 0;
  int dofs = 0;
  double err_v = 0.0;
  double err_p = 0.0;
  std::optional<double> rate_v;
  std::optional<double> rate_p;
  double seconds = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string failure;  // non-empty when the solve threw
};

struct ConvergenceReport {
  std::string case_name;
  std::vector<ConvergenceRow> rows;
};

/// Pairwise rates log(e1/e2)/log(h1/h2) between consecutive rows of equal
/// order and different mesh size. Other rows keep empty rates.
void compute_rates(ConvergenceReport& report);

/// Least-squares slope of log(err_v) against log(h) over all rows.
double best_fit_rate(const ConvergenceReport& report);

/// One Kovasznay solve per entry. Non-converged or failed rows are flagged and
/// the study continues. Throws std::invalid_argument on an empty sweep.
ConvergenceReport run_convergence(const std::vector<SweepEntry>& sweep, const KovasznayParams& prm,
                                  const SolverConfig& base);

// --- cavity benchmark ------------------------------------------------------------

struct CavityReference {
  std::string source;  // header comment lines
  std::vector<std::pair<double, double>> u_vertical;    // (y, u(0.5, y))
  std::vector<std::pair<double, double>> v_horizontal;  // (x, v(x, 0.5))
  std::uint64_t checksum = 0;
};

/// FNV-1a over the raw bytes.
std::uint64_t fnv1a(const std::string& bytes);

/// Checksum of the shipped data file.
inline constexpr std::uint64_t kCavityReferenceChecksum = 0x0d4c908096b85d4cULL;

/// Default path of the shipped reference data.
std::string default_cavity_reference_path();

/// Parses the reference file. With verify_checksum, a file whose bytes differ
/// from the shipped one is rejected. Throws std::runtime_error on I/O or format errors.
CavityReference load_cavity_reference(const std::string& path, bool verify_checksum = true);

struct CenterlineSample {
  double coordinate = 0.0;
  double computed = 0.0;
  double reference = 0.0;
};

struct CavityResult {
  std::shared_ptr<const GridComplex> grid;
  FlowState state;
  std::vector<CenterlineSample> u_vertical;
  std::vector<CenterlineSample> v_horizontal;
  double max_deviation = 0.0;
  double rms_deviation = 0.0;
  double seconds = 0.0;
};

struct CavityOptions {
  double re = 1000.0;
  int nel_x = 4;
  int nel_y = 4;
  int order = 6;
  double lid_velocity = -1.0;
  SolverConfig solver;  // nu is overwritten with 1/re
};

BoundaryCondition cavity_boundary(double lid_velocity);

/// Solves the unit-square cavity and compares centerlines with `ref`. Points on
/// the boundary take the boundary data. Throws SolverError when Picard does not converge.
CavityResult run_cavity(const CavityOptions& opt, const CavityReference& ref);

// --- streamfunction --------------------------------------------------------------

enum class StreamPath {
  x_then_y,  // along the bottom row, then up each column
  y_then_x,  // up the left column, then along each row
};

/// Point cochain psi with psi = 0 at the lower-left corner, integrated from the
/// edge fluxes (u-edge = psi(top) - psi(bottom), v-edge = psi(left) - psi(right)).
/// Throws std::domain_error when ||D21 u||_inf > 1e-8 ||u||_inf.
Cochain streamfunction(const Cochain& u, StreamPath path = StreamPath::x_then_y);

}  // namespace mimetic
