#pragma once

// Steady incompressible Navier-Stokes on the mimetic complex.
//
// Unknowns of the linear system, in order:
//   u    primal edge fluxes (boundary normal fluxes pinned by identity rows)
//   p    primal cell pressure integrals
//   Q_x  staggered surface flux F - T for x-momentum
//   Q_y  staggered surface flux F - T for y-momentum
//   lam  gauge multiplier (appended by fix_pressure_gauge)
// Rows: one momentum balance per interior staggered volume (sharing the index
// of its primal edge), one continuity row per primal cell, the Galerkin rows
// M11 Q = (C - K) Pm u - b_T per staggered surface, and the gauge row.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mimetic/mesh_topology.hpp"
#include "mimetic/mimetic_operators.hpp"

namespace mimetic {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundaryCondition {
  /// Velocity on the boundary. The normal component is imposed strongly on the
  /// boundary edge fluxes; the tangential component enters weakly through b_T.
  VectorField velocity = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
  /// Optional boundary pressure, feeding b_P.
  std::optional<ScalarField> pressure;
};

enum class LinearSolver { sparse_lu };

struct SolverConfig {
  double tolerance = 1e-10;  // on ||du||_inf / ||u||_inf
  int max_iterations = 200;
  double relaxation = 0.7;   // theta in (0, 1]
  double nu = 1.0;
  LinearSolver linear_solver = LinearSolver::sparse_lu;
  bool convection = true;    // false: Stokes
  int quadrature_points = 0; // 0 -> default_quadrature_points(p)

  void validate() const;
};

struct FlowState {
  Cochain u;                  // primal edge fluxes
  Cochain p;                  // primal cell pressure integrals
  std::array<Cochain, 2> m;   // staggered cell momentum, m_w = Pm_w u
  std::vector<double> residual_history;    // Picard update norms
  std::vector<double> continuity_history;  // ||D21 u||_inf / ||u||_inf per iterate
  int iterations = 0;
  bool converged = false;
};

struct SystemLayout {
  int edges = 0;
  int cells = 0;
  std::array<int, 2> q_offset{};
  std::array<int, 2> q_size{};
  int gauge = -1;  // index of the multiplier, -1 before fix_pressure_gauge
  int size = 0;

  int p_offset() const { return edges; }
  /// Velocity fluxes, pressures and the gauge multiplier.
  int primary_unknowns() const { return edges + cells + 1; }
};

struct SteadySystem {
  SparseMatrix matrix;
  Vector rhs;
  SystemLayout layout;
};

/// Boundary edge fluxes of the prescribed velocity (zero on interior edges).
/// Throws SolverError when the net boundary flux is not zero.
Vector boundary_flux_data(const GridComplex& grid, const BoundaryCondition& bc);

/// Linearized steady system for a frozen transport field, without the gauge.
SteadySystem assemble_steady_system(const OperatorSet& ops, const Vector& u_transport, const Vector& boundary_flux,
                                    bool convection = true);

/// Appends the zero-mean pressure constraint and its multiplier column.
SteadySystem fix_pressure_gauge(SteadySystem system);

/// Factorizes and solves; throws SolverError on a singular matrix.
Vector solve_linear(const SteadySystem& system);

OperatorSet assemble_operators(const GridComplex& grid, const BoundaryCondition& bc, const SolverConfig& config);

/// Picard iteration from a Stokes initial iterate. Continuity is part of every
/// linear solve. A run that hits max_iterations returns the last state with
/// converged = false.
FlowState solve_steady(const GridComplex& grid, const OperatorSet& ops, const BoundaryCondition& bc,
                       const SolverConfig& config);
FlowState solve_steady(const GridComplex& grid, const BoundaryCondition& bc, const SolverConfig& config);

/// Builds a state (momentum filled in) from flux and pressure cochains.
FlowState make_state(const OperatorSet& ops, const Vector& u, const Vector& p);

struct MomentumResidual {
  std::array<Vector, 2> residual;  // per staggered volume: balance (F + H - T)
  std::array<Vector, 2> scale;     // per volume: sum of |balance| * (|F| + |H| + |T|)
  std::array<Vector, 2> f, h, t;   // surface fluxes
  std::array<std::vector<std::uint8_t>, 2> interior;  // volume not pinned by a normal-velocity BC

  /// max |residual| / max scale over interior volumes of both directions.
  double max_relative_interior() const;
};

/// Momentum balance of a state, transport taken from the state itself.
MomentumResidual momentum_residual(const FlowState& state, const OperatorSet& ops);

}  // namespace mimetic
