#pragma once

// Discrete operators on the primal and staggered complexes.
//
// Reconstruction bases on an element with reference coordinates (xi, eta):
//   primal u-flux      h_k(xi)  e_l(eta) * 2/hy        (GLL nodal x GLL edge)
//   primal v-flux      e_k(xi)  h_l(eta) * 2/hx
//   primal density     e_k(xi)  e_l(eta) * 4/(hx hy)
//   staggered (direction w, "along" = w):
//     along-normal flux   h~_k(a) e_l(b) * 2/h_b     (extended-Gauss nodal x GLL edge)
//     across-normal flux  e~_k(a) h_l(b) * 2/h_a
//     density             e~_k(a) e_l(b) * 4/(h_a h_b)
//
// Momentum rows are built from three flux cochains on the staggered surfaces:
//   M11 F = C(v) m                 convective flux, m = Pm u
//   M11 T = K m + b_T              viscous traction, K = -nu D21~^T M22
//   H     = Pp p + b_P             pressure force
// and the balance of a staggered volume is  G (F + H - T) = 0  with
// G = gather * D21~.

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "mimetic/mesh_topology.hpp"
#include "mimetic/poly_basis.hpp"

namespace mimetic {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;
using ScalarField = std::function<double(double, double)>;
using VectorField = std::function<std::array<double, 2>(double, double)>;

enum class Space {
  primal_point,
  primal_edge,
  primal_cell,
  staggered_cell,
  staggered_surface,
};

/// Integral values attached to the oriented entities of one space.
struct Cochain {
  Vector values;
  Space space = Space::primal_edge;
  Axis direction = Axis::x;  // only meaningful for staggered spaces
  const GridComplex* grid = nullptr;
};

/// Entity count of a space.
int space_size(const GridComplex& grid, Space space, Axis w = Axis::x);

// --- reduction: integrate analytic fields over oriented entities -----------

/// Number of Gauss points per direction used when integrating analytic data.
/// Fields are generally not polynomial, so this is well above the assembly rule.
inline constexpr int kReductionPoints = 24;

Cochain reduce_points(const GridComplex& grid, const ScalarField& f);
/// Flux of v through every primal edge.
Cochain reduce_flux(const GridComplex& grid, const VectorField& v);
/// Integral of a density over every primal cell.
Cochain reduce_density(const GridComplex& grid, const ScalarField& f);
/// Integral of a density over every staggered cell of direction w.
Cochain reduce_staggered_density(const GridComplex& grid, Axis w, const ScalarField& f);
/// Flux of q (physical x/y components) through every staggered surface of direction w.
Cochain reduce_staggered_flux(const GridComplex& grid, Axis w, const VectorField& q);

// --- reconstruction ---------------------------------------------------------

/// Scalar value of a point, cell or staggered-cell cochain at (x, y).
double reconstruct_scalar(const Cochain& c, double x, double y);
/// Vector value (x/y components) of an edge or staggered-surface cochain at (x, y).
std::array<double, 2> reconstruct_vector(const Cochain& c, double x, double y);

// --- reference-element tables ----------------------------------------------

/// Gauss points per direction for element assembly: max(p + 2, ceil((3p + 2) / 2)).
/// The convection integrand (velocity x surface basis x density basis) has
/// degree 3p + 1 per direction; this rule integrates it exactly.
int default_quadrature_points(int order);

/// 1D bases and quadrature shared by all element assembly loops.
struct ElementBasis {
  /// quadrature_points = 0 picks default_quadrature_points(order).
  explicit ElementBasis(int order, int quadrature_points = 0);

  int order;
  Basis1D gll;
  Basis1D egauss;
  NodeSet quad;

  // Tabulated at quad nodes: [q][i].
  std::vector<std::vector<double>> gll_h, gll_e, eg_h, eg_e;
};

// --- operators ---------------------------------------------------------------

struct MassMatrices {
  SparseMatrix m11;  // staggered surfaces
  SparseMatrix m22;  // staggered cells
};

/// Galerkin mass matrices of the staggered complex of direction w.
MassMatrices staggered_mass_matrices(const GridComplex& grid, const ElementBasis& basis, Axis w);
/// Galerkin mass matrix of the primal edge (flux) basis.
SparseMatrix primal_edge_mass(const GridComplex& grid, const ElementBasis& basis);

/// Primal edge fluxes -> staggered-cell momentum of direction w.
SparseMatrix momentum_projection(const GridComplex& grid, const ElementBasis& basis, Axis w);

struct PressureForce {
  SparseMatrix pp;  // primal cells -> staggered surfaces
  Vector bp;        // boundary pressure contribution (zero where no data)
};

/// Pressure force i_w p on staggered surfaces. When boundary pressure data is
/// given, boundary surfaces take it from the data instead of the interior field.
PressureForce pressure_force(const GridComplex& grid, const ElementBasis& basis, Axis w,
                             const std::optional<ScalarField>& boundary_pressure = std::nullopt);

struct DiffusionOperator {
  SparseMatrix k;  // -nu D21~^T M22 : staggered cells -> surfaces
  Vector bt;       // nu * boundary functional of the prescribed velocity
};

/// Viscous traction weak form. `boundary_velocity` supplies the velocity on
/// the domain boundary; only its w-component enters. Throws on nu <= 0.
DiffusionOperator diffusive_operator(const GridComplex& grid, const ElementBasis& basis, Axis w, double nu,
                                     const VectorField& boundary_velocity);

/// Weighted boundary integral  oint g (phi_s . n) ds  for each staggered surface basis function.
Vector boundary_functional(const GridComplex& grid, const ElementBasis& basis, Axis w, const ScalarField& g);

/// Convection matrix for transport flux cochain u_transport (primal edges):
/// C[s][c] = int psi_c (v . phi_s).
SparseMatrix convection_matrix(const GridComplex& grid, const ElementBasis& basis, Axis w,
                               const Vector& u_transport);

/// Everything that does not depend on the transport velocity.
struct DirectionalOperators {
  Axis w = Axis::x;
  MassMatrices mass;
  SparseMatrix d21;     // staggered surfaces -> cells
  SparseMatrix gather;  // cells -> volumes
  SparseMatrix balance; // gather * d21 : surfaces -> volumes
  SparseMatrix pm;
  PressureForce pressure;
  DiffusionOperator diffusion;
};

struct OperatorSet {
  const GridComplex* grid = nullptr;
  ElementBasis basis;
  double nu = 1.0;
  SparseMatrix d21;  // primal edges -> cells
  SparseMatrix m1;   // primal edges
  std::array<DirectionalOperators, 2> dir;

  const DirectionalOperators& operator[](Axis w) const { return dir[index(w)]; }
};

struct OperatorOptions {
  double nu = 1.0;
  int quadrature_points = 0;  // 0 -> default_quadrature_points(p)
  VectorField boundary_velocity = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
  std::optional<ScalarField> boundary_pressure;
};

OperatorSet assemble_operators(const GridComplex& grid, const OperatorOptions& options);

/// Coordinate-format dump: one "row col value" line per stored entry.
void write_matrix_coo(std::ostream& out, const SparseMatrix& m);

}  // namespace mimetic
