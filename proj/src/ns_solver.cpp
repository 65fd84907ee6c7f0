#include "mimetic/ns_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace mimetic {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void append(Triplets& t, const SparseMatrix& m, int row0, int col0, double scale = 1.0) {
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m, c); it; ++it)
      t.emplace_back(row0 + static_cast<int>(it.row()), col0 + static_cast<int>(it.col()), scale * it.value());
}

double inf_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

double relative_divergence(const SparseMatrix& d21, const Vector& u) {
  const double nu = inf_norm(u);
  const double nd = inf_norm(d21 * u);
  return nu > 0.0 ? nd / nu : nd;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("SolverConfig: tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("SolverConfig: max_iterations must be >= 1");
  if (!(relaxation > 0.0 && relaxation <= 1.0)) throw std::invalid_argument("SolverConfig: relaxation must lie in (0, 1]");
  if (!(nu > 0.0)) throw std::invalid_argument("SolverConfig: viscosity must be positive");
  if (quadrature_points < 0) throw std::invalid_argument("SolverConfig: quadrature_points must be >= 0");
}

Vector boundary_flux_data(const GridComplex& g, const BoundaryCondition& bc) {
  const NodeSet rule = gauss_nodes(kReductionPoints);
  auto integrate = [&](double lo, double hi, auto&& f) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * f(mid + half * rule.nodes[q]);
    return s * half;
  };
  const auto& xs = g.primal_nodes(Axis::x);
  const auto& ys = g.primal_nodes(Axis::y);
  Vector flux = Vector::Zero(g.edge_count());
  double net = 0.0, total = 0.0;
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i : {0, g.nx() - 1}) {
      const double f = integrate(ys[j], ys[j + 1], [&](double y) { return bc.velocity(xs[i], y)[0]; });
      flux[g.u_edge(i, j)] = f;
      net += i == 0 ? -f : f;
      total += std::abs(f);
    }
  for (int j : {0, g.ny() - 1})
    for (int i = 0; i + 1 < g.nx(); ++i) {
      const double f = integrate(xs[i], xs[i + 1], [&](double x) { return bc.velocity(x, ys[j])[1]; });
      flux[g.v_edge(i, j)] = f;
      net += j == 0 ? -f : f;
      total += std::abs(f);
    }
  if (std::abs(net) > 1e-10 * std::max(1.0, total)) {
    std::ostringstream msg;
    msg << "boundary data violates mass compatibility: net outflow " << net;
    throw SolverError(msg.str());
  }
  return flux;
}

SteadySystem assemble_steady_system(const OperatorSet& ops, const Vector& u_transport, const Vector& boundary_flux,
                                    bool convection) {
  const GridComplex& g = *ops.grid;
  SteadySystem sys;
  SystemLayout& L = sys.layout;
  L.edges = g.edge_count();
  L.cells = g.cell_count();
  int offset = L.edges + L.cells;
  for (Axis w : {Axis::x, Axis::y}) {
    L.q_offset[index(w)] = offset;
    L.q_size[index(w)] = g.staggered(w).surface_count();
    offset += L.q_size[index(w)];
  }
  L.size = offset;

  Triplets t;
  sys.rhs = Vector::Zero(L.size);

  std::vector<std::uint8_t> pinned(L.edges, 0);
  for (int e = 0; e < L.edges; ++e) pinned[e] = g.edge_on_boundary(e) ? 1 : 0;

  for (Axis w : {Axis::x, Axis::y}) {
    const DirectionalOperators& d = ops[w];
    const int q0 = L.q_offset[index(w)];
    const int e0 = g.normal_edge_offset(w);

    // Momentum balance rows, one per staggered volume not pinned by a BC.
    const SparseMatrix gp = d.balance * d.pressure.pp;
    const Vector gb = d.balance * d.pressure.bp;
    SparseMatrix balance_rows = d.balance;  // volumes x surfaces
    Eigen::SparseMatrix<double, Eigen::RowMajor> bal(balance_rows), gpr(gp);
    for (int v = 0; v < bal.rows(); ++v) {
      const int e = e0 + v;
      if (pinned[e]) continue;
      for (decltype(bal)::InnerIterator it(bal, v); it; ++it) t.emplace_back(e, q0 + static_cast<int>(it.col()), it.value());
      for (decltype(gpr)::InnerIterator it(gpr, v); it; ++it)
        t.emplace_back(e, L.p_offset() + static_cast<int>(it.col()), it.value());
      sys.rhs[e] = -gb[v];
    }

    // Surface flux rows: M11 Q - (C - K) Pm u = -b_T.
    append(t, d.mass.m11, q0, q0);
    SparseMatrix transport = -d.diffusion.k;
    if (convection) transport += convection_matrix(g, ops.basis, w, u_transport);
    const SparseMatrix coupling = transport * d.pm;
    append(t, coupling, q0, 0, -1.0);
    sys.rhs.segment(q0, L.q_size[index(w)]) = -d.diffusion.bt;
  }

  for (int e = 0; e < L.edges; ++e)
    if (pinned[e]) {
      t.emplace_back(e, e, 1.0);
      sys.rhs[e] = boundary_flux[e];
    }

  append(t, ops.d21, L.edges, 0);

  sys.matrix = SparseMatrix(L.size, L.size);
  sys.matrix.setFromTriplets(t.begin(), t.end());
  sys.matrix.makeCompressed();
  return sys;
}

SteadySystem fix_pressure_gauge(SteadySystem sys) {
  SystemLayout& L = sys.layout;
  if (L.gauge >= 0) return sys;
  const int n = L.size;
  Triplets t;
  t.reserve(sys.matrix.nonZeros() + 2 * L.cells);
  append(t, sys.matrix, 0, 0);
  for (int c = 0; c < L.cells; ++c) {
    t.emplace_back(L.edges + c, n, 1.0);
    t.emplace_back(n, L.p_offset() + c, 1.0);
  }
  sys.matrix = SparseMatrix(n + 1, n + 1);
  sys.matrix.setFromTriplets(t.begin(), t.end());
  sys.matrix.makeCompressed();
  sys.rhs.conservativeResize(n + 1);
  sys.rhs[n] = 0.0;
  L.gauge = n;
  L.size = n + 1;
  return sys;
}

Vector solve_linear(const SteadySystem& sys) {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(sys.matrix);
  lu.factorize(sys.matrix);
  if (lu.info() != Eigen::Success) throw SolverError("linear system is singular: " + lu.lastErrorMessage());
  Vector x = lu.solve(sys.rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw SolverError("linear solve failed");
  return x;
}

OperatorSet assemble_operators(const GridComplex& grid, const BoundaryCondition& bc, const SolverConfig& config) {
  config.validate();
  OperatorOptions opt;
  opt.nu = config.nu;
  opt.quadrature_points = config.quadrature_points;
  opt.boundary_velocity = bc.velocity;
  opt.boundary_pressure = bc.pressure;
  return assemble_operators(grid, opt);
}

FlowState make_state(const OperatorSet& ops, const Vector& u, const Vector& p) {
  const GridComplex& g = *ops.grid;
  FlowState s;
  s.u = Cochain{u, Space::primal_edge, Axis::x, &g};
  s.p = Cochain{p, Space::primal_cell, Axis::x, &g};
  for (Axis w : {Axis::x, Axis::y}) s.m[index(w)] = Cochain{ops[w].pm * u, Space::staggered_cell, w, &g};
  return s;
}

FlowState solve_steady(const GridComplex& grid, const OperatorSet& ops, const BoundaryCondition& bc,
                       const SolverConfig& config) {
  config.validate();
  if (ops.grid != &grid) throw std::invalid_argument("solve_steady: operators were assembled on another grid");
  if (std::abs(ops.nu - config.nu) > 1e-15 * config.nu)
    throw std::invalid_argument("solve_steady: operator viscosity differs from the configuration");

  const Vector bflux = boundary_flux_data(grid, bc);
  const int ne = grid.edge_count(), nc = grid.cell_count();

  // Iterate 0: Stokes solution, divergence-free and boundary-compatible.
  Vector x = solve_linear(fix_pressure_gauge(assemble_steady_system(ops, bflux, bflux, false)));
  Vector u = x.head(ne);
  Vector p = x.segment(ne, nc);
  std::vector<double> continuity{relative_divergence(ops.d21, u)};
  std::vector<double> history;

  bool converged = !config.convection;
  int it = 0;
  const double theta = config.relaxation;
  while (!converged && it < config.max_iterations) {
    ++it;
    x = solve_linear(fix_pressure_gauge(assemble_steady_system(ops, u, bflux, true)));
    const Vector u_new = x.head(ne);
    p = x.segment(ne, nc);
    const double scale = inf_norm(u_new);
    const double delta = inf_norm(u_new - u) / (scale > 0.0 ? scale : 1.0);
    history.push_back(delta);
    if (delta <= config.tolerance) {
      u = u_new;
      converged = true;
    } else {
      u = theta * u_new + (1.0 - theta) * u;
    }
    continuity.push_back(relative_divergence(ops.d21, u));
  }

  FlowState state = make_state(ops, u, p);
  state.residual_history = std::move(history);
  state.continuity_history = std::move(continuity);
  state.iterations = it;
  state.converged = converged;
  return state;
}

FlowState solve_steady(const GridComplex& grid, const BoundaryCondition& bc, const SolverConfig& config) {
  const OperatorSet ops = assemble_operators(grid, bc, config);
  return solve_steady(grid, ops, bc, config);
}

MomentumResidual momentum_residual(const FlowState& state, const OperatorSet& ops) {
  const GridComplex& g = *ops.grid;
  MomentumResidual r;
  const Vector& u = state.u.values;
  for (Axis w : {Axis::x, Axis::y}) {
    const DirectionalOperators& d = ops[w];
    const int k = index(w);
    Eigen::SimplicialLDLT<SparseMatrix> m11(d.mass.m11);
    if (m11.info() != Eigen::Success) throw SolverError("staggered mass matrix is not positive definite");
    const Vector m = d.pm * u;
    r.f[k] = m11.solve(convection_matrix(g, ops.basis, w, u) * m);
    r.t[k] = m11.solve(d.diffusion.k * m + d.diffusion.bt);
    r.h[k] = d.pressure.pp * state.p.values + d.pressure.bp;
    r.residual[k] = d.balance * (r.f[k] + r.h[k] - r.t[k]);
    r.scale[k] = d.balance.cwiseAbs() * (r.f[k].cwiseAbs() + r.h[k].cwiseAbs() + r.t[k].cwiseAbs());
    r.interior[k].assign(d.balance.rows(), 0);
    for (int v = 0; v < d.balance.rows(); ++v) r.interior[k][v] = g.edge_on_boundary(g.normal_edge_offset(w) + v) ? 0 : 1;
  }
  return r;
}

double MomentumResidual::max_relative_interior() const {
  double num = 0.0, den = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int v = 0; v < residual[k].size(); ++v) {
      if (!interior[k][v]) continue;
      num = std::max(num, std::abs(residual[k][v]));
      den = std::max(den, scale[k][v]);
    }
  return den > 0.0 ? num / den : num;
}

}  // namespace mimetic
