#include "mimetic/mimetic_operators.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mimetic {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
using Table = std::vector<std::vector<double>>;

const NodeSet& reduction_rule() {
  static const NodeSet rule = gauss_nodes(kReductionPoints);
  return rule;
}

template <class F>
double integrate_segment(double lo, double hi, F&& f) {
  const NodeSet& r = reduction_rule();
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double s = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * f(mid + half * r.nodes[q]);
  return s * half;
}

template <class F>
double integrate_rect(double x0, double x1, double y0, double y1, F&& f) {
  return integrate_segment(y0, y1, [&](double y) { return integrate_segment(x0, x1, [&](double x) { return f(x, y); }); });
}

// (along, across) -> (x, y)
std::array<double, 2> to_xy(Axis w, double a, double b) {
  return w == Axis::x ? std::array<double, 2>{a, b} : std::array<double, 2>{b, a};
}
// (x, y) components -> (along, across) components
std::array<double, 2> to_frame(Axis w, std::array<double, 2> v) {
  return w == Axis::x ? v : std::array<double, 2>{v[1], v[0]};
}

// Element (ea, eb) of the frame of direction w: global numbering helpers.
struct FrameElement {
  const GridComplex& g;
  Axis w;
  int ea, eb, p;
  double ha, hb;

  FrameElement(const GridComplex& grid, Axis dir, int a, int b)
      : g(grid), w(dir), ea(a), eb(b), p(grid.order()),
        ha(grid.element_size(dir)), hb(grid.element_size(other(dir))) {}

  const StaggeredComplex& sc() const { return g.staggered(w); }
  int along_surface(int k, int l) const { return sc().along_surface(ea * (p + 1) + k, eb * p + l); }
  int across_surface(int k, int l) const { return sc().across_surface(ea * (p + 1) + k, eb * p + l); }
  int cell(int k, int l) const { return sc().cell(ea * (p + 1) + k, eb * p + l); }
  int normal_edge(int k, int l) const { return g.normal_edge(w, ea * p + k, eb * p + l); }
  int tangent_edge(int k, int l) const { return g.tangent_edge(w, ea * p + k, eb * p + l); }
  int primal_cell(int k, int l) const { return g.frame_cell(w, ea * p + k, eb * p + l); }
  bool first_along() const { return ea == 0; }
  bool last_along() const { return ea == g.nel(w) - 1; }
  bool first_across() const { return eb == 0; }
  bool last_across() const { return eb == g.nel(other(w)) - 1; }
  double along_lo() const { return g.map(w, ea, -1.0); }
  double along_hi() const { return g.map(w, ea, 1.0); }
  double across_lo() const { return g.map(other(w), eb, -1.0); }
  double across_hi() const { return g.map(other(w), eb, 1.0); }
};

template <class F>
void for_each_frame_element(const GridComplex& g, Axis w, F&& f) {
  for (int eb = 0; eb < g.nel(other(w)); ++eb)
    for (int ea = 0; ea < g.nel(w); ++ea) f(FrameElement(g, w, ea, eb));
}

Table tabulate(const NodeSet& quad, int n, auto&& fn) {
  Table t(quad.size(), std::vector<double>(n));
  for (std::size_t q = 0; q < quad.size(); ++q)
    for (int i = 0; i < n; ++i) t[q][i] = fn(i, quad.nodes[q]);
  return t;
}

// Gram matrix sum_q w_q a[q][i] b[q][j].
Table gram(const NodeSet& quad, const Table& a, const Table& b) {
  const std::size_t n = a[0].size(), m = b[0].size();
  Table out(n, std::vector<double>(m, 0.0));
  for (std::size_t q = 0; q < quad.size(); ++q)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) out[i][j] += quad.weights[q] * a[q][i] * b[q][j];
  return out;
}

SparseMatrix from_triplets(int rows, int cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

void check_cochain(const Cochain& c) {
  if (c.grid == nullptr) throw std::invalid_argument("Cochain: missing grid");
  if (c.values.size() != space_size(*c.grid, c.space, c.direction))
    throw std::invalid_argument("Cochain: size does not match its space");
}

// Frame velocity (along, across) at reference point (xa, xb) of a frame element.
std::array<double, 2> frame_velocity(const FrameElement& fe, const Basis1D& gll, const Vector& u, double xa,
                                     double xb) {
  const int p = fe.p;
  const auto ha_ = gll.lagrange_all(xa), ea_ = gll.edge_all(xa);
  const auto hb_ = gll.lagrange_all(xb), eb_ = gll.edge_all(xb);
  double va = 0.0, vb = 0.0;
  for (int l = 0; l < p; ++l)
    for (int k = 0; k <= p; ++k) va += u[fe.normal_edge(k, l)] * ha_[k] * eb_[l];
  for (int l = 0; l <= p; ++l)
    for (int k = 0; k < p; ++k) vb += u[fe.tangent_edge(k, l)] * ea_[k] * hb_[l];
  return {va * 2.0 / fe.hb, vb * 2.0 / fe.ha};
}

}  // namespace

int space_size(const GridComplex& g, Space space, Axis w) {
  switch (space) {
    case Space::primal_point: return g.point_count();
    case Space::primal_edge: return g.edge_count();
    case Space::primal_cell: return g.cell_count();
    case Space::staggered_cell: return g.staggered(w).cell_count();
    case Space::staggered_surface: return g.staggered(w).surface_count();
  }
  return 0;
}

// --- reduction ----------------------------------------------------------------

Cochain reduce_points(const GridComplex& g, const ScalarField& f) {
  Cochain c{Vector(g.point_count()), Space::primal_point, Axis::x, &g};
  const auto& xs = g.primal_nodes(Axis::x);
  const auto& ys = g.primal_nodes(Axis::y);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) c.values[g.point(i, j)] = f(xs[i], ys[j]);
  return c;
}

Cochain reduce_flux(const GridComplex& g, const VectorField& v) {
  Cochain c{Vector(g.edge_count()), Space::primal_edge, Axis::x, &g};
  const auto& xs = g.primal_nodes(Axis::x);
  const auto& ys = g.primal_nodes(Axis::y);
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      c.values[g.u_edge(i, j)] = integrate_segment(ys[j], ys[j + 1], [&](double y) { return v(xs[i], y)[0]; });
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i)
      c.values[g.v_edge(i, j)] = integrate_segment(xs[i], xs[i + 1], [&](double x) { return v(x, ys[j])[1]; });
  return c;
}

Cochain reduce_density(const GridComplex& g, const ScalarField& f) {
  Cochain c{Vector(g.cell_count()), Space::primal_cell, Axis::x, &g};
  const auto& xs = g.primal_nodes(Axis::x);
  const auto& ys = g.primal_nodes(Axis::y);
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i)
      c.values[g.cell(i, j)] = integrate_rect(xs[i], xs[i + 1], ys[j], ys[j + 1], f);
  return c;
}

Cochain reduce_staggered_density(const GridComplex& g, Axis w, const ScalarField& f) {
  const StaggeredComplex& s = g.staggered(w);
  Cochain c{Vector(s.cell_count()), Space::staggered_cell, w, &g};
  const auto& A = s.along_nodes;
  const auto& B = s.across_nodes;
  for (int b = 0; b + 1 < s.n_across(); ++b)
    for (int a = 0; a + 1 < s.n_along(); ++a)
      c.values[s.cell(a, b)] = integrate_rect(A[a], A[a + 1], B[b], B[b + 1], [&](double ta, double tb) {
        const auto xy = to_xy(w, ta, tb);
        return f(xy[0], xy[1]);
      });
  return c;
}

Cochain reduce_staggered_flux(const GridComplex& g, Axis w, const VectorField& q) {
  const StaggeredComplex& s = g.staggered(w);
  Cochain c{Vector(s.surface_count()), Space::staggered_surface, w, &g};
  const auto& A = s.along_nodes;
  const auto& B = s.across_nodes;
  auto comp = [&](double ta, double tb, int which) {
    const auto xy = to_xy(w, ta, tb);
    return to_frame(w, q(xy[0], xy[1]))[which];
  };
  for (int b = 0; b + 1 < s.n_across(); ++b)
    for (int a = 0; a < s.n_along(); ++a)
      c.values[s.along_surface(a, b)] = integrate_segment(B[b], B[b + 1], [&](double tb) { return comp(A[a], tb, 0); });
  for (int b = 0; b < s.n_across(); ++b)
    for (int a = 0; a + 1 < s.n_along(); ++a)
      c.values[s.across_surface(a, b)] = integrate_segment(A[a], A[a + 1], [&](double ta) { return comp(ta, B[b], 1); });
  return c;
}

// --- reconstruction ---------------------------------------------------------------

double reconstruct_scalar(const Cochain& c, double x, double y) {
  check_cochain(c);
  const GridComplex& g = *c.grid;
  const int p = g.order();
  const Basis1D gll(g.gll());
  switch (c.space) {
    case Space::primal_point: {
      const auto [ex, xi] = g.locate(Axis::x, x);
      const auto [ey, eta] = g.locate(Axis::y, y);
      const auto hx = gll.lagrange_all(xi), hy = gll.lagrange_all(eta);
      double s = 0.0;
      for (int l = 0; l <= p; ++l)
        for (int k = 0; k <= p; ++k) s += c.values[g.point(ex * p + k, ey * p + l)] * hx[k] * hy[l];
      return s;
    }
    case Space::primal_cell: {
      const auto [ex, xi] = g.locate(Axis::x, x);
      const auto [ey, eta] = g.locate(Axis::y, y);
      const auto bx = gll.edge_all(xi), by = gll.edge_all(eta);
      double s = 0.0;
      for (int l = 0; l < p; ++l)
        for (int k = 0; k < p; ++k) s += c.values[g.cell(ex * p + k, ey * p + l)] * bx[k] * by[l];
      return s * 4.0 / (g.element_size(Axis::x) * g.element_size(Axis::y));
    }
    case Space::staggered_cell: {
      const Axis w = c.direction;
      const Basis1D eg(g.extended_gauss());
      const double ta = w == Axis::x ? x : y, tb = w == Axis::x ? y : x;
      const auto [ea, xa] = g.locate(w, ta);
      const auto [eb, xb] = g.locate(other(w), tb);
      const FrameElement fe(g, w, ea, eb);
      const auto ba = eg.edge_all(xa), bb = gll.edge_all(xb);
      double s = 0.0;
      for (int l = 0; l < p; ++l)
        for (int k = 0; k <= p; ++k) s += c.values[fe.cell(k, l)] * ba[k] * bb[l];
      return s * 4.0 / (fe.ha * fe.hb);
    }
    default: throw std::invalid_argument("reconstruct_scalar: cochain is not a scalar space");
  }
}

std::array<double, 2> reconstruct_vector(const Cochain& c, double x, double y) {
  check_cochain(c);
  const GridComplex& g = *c.grid;
  const int p = g.order();
  const Basis1D gll(g.gll());
  if (c.space == Space::primal_edge) {
    const auto [ex, xi] = g.locate(Axis::x, x);
    const auto [ey, eta] = g.locate(Axis::y, y);
    const FrameElement fe(g, Axis::x, ex, ey);
    return frame_velocity(fe, gll, c.values, xi, eta);
  }
  if (c.space == Space::staggered_surface) {
    const Axis w = c.direction;
    const Basis1D eg(g.extended_gauss());
    const double ta = w == Axis::x ? x : y, tb = w == Axis::x ? y : x;
    const auto [ea, xa] = g.locate(w, ta);
    const auto [eb, xb] = g.locate(other(w), tb);
    const FrameElement fe(g, w, ea, eb);
    const auto nha = eg.lagrange_all(xa), nea = eg.edge_all(xa);
    const auto nhb = gll.lagrange_all(xb), neb = gll.edge_all(xb);
    double qa = 0.0, qb = 0.0;
    for (int l = 0; l < p; ++l)
      for (int k = 0; k <= p + 1; ++k) qa += c.values[fe.along_surface(k, l)] * nha[k] * neb[l];
    for (int l = 0; l <= p; ++l)
      for (int k = 0; k <= p; ++k) qb += c.values[fe.across_surface(k, l)] * nea[k] * nhb[l];
    qa *= 2.0 / fe.hb;
    qb *= 2.0 / fe.ha;
    return to_frame(w, {qa, qb});  // the swap is its own inverse
  }
  throw std::invalid_argument("reconstruct_vector: cochain is not a flux space");
}

// --- element tables ---------------------------------------------------------------

int default_quadrature_points(int p) { return std::max(p + 2, (3 * p + 3) / 2); }

ElementBasis::ElementBasis(int p, int quadrature_points)
    : order(p), gll(gll_nodes(p)), egauss(extended_gauss_nodes(p)),
      quad(gauss_nodes(quadrature_points > 0 ? quadrature_points : default_quadrature_points(p))) {
  gll_h = tabulate(quad, p + 1, [&](int i, double x) { return gll.lagrange(i, x); });
  gll_e = tabulate(quad, p, [&](int i, double x) { return gll.edge(i, x); });
  eg_h = tabulate(quad, p + 2, [&](int i, double x) { return egauss.lagrange(i, x); });
  eg_e = tabulate(quad, p + 1, [&](int i, double x) { return egauss.edge(i, x); });
}

// --- mass matrices ----------------------------------------------------------------

MassMatrices staggered_mass_matrices(const GridComplex& g, const ElementBasis& eb, Axis w) {
  const int p = g.order();
  const StaggeredComplex& s = g.staggered(w);
  const Table hh_eg = gram(eb.quad, eb.eg_h, eb.eg_h);
  const Table ee_eg = gram(eb.quad, eb.eg_e, eb.eg_e);
  const Table hh_gll = gram(eb.quad, eb.gll_h, eb.gll_h);
  const Table ee_gll = gram(eb.quad, eb.gll_e, eb.gll_e);

  Triplets t11, t22;
  for_each_frame_element(g, w, [&](const FrameElement& fe) {
    const double ra = fe.ha / fe.hb, rb = fe.hb / fe.ha, r2 = 4.0 / (fe.ha * fe.hb);
    for (int l = 0; l < p; ++l)
      for (int k = 0; k <= p + 1; ++k)
        for (int l2 = 0; l2 < p; ++l2)
          for (int k2 = 0; k2 <= p + 1; ++k2)
            t11.emplace_back(fe.along_surface(k, l), fe.along_surface(k2, l2), ra * hh_eg[k][k2] * ee_gll[l][l2]);
    for (int l = 0; l <= p; ++l)
      for (int k = 0; k <= p; ++k)
        for (int l2 = 0; l2 <= p; ++l2)
          for (int k2 = 0; k2 <= p; ++k2)
            t11.emplace_back(fe.across_surface(k, l), fe.across_surface(k2, l2), rb * ee_eg[k][k2] * hh_gll[l][l2]);
    for (int l = 0; l < p; ++l)
      for (int k = 0; k <= p; ++k)
        for (int l2 = 0; l2 < p; ++l2)
          for (int k2 = 0; k2 <= p; ++k2)
            t22.emplace_back(fe.cell(k, l), fe.cell(k2, l2), r2 * ee_eg[k][k2] * ee_gll[l][l2]);
  });
  return {from_triplets(s.surface_count(), s.surface_count(), t11),
          from_triplets(s.cell_count(), s.cell_count(), t22)};
}

SparseMatrix primal_edge_mass(const GridComplex& g, const ElementBasis& eb) {
  const int p = g.order();
  const Table hh = gram(eb.quad, eb.gll_h, eb.gll_h);
  const Table ee = gram(eb.quad, eb.gll_e, eb.gll_e);
  Triplets t;
  for_each_frame_element(g, Axis::x, [&](const FrameElement& fe) {
    const double rx = fe.ha / fe.hb, ry = fe.hb / fe.ha;
    for (int l = 0; l < p; ++l)
      for (int k = 0; k <= p; ++k)
        for (int l2 = 0; l2 < p; ++l2)
          for (int k2 = 0; k2 <= p; ++k2)
            t.emplace_back(fe.normal_edge(k, l), fe.normal_edge(k2, l2), rx * hh[k][k2] * ee[l][l2]);
    for (int l = 0; l <= p; ++l)
      for (int k = 0; k < p; ++k)
        for (int l2 = 0; l2 <= p; ++l2)
          for (int k2 = 0; k2 < p; ++k2)
            t.emplace_back(fe.tangent_edge(k, l), fe.tangent_edge(k2, l2), ry * ee[k][k2] * hh[l][l2]);
  });
  return from_triplets(g.edge_count(), g.edge_count(), t);
}

// --- projections --------------------------------------------------------------------

SparseMatrix momentum_projection(const GridComplex& g, const ElementBasis& eb, Axis w) {
  const int p = g.order();
  const auto& xe = eb.egauss.nodes();
  // hist[k][j] = integral of h_j over dual sub-interval k.
  Table hist(p + 1, std::vector<double>(p + 1, 0.0));
  for (int k = 0; k <= p; ++k) {
    const double mid = 0.5 * (xe[k] + xe[k + 1]), half = 0.5 * (xe[k + 1] - xe[k]);
    for (std::size_t q = 0; q < eb.quad.size(); ++q) {
      const double x = mid + half * eb.quad.nodes[q];
      for (int j = 0; j <= p; ++j) hist[k][j] += eb.quad.weights[q] * half * eb.gll.lagrange(j, x);
    }
  }
  Triplets t;
  for_each_frame_element(g, w, [&](const FrameElement& fe) {
    for (int l = 0; l < p; ++l)
      for (int k = 0; k <= p; ++k)
        for (int j = 0; j <= p; ++j) t.emplace_back(fe.cell(k, l), fe.normal_edge(j, l), 0.5 * fe.ha * hist[k][j]);
  });
  return from_triplets(g.staggered(w).cell_count(), g.edge_count(), t);
}

PressureForce pressure_force(const GridComplex& g, const ElementBasis& eb, Axis w,
                             const std::optional<ScalarField>& boundary_pressure) {
  const int p = g.order();
  const StaggeredComplex& s = g.staggered(w);
  const auto& xe = eb.egauss.nodes();
  Table edge_at(p + 2, std::vector<double>(p));
  for (int k = 0; k <= p + 1; ++k) edge_at[k] = eb.gll.edge_all(xe[k]);

  Triplets t;
  Vector bp = Vector::Zero(s.surface_count());
  for_each_frame_element(g, w, [&](const FrameElement& fe) {
    for (int l = 0; l < p; ++l)
      for (int k = 0; k <= p + 1; ++k) {
        const bool lo_end = k == 0, hi_end = k == p + 1;
        const bool on_boundary = (lo_end && fe.first_along()) || (hi_end && fe.last_along());
        if (on_boundary && boundary_pressure) continue;
        // Interface surfaces are shared by two elements whose pressures differ;
        // they sit inside one staggered volume, so the average is immaterial.
        const double weight = (lo_end || hi_end) && !on_boundary ? 0.5 : 1.0;
        for (int j = 0; j < p; ++j)
          t.emplace_back(fe.along_surface(k, l), fe.primal_cell(j, l), weight * edge_at[k][j] * 2.0 / fe.ha);
      }
  });
  if (boundary_pressure) {
    const auto& A = s.along_nodes;
    const auto& B = s.across_nodes;
    for (int b = 0; b + 1 < s.n_across(); ++b)
      for (int a : {0, s.n_along() - 1})
        bp[s.along_surface(a, b)] = integrate_segment(B[b], B[b + 1], [&](double tb) {
          const auto xy = to_xy(w, A[a], tb);
          return (*boundary_pressure)(xy[0], xy[1]);
        });
  }
  return {from_triplets(s.surface_count(), g.cell_count(), t), bp};
}

Vector boundary_functional(const GridComplex& g, const ElementBasis& eb, Axis w, const ScalarField& gfun) {
  const int p = g.order();
  const StaggeredComplex& s = g.staggered(w);
  const NodeSet& r = reduction_rule();
  Vector out = Vector::Zero(s.surface_count());
  auto value = [&](double ta, double tb) {
    const auto xy = to_xy(w, ta, tb);
    return gfun(xy[0], xy[1]);
  };
  for_each_frame_element(g, w, [&](const FrameElement& fe) {
    // Faces normal to the along axis: only h~_0 / h~_{p+1} survive there.
    for (int side = 0; side < 2; ++side) {
      if (side == 0 ? !fe.first_along() : !fe.last_along()) continue;
      const double ta = side == 0 ? fe.along_lo() : fe.along_hi();
      const double sign = side == 0 ? -1.0 : 1.0;
      const int k = side == 0 ? 0 : p + 1;
      for (std::size_t q = 0; q < r.size(); ++q) {
        const double xb = r.nodes[q];
        const double gv = value(ta, g.map(other(w), fe.eb, xb));
        const auto e = eb.gll.edge_all(xb);
        for (int l = 0; l < p; ++l) out[fe.along_surface(k, l)] += sign * r.weights[q] * gv * e[l];
      }
    }
    for (int side = 0; side < 2; ++side) {
      if (side == 0 ? !fe.first_across() : !fe.last_across()) continue;
      const double tb = side == 0 ? fe.across_lo() : fe.across_hi();
      const double sign = side == 0 ? -1.0 : 1.0;
      const int l = side == 0 ? 0 : p;
      for (std::size_t q = 0; q < r.size(); ++q) {
        const double xa = r.nodes[q];
        const double gv = value(g.map(w, fe.ea, xa), tb);
        const auto e = eb.egauss.edge_all(xa);
        for (int k = 0; k <= p; ++k) out[fe.across_surface(k, l)] += sign * r.weights[q] * gv * e[k];
      }
    }
  });
  return out;
}

DiffusionOperator diffusive_operator(const GridComplex& g, const ElementBasis& eb, Axis w, double nu,
                                     const VectorField& boundary_velocity) {
  if (!(nu > 0.0)) throw std::invalid_argument("diffusive_operator: viscosity must be positive");
  const MassMatrices mm = staggered_mass_matrices(g, eb, w);
  const SparseMatrix d21 = incidence_d21_staggered(g, w).cast<double>();
  DiffusionOperator op;
  op.k = SparseMatrix(-nu * SparseMatrix(d21.transpose()) * mm.m22);
  op.k.makeCompressed();
  const int comp = index(w);
  op.bt = nu * boundary_functional(g, eb, w, [&](double x, double y) { return boundary_velocity(x, y)[comp]; });
  return op;
}

SparseMatrix convection_matrix(const GridComplex& g, const ElementBasis& eb, Axis w, const Vector& u) {
  if (u.size() != g.edge_count()) throw std::invalid_argument("convection_matrix: transport cochain has wrong size");
  const int p = g.order();
  const StaggeredComplex& s = g.staggered(w);
  const NodeSet& quad = eb.quad;
  const int nq = static_cast<int>(quad.size());

  Triplets t;
  t.reserve(static_cast<std::size_t>(g.nel(Axis::x)) * g.nel(Axis::y) *
            ((p + 2) * p + (p + 1) * (p + 1)) * (p + 1) * p);
  std::vector<double> va(nq * nq), vb(nq * nq);
  // acc[qb][k][k2] partial sums over the along quadrature index.
  std::vector<double> acc_a(static_cast<std::size_t>(nq) * (p + 2) * (p + 1));
  std::vector<double> acc_b(static_cast<std::size_t>(nq) * (p + 1) * (p + 1));

  for_each_frame_element(g, w, [&](const FrameElement& fe) {
    for (int qb = 0; qb < nq; ++qb)
      for (int qa = 0; qa < nq; ++qa) {
        double a = 0.0, b = 0.0;
        for (int l = 0; l < p; ++l)
          for (int k = 0; k <= p; ++k) a += u[fe.normal_edge(k, l)] * eb.gll_h[qa][k] * eb.gll_e[qb][l];
        for (int l = 0; l <= p; ++l)
          for (int k = 0; k < p; ++k) b += u[fe.tangent_edge(k, l)] * eb.gll_e[qa][k] * eb.gll_h[qb][l];
        va[qb * nq + qa] = a * 2.0 / fe.hb;
        vb[qb * nq + qa] = b * 2.0 / fe.ha;
      }

    std::fill(acc_a.begin(), acc_a.end(), 0.0);
    std::fill(acc_b.begin(), acc_b.end(), 0.0);
    for (int qb = 0; qb < nq; ++qb)
      for (int qa = 0; qa < nq; ++qa) {
        const double wa = quad.weights[qa];
        const double fa = wa * va[qb * nq + qa], fb = wa * vb[qb * nq + qa];
        double* pa = &acc_a[static_cast<std::size_t>(qb) * (p + 2) * (p + 1)];
        double* pb = &acc_b[static_cast<std::size_t>(qb) * (p + 1) * (p + 1)];
        for (int k = 0; k <= p + 1; ++k)
          for (int k2 = 0; k2 <= p; ++k2) pa[k * (p + 1) + k2] += fa * eb.eg_h[qa][k] * eb.eg_e[qa][k2];
        for (int k = 0; k <= p; ++k)
          for (int k2 = 0; k2 <= p; ++k2) pb[k * (p + 1) + k2] += fb * eb.eg_e[qa][k] * eb.eg_e[qa][k2];
      }

    const double sa = 2.0 / fe.hb, sb = 2.0 / fe.ha;
    for (int l = 0; l < p; ++l)
      for (int k = 0; k <= p + 1; ++k)
        for (int l2 = 0; l2 < p; ++l2)
          for (int k2 = 0; k2 <= p; ++k2) {
            double v = 0.0;
            for (int qb = 0; qb < nq; ++qb)
              v += quad.weights[qb] * acc_a[(static_cast<std::size_t>(qb) * (p + 2) + k) * (p + 1) + k2] *
                   eb.gll_e[qb][l] * eb.gll_e[qb][l2];
            t.emplace_back(fe.along_surface(k, l), fe.cell(k2, l2), sa * v);
          }
    for (int l = 0; l <= p; ++l)
      for (int k = 0; k <= p; ++k)
        for (int l2 = 0; l2 < p; ++l2)
          for (int k2 = 0; k2 <= p; ++k2) {
            double v = 0.0;
            for (int qb = 0; qb < nq; ++qb)
              v += quad.weights[qb] * acc_b[(static_cast<std::size_t>(qb) * (p + 1) + k) * (p + 1) + k2] *
                   eb.gll_h[qb][l] * eb.gll_e[qb][l2];
            t.emplace_back(fe.across_surface(k, l), fe.cell(k2, l2), sb * v);
          }
  });
  return from_triplets(s.surface_count(), s.cell_count(), t);
}

OperatorSet assemble_operators(const GridComplex& g, const OperatorOptions& opt) {
  OperatorSet ops{&g, ElementBasis(g.order(), opt.quadrature_points), opt.nu, {}, {}, {}};
  ops.d21 = incidence_d21(g).cast<double>();
  ops.m1 = primal_edge_mass(g, ops.basis);
  for (Axis w : {Axis::x, Axis::y}) {
    DirectionalOperators& d = ops.dir[index(w)];
    d.w = w;
    d.mass = staggered_mass_matrices(g, ops.basis, w);
    d.d21 = incidence_d21_staggered(g, w).cast<double>();
    d.gather = staggered_gather(g, w).cast<double>();
    d.balance = d.gather * d.d21;
    d.pm = momentum_projection(g, ops.basis, w);
    d.pressure = pressure_force(g, ops.basis, w, opt.boundary_pressure);
    d.diffusion = diffusive_operator(g, ops.basis, w, opt.nu, opt.boundary_velocity);
  }
  return ops;
}

void write_matrix_coo(std::ostream& out, const SparseMatrix& m) {
  out << std::setprecision(17);
  out << "% " << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace mimetic
