#pragma once

// Brute-force reference for the single-element operators.
//
// Plain product-formula Lagrange polynomials on the library's node sets, with
// integrals done by Gauss-Kronrod. Nothing here shares code with the assembly
// loops under test. Only valid on one-element grids.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "mimetic/mimetic_operators.hpp"

namespace oracle {

using namespace mimetic;
using Vec2 = std::array<double, 2>;

struct Lagrange1D {
  std::vector<double> x;

  double h(int i, double t) const {
    double v = 1.0;
    for (int m = 0; m < int(x.size()); ++m)
      if (m != i) v *= (t - x[m]) / (x[i] - x[m]);
    return v;
  }
  double dh(int i, double t) const {
    double s = 0.0;
    for (int m = 0; m < int(x.size()); ++m) {
      if (m == i) continue;
      double v = 1.0 / (x[i] - x[m]);
      for (int n = 0; n < int(x.size()); ++n)
        if (n != i && n != m) v *= (t - x[n]) / (x[i] - x[n]);
      s += v;
    }
    return s;
  }
  double e(int k, double t) const {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s -= dh(j, t);
    return s;
  }
};

// Adaptive, for non-polynomial integrands.
inline double integrate1(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-15);
}

// Single 15-point Kronrod panel: exact for polynomials of degree <= 22 per
// direction, which covers every integrand here for p <= 3.
inline double panel(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0);
}

inline double integrate2(const std::function<double(double, double)>& f, double x0, double x1, double y0,
                         double y1) {
  return panel([&](double x) { return panel([&](double y) { return f(x, y); }, y0, y1); }, x0, x1);
}

// Bases of one element [x0,x1] x [y0,y1] in physical coordinates.
struct Element {
  double x0, x1, y0, y1, hx, hy;
  int p;
  Lagrange1D gll, eg;

  explicit Element(const GridComplex& g)
      : x0(g.range(Axis::x).lo), x1(g.range(Axis::x).hi), y0(g.range(Axis::y).lo), y1(g.range(Axis::y).hi),
        hx(x1 - x0), hy(y1 - y0), p(g.order()), gll{g.gll().nodes}, eg{g.extended_gauss().nodes} {
    if (g.nel(Axis::x) != 1 || g.nel(Axis::y) != 1) throw std::invalid_argument("oracle: one element only");
  }

  double xi(double x) const { return 2.0 * (x - x0) / hx - 1.0; }
  double eta(double y) const { return 2.0 * (y - y0) / hy - 1.0; }
  double len(Axis a) const { return a == Axis::x ? hx : hy; }

  Vec2 edge_basis(const GridComplex& g, int e, double x, double y) const {
    for (int j = 0; j < p; ++j)
      for (int i = 0; i <= p; ++i)
        if (g.u_edge(i, j) == e) return {gll.h(i, xi(x)) * gll.e(j, eta(y)) * 2.0 / hy, 0.0};
    for (int j = 0; j <= p; ++j)
      for (int i = 0; i < p; ++i)
        if (g.v_edge(i, j) == e) return {0.0, gll.e(i, xi(x)) * gll.h(j, eta(y)) * 2.0 / hx};
    throw std::logic_error("edge");
  }
  double cell_basis(int i, int j, double x, double y) const {
    return gll.e(i, xi(x)) * gll.e(j, eta(y)) * 4.0 / (hx * hy);
  }

  // Staggered surface basis, as a physical vector.
  Vec2 surface_basis(const StaggeredComplex& s, int idx, double x, double y) const {
    const Axis w = s.along;
    const double a = w == Axis::x ? xi(x) : eta(y), b = w == Axis::x ? eta(y) : xi(x);
    const double ha = len(w), hb = len(other(w));
    double qa = 0.0, qb = 0.0;
    if (idx < s.along_surface_count()) {
      const int k = idx % s.n_along(), l = idx / s.n_along();
      qa = eg.h(k, a) * gll.e(l, b) * 2.0 / hb;
    } else {
      const int r = idx - s.along_surface_count();
      const int k = r % (s.n_along() - 1), l = r / (s.n_along() - 1);
      qb = eg.e(k, a) * gll.h(l, b) * 2.0 / ha;
    }
    return w == Axis::x ? Vec2{qa, qb} : Vec2{qb, qa};
  }
  double density_basis(const StaggeredComplex& s, int idx, double x, double y) const {
    const Axis w = s.along;
    const double a = w == Axis::x ? xi(x) : eta(y), b = w == Axis::x ? eta(y) : xi(x);
    const int k = idx % (s.n_along() - 1), l = idx / (s.n_along() - 1);
    return eg.e(k, a) * gll.e(l, b) * 4.0 / (hx * hy);
  }
};

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

inline Eigen::MatrixXd mass11(const GridComplex& g, Axis w) {
  const Element o(g);
  const StaggeredComplex& s = g.staggered(w);
  Eigen::MatrixXd m(s.surface_count(), s.surface_count());
  for (int i = 0; i < s.surface_count(); ++i)
    for (int j = 0; j < s.surface_count(); ++j)
      m(i, j) = integrate2([&](double x, double y) { return dot(o.surface_basis(s, i, x, y), o.surface_basis(s, j, x, y)); },
                           o.x0, o.x1, o.y0, o.y1);
  return m;
}

inline Eigen::MatrixXd mass22(const GridComplex& g, Axis w) {
  const Element o(g);
  const StaggeredComplex& s = g.staggered(w);
  Eigen::MatrixXd m(s.cell_count(), s.cell_count());
  for (int i = 0; i < s.cell_count(); ++i)
    for (int j = 0; j < s.cell_count(); ++j)
      m(i, j) = integrate2([&](double x, double y) { return o.density_basis(s, i, x, y) * o.density_basis(s, j, x, y); },
                           o.x0, o.x1, o.y0, o.y1);
  return m;
}

inline Eigen::MatrixXd mass1(const GridComplex& g) {
  const Element o(g);
  Eigen::MatrixXd m(g.edge_count(), g.edge_count());
  for (int i = 0; i < g.edge_count(); ++i)
    for (int j = 0; j < g.edge_count(); ++j)
      m(i, j) = integrate2([&](double x, double y) { return dot(o.edge_basis(g, i, x, y), o.edge_basis(g, j, x, y)); },
                           o.x0, o.x1, o.y0, o.y1);
  return m;
}

/// Staggered-cell integral of the w-component of each primal flux basis.
inline Eigen::MatrixXd momentum_projection(const GridComplex& g, Axis w) {
  const Element o(g);
  const StaggeredComplex& s = g.staggered(w);
  Eigen::MatrixXd pm(s.cell_count(), g.edge_count());
  for (int b = 0; b + 1 < s.n_across(); ++b)
    for (int a = 0; a + 1 < s.n_along(); ++a)
      for (int e = 0; e < g.edge_count(); ++e) {
        const double a0 = s.along_nodes[a], a1 = s.along_nodes[a + 1];
        const double b0 = s.across_nodes[b], b1 = s.across_nodes[b + 1];
        auto f = [&](double x, double y) { return o.edge_basis(g, e, x, y)[index(w)]; };
        pm(s.cell(a, b), e) = w == Axis::x ? integrate2(f, a0, a1, b0, b1) : integrate2(f, b0, b1, a0, a1);
      }
  return pm;
}

/// Pressure integrated over each w-normal staggered surface; zero on the others.
inline Eigen::MatrixXd pressure_force(const GridComplex& g, Axis w) {
  const Element o(g);
  const StaggeredComplex& s = g.staggered(w);
  const int p = g.order();
  Eigen::MatrixXd pp = Eigen::MatrixXd::Zero(s.surface_count(), g.cell_count());
  for (int b = 0; b + 1 < s.n_across(); ++b)
    for (int a = 0; a < s.n_along(); ++a)
      for (int j = 0; j < p; ++j)
        for (int i = 0; i < p; ++i) {
          const double ta = s.along_nodes[a];
          pp(s.along_surface(a, b), g.cell(i, j)) = panel(
              [&](double tb) {
                const double x = w == Axis::x ? ta : tb, y = w == Axis::x ? tb : ta;
                return o.cell_basis(i, j, x, y);
              },
              s.across_nodes[b], s.across_nodes[b + 1]);
        }
  return pp;
}

/// C[s][c] = int psi_c (v . phi_s), v reconstructed from primal fluxes u.
inline Eigen::MatrixXd convection(const GridComplex& g, Axis w, const Eigen::VectorXd& u) {
  const Element o(g);
  const StaggeredComplex& s = g.staggered(w);
  auto velocity = [&](double x, double y) {
    Vec2 v{0.0, 0.0};
    for (int e = 0; e < g.edge_count(); ++e) {
      const Vec2 b = o.edge_basis(g, e, x, y);
      v[0] += u[e] * b[0];
      v[1] += u[e] * b[1];
    }
    return v;
  };
  Eigen::MatrixXd c(s.surface_count(), s.cell_count());
  for (int i = 0; i < s.surface_count(); ++i)
    for (int j = 0; j < s.cell_count(); ++j)
      c(i, j) = integrate2(
          [&](double x, double y) { return o.density_basis(s, j, x, y) * dot(velocity(x, y), o.surface_basis(s, i, x, y)); },
          o.x0, o.x1, o.y0, o.y1);
  return c;
}

/// oint g (phi_s . n) ds over the element boundary, outward normal.
inline Eigen::VectorXd boundary_functional(const GridComplex& g, Axis w, const ScalarField& gfun) {
  const Element o(g);
  const StaggeredComplex& s = g.staggered(w);
  Eigen::VectorXd r(s.surface_count());
  for (int i = 0; i < s.surface_count(); ++i) {
    auto flux = [&](double x, double y, int comp) { return gfun(x, y) * o.surface_basis(s, i, x, y)[comp]; };
    r[i] = integrate1([&](double y) { return flux(o.x1, y, 0); }, o.y0, o.y1) -
           integrate1([&](double y) { return flux(o.x0, y, 0); }, o.y0, o.y1) +
           integrate1([&](double x) { return flux(x, o.y1, 1); }, o.x0, o.x1) -
           integrate1([&](double x) { return flux(x, o.y0, 1); }, o.x0, o.x1);
  }
  return r;
}

/// max |a - b| / max(1, max |b|)
inline double relative_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

}  // namespace oracle
