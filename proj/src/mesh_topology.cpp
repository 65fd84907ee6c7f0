#include "mimetic/mesh_topology.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mimetic {

const char* axis_name(Axis a) { return a == Axis::x ? "x" : "y"; }

void DomainSpec::validate() const {
  if (!(x_range.hi > x_range.lo) || !(y_range.hi > y_range.lo))
    throw std::invalid_argument("DomainSpec: degenerate domain range");
  if (nel_x < 1 || nel_y < 1) throw std::invalid_argument("DomainSpec: element counts must be >= 1");
  if (order < 1) throw std::invalid_argument("DomainSpec: order must be >= 1");
}

GridComplex::GridComplex(const DomainSpec& spec)
    : spec_(spec), gll_((spec.validate(), gll_nodes(spec.order))), egauss_(extended_gauss_nodes(spec.order)) {
  const int p = spec_.order;
  for (Axis a : {Axis::x, Axis::y}) {
    const Interval& r = range(a);
    const int ne = nel(a);
    const double h = r.length() / ne;
    h_[index(a)] = h;
    auto& xs = primal_[index(a)];
    xs.resize(ne * p + 1);
    for (int e = 0; e < ne; ++e)
      for (int k = 0; k <= p; ++k) xs[e * p + k] = r.lo + e * h + 0.5 * (gll_.nodes[k] + 1.0) * h;
    // Pin element interfaces and the end point exactly.
    for (int e = 0; e <= ne; ++e) xs[e * p] = r.lo + e * h;
    xs.back() = r.hi;
  }

  for (Axis w : {Axis::x, Axis::y}) {
    StaggeredComplex& sc = staggered_[index(w)];
    sc.along = w;
    const Interval& r = range(w);
    const int ne = nel(w);
    const double h = h_[index(w)];
    sc.along_nodes.resize(ne * (p + 1) + 1);
    for (int e = 0; e < ne; ++e)
      for (int k = 0; k <= p + 1; ++k)
        sc.along_nodes[e * (p + 1) + k] = r.lo + e * h + 0.5 * (egauss_.nodes[k] + 1.0) * h;
    for (int e = 0; e <= ne; ++e) sc.along_nodes[e * (p + 1)] = r.lo + e * h;
    sc.along_nodes.back() = r.hi;
    sc.across_nodes = primal_[index(other(w))];

    sc.volume_of_cell.resize(sc.cell_count());
    for (int b = 0; b + 1 < sc.n_across(); ++b)
      for (int a = 0; a + 1 < sc.n_along(); ++a) {
        const int primal_node = (a / (p + 1)) * p + a % (p + 1);
        sc.volume_of_cell[sc.cell(a, b)] = normal_edge(w, primal_node, b) - normal_edge_offset(w);
      }

    sc.surface_on_boundary.assign(sc.surface_count(), 0);
    for (int b = 0; b + 1 < sc.n_across(); ++b) {
      sc.surface_on_boundary[sc.along_surface(0, b)] = 1;
      sc.surface_on_boundary[sc.along_surface(sc.n_along() - 1, b)] = 1;
    }
    for (int a = 0; a + 1 < sc.n_along(); ++a) {
      sc.surface_on_boundary[sc.across_surface(a, 0)] = 1;
      sc.surface_on_boundary[sc.across_surface(a, sc.n_across() - 1)] = 1;
    }
  }
}

bool GridComplex::edge_on_boundary(int e) const {
  if (e < u_edge_count()) {
    const int i = e % nx();
    return i == 0 || i == nx() - 1;
  }
  const int j = (e - u_edge_count()) / (nx() - 1);
  return j == 0 || j == ny() - 1;
}

std::pair<int, double> GridComplex::locate(Axis a, double t) const {
  const Interval& r = range(a);
  const double h = element_size(a);
  const double slack = 1e-12 * r.length();
  if (t < r.lo - slack || t > r.hi + slack)
    throw std::out_of_range("GridComplex::locate: coordinate " + std::to_string(t) + " outside domain");
  int e = static_cast<int>(std::floor((t - r.lo) / h));
  if (e < 0) e = 0;
  if (e >= nel(a)) e = nel(a) - 1;
  double xi = 2.0 * (t - r.lo - e * h) / h - 1.0;
  if (xi < -1.0) xi = -1.0;
  if (xi > 1.0) xi = 1.0;
  return {e, xi};
}

double GridComplex::map(Axis a, int e, double xi) const {
  const double h = element_size(a);
  return range(a).lo + e * h + 0.5 * (xi + 1.0) * h;
}

GridComplex build_grid(const DomainSpec& spec) { return GridComplex(spec); }

IncidenceMatrix incidence_d10(const GridComplex& g) {
  std::vector<Eigen::Triplet<int>> t;
  t.reserve(2 * g.edge_count());
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      t.emplace_back(g.u_edge(i, j), g.point(i, j + 1), 1);
      t.emplace_back(g.u_edge(i, j), g.point(i, j), -1);
    }
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i) {
      t.emplace_back(g.v_edge(i, j), g.point(i, j), 1);
      t.emplace_back(g.v_edge(i, j), g.point(i + 1, j), -1);
    }
  IncidenceMatrix m(g.edge_count(), g.point_count());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

IncidenceMatrix incidence_d21(const GridComplex& g) {
  std::vector<Eigen::Triplet<int>> t;
  t.reserve(4 * g.cell_count());
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i) {
      const int c = g.cell(i, j);
      t.emplace_back(c, g.u_edge(i + 1, j), 1);
      t.emplace_back(c, g.u_edge(i, j), -1);
      t.emplace_back(c, g.v_edge(i, j + 1), 1);
      t.emplace_back(c, g.v_edge(i, j), -1);
    }
  IncidenceMatrix m(g.cell_count(), g.edge_count());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

IncidenceMatrix incidence_d21_staggered(const GridComplex& g, Axis w) {
  const StaggeredComplex& s = g.staggered(w);
  std::vector<Eigen::Triplet<int>> t;
  t.reserve(4 * s.cell_count());
  for (int b = 0; b + 1 < s.n_across(); ++b)
    for (int a = 0; a + 1 < s.n_along(); ++a) {
      const int c = s.cell(a, b);
      t.emplace_back(c, s.along_surface(a + 1, b), 1);
      t.emplace_back(c, s.along_surface(a, b), -1);
      t.emplace_back(c, s.across_surface(a, b + 1), 1);
      t.emplace_back(c, s.across_surface(a, b), -1);
    }
  IncidenceMatrix m(s.cell_count(), s.surface_count());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

IncidenceMatrix staggered_gather(const GridComplex& g, Axis w) {
  const StaggeredComplex& s = g.staggered(w);
  std::vector<Eigen::Triplet<int>> t;
  t.reserve(s.cell_count());
  for (int c = 0; c < s.cell_count(); ++c) t.emplace_back(s.volume_of_cell[c], c, 1);
  IncidenceMatrix m(g.normal_edge_count(w), s.cell_count());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void write_complex_table(std::ostream& out, const GridComplex& g) {
  const auto& xs = g.primal_nodes(Axis::x);
  const auto& ys = g.primal_nodes(Axis::y);
  out << std::setprecision(17);
  out << "# entity index i j x y orientation\n";
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      out << "point " << g.point(i, j) << ' ' << i << ' ' << j << ' ' << xs[i] << ' ' << ys[j] << " 0\n";
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      out << "u_edge " << g.u_edge(i, j) << ' ' << i << ' ' << j << ' ' << xs[i] << ' '
          << 0.5 * (ys[j] + ys[j + 1]) << " +x\n";
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i)
      out << "v_edge " << g.v_edge(i, j) << ' ' << i << ' ' << j << ' ' << 0.5 * (xs[i] + xs[i + 1]) << ' '
          << ys[j] << " +y\n";
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i)
      out << "cell " << g.cell(i, j) << ' ' << i << ' ' << j << ' ' << 0.5 * (xs[i] + xs[i + 1]) << ' '
          << 0.5 * (ys[j] + ys[j + 1]) << " ccw\n";
  for (Axis w : {Axis::x, Axis::y}) {
    const StaggeredComplex& s = g.staggered(w);
    const std::string tag = std::string("stag_") + axis_name(w);
    auto xy = [&](double along, double across) {
      return w == Axis::x ? std::pair{along, across} : std::pair{across, along};
    };
    for (int b = 0; b + 1 < s.n_across(); ++b)
      for (int a = 0; a + 1 < s.n_along(); ++a) {
        auto [x, y] = xy(0.5 * (s.along_nodes[a] + s.along_nodes[a + 1]),
                         0.5 * (s.across_nodes[b] + s.across_nodes[b + 1]));
        out << tag << "_cell " << s.cell(a, b) << ' ' << a << ' ' << b << ' ' << x << ' ' << y << " volume="
            << s.volume_of_cell[s.cell(a, b)] << '\n';
      }
    for (int b = 0; b + 1 < s.n_across(); ++b)
      for (int a = 0; a < s.n_along(); ++a) {
        auto [x, y] = xy(s.along_nodes[a], 0.5 * (s.across_nodes[b] + s.across_nodes[b + 1]));
        out << tag << "_surface " << s.along_surface(a, b) << ' ' << a << ' ' << b << ' ' << x << ' ' << y
            << " +" << axis_name(w) << (s.surface_on_boundary[s.along_surface(a, b)] ? " boundary" : "") << '\n';
      }
    for (int b = 0; b < s.n_across(); ++b)
      for (int a = 0; a + 1 < s.n_along(); ++a) {
        auto [x, y] = xy(0.5 * (s.along_nodes[a] + s.along_nodes[a + 1]), s.across_nodes[b]);
        out << tag << "_surface " << s.across_surface(a, b) << ' ' << a << ' ' << b << ' ' << x << ' ' << y
            << " +" << axis_name(other(w)) << (s.surface_on_boundary[s.across_surface(a, b)] ? " boundary" : "")
            << '\n';
      }
  }
}

}  // namespace mimetic
