#pragma once

// Primal Gauss-Lobatto tensor complex over a Cartesian multi-element domain,
// the extended-Gauss dual grid, and the staggered momentum complexes (one per
// momentum direction). All entities get one global index and a fixed
// orientation:
//
//   * +x and +y are the positive flux directions of edges and surfaces;
//   * cells are counter-clockwise, so the divergence incidence is
//     (+right, -left, +top, -bottom);
//   * points map to edges by the stream-function pattern: a u-edge (x-normal)
//     gets psi(top) - psi(bottom), a v-edge (y-normal) gets psi(left) - psi(right).

#include <array>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "mimetic/poly_basis.hpp"

namespace mimetic {

enum class Axis : int { x = 0, y = 1 };

inline Axis other(Axis a) { return a == Axis::x ? Axis::y : Axis::x; }
inline int index(Axis a) { return static_cast<int>(a); }
const char* axis_name(Axis a);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

struct DomainSpec {
  Interval x_range;
  Interval y_range;
  int nel_x = 1;
  int nel_y = 1;
  int order = 1;

  /// Throws std::invalid_argument on degenerate ranges, zero element counts, or p < 1.
  void validate() const;
};

using IncidenceMatrix = Eigen::SparseMatrix<int, Eigen::RowMajor>;

/// One staggered momentum complex. The "along" axis is the momentum direction
/// w and carries the dual (extended Gauss) grid; the "across" axis carries the
/// primal Gauss-Lobatto grid. Cells are the element-local pieces of the
/// staggered volumes; a volume straddling an element interface is the union of
/// two cells.
struct StaggeredComplex {
  Axis along = Axis::x;
  std::vector<double> along_nodes;   // nel_along*(p+1)+1 dual coordinates
  std::vector<double> across_nodes;  // nel_across*p+1 primal coordinates

  int n_along() const { return static_cast<int>(along_nodes.size()); }
  int n_across() const { return static_cast<int>(across_nodes.size()); }

  int cell_count() const { return (n_along() - 1) * (n_across() - 1); }
  int cell(int a, int b) const { return b * (n_along() - 1) + a; }

  /// Surfaces normal to the along axis: (along node a, across interval b).
  int along_surface_count() const { return n_along() * (n_across() - 1); }
  /// Surfaces normal to the across axis: (along interval a, across node b).
  int across_surface_count() const { return (n_along() - 1) * n_across(); }
  int surface_count() const { return along_surface_count() + across_surface_count(); }
  int along_surface(int a, int b) const { return b * n_along() + a; }
  int across_surface(int a, int b) const { return along_surface_count() + b * (n_along() - 1) + a; }

  /// Staggered volume that owns cell (a, b). Volumes are numbered like the
  /// w-normal primal edges: volume v sits on edge v + GridComplex::normal_edge_offset(w).
  std::vector<int> volume_of_cell;
  /// Whether each surface lies on the domain boundary.
  std::vector<std::uint8_t> surface_on_boundary;
};

class GridComplex {
 public:
  explicit GridComplex(const DomainSpec& spec);

  const DomainSpec& spec() const { return spec_; }
  int order() const { return spec_.order; }
  int nel(Axis a) const { return a == Axis::x ? spec_.nel_x : spec_.nel_y; }
  double element_size(Axis a) const { return h_[index(a)]; }
  const Interval& range(Axis a) const { return a == Axis::x ? spec_.x_range : spec_.y_range; }

  const NodeSet& gll() const { return gll_; }
  const NodeSet& extended_gauss() const { return egauss_; }

  /// Global primal (GLL) coordinates along an axis; nel*p + 1 entries.
  const std::vector<double>& primal_nodes(Axis a) const { return primal_[index(a)]; }
  int nx() const { return static_cast<int>(primal_[0].size()); }
  int ny() const { return static_cast<int>(primal_[1].size()); }

  // Primal entity numbering.
  int point_count() const { return nx() * ny(); }
  int point(int i, int j) const { return j * nx() + i; }
  int u_edge_count() const { return nx() * (ny() - 1); }
  int v_edge_count() const { return (nx() - 1) * ny(); }
  int edge_count() const { return u_edge_count() + v_edge_count(); }
  /// x-normal edge at x-node i spanning y-interval j.
  int u_edge(int i, int j) const { return j * nx() + i; }
  /// y-normal edge at y-node j spanning x-interval i.
  int v_edge(int i, int j) const { return u_edge_count() + j * (nx() - 1) + i; }
  int cell_count() const { return (nx() - 1) * (ny() - 1); }
  int cell(int i, int j) const { return j * (nx() - 1) + i; }

  /// Whether an edge lies on the domain boundary (its normal is the boundary normal).
  bool edge_on_boundary(int e) const;

  // Frame helpers: (along, across) indices relative to direction w.
  /// Edge normal to w at along-node `a`, across-interval `b`.
  int normal_edge(Axis w, int a, int b) const {
    return w == Axis::x ? u_edge(a, b) : v_edge(b, a);
  }
  /// Edge tangent to w: along-interval `a`, across-node `b`.
  int tangent_edge(Axis w, int a, int b) const {
    return w == Axis::x ? v_edge(a, b) : u_edge(b, a);
  }
  int frame_cell(Axis w, int a, int b) const { return w == Axis::x ? cell(a, b) : cell(b, a); }
  int normal_edge_count(Axis w) const { return w == Axis::x ? u_edge_count() : v_edge_count(); }
  int normal_edge_offset(Axis w) const { return w == Axis::x ? 0 : u_edge_count(); }

  const StaggeredComplex& staggered(Axis w) const { return staggered_[index(w)]; }

  /// Element containing global coordinate t along an axis, and the reference
  /// coordinate inside it.
  std::pair<int, double> locate(Axis a, double t) const;
  /// Physical coordinate of reference point xi in element e along an axis.
  double map(Axis a, int e, double xi) const;

 private:
  DomainSpec spec_;
  NodeSet gll_;
  NodeSet egauss_;
  std::array<double, 2> h_{};
  std::array<std::vector<double>, 2> primal_;
  std::array<StaggeredComplex, 2> staggered_;
};

GridComplex build_grid(const DomainSpec& spec);

/// Points -> edges (stream-function pattern; one +1 head and one -1 tail per row).
IncidenceMatrix incidence_d10(const GridComplex& grid);
/// Edges -> cells, outward-flux signs.
IncidenceMatrix incidence_d21(const GridComplex& grid);
/// Staggered surfaces -> staggered cells for direction w, outward-flux signs.
IncidenceMatrix incidence_d21_staggered(const GridComplex& grid, Axis w);
/// Staggered cells -> staggered volumes (0/1): sums the two halves of volumes
/// that straddle an element interface.
IncidenceMatrix staggered_gather(const GridComplex& grid, Axis w);

/// Plain-text table of all entities with coordinates and orientation.
void write_complex_table(std::ostream& out, const GridComplex& grid);

}  // namespace mimetic
