#pragma once

// One-dimensional polynomial machinery on the reference interval [-1, 1]:
// Gauss-Lobatto-Legendre and Gauss node sets, nodal Lagrange and edge
// (histopolation) bases, and quadrature. Every 2D operator in the library is
// a tensor product of these pieces.

#include <cstddef>
#include <functional>
#include <vector>

namespace mimetic {

enum class NodeKind {
  gauss_lobatto,
  gauss,
  /// Gauss points of degree p plus the endpoints +-1. The endpoint weights are
  /// zero, so the set still integrates like the underlying Gauss rule.
  extended_gauss,
};

struct NodeSet {
  int order = 0;  // polynomial degree p for GLL, point count q for Gauss
  std::vector<double> nodes;
  std::vector<double> weights;
  NodeKind kind = NodeKind::gauss_lobatto;

  std::size_t size() const { return nodes.size(); }
};

/// Legendre polynomial L_n(x) together with its first derivative.
struct LegendreValue {
  double value;
  double derivative;
};
LegendreValue legendre(int n, double x);

/// p+1 roots of (1 - x^2) L_p'(x); requires p >= 1.
NodeSet gll_nodes(int p);

/// q roots of L_q; requires q >= 1.
NodeSet gauss_nodes(int q);

/// Dual-grid nodes: the p Gauss points with the endpoints appended.
NodeSet extended_gauss_nodes(int p);

/// Sum of w_i f(x_i).
double quadrature(const std::function<double(double)>& f, const NodeSet& rule);

/// Nodal Lagrange basis h_i on an ascending node set spanning [-1, 1], plus the
/// edge basis e_k(x) = -sum_{j<=k} h_j'(x) whose integral over sub-interval
/// [x_m, x_{m+1}] is delta_km.
///
/// Edge functions are indexed from 0: e_k belongs to sub-interval k.
class Basis1D {
 public:
  explicit Basis1D(NodeSet node_set);

  const NodeSet& node_set() const { return nodes_; }
  const std::vector<double>& nodes() const { return nodes_.nodes; }
  int degree() const { return static_cast<int>(nodes_.size()) - 1; }
  int edge_count() const { return degree(); }

  double lagrange(int i, double x) const;
  double lagrange_derivative(int i, double x) const;
  double edge(int k, double x) const;

  /// D[i][j] = h_j'(x_i).
  const std::vector<std::vector<double>>& derivative_matrix() const { return dmat_; }

  /// All nodal values h_0..h_p at x.
  std::vector<double> lagrange_all(double x) const;
  /// All edge values e_0..e_{p-1} at x.
  std::vector<double> edge_all(double x) const;

 private:
  void check_node(int i) const;

  NodeSet nodes_;
  std::vector<double> denom_;  // prod_{m != i} (x_i - x_m)
  std::vector<std::vector<double>> dmat_;
};

}  // namespace mimetic
