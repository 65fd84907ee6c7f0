#include "mimetic/poly_basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace mimetic {

namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kNewtonMaxIter = 100;

// Nodes come out of Newton accurate to ~1 ulp; mirroring them makes the set
// symmetric to the last bit.
void symmetrize(std::vector<double>& x, std::vector<double>& w) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double xs = 0.5 * (x[n - 1 - i] - x[i]);
    const double ws = 0.5 * (w[n - 1 - i] + w[i]);
    x[i] = -xs;
    x[n - 1 - i] = xs;
    w[i] = ws;
    w[n - 1 - i] = ws;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

double newton(double x, auto&& f_over_df) {
  for (int it = 0; it < kNewtonMaxIter; ++it) {
    const double dx = f_over_df(x);
    x -= dx;
    if (std::abs(dx) < kNewtonTol) break;
  }
  return x;
}

}  // namespace

LegendreValue legendre(int n, double x) {
  if (n < 0) throw std::invalid_argument("legendre: negative degree");
  if (n == 0) return {1.0, 0.0};
  double l_prev = 1.0, l = x;
  double dl_prev = 0.0, dl = 1.0;
  for (int k = 1; k < n; ++k) {
    const double l_next = ((2 * k + 1) * x * l - k * l_prev) / (k + 1);
    const double dl_next = dl_prev + (2 * k + 1) * l;
    l_prev = l;
    l = l_next;
    dl_prev = dl;
    dl = dl_next;
  }
  return {l, dl};
}

NodeSet gll_nodes(int p) {
  if (p < 1) throw std::invalid_argument("gll_nodes: degree must be >= 1, got " + std::to_string(p));
  NodeSet ns;
  ns.order = p;
  ns.kind = NodeKind::gauss_lobatto;
  ns.nodes.resize(p + 1);
  ns.weights.resize(p + 1);
  ns.nodes.front() = -1.0;
  ns.nodes.back() = 1.0;
  const double pp1 = p * (p + 1.0);
  for (int i = 1; i < p; ++i) {
    const double guess = -std::cos(std::numbers::pi * i / p);
    ns.nodes[i] = newton(guess, [&](double x) {
      // Roots of L_p'; L_p'' from the Legendre equation.
      const auto [l, dl] = legendre(p, x);
      const double d2l = (2.0 * x * dl - pp1 * l) / (1.0 - x * x);
      return dl / d2l;
    });
  }
  for (int i = 0; i <= p; ++i) {
    const double l = legendre(p, ns.nodes[i]).value;
    ns.weights[i] = 2.0 / (pp1 * l * l);
  }
  symmetrize(ns.nodes, ns.weights);
  return ns;
}

NodeSet gauss_nodes(int q) {
  if (q < 1) throw std::invalid_argument("gauss_nodes: count must be >= 1, got " + std::to_string(q));
  NodeSet ns;
  ns.order = q;
  ns.kind = NodeKind::gauss;
  ns.nodes.resize(q);
  ns.weights.resize(q);
  for (int i = 0; i < q; ++i) {
    const double guess = -std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    const double x = newton(guess, [&](double x) {
      const auto [l, dl] = legendre(q, x);
      return l / dl;
    });
    const double dl = legendre(q, x).derivative;
    ns.nodes[i] = x;
    ns.weights[i] = 2.0 / ((1.0 - x * x) * dl * dl);
  }
  symmetrize(ns.nodes, ns.weights);
  return ns;
}

NodeSet extended_gauss_nodes(int p) {
  NodeSet g = gauss_nodes(p);
  NodeSet ns;
  ns.order = p;
  ns.kind = NodeKind::extended_gauss;
  ns.nodes.reserve(p + 2);
  ns.weights.reserve(p + 2);
  ns.nodes.push_back(-1.0);
  ns.weights.push_back(0.0);
  for (int i = 0; i < p; ++i) {
    ns.nodes.push_back(g.nodes[i]);
    ns.weights.push_back(g.weights[i]);
  }
  ns.nodes.push_back(1.0);
  ns.weights.push_back(0.0);
  return ns;
}

double quadrature(const std::function<double(double)>& f, const NodeSet& rule) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * f(rule.nodes[i]);
  return s;
}

Basis1D::Basis1D(NodeSet node_set) : nodes_(std::move(node_set)) {
  const auto& x = nodes_.nodes;
  const int n = static_cast<int>(x.size());
  if (n < 2) throw std::invalid_argument("Basis1D: need at least two nodes");
  for (int i = 1; i < n; ++i) {
    if (!(x[i] > x[i - 1])) throw std::invalid_argument("Basis1D: nodes must be strictly increasing");
  }
  denom_.assign(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m)
      if (m != i) denom_[i] *= x[i] - x[m];

  dmat_.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      dmat_[i][j] = (denom_[i] / denom_[j]) / (x[i] - x[j]);
      diag -= dmat_[i][j];
    }
    dmat_[i][i] = diag;
  }
}

void Basis1D::check_node(int i) const {
  if (i < 0 || i > degree())
    throw std::out_of_range("Basis1D: nodal index " + std::to_string(i) + " outside [0, " +
                            std::to_string(degree()) + "]");
}

double Basis1D::lagrange(int i, double xi) const {
  check_node(i);
  const auto& x = nodes_.nodes;
  for (std::size_t m = 0; m < x.size(); ++m)
    if (xi == x[m]) return static_cast<int>(m) == i ? 1.0 : 0.0;
  double num = 1.0;
  for (std::size_t m = 0; m < x.size(); ++m)
    if (static_cast<int>(m) != i) num *= xi - x[m];
  return num / denom_[i];
}

double Basis1D::lagrange_derivative(int i, double xi) const {
  check_node(i);
  const auto& x = nodes_.nodes;
  const int n = static_cast<int>(x.size());
  for (int m = 0; m < n; ++m)
    if (xi == x[m]) return dmat_[m][i];
  double sum = 0.0;
  for (int m = 0; m < n; ++m) {
    if (m == i) continue;
    double prod = 1.0;
    for (int k = 0; k < n; ++k)
      if (k != i && k != m) prod *= xi - x[k];
    sum += prod;
  }
  return sum / denom_[i];
}

double Basis1D::edge(int k, double xi) const {
  if (k < 0 || k >= edge_count())
    throw std::out_of_range("Basis1D: edge index " + std::to_string(k) + " outside [0, " +
                            std::to_string(edge_count() - 1) + "]");
  double s = 0.0;
  for (int j = 0; j <= k; ++j) s -= lagrange_derivative(j, xi);
  return s;
}

std::vector<double> Basis1D::lagrange_all(double xi) const {
  std::vector<double> out(nodes_.size());
  for (int i = 0; i <= degree(); ++i) out[i] = lagrange(i, xi);
  return out;
}

std::vector<double> Basis1D::edge_all(double xi) const {
  std::vector<double> out(edge_count());
  double s = 0.0;
  for (int k = 0; k < edge_count(); ++k) {
    s -= lagrange_derivative(k, xi);
    out[k] = s;
  }
  return out;
}

}  // namespace mimetic
