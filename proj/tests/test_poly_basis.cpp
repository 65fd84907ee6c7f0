#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mimetic/poly_basis.hpp"

using namespace mimetic;

namespace {

void expect_rule(const NodeSet& ns, const std::vector<double>& nodes, const std::vector<double>& weights) {
  ASSERT_EQ(ns.size(), nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    EXPECT_NEAR(ns.nodes[i], nodes[i], 1e-15) << "node " << i;
    EXPECT_NEAR(ns.weights[i], weights[i], 1e-14) << "weight " << i;
  }
}

// Gauss rule on [a, b] from the library rule of n points.
double integrate(const std::function<double(double)>& f, double a, double b, int n) {
  const NodeSet g = gauss_nodes(n);
  double s = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) s += g.weights[q] * f(0.5 * (a + b) + 0.5 * (b - a) * g.nodes[q]);
  return 0.5 * (b - a) * s;
}

}  // namespace

TEST(GllNodes, ClosedForms) {
  expect_rule(gll_nodes(1), {-1.0, 1.0}, {1.0, 1.0});
  expect_rule(gll_nodes(2), {-1.0, 0.0, 1.0}, {1.0 / 3, 4.0 / 3, 1.0 / 3});
  const double r = 1.0 / std::sqrt(5.0);
  expect_rule(gll_nodes(3), {-1.0, -r, r, 1.0}, {1.0 / 6, 5.0 / 6, 5.0 / 6, 1.0 / 6});
}

TEST(GllNodes, RejectsZeroOrder) {
  EXPECT_THROW(gll_nodes(0), std::invalid_argument);
  EXPECT_THROW(gauss_nodes(0), std::invalid_argument);
}

TEST(GaussNodes, ClosedForms) {
  expect_rule(gauss_nodes(1), {0.0}, {2.0});
  const double r = 1.0 / std::sqrt(3.0);
  expect_rule(gauss_nodes(2), {-r, r}, {1.0, 1.0});
  const double s = std::sqrt(0.6);
  expect_rule(gauss_nodes(3), {-s, 0.0, s}, {5.0 / 9, 8.0 / 9, 5.0 / 9});
}

TEST(NodeSets, WeightsSymmetryOrdering) {
  for (int p = 1; p <= 20; ++p) {
    for (const NodeSet& ns : {gll_nodes(p), gauss_nodes(p)}) {
      double sum = 0.0;
      for (double w : ns.weights) {
        EXPECT_GT(w, 0.0);
        sum += w;
      }
      EXPECT_NEAR(sum, 2.0, 1e-13) << "p=" << p;
      for (std::size_t i = 0; i < ns.size(); ++i) {
        EXPECT_NEAR(ns.nodes[i], -ns.nodes[ns.size() - 1 - i], 1e-13);
        if (i) { EXPECT_LT(ns.nodes[i - 1], ns.nodes[i]); }
      }
    }
    const NodeSet gl = gll_nodes(p);
    EXPECT_EQ(gl.size(), std::size_t(p + 1));
    EXPECT_EQ(gl.nodes.front(), -1.0);
    EXPECT_EQ(gl.nodes.back(), 1.0);
    const NodeSet ga = gauss_nodes(p);
    EXPECT_GT(ga.nodes.front(), -1.0);
    EXPECT_LT(ga.nodes.back(), 1.0);
  }
}

TEST(NodeSets, GllWeightFormula) {
  for (int p = 2; p <= 16; ++p) {
    const NodeSet ns = gll_nodes(p);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double lp = legendre(p, ns.nodes[i]).value;
      EXPECT_NEAR(ns.weights[i], 2.0 / (p * (p + 1) * lp * lp), 1e-13);
      if (i > 0 && i + 1 < ns.size()) { EXPECT_NEAR(legendre(p, ns.nodes[i]).derivative, 0.0, 1e-11); }
    }
  }
}

TEST(NodeSets, ExtendedGauss) {
  const NodeSet e = extended_gauss_nodes(3);
  ASSERT_EQ(e.size(), 5u);
  EXPECT_EQ(e.nodes.front(), -1.0);
  EXPECT_EQ(e.nodes.back(), 1.0);
  EXPECT_EQ(e.weights.front(), 0.0);
  EXPECT_EQ(e.weights.back(), 0.0);
  const NodeSet g = gauss_nodes(3);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(e.nodes[i + 1], g.nodes[i]);
}

TEST(Lagrange, KnownValues) {
  const Basis1D b(gll_nodes(2));
  EXPECT_NEAR(b.lagrange(1, 0.5), 0.75, 1e-15);
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j) EXPECT_EQ(b.lagrange(i, b.nodes()[j]), i == j ? 1.0 : 0.0);
  EXPECT_THROW(b.lagrange(3, 0.0), std::out_of_range);
  EXPECT_THROW(b.lagrange(-1, 0.0), std::out_of_range);
}

TEST(Lagrange, InterpolationAndPartitionOfUnity) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int p = 1; p <= 16; ++p) {
    const Basis1D b(gll_nodes(p));
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= p; ++j) EXPECT_NEAR(b.lagrange(i, b.nodes()[j]), i == j ? 1.0 : 0.0, 1e-13);
    for (int k = 0; k < 100; ++k) {
      const double x = U(rng);
      double s = 0.0;
      for (double h : b.lagrange_all(x)) s += h;
      EXPECT_NEAR(s, 1.0, 1e-12) << "p=" << p << " x=" << x;
    }
    double s = 0.0;
    for (double h : b.lagrange_all(0.3)) s += h;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Lagrange, DerivativeOfMonomials) {
  for (int p = 1; p <= 16; ++p) {
    const Basis1D b(gll_nodes(p));
    const auto& D = b.derivative_matrix();
    const auto& x = b.nodes();
    for (int k = 0; k <= p; ++k)
      for (int i = 0; i <= p; ++i) {
        double d = 0.0;
        for (int j = 0; j <= p; ++j) d += D[i][j] * std::pow(x[j], k);
        const double exact = k == 0 ? 0.0 : k * std::pow(x[i], k - 1);
        EXPECT_NEAR(d, exact, 1e-11 * std::max(1.0, double(k))) << "p=" << p << " k=" << k;
      }
    // Derivative matrix agrees with the pointwise derivative.
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= p; ++j) EXPECT_NEAR(D[i][j], b.lagrange_derivative(j, x[i]), 1e-10 * (1 + p * p));
  }
}

TEST(Edge, LinearCase) {
  const Basis1D b(gll_nodes(1));
  for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0}) EXPECT_NEAR(b.edge(0, x), 0.5, 1e-15);
  EXPECT_THROW(b.edge(1, 0.0), std::out_of_range);
}

TEST(Edge, Histopolation) {
  for (int p = 1; p <= 16; ++p) {
    const Basis1D b(gll_nodes(p));
    const auto& x = b.nodes();
    for (int i = 0; i < p; ++i) {
      double total = 0.0;
      for (int k = 0; k < p; ++k) {
        const double v = integrate([&](double t) { return b.edge(i, t); }, x[k], x[k + 1], p + 2);
        EXPECT_NEAR(v, i == k ? 1.0 : 0.0, 1e-11) << "p=" << p << " i=" << i << " k=" << k;
        total += v;
      }
      EXPECT_NEAR(total, 1.0, 1e-11);
    }
  }
}

TEST(Edge, ExtendedGaussHistopolation) {
  for (int p = 1; p <= 12; ++p) {
    const Basis1D b(extended_gauss_nodes(p));
    const auto& x = b.nodes();
    for (int i = 0; i <= p; ++i)
      for (int k = 0; k <= p; ++k)
        EXPECT_NEAR(integrate([&](double t) { return b.edge(i, t); }, x[k], x[k + 1], p + 2), i == k ? 1.0 : 0.0,
                    1e-11);
  }
}

TEST(Quadrature, Exactness) {
  for (int p = 1; p <= 8; ++p) {
    for (const NodeSet& r : {gll_nodes(p), gauss_nodes(p)})
      EXPECT_NEAR(quadrature([](double) { return 1.0; }, r), 2.0, 1e-14);
    EXPECT_NEAR(quadrature([](double x) { return x * x * x; }, gll_nodes(p)), 0.0, 1e-15);
    EXPECT_NEAR(quadrature([](double x) { return x * x * x; }, gauss_nodes(p)), 0.0, 1e-15);
  }
  EXPECT_NEAR(quadrature([](double x) { return x * x; }, gauss_nodes(2)), 2.0 / 3.0, 1e-15);
  // Degree 2q-1 for Gauss, 2p-1 for Gauss-Lobatto.
  for (int q = 1; q <= 10; ++q) {
    const int d = 2 * q - 2;  // highest even degree in range
    EXPECT_NEAR(quadrature([d](double x) { return std::pow(x, d); }, gauss_nodes(q)), 2.0 / (d + 1), 1e-13);
    if (q >= 2) {
      const int dl = 2 * q - 2;
      EXPECT_NEAR(quadrature([dl](double x) { return std::pow(x, dl); }, gll_nodes(q)), 2.0 / (dl + 1), 1e-13);
    }
  }
}

TEST(Basis1D, RejectsUnsortedNodes) {
  NodeSet bad = gll_nodes(2);
  std::swap(bad.nodes[0], bad.nodes[1]);
  EXPECT_THROW(Basis1D{bad}, std::invalid_argument);
}
