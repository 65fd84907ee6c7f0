#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mimetic/verification.hpp"

using namespace mimetic;

namespace {

using Vec2 = std::array<double, 2>;
using LD = long double;

// Fourth-order central differences in extended precision.
template <class F>
LD d1(F f, LD t, LD h) {
  return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h);
}
template <class F>
LD d2(F f, LD t, LD h) {
  return (-f(t + 2 * h) + 16 * f(t + h) - 30 * f(t) + 16 * f(t - h) - f(t - 2 * h)) / (12 * h * h);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Kovasznay, LambdaAtReferenceViscosity) {
  const KovasznayParams prm = KovasznayParams::from_viscosity(1.0 / 40.0);
  EXPECT_NEAR(prm.lambda, -0.9637405441957689, 1e-12);
  EXPECT_NEAR(prm.lambda, 20.0 - std::sqrt(400.0 + 4.0 * M_PI * M_PI), 1e-14);
  EXPECT_THROW(KovasznayParams::from_viscosity(0.0), std::invalid_argument);
}

TEST(Kovasznay, SatisfiesNavierStokes) {
  const KovasznayParams prm = KovasznayParams::from_viscosity(1.0 / 40.0);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> X(-0.5, 1.0), Y(-0.5, 1.5);
  const LD h = 1e-3L, nu = prm.nu;
  for (int k = 0; k < 20; ++k) {
    const LD x = X(rng), y = Y(rng);
    auto comp = [&](int c) {
      return [&, c](LD a, LD b) { return kovasznay_exact<LD>(a, b, prm)[c]; };
    };
    auto dx = [&](int c) { return d1([&](LD t) { return comp(c)(t, y); }, x, h); };
    auto dy = [&](int c) { return d1([&](LD t) { return comp(c)(x, t); }, y, h); };
    auto lap = [&](int c) {
      return d2([&](LD t) { return comp(c)(t, y); }, x, h) + d2([&](LD t) { return comp(c)(x, t); }, y, h);
    };
    const auto e = kovasznay_exact<LD>(x, y, prm);
    EXPECT_LT(std::fabs(double(dx(0) + dy(1))), 1e-10);
    const LD rx = e[0] * dx(0) + e[1] * dy(0) + dx(2) - nu * lap(0);
    const LD ry = e[0] * dx(1) + e[1] * dy(1) + dy(2) - nu * lap(1);
    EXPECT_LT(std::fabs(double(rx)), 1e-8);
    EXPECT_LT(std::fabs(double(ry)), 1e-8);
  }
}

TEST(ErrorNorms, ZeroForExactAndInvariantToPressureShift) {
  const KovasznayParams prm = KovasznayParams::from_viscosity(1.0 / 40.0);
  const GridComplex g(kovasznay_domain(2, 2, 4));
  const VectorField zero_v = [](double, double) { return Vec2{0.0, 0.0}; };
  const ScalarField zero_p = [](double, double) { return 0.0; };
  const Cochain u0 = reduce_flux(g, zero_v), p0 = reduce_density(g, zero_p);
  const ErrorNorms z = l2_error(u0, p0, zero_v, zero_p);
  EXPECT_EQ(z.velocity, 0.0);
  EXPECT_EQ(z.pressure, 0.0);

  const Cochain u = reduce_flux(g, kovasznay_velocity(prm));
  const Cochain p = reduce_density(g, kovasznay_pressure(prm));
  const ErrorNorms a = l2_error(u, p, kovasznay_velocity(prm), kovasznay_pressure(prm));
  Cochain shifted = p;
  shifted.values += reduce_density(g, [](double, double) { return 7.5; }).values;
  const ErrorNorms b = l2_error(u, shifted, kovasznay_velocity(prm), kovasznay_pressure(prm));
  EXPECT_NEAR(a.pressure, b.pressure, 1e-13);
  EXPECT_EQ(a.velocity, b.velocity);
}

TEST(ErrorNorms, InterpolationErrorDecaysWithOrder) {
  const KovasznayParams prm = KovasznayParams::from_viscosity(1.0 / 40.0);
  std::vector<double> ev;
  for (int p : {2, 4, 6, 8}) {
    const GridComplex g(kovasznay_domain(2, 2, p));
    const ErrorNorms e = l2_error(reduce_flux(g, kovasznay_velocity(prm)), reduce_density(g, kovasznay_pressure(prm)),
                                  kovasznay_velocity(prm), kovasznay_pressure(prm));
    if (!ev.empty()) {
      EXPECT_LT(e.velocity, ev.back());
    }
    ev.push_back(e.velocity);
  }
  EXPECT_LT(ev[3] / ev[1], 1e-2);
}

TEST(ErrorNorms, MatchIndependentTensorInterpolation) {
  // Reference values from a separate numpy evaluation of the same nodal x
  // histopolation interpolant with 40-point Gauss per element.
  const KovasznayParams prm = KovasznayParams::from_viscosity(1.0 / 40.0);
  const std::pair<int, double> cases[] = {{1, 1.1466402402341287}, {4, 0.14657512719785143}, {8, 0.10080750611304884}};
  for (const auto& [n, expected] : cases) {
    const GridComplex g(kovasznay_domain(n, n, 2));
    const ErrorNorms e = l2_error(reduce_flux(g, kovasznay_velocity(prm)), reduce_density(g, kovasznay_pressure(prm)),
                                  kovasznay_velocity(prm), kovasznay_pressure(prm));
    EXPECT_NEAR(e.velocity, expected, 1e-10 * expected) << "nel=" << n;
  }
}

TEST(Convergence, RatesOnlyBetweenEqualOrders) {
  auto row = [](int n, int p, double ev, double ep) {
    ConvergenceRow r;
    r.nel_x = r.nel_y = n;
    r.order = p;
    r.err_v = ev;
    r.err_p = ep;
    return r;
  };
  ConvergenceReport r;
  r.rows = {row(1, 2, 1.0, 1.0), row(2, 2, 0.25, 0.5), row(4, 2, 0.0625, 0.25), row(4, 3, 0.01, 0.01)};
  compute_rates(r);
  EXPECT_FALSE(r.rows[0].rate_v);
  ASSERT_TRUE(r.rows[1].rate_v && r.rows[2].rate_v);
  EXPECT_NEAR(*r.rows[1].rate_v, 2.0, 1e-14);
  EXPECT_NEAR(*r.rows[2].rate_v, 2.0, 1e-14);
  EXPECT_NEAR(*r.rows[2].rate_p, 1.0, 1e-14);
  EXPECT_FALSE(r.rows[3].rate_v);  // order changed
  r.rows.pop_back();
  EXPECT_NEAR(best_fit_rate(r), 2.0, 1e-12);
}

TEST(Convergence, EmptySweepRejected) {
  EXPECT_THROW(run_convergence({}, KovasznayParams::from_viscosity(0.025), SolverConfig{}), std::invalid_argument);
}

TEST(Convergence, SmallHSweepProducesRates) {
  const KovasznayParams prm = KovasznayParams::from_viscosity(1.0 / 40.0);
  SolverConfig c;
  c.nu = prm.nu;
  const ConvergenceReport r = run_convergence({{1, 1, 2}, {2, 2, 2}, {4, 4, 2}}, prm, c);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_FALSE(r.rows[0].rate_v);
  EXPECT_TRUE(r.rows[1].rate_v);
  EXPECT_TRUE(r.rows[2].rate_v);
  for (const auto& row : r.rows) {
    EXPECT_TRUE(row.converged);
    EXPECT_TRUE(row.failure.empty());
  }
  EXPECT_EQ(r.rows[1].dofs, 40 + 16 + 1);
}

TEST(CavityReference, LoadsShippedData) {
  const CavityReference ref = load_cavity_reference(default_cavity_reference_path());
  EXPECT_EQ(ref.checksum, kCavityReferenceChecksum);
  EXPECT_EQ(ref.checksum, fnv1a(read_file(default_cavity_reference_path())));
  EXPECT_EQ(ref.u_vertical.size(), 17u);
  EXPECT_EQ(ref.v_horizontal.size(), 17u);
  EXPECT_NE(ref.source.find("Botella"), std::string::npos);
  // The lid moves in -x, so the top of the vertical centreline carries u = -1.
  EXPECT_DOUBLE_EQ(ref.u_vertical.front().first, 1.0);
  EXPECT_DOUBLE_EQ(ref.u_vertical.front().second, -1.0);
}

TEST(CavityReference, RejectsModifiedOrMissingFile) {
  const auto tmp = std::filesystem::temp_directory_path() / "mimetic_ref_test.dat";
  std::string text = read_file(default_cavity_reference_path());
  text[text.size() - 3] = text[text.size() - 3] == '1' ? '2' : '1';
  std::ofstream(tmp, std::ios::binary) << text;
  EXPECT_THROW(load_cavity_reference(tmp.string()), std::runtime_error);
  EXPECT_NO_THROW(load_cavity_reference(tmp.string(), false));
  std::filesystem::remove(tmp);
  EXPECT_THROW(load_cavity_reference(tmp.string()), std::runtime_error);
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Cavity, StokesSolutionIsMirrorSymmetric) {
  const CavityReference ref = load_cavity_reference(default_cavity_reference_path());
  CavityOptions opt;
  opt.re = 1.0;
  opt.nel_x = opt.nel_y = 2;
  opt.order = 4;
  opt.solver.convection = false;
  const CavityResult r = run_cavity(opt, ref);
  for (double y : {0.2, 0.5, 0.77, 0.93})
    for (double x : {0.1, 0.35}) {
      const Vec2 a = reconstruct_vector(r.state.u, x, y), b = reconstruct_vector(r.state.u, 1.0 - x, y);
      EXPECT_NEAR(a[0], b[0], 1e-12);
      EXPECT_NEAR(a[1], -b[1], 1e-12);
    }
  EXPECT_EQ(r.u_vertical.size(), ref.u_vertical.size());
  EXPECT_DOUBLE_EQ(r.u_vertical.front().computed, -1.0);  // boundary point takes the lid value
  opt.re = 0.0;
  EXPECT_THROW(run_cavity(opt, ref), std::invalid_argument);
}

TEST(Streamfunction, UniformFlowAndPathIndependence) {
  const GridComplex g(DomainSpec{{0, 2}, {-1, 1}, 2, 3, 3});
  const Cochain u = reduce_flux(g, [](double, double) { return Vec2{1.0, 0.0}; });
  const Cochain psi = streamfunction(u);
  const auto& ys = g.primal_nodes(Axis::y);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) EXPECT_NEAR(psi.values[g.point(i, j)], ys[j] - ys[0], 1e-13);

  const KovasznayParams prm = KovasznayParams::from_viscosity(1.0 / 40.0);
  const GridComplex gk(kovasznay_domain(2, 2, 5));
  const Cochain uk = reduce_flux(gk, kovasznay_velocity(prm));
  const Cochain a = streamfunction(uk, StreamPath::x_then_y), b = streamfunction(uk, StreamPath::y_then_x);
  EXPECT_LE((a.values - b.values).cwiseAbs().maxCoeff(), 1e-12);
  // The discrete curl of psi returns the fluxes exactly.
  const Vector back = incidence_d10(gk).cast<double>() * a.values;
  EXPECT_LE((back - uk.values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Streamfunction, RejectsDivergentFlux) {
  const GridComplex g(DomainSpec{{0, 1}, {0, 1}, 1, 1, 3});
  const Cochain u = reduce_flux(g, [](double x, double) { return Vec2{x, 0.0}; });
  EXPECT_THROW(streamfunction(u), std::domain_error);
}
