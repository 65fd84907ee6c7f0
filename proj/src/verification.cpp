#include "mimetic/verification.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mimetic {

#ifndef MIMETIC_DATA_DIR
#define MIMETIC_DATA_DIR "data"
#endif

KovasznayParams KovasznayParams::from_viscosity(double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("KovasznayParams: viscosity must be positive");
  return {nu, kovasznay_lambda<double>(nu)};
}

DomainSpec kovasznay_domain(int nel_x, int nel_y, int order) {
  return DomainSpec{{-0.5, 1.0}, {-0.5, 1.5}, nel_x, nel_y, order};
}

VectorField kovasznay_velocity(const KovasznayParams& prm) {
  return [prm](double x, double y) {
    const auto e = kovasznay_exact(x, y, prm);
    return std::array<double, 2>{e[0], e[1]};
  };
}

ScalarField kovasznay_pressure(const KovasznayParams& prm) {
  return [prm](double x, double y) { return kovasznay_exact(x, y, prm)[2]; };
}

BoundaryCondition kovasznay_boundary(const KovasznayParams& prm) {
  BoundaryCondition bc;
  bc.velocity = kovasznay_velocity(prm);
  return bc;
}

// --- error norms -------------------------------------------------------------------

ErrorNorms l2_error(const Cochain& u, const Cochain& p, const VectorField& exact_velocity,
                    const ScalarField& exact_pressure) {
  if (!u.grid || u.grid != p.grid) throw std::invalid_argument("l2_error: cochains must share a grid");
  const GridComplex& g = *u.grid;
  // The exact fields are not polynomial and a coarse element can span several
  // periods, so integrate with the analytic-data rule rather than p + 3 points.
  const NodeSet q = gauss_nodes(std::max(g.order() + 3, kReductionPoints));
  const double jac = 0.25 * g.element_size(Axis::x) * g.element_size(Axis::y);

  struct Sample {
    double w, dp;
  };
  std::vector<Sample> pressure;
  pressure.reserve(static_cast<std::size_t>(g.nel(Axis::x) * g.nel(Axis::y)) * q.size() * q.size());
  double ev = 0.0, area = 0.0, mean = 0.0;
  for (int ey = 0; ey < g.nel(Axis::y); ++ey)
    for (int ex = 0; ex < g.nel(Axis::x); ++ex)
      for (std::size_t j = 0; j < q.size(); ++j)
        for (std::size_t i = 0; i < q.size(); ++i) {
          const double x = g.map(Axis::x, ex, q.nodes[i]);
          const double y = g.map(Axis::y, ey, q.nodes[j]);
          const double w = q.weights[i] * q.weights[j] * jac;
          const auto vh = reconstruct_vector(u, x, y);
          const auto ve = exact_velocity(x, y);
          ev += w * ((vh[0] - ve[0]) * (vh[0] - ve[0]) + (vh[1] - ve[1]) * (vh[1] - ve[1]));
          const double dp = reconstruct_scalar(p, x, y) - exact_pressure(x, y);
          pressure.push_back({w, dp});
          area += w;
          mean += w * dp;
        }
  mean /= area;
  double ep = 0.0;
  for (const Sample& s : pressure) ep += s.w * (s.dp - mean) * (s.dp - mean);
  return {std::sqrt(ev), std::sqrt(ep)};
}

ErrorNorms l2_error(const FlowState& state, const VectorField& exact_velocity, const ScalarField& exact_pressure) {
  return l2_error(state.u, state.p, exact_velocity, exact_pressure);
}

// --- convergence -------------------------------------------------------------------

namespace {

// Relative element size; rates only use ratios, so the domain box drops out.
double mesh_size(const ConvergenceRow& r) { return 1.0 / std::sqrt(double(r.nel_x) * r.nel_y); }

std::optional<double> rate(double e1, double e2, double h1, double h2) {
  if (!(e1 > 0.0 && e2 > 0.0) || !std::isfinite(e1) || !std::isfinite(e2)) return std::nullopt;
  return std::log(e1 / e2) / std::log(h1 / h2);
}

}  // namespace

void compute_rates(ConvergenceReport& report) {
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    ConvergenceRow& r = report.rows[k];
    r.rate_v.reset();
    r.rate_p.reset();
    if (k == 0) continue;
    const ConvergenceRow& prev = report.rows[k - 1];
    const double h1 = mesh_size(prev), h2 = mesh_size(r);
    if (prev.order != r.order || h1 == h2) continue;
    r.rate_v = rate(prev.err_v, r.err_v, h1, h2);
    r.rate_p = rate(prev.err_p, r.err_p, h1, h2);
  }
}

double best_fit_rate(const ConvergenceReport& report) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const ConvergenceRow& r : report.rows) {
    if (!(r.err_v > 0.0) || !std::isfinite(r.err_v)) continue;
    const double lx = std::log(mesh_size(r)), ly = std::log(r.err_v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / den;
}

ConvergenceReport run_convergence(const std::vector<SweepEntry>& sweep, const KovasznayParams& prm,
                                  const SolverConfig& base) {
  if (sweep.empty()) throw std::invalid_argument("run_convergence: empty sweep");
  ConvergenceReport report;
  report.case_name = "kovasznay";
  SolverConfig cfg = base;
  cfg.nu = prm.nu;
  const BoundaryCondition bc = kovasznay_boundary(prm);
  const VectorField ve = kovasznay_velocity(prm);
  const ScalarField pe = kovasznay_pressure(prm);
  for (const SweepEntry& s : sweep) {
    ConvergenceRow row;
    row.nel_x = s.nel_x;
    row.nel_y = s.nel_y;
    row.order = s.order;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const GridComplex g(kovasznay_domain(s.nel_x, s.nel_y, s.order));
      row.dofs = g.edge_count() + g.cell_count() + 1;
      const FlowState st = solve_steady(g, bc, cfg);
      row.iterations = st.iterations;
      row.converged = st.converged;
      const ErrorNorms e = l2_error(st, ve, pe);
      row.err_v = e.velocity;
      row.err_p = e.pressure;
    } catch (const SolverError& ex) {
      row.failure = ex.what();
      row.err_v = row.err_p = std::numeric_limits<double>::quiet_NaN();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.rows.push_back(row);
  }
  compute_rates(report);
  return report;
}

// --- cavity --------------------------------------------------------------------------

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string default_cavity_reference_path() { return std::string(MIMETIC_DATA_DIR) + "/botella_peyret_re1000.dat"; }

CavityReference load_cavity_reference(const std::string& path, bool verify_checksum) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open cavity reference " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();

  CavityReference ref;
  ref.checksum = fnv1a(bytes);
  if (verify_checksum && ref.checksum != kCavityReferenceChecksum) {
    std::ostringstream msg;
    msg << "cavity reference " << path << " has checksum 0x" << std::hex << ref.checksum << ", expected 0x"
        << kCavityReferenceChecksum;
    throw std::runtime_error(msg.str());
  }

  std::istringstream lines(bytes);
  std::string line;
  std::vector<std::pair<double, double>>* section = nullptr;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      ref.source += line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1) + '\n';
      continue;
    }
    if (line == "[u_vertical]") {
      section = &ref.u_vertical;
      continue;
    }
    if (line == "[v_horizontal]") {
      section = &ref.v_horizontal;
      continue;
    }
    std::istringstream row(line);
    double c = 0.0, v = 0.0;
    if (!section || !(row >> c >> v))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed reference line");
    if (c < 0.0 || c > 1.0) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": coordinate outside [0, 1]");
    section->emplace_back(c, v);
  }
  if (ref.u_vertical.empty() || ref.v_horizontal.empty())
    throw std::runtime_error("cavity reference " + path + " lacks a centerline section");
  if (ref.source.empty()) throw std::runtime_error("cavity reference " + path + " has no provenance header");
  return ref;
}

BoundaryCondition cavity_boundary(double lid_velocity) {
  BoundaryCondition bc;
  // Corners belong to the lid.
  bc.velocity = [lid_velocity](double, double y) {
    return std::array<double, 2>{y >= 1.0 ? lid_velocity : 0.0, 0.0};
  };
  return bc;
}

CavityResult run_cavity(const CavityOptions& opt, const CavityReference& ref) {
  if (!(opt.re > 0.0)) throw std::invalid_argument("run_cavity: Reynolds number must be positive");
  CavityResult res;
  auto grid = std::make_shared<const GridComplex>(DomainSpec{{0.0, 1.0}, {0.0, 1.0}, opt.nel_x, opt.nel_y, opt.order});
  res.grid = grid;
  SolverConfig cfg = opt.solver;
  cfg.nu = 1.0 / opt.re;
  const BoundaryCondition bc = cavity_boundary(opt.lid_velocity);

  const auto t0 = std::chrono::steady_clock::now();
  res.state = solve_steady(*grid, bc, cfg);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!res.state.converged)
    throw SolverError("cavity: Picard iteration did not converge in " + std::to_string(cfg.max_iterations) +
                      " iterations");

  auto on_boundary = [](double t) { return t <= 0.0 || t >= 1.0; };
  double sum = 0.0;
  int n = 0;
  auto record = [&](std::vector<CenterlineSample>& out, double c, double computed, double reference) {
    out.push_back({c, computed, reference});
    const double d = std::abs(computed - reference);
    res.max_deviation = std::max(res.max_deviation, d);
    sum += d * d;
    ++n;
  };
  for (const auto& [y, u] : ref.u_vertical) {
    const double c = on_boundary(y) ? bc.velocity(0.5, y)[0] : reconstruct_vector(res.state.u, 0.5, y)[0];
    record(res.u_vertical, y, c, u);
  }
  for (const auto& [x, v] : ref.v_horizontal) {
    const double c = on_boundary(x) ? bc.velocity(x, 0.5)[1] : reconstruct_vector(res.state.u, x, 0.5)[1];
    record(res.v_horizontal, x, c, v);
  }
  res.rms_deviation = n ? std::sqrt(sum / n) : 0.0;
  return res;
}

// --- streamfunction ------------------------------------------------------------------

Cochain streamfunction(const Cochain& u, StreamPath path) {
  if (!u.grid || u.space != Space::primal_edge) throw std::invalid_argument("streamfunction: need a primal edge cochain");
  const GridComplex& g = *u.grid;
  const Vector& f = u.values;
  const SparseMatrix d21 = incidence_d21(g).cast<double>();
  const double scale = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
  const double div = g.cell_count() ? (d21 * f).cwiseAbs().maxCoeff() : 0.0;
  if (div > 1e-8 * std::max(scale, std::numeric_limits<double>::min())) {
    std::ostringstream msg;
    msg << "streamfunction: flux cochain is not divergence free (|D21 u| = " << div << ")";
    throw std::domain_error(msg.str());
  }

  Cochain psi{Vector::Zero(g.point_count()), Space::primal_point, Axis::x, &g};
  Vector& s = psi.values;
  const int nx = g.nx(), ny = g.ny();
  if (path == StreamPath::x_then_y) {
    for (int i = 0; i + 1 < nx; ++i) s[g.point(i + 1, 0)] = s[g.point(i, 0)] - f[g.v_edge(i, 0)];
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j + 1 < ny; ++j) s[g.point(i, j + 1)] = s[g.point(i, j)] + f[g.u_edge(i, j)];
  } else {
    for (int j = 0; j + 1 < ny; ++j) s[g.point(0, j + 1)] = s[g.point(0, j)] + f[g.u_edge(0, j)];
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i + 1 < nx; ++i) s[g.point(i + 1, j)] = s[g.point(i, j)] - f[g.v_edge(i, j)];
  }
  return psi;
}

}  // namespace mimetic
