#include "mimetic/io_cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

namespace mimetic {

namespace fs = std::filesystem;

const char* command_name(Command c) {
  switch (c) {
    case Command::run: return "run";
    case Command::convergence: return "convergence";
    case Command::cavity_bench: return "cavity-bench";
  }
  return "?";
}

const char* case_label(CaseName c) {
  switch (c) {
    case CaseName::kovasznay: return "kovasznay";
    case CaseName::cavity: return "cavity";
    case CaseName::custom: return "custom";
  }
  return "?";
}

std::optional<CaseName> parse_case(const std::string& s) {
  for (CaseName c : {CaseName::kovasznay, CaseName::cavity, CaseName::custom})
    if (s == case_label(c)) return c;
  return std::nullopt;
}

namespace {

std::optional<Command> parse_command(const std::string& s) {
  for (Command c : {Command::run, Command::convergence, Command::cavity_bench})
    if (s == command_name(c)) return c;
  return std::nullopt;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(17) << v;
  return o.str();
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* b = text.data();
  const char* e = b + text.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) throw UsageError("bad value for '" + key + "': '" + text + "'");
  return v;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_number<int>(key, item));
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw UsageError("bad value for '" + key + "': '" + text + "'");
}

}  // namespace

// --- RunConfig -----------------------------------------------------------------------

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw UsageError(m); };
  if (command == Command::run && !case_name) fail("run: --case is required");
  if (command == Command::convergence && case_name && *case_name != CaseName::kovasznay)
    fail("convergence: only the kovasznay case has an exact solution");
  if (command == Command::cavity_bench && case_name && *case_name != CaseName::cavity)
    fail("cavity-bench: case must be cavity");
  if (nel_x < 1 || nel_y < 1) fail("nel must be >= 1");
  if (order < 1) fail("order must be >= 1");
  if (!(nu > 0.0)) fail("nu must be positive");
  if (re && !(*re > 0.0)) fail("re must be positive");
  if (!(x_range.hi > x_range.lo) || !(y_range.hi > y_range.lo)) fail("domain ranges must be increasing");
  if (!(tolerance > 0.0)) fail("tol must be positive");
  if (max_iterations < 1) fail("max-iter must be >= 1");
  if (!(relaxation > 0.0 && relaxation <= 1.0)) fail("relax must lie in (0, 1]");
  for (int v : orders)
    if (v < 1) fail("orders must be >= 1");
  for (int v : nels)
    if (v < 1) fail("nels must be >= 1");
  if (lattice < 2) fail("lattice must be >= 2");
  if (out_dir.empty()) fail("out must not be empty");
}

CaseName RunConfig::effective_case() const {
  if (command == Command::cavity_bench) return CaseName::cavity;
  if (command == Command::convergence) return CaseName::kovasznay;
  if (!case_name) throw UsageError("no case given");
  return *case_name;
}

double RunConfig::viscosity() const { return re ? 1.0 / *re : nu; }

SolverConfig RunConfig::solver_config() const {
  SolverConfig s;
  s.tolerance = tolerance;
  s.max_iterations = max_iterations;
  s.relaxation = relaxation;
  s.nu = viscosity();
  return s;
}

DomainSpec RunConfig::domain() const {
  switch (effective_case()) {
    case CaseName::kovasznay: return kovasznay_domain(nel_x, nel_y, order);
    case CaseName::cavity: return DomainSpec{{0.0, 1.0}, {0.0, 1.0}, nel_x, nel_y, order};
    case CaseName::custom: break;
  }
  return DomainSpec{x_range, y_range, nel_x, nel_y, order};
}

std::vector<SweepEntry> RunConfig::sweep() const {
  std::vector<std::pair<int, int>> meshes;
  if (nels.empty())
    meshes.emplace_back(nel_x, nel_y);
  else
    for (int n : nels) meshes.emplace_back(n, n);
  const std::vector<int> ps = orders.empty() ? std::vector<int>{order} : orders;
  std::vector<SweepEntry> out;
  for (const auto& [nx, ny] : meshes)
    for (int p : ps) out.push_back({nx, ny, p});
  return out;
}

RunConfig default_run_config() {
  RunConfig c;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) c.out_dir = env;
  return c;
}

std::string serialize(const RunConfig& c) {
  std::ostringstream o;
  o << "command = " << command_name(c.command) << '\n';
  if (c.case_name) o << "case = " << case_label(*c.case_name) << '\n';
  o << "nel_x = " << c.nel_x << '\n'
    << "nel_y = " << c.nel_y << '\n'
    << "order = " << c.order << '\n'
    << "nu = " << fmt(c.nu) << '\n';
  if (c.re) o << "re = " << fmt(*c.re) << '\n';
  o << "x_min = " << fmt(c.x_range.lo) << '\n'
    << "x_max = " << fmt(c.x_range.hi) << '\n'
    << "y_min = " << fmt(c.y_range.lo) << '\n'
    << "y_max = " << fmt(c.y_range.hi) << '\n'
    << "velocity_x = " << fmt(c.velocity_x) << '\n'
    << "velocity_y = " << fmt(c.velocity_y) << '\n'
    << "tolerance = " << fmt(c.tolerance) << '\n'
    << "max_iterations = " << c.max_iterations << '\n'
    << "relaxation = " << fmt(c.relaxation) << '\n'
    << "orders = " << join(c.orders) << '\n'
    << "nels = " << join(c.nels) << '\n'
    << "out_dir = " << c.out_dir << '\n'
    << "lattice = " << c.lattice << '\n'
    << "timing = " << (c.timing ? "true" : "false") << '\n';
  return o.str();
}

RunConfig parse_config_text(const std::string& text, RunConfig c) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "command") {
      const auto cmd = parse_command(val);
      if (!cmd) throw UsageError("unknown command '" + val + "'");
      c.command = *cmd;
    } else if (key == "case") {
      const auto cs = parse_case(val);
      if (!cs) throw UsageError("unknown case '" + val + "'");
      c.case_name = cs;
    } else if (key == "nel_x") {
      c.nel_x = parse_number<int>(key, val);
    } else if (key == "nel_y") {
      c.nel_y = parse_number<int>(key, val);
    } else if (key == "order") {
      c.order = parse_number<int>(key, val);
    } else if (key == "nu") {
      c.nu = parse_number<double>(key, val);
    } else if (key == "re") {
      c.re = parse_number<double>(key, val);
    } else if (key == "x_min") {
      c.x_range.lo = parse_number<double>(key, val);
    } else if (key == "x_max") {
      c.x_range.hi = parse_number<double>(key, val);
    } else if (key == "y_min") {
      c.y_range.lo = parse_number<double>(key, val);
    } else if (key == "y_max") {
      c.y_range.hi = parse_number<double>(key, val);
    } else if (key == "velocity_x") {
      c.velocity_x = parse_number<double>(key, val);
    } else if (key == "velocity_y") {
      c.velocity_y = parse_number<double>(key, val);
    } else if (key == "tolerance") {
      c.tolerance = parse_number<double>(key, val);
    } else if (key == "max_iterations") {
      c.max_iterations = parse_number<int>(key, val);
    } else if (key == "relaxation") {
      c.relaxation = parse_number<double>(key, val);
    } else if (key == "orders") {
      c.orders = parse_int_list(key, val);
    } else if (key == "nels") {
      c.nels = parse_int_list(key, val);
    } else if (key == "out_dir") {
      c.out_dir = val;
    } else if (key == "lattice") {
      c.lattice = parse_number<int>(key, val);
    } else if (key == "timing") {
      c.timing = parse_bool(key, val);
    } else {
      throw UsageError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

RunConfig load_config_file(const fs::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

// --- command line ----------------------------------------------------------------------

namespace {

struct Flags {
  std::string case_name, out, config;
  std::vector<int> nel, orders, nels;
  std::vector<double> domain, velocity;
  int order = 0, max_iter = 0, lattice = 0;
  double nu = 0.0, re = 0.0, tol = 0.0, relax = 0.0;
  bool no_timing = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--case", f.case_name, "kovasznay | cavity | custom");
  app->add_option("--nel", f.nel, "elements in x and y")->expected(2);
  app->add_option("--order", f.order, "polynomial degree p");
  app->add_option("--nu", f.nu, "kinematic viscosity");
  app->add_option("--re", f.re, "Reynolds number (sets nu = 1/re)");
  app->add_option("--out", f.out, std::string("output directory (default $") + kOutputDirEnv + " or ./out)");
  app->add_option("--config", f.config, "key = value config file");
  app->add_option("--tol", f.tol, "Picard tolerance on |du|/|u|");
  app->add_option("--max-iter", f.max_iter, "Picard iteration limit");
  app->add_option("--relax", f.relax, "under-relaxation factor in (0, 1]");
  app->add_option("--lattice", f.lattice, "points per side of the sampling lattice");
  app->add_option("--domain", f.domain, "custom box: x0 x1 y0 y1")->expected(4);
  app->add_option("--velocity", f.velocity, "custom uniform velocity: u v")->expected(2);
  app->add_flag("--no-timing", f.no_timing, "leave timing columns blank (byte-stable output)");
}

void add_sweep(CLI::App* app, Flags& f) {
  app->add_option("--orders", f.orders, "orders to sweep")->delimiter(',');
  app->add_option("--nels", f.nels, "square meshes n x n to sweep")->delimiter(',');
}

void build_app(CLI::App& app, Flags& f) {
  app.require_subcommand(1, 1);
  auto* run = app.add_subcommand("run", "solve one case and write field files");
  auto* conv = app.add_subcommand("convergence", "Kovasznay convergence sweep");
  auto* bench = app.add_subcommand("cavity-bench", "lid-driven cavity against the reference centerlines");
  for (auto* sub : {run, conv, bench}) add_common(sub, f);
  add_sweep(conv, f);
}

}  // namespace

std::string usage_text() {
  CLI::App app{"Mimetic spectral element solver for steady incompressible flow", "msem"};
  Flags f;
  build_app(app, f);
  std::string text = app.help();
  for (const char* sub : {"run", "convergence", "cavity-bench"}) text += "\n" + app.get_subcommand(sub)->help();
  return text;
}

RunConfig parse_cli(int argc, const char* const* argv) {
  CLI::App app{"Mimetic spectral element solver for steady incompressible flow", "msem"};
  Flags f;
  build_app(app, f);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\n\n" + app.help());
  }

  CLI::App* sub = app.get_subcommands().front();
  RunConfig c = default_run_config();
  if (!f.config.empty()) c = load_config_file(f.config, c);
  c.command = *parse_command(sub->get_name());

  auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (given("--case")) {
    const auto cs = parse_case(f.case_name);
    if (!cs) throw UsageError("unknown case '" + f.case_name + "'\n\n" + sub->help());
    c.case_name = cs;
  }
  if (given("--nel")) {
    c.nel_x = f.nel[0];
    c.nel_y = f.nel[1];
  }
  if (given("--order")) c.order = f.order;
  if (given("--nu")) {
    c.nu = f.nu;
    c.re.reset();
  }
  if (given("--re")) c.re = f.re;
  if (given("--out")) c.out_dir = f.out;
  if (given("--tol")) c.tolerance = f.tol;
  if (given("--max-iter")) c.max_iterations = f.max_iter;
  if (given("--relax")) c.relaxation = f.relax;
  if (given("--lattice")) c.lattice = f.lattice;
  if (given("--domain")) {
    c.x_range = {f.domain[0], f.domain[1]};
    c.y_range = {f.domain[2], f.domain[3]};
  }
  if (given("--velocity")) {
    c.velocity_x = f.velocity[0];
    c.velocity_y = f.velocity[1];
  }
  if (given("--no-timing")) c.timing = false;
  if (c.command == Command::convergence) {
    if (given("--orders")) c.orders = f.orders;
    if (given("--nels")) c.nels = f.nels;
  }
  if (c.command == Command::cavity_bench && !c.case_name) c.case_name = CaseName::cavity;
  if (c.command == Command::convergence && !c.case_name) c.case_name = CaseName::kovasznay;
  try {
    c.validate();
  } catch (const UsageError& e) {
    throw UsageError(std::string(e.what()) + "\n\n" + sub->help());
  }
  return c;
}

// --- output ----------------------------------------------------------------------------

namespace {

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir / name).string());
  out << std::setprecision(17);
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

void write_cochain(const fs::path& dir, const std::string& name, const char* column, const Vector& v) {
  std::ofstream out = open_output(dir, name);
  out << "index," << column << '\n';
  for (Eigen::Index i = 0; i < v.size(); ++i) out << i << ',' << v[i] << '\n';
  finish(out, dir / name);
}

}  // namespace

std::vector<fs::path> write_fields(const FlowState& state, const fs::path& dir, int lattice) {
  if (!state.u.grid) throw std::invalid_argument("write_fields: state has no grid");
  if (lattice < 2) throw std::invalid_argument("write_fields: lattice must be >= 2");
  const GridComplex& g = *state.u.grid;
  Cochain psi;
  try {
    psi = streamfunction(state.u);
  } catch (const std::domain_error& e) {
    throw SolverError(e.what());
  }

  const Interval rx = g.range(Axis::x), ry = g.range(Axis::y);
  const double dx = rx.length() / (lattice - 1), dy = ry.length() / (lattice - 1);
  const std::size_t n = static_cast<std::size_t>(lattice) * lattice;
  std::vector<double> xs(n), ys(n), us(n), vs(n), ps(n), ss(n);
  for (int j = 0; j < lattice; ++j)
    for (int i = 0; i < lattice; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * lattice + i;
      const double x = i + 1 == lattice ? rx.hi : rx.lo + i * dx;
      const double y = j + 1 == lattice ? ry.hi : ry.lo + j * dy;
      const auto v = reconstruct_vector(state.u, x, y);
      xs[k] = x;
      ys[k] = y;
      us[k] = v[0];
      vs[k] = v[1];
      ps[k] = reconstruct_scalar(state.p, x, y);
      ss[k] = reconstruct_scalar(psi, x, y);
    }

  std::vector<fs::path> written;
  {
    std::ofstream out = open_output(dir, "fields.csv");
    out << "x,y,u,v,p,psi\n";
    for (std::size_t k = 0; k < n; ++k)
      out << xs[k] << ',' << ys[k] << ',' << us[k] << ',' << vs[k] << ',' << ps[k] << ',' << ss[k] << '\n';
    finish(out, dir / "fields.csv");
    written.push_back(dir / "fields.csv");
  }
  {
    std::ofstream out = open_output(dir, "fields.vtk");
    out << "# vtk DataFile Version 3.0\n"
        << "steady flow fields\n"
        << "ASCII\n"
        << "DATASET STRUCTURED_POINTS\n"
        << "DIMENSIONS " << lattice << ' ' << lattice << " 1\n"
        << "ORIGIN " << rx.lo << ' ' << ry.lo << " 0\n"
        << "SPACING " << dx << ' ' << dy << " 1\n"
        << "POINT_DATA " << n << '\n'
        << "VECTORS velocity double\n";
    for (std::size_t k = 0; k < n; ++k) out << us[k] << ' ' << vs[k] << " 0\n";
    auto scalars = [&](const char* name, const std::vector<double>& f) {
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (std::size_t k = 0; k < n; ++k) out << f[k] << '\n';
    };
    scalars("pressure", ps);
    scalars("streamfunction", ss);
    finish(out, dir / "fields.vtk");
    written.push_back(dir / "fields.vtk");
  }
  write_cochain(dir, "edges.csv", "flux", state.u.values);
  write_cochain(dir, "cells.csv", "pressure", state.p.values);
  write_cochain(dir, "points.csv", "psi", psi.values);
  for (const char* name : {"edges.csv", "cells.csv", "points.csv"}) written.push_back(dir / name);
  return written;
}

fs::path write_convergence(const ConvergenceReport& report, const fs::path& dir, bool timing) {
  if (report.rows.empty()) throw std::invalid_argument("write_convergence: empty report");
  std::ofstream out = open_output(dir, "convergence.csv");
  out << "nel_x,nel_y,p,dofs,err_v,err_p,rate_v,rate_p,seconds\n";
  auto opt = [&](const std::optional<double>& v) {
    if (v) out << *v;
  };
  for (const ConvergenceRow& r : report.rows) {
    out << r.nel_x << ',' << r.nel_y << ',' << r.order << ',' << r.dofs << ',' << r.err_v << ',' << r.err_p << ',';
    opt(r.rate_v);
    out << ',';
    opt(r.rate_p);
    out << ',';
    if (timing) out << r.seconds;
    out << '\n';
  }
  finish(out, dir / "convergence.csv");
  return dir / "convergence.csv";
}

fs::path write_centerlines(const CavityResult& result, const fs::path& dir) {
  std::ofstream out = open_output(dir, "cavity_centerlines.csv");
  out << "line,coordinate,computed,reference,deviation\n";
  for (const auto& s : result.u_vertical)
    out << "u_vertical," << s.coordinate << ',' << s.computed << ',' << s.reference << ','
        << s.computed - s.reference << '\n';
  for (const auto& s : result.v_horizontal)
    out << "v_horizontal," << s.coordinate << ',' << s.computed << ',' << s.reference << ','
        << s.computed - s.reference << '\n';
  finish(out, dir / "cavity_centerlines.csv");
  return dir / "cavity_centerlines.csv";
}

// --- execution -------------------------------------------------------------------------

namespace {

BoundaryCondition boundary_for(const RunConfig& c) {
  switch (c.effective_case()) {
    case CaseName::kovasznay: return kovasznay_boundary(KovasznayParams::from_viscosity(c.viscosity()));
    case CaseName::cavity: return cavity_boundary(-1.0);
    case CaseName::custom: break;
  }
  BoundaryCondition bc;
  const std::array<double, 2> v{c.velocity_x, c.velocity_y};
  bc.velocity = [v](double, double) { return v; };
  return bc;
}

void write_summary(const fs::path& dir, const std::map<std::string, std::string>& kv) {
  std::ofstream out = open_output(dir, "summary.txt");
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  finish(out, dir / "summary.txt");
}

int execute_run(const RunConfig& c, std::ostream& out) {
  const GridComplex g(c.domain());
  const BoundaryCondition bc = boundary_for(c);
  const SolverConfig cfg = c.solver_config();
  const OperatorSet ops = assemble_operators(g, bc, cfg);
  const FlowState st = solve_steady(g, ops, bc, cfg);
  if (!st.converged) {
    out << "Picard iteration did not converge in " << st.iterations << " iterations\n";
    return static_cast<int>(ExitCode::solver);
  }
  std::map<std::string, std::string> kv;
  kv["case"] = case_label(c.effective_case());
  kv["iterations"] = std::to_string(st.iterations);
  double cont = 0.0;
  for (double v : st.continuity_history) cont = std::max(cont, v);
  kv["continuity_max"] = fmt(cont);
  kv["momentum_residual"] = fmt(momentum_residual(st, ops).max_relative_interior());
  if (c.effective_case() != CaseName::cavity) {
    ErrorNorms e;
    if (c.effective_case() == CaseName::kovasznay) {
      const auto prm = KovasznayParams::from_viscosity(c.viscosity());
      e = l2_error(st, kovasznay_velocity(prm), kovasznay_pressure(prm));
    } else {
      e = l2_error(st, bc.velocity, [](double, double) { return 0.0; });
    }
    kv["err_v"] = fmt(e.velocity);
    kv["err_p"] = fmt(e.pressure);
  }
  const fs::path dir = c.out_dir;
  write_fields(st, dir, c.lattice);
  write_summary(dir, kv);
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  out << "wrote " << dir.string() << '\n';
  return static_cast<int>(ExitCode::ok);
}

int execute_convergence(const RunConfig& c, std::ostream& out) {
  const auto prm = KovasznayParams::from_viscosity(c.viscosity());
  const ConvergenceReport rep = run_convergence(c.sweep(), prm, c.solver_config());
  const fs::path path = write_convergence(rep, c.out_dir, c.timing);
  bool ok = true;
  out << std::setprecision(6);
  for (const ConvergenceRow& r : rep.rows) {
    out << r.nel_x << 'x' << r.nel_y << " p=" << r.order << " err_v=" << r.err_v << " err_p=" << r.err_p;
    if (r.rate_v) out << " rate_v=" << *r.rate_v;
    if (!r.failure.empty()) out << " FAILED: " << r.failure;
    else if (!r.converged) out << " (not converged)";
    out << '\n';
    ok = ok && r.failure.empty() && r.converged;
  }
  out << "wrote " << path.string() << '\n';
  return static_cast<int>(ok ? ExitCode::ok : ExitCode::solver);
}

int execute_cavity(const RunConfig& c, std::ostream& out) {
  CavityReference ref;
  try {
    ref = load_cavity_reference(default_cavity_reference_path());
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
  CavityOptions opt;
  opt.re = c.re ? *c.re : 1.0 / c.nu;
  opt.nel_x = c.nel_x;
  opt.nel_y = c.nel_y;
  opt.order = c.order;
  opt.solver = c.solver_config();
  const CavityResult res = run_cavity(opt, ref);
  const fs::path dir = c.out_dir;
  write_centerlines(res, dir);
  write_fields(res.state, dir, c.lattice);
  std::map<std::string, std::string> kv{{"case", "cavity"},
                                        {"re", fmt(opt.re)},
                                        {"iterations", std::to_string(res.state.iterations)},
                                        {"max_deviation", fmt(res.max_deviation)},
                                        {"rms_deviation", fmt(res.rms_deviation)}};
  if (c.timing) kv["seconds"] = fmt(res.seconds);
  write_summary(dir, kv);
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  out << "wrote " << dir.string() << '\n';
  return static_cast<int>(ExitCode::ok);
}

}  // namespace

int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    c.validate();
    switch (c.command) {
      case Command::run: return execute_run(c, out);
      case Command::convergence: return execute_convergence(c, out);
      case Command::cavity_bench: return execute_cavity(c, out);
    }
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return static_cast<int>(ExitCode::usage);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::io);
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::solver);
  }
  return static_cast<int>(ExitCode::usage);
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    c = parse_cli(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.what();
    return static_cast<int>(ExitCode::ok);
  } catch (const UsageError& e) {
    err << e.what();
    return static_cast<int>(ExitCode::usage);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::io);
  }
  return execute(c, out, err);
}

}  // namespace mimetic
