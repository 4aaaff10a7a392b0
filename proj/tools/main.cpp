// Command-line front end: cone checks, barrier verification, radial solves,
// and boundary-asymptotics studies, with machine-readable JSON/CSV output.
//
// Exit codes: 0 success, 2 usage/config error, 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "cli_util.hpp"
#include "schouten/barriers.hpp"
#include "schouten/cone.hpp"
#include "schouten/geometry.hpp"
#include "schouten/solver.hpp"

namespace fs = std::filesystem;
using namespace schouten;
using cli::JsonWriter;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

void emit(const std::string& json, const std::string& out_dir, const std::string& name) {
  std::cout << json << "\n";
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    cli::write_file((fs::path(out_dir) / name).string(), json + "\n");
  }
}

void write_report_margins(JsonWriter& w, const std::map<std::string, double>& margins) {
  w.begin_object();
  for (const auto& [k, v] : margins) w.kv(k, v);
  w.end_object();
}

// ---------------------------------------------------------------------------
// cone

struct ConeArgs {
  int n = 5;
  int k = 2;
  double tau = 1.0;
  bool unnormalized = false;
  int samples = 10000;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_cone(const ConeArgs& a) {
  const ConeSpec cone = make_cone(a.n, a.k, a.tau, !a.unnormalized);
  const ConeConstants cc = cone_constants(cone);
  const StructureReport sr = check_structure(cone, a.samples, a.seed);

  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.kv("command", "cone");
  w.key("config").begin_object();
  w.kv("n", a.n).kv("k", a.k).kv("tau", a.tau).kv("normalized", !a.unnormalized);
  w.kv("samples", a.samples).kv("seed", static_cast<int>(a.seed));
  w.end_object();
  w.kv("mu_plus", cc.mu_plus);
  w.kv("kappa", cc.kappa);
  w.kv("theta", cc.theta);
  if (cc.beta) {
    w.kv("beta", *cc.beta);
  } else {
    w.key("beta").null_value();
  }
  w.key("structure_check").begin_object();
  w.kv("samples", sr.samples);
  w.kv("violations", sr.violations);
  w.key("worst_margins");
  write_report_margins(w, sr.worst_margins);
  w.end_object();
  w.end_object();

  emit(w.str(), a.out, "cone.json");
  return sr.violations == 0 ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------------------
// barrier-check

struct BarrierArgs {
  std::string family;
  int n = 5;
  int k = 2;
  double tau = 1.0;
  double m = 0.0;
  double eps = 0.5;
  double r_minus = 0.01;
  double r_plus = 0.0;  // 0: derive from the admissibility window
  double radius = 0.05;
  double xi_bar = 0.0;
  double a = 1.0;
  std::string warp = "flat";
  double r_lo = 0.0;
  double r_hi = 1.0;
  int grid = 1000;
  std::string eps_list;
  std::string frac_list;
  int jobs = 1;
  std::string out;
};

RadialGeometry make_geometry(int n, const std::string& warp, double r_lo, double r_hi) {
  if (warp == "flat") return RadialGeometry::flat(n, r_lo, r_hi);
  if (warp == "sin") return RadialGeometry::warped(n, WarpKind::Sin, r_lo, r_hi);
  if (warp == "sinh") return RadialGeometry::warped(n, WarpKind::Sinh, r_lo, r_hi);
  throw DomainError("unknown warp kind: " + warp);
}

void barrier_report_json(JsonWriter& w, const BarrierCheckReport& rep) {
  w.begin_object();
  w.kv("family", rep.family);
  w.key("params");
  write_report_margins(w, rep.params);
  w.kv("grid_size", rep.grid_size);
  w.kv("min_cone_margin", rep.min_cone_margin);
  w.kv("min_inequality_margin", rep.min_inequality_margin);
  w.kv("pass", rep.pass);
  w.key("worst").begin_object();
  w.kv("r", rep.worst.r).kv("what", rep.worst.what).kv("margin", rep.worst.margin);
  w.end_object();
  w.key("measured");
  write_report_margins(w, rep.measured);
  w.end_object();
}

int cmd_barrier_check(const BarrierArgs& a) {
  std::vector<BarrierCheckReport> reports;

  if (a.family == "AnnulusLog") {
    const ConeSpec cone = make_cone(a.n, a.k, a.tau);
    const double mu = mu_plus(cone);
    if (!(mu > 1.0)) throw DomainError("AnnulusLog requires mu_plus > 1");
    const double beta = 2.0 / (mu - 1.0);
    std::vector<double> eps_values =
        a.eps_list.empty() ? std::vector<double>{a.eps} : cli::parse_double_list(a.eps_list);
    std::vector<double> fracs =
        a.frac_list.empty() ? std::vector<double>{} : cli::parse_double_list(a.frac_list);

    struct Point {
      double eps, r_minus, r_plus;
    };
    std::vector<Point> points;
    for (double eps : eps_values) {
      if (fracs.empty()) {
        const double rp = a.r_plus > 0.0
                              ? a.r_plus
                              : a.r_minus * (1.0 + 0.5 * eps / (2.0 * (beta + 2.0)));
        points.push_back({eps, a.r_minus, rp});
      } else {
        for (double f : fracs) {
          points.push_back({eps, a.r_minus, a.r_minus * (1.0 + f * eps / (2.0 * (beta + 2.0)))});
        }
      }
    }
    // fan out sweep points; results merged in input order
    const int jobs = std::max(1, a.jobs);
    reports.resize(points.size());
    std::vector<std::future<BarrierCheckReport>> futures;
    for (std::size_t base = 0; base < points.size(); base += jobs) {
      futures.clear();
      const std::size_t hi = std::min(points.size(), base + static_cast<std::size_t>(jobs));
      for (std::size_t i = base; i < hi; ++i) {
        futures.push_back(std::async(std::launch::async, [&, i] {
          const Point& p = points[i];
          return verify_annulus_barrier(make_annulus_log(cone, a.m, p.eps, p.r_minus, p.r_plus),
                                        a.grid);
        }));
      }
      for (std::size_t i = base; i < hi; ++i) reports[i] = futures[i - base].get();
    }
  } else if (a.family == "LNSuper") {
    reports.push_back(verify_ln_supersolution(make_ln_super(a.n, a.radius, a.eps), a.grid));
  } else if (a.family == "GuanUpper") {
    const RadialGeometry geom = make_geometry(a.n, a.warp, a.r_lo, a.r_hi);
    reports.push_back(verify_guan_upper(a.xi_bar, geom, a.grid));
  } else if (a.family == "CollarLog") {
    const ConeSpec cone = make_cone(a.n, a.k, a.tau);
    const RadialGeometry geom = make_geometry(a.n, a.warp, a.r_lo, a.r_hi);
    reports.push_back(verify_collar_barrier(make_collar_log(a.eps, a.a), cone, geom, a.grid));
  } else {
    throw cli::ConfigError("unknown barrier family: " + a.family);
  }

  bool all_pass = true;
  for (const auto& rep : reports) all_pass = all_pass && rep.pass;
  cli::log_line(1, "barrier-check family=" + a.family + " points=" +
                       std::to_string(reports.size()) + (all_pass ? " pass" : " fail"));

  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.kv("command", "barrier-check");
  w.key("config").begin_object();
  w.kv("family", a.family).kv("n", a.n).kv("k", a.k).kv("tau", a.tau);
  w.kv("grid", a.grid).kv("jobs", a.jobs);
  w.end_object();
  w.key("reports").begin_array();
  for (const auto& rep : reports) barrier_report_json(w, rep);
  w.end_array();
  w.kv("pass", all_pass);
  w.end_object();

  emit(w.str(), a.out, "barrier_check.json");
  return all_pass ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------------------
// solve / asymptotics shared setup

struct SolveArgs {
  std::string config;
  std::string out = ".";
  int grid_override = 0;
  int n_override = 0;
  int k_override = 0;
  double tau_override = -1.0;
  std::string band_override;
  std::string csv;  // asymptotics: reuse an existing solution dump
};

const std::map<std::string, std::vector<std::string>> kSolveKeys = {
    {"cone", {"n", "k", "tau", "normalized"}},
    {"geometry", {"kind", "r_lo", "r_hi"}},
    {"grid", {"intervals", "kind"}},
    {"problem", {"psi", "boundary_lo", "boundary_hi", "oracle_boundary", "oracle_ball_radius"}},
    {"newton", {"tol_residual", "max_iter", "min_step", "max_backtracks", "cone_margin"}},
    {"continuation", {"tau_targets", "m_schedule"}},
    {"diagnostics", {"band_lo", "band_hi"}},
    {"solve", {"mode"}},
};

struct SolveSetup {
  SolverConfig cfg;
  std::string mode;
  bool oracle_boundary = false;
  double oracle_ball_radius = 1.0;
};

double hyperbolic_ball_value(double R, double r) { return std::log(2.0 * R / (R * R - r * r)); }

SolveSetup build_solver_setup(const SolveArgs& a) {
  if (a.config.empty()) throw cli::ConfigError("a config file is required (--config)");
  const cli::ConfigMap cm = cli::parse_config(a.config, kSolveKeys);

  const int n = a.n_override > 0 ? a.n_override : cli::config_int(cm, "cone", "n", 5);
  const int k = a.k_override > 0 ? a.k_override : cli::config_int(cm, "cone", "k", 2);
  const double tau =
      a.tau_override >= 0.0 ? a.tau_override : cli::config_double(cm, "cone", "tau", 0.9);
  const bool normalized = cli::config_bool(cm, "cone", "normalized", true);

  SolveSetup setup;
  setup.cfg.cone = make_cone(n, k, tau, normalized);
  setup.cfg.geometry = make_geometry(n, cli::config_string(cm, "geometry", "kind", "flat"),
                                     cli::config_double(cm, "geometry", "r_lo", 0.0),
                                     cli::config_double(cm, "geometry", "r_hi", 1.0));
  const int intervals =
      a.grid_override > 0 ? a.grid_override : cli::config_int(cm, "grid", "intervals", 400);
  const std::string grid_kind = cli::config_string(cm, "grid", "kind", "ball");
  if (grid_kind != "ball" && grid_kind != "annulus") {
    throw cli::ConfigError("grid.kind must be ball or annulus");
  }
  setup.cfg.grid = make_uniform_grid(setup.cfg.geometry, intervals,
                                     grid_kind == "ball" ? GridKind::Ball : GridKind::Annulus);

  const double psi = cli::config_double(cm, "problem", "psi", 1.0);
  if (psi != 1.0) setup.cfg.psi.assign(setup.cfg.grid.nodes.size(), psi);
  setup.oracle_boundary = cli::config_bool(cm, "problem", "oracle_boundary", false);
  setup.oracle_ball_radius = cli::config_double(cm, "problem", "oracle_ball_radius", 1.0);
  if (setup.oracle_boundary) {
    const double R = setup.oracle_ball_radius;
    setup.cfg.boundary_hi = hyperbolic_ball_value(R, setup.cfg.geometry.r_hi());
    setup.cfg.boundary_lo = grid_kind == "ball"
                                ? 0.0
                                : hyperbolic_ball_value(R, setup.cfg.geometry.r_lo());
  } else {
    setup.cfg.boundary_lo = cli::config_double(cm, "problem", "boundary_lo", 0.0);
    setup.cfg.boundary_hi = cli::config_double(cm, "problem", "boundary_hi", 0.0);
  }

  setup.cfg.newton.tol_residual = cli::config_double(cm, "newton", "tol_residual", 1e-10);
  setup.cfg.newton.max_iter = cli::config_int(cm, "newton", "max_iter", 60);
  setup.cfg.newton.min_step = cli::config_double(cm, "newton", "min_step", 9.5367431640625e-07);
  setup.cfg.newton.max_backtracks = cli::config_int(cm, "newton", "max_backtracks", 20);
  setup.cfg.cone_margin = cli::config_double(cm, "newton", "cone_margin", 1e-12);

  setup.cfg.tau_targets = cli::config_list(cm, "continuation", "tau_targets", {});
  setup.cfg.m_schedule = cli::config_list(cm, "continuation", "m_schedule", {});

  setup.cfg.band.lo_frac = cli::config_double(cm, "diagnostics", "band_lo", 0.02);
  setup.cfg.band.hi_frac = cli::config_double(cm, "diagnostics", "band_hi", 0.2);
  if (!a.band_override.empty()) {
    const auto b = cli::parse_double_list(a.band_override);
    if (b.size() != 2) throw cli::ConfigError("--band expects 'lo,hi'");
    setup.cfg.band.lo_frac = b[0];
    setup.cfg.band.hi_frac = b[1];
  }

  setup.mode = cli::config_string(cm, "solve", "mode", "newton");
  return setup;
}

std::string solution_csv(const ConformalFactor& u, const SolverConfig& cfg) {
  const auto rows = node_diagnostics(u, cfg);
  std::string out = "r,u,u_r,u_rr,eig_radial,eig_tangential,f_value,cone_margin\n";
  for (const auto& row : rows) {
    out += cli::fmt_double(row.r) + "," + cli::fmt_double(row.u) + "," +
           cli::fmt_double(row.u_r) + "," + cli::fmt_double(row.u_rr) + "," +
           cli::fmt_double(row.eig_radial) + "," + cli::fmt_double(row.eig_tangential) + "," +
           cli::fmt_double(row.f_value) + "," + cli::fmt_double(row.cone_margin) + "\n";
  }
  return out;
}

void config_echo_json(JsonWriter& w, const SolveSetup& setup) {
  const SolverConfig& cfg = setup.cfg;
  w.key("config").begin_object();
  w.key("cone").begin_object();
  w.kv("n", cfg.cone.n).kv("k", cfg.cone.k).kv("tau", cfg.cone.tau);
  w.kv("normalized", cfg.cone.normalized);
  w.end_object();
  w.key("geometry").begin_object();
  const char* kind = cfg.geometry.kind() == WarpKind::Flat   ? "flat"
                     : cfg.geometry.kind() == WarpKind::Sin  ? "sin"
                     : cfg.geometry.kind() == WarpKind::Sinh ? "sinh"
                                                             : "spline";
  w.kv("kind", kind).kv("r_lo", cfg.geometry.r_lo()).kv("r_hi", cfg.geometry.r_hi());
  w.end_object();
  w.key("grid").begin_object();
  w.kv("intervals", static_cast<int>(cfg.grid.nodes.size()) - 1);
  w.kv("kind", cfg.grid.kind == GridKind::Ball ? "ball" : "annulus");
  w.end_object();
  w.key("problem").begin_object();
  w.kv("psi", cfg.psi.empty() ? 1.0 : cfg.psi.front());
  w.kv("boundary_lo", cfg.boundary_lo).kv("boundary_hi", cfg.boundary_hi);
  w.kv("oracle_boundary", setup.oracle_boundary);
  w.end_object();
  w.key("newton").begin_object();
  w.kv("tol_residual", cfg.newton.tol_residual).kv("max_iter", cfg.newton.max_iter);
  w.kv("min_step", cfg.newton.min_step).kv("cone_margin", cfg.cone_margin);
  w.end_object();
  w.key("band").begin_object();
  w.kv("lo_frac", cfg.band.lo_frac).kv("hi_frac", cfg.band.hi_frac);
  w.end_object();
  w.kv("mode", setup.mode);
  w.end_object();
}

void report_json(JsonWriter& w, const SolveReport& rep) {
  w.kv("converged", rep.converged);
  w.kv("iterations", rep.iterations);
  w.kv("final_residual", rep.final_residual);
  w.kv("min_cone_margin", rep.min_cone_margin);
  w.key("diagnostics").begin_object();
  w.kv("lipschitz", rep.diag.lipschitz);
  w.kv("hessian_max", rep.diag.hessian_max);
  w.kv("asymptotic_defect", rep.diag.asymptotic_defect);
  w.kv("gradient_bound_c", rep.diag.gradient_bound_c);
  w.end_object();
}

int cmd_solve(const SolveArgs& a) {
  const SolveSetup setup = build_solver_setup(a);
  const SolverConfig& cfg = setup.cfg;

  ConformalFactor u;
  SolveReport rep;
  std::vector<ContinuationStage> stages;
  std::vector<double> increments;
  bool singular_mode = false;
  SingularResult sing;

  cli::log_line(1, "solve mode=" + setup.mode + " n=" + std::to_string(cfg.cone.n) +
                       " k=" + std::to_string(cfg.cone.k));
  if (setup.mode == "newton") {
    std::tie(u, rep) = newton_solve(cfg, prephase_init(cfg));
  } else if (setup.mode == "continue_tau") {
    std::vector<double> targets = cfg.tau_targets;
    if (targets.empty()) targets = {cfg.cone.tau};
    stages = continue_tau(cfg, targets);
    u = stages.back().u;
    rep = stages.back().report;
  } else if (setup.mode == "continue_m") {
    if (cfg.m_schedule.empty()) throw cli::ConfigError("continue_m needs continuation.m_schedule");
    auto seq = continue_m(cfg, cfg.m_schedule);
    stages = seq.stages;
    increments = seq.increments;
    u = stages.back().u;
    rep = stages.back().report;
  } else if (setup.mode == "singular") {
    singular_mode = true;
    sing = singular_solve(cfg);
    u = sing.u;
    rep = sing.report;
    stages = sing.stages;
    increments = sing.increments;
  } else {
    throw cli::ConfigError("unknown solve.mode: " + setup.mode);
  }

  double sup_error = std::numeric_limits<double>::quiet_NaN();
  if (setup.oracle_boundary) {
    sup_error = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      const double exact = hyperbolic_ball_value(setup.oracle_ball_radius, u.grid.nodes[i]);
      sup_error = std::max(sup_error, std::abs(u.values[i] - exact));
    }
  }

  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.kv("command", "solve");
  config_echo_json(w, setup);
  report_json(w, rep);
  if (setup.oracle_boundary) {
    w.kv("sup_error", sup_error);
  } else {
    w.key("sup_error").null_value();
  }
  w.key("stages").begin_array();
  for (const auto& s : stages) {
    w.begin_object();
    w.kv("parameter", s.parameter);
    w.kv("iterations", s.report.iterations);
    w.kv("final_residual", s.report.final_residual);
    w.kv("hessian_max", s.report.diag.hessian_max);
    w.kv("lipschitz", s.report.diag.lipschitz);
    w.end_object();
  }
  w.end_array();
  w.key("increments").begin_array();
  for (double inc : increments) w.value(inc);
  w.end_array();
  if (singular_mode) {
    w.key("singular").begin_object();
    w.kv("fitted_sqrt_c", sing.fitted_sqrt_c);
    w.kv("upper_envelope_holds", sing.upper_envelope_holds);
    w.kv("collar_eps", sing.collar_eps);
    w.kv("collar_a", sing.collar_a);
    w.kv("lower_envelope_holds", sing.lower_envelope_holds);
    w.end_object();
  } else {
    w.key("singular").null_value();
  }
  w.end_object();

  fs::create_directories(a.out);
  cli::write_file((fs::path(a.out) / "solution.csv").string(), solution_csv(u, cfg));
  emit(w.str(), a.out, "report.json");

  const bool sup_ok = !setup.oracle_boundary || sup_error <= 5e-4;
  return rep.converged && sup_ok ? kExitOk : kExitNumerical;
}

int cmd_asymptotics(const SolveArgs& a) {
  const SolveSetup setup = build_solver_setup(a);
  const SolverConfig& cfg = setup.cfg;

  ConformalFactor u;
  u.grid = cfg.grid;
  if (!a.csv.empty()) {
    std::ifstream in(a.csv);
    if (!in) throw cli::ConfigError("cannot open solution csv: " + a.csv);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> us;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string cell;
      std::getline(ss, cell, ',');
      std::getline(ss, cell, ',');
      us.push_back(std::stod(cell));
    }
    if (us.size() != cfg.grid.nodes.size()) {
      throw cli::ConfigError("solution csv row count does not match the configured grid");
    }
    u.values = std::move(us);
  } else if (setup.mode == "singular") {
    u = singular_solve(cfg).u;
  } else if (setup.mode == "continue_m") {
    u = continue_m(cfg, cfg.m_schedule).stages.back().u;
  } else {
    u = newton_solve(cfg, prephase_init(cfg)).first;
  }

  const auto rows = asymptotic_dataset(u, cfg);
  if (rows.empty()) throw cli::ConfigError("asymptotics band contains no grid nodes");

  const double c_fit = fit_sqrt_envelope(rows);
  bool upper_holds = true;
  for (const auto& row : rows) {
    if (row.u_plus_ln_d > c_fit * std::sqrt(row.d) + 1e-12) upper_holds = false;
  }
  const double collar_eps = 0.1;
  const double collar_a = 1.0;
  const bool lower_holds = lower_envelope_holds(rows, collar_eps, collar_a);

  std::string csv = "d,u_plus_ln_d\n";
  for (const auto& row : rows) {
    csv += cli::fmt_double(row.d) + "," + cli::fmt_double(row.u_plus_ln_d) + "\n";
  }
  fs::create_directories(a.out);
  cli::write_file((fs::path(a.out) / "asymptotics.csv").string(), csv);

  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.kv("command", "asymptotics");
  config_echo_json(w, setup);
  w.key("band").begin_object();
  w.kv("lo_frac", cfg.band.lo_frac).kv("hi_frac", cfg.band.hi_frac);
  w.kv("nodes", static_cast<int>(rows.size()));
  w.end_object();
  w.kv("defect", asymptotic_defect(rows));
  w.kv("fitted_sqrt_c", c_fit);
  w.kv("upper_envelope_holds", upper_holds);
  w.key("lower_envelope").begin_object();
  w.kv("eps", collar_eps).kv("a", collar_a).kv("holds", lower_holds);
  w.end_object();
  w.end_object();

  emit(w.str(), a.out, "asymptotics.json");
  return upper_holds ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------------------

void structured_error(const std::string& type, const std::string& message) {
  JsonWriter w;
  w.begin_object();
  w.kv("schema_version", 1);
  w.key("error").begin_object();
  w.kv("type", type);
  w.kv("message", message);
  w.end_object();
  w.end_object();
  std::cout << w.str() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetric-cone conformal curvature toolkit"};
  app.require_subcommand(1);

  ConeArgs cone_args;
  auto* cone_cmd = app.add_subcommand("cone", "cone constants and structure checks");
  cone_cmd->add_option("--n", cone_args.n, "dimension");
  cone_cmd->add_option("--k", cone_args.k, "Garding index");
  cone_cmd->add_option("--tau", cone_args.tau, "deformation parameter");
  cone_cmd->add_flag("--unnormalized", cone_args.unnormalized, "skip the f(e/2) = 1 scaling");
  cone_cmd->add_option("--samples", cone_args.samples, "structure-check sample count");
  cone_cmd->add_option("--seed", cone_args.seed, "sampler seed");
  cone_cmd->add_option("--out", cone_args.out, "output directory");

  BarrierArgs barrier_args;
  auto* barrier_cmd = app.add_subcommand("barrier-check", "verify a barrier family");
  barrier_cmd
      ->add_option("--family", barrier_args.family, "AnnulusLog | LNSuper | GuanUpper | CollarLog")
      ->required();
  barrier_cmd->add_option("--n", barrier_args.n, "dimension");
  barrier_cmd->add_option("--k", barrier_args.k, "Garding index");
  barrier_cmd->add_option("--tau", barrier_args.tau, "deformation parameter");
  barrier_cmd->add_option("--m", barrier_args.m, "annulus boundary level");
  barrier_cmd->add_option("--eps", barrier_args.eps, "family eps parameter");
  barrier_cmd->add_option("--r-minus", barrier_args.r_minus, "annulus inner radius");
  barrier_cmd->add_option("--r-plus", barrier_args.r_plus, "annulus outer radius");
  barrier_cmd->add_option("--radius", barrier_args.radius, "supersolution ball radius");
  barrier_cmd->add_option("--xi-bar", barrier_args.xi_bar, "upper-barrier boundary value");
  barrier_cmd->add_option("--a", barrier_args.a, "collar quadratic coefficient");
  barrier_cmd->add_option("--warp", barrier_args.warp, "flat | sin | sinh");
  barrier_cmd->add_option("--r-lo", barrier_args.r_lo, "domain inner radius");
  barrier_cmd->add_option("--r-hi", barrier_args.r_hi, "domain outer radius");
  barrier_cmd->add_option("--grid", barrier_args.grid, "verification nodes");
  barrier_cmd->add_option("--eps-list", barrier_args.eps_list, "sweep: comma-separated eps values");
  barrier_cmd->add_option("--window-frac-list", barrier_args.frac_list,
                          "sweep: fractions of the admissible ratio window");
  barrier_cmd->add_option("--jobs", barrier_args.jobs, "parallel sweep evaluations");
  barrier_cmd->add_option("--out", barrier_args.out, "output directory");

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "radial Dirichlet / singular solves");
  solve_cmd->add_option("--config", solve_args.config, "config file")->required();
  solve_cmd->add_option("--out", solve_args.out, "output directory");
  solve_cmd->add_option("--grid", solve_args.grid_override, "grid intervals override");
  solve_cmd->add_option("--n", solve_args.n_override, "dimension override");
  solve_cmd->add_option("--k", solve_args.k_override, "Garding index override");
  solve_cmd->add_option("--tau", solve_args.tau_override, "tau override");
  solve_cmd->add_option("--band", solve_args.band_override, "diagnostic band 'lo,hi' fractions");

  SolveArgs asym_args;
  auto* asym_cmd = app.add_subcommand("asymptotics", "boundary asymptotics study");
  asym_cmd->add_option("--config", asym_args.config, "solve config file")->required();
  asym_cmd->add_option("--csv", asym_args.csv, "existing solution.csv to analyze");
  asym_cmd->add_option("--out", asym_args.out, "output directory");
  asym_cmd->add_option("--grid", asym_args.grid_override, "grid intervals override");
  asym_cmd->add_option("--band", asym_args.band_override, "band 'lo,hi' fractions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cone_cmd->parsed()) return cmd_cone(cone_args);
    if (barrier_cmd->parsed()) return cmd_barrier_check(barrier_args);
    if (solve_cmd->parsed()) return cmd_solve(solve_args);
    if (asym_cmd->parsed()) return cmd_asymptotics(asym_args);
  } catch (const cli::ConfigError& e) {
    structured_error("config", e.what());
    return kExitUsage;
  } catch (const ConeExit& e) {
    structured_error("cone_exit", e.what());
    return kExitNumerical;
  } catch (const NewtonFailure& e) {
    structured_error("newton", e.what());
    return kExitNumerical;
  } catch (const SolverError& e) {
    structured_error("solver", e.what());
    return kExitNumerical;
  } catch (const DomainError& e) {
    structured_error("domain", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    structured_error("internal", e.what());
    return kExitNumerical;
  }
  return kExitUsage;
}
