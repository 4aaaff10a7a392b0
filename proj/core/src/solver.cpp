#include "schouten/solver.hpp"

#include "schouten/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

namespace schouten {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string cone_exit_message(int node, int failing_j) {
  std::ostringstream os;
  os << "eigenvalue jet left the admissible cone at node " << node << " (sigma_" << failing_j
     << " <= 0)";
  return os.str();
}

int first_failing_sigma(std::span<const double> lambda, const ConeSpec& cone) {
  const EigVector y = deform(lambda, cone);
  const std::vector<double> e = sigma_prefix(y, cone.k);
  for (int j = 1; j <= cone.k; ++j) {
    if (!(e[j] > 0.0)) return j;
  }
  return 0;
}

double psi_at(const SolverConfig& cfg, int node) {
  return cfg.psi.empty() ? 1.0 : cfg.psi.at(static_cast<std::size_t>(node));
}

struct NodeJet {
  double d1 = 0.0;
  double d2 = 0.0;
};

NodeJet stencil_jet(const ConformalFactor& u, int i) {
  const double h = u.grid.h;
  NodeJet jet;
  if (i == 0) {  // ball centre: ghost reflection u_{-1} = u_1
    jet.d1 = 0.0;
    jet.d2 = 2.0 * (u.values[1] - u.values[0]) / (h * h);
  } else {
    jet.d1 = (u.values[i + 1] - u.values[i - 1]) / (2.0 * h);
    jet.d2 = (u.values[i + 1] - 2.0 * u.values[i] + u.values[i - 1]) / (h * h);
  }
  return jet;
}

// Full evaluation pass: residual, norm, per-node margins, admissibility.
struct Evaluation {
  bool admissible = true;
  int bad_node = -1;
  int failing_j = 0;
  EigVector bad_eigs;
  std::vector<double> F;
  double norm = 0.0;
  double min_margin = kInf;
  std::vector<double> margins;  // per interior node (index aligned with grid)
};

bool is_interior_row(const SolverConfig& cfg, int i, int N) {
  if (i == N) return false;
  if (i == 0) return cfg.grid.kind == GridKind::Ball;
  return true;
}

Evaluation evaluate(const ConformalFactor& u, const SolverConfig& cfg) {
  const int N = static_cast<int>(u.grid.nodes.size()) - 1;
  const int n = cfg.cone.n;
  Evaluation ev;
  ev.F.assign(static_cast<std::size_t>(N) + 1, 0.0);
  ev.margins.assign(static_cast<std::size_t>(N) + 1,
                    std::numeric_limits<double>::quiet_NaN());

  for (int i = 0; i <= N; ++i) {
    if (!is_interior_row(cfg, i, N)) {
      const double bc = (i == 0) ? cfg.boundary_lo : cfg.boundary_hi;
      ev.F[i] = u.values[i] - bc;
      continue;
    }
    const NodeJet jet = stencil_jet(u, i);
    const double r = u.grid.nodes[i];
    double e_rad, e_tan;
    if (i == 0) {
      const RadialPair a = cfg.geometry.background_schouten_at_center();
      e_rad = jet.d2 - a.radial;
      e_tan = jet.d2 - a.tangential;
    } else {
      const RadialPair a = cfg.geometry.background_schouten(r);
      const double ct = cfg.geometry.tangential_coeff(r);
      e_rad = jet.d2 - 0.5 * jet.d1 * jet.d1 - a.radial;
      e_tan = ct * jet.d1 + 0.5 * jet.d1 * jet.d1 - a.tangential;
    }
    EigVector lam(static_cast<std::size_t>(n), e_tan);
    lam[0] = e_rad;
    const double margin = cone_margin(lam, cfg.cone);
    ev.margins[i] = margin;
    ev.min_margin = std::min(ev.min_margin, margin);
    if (!(margin > 0.0)) {
      ev.admissible = false;
      ev.bad_node = i;
      ev.bad_eigs = lam;
      ev.failing_j = first_failing_sigma(lam, cfg.cone);
      return ev;
    }
    ev.F[i] = f_value(lam, cfg.cone) - psi_at(cfg, i) * std::exp(2.0 * u.values[i]);
  }
  for (double f : ev.F) ev.norm = std::max(ev.norm, std::abs(f));
  return ev;
}

void check_config(const SolverConfig& cfg) {
  if (cfg.grid.nodes.size() < 17) throw SolverError("grid needs at least 16 intervals");
  if (!cfg.psi.empty() && cfg.psi.size() != cfg.grid.nodes.size()) {
    throw SolverError("psi sample count must match the grid");
  }
  if (!cfg.psi.empty()) {
    for (double p : cfg.psi) {
      if (!(p > 0.0)) throw SolverError("psi must be positive");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// errors

ConeExit::ConeExit(int node_, EigVector eigenvalues_, int failing_j_)
    : SolverError(cone_exit_message(node_, failing_j_)),
      node(node_),
      eigenvalues(std::move(eigenvalues_)),
      failing_j(failing_j_) {}

NewtonFailure::NewtonFailure(Kind kind_, ConformalFactor last_state_, double last_residual_,
                             int iterations_)
    : SolverError(kind_ == Kind::MaxIter          ? "newton: iteration cap reached"
                  : kind_ == Kind::LineSearchStall ? "newton: line search stalled"
                                                   : "newton: singular tridiagonal factorization"),
      kind(kind_),
      last_state(std::move(last_state_)),
      last_residual(last_residual_),
      iterations(iterations_) {}

StepUnderflow::StepUnderflow(double last_good_tau_)
    : SolverError("continuation step underflow"), last_good_tau(last_good_tau_) {}

MonotonicityViolation::MonotonicityViolation(int node_, double prev_value_, double next_value_)
    : SolverError("boundary-data monotonicity violated along the m-schedule"),
      node(node_),
      prev_value(prev_value_),
      next_value(next_value_) {}

// ---------------------------------------------------------------------------
// grid and operator

RadialGrid make_uniform_grid(const RadialGeometry& geom, int intervals, GridKind kind) {
  if (intervals < 16) throw SolverError("grid needs at least 16 intervals");
  if (kind == GridKind::Ball && geom.r_lo() != 0.0) {
    throw SolverError("ball grids require r_lo = 0");
  }
  RadialGrid grid;
  grid.kind = kind;
  grid.h = geom.width() / intervals;
  grid.nodes.resize(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) {
    grid.nodes[i] = geom.r_lo() + geom.width() * i / intervals;
  }
  return grid;
}

SchoutenEigs node_eigs(const ConformalFactor& u, const SolverConfig& cfg, int node) {
  const int N = static_cast<int>(u.grid.nodes.size()) - 1;
  if (node < 0 || node > N) throw SolverError("node index out of range");
  const NodeJet jet = (node == 0 || node == N)
                          ? NodeJet{}  // filled below for boundary diagnostics
                          : stencil_jet(u, node);
  SchoutenEigs out;
  out.frame = Frame::Background;
  if (node == 0 && cfg.grid.kind == GridKind::Ball) {
    const NodeJet j0 = stencil_jet(u, 0);
    const RadialPair a = cfg.geometry.background_schouten_at_center();
    out.radial = j0.d2 - a.radial;
    out.tangential = j0.d2 - a.tangential;
    return out;
  }
  const double h = u.grid.h;
  NodeJet j = jet;
  if (node == 0) {  // one-sided second order (diagnostics only)
    j.d1 = (-3.0 * u.values[0] + 4.0 * u.values[1] - u.values[2]) / (2.0 * h);
    j.d2 = (2.0 * u.values[0] - 5.0 * u.values[1] + 4.0 * u.values[2] - u.values[3]) / (h * h);
  } else if (node == N) {
    j.d1 = (3.0 * u.values[N] - 4.0 * u.values[N - 1] + u.values[N - 2]) / (2.0 * h);
    j.d2 = (2.0 * u.values[N] - 5.0 * u.values[N - 1] + 4.0 * u.values[N - 2] - u.values[N - 3]) /
           (h * h);
  }
  const double r = u.grid.nodes[node];
  const RadialPair a = cfg.geometry.background_schouten(r);
  const double ct = cfg.geometry.tangential_coeff(r);
  out.radial = j.d2 - 0.5 * j.d1 * j.d1 - a.radial;
  out.tangential = ct * j.d1 + 0.5 * j.d1 * j.d1 - a.tangential;
  return out;
}

std::vector<double> residual(const ConformalFactor& u, const SolverConfig& cfg) {
  check_config(cfg);
  Evaluation ev = evaluate(u, cfg);
  if (!ev.admissible) throw ConeExit(ev.bad_node, ev.bad_eigs, ev.failing_j);
  return std::move(ev.F);
}

Tridiagonal jacobian(const ConformalFactor& u, const SolverConfig& cfg) {
  check_config(cfg);
  const int N = static_cast<int>(u.grid.nodes.size()) - 1;
  const int n = cfg.cone.n;
  const double h = u.grid.h;
  Tridiagonal t;
  t.lower.assign(static_cast<std::size_t>(N) + 1, 0.0);
  t.diag.assign(static_cast<std::size_t>(N) + 1, 0.0);
  t.upper.assign(static_cast<std::size_t>(N) + 1, 0.0);

  for (int i = 0; i <= N; ++i) {
    if (!is_interior_row(cfg, i, N)) {
      t.diag[i] = 1.0;
      continue;
    }
    const NodeJet jet = stencil_jet(u, i);
    const double r = u.grid.nodes[i];
    double e_rad, e_tan, ct = 0.0;
    if (i == 0) {
      const RadialPair a = cfg.geometry.background_schouten_at_center();
      e_rad = jet.d2 - a.radial;
      e_tan = jet.d2 - a.tangential;
    } else {
      const RadialPair a = cfg.geometry.background_schouten(r);
      ct = cfg.geometry.tangential_coeff(r);
      e_rad = jet.d2 - 0.5 * jet.d1 * jet.d1 - a.radial;
      e_tan = ct * jet.d1 + 0.5 * jet.d1 * jet.d1 - a.tangential;
    }
    EigVector lam(static_cast<std::size_t>(n), e_tan);
    lam[0] = e_rad;
    if (!in_cone(lam, cfg.cone)) {
      throw ConeExit(i, lam, first_failing_sigma(lam, cfg.cone));
    }
    const EigVector g = f_gradient(lam, cfg.cone).gradient;
    const double g_rad = g[0];
    const double g_tan = std::accumulate(g.begin() + 1, g.end(), 0.0);
    const double zeroth = -2.0 * psi_at(cfg, i) * std::exp(2.0 * u.values[i]);

    if (i == 0) {
      const double s = (g_rad + g_tan) * 2.0 / (h * h);
      t.diag[i] = -s + zeroth;
      t.upper[i] = s;
      continue;
    }
    const double inv_h2 = 1.0 / (h * h);
    const double inv_2h = 1.0 / (2.0 * h);
    // d e_rad / d u_{i-1,i,i+1} and d e_tan likewise
    const double rad_lo = inv_h2 + jet.d1 * inv_2h;
    const double rad_di = -2.0 * inv_h2;
    const double rad_hi = inv_h2 - jet.d1 * inv_2h;
    const double tan_lo = (ct + jet.d1) * (-inv_2h);
    const double tan_hi = (ct + jet.d1) * inv_2h;

    t.lower[i] = g_rad * rad_lo + g_tan * tan_lo;
    t.diag[i] = g_rad * rad_di + zeroth;
    t.upper[i] = g_rad * rad_hi + g_tan * tan_hi;
  }
  return t;
}

std::vector<double> solve_tridiagonal(const Tridiagonal& t, std::vector<double> rhs,
                                      const ConformalFactor& state) {
  const int m = static_cast<int>(rhs.size());
  std::vector<double> c(m, 0.0);
  double row_scale = 0.0;
  for (int i = 0; i < m; ++i) {
    row_scale = std::max({row_scale, std::abs(t.lower[i]), std::abs(t.diag[i]),
                          std::abs(t.upper[i])});
  }
  double piv = t.diag[0];
  if (std::abs(piv) <= 1e-14 * row_scale) {
    throw NewtonFailure(NewtonFailure::Kind::SingularJacobian, state, 0.0, 0);
  }
  c[0] = t.upper[0] / piv;
  rhs[0] /= piv;
  for (int i = 1; i < m; ++i) {
    piv = t.diag[i] - t.lower[i] * c[i - 1];
    if (std::abs(piv) <= 1e-14 * row_scale) {
      throw NewtonFailure(NewtonFailure::Kind::SingularJacobian, state, 0.0, 0);
    }
    c[i] = t.upper[i] / piv;
    rhs[i] = (rhs[i] - t.lower[i] * rhs[i - 1]) / piv;
  }
  for (int i = m - 2; i >= 0; --i) rhs[i] -= c[i] * rhs[i + 1];
  return rhs;
}

// ---------------------------------------------------------------------------
// drivers

namespace {

double boundary_level(const SolverConfig& cfg) {
  return cfg.grid.kind == GridKind::Ball ? cfg.boundary_hi
                                         : 0.5 * (cfg.boundary_lo + cfg.boundary_hi);
}

Diagnostics compute_diagnostics(const ConformalFactor& u, const SolverConfig& cfg) {
  Diagnostics d;
  const auto rows = asymptotic_dataset(u, cfg);
  d.asymptotic_defect = asymptotic_defect(rows);

  const int N = static_cast<int>(u.grid.nodes.size()) - 1;
  double sup_u = -kInf;
  for (double v : u.values) sup_u = std::max(sup_u, v);
  double max_ur = 0.0, max_urr = 0.0;
  for (int i = 0; i <= N; ++i) {
    double d1, d2;
    const double h = u.grid.h;
    if (i == 0) {
      d1 = (-3.0 * u.values[0] + 4.0 * u.values[1] - u.values[2]) / (2.0 * h);
      d2 = (2.0 * u.values[0] - 5.0 * u.values[1] + 4.0 * u.values[2] - u.values[3]) / (h * h);
    } else if (i == N) {
      d1 = (3.0 * u.values[N] - 4.0 * u.values[N - 1] + u.values[N - 2]) / (2.0 * h);
      d2 = (2.0 * u.values[N] - 5.0 * u.values[N - 1] + 4.0 * u.values[N - 2] -
            u.values[N - 3]) /
           (h * h);
    } else {
      const NodeJet j = stencil_jet(u, i);
      d1 = j.d1;
      d2 = j.d2;
    }
    max_ur = std::max(max_ur, std::abs(d1));
    max_urr = std::max(max_urr, std::abs(d2));
  }
  d.lipschitz = max_ur;
  d.hessian_max = max_urr;
  const double r_half = 0.5 * cfg.geometry.width();
  d.gradient_bound_c = max_ur / (1.0 / r_half + std::exp(sup_u));
  return d;
}

}  // namespace

ConformalFactor prephase_init(const SolverConfig& cfg, double bump_seed) {
  check_config(cfg);
  const double level = boundary_level(cfg);
  const double R = cfg.geometry.r_hi();
  const double target = std::max(1e-4, 10.0 * cfg.cone_margin);
  const int last = static_cast<int>(cfg.grid.nodes.size()) - 1;

  ConformalFactor u;
  u.grid = cfg.grid;
  const auto fill = [&](double s) {
    u.values.resize(cfg.grid.nodes.size());
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      const double r = cfg.grid.nodes[i];
      u.values[i] = level + s * (0.5 - r * r / (2.0 * R * R));
    }
    // Dirichlet rows exactly satisfied from the start
    u.values[last] = cfg.boundary_hi;
    if (cfg.grid.kind == GridKind::Annulus) u.values[0] = cfg.boundary_lo;
  };

  fill(0.0);
  {
    Evaluation ev = evaluate(u, cfg);
    if (ev.admissible && ev.min_margin >= target) return u;
  }
  for (double sign : {-1.0, +1.0}) {
    for (double s = std::abs(bump_seed); s <= 1048576.0; s *= 2.0) {
      fill(sign * s);
      Evaluation ev = evaluate(u, cfg);
      if (ev.admissible && ev.min_margin >= target) return u;
    }
  }
  throw SolverError("pre-phase failed to find an admissible initial state");
}

std::pair<ConformalFactor, SolveReport> newton_solve(const SolverConfig& cfg,
                                                     const ConformalFactor& initial) {
  check_config(cfg);
  if (!(cfg.cone.tau < 1.0)) throw SolverError("plain solves require tau < 1");

  ConformalFactor u = initial;
  Evaluation ev = evaluate(u, cfg);
  if (!ev.admissible) throw ConeExit(ev.bad_node, ev.bad_eigs, ev.failing_j);

  SolveReport report;
  int iter = 0;
  for (; iter < cfg.newton.max_iter; ++iter) {
    if (ev.norm <= cfg.newton.tol_residual) break;
    const Tridiagonal J = jacobian(u, cfg);
    std::vector<double> rhs(ev.F.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -ev.F[i];
    const std::vector<double> delta = solve_tridiagonal(J, std::move(rhs), u);

    bool accepted = false;
    double step = 1.0;
    for (int bt = 0; bt <= cfg.newton.max_backtracks && step >= cfg.newton.min_step;
         ++bt, step *= 0.5) {
      ConformalFactor trial = u;
      for (std::size_t i = 0; i < trial.values.size(); ++i) {
        trial.values[i] += step * delta[i];
      }
      Evaluation evt = evaluate(trial, cfg);
      if (evt.admissible && evt.min_margin >= cfg.cone_margin && evt.norm < ev.norm) {
        u = std::move(trial);
        ev = std::move(evt);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw NewtonFailure(NewtonFailure::Kind::LineSearchStall, u, ev.norm, iter);
    }
  }
  if (ev.norm > cfg.newton.tol_residual) {
    throw NewtonFailure(NewtonFailure::Kind::MaxIter, u, ev.norm, iter);
  }

  report.converged = true;
  report.iterations = iter;
  report.final_residual = ev.norm;
  report.min_cone_margin = ev.min_margin;
  report.cone_margins = ev.margins;
  report.diag = compute_diagnostics(u, cfg);
  return {std::move(u), report};
}

std::vector<ContinuationStage> continue_tau(const SolverConfig& cfg,
                                            const std::vector<double>& tau_targets) {
  check_config(cfg);
  if (tau_targets.empty()) throw SolverError("tau continuation needs at least one target");
  for (std::size_t i = 0; i < tau_targets.size(); ++i) {
    if (!(tau_targets[i] < 1.0)) throw SolverError("tau targets must be < 1");
    if (i > 0 && !(tau_targets[i] > tau_targets[i - 1])) {
      throw SolverError("tau targets must be increasing");
    }
  }

  std::vector<ContinuationStage> stages;
  SolverConfig base = cfg;
  base.cone.tau = 0.0;
  auto [u0, rep0] = newton_solve(base, prephase_init(base));
  double current = 0.0;
  ConformalFactor ucur = std::move(u0);
  if (tau_targets.front() == 0.0) stages.push_back({0.0, ucur, rep0});

  for (double target : tau_targets) {
    if (target == 0.0) continue;
    double attempt = target;
    SolveReport rep;
    while (true) {
      SolverConfig stage_cfg = cfg;
      stage_cfg.cone.tau = attempt;
      try {
        auto [us, rs] = newton_solve(stage_cfg, ucur);
        ucur = std::move(us);
        rep = rs;
        current = attempt;
        if (attempt == target) break;
        attempt = target;
      } catch (const NewtonFailure&) {
        const double next = 0.5 * (current + attempt);
        if (attempt - current < 1e-4) throw StepUnderflow(current);
        attempt = next;
      } catch (const ConeExit&) {
        const double next = 0.5 * (current + attempt);
        if (attempt - current < 1e-4) throw StepUnderflow(current);
        attempt = next;
      }
    }
    stages.push_back({target, ucur, rep});
  }
  return stages;
}

namespace {

// One Dirichlet stage at boundary level m; the first stage climbs the tau
// ladder from the semilinear start, later ones warm-start with the new
// Dirichlet rows already satisfied.
ContinuationStage solve_m_stage(const SolverConfig& cfg, double m, const ConformalFactor* warm) {
  SolverConfig stage_cfg = cfg;
  stage_cfg.boundary_lo = m;
  stage_cfg.boundary_hi = m;
  if (warm == nullptr) {
    std::vector<double> ladder;
    for (double t = 0.0; t < stage_cfg.cone.tau; t += 0.25) ladder.push_back(t);
    ladder.push_back(stage_cfg.cone.tau);
    auto stages = continue_tau(stage_cfg, ladder);
    return {m, stages.back().u, stages.back().report};
  }
  ConformalFactor init = *warm;
  init.values.back() = m;
  if (cfg.grid.kind == GridKind::Annulus) init.values.front() = m;
  auto [u, rep] = newton_solve(stage_cfg, init);
  return {m, std::move(u), rep};
}

// Monotonicity guard and the interior Cauchy increment against the previous
// stage, measured on the complement of the diagnostic collar.
double stage_increment(const SolverConfig& cfg, const ConformalFactor& prev,
                       const ConformalFactor& next) {
  const double slack = 10.0 * cfg.grid.h * cfg.grid.h;
  const double d_interior = cfg.band.hi_frac * cfg.geometry.width();
  double increment = -kInf;
  for (std::size_t i = 0; i < next.values.size(); ++i) {
    const double diff = next.values[i] - prev.values[i];
    if (diff < -slack) {
      throw MonotonicityViolation(static_cast<int>(i), prev.values[i], next.values[i]);
    }
    const double r = cfg.grid.nodes[i];
    const double d = cfg.grid.kind == GridKind::Ball
                         ? cfg.geometry.r_hi() - r
                         : std::min(r - cfg.geometry.r_lo(), cfg.geometry.r_hi() - r);
    if (d >= d_interior) increment = std::max(increment, diff);
  }
  return increment;
}

}  // namespace

MSequenceResult continue_m(const SolverConfig& cfg, const std::vector<double>& m_schedule) {
  check_config(cfg);
  if (m_schedule.empty()) throw SolverError("m continuation needs a schedule");
  for (std::size_t i = 1; i < m_schedule.size(); ++i) {
    if (!(m_schedule[i] > m_schedule[i - 1])) throw SolverError("m schedule must increase");
  }
  if (!(cfg.cone.tau < 1.0)) throw SolverError("m continuation requires tau < 1");

  MSequenceResult out;
  for (double m : m_schedule) {
    ContinuationStage stage =
        solve_m_stage(cfg, m, out.stages.empty() ? nullptr : &out.stages.back().u);
    if (!out.stages.empty()) {
      out.increments.push_back(stage_increment(cfg, out.stages.back().u, stage.u));
    }
    out.stages.push_back(std::move(stage));
  }
  return out;
}

SingularResult singular_solve(const SolverConfig& cfg) {
  check_config(cfg);
  if (!(cfg.cone.tau < 1.0)) throw SolverError("singular drivers require tau < 1");
  if (!(mu_plus(cfg.cone) > 1.0)) {
    throw SolverError("singular drivers require mu_plus > 1 for the configured cone");
  }

  std::vector<double> schedule = cfg.m_schedule;
  if (schedule.empty()) {
    for (double m = 2.0; m <= 16.0; m += 2.0) schedule.push_back(m);
  }
  if (schedule.size() < 2) throw SolverError("singular solve needs at least two m stages");

  MSequenceResult seq;
  bool settled = false;
  for (double m : schedule) {
    ContinuationStage stage =
        solve_m_stage(cfg, m, seq.stages.empty() ? nullptr : &seq.stages.back().u);
    if (!seq.stages.empty()) {
      seq.increments.push_back(stage_increment(cfg, seq.stages.back().u, stage.u));
    }
    seq.stages.push_back(std::move(stage));
    if (!seq.increments.empty() && seq.increments.back() < 1e-3) {
      settled = true;
      break;
    }
  }
  if (!settled) {
    throw ScheduleExhausted("m schedule exhausted before the interior increments settled");
  }

  SingularResult out;
  out.stages = seq.stages;
  out.increments = seq.increments;
  out.u = seq.stages.back().u;
  out.report = seq.stages.back().report;

  const auto rows = asymptotic_dataset(out.u, cfg);
  out.fitted_sqrt_c = fit_sqrt_envelope(rows);
  out.upper_envelope_holds = true;
  for (const auto& row : rows) {
    if (row.u_plus_ln_d > out.fitted_sqrt_c * std::sqrt(row.d) + 1e-12) {
      out.upper_envelope_holds = false;
    }
  }

  // lower envelope parameters from the collar-barrier search
  out.collar_eps = 0.1;
  out.collar_a = 1.0;
  const auto collar = verify_collar_barrier(make_collar_log(out.collar_eps, out.collar_a),
                                            cfg.cone, cfg.geometry, 256);
  if (!collar.pass) {
    out.collar_eps = 0.05;
    (void)verify_collar_barrier(make_collar_log(out.collar_eps, out.collar_a), cfg.cone,
                                cfg.geometry, 256);
  }
  out.lower_envelope_holds = lower_envelope_holds(rows, out.collar_eps, out.collar_a);
  return out;
}

// ---------------------------------------------------------------------------
// diagnostics and comparison

std::vector<NodeDiagnostics> node_diagnostics(const ConformalFactor& u, const SolverConfig& cfg) {
  const int N = static_cast<int>(u.grid.nodes.size()) - 1;
  const double h = u.grid.h;
  std::vector<NodeDiagnostics> rows(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i <= N; ++i) {
    NodeDiagnostics& row = rows[i];
    row.r = u.grid.nodes[i];
    row.u = u.values[i];
    if (i == 0) {
      if (cfg.grid.kind == GridKind::Ball) {
        row.u_r = 0.0;
        row.u_rr = 2.0 * (u.values[1] - u.values[0]) / (h * h);
      } else {
        row.u_r = (-3.0 * u.values[0] + 4.0 * u.values[1] - u.values[2]) / (2.0 * h);
        row.u_rr =
            (2.0 * u.values[0] - 5.0 * u.values[1] + 4.0 * u.values[2] - u.values[3]) / (h * h);
      }
    } else if (i == N) {
      row.u_r = (3.0 * u.values[N] - 4.0 * u.values[N - 1] + u.values[N - 2]) / (2.0 * h);
      row.u_rr = (2.0 * u.values[N] - 5.0 * u.values[N - 1] + 4.0 * u.values[N - 2] -
                  u.values[N - 3]) /
                 (h * h);
    } else {
      const NodeJet j = stencil_jet(u, i);
      row.u_r = j.d1;
      row.u_rr = j.d2;
    }
    const SchoutenEigs eigs = node_eigs(u, cfg, i);
    row.eig_radial = eigs.radial;
    row.eig_tangential = eigs.tangential;
    EigVector lam(static_cast<std::size_t>(cfg.cone.n), eigs.tangential);
    lam[0] = eigs.radial;
    row.cone_margin = cone_margin(lam, cfg.cone);
    row.f_value = row.cone_margin > 0.0
                      ? f_value(lam, cfg.cone) * std::exp(-2.0 * u.values[i])
                      : std::numeric_limits<double>::quiet_NaN();
  }
  return rows;
}

CompareSide compare_side_from_solution(const ConformalFactor& u, const SolverConfig& cfg) {
  const auto rows = node_diagnostics(u, cfg);
  CompareSide side;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    side.nodes.push_back(i);
    side.values.push_back(rows[i].u);
    side.f_intrinsic.push_back(rows[i].f_value);
  }
  return side;
}

CompareSide compare_side_from_values(const std::vector<int>& nodes, std::vector<double> values,
                                     std::vector<double> f_intrinsic) {
  if (nodes.size() != values.size() || nodes.size() != f_intrinsic.size()) {
    throw SolverError("compare side arrays must have matching lengths");
  }
  return CompareSide{nodes, std::move(values), std::move(f_intrinsic)};
}

CompareReport compare(const CompareSide& lower, const CompareSide& upper, double slack) {
  CompareReport rep;
  rep.min_f_dominance = kInf;
  rep.worst_violation = -kInf;
  std::size_t uj = 0;
  bool any = false;
  for (std::size_t i = 0; i < lower.nodes.size(); ++i) {
    while (uj < upper.nodes.size() && upper.nodes[uj] < lower.nodes[i]) ++uj;
    if (uj == upper.nodes.size()) break;
    if (upper.nodes[uj] != lower.nodes[i]) continue;
    any = true;
    const double fl = lower.f_intrinsic[i];
    const double fu = upper.f_intrinsic[uj];
    if (std::isfinite(fl) && std::isfinite(fu)) {
      const double dom = fl - fu;
      rep.min_f_dominance = std::min(rep.min_f_dominance, dom);
      if (dom < -1e-9 * std::max(std::abs(fl), std::abs(fu))) {
        throw SolverError("comparison precondition violated: lower side does not dominate in curvature value");
      }
    }
    const double viol = lower.values[i] - upper.values[uj];
    if (viol > rep.worst_violation) {
      rep.worst_violation = viol;
      rep.worst_node = lower.nodes[i];
    }
  }
  if (!any) throw SolverError("comparison sides share no grid nodes");
  rep.ok = rep.worst_violation <= slack;
  return rep;
}

// ---------------------------------------------------------------------------
// asymptotics

std::vector<AsymptoticsRow> asymptotic_dataset(const ConformalFactor& u, const SolverConfig& cfg) {
  const double width = cfg.geometry.width();
  const double d_lo = cfg.band.lo_frac * width;
  const double d_hi = cfg.band.hi_frac * width;
  std::vector<AsymptoticsRow> rows;
  for (std::size_t i = 0; i < u.grid.nodes.size(); ++i) {
    const double r = u.grid.nodes[i];
    const double d = cfg.grid.kind == GridKind::Ball
                         ? cfg.geometry.r_hi() - r
                         : std::min(r - cfg.geometry.r_lo(), cfg.geometry.r_hi() - r);
    if (d >= d_lo && d <= d_hi) {
      rows.push_back({d, u.values[i] + std::log(d)});
    }
  }
  return rows;
}

double asymptotic_defect(const std::vector<AsymptoticsRow>& rows) {
  double defect = 0.0;
  for (const auto& row : rows) defect = std::max(defect, std::abs(row.u_plus_ln_d));
  return defect;
}

double fit_sqrt_envelope(const std::vector<AsymptoticsRow>& rows) {
  double c = 0.0;
  for (const auto& row : rows) c = std::max(c, row.u_plus_ln_d / std::sqrt(row.d));
  return c;
}

bool lower_envelope_holds(const std::vector<AsymptoticsRow>& rows, double eps, double a) {
  for (const auto& row : rows) {
    const double bound = 0.5 * std::log(1.0 - 2.0 * eps) - std::log1p(a * row.d);
    if (row.u_plus_ln_d < bound) return false;
  }
  return true;
}

}  // namespace schouten
