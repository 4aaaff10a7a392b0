// Acceptance suite: eight numbered end-to-end checks with pinned tolerances,
// one [PASS]/[FAIL] line per criterion (indented measurement detail below
// each). Checks 1 and 6 contain sub-checks whose pinned reference values
// disagree with exactly computed quantities; they are reported as failures
// with the measured values rather than silently loosened.
//
// Usage: acceptance [--criterion N]

#include <cmath>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "schouten/barriers.hpp"
#include "schouten/cone.hpp"
#include "schouten/geometry.hpp"
#include "schouten/solver.hpp"

using namespace schouten;

namespace {

double u_star(double r) { return std::log(2.0 / (1.0 - r * r)); }

SolverConfig oracle_ball_cfg(int n, int k, double tau, int intervals, double r_hi = 0.9) {
  SolverConfig cfg;
  cfg.cone = make_cone(n, k, tau);
  cfg.geometry = RadialGeometry::flat(n, 0.0, r_hi);
  cfg.grid = make_uniform_grid(cfg.geometry, intervals, GridKind::Ball);
  cfg.boundary_hi = u_star(r_hi);
  return cfg;
}

ConformalFactor solve_with_ladder(const SolverConfig& cfg) {
  if (cfg.cone.tau == 0.0) return newton_solve(cfg, prephase_init(cfg)).first;
  std::vector<double> ladder;
  for (double t = 0.0; t < cfg.cone.tau; t += 0.25) ladder.push_back(t);
  ladder.push_back(cfg.cone.tau);
  return continue_tau(cfg, ladder).back().u;
}

double sup_error_vs_oracle(const ConformalFactor& u) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    s = std::max(s, std::abs(u.values[i] - u_star(u.grid.nodes[i])));
  }
  return s;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// --------------------------------------------------------------------------
// 1. cone constants

bool criterion1(std::ostream& out) {
  bool undeformed_ok = true;
  double worst_undeformed = 0.0;
  for (int n = 3; n <= 10; ++n) {
    for (int k = 1; k <= n; ++k) {
      const double dev = std::abs(mu_plus(make_cone(n, k, 1.0)) - double(n - k) / k);
      worst_undeformed = std::max(worst_undeformed, dev);
      undeformed_ok = undeformed_ok && dev <= 1e-10;
    }
  }
  out << "  undeformed mu_plus vs (n-k)/k over 3<=n<=10: worst |dev| = " << worst_undeformed
      << (undeformed_ok ? "  (<= 1e-10)\n" : "  EXCEEDS 1e-10\n");

  bool deformed_ok = true;
  int deformed_failures = 0;
  double worst_deformed = 0.0, worst_derived = 0.0;
  for (int n = 3; n <= 10; ++n) {
    for (int k = 1; k <= n; ++k) {
      for (double tau : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const ConeSpec cone = make_cone(n, k, tau);
        const double mu = mu_plus(cone);
        const double pinned = double(n - k) / k + (n - 1) * (1.0 - tau);
        const double dev = std::abs(mu - pinned);
        worst_deformed = std::max(worst_deformed, dev);
        if (dev > 1e-10) {
          deformed_ok = false;
          ++deformed_failures;
        }
        worst_derived = std::max(worst_derived, std::abs(mu - mu_plus_closed_form(cone)));
      }
    }
  }
  out << "  deformed mu_plus vs the pinned linear reference (n-k)/k + (n-1)(1-tau): worst |dev| = "
      << worst_deformed << ", failing cases = " << deformed_failures << " of 260\n";
  out << "  deformed mu_plus vs the membership-derived closed form "
         "[(1-tau)(n-1)(1+mu)+mu*tau]/[1+mu(1-tau)]: worst |dev| = "
      << worst_derived << "  (<= 1e-10)\n";
  if (!deformed_ok) {
    out << "  note: the pinned linear reference exceeds the hard bound mu_plus <= n-1 at small "
           "tau; bisection on actual cone membership cannot reproduce it\n";
  }
  return undeformed_ok && deformed_ok;
}

// --------------------------------------------------------------------------
// 2. structure suite

bool criterion2(std::ostream& out) {
  bool ok = true;
  const std::vector<std::tuple<int, int, double>> cones = {
      {5, 2, 1.0}, {7, 3, 1.0}, {5, 2, 0.75}, {9, 4, 0.5}};
  for (const auto& [n, k, tau] : cones) {
    const StructureReport rep = check_structure(make_cone(n, k, tau), 10000, 2026);
    out << "  (n=" << n << ", k=" << k << ", tau=" << tau << "): " << rep.violations
        << " violations in " << rep.samples << " samples\n";
    ok = ok && rep.violations == 0;
  }
  return ok;
}

// --------------------------------------------------------------------------
// 3. geometry oracles

bool criterion3(std::ostream& out) {
  bool ok = true;

  double worst_cc = 0.0;
  const RadialGeometry flat = RadialGeometry::flat(5, 0.0, 2.0);
  const RadialGeometry sph = RadialGeometry::warped(5, WarpKind::Sin, 0.0, 3.0);
  const RadialGeometry hyp = RadialGeometry::warped(5, WarpKind::Sinh, 0.0, 2.0);
  for (int i = 1; i <= 33; ++i) {
    const double r = 1.9 * i / 34.0 + 0.02;
    worst_cc = std::max(worst_cc, std::abs(flat.background_schouten(r).radial));
    worst_cc = std::max(worst_cc, std::abs(flat.background_schouten(r).tangential));
    worst_cc = std::max(worst_cc, std::abs(sph.background_schouten(r).radial - 0.5));
    worst_cc = std::max(worst_cc, std::abs(sph.background_schouten(r).tangential - 0.5));
    worst_cc = std::max(worst_cc, std::abs(hyp.background_schouten(r).radial + 0.5));
    worst_cc = std::max(worst_cc, std::abs(hyp.background_schouten(r).tangential + 0.5));
  }
  ok = ok && worst_cc <= 1e-8;
  out << "  constant-curvature eigenvalues (0, +1/2, -1/2): worst |dev| = " << worst_cc << "\n";

  // u-form vs v-form on random jets
  double worst_id = 0.0;
  const RadialGeometry flat6 = RadialGeometry::flat(6, 0.0, 10.0);
  std::mt19937_64 rng(12021);
  std::uniform_real_distribution<double> ur(0.05, 5.0), uu(-2.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    RadialJet jet{ur(rng), uu(rng), uu(rng), uu(rng)};
    const SchoutenEigs a = radial_eigs(jet, flat6);
    VJet vj{jet.r, std::exp(-jet.u), -jet.u_r * std::exp(-jet.u),
            (jet.u_r * jet.u_r - jet.u_rr) * std::exp(-jet.u)};
    const SchoutenEigs b = radial_eigs_vform(vj, flat6);
    const double scale = std::max({1.0, std::abs(a.radial), std::abs(a.tangential)});
    worst_id = std::max(worst_id, std::abs(a.radial - b.radial) / scale);
    worst_id = std::max(worst_id, std::abs(a.tangential - b.tangential) / scale);
  }
  ok = ok && worst_id <= 1e-12;
  out << "  u-form vs v-form split on 1000 random jets: worst relative |dev| = " << worst_id
      << "\n";

  // hyperbolic conformal factor across the ball grid
  double worst_hyp = 0.0;
  const RadialGeometry ball = RadialGeometry::flat(4, 0.0, 0.995);
  for (int i = 1; i <= 200; ++i) {
    const double r = 0.99 * i / 201.0;
    const double t = 1.0 - r * r;
    RadialJet jet{r, std::log(2.0 / t), 2.0 * r / t, 2.0 / t + 4.0 * r * r / (t * t)};
    const SchoutenEigs in = to_intrinsic(radial_eigs(jet, ball), jet.u);
    worst_hyp = std::max(worst_hyp, std::abs(in.radial - 0.5));
    worst_hyp = std::max(worst_hyp, std::abs(in.tangential - 0.5));
  }
  ok = ok && worst_hyp <= 1e-8;
  out << "  hyperbolic factor intrinsic eigenvalues vs 1/2 across the ball: worst |dev| = "
      << worst_hyp << "\n";
  return ok;
}

// --------------------------------------------------------------------------
// 4. barrier suite

bool criterion4(std::ostream& out) {
  bool ok = true;

  int annulus_passes = 0, annulus_total = 0;
  double worst_margin = 1e300;
  for (const auto& [n, k] : std::vector<std::pair<int, int>>{{5, 2}, {7, 2}, {7, 3}}) {
    const ConeSpec cone = make_cone(n, k, 1.0);
    const double beta = 2.0 / (mu_plus(cone) - 1.0);
    for (double eps : {0.3, 0.5, 0.7}) {
      for (double frac : {0.25, 0.5, 0.75}) {
        const double r_minus = 0.01;
        const double r_plus = r_minus * (1.0 + frac * eps / (2.0 * (beta + 2.0)));
        const auto rep =
            verify_annulus_barrier(make_annulus_log(cone, 0.0, eps, r_minus, r_plus), 1000);
        ++annulus_total;
        if (rep.pass) ++annulus_passes;
        worst_margin = std::min(worst_margin, std::min(rep.min_cone_margin,
                                                       rep.min_inequality_margin));
      }
    }
  }
  ok = ok && annulus_passes == annulus_total;
  out << "  annulus barrier: " << annulus_passes << "/" << annulus_total
      << " parameter points pass at 1000 nodes, worst margin = " << worst_margin << "\n";

  for (int n : {3, 5}) {
    const auto rep = verify_ln_supersolution(make_ln_super(n, 0.05, 0.01), 1000);
    ok = ok && rep.pass;
    out << "  large-solution supersolution n=" << n
        << ": min margin = " << rep.min_inequality_margin << (rep.pass ? "\n" : "  FAIL\n");
  }

  for (int n : {4, 5}) {
    const RadialGeometry geom = RadialGeometry::flat(n, 0.0, 1.0);
    const auto rep = verify_guan_upper(0.0, geom, 1000);
    ok = ok && rep.pass && rep.measured.count("delta_star") &&
         rep.measured.at("delta_star") > 0.0;
    out << "  trace-negative upper barrier n=" << n
        << ": delta_star = " << (rep.pass ? rep.measured.at("delta_star") : 0.0)
        << ", min margin = " << rep.min_inequality_margin << "\n";
  }

  {
    const auto rep = verify_collar_barrier(make_collar_log(0.1, 1.0), make_cone(5, 2, 1.0),
                                           RadialGeometry::flat(5, 0.0, 1.0), 1000);
    ok = ok && rep.pass && rep.min_inequality_margin >= -1e-10;
    out << "  collar barrier: eigenvalue floor margin = " << rep.min_inequality_margin
        << " (allowed >= -1e-10), C_hat = " << rep.measured.at("C_hat") << "\n";
  }
  return ok;
}

// --------------------------------------------------------------------------
// 5. exact-solution reproduction

bool criterion5(std::ostream& out) {
  bool ok = true;
  for (const auto& [n, k, tau] :
       std::vector<std::tuple<int, int, double>>{{3, 1, 0.0}, {5, 2, 0.5}, {5, 2, 0.9}}) {
    std::vector<double> hs, errs;
    double err400 = 0.0;
    for (int N : {100, 200, 400, 800}) {
      SolverConfig cfg = oracle_ball_cfg(n, k, tau, N);
      if (N >= 800) cfg.newton.tol_residual = 1e-9;  // h^{-2} rounding floor
      const ConformalFactor u = solve_with_ladder(cfg);
      const double err = sup_error_vs_oracle(u);
      hs.push_back(cfg.grid.h);
      errs.push_back(err);
      if (N == 400) err400 = err;
    }
    const double slope = ls_slope(hs, errs);
    const bool case_ok = err400 <= 5e-4 && std::abs(slope - 2.0) <= 0.2;
    ok = ok && case_ok;
    out << "  (n=" << n << ", k=" << k << ", tau=" << tau << "): sup error at N=400 = " << err400
        << " (<= 5e-4), order = " << slope << " (2.0 +- 0.2)" << (case_ok ? "\n" : "  FAIL\n");
  }
  return ok;
}

// --------------------------------------------------------------------------
// 6. singular limit and asymptotics

bool criterion6(std::ostream& out) {
  SolverConfig cfg = oracle_ball_cfg(5, 2, 0.9, 400, 1.0);
  cfg.boundary_hi = 0.0;
  cfg.newton.tol_residual = 1e-9;  // h^{-2} rounding floor at large m
  cfg.band.lo_frac = 0.05;
  cfg.band.hi_frac = 0.2;
  const std::vector<double> schedule = {2, 4, 6, 8, 10, 12};
  const double slack = 10.0 * cfg.grid.h * cfg.grid.h;

  bool monotone_ok = true;
  MSequenceResult seq;
  try {
    seq = continue_m(cfg, schedule);
  } catch (const MonotonicityViolation& e) {
    out << "  monotonicity violated at node " << e.node << "\n";
    return false;
  }
  out << "  monotone in m with slack 10 h^2 = " << slack << ": yes (6 stages)\n";

  // u_m <= u* + 10 h^2 at every node (pinned clause)
  bool upper_ok = true;
  double worst_overshoot = 0.0;
  double first_failing_m = 0.0;
  for (const auto& st : seq.stages) {
    double overshoot = 0.0;
    for (std::size_t i = 0; i + 1 < st.u.values.size(); ++i) {  // r = 1 excluded (u* infinite)
      overshoot = std::max(overshoot, st.u.values[i] - u_star(st.u.grid.nodes[i]) - slack);
    }
    if (overshoot > 0.0 && upper_ok) first_failing_m = st.parameter;
    if (overshoot > 0.0) upper_ok = false;
    worst_overshoot = std::max(worst_overshoot, overshoot);
  }
  out << "  u_m <= u* + 10 h^2 at every node: " << (upper_ok ? "yes" : "NO") << "";
  if (!upper_ok) {
    out << " (first failure at m = " << first_failing_m << ", max overshoot = " << worst_overshoot
        << "; the discrete boundary layer is below the grid scale for e^{-m} < h)";
  }
  out << "\n";

  const ConformalFactor& u = seq.stages.back().u;
  const auto rows = asymptotic_dataset(u, cfg);
  const double defect = asymptotic_defect(rows);
  const bool defect_ok = defect <= 0.05;
  out << "  final asymptotic defect sup |u + ln d| on d in [0.05, 0.2] = " << defect
      << " (pinned bound 0.05; the exact solution itself measures ln(2/1.8) = "
      << std::log(2.0 / 1.8) << ")\n";
  double oracle_rel = 0.0;
  for (const auto& row : rows) {
    oracle_rel = std::max(oracle_rel,
                          std::abs(row.u_plus_ln_d - std::log(2.0 / (2.0 - row.d))));
  }
  out << "  deviation from the closed form ln(2/(2-d)) on the band = " << oracle_rel << "\n";

  const double c_fit = fit_sqrt_envelope(rows);
  bool upper_env = true;
  for (const auto& row : rows) {
    if (row.u_plus_ln_d > c_fit * std::sqrt(row.d) + 1e-12) upper_env = false;
  }
  out << "  upper envelope u + ln d <= C sqrt(d) with fitted C = " << c_fit << ": "
      << (upper_env ? "holds at every band node\n" : "VIOLATED\n");

  const double collar_eps = 0.1, collar_a = 1.0;
  const auto collar = verify_collar_barrier(make_collar_log(collar_eps, collar_a), cfg.cone,
                                            cfg.geometry, 256);
  const bool lower_env = collar.pass && lower_envelope_holds(rows, collar_eps, collar_a);
  out << "  lower envelope u + ln d >= ln sqrt(1-2 eps) - ln(1 + a d) with searched (eps, a) = ("
      << collar_eps << ", " << collar_a << "): " << (lower_env ? "holds\n" : "VIOLATED\n");

  return monotone_ok && upper_ok && defect_ok && upper_env && lower_env;
}

// --------------------------------------------------------------------------
// 7. comparison and uniqueness

bool criterion7(std::ostream& out) {
  SolverConfig cfg;
  cfg.cone = make_cone(5, 2, 0.9);
  cfg.geometry = RadialGeometry::flat(5, 0.5, 1.0);
  cfg.grid = make_uniform_grid(cfg.geometry, 200, GridKind::Annulus);
  cfg.boundary_lo = 2.0;
  cfg.boundary_hi = 2.0;

  // two independently initialized tau ladders
  SolverConfig cfg0 = cfg;
  cfg0.cone.tau = 0.0;
  auto a = newton_solve(cfg0, prephase_init(cfg0, 1e-3));
  auto b = newton_solve(cfg0, prephase_init(cfg0, 0.21));
  for (double tau : {0.25, 0.5, 0.75, 0.9}) {
    SolverConfig st = cfg;
    st.cone.tau = tau;
    a = newton_solve(st, a.first);
    b = newton_solve(st, b.first);
  }
  double diff = 0.0;
  for (std::size_t i = 0; i < a.first.values.size(); ++i) {
    diff = std::max(diff, std::abs(a.first.values[i] - b.first.values[i]));
  }
  const bool unique_ok = diff <= 1e-6;
  out << "  independently initialized solves: sup difference = " << diff << " (<= 1e-6)\n";

  // annulus barrier below the solution
  double umin = 1e300;
  for (double v : a.first.values) umin = std::min(umin, v);
  const ConeSpec base = make_cone(5, 2, 1.0);
  const double eps = 0.5;
  const double beta = 2.0 / (mu_plus(base) - 1.0);
  const double r_minus = 0.6;
  const double r_plus = r_minus * (1.0 + 0.9 * eps / (2.0 * (beta + 2.0)));
  const AnnulusLogBarrier barrier = make_annulus_log(base, umin - 1.0, eps, r_minus, r_plus);

  const CompareSide sol = compare_side_from_solution(a.first, cfg);
  std::vector<int> nodes;
  std::vector<double> wv, wf;
  for (int i = 0; i < static_cast<int>(cfg.grid.nodes.size()); ++i) {
    const double r = cfg.grid.nodes[i];
    if (r < barrier.r_minus || r >= barrier.r_plus - 1e-12) continue;
    const VJet vj = annulus_barrier_vform(barrier, r);
    const SchoutenEigs bg = radial_eigs_vform(vj, cfg.geometry);
    EigVector lam(5, vj.v * vj.v * bg.tangential);
    lam[0] = vj.v * vj.v * bg.radial;
    nodes.push_back(i);
    wv.push_back(annulus_barrier_value(barrier, r).u);
    wf.push_back(f_value(lam, cfg.cone));
  }
  const CompareReport rep =
      compare(compare_side_from_values(nodes, wv, wf), sol, 10.0 * cfg.grid.h * cfg.grid.h);
  out << "  annulus barrier below the solution on " << nodes.size()
      << " overlap nodes: " << (rep.ok ? "yes" : "NO")
      << " (worst lower-minus-upper = " << rep.worst_violation << ")\n";
  return unique_ok && rep.ok;
}

// --------------------------------------------------------------------------
// 8. gauge and scaling, Jacobian oracle

bool criterion8(std::ostream& out) {
  // psi -> psi e^{2c}, xi -> xi - c shifts the solution by -c
  const double c = 0.7;
  SolverConfig cfg = oracle_ball_cfg(5, 2, 0.5, 200);
  const ConformalFactor base = solve_with_ladder(cfg);
  SolverConfig shifted = cfg;
  shifted.psi.assign(cfg.grid.nodes.size(), std::exp(2.0 * c));
  shifted.boundary_hi = cfg.boundary_hi - c;
  const ConformalFactor moved = solve_with_ladder(shifted);
  double worst_shift = 0.0;
  for (std::size_t i = 0; i < base.values.size(); ++i) {
    worst_shift = std::max(worst_shift, std::abs(moved.values[i] - (base.values[i] - c)));
  }
  const bool gauge_ok = worst_shift <= 1e-8;
  out << "  gauge shift by c = " << c << ": worst |u_shifted - (u - c)| = " << worst_shift
      << " (<= 1e-8)\n";

  // jacobian vs finite differences on 100 random admissible states
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> amp(-0.05, 0.05);
  double worst_rel = 0.0;
  int states = 0;
  for (const auto& [n, k, tau] :
       std::vector<std::tuple<int, int, double>>{{5, 2, 0.5}, {5, 2, 0.9}}) {
    const SolverConfig jcfg = oracle_ball_cfg(n, k, tau, 32);
    for (int state = 0; state < 50; ++state, ++states) {
      ConformalFactor u;
      u.grid = jcfg.grid;
      u.values.resize(jcfg.grid.nodes.size());
      const double a1 = amp(rng), a2 = amp(rng);
      for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double r = jcfg.grid.nodes[i];
        u.values[i] = u_star(r) + a1 * std::cos(3.0 * r) + a2 * r * r;
      }
      const Tridiagonal J = jacobian(u, jcfg);
      const int N = static_cast<int>(jcfg.grid.nodes.size()) - 1;
      double max_entry = 0.0;
      for (int i = 0; i <= N; ++i) {
        max_entry = std::max({max_entry, std::abs(J.lower[i]), std::abs(J.diag[i]),
                              std::abs(J.upper[i])});
      }
      const double h_fd = 3e-7;
      for (int j = 0; j <= N; ++j) {
        ConformalFactor up = u, dn = u;
        up.values[j] += h_fd;
        dn.values[j] -= h_fd;
        const std::vector<double> Fp = residual(up, jcfg);
        const std::vector<double> Fm = residual(dn, jcfg);
        for (int i = std::max(0, j - 1); i <= std::min(N, j + 1); ++i) {
          const double fd = (Fp[i] - Fm[i]) / (2 * h_fd);
          const double an = j == i - 1 ? J.lower[i] : j == i ? J.diag[i] : J.upper[i];
          worst_rel = std::max(worst_rel, std::abs(an - fd) / max_entry);
        }
      }
    }
  }
  const bool jac_ok = worst_rel <= 1e-6;
  out << "  analytic Jacobian vs finite differences on " << states
      << " random admissible states: worst relative |dev| = " << worst_rel << " (<= 1e-6)\n";
  return gauge_ok && jac_ok;
}

struct Criterion {
  int id;
  const char* summary;
  bool (*run)(std::ostream&);
};

const Criterion kCriteria[] = {
    {1, "cone constants: mu_plus exact and deformed", criterion1},
    {2, "structure suite: 1e4 samples per cone, zero violations", criterion2},
    {3, "geometry oracles: constant curvature, v-form identity, hyperbolic factor", criterion3},
    {4, "barrier suite: all four families verify", criterion4},
    {5, "exact-solution reproduction with second-order convergence", criterion5},
    {6, "singular limit: monotone m-schedule, defect and envelopes", criterion6},
    {7, "comparison and uniqueness on the annulus", criterion7},
    {8, "gauge scaling and Jacobian finite-difference oracle", criterion8},
};

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected = std::atoi(argv[i + 1]);
      ++i;
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }

  bool all_ok = true;
  for (const Criterion& crit : kCriteria) {
    if (selected != 0 && crit.id != selected) continue;
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = crit.run(detail);
    } catch (const std::exception& e) {
      detail << "  exception: " << e.what() << "\n";
      ok = false;
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << crit.id << ": " << crit.summary
              << "\n"
              << detail.str();
    std::cout.flush();
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
