#include "schouten/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace schouten {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void track_worst(BarrierCheckReport& rep, double r, const std::string& what, double margin) {
  if (rep.worst.what.empty() || margin < rep.worst.margin) {
    rep.worst = BarrierWorst{r, what, margin};
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// AnnulusLog

AnnulusLogBarrier make_annulus_log(const ConeSpec& cone, double m, double eps,
                                   double r_minus, double r_plus) {
  if (!(eps > 0.0)) throw DomainError("annulus barrier requires eps > 0");
  if (!(r_minus > 0.0 && r_plus > r_minus)) throw DomainError("annulus requires 0 < r_minus < r_plus");
  if (!(r_plus < 1.0)) throw DomainError("annulus barrier requires r_plus < 1");
  const double mu = mu_plus(cone);
  if (!(mu > 1.0)) throw DomainError("annulus barrier requires mu_plus > 1");
  const double beta = 2.0 / (mu - 1.0);
  const double window = 1.0 + eps / (2.0 * (beta + 2.0));
  const double ratio = r_plus / r_minus;
  if (!(ratio > 1.0 && ratio < window)) {
    std::ostringstream os;
    os << "annulus ratio r_plus/r_minus = " << ratio
       << " must lie in (1, 1 + eps/(2(beta+2))) = (1, " << window << ")";
    throw DomainError(os.str());
  }
  AnnulusLogBarrier spec;
  spec.cone = cone;
  spec.mu = mu;
  spec.beta = beta;
  spec.eps = eps;
  spec.m = m;
  spec.r_minus = r_minus;
  spec.r_plus = r_plus;
  spec.lambda_shift = m - (beta + eps) * std::log(r_plus - r_minus);
  return spec;
}

RadialJet annulus_barrier_value(const AnnulusLogBarrier& spec, double r) {
  if (!(r >= spec.r_minus && r < spec.r_plus)) {
    throw DomainError("annulus barrier evaluated outside [r_minus, r_plus)");
  }
  const double be = spec.beta + spec.eps;
  const double gap = spec.r_plus - r;
  RadialJet jet;
  jet.r = r;
  jet.u = be * std::log(gap / (spec.r_plus - spec.r_minus)) + spec.m;
  jet.u_r = -be / gap;
  jet.u_rr = -be / (gap * gap);
  return jet;
}

VJet annulus_barrier_vform(const AnnulusLogBarrier& spec, double r) {
  if (!(r >= spec.r_minus && r < spec.r_plus)) {
    throw DomainError("annulus barrier evaluated outside [r_minus, r_plus)");
  }
  const double be = spec.beta + spec.eps;
  const double gap = spec.r_plus - r;
  const double el = std::exp(-spec.lambda_shift);
  VJet jet;
  jet.r = r;
  jet.v = el * std::pow(gap, -be);
  jet.v_r = el * be * std::pow(gap, -be - 1.0);
  jet.v_rr = el * be * (be + 1.0) * std::pow(gap, -be - 2.0);
  return jet;
}

BarrierCheckReport verify_annulus_barrier(const AnnulusLogBarrier& spec, int grid_points) {
  if (grid_points < 8) throw DomainError("verify_annulus_barrier needs at least 8 grid points");
  const int n = spec.cone.n;
  const RadialGeometry geom = RadialGeometry::flat(n, spec.r_minus / 2.0, spec.r_plus);

  BarrierCheckReport rep;
  rep.family = "AnnulusLog";
  rep.params = {{"m", spec.m},       {"eps", spec.eps},     {"r_minus", spec.r_minus},
                {"r_plus", spec.r_plus}, {"beta", spec.beta}, {"mu_plus", spec.mu}};
  rep.grid_size = grid_points;
  rep.min_cone_margin = kInf;
  rep.min_inequality_margin = kInf;

  const double width = spec.r_plus - spec.r_minus;
  const double h = width / grid_points;
  const double span = width - 0.5 * h;  // blow-up end excluded by half a cell

  std::vector<double> radii(grid_points), factor(grid_points), slot(grid_points),
      fvals(grid_points);
  const double e2l = std::exp(-2.0 * spec.lambda_shift);
  const double be = spec.beta + spec.eps;

  double c1 = kInf, c2 = kInf;
  for (int i = 0; i < grid_points; ++i) {
    const double r = spec.r_minus + span * i / (grid_points - 1);
    radii[i] = r;
    const VJet vj = annulus_barrier_vform(spec, r);
    const SchoutenEigs bg = radial_eigs_vform(vj, geom);
    const double v2 = vj.v * vj.v;
    // intrinsic eigenvalues: tangential -lam v^2, radial -(lam+chi) v^2
    const double tan_i = v2 * bg.tangential;
    const double rad_i = v2 * bg.radial;
    factor[i] = tan_i;          // -lam v^2
    slot[i] = rad_i / tan_i;    // chi v^2/(lam v^2) + 1

    const double gap = spec.r_plus - r;
    const double scale = e2l * std::pow(gap, -2.0 * be - 2.0);
    const double c1_node = factor[i] / scale;
    c1 = std::min(c1, c1_node);
    track_worst(rep, r, "curvature_factor_positive", c1_node);
    rep.min_inequality_margin = std::min(rep.min_inequality_margin, c1_node);

    const double slot_margin = slot[i] + spec.mu;
    c2 = std::min(c2, slot_margin / spec.eps);
    track_worst(rep, r, "first_slot_above_minus_mu", slot_margin);
    rep.min_inequality_margin = std::min(rep.min_inequality_margin, slot_margin);

    EigVector eig(static_cast<std::size_t>(n), tan_i);
    eig[0] = rad_i;
    const double cm = cone_margin(eig, spec.cone);
    rep.min_cone_margin = std::min(rep.min_cone_margin, cm);
    track_worst(rep, r, "cone_membership", cm);
    fvals[i] = cm > 0.0 ? f_value(eig, spec.cone) : std::numeric_limits<double>::quiet_NaN();
  }

  rep.measured["c1"] = c1;
  rep.measured["c2"] = c2;

  // measured constant for the curvature lower bound
  //   f >= f(-mu + c2*eps, 1, ..., 1) / (C e^{2m} (r_+ - r_-)^2)
  double C_meas = 0.0;
  bool fvals_finite = rep.min_cone_margin > 0.0;
  if (fvals_finite && c2 > 0.0) {
    EigVector slot_vec(static_cast<std::size_t>(n), 1.0);
    slot_vec[0] = -spec.mu + c2 * spec.eps;
    const double f_slot = f_value(slot_vec, spec.cone);
    const double denom0 = std::exp(2.0 * spec.m) * width * width;
    for (int i = 0; i < grid_points; ++i) {
      C_meas = std::max(C_meas, f_slot / (fvals[i] * denom0));
    }
    rep.measured["C"] = C_meas;
    const double bound = f_slot / ((C_meas * (1.0 + 1e-12)) * denom0);
    for (int i = 0; i < grid_points; ++i) {
      const double margin = (fvals[i] - bound) / fvals[i];
      if (margin < -1e-9) track_worst(rep, radii[i], "curvature_lower_bound", margin);
    }
  }

  rep.pass = rep.min_cone_margin > 0.0 && rep.min_inequality_margin > 0.0 && c2 > 0.0;
  return rep;
}

double annulus_admissible_radius(const ConeSpec& cone, double eps, double m, int grid_points) {
  const double mu = mu_plus(cone);
  if (!(mu > 1.0)) throw DomainError("admissible radius search requires mu_plus > 1");
  const double beta = 2.0 / (mu - 1.0);
  const double ratio = 1.0 + 0.5 * eps / (2.0 * (beta + 2.0));
  double r_plus = 0.5;
  for (int step = 0; step < 60; ++step, r_plus *= 0.5) {
    const double r_minus = r_plus / ratio;
    try {
      const auto spec = make_annulus_log(cone, m, eps, r_minus, r_plus);
      if (verify_annulus_barrier(spec, grid_points).pass) return r_plus;
    } catch (const DomainError&) {
      // keep shrinking
    }
  }
  throw DomainError("no admissible annulus radius found");
}

// ---------------------------------------------------------------------------
// LNSuper

namespace {

double lns_h(double t, double eps) { return std::sqrt(t + eps * eps) - eps; }
double lns_hd(double t, double eps) { return 0.5 / std::sqrt(t + eps * eps); }
double lns_hdd(double t, double eps) { return -0.25 / std::pow(t + eps * eps, 1.5); }

}  // namespace

LNSuperBarrier make_ln_super(int n, double R, double eps) {
  if (n < 3) throw DomainError("ln-supersolution requires n >= 3");
  if (!(R > 0.0 && eps > 0.0)) throw DomainError("ln-supersolution requires R > 0 and eps > 0");
  if (std::abs(lns_h(0.0, eps)) > 0.0) throw DomainError("h(0) must vanish");
  const int probes = 1000;
  for (int i = 0; i <= probes; ++i) {
    const double t = R * R * i / probes;
    const double ode = (n - 2.0) * lns_hd(t, eps) * lns_hd(t, eps) + 2.0 * lns_hdd(t, eps);
    if (!(ode <= 1e-14)) {
      std::ostringstream os;
      os << "(n-2) h'^2 + 2 h'' = " << ode << " > 0 at t = " << t
         << "; shrink R or eps";
      throw DomainError(os.str());
    }
    if (!(lns_hd(t, eps) > 0.0)) throw DomainError("h' must be positive on [0, R^2]");
  }
  return LNSuperBarrier{n, R, eps, 2.0 * R};
}

RadialJet ln_supersolution_value(const LNSuperBarrier& spec, double r) {
  if (!(r >= 0.0 && r < spec.R)) throw DomainError("supersolution evaluated outside [0, R)");
  const double t = spec.R * spec.R - r * r;
  const double hd = lns_hd(t, spec.eps);
  const double hdd = lns_hdd(t, spec.eps);
  RadialJet jet;
  jet.r = r;
  jet.u = -std::log(t) + lns_h(t, spec.eps) + std::log(spec.alpha);
  jet.u_r = 2.0 * r / t - 2.0 * r * hd;
  jet.u_rr = 2.0 / t + 4.0 * r * r / (t * t) - 2.0 * hd + 4.0 * r * r * hdd;
  return jet;
}

BarrierCheckReport verify_ln_supersolution(const LNSuperBarrier& spec, int grid_points) {
  if (grid_points < 8) throw DomainError("verify_ln_supersolution needs at least 8 grid points");
  BarrierCheckReport rep;
  rep.family = "LNSuper";
  rep.params = {{"R", spec.R}, {"eps", spec.eps}, {"alpha", spec.alpha}, {"n", double(spec.n)}};
  rep.grid_size = grid_points;
  rep.min_cone_margin = kInf;  // no cone condition for the trace inequality
  rep.min_inequality_margin = kInf;

  const double h = spec.R / grid_points;
  const double span = spec.R - 0.5 * h;
  for (int i = 0; i < grid_points; ++i) {
    const double r = span * i / (grid_points - 1);
    const RadialJet jet = ln_supersolution_value(spec, r);
    const double lap = r > 0.0 ? jet.u_rr + (spec.n - 1) * jet.u_r / r : spec.n * jet.u_rr;
    const double lhs = 2.0 * lap + (spec.n - 2.0) * jet.u_r * jet.u_r;
    const double rhs = spec.n * std::exp(2.0 * jet.u);
    const double margin = (rhs - lhs) / rhs;
    rep.min_inequality_margin = std::min(rep.min_inequality_margin, margin);
    track_worst(rep, r, "trace_supersolution", margin);
  }
  rep.min_cone_margin = rep.min_inequality_margin;
  rep.pass = rep.min_inequality_margin > 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// GuanUpper

RadialJet guan_upper_value(double xi_bar, double delta, const RadialGeometry& geom, double r) {
  const double d = geom.r_hi() - r;
  if (!(d >= 0.0)) throw DomainError("upper barrier evaluated outside the domain");
  const int n = geom.n();
  const double den = d + delta * delta;
  RadialJet jet;
  jet.r = r;
  jet.u = xi_bar + std::log(den / (delta * delta)) / (n - 2.0);
  jet.u_r = -1.0 / ((n - 2.0) * den);
  jet.u_rr = -1.0 / ((n - 2.0) * den * den);
  return jet;
}

BarrierCheckReport verify_guan_upper(double xi_bar, const RadialGeometry& geom, int grid_points) {
  if (grid_points < 8) throw DomainError("verify_guan_upper needs at least 8 grid points");
  const int n = geom.n();
  BarrierCheckReport rep;
  rep.family = "GuanUpper";
  rep.params = {{"xi_bar", xi_bar}, {"n", double(n)}};
  rep.grid_size = grid_points;

  double delta = 0.5 * geom.width();
  for (int sweep = 0; sweep < 40; ++sweep, delta *= 0.5) {
    double min_margin = kInf;
    BarrierWorst worst;
    bool ok = true;
    for (int i = 0; i <= grid_points; ++i) {
      const double d = delta * i / grid_points;
      const double r = geom.r_hi() - d;
      if (r <= geom.r_lo() + 1e-12 || r <= 1e-9) {
        ok = false;  // collar leaves the chart; shrink
        break;
      }
      const RadialJet jet = guan_upper_value(xi_bar, delta, geom, r);
      const RadialPair a = geom.background_schouten(r);
      const double lap = jet.u_rr + (n - 1) * geom.tangential_coeff(r) * jet.u_r;
      const double sigma1 = lap + 0.5 * (n - 2.0) * jet.u_r * jet.u_r -
                            (a.radial + (n - 1) * a.tangential);
      const double margin = -sigma1;  // need sigma1 <= 0
      if (margin < min_margin) {
        min_margin = margin;
        worst = BarrierWorst{r, "trace_nonpositive", margin};
      }
      if (!(margin >= 0.0)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      rep.pass = true;
      rep.min_inequality_margin = min_margin;
      rep.min_cone_margin = min_margin;
      rep.worst = worst;
      rep.measured["delta_star"] = delta;
      rep.params["delta"] = delta;
      return rep;
    }
  }
  rep.pass = false;
  rep.min_inequality_margin = -kInf;
  rep.min_cone_margin = -kInf;
  rep.worst = BarrierWorst{geom.r_hi(), "no_admissible_collar", -kInf};
  return rep;
}

// ---------------------------------------------------------------------------
// CollarLog

CollarLogBarrier make_collar_log(double eps, double a) {
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("collar barrier requires 0 < eps < 1/2");
  if (!(a >= 1.0)) throw DomainError("collar barrier requires a >= 1");
  return CollarLogBarrier{eps, a, 1.0 / std::sqrt(1.0 - 2.0 * eps)};
}

RadialJet collar_barrier_value(const CollarLogBarrier& spec, const RadialGeometry& geom, double r) {
  const double d = geom.r_hi() - r;
  if (!(d > 0.0)) throw DomainError("collar barrier requires d > 0");
  const double psi = d + spec.a * d * d;
  RadialJet jet;
  jet.r = r;
  jet.u = -std::log(spec.B * psi);
  jet.u_r = (1.0 + 2.0 * spec.a * d) / psi;
  jet.u_rr = (std::pow(1.0 + 2.0 * spec.a * d, 2) - 2.0 * spec.a * psi) / (psi * psi);
  return jet;
}

BarrierCheckReport verify_collar_barrier(const CollarLogBarrier& spec, const ConeSpec& cone,
                                         const RadialGeometry& geom, int grid_points) {
  if (grid_points < 8) throw DomainError("verify_collar_barrier needs at least 8 grid points");
  const int n = geom.n();
  BarrierCheckReport rep;
  rep.family = "CollarLog";
  rep.params = {{"eps", spec.eps}, {"a", spec.a}, {"B", spec.B}, {"n", double(n)}};
  rep.grid_size = grid_points;
  rep.min_cone_margin = kInf;
  rep.min_inequality_margin = kInf;

  // measure Chat = max(|A_{g0}|, |hess d|) over a probe collar
  double c_hat = 0.0;
  {
    const double probe_depth = std::min(0.05 * geom.width(), 0.5 * geom.width());
    for (int i = 1; i <= 64; ++i) {
      const double r = geom.r_hi() - probe_depth * i / 64.0;
      const RadialPair a = geom.background_schouten(r);
      const double a_mag = std::max(std::abs(a.radial), std::abs(a.tangential));
      const double hess_d = std::abs(geom.tangential_coeff(r));  // tangential slope of d
      c_hat = std::max({c_hat, a_mag, hess_d});
    }
    c_hat = std::max(c_hat, 1.0);
  }
  rep.measured["C_hat"] = c_hat;

  // admissible set: d + a d^2 <= eps sqrt(1-2eps) / (100 Chat)
  const double bound = spec.eps * std::sqrt(1.0 - 2.0 * spec.eps) / (100.0 * c_hat);
  const double d_max = (-1.0 + std::sqrt(1.0 + 4.0 * spec.a * bound)) / (2.0 * spec.a);
  rep.measured["d_max"] = d_max;

  const double vb = 1.0 - 2.0 * spec.eps;  // 1/B^2
  bool f_floor_ok = true;
  bool identity_ok = true;
  for (int i = 1; i <= grid_points; ++i) {
    const double r = geom.r_hi() - d_max * i / grid_points;
    const double d = geom.r_hi() - r;  // the distance the barrier evaluation sees
    const RadialJet jet = collar_barrier_value(spec, geom, r);
    const SchoutenEigs bg = radial_eigs(jet, geom);
    const SchoutenEigs in = to_intrinsic(bg, jet.u);

    const double eig_margin = std::min(in.radial, in.tangential) - 0.5;
    rep.min_inequality_margin = std::min(rep.min_inequality_margin, eig_margin);
    track_worst(rep, r, "eigenvalues_at_least_half", eig_margin);

    EigVector eig(static_cast<std::size_t>(n), in.tangential);
    eig[0] = in.radial;
    const double cm = cone_margin(eig, cone);
    rep.min_cone_margin = std::min(rep.min_cone_margin, cm);
    const double fv = cm > 0.0 ? f_value(eig, cone) : -kInf;
    if (!(fv >= 1.0 - 1e-8)) {
      f_floor_ok = false;
      track_worst(rep, r, "f_value_at_least_one", fv - 1.0);
    }

    // exact identity: phi + ln d = ln sqrt(1-2eps) - ln(1 + a d)
    const double identity = jet.u + std::log(d) -
                            (0.5 * std::log(vb) - std::log1p(spec.a * d));
    if (std::abs(identity) > 1e-12) {
      identity_ok = false;
      track_worst(rep, r, "log_identity", -std::abs(identity));
    }
  }

  rep.pass = rep.min_inequality_margin >= -1e-10 && rep.min_cone_margin > 0.0 && f_floor_ok &&
             identity_ok;
  return rep;
}

}  // namespace schouten
