#pragma once

// The four explicit radial barrier families and their verification over
// parameter grids: the annulus log barrier, the large-solution radial
// supersolution, the trace-negative upper barrier on a boundary collar,
// and the collar log barrier with its eigenvalue lower bound.
//
// Unspecified constants of the constructions (c1, c2, C, C_hat, admissible
// radii) are measured from the evaluated grids and reported, never assumed.

#include <map>
#include <string>

#include "schouten/cone.hpp"
#include "schouten/geometry.hpp"

namespace schouten {

struct BarrierWorst {
  double r = 0.0;
  std::string what;
  double margin = 0.0;
};

struct BarrierCheckReport {
  std::string family;
  std::map<std::string, double> params;
  int grid_size = 0;
  double min_cone_margin = 0.0;
  double min_inequality_margin = 0.0;
  bool pass = false;
  BarrierWorst worst;
  std::map<std::string, double> measured;
};

// ---------------------------------------------------------------------------
// Annulus log barrier  w(r) = (beta+eps) ln((r_+ - r)/(r_+ - r_-)) + m,
// beta = 2/(mu_plus - 1); equivalently v(r) = e^{-Lambda} (r_+ - r)^{-beta-eps}.

struct AnnulusLogBarrier {
  ConeSpec cone;
  double mu = 0.0;
  double beta = 0.0;
  double eps = 0.0;
  double m = 0.0;
  double r_minus = 0.0;
  double r_plus = 0.0;
  double lambda_shift = 0.0;  // Lambda = m - (beta+eps) ln(r_+ - r_-)
};

// Requires mu_plus(cone) > 1, eps > 0, 0 < r_minus < r_plus < 1 and the
// admissibility window 1 < r_plus/r_minus < 1 + eps/(2(beta+2)).
AnnulusLogBarrier make_annulus_log(const ConeSpec& cone, double m, double eps,
                                   double r_minus, double r_plus);

// w and its radial derivatives; w(r_minus) = m exactly, w -> -inf at r_plus.
RadialJet annulus_barrier_value(const AnnulusLogBarrier& spec, double r);
VJet annulus_barrier_vform(const AnnulusLogBarrier& spec, double r);

// Flat-model verification at grid_points nodes on [r_minus, r_plus):
// cone membership of the eigenvector (-lam v^2)(slot, 1, ..., 1), the
// positivity of -lam v^2, the first-slot lower bound slot > -mu, and the
// measured-constant curvature lower bound ~ (r_+ - r_-)^{-2}.
BarrierCheckReport verify_annulus_barrier(const AnnulusLogBarrier& spec, int grid_points);

// Largest r_plus (decreasing sweep, ratio at mid-window) whose verification
// passes; search-determined replacement for the unspecified admissible radius.
double annulus_admissible_radius(const ConeSpec& cone, double eps, double m, int grid_points);

// ---------------------------------------------------------------------------
// Large-solution supersolution  w(r) = -ln(R^2 - r^2) + h(R^2 - r^2) + ln(2R),
// h(t) = sqrt(t + eps^2) - eps, on the flat ball of radius R.

struct LNSuperBarrier {
  int n = 3;
  double R = 0.0;
  double eps = 0.0;
  double alpha = 0.0;  // 2R
};

// Validates h(0) = 0 and (n-2) h'^2 + 2 h'' <= 0 on [0, R^2] numerically.
LNSuperBarrier make_ln_super(int n, double R, double eps);

RadialJet ln_supersolution_value(const LNSuperBarrier& spec, double r);

// Checks 2 Lap w + (n-2) |grad w|^2 <= n e^{2w} on [0, R) at grid_points nodes.
BarrierCheckReport verify_ln_supersolution(const LNSuperBarrier& spec, int grid_points);

// ---------------------------------------------------------------------------
// Trace-negative upper barrier  ubar = xi_bar + ln((d + delta^2)/delta^2)/(n-2)
// on the collar d = r_hi - r < delta of a radial ball model.

RadialJet guan_upper_value(double xi_bar, double delta, const RadialGeometry& geom, double r);

// Sweeps delta downward (factor 1/2, max 40 steps) until
// sigma_1(-g_0^{-1} A_{g_ubar}) <= 0 at every collar node; reports delta_star.
BarrierCheckReport verify_guan_upper(double xi_bar, const RadialGeometry& geom, int grid_points);

// ---------------------------------------------------------------------------
// Collar log barrier  phi = -ln(B (d + a d^2)),  B = 1/sqrt(1 - 2 eps),
// on the near-boundary set  d + a d^2 <= eps sqrt(1-2eps) / (100 Chat).

struct CollarLogBarrier {
  double eps = 0.0;
  double a = 1.0;
  double B = 0.0;
};

// Requires 0 < eps < 1/2 and a >= 1.
CollarLogBarrier make_collar_log(double eps, double a);

RadialJet collar_barrier_value(const CollarLogBarrier& spec, const RadialGeometry& geom, double r);

// Measures Chat from the geometry on the collar, grids the admissible set,
// and checks every intrinsic eigenvalue >= 1/2 - 1e-10 (hence normalized
// f^tau >= 1 - 1e-8 for the supplied cone), plus the exact log identity
// phi + ln d = ln sqrt(1-2eps) - ln(1 + a d).
BarrierCheckReport verify_collar_barrier(const CollarLogBarrier& spec, const ConeSpec& cone,
                                         const RadialGeometry& geom, int grid_points);

}  // namespace schouten
