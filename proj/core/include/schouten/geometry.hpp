#pragma once

// Schouten-tensor calculus on rotationally symmetric backgrounds: the
// conformal transformation law, closed-form radial eigenvalues on flat and
// warped-product metrics, and Schouten <-> Ricci conversion.
//
// Conventions. For g_u = e^{2u} g_0 the conformal law in a g_0-orthonormal
// frame reads A_{g_u} = A_{g_0} - hess(u) - |grad u|^2/2 Id + grad u (x) grad u.
// SchoutenEigs holds eigenvalues of -g^{-1} A_{g_u}: Background means
// -g_0^{-1} A_{g_u}, Intrinsic means -g_u^{-1} A_{g_u} = e^{-2u} x Background.

#include <Eigen/Core>

#include <vector>

#include "schouten/cone.hpp"

namespace schouten {

enum class WarpKind { Flat, Sin, Sinh, Spline };

enum class Frame { Background, Intrinsic };

struct RadialJet {
  double r = 0.0;
  double u = 0.0;
  double u_r = 0.0;
  double u_rr = 0.0;
};

// v-form jet for v = e^{-u} (g_u = v^{-2} g_0).
struct VJet {
  double r = 0.0;
  double v = 1.0;
  double v_r = 0.0;
  double v_rr = 0.0;
};

struct SchoutenEigs {
  double radial = 0.0;      // multiplicity 1
  double tangential = 0.0;  // multiplicity n-1
  Frame frame = Frame::Background;
};

// Eigenvalue pair of the background Schouten tensor A_{g_0} itself
// (radial / tangential slots of g_0^{-1} A_{g_0}).
struct RadialPair {
  double radial = 0.0;
  double tangential = 0.0;
};

// Natural cubic spline with analytic first and second derivatives
// (derivatives carry the usual O(h^2) sampling error).
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double value(double t) const;
  double deriv(double t) const;
  double deriv2(double t) const;

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
  int segment(double t) const;
};

// Rotationally symmetric background g_0 = dr^2 + w(r)^2 g_{S^{n-1}} on
// [r_lo, r_hi]; Flat is w(r) = r. The Sin / Sinh / Flat tags are verified
// at construction against their constant-curvature Schouten values
// (+1/2, -1/2, 0) on a sample grid, tolerance 1e-8.
class RadialGeometry {
 public:
  static RadialGeometry flat(int n, double r_lo, double r_hi);
  static RadialGeometry warped(int n, WarpKind kind, double r_lo, double r_hi);
  static RadialGeometry warped_spline(int n, std::vector<double> r, std::vector<double> w,
                                      double r_lo, double r_hi);

  int n() const { return n_; }
  WarpKind kind() const { return kind_; }
  bool is_flat() const { return kind_ == WarpKind::Flat; }
  double r_lo() const { return r_lo_; }
  double r_hi() const { return r_hi_; }
  double width() const { return r_hi_ - r_lo_; }

  double warp(double r) const;
  double warp_d(double r) const;
  double warp_dd(double r) const;

  // w'(r)/w(r); the caller handles the r -> 0 limit separately.
  double tangential_coeff(double r) const;

  // Eigenvalues of g_0^{-1} A_{g_0} from the sectional curvatures
  // -w''/w (radial planes) and (1 - w'^2)/w^2 (tangential planes).
  RadialPair background_schouten(double r) const;

  // Background value at the r = 0 symmetric pole (w(0) = 0, w'(0) = 1).
  RadialPair background_schouten_at_center() const;

 private:
  RadialGeometry(int n, WarpKind kind, double r_lo, double r_hi);
  void verify_constant_curvature() const;

  int n_ = 3;
  WarpKind kind_ = WarpKind::Flat;
  double r_lo_ = 0.0;
  double r_hi_ = 1.0;
  CubicSpline spline_;
};

// A_{g_u} in a g_0-orthonormal frame (0,2-tensor); independent of the value
// of u itself, only the derivatives enter.
Eigen::MatrixXd conformal_schouten(const Eigen::MatrixXd& A0, const Eigen::VectorXd& grad_u,
                                   const Eigen::MatrixXd& hess_u);

// Eigenvalues of -g_u^{-1} A_{g_u} given A_{g_u} in the background frame.
Eigen::VectorXd neg_intrinsic_eigs(const Eigen::MatrixXd& A_gu, double u);

// Background-frame eigenvalues of -g_0^{-1} A_{g_u} for a radial conformal
// factor. Requires r > 0 unless symmetric_limit is set, in which case
// u_r must vanish and the tangential ratio u_r/r is replaced by u_rr.
SchoutenEigs radial_eigs(const RadialJet& jet, const RadialGeometry& geom,
                         bool symmetric_limit = false);

// Same quantity computed through the v-form (flat backgrounds only):
// tangential = -lam, radial = -(lam + chi) with
// lam = (v_r/(r v))(1 - r v_r/(2 v)), chi = v_rr/v - v_r/(v r).
SchoutenEigs radial_eigs_vform(const VJet& jet, const RadialGeometry& geom);

SchoutenEigs to_intrinsic(const SchoutenEigs& eigs, double u);
SchoutenEigs to_background(const SchoutenEigs& eigs, double u);

// sigma_1 of the intrinsic eigenvalues, equal to -R_{g_u} / (2(n-1)).
double scalar_curvature_sigma1(const RadialJet& jet, const RadialGeometry& geom,
                               bool symmetric_limit = false);

// Ric = (n-2) A + trace(A) Id and its inverse, in an orthonormal frame.
Eigen::MatrixXd ricci_from_schouten(const Eigen::MatrixXd& A);
Eigen::MatrixXd schouten_from_ricci(const Eigen::MatrixXd& ric);
RadialPair ricci_from_schouten(const RadialPair& a, int n);
RadialPair schouten_from_ricci(const RadialPair& ric, int n);

}  // namespace schouten
