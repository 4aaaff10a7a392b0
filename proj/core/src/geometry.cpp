#include "schouten/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace schouten {

// ---------------------------------------------------------------------------
// CubicSpline

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const int n = static_cast<int>(x_.size());
  if (n < 3 || y_.size() != x_.size()) throw DomainError("spline needs at least 3 samples");
  for (int i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw DomainError("spline abscissae must be strictly increasing");
  }
  // natural spline: tridiagonal solve for the knot second derivatives
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  b[0] = b[n - 1] = 1.0;
  for (int i = 1; i < n - 1; ++i) {
    const double hl = x_[i] - x_[i - 1];
    const double hr = x_[i + 1] - x_[i];
    a[i] = hl / 6.0;
    b[i] = (hl + hr) / 3.0;
    c[i] = hr / 6.0;
    d[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
  }
  m_.assign(n, 0.0);
  std::vector<double> cp(n, 0.0), dp(n, 0.0);
  cp[0] = c[0] / b[0];
  dp[0] = d[0] / b[0];
  for (int i = 1; i < n; ++i) {
    const double denom = b[i] - a[i] * cp[i - 1];
    cp[i] = c[i] / denom;
    dp[i] = (d[i] - a[i] * dp[i - 1]) / denom;
  }
  m_[n - 1] = dp[n - 1];
  for (int i = n - 2; i >= 0; --i) m_[i] = dp[i] - cp[i] * m_[i + 1];
}

int CubicSpline::segment(double t) const {
  const int n = static_cast<int>(x_.size());
  if (t < x_.front() || t > x_.back()) throw DomainError("spline evaluated outside its samples");
  int lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (x_[mid] <= t ? lo : hi) = mid;
  }
  return lo;
}

double CubicSpline::value(double t) const {
  const int i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double A = (x_[i + 1] - t) / h;
  const double B = (t - x_[i]) / h;
  return A * y_[i] + B * y_[i + 1] +
         ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double t) const {
  const int i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double A = (x_[i + 1] - t) / h;
  const double B = (t - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         ((1.0 - 3.0 * A * A) * m_[i] + (3.0 * B * B - 1.0) * m_[i + 1]) * h / 6.0;
}

double CubicSpline::deriv2(double t) const {
  const int i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double A = (x_[i + 1] - t) / h;
  const double B = (t - x_[i]) / h;
  return A * m_[i] + B * m_[i + 1];
}

// ---------------------------------------------------------------------------
// RadialGeometry

RadialGeometry::RadialGeometry(int n, WarpKind kind, double r_lo, double r_hi)
    : n_(n), kind_(kind), r_lo_(r_lo), r_hi_(r_hi) {
  if (n < 3) throw DomainError("geometry dimension must be at least 3");
  if (!(r_lo >= 0.0) || !(r_hi > r_lo)) throw DomainError("radius interval must satisfy 0 <= r_lo < r_hi");
}

RadialGeometry RadialGeometry::flat(int n, double r_lo, double r_hi) {
  RadialGeometry g(n, WarpKind::Flat, r_lo, r_hi);
  g.verify_constant_curvature();
  return g;
}

RadialGeometry RadialGeometry::warped(int n, WarpKind kind, double r_lo, double r_hi) {
  if (kind == WarpKind::Spline) throw DomainError("use warped_spline for sampled warps");
  RadialGeometry g(n, kind, r_lo, r_hi);
  if (kind == WarpKind::Sin && r_hi >= M_PI) {
    throw DomainError("sin warp requires r_hi < pi to keep the warp positive");
  }
  g.verify_constant_curvature();
  return g;
}

RadialGeometry RadialGeometry::warped_spline(int n, std::vector<double> r, std::vector<double> w,
                                             double r_lo, double r_hi) {
  RadialGeometry g(n, WarpKind::Spline, r_lo, r_hi);
  if (!(r_lo > 0.0)) throw DomainError("spline warps require r_lo > 0");
  g.spline_ = CubicSpline(std::move(r), std::move(w));
  const int probes = 33;
  for (int i = 0; i <= probes; ++i) {
    const double rr = r_lo + (r_hi - r_lo) * i / probes;
    if (!(g.warp(rr) > 0.0)) throw DomainError("warp function must be positive on the domain");
  }
  return g;
}

void RadialGeometry::verify_constant_curvature() const {
  double expected = 0.0;
  switch (kind_) {
    case WarpKind::Flat: expected = 0.0; break;
    case WarpKind::Sin: expected = 0.5; break;
    case WarpKind::Sinh: expected = -0.5; break;
    case WarpKind::Spline: return;
  }
  const int probes = 32;
  const double lo = std::max(r_lo_, 1e-3 * (r_hi_ - r_lo_) + r_lo_);
  for (int i = 0; i <= probes; ++i) {
    const double r = lo + (r_hi_ - lo) * i / probes;
    if (r <= 0.0) continue;
    const RadialPair a = background_schouten(r);
    if (std::abs(a.radial - expected) > 1e-8 || std::abs(a.tangential - expected) > 1e-8) {
      throw DomainError("constant-curvature check failed for the background warp");
    }
  }
}

double RadialGeometry::warp(double r) const {
  switch (kind_) {
    case WarpKind::Flat: return r;
    case WarpKind::Sin: return std::sin(r);
    case WarpKind::Sinh: return std::sinh(r);
    case WarpKind::Spline: return spline_.value(r);
  }
  return r;
}

double RadialGeometry::warp_d(double r) const {
  switch (kind_) {
    case WarpKind::Flat: return 1.0;
    case WarpKind::Sin: return std::cos(r);
    case WarpKind::Sinh: return std::cosh(r);
    case WarpKind::Spline: return spline_.deriv(r);
  }
  return 1.0;
}

double RadialGeometry::warp_dd(double r) const {
  switch (kind_) {
    case WarpKind::Flat: return 0.0;
    case WarpKind::Sin: return -std::sin(r);
    case WarpKind::Sinh: return std::sinh(r);
    case WarpKind::Spline: return spline_.deriv2(r);
  }
  return 0.0;
}

double RadialGeometry::tangential_coeff(double r) const {
  const double w = warp(r);
  if (!(w > 0.0)) throw DomainError("warp is non-positive at the requested radius");
  return warp_d(r) / w;
}

RadialPair RadialGeometry::background_schouten(double r) const {
  if (kind_ == WarpKind::Flat) return RadialPair{0.0, 0.0};
  const double w = warp(r);
  if (!(w > 0.0)) throw DomainError("warp is non-positive at the requested radius");
  const double wd = warp_d(r);
  const double wdd = warp_dd(r);
  const double k_tan = (1.0 - wd * wd) / (w * w);
  RadialPair a;
  a.radial = -wdd / w - 0.5 * k_tan;
  a.tangential = 0.5 * k_tan;
  return a;
}

RadialPair RadialGeometry::background_schouten_at_center() const {
  // smooth pole: w(0) = 0, w'(0) = 1; sectional curvature K = -w'''(0),
  // constant across planes: A = K/2 Id
  switch (kind_) {
    case WarpKind::Flat: return RadialPair{0.0, 0.0};
    case WarpKind::Sin: return RadialPair{0.5, 0.5};
    case WarpKind::Sinh: return RadialPair{-0.5, -0.5};
    case WarpKind::Spline: throw DomainError("spline warps do not reach r = 0");
  }
  return RadialPair{0.0, 0.0};
}

// ---------------------------------------------------------------------------
// Conformal calculus

Eigen::MatrixXd conformal_schouten(const Eigen::MatrixXd& A0, const Eigen::VectorXd& grad_u,
                                   const Eigen::MatrixXd& hess_u) {
  const auto n = A0.rows();
  if (A0.cols() != n || hess_u.rows() != n || hess_u.cols() != n || grad_u.size() != n) {
    throw DomainError("conformal_schouten: inconsistent dimensions");
  }
  if (!A0.isApprox(A0.transpose(), 1e-12)) throw DomainError("conformal_schouten: A0 must be symmetric");
  const double g2 = grad_u.squaredNorm();
  return A0 - hess_u - 0.5 * g2 * Eigen::MatrixXd::Identity(n, n) +
         grad_u * grad_u.transpose();
}

Eigen::VectorXd neg_intrinsic_eigs(const Eigen::MatrixXd& A_gu, double u) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A_gu);
  return -std::exp(-2.0 * u) * es.eigenvalues();
}

SchoutenEigs radial_eigs(const RadialJet& jet, const RadialGeometry& geom, bool symmetric_limit) {
  if (jet.r < geom.r_lo() - 1e-12 || jet.r > geom.r_hi() + 1e-12) {
    throw DomainError("jet radius outside the geometry domain");
  }
  SchoutenEigs out;
  out.frame = Frame::Background;
  if (jet.r <= 0.0) {
    if (!symmetric_limit) throw DomainError("r = 0 requires the symmetric-limit flag");
    if (std::abs(jet.u_r) > 1e-12) throw DomainError("symmetric limit requires u_r(0) = 0");
    const RadialPair a = geom.background_schouten_at_center();
    out.radial = jet.u_rr - a.radial;
    out.tangential = jet.u_rr - a.tangential;  // u_r/r -> u_rr
    return out;
  }
  const RadialPair a = geom.background_schouten(jet.r);
  const double ct = geom.tangential_coeff(jet.r);
  out.radial = jet.u_rr - 0.5 * jet.u_r * jet.u_r - a.radial;
  out.tangential = ct * jet.u_r + 0.5 * jet.u_r * jet.u_r - a.tangential;
  return out;
}

SchoutenEigs radial_eigs_vform(const VJet& jet, const RadialGeometry& geom) {
  if (!geom.is_flat()) throw DomainError("the v-form eigenvalue split is implemented for flat backgrounds");
  if (!(jet.r > 0.0)) throw DomainError("v-form requires r > 0");
  if (!(jet.v > 0.0)) throw DomainError("v-form requires v > 0");
  const double lam = (jet.v_r / (jet.r * jet.v)) * (1.0 - jet.r * jet.v_r / (2.0 * jet.v));
  const double chi = jet.v_rr / jet.v - jet.v_r / (jet.v * jet.r);
  SchoutenEigs out;
  out.frame = Frame::Background;
  out.tangential = -lam;
  out.radial = -(lam + chi);
  return out;
}

SchoutenEigs to_intrinsic(const SchoutenEigs& eigs, double u) {
  if (eigs.frame == Frame::Intrinsic) return eigs;
  const double s = std::exp(-2.0 * u);
  return SchoutenEigs{s * eigs.radial, s * eigs.tangential, Frame::Intrinsic};
}

SchoutenEigs to_background(const SchoutenEigs& eigs, double u) {
  if (eigs.frame == Frame::Background) return eigs;
  const double s = std::exp(2.0 * u);
  return SchoutenEigs{s * eigs.radial, s * eigs.tangential, Frame::Background};
}

double scalar_curvature_sigma1(const RadialJet& jet, const RadialGeometry& geom,
                               bool symmetric_limit) {
  const SchoutenEigs bg = radial_eigs(jet, geom, symmetric_limit);
  const SchoutenEigs in = to_intrinsic(bg, jet.u);
  return in.radial + (geom.n() - 1) * in.tangential;
}

Eigen::MatrixXd ricci_from_schouten(const Eigen::MatrixXd& A) {
  const auto n = A.rows();
  if (n < 3 || A.cols() != n) throw DomainError("ricci_from_schouten needs a square matrix, n >= 3");
  return (static_cast<double>(n) - 2.0) * A +
         A.trace() * Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd schouten_from_ricci(const Eigen::MatrixXd& ric) {
  const auto n = ric.rows();
  if (n < 3 || ric.cols() != n) throw DomainError("schouten_from_ricci needs a square matrix, n >= 3");
  const double scal = ric.trace();
  return (ric - scal / (2.0 * (static_cast<double>(n) - 1.0)) * Eigen::MatrixXd::Identity(n, n)) /
         (static_cast<double>(n) - 2.0);
}

RadialPair ricci_from_schouten(const RadialPair& a, int n) {
  const double tr = a.radial + (n - 1) * a.tangential;
  return RadialPair{(n - 2.0) * a.radial + tr, (n - 2.0) * a.tangential + tr};
}

RadialPair schouten_from_ricci(const RadialPair& ric, int n) {
  const double scal = ric.radial + (n - 1) * ric.tangential;
  const double c = scal / (2.0 * (n - 1.0));
  return RadialPair{(ric.radial - c) / (n - 2.0), (ric.tangential - c) / (n - 2.0)};
}

}  // namespace schouten
