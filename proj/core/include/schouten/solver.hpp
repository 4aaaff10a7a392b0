#pragma once

// Damped-Newton solver for the radial Dirichlet problem
//   f^tau(lambda(-g_0^{-1} A_{g_u})) = psi e^{2u},  u = xi on the boundary,
// with continuation in tau and in the boundary level m, and the singular
// (boundary blow-up) solution as the monotone m -> infinity limit.
//
// Discretization: second-order central differences on a uniform grid with a
// ghost-node reflection enforcing u_r(0) = 0 on balls; Dirichlet rows are
// algebraic; the Jacobian is tridiagonal and assembled analytically.
//
// A single solve is sequential; distinct solves share no mutable state and
// may run concurrently. All types are value-semantic.

#include <string>
#include <vector>

#include "schouten/cone.hpp"
#include "schouten/geometry.hpp"

namespace schouten {

enum class GridKind { Ball, Annulus };

struct RadialGrid {
  GridKind kind = GridKind::Ball;
  std::vector<double> nodes;  // strictly increasing, uniform spacing
  double h = 0.0;
};

// intervals >= 16; ball grids must start at r_lo = 0.
RadialGrid make_uniform_grid(const RadialGeometry& geom, int intervals, GridKind kind);

struct ConformalFactor {
  RadialGrid grid;
  std::vector<double> values;
};

struct NewtonOptions {
  double tol_residual = 1e-10;
  int max_iter = 60;
  int max_backtracks = 20;
  double min_step = 9.5367431640625e-07;  // 2^-20
};

struct BandSpec {
  double lo_frac = 0.02;  // fractions of the domain width
  double hi_frac = 0.2;
};

struct SolverConfig {
  ConeSpec cone;
  RadialGeometry geometry = RadialGeometry::flat(3, 0.0, 1.0);
  RadialGrid grid;
  std::vector<double> psi;        // node samples; empty means psi == 1
  double boundary_lo = 0.0;       // annulus inner Dirichlet value
  double boundary_hi = 0.0;       // outer Dirichlet value
  NewtonOptions newton;
  double cone_margin = 1e-12;     // minimum admissible interior margin along iterates
  std::vector<double> tau_targets;
  std::vector<double> m_schedule;
  BandSpec band;
};

struct Diagnostics {
  double lipschitz = 0.0;          // max |u_r|
  double hessian_max = 0.0;        // max |u_rr|
  double asymptotic_defect = 0.0;  // sup over the band of |u + ln d|
  double gradient_bound_c = 0.0;   // max |u_r| / (r_half^{-1} + e^{sup u})
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double final_residual = 0.0;
  double min_cone_margin = 0.0;
  std::vector<double> cone_margins;  // per interior node
  Diagnostics diag;
};

// --- structured errors ------------------------------------------------------

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConeExit : public SolverError {
 public:
  ConeExit(int node, EigVector eigenvalues, int failing_j);
  int node;
  EigVector eigenvalues;
  int failing_j;
};

class NewtonFailure : public SolverError {
 public:
  enum class Kind { MaxIter, LineSearchStall, SingularJacobian };
  NewtonFailure(Kind kind, ConformalFactor last_state, double last_residual, int iterations);
  Kind kind;
  ConformalFactor last_state;
  double last_residual;
  int iterations;
};

class StepUnderflow : public SolverError {
 public:
  explicit StepUnderflow(double last_good_tau);
  double last_good_tau;
};

class MonotonicityViolation : public SolverError {
 public:
  MonotonicityViolation(int node, double prev_value, double next_value);
  int node;
  double prev_value;
  double next_value;
};

class ScheduleExhausted : public SolverError {
 public:
  using SolverError::SolverError;
};

// --- discrete operator ------------------------------------------------------

// Background-frame eigenvalue pair at an interior node from the 3-point jet.
SchoutenEigs node_eigs(const ConformalFactor& u, const SolverConfig& cfg, int node);

// Discrete residual; throws ConeExit when an interior jet leaves the cone.
std::vector<double> residual(const ConformalFactor& u, const SolverConfig& cfg);

struct Tridiagonal {
  std::vector<double> lower, diag, upper;
};

// Analytic Jacobian of the discrete residual (3-point stencils).
Tridiagonal jacobian(const ConformalFactor& u, const SolverConfig& cfg);

// Solves T x = rhs by the Thomas sweep; throws NewtonFailure(SingularJacobian).
std::vector<double> solve_tridiagonal(const Tridiagonal& t, std::vector<double> rhs,
                                      const ConformalFactor& state);

// --- drivers ----------------------------------------------------------------

// Constant at the boundary level plus the smallest admissible multiple of the
// bump 1/2 - r^2/(2 r_hi^2); deterministic.
ConformalFactor prephase_init(const SolverConfig& cfg, double bump_seed = 1e-3);

std::pair<ConformalFactor, SolveReport> newton_solve(const SolverConfig& cfg,
                                                     const ConformalFactor& initial);

struct ContinuationStage {
  double parameter = 0.0;  // tau or m
  ConformalFactor u;
  SolveReport report;
};

// Solves at tau = 0 from the pre-phase init, then warm-starts each target;
// adaptive bisection of the tau step on failure (min step 1e-4).
std::vector<ContinuationStage> continue_tau(const SolverConfig& cfg,
                                            const std::vector<double>& tau_targets);

struct MSequenceResult {
  std::vector<ContinuationStage> stages;
  std::vector<double> increments;  // sup of u_{j+1} - u_j over d >= band.lo
};

// Dirichlet solves along an increasing m-schedule with warm starts; asserts
// u_{m_{j+1}} >= u_{m_j} - 10 h^2 at every node.
MSequenceResult continue_m(const SolverConfig& cfg, const std::vector<double>& m_schedule);

struct SingularResult {
  ConformalFactor u;
  SolveReport report;
  std::vector<ContinuationStage> stages;
  std::vector<double> increments;
  double fitted_sqrt_c = 0.0;    // smallest C with u + ln d <= C sqrt(d) on the band
  bool upper_envelope_holds = false;
  double collar_eps = 0.0;
  double collar_a = 0.0;
  bool lower_envelope_holds = false;
};

// Runs continue_m until interior increments fall below 1e-3 (default cap
// m = 16), then reports the last iterate with asymptotic diagnostics.
SingularResult singular_solve(const SolverConfig& cfg);

// --- node diagnostics and comparison ----------------------------------------

struct NodeDiagnostics {
  double r = 0.0, u = 0.0, u_r = 0.0, u_rr = 0.0;
  double eig_radial = 0.0, eig_tangential = 0.0;  // background frame
  double f_value = 0.0;                            // intrinsic; NaN outside the cone
  double cone_margin = 0.0;
};

std::vector<NodeDiagnostics> node_diagnostics(const ConformalFactor& u, const SolverConfig& cfg);

struct CompareSide {
  std::vector<int> nodes;            // grid indices
  std::vector<double> values;
  std::vector<double> f_intrinsic;   // pointwise curvature value of the side
};

struct CompareReport {
  bool ok = false;
  int worst_node = -1;
  double worst_violation = 0.0;  // max of (lower - upper), should be <= slack
  double min_f_dominance = 0.0;  // min of (f_lower - f_upper)
};

CompareSide compare_side_from_solution(const ConformalFactor& u, const SolverConfig& cfg);
CompareSide compare_side_from_values(const std::vector<int>& nodes, std::vector<double> values,
                                     std::vector<double> f_intrinsic);

// Ordering check lower <= upper + slack on the shared nodes; the lower side
// must dominate in curvature value pointwise (checked, relative slop 1e-9).
CompareReport compare(const CompareSide& lower, const CompareSide& upper, double slack);

// --- asymptotics helpers ------------------------------------------------------

struct AsymptoticsRow {
  double d = 0.0;
  double u_plus_ln_d = 0.0;
};

// (d, u + ln d) at grid nodes whose boundary distance lies in the band;
// d is measured to the outer boundary r_hi (and to the nearer end on annuli).
std::vector<AsymptoticsRow> asymptotic_dataset(const ConformalFactor& u, const SolverConfig& cfg);

double asymptotic_defect(const std::vector<AsymptoticsRow>& rows);
double fit_sqrt_envelope(const std::vector<AsymptoticsRow>& rows);
bool lower_envelope_holds(const std::vector<AsymptoticsRow>& rows, double eps, double a);

}  // namespace schouten
