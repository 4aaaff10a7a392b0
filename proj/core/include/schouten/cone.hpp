#pragma once

// Symmetric-cone algebra for the Garding family: the defining function
// f = sigma_k^{1/k} on Gamma_k^+, its tau-deformation
//   lambda^tau = tau*lambda + (1-tau)*sigma_1(lambda)*e,
//   f^tau(lambda) = f(lambda^tau) / (tau + n(1-tau)),
// cone membership, gradients, and the structural constants mu_plus,
// kappa, theta, beta.
//
// All operations are pure functions of their inputs; values are immutable
// after construction and safe to share between threads. The only stateful
// object is the caller-owned seed-driven InteriorSampler.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace schouten {

using EigVector = std::vector<double>;

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Gamma_k^+ with f = sigma_k^{1/k}, tau-deformed. With `normalized` set the
// scale factor 2 / C(n,k)^{1/k} is applied so f^tau(1/2,...,1/2) = 1 for
// every tau.
struct ConeSpec {
  int n = 3;
  int k = 1;
  double tau = 1.0;
  bool normalized = true;
};

// Validates 3 <= n, 1 <= k <= n, 0 <= tau <= 1; throws DomainError otherwise.
ConeSpec make_cone(int n, int k, double tau = 1.0, bool normalized = true);

// Binomial coefficient C(n, j) as an exact double (n small).
double binomial(int n, int j);

// j-th elementary symmetric polynomial, stable column sweep over the sorted
// entries (order-independent in floating point). sigma_0 == 1.
double sigma(std::span<const double> lambda, int j);

inline double sigma(std::initializer_list<double> lambda, int j) {
  return sigma(std::span<const double>(lambda.begin(), lambda.size()), j);
}

// sigma_0..sigma_{j_max} in one sweep.
std::vector<double> sigma_prefix(std::span<const double> lambda, int j_max);

// lambda^tau = tau*lambda + (1-tau)*sigma_1(lambda)*e.
EigVector deform(std::span<const double> lambda, const ConeSpec& cone);

// Strict membership of lambda in the tau-deformed cone:
// sigma_j(lambda^tau) > 0 for all 1 <= j <= k.
bool in_cone(std::span<const double> lambda, const ConeSpec& cone);

// Scale-free interior margin: min_j sigma_j(lambda^tau) / (C(n,j) * s^j)
// with s = max_i |lambda^tau_i|. Positive iff strictly inside; callers
// supply their own threshold for "interior with margin".
double cone_margin(std::span<const double> lambda, const ConeSpec& cone);

// f^tau(lambda); 1-homogeneous. Throws DomainError naming the first failing
// sigma_j when lambda lies outside the deformed cone.
double f_value(std::span<const double> lambda, const ConeSpec& cone);

inline double f_value(std::initializer_list<double> lambda, const ConeSpec& cone) {
  return f_value(std::span<const double>(lambda.begin(), lambda.size()), cone);
}

inline bool in_cone(std::initializer_list<double> lambda, const ConeSpec& cone) {
  return in_cone(std::span<const double>(lambda.begin(), lambda.size()), cone);
}

struct GradientResult {
  EigVector gradient;                // all components strictly positive
  bool conditioning_warning = false; // set when the point is near the cone boundary
};

// Analytic gradient of f^tau (chain rule through the deformation).
// Requires a strictly interior point (scale-free margin >= 1e-14).
GradientResult f_gradient(std::span<const double> lambda, const ConeSpec& cone);

// Boundary parameter: the t with (-t, 1, ..., 1) on the boundary of the
// deformed cone, found by bisection on membership over [0, n-1]
// (absolute tolerance 1e-12).
double mu_plus(const ConeSpec& cone);

// Closed form for mu_plus of the tau-deformed Garding cone, derived from the
// membership condition along (-t, 1, ..., 1):
//   t* = [(1-tau)(n-1)(1+mu) + mu*tau] / [1 + mu*(1-tau)],  mu = (n-k)/k.
// Matches the bisection to the stated tolerance; reduces to mu at tau = 1
// and to n-1 at tau = 0.
double mu_plus_closed_form(const ConeSpec& cone);

struct ConeConstants {
  double mu_plus = 0.0;
  int kappa = 0;                 // max count of leading zeros keeping (0,..,0,1,..,1) inside
  double theta = 0.0;            // gradient-ratio constant, constructive choice
  std::optional<double> beta;    // 2/(mu_plus - 1); empty when mu_plus <= 1
};

// kappa by direct membership of the n candidate 0/1 vectors; theta from the
// all-equal negative vector at half the supremum parameter t*:
// theta = (t*/2) / (n (n-kappa)); for kappa == 0 the ordering alone gives 1/n.
ConeConstants cone_constants(const ConeSpec& cone);

// Generic defining-function view: the cone axioms (symmetry, homogeneity,
// concavity, positive gradient, trace bound, gradient-sum and gradient-ratio
// inequalities) are checkable against any implementation; garding() is the
// one that ships.
struct DefiningFunction {
  int n = 0;
  double f_of_e = 0.0;  // threshold for the gradient-sum check
  double theta = 0.0;   // gradient-ratio constant to verify
  std::function<double(std::span<const double>)> value;
  std::function<EigVector(std::span<const double>)> gradient;
  std::function<bool(std::span<const double>)> member;
};

DefiningFunction garding(const ConeSpec& cone);

struct StructureWitness {
  std::string check;
  EigVector lambda;
  double margin = 0.0;
};

struct StructureReport {
  int samples = 0;
  int violations = 0;
  // worst (most negative is bad) margin seen per check
  std::map<std::string, double> worst_margins;
  std::vector<StructureWitness> witnesses;  // first few violations
  bool pass() const { return violations == 0; }
};

// Deterministic interior sampler: Gaussian direction, shifted along e by
// bisection to land strictly inside, then rescaled.
class InteriorSampler {
 public:
  InteriorSampler(const ConeSpec& cone, std::uint64_t seed);
  EigVector next();

 private:
  ConeSpec cone_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

// Property suite over `samples` pseudo-random interior points; slack 1e-10.
StructureReport check_structure(const ConeSpec& cone, int samples, std::uint64_t seed);
StructureReport check_structure(const DefiningFunction& fn, const ConeSpec& sampling_cone,
                                int samples, std::uint64_t seed);

}  // namespace schouten
