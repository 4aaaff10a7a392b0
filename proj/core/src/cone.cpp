#include "schouten/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace schouten {

namespace {

void validate_vector(std::span<const double> lambda, int n) {
  if (static_cast<int>(lambda.size()) != n) {
    std::ostringstream os;
    os << "eigenvalue vector has length " << lambda.size() << ", cone dimension is " << n;
    throw DomainError(os.str());
  }
  for (double x : lambda) {
    if (!std::isfinite(x)) throw DomainError("eigenvalue vector has a non-finite entry");
  }
}

double normalization(const ConeSpec& cone) {
  return cone.normalized ? 2.0 / std::pow(binomial(cone.n, cone.k), 1.0 / cone.k) : 1.0;
}

double deformation_divisor(const ConeSpec& cone) {
  return cone.tau + cone.n * (1.0 - cone.tau);
}

// sigma_{j}(lambda with entry `skip` removed)
double sigma_excluding(std::span<const double> lambda, int skip, int j) {
  std::vector<double> rest;
  rest.reserve(lambda.size() - 1);
  for (int i = 0; i < static_cast<int>(lambda.size()); ++i) {
    if (i != skip) rest.push_back(lambda[i]);
  }
  return sigma(rest, j);
}

}  // namespace

ConeSpec make_cone(int n, int k, double tau, bool normalized) {
  if (n < 3) throw DomainError("cone dimension must be at least 3");
  if (k < 1 || k > n) throw DomainError("Garding index k must satisfy 1 <= k <= n");
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("deformation parameter tau must lie in [0, 1]");
  return ConeSpec{n, k, tau, normalized};
}

double binomial(int n, int j) {
  if (j < 0 || j > n) return 0.0;
  std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
  row[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    for (int c = i; c >= 1; --c) row[c] += row[c - 1];
  }
  return row[j];
}

std::vector<double> sigma_prefix(std::span<const double> lambda, int j_max) {
  const int n = static_cast<int>(lambda.size());
  std::vector<double> x(lambda.begin(), lambda.end());
  std::sort(x.begin(), x.end(), std::greater<double>());
  std::vector<double> e(static_cast<std::size_t>(j_max) + 1, 0.0);
  e[0] = 1.0;
  for (int idx = 0; idx < n; ++idx) {
    const double xi = x[idx];
    for (int j = std::min(j_max, idx + 1); j >= 1; --j) e[j] += xi * e[j - 1];
  }
  return e;
}

double sigma(std::span<const double> lambda, int j) {
  const int n = static_cast<int>(lambda.size());
  if (j < 0 || j > n) throw DomainError("sigma index out of range [0, n]");
  return sigma_prefix(lambda, j)[j];
}

EigVector deform(std::span<const double> lambda, const ConeSpec& cone) {
  validate_vector(lambda, cone.n);
  // sum in sorted order so the result is exactly permutation-invariant
  EigVector sorted(lambda.begin(), lambda.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  const double s1 = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  EigVector out(lambda.size());
  const double shift = (1.0 - cone.tau) * s1;
  for (std::size_t i = 0; i < lambda.size(); ++i) out[i] = cone.tau * lambda[i] + shift;
  return out;
}

bool in_cone(std::span<const double> lambda, const ConeSpec& cone) {
  validate_vector(lambda, cone.n);
  const EigVector y = deform(lambda, cone);
  const std::vector<double> e = sigma_prefix(y, cone.k);
  for (int j = 1; j <= cone.k; ++j) {
    if (!(e[j] > 0.0)) return false;
  }
  return true;
}

double cone_margin(std::span<const double> lambda, const ConeSpec& cone) {
  validate_vector(lambda, cone.n);
  const EigVector y = deform(lambda, cone);
  double s = 0.0;
  for (double v : y) s = std::max(s, std::abs(v));
  if (s == 0.0) return -1.0;
  const std::vector<double> e = sigma_prefix(y, cone.k);
  double margin = std::numeric_limits<double>::infinity();
  double sj = 1.0;
  for (int j = 1; j <= cone.k; ++j) {
    sj *= s;
    margin = std::min(margin, e[j] / (binomial(cone.n, j) * sj));
  }
  return margin;
}

double f_value(std::span<const double> lambda, const ConeSpec& cone) {
  validate_vector(lambda, cone.n);
  const EigVector y = deform(lambda, cone);
  const std::vector<double> e = sigma_prefix(y, cone.k);
  for (int j = 1; j <= cone.k; ++j) {
    if (!(e[j] > 0.0)) {
      std::ostringstream os;
      os << "point outside the admissible cone: sigma_" << j << " = " << e[j] << " <= 0";
      throw DomainError(os.str());
    }
  }
  const double val = std::pow(e[cone.k], 1.0 / cone.k);
  return normalization(cone) * val / deformation_divisor(cone);
}

GradientResult f_gradient(std::span<const double> lambda, const ConeSpec& cone) {
  validate_vector(lambda, cone.n);
  const double margin = cone_margin(lambda, cone);
  if (!(margin > 0.0)) throw DomainError("gradient requested outside the admissible cone");
  if (margin < 1e-14) throw DomainError("point too close to the cone boundary for a gradient");

  const EigVector y = deform(lambda, cone);
  const int n = cone.n;
  const int k = cone.k;
  const double sk = sigma(y, k);
  const double pref = normalization(cone) * (1.0 / k) * std::pow(sk, 1.0 / k - 1.0);

  // gradient of f at the deformed point
  EigVector fi(static_cast<std::size_t>(n));
  double fsum = 0.0;
  for (int i = 0; i < n; ++i) {
    fi[i] = pref * sigma_excluding(y, i, k - 1);
    fsum += fi[i];
  }

  const double c_tau = 1.0 / deformation_divisor(cone);
  GradientResult out;
  out.gradient.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.gradient[i] = c_tau * (cone.tau * fi[i] + (1.0 - cone.tau) * fsum);
  }
  out.conditioning_warning = margin < 1e-8;
  return out;
}

double mu_plus(const ConeSpec& cone) {
  const auto member = [&](double t) {
    EigVector v(static_cast<std::size_t>(cone.n), 1.0);
    v[0] = -t;
    return in_cone(v, cone);
  };
  if (!member(0.0)) return 0.0;  // (0,1,...,1) already on the boundary
  double lo = 0.0;
  double hi = static_cast<double>(cone.n - 1);
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (member(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double mu_plus_closed_form(const ConeSpec& cone) {
  const double n = cone.n;
  const double mu = (n - cone.k) / cone.k;
  const double t = cone.tau;
  return ((1.0 - t) * (n - 1.0) * (1.0 + mu) + mu * t) / (1.0 + mu * (1.0 - t));
}

ConeConstants cone_constants(const ConeSpec& cone) {
  ConeConstants out;
  out.mu_plus = mu_plus(cone);

  const int n = cone.n;
  int kappa = 0;
  for (int p = n - 1; p >= 1; --p) {
    EigVector v(static_cast<std::size_t>(n), 1.0);
    for (int i = 0; i < p; ++i) v[i] = 0.0;
    if (in_cone(v, cone)) {
      kappa = p;
      break;
    }
  }
  out.kappa = kappa;

  if (kappa == 0) {
    // Gamma_n^+-like cone; the sorted-gradient ordering alone gives the bound.
    out.theta = 1.0 / n;
  } else {
    const auto member = [&](double t) {
      EigVector v(static_cast<std::size_t>(n), 1.0);
      for (int i = 0; i < kappa; ++i) v[i] = -t;
      return in_cone(v, cone);
    };
    double lo = 0.0;
    double hi = static_cast<double>(n - kappa) / kappa;  // sigma_1 vanishes here
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (member(mid) ? lo : hi) = mid;
    }
    const double t_star = 0.5 * (lo + hi);
    out.theta = (0.5 * t_star) / (static_cast<double>(n) * (n - kappa));
  }

  // gate with headroom above the bisection tolerance
  if (out.mu_plus > 1.0 + 1e-9) {
    out.beta = 2.0 / (out.mu_plus - 1.0);
  }
  return out;
}

DefiningFunction garding(const ConeSpec& cone) {
  DefiningFunction fn;
  fn.n = cone.n;
  EigVector e(static_cast<std::size_t>(cone.n), 1.0);
  fn.f_of_e = f_value(e, cone);
  fn.theta = cone_constants(cone).theta;
  fn.value = [cone](std::span<const double> lam) { return f_value(lam, cone); };
  fn.gradient = [cone](std::span<const double> lam) { return f_gradient(lam, cone).gradient; };
  fn.member = [cone](std::span<const double> lam) { return in_cone(lam, cone); };
  return fn;
}

InteriorSampler::InteriorSampler(const ConeSpec& cone, std::uint64_t seed)
    : cone_(cone), rng_(seed) {}

EigVector InteriorSampler::next() {
  const int n = cone_.n;
  EigVector g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[i] = gauss_(rng_);

  const auto shifted = [&](double c) {
    EigVector v = g;
    for (double& x : v) x += c;
    return v;
  };

  const double s1 = std::accumulate(g.begin(), g.end(), 0.0);
  double c_out = -(s1 + 1.0) / n - 1.0;  // sigma_1 < 0, outside every cone
  double c_in = std::abs(s1) / n + 1.0;
  for (int iter = 0; iter < 200 && !in_cone(shifted(c_in), cone_); ++iter) c_in *= 2.0;
  const double c_in_initial = c_in;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (c_out + c_in);
    (in_cone(shifted(mid), cone_) ? c_in : c_out) = mid;
  }
  const double spread = (0.02 + 0.98 * unif_(rng_)) * (c_in_initial - c_in);
  EigVector lambda = shifted(c_in + spread);

  const double scale = std::exp(4.0 * unif_(rng_) - 2.0);
  for (double& x : lambda) x *= scale;
  return lambda;
}

StructureReport check_structure(const ConeSpec& cone, int samples, std::uint64_t seed) {
  return check_structure(garding(cone), cone, samples, seed);
}

StructureReport check_structure(const DefiningFunction& fn, const ConeSpec& sampling_cone,
                                int samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("check_structure requires at least one sample");
  constexpr double kSlack = 1e-10;
  const int n = fn.n;

  StructureReport report;
  report.samples = samples;

  InteriorSampler sampler(sampling_cone, seed);
  std::mt19937_64 aux(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const auto record = [&](const std::string& check, double margin, const EigVector& lambda) {
    auto it = report.worst_margins.find(check);
    if (it == report.worst_margins.end() || margin < it->second) {
      report.worst_margins[check] = margin;
    }
    if (margin < -kSlack) {
      ++report.violations;
      if (report.witnesses.size() < 8) {
        report.witnesses.push_back(StructureWitness{check, lambda, margin});
      }
    }
  };

  for (int s = 0; s < samples; ++s) {
    EigVector lam = sampler.next();
    EigVector mu = sampler.next();
    const double flam = fn.value(lam);
    const double fmu = fn.value(mu);

    // permutation symmetry
    {
      EigVector perm = lam;
      std::shuffle(perm.begin(), perm.end(), aux);
      record("symmetry", -std::abs(fn.value(perm) - flam) / flam, lam);
    }
    // 1-homogeneity
    {
      const double t = std::exp((2.0 * unif(aux) - 1.0) * 3.0 * std::log(10.0));
      EigVector scaled = lam;
      for (double& x : scaled) x *= t;
      record("homogeneity", -std::abs(fn.value(scaled) - t * flam) / (t * flam), lam);
    }
    // midpoint concavity
    {
      EigVector mid(lam.size());
      for (std::size_t i = 0; i < lam.size(); ++i) mid[i] = 0.5 * (lam[i] + mu[i]);
      const double lhs = fn.value(mid);
      const double rhs = 0.5 * (flam + fmu);
      record("concavity", (lhs - rhs) / std::max(1.0, std::abs(rhs)), lam);
    }
    // gradient positivity, trace upper bound, gradient-sum and ratio bounds
    {
      const EigVector g = fn.gradient(lam);
      const double gsum = std::accumulate(g.begin(), g.end(), 0.0);
      record("gradient_positivity", *std::min_element(g.begin(), g.end()) / gsum, lam);

      const double s1 = std::accumulate(lam.begin(), lam.end(), 0.0);
      record("trace_upper_bound", ((fn.f_of_e / n) * s1 - flam) / flam, lam);
      record("gradient_sum_lower", (gsum - fn.f_of_e) / fn.f_of_e, lam);

      EigVector sorted = lam;
      std::sort(sorted.begin(), sorted.end(), std::greater<double>());
      const EigVector gs = fn.gradient(sorted);
      const double gssum = std::accumulate(gs.begin(), gs.end(), 0.0);
      for (int i = 0; i < n; ++i) {
        if (i >= n - 2 || sorted[i] <= 0.0) {
          record("gradient_ratio_theta", (gs[i] - fn.theta * gssum) / gssum, sorted);
        }
      }
    }
  }
  return report;
}

}  // namespace schouten
