#include "gwlab/limits.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/normal_distribution.hpp>

#include "gwlab/error.hpp"

namespace gwlab {

void SdeConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("sde: dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ValidationError("sde: T must be nonnegative");
  if (!(diffusion >= 0.0)) throw ValidationError("sde: diffusion must be nonnegative");
  if (!(drift >= 0.0)) throw ValidationError("sde: drift must be nonnegative");
}

long SdeConfig::steps() const {
  if (T == 0.0) return 0;
  return static_cast<long>(std::ceil(T / dt - 1e-9));
}

LimitPath simulate_sbp(const SdeConfig& cfg, RngStream& rng) {
  cfg.validate();
  const long n = cfg.steps();
  const double h = n > 0 ? cfg.T / static_cast<double>(n) : 0.0;
  LimitPath path;
  path.t.resize(static_cast<std::size_t>(n) + 1);
  path.x1.resize(static_cast<std::size_t>(n) + 1);
  path.integral.resize(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) path.t[static_cast<std::size_t>(i)] = static_cast<double>(i) * h;

  if (cfg.diffusion == 0.0) {
    for (long i = 0; i <= n; ++i) {
      const double t = path.t[static_cast<std::size_t>(i)];
      path.x1[static_cast<std::size_t>(i)] = cfg.drift * t;
      path.integral[static_cast<std::size_t>(i)] = 0.5 * cfg.drift * t * t;
    }
    return path;
  }

  boost::random::normal_distribution<double> normal(0.0, 1.0);
  const double sqrt_h = std::sqrt(h);
  double x = 0.0;
  double integral = 0.0;
  for (long i = 1; i <= n; ++i) {
    const double prev = std::fmax(x, 0.0);
    x += cfg.drift * h + std::sqrt(cfg.diffusion * prev) * sqrt_h * normal(rng);
    const double cur = std::fmax(x, 0.0);
    integral += 0.5 * h * (prev + cur);
    path.x1[static_cast<std::size_t>(i)] = cur;
    path.integral[static_cast<std::size_t>(i)] = integral;
  }
  return path;
}

SdeConfig limit_sde(const ModelParams& params, double T, double dt) {
  const auto kind = params.case_label.kind;
  if (kind == CaseKind::NotCovered)
    throw ValidationError("limit process undefined: " + params.case_label.to_string());
  if (kind == CaseKind::Case5)
    return {params.a21() / (1.0 - params.a11()) * params.b[0] + params.b[1], params.V2(1, 1), T, dt};
  return {params.b[0], params.V1(0, 0), T, dt};
}

LimitPath simulate_limit_case(const ModelParams& params, double T, double dt, RngStream& rng) {
  const SdeConfig cfg = limit_sde(params, T, dt);
  LimitPath p = simulate_sbp(cfg, rng);
  switch (params.case_label.kind) {
    case CaseKind::Case1: {
      const SdeConfig second{params.b[1], params.V2(1, 1), T, dt};
      p.x2 = simulate_sbp(second, rng).x1;
      break;
    }
    case CaseKind::Case2:
      p.x2.resize(p.integral.size());
      for (std::size_t i = 0; i < p.x2.size(); ++i) p.x2[i] = params.a21() * p.integral[i];
      break;
    case CaseKind::Case3:
      break;
    case CaseKind::Case4: {
      const double slope = params.a21() / (1.0 - params.a22());
      p.x2.resize(p.x1.size());
      for (std::size_t i = 0; i < p.x2.size(); ++i) p.x2[i] = slope * p.x1[i];
      break;
    }
    case CaseKind::Case5:
      p.x2 = std::move(p.x1);
      p.x1.clear();
      break;
    case CaseKind::NotCovered:
      break;
  }
  return p;
}

double laplace_sbp(double alpha, double beta, double t, double nu) {
  if (!(alpha >= 0.0) || !(t >= 0.0) || !(nu > -1.0))
    throw ValidationError("laplace_sbp: need alpha >= 0, t >= 0, nu > -1");
  const double power = -(nu + 1.0);
  beta = std::fabs(beta);
  if (beta == 0.0) return std::pow(1.0 + 2.0 * alpha * t, power);
  const double x = beta * t;
  const double r = 2.0 * alpha / beta;
  if (x < 20.0) return std::pow(std::cosh(x) + r * std::sinh(x), power);
  // cosh x + r sinh x = e^x / 2 * ((1 + r) + (1 - r) e^{-2x})
  const double log_base = x - std::numbers::ln2 + std::log((1.0 + r) + (1.0 - r) * std::exp(-2.0 * x));
  return std::exp(power * log_base);
}

double laplace_joint_case2(double s1, double s2, double t, double b1, double v, double a21) {
  if (!(s1 >= 0.0) || !(s2 >= 0.0) || !(t >= 0.0) || !(a21 >= 0.0) || !(b1 >= 0.0) || !(v >= 0.0))
    throw ValidationError("laplace_joint_case2: arguments must be nonnegative");
  // v = 0: the path is b1 t.
  if (v == 0.0) return std::exp(-s1 * b1 * t - s2 * a21 * b1 * t * t / 2.0);
  const double nu = 2.0 * b1 / v - 1.0;
  if (b1 == 0.0) return 1.0;
  const double alpha = s1 * v / 4.0;
  const double beta = std::sqrt(s2 * a21 * v / 2.0);
  return laplace_sbp(alpha, beta, t, nu);
}

double laplace_joint_fosterney(double s1, double s2, double b1, double v, double a21, double tol) {
  if (!(s2 > 0.0) || !(a21 > 0.0) || !(v > 0.0))
    throw ValidationError("laplace_joint_fosterney: need s2 > 0, a21 > 0, v > 0");
  if (b1 == 0.0) return 1.0;
  const double c = std::sqrt(0.5 * v * a21 * s2);
  const double half_vs1 = 0.5 * v * s1;
  const double prefactor = std::sqrt(2.0 * a21 * s2 / v);
  auto integrand = [&](double tau) {
    const double th = std::tanh(tau * c);
    return prefactor * (half_vs1 + c * th) / (half_vs1 * th + c);
  };
  double error = 0.0;
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 30, tol,
                                                                    &error);
  if (!(error <= std::fmax(tol, 1e-15 * std::fabs(integral)) * 10.0))
    throw ConvergenceError("laplace_joint_fosterney: quadrature did not converge");
  return std::exp(-b1 * integral);
}

double sbp_marginal_cdf(double x, double b, double v, double t) {
  if (t == 0.0 || b == 0.0) return x >= 0.0 ? 1.0 : 0.0;
  if (v == 0.0) return x >= b * t ? 1.0 : 0.0;
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(2.0 * b / v, x / (0.5 * v * t));
}

double sbp_marginal_cdf_left(double x, double b, double v, double t) {
  if (t == 0.0 || b == 0.0) return x > 0.0 ? 1.0 : 0.0;
  if (v == 0.0) return x > b * t ? 1.0 : 0.0;
  return sbp_marginal_cdf(x, b, v, t);
}

std::complex<double> stationary_pgf(const UnivariateLaw& G, const UnivariateLaw& H,
                                    std::complex<double> z, double tol, long cap) {
  if (std::abs(z) > 1.0 + 1e-12) throw ValidationError("stationary_pgf: |z| must not exceed 1");
  std::complex<double> product = 1.0;
  std::complex<double> g = z;
  bool previous_small = false;
  for (long j = 0; j < cap; ++j) {
    const std::complex<double> factor = H.pgf(g);
    product *= factor;
    const bool small = std::abs(1.0 - factor) < tol;
    if (small && previous_small) return product;
    previous_small = small;
    const std::complex<double> next = G.pgf(g);
    // A floating-point fixed point of G: every later factor repeats this one.
    if (next == g && std::abs(1.0 - g) <= 8.0 * std::numeric_limits<double>::epsilon()) return product;
    g = next;
  }
  throw ConvergenceError("stationary_pgf: product did not converge within the iteration cap "
                         "(offspring mean may be >= 1)");
}

StationaryLaw stationary_law(const UnivariateLaw& G, const UnivariateLaw& H, long N, long M,
                             double max_leak) {
  if (N < 0) throw ValidationError("stationary_law: N must be nonnegative");
  if (M < 2 * N || M < 2) throw ValidationError("stationary_law: need M >= 2N");
  const double a = G.mean();
  if (!(a < 1.0)) throw ValidationError("stationary_law: offspring mean must be below 1");

  // Values on the unit circle; P(conj z) = conj P(z) halves the work.
  std::vector<std::complex<double>> values(static_cast<std::size_t>(M));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(M);
  for (long m = 0; m <= M / 2; ++m) {
    const std::complex<double> z = std::polar(1.0, step * static_cast<double>(m));
    values[static_cast<std::size_t>(m)] = stationary_pgf(G, H, m == 0 ? 1.0 : z);
    if (m > 0 && m < M - m) values[static_cast<std::size_t>(M - m)] = std::conj(values[static_cast<std::size_t>(m)]);
  }

  // p_n = M^{-1} sum_m P(w^m) w^{-mn} for all n < M.
  std::vector<double> cos_table(static_cast<std::size_t>(M)), sin_table(static_cast<std::size_t>(M));
  for (long i = 0; i < M; ++i) {
    cos_table[static_cast<std::size_t>(i)] = std::cos(step * static_cast<double>(i));
    sin_table[static_cast<std::size_t>(i)] = std::sin(step * static_cast<double>(i));
  }
  std::vector<double> full(static_cast<std::size_t>(M));
  for (long n = 0; n < M; ++n) {
    long double s = 0.0L;
    for (long m = 0; m < M; ++m) {
      const auto idx = static_cast<std::size_t>((m * n) % M);
      const auto& v = values[static_cast<std::size_t>(m)];
      s += v.real() * cos_table[idx] + v.imag() * sin_table[idx];
    }
    full[static_cast<std::size_t>(n)] = static_cast<double>(s / M);
  }

  StationaryLaw law;
  law.offspring = G;
  law.immigration = H;
  law.pmf.assign(full.begin(), full.begin() + N + 1);
  for (double& p : law.pmf) {
    if (p < -1e-10) throw ValidationError("stationary_law: negative probability after inversion");
    if (p < 0.0) p = 0.0;
  }
  long double total = 0.0L, mean = 0.0L;
  for (long n = 0; n <= N; ++n) {
    total += law.pmf[static_cast<std::size_t>(n)];
    mean += static_cast<long double>(n) * law.pmf[static_cast<std::size_t>(n)];
  }
  law.leaked = static_cast<double>(1.0L - total);
  long double aliased = 0.0L;
  for (long n = M / 2; n < M; ++n) aliased += std::fabs(full[static_cast<std::size_t>(n)]);
  law.aliased = static_cast<double>(aliased);
  law.mean_from_pmf = static_cast<double>(mean);
  law.mean_theory = H.mean() / (1.0 - a);
  if (std::fabs(law.leaked) > max_leak)
    throw ValidationError("stationary_law: mass beyond N exceeds the leak bound; increase N");
  if (law.aliased > max_leak)
    throw ValidationError("stationary_law: aliased mass exceeds the leak bound; increase M");
  return law;
}

}  // namespace gwlab
