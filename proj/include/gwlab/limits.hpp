#pragma once

#include <complex>
#include <vector>

#include "gwlab/laws.hpp"
#include "gwlab/model.hpp"
#include "gwlab/rng.hpp"

namespace gwlab {

/// d X = drift dt + sqrt(diffusion * X^+) dW, X_0 = 0, on [0, T] with step dt.
struct SdeConfig {
  double drift = 0.0;
  double diffusion = 0.0;
  double T = 1.0;
  double dt = 1e-3;

  void validate() const;
  /// Number of Euler steps, ceil(T / dt); the effective step is T / steps.
  long steps() const;
};

/// Discretized limit trajectory. Coordinates the case does not define are left empty.
struct LimitPath {
  std::vector<double> t;
  std::vector<double> x1;
  std::vector<double> x2;
  std::vector<double> integral;  ///< running integral of the simulated squared Bessel coordinate
};

/// Euler-Maruyama with the positive part inside the square root. Grid values are
/// reported as max(X, 0); the scheme state itself is not reflected. Fills `x1`
/// and `integral` (trapezoid rule).
LimitPath simulate_sbp(const SdeConfig& cfg, RngStream& rng);

/// Drift and diffusion of the squared Bessel coordinate in a covered case:
/// coordinate 1 for Cases 1-4, coordinate 2 for Case 5.
SdeConfig limit_sde(const ModelParams& params, double T, double dt);

/// Per-case limit process. Case 1: two independent coordinates. Case 2:
/// (X, a21 int X). Case 3: coordinate 1 only. Case 4: (X, a21/(1-a22) X).
/// Case 5: coordinate 2 only.
LimitPath simulate_limit_case(const ModelParams& params, double T, double dt, RngStream& rng);

/// E exp(-alpha Y_t - beta^2/2 int_0^t Y) for a squared Bessel process with index nu:
/// (cosh(beta t) + (2 alpha / beta) sinh(beta t))^{-nu-1}. beta = 0 gives (1 + 2 alpha t)^{-nu-1}.
double laplace_sbp(double alpha, double beta, double t, double nu);

/// E exp(-s1 X_t - s2 a21 int_0^t X) for d X = b1 dt + sqrt(v X^+) dW.
double laplace_joint_case2(double s1, double s2, double t, double b1, double v, double a21);

/// Same transform at t = 1 through the tanh-integral representation, evaluated by
/// adaptive Gauss-Kronrod quadrature. Throws ConvergenceError if the error estimate
/// stays above `tol`.
double laplace_joint_fosterney(double s1, double s2, double b1, double v, double a21,
                               double tol = 1e-12);

/// cdf of the squared Bessel marginal X_t: Gamma(shape 2b/v, scale v t / 2), or a
/// point mass at b t when v = 0.
double sbp_marginal_cdf(double x, double b, double v, double t);
/// P(X_t < x), the left limit of the cdf.
double sbp_marginal_cdf_left(double x, double b, double v, double t);

inline constexpr long kStationaryIterationCap = 100'000;

/// prod_{j>=0} H(G_{(j)}(z)) with G_{(0)}(z) = z, G_{(j+1)} = G(G_{(j)}). Stops once
/// two consecutive factors are within `tol` of 1.
std::complex<double> stationary_pgf(const UnivariateLaw& G, const UnivariateLaw& H,
                                    std::complex<double> z, double tol = 1e-15,
                                    long cap = kStationaryIterationCap);

struct StationaryLaw {
  UnivariateLaw offspring;
  UnivariateLaw immigration;
  std::vector<double> pmf;  ///< p_0..p_N
  double leaked = 0.0;      ///< 1 - sum pmf
  double aliased = 0.0;     ///< mass estimate folded back by the finite transform
  double mean_from_pmf = 0.0;
  double mean_theory = 0.0;  ///< E eps / (1 - E xi)

  std::complex<double> pgf(std::complex<double> z) const {
    return stationary_pgf(offspring, immigration, z);
  }
};

/// pmf on {0..N} by discrete Fourier inversion of the pgf at M >= 2N points on the
/// unit circle. Throws ValidationError when leaked or aliased mass exceeds `max_leak`.
StationaryLaw stationary_law(const UnivariateLaw& G, const UnivariateLaw& H, long N = 256,
                             long M = 4096, double max_leak = 1e-6);

}  // namespace gwlab
