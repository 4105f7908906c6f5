#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gwlab/linalg.hpp"

namespace gwlab {

/// Estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// Sample mean and standard error of the mean.
Estimate mean_estimate(std::span<const double> x);

/// One-sample KS distance sup |F_n - F|. `cdf_left` (x -> P(X < x)) handles atoms;
/// when omitted the reference is taken as continuous.
double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf,
                   const std::function<double(double)>& cdf_left = {});

/// Two-sample KS distance.
double ks_distance_two_sample(std::span<const double> a, std::span<const double> b);

/// Total variation distance between the empirical law of integer samples and a pmf on
/// {0..pmf.size()-1}; mass outside the pmf's range counts in full.
double tv_distance(std::span<const std::int64_t> sample, std::span<const double> pmf);

/// Mean and s.e. of exp(-<s, x>) over vector samples.
Estimate empirical_laplace(std::span<const Vec2> samples, Vec2 s);

/// Sample covariance with a delta-method standard error (s.d. of centred products / sqrt R).
Estimate covariance_estimate(std::span<const double> x, std::span<const double> y);

/// Sample Pearson correlation.
double correlation(std::span<const double> x, std::span<const double> y);

/// Distance correlation of Szekely-Rizzo-Bakirov on the first `max_points` pairs.
double distance_correlation(std::span<const double> x, std::span<const double> y,
                            std::size_t max_points = 2000);

double median(std::vector<double> x);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace gwlab
