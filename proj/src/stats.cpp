#include "gwlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gwlab/error.hpp"

namespace gwlab {

namespace {

void require_nonempty(std::size_t n, const char* what) {
  if (n == 0) throw ValidationError(std::string(what) + ": empty sample");
}

}  // namespace

Estimate mean_estimate(std::span<const double> x) {
  require_nonempty(x.size(), "mean_estimate");
  const double n = static_cast<double>(x.size());
  long double s = 0.0L;
  for (double v : x) s += v;
  const long double m = s / n;
  long double ss = 0.0L;
  for (double v : x) ss += (v - m) * (v - m);
  const double var = x.size() > 1 ? static_cast<double>(ss / (n - 1.0)) : 0.0;
  return {static_cast<double>(m), std::sqrt(var / n)};
}

double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf,
                   const std::function<double(double)>& cdf_left) {
  require_nonempty(sample.size(), "ks_distance");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    const double before = static_cast<double>(i) / n;
    const double after = static_cast<double>(j) / n;
    const double f = cdf(x[i]);
    const double f_left = cdf_left ? cdf_left(x[i]) : f;
    d = std::max({d, std::fabs(f - after), std::fabs(f_left - before)});
    i = j;
  }
  return d;
}

double ks_distance_two_sample(std::span<const double> a, std::span<const double> b) {
  require_nonempty(a.size(), "ks_distance_two_sample");
  require_nonempty(b.size(), "ks_distance_two_sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (j == y.size() || (i < x.size() && x[i] <= y[j]))
      v = x[i];
    else
      v = y[j];
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double tv_distance(std::span<const std::int64_t> sample, std::span<const double> pmf) {
  require_nonempty(sample.size(), "tv_distance");
  std::map<std::int64_t, std::int64_t> counts;
  for (auto v : sample) ++counts[v];
  const double n = static_cast<double>(sample.size());
  long double total = 0.0L;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    auto it = counts.find(static_cast<std::int64_t>(k));
    const double emp = it == counts.end() ? 0.0 : static_cast<double>(it->second) / n;
    total += std::fabs(emp - pmf[k]);
  }
  for (const auto& [v, c] : counts)
    if (v < 0 || v >= static_cast<std::int64_t>(pmf.size())) total += static_cast<double>(c) / n;
  return static_cast<double>(0.5L * total);
}

Estimate empirical_laplace(std::span<const Vec2> samples, Vec2 s) {
  require_nonempty(samples.size(), "empirical_laplace");
  if (s[0] < 0.0 || s[1] < 0.0) throw ValidationError("empirical_laplace: s must be nonnegative");
  std::vector<double> vals;
  vals.reserve(samples.size());
  for (const auto& x : samples) vals.push_back(std::exp(-(s[0] * x[0] + s[1] * x[1])));
  return mean_estimate(vals);
}

Estimate covariance_estimate(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("covariance_estimate: length mismatch");
  if (x.size() < 2) throw ValidationError("covariance_estimate: need at least two samples");
  const double n = static_cast<double>(x.size());
  const double mx = mean_estimate(x).value, my = mean_estimate(y).value;
  std::vector<double> prod(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) prod[i] = (x[i] - mx) * (y[i] - my);
  const Estimate e = mean_estimate(prod);
  return {e.value * n / (n - 1.0), e.se};
}

double correlation(std::span<const double> x, std::span<const double> y) {
  const Estimate c = covariance_estimate(x, y);
  const double vx = covariance_estimate(x, x).value, vy = covariance_estimate(y, y).value;
  if (vx <= 0.0 || vy <= 0.0) return 0.0;
  return c.value / std::sqrt(vx * vy);
}

double distance_correlation(std::span<const double> x, std::span<const double> y,
                            std::size_t max_points) {
  if (x.size() != y.size()) throw ValidationError("distance_correlation: length mismatch");
  const std::size_t n = std::min(x.size(), max_points);
  require_nonempty(n, "distance_correlation");
  auto centred = [n](std::span<const double> v) {
    std::vector<double> d(n * n);
    std::vector<double> row(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        d[i * n + j] = std::fabs(v[i] - v[j]);
        row[i] += d[i * n + j];
      }
    for (std::size_t i = 0; i < n; ++i) {
      grand += row[i];
      row[i] /= static_cast<double>(n);
    }
    grand /= static_cast<double>(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] += grand - row[i] - row[j];
    return d;
  };
  const auto a = centred(x), b = centred(y);
  long double ab = 0.0L, aa = 0.0L, bb = 0.0L;
  for (std::size_t k = 0; k < n * n; ++k) {
    ab += a[k] * b[k];
    aa += a[k] * a[k];
    bb += b[k] * b[k];
  }
  if (aa <= 0.0L || bb <= 0.0L) return 0.0;
  return static_cast<double>(std::sqrt(std::max(0.0L, ab) / std::sqrt(aa * bb)));
}

double median(std::vector<double> x) {
  require_nonempty(x.size(), "median");
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 == 1 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ValidationError("loglog_slope: need at least two matching points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("loglog_slope: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double mx = mean_estimate(lx).value, my = mean_estimate(ly).value;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace gwlab
