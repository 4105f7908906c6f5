#include "gwlab/decomposition.hpp"

#include <cmath>
#include <string>

#include "gwlab/error.hpp"

namespace gwlab {

namespace {

// Coefficient of (M_{j,1} + b_1) in X^{(1)}_{k,2}, with m = k - j.
long double branch_coefficient(long double a11, long double a22, long m) {
  if (m == 0) return 0.0L;
  if (a11 == a22) return static_cast<long double>(m) * std::pow(a11, static_cast<long double>(m - 1));
  return (std::pow(a11, static_cast<long double>(m)) - std::pow(a22, static_cast<long double>(m))) /
         (a11 - a22);
}

}  // namespace

DecompositionSeries martingale_increments(const PathRecord& path, const ModelParams& params) {
  if (path.populations.empty()) throw ValidationError("martingale_increments: empty path");
  DecompositionSeries s;
  const auto K = static_cast<std::size_t>(path.horizon());
  s.M.assign(K + 1, Vec2{});
  for (std::size_t k = 1; k <= K; ++k) {
    const Vec2 prev = path.populations[k - 1].as_real();
    s.M[k] = path.populations[k].as_real() - params.A * prev - params.b;
  }
  return s;
}

DecompositionSeries decompose_second(const PathRecord& path, const ModelParams& params,
                                     DecompositionMethod method) {
  DecompositionSeries s = martingale_increments(path, params);
  const auto K = static_cast<long>(s.M.size()) - 1;
  const long double a11 = params.a11(), a22 = params.a22();
  const long double b1 = params.b[0], b2 = params.b[1];
  s.x1part.assign(static_cast<std::size_t>(K) + 1, 0.0);
  s.x2part.assign(static_cast<std::size_t>(K) + 1, 0.0);

  if (method == DecompositionMethod::DirectSum) {
    for (long k = 1; k <= K; ++k) {
      long double x1 = 0.0L, x2 = 0.0L;
      for (long j = 1; j <= k; ++j) {
        const auto& m = s.M[static_cast<std::size_t>(j)];
        x1 += branch_coefficient(a11, a22, k - j) * (m[0] + b1);
        x2 += std::pow(a22, static_cast<long double>(k - j)) * (m[1] + b2);
      }
      s.x1part[static_cast<std::size_t>(k)] = static_cast<double>(x1);
      s.x2part[static_cast<std::size_t>(k)] = static_cast<double>(x2);
    }
  } else {
    for (long k = 1; k <= K; ++k) {
      const auto u = static_cast<std::size_t>(k);
      s.x1part[u] = static_cast<double>(a22 * s.x1part[u - 1] +
                                        static_cast<long double>(path[k - 1].type1));
      s.x2part[u] = static_cast<double>(a22 * s.x2part[u - 1] + s.M[u][1] + b2);
    }
  }

  for (long k = 0; k <= K; ++k) {
    const auto u = static_cast<std::size_t>(k);
    const double x = static_cast<double>(path[k].type2);
    const double rebuilt = params.a21() * s.x1part[u] + s.x2part[u];
    if (std::fabs(rebuilt - x) > 1e-9 * std::fmax(1.0, std::fabs(x)))
      throw Error("decompose_second: reconstruction of X_{k,2} failed at k = " + std::to_string(k));
  }

  const auto m1 = increments_component(s, 0);
  const auto m2 = increments_component(s, 1);
  auto with_origin = [](std::vector<double> v) {
    v.insert(v.begin(), 0.0);
    return v;
  };
  if (params.a22() >= 0.0 && params.a22() < 1.0) {
    s.V1 = with_origin(ar1_filter(m1, params.a22()));
    s.V2 = with_origin(ar1_filter(m2, params.a22()));
  }
  if (params.a11() >= 0.0 && params.a11() < 1.0) s.Vtilde1 = with_origin(ar1_filter(m1, params.a11()));
  return s;
}

std::vector<double> ar1_filter(std::span<const double> innovations, double a) {
  if (!(a >= 0.0 && a < 1.0)) throw ValidationError("ar1_filter: coefficient must lie in [0, 1)");
  std::vector<double> out(innovations.size());
  double v = 0.0;
  for (std::size_t k = 0; k < innovations.size(); ++k) {
    v = a * v + innovations[k];
    out[k] = v;
  }
  return out;
}

std::vector<double> ar1_direct(std::span<const double> innovations, double a) {
  std::vector<double> out(innovations.size());
  for (std::size_t k = 0; k < innovations.size(); ++k) {
    long double s = 0.0L;
    for (std::size_t j = 0; j <= k; ++j)
      s += std::pow(static_cast<long double>(a), static_cast<long double>(k - j)) * innovations[j];
    out[k] = static_cast<double>(s);
  }
  return out;
}

std::vector<Vec2> reconstruct_path(const DecompositionSeries& series, const ModelParams& params) {
  const std::size_t K = series.M.size() - 1;
  std::vector<Vec2> out(K + 1, Vec2{});
  for (std::size_t k = 1; k <= K; ++k) {
    Vec2 x{};
    for (std::size_t j = 1; j <= k; ++j)
      x = x + mean_matrix_power(params.A, static_cast<long>(k - j)) * (series.M[j] + params.b);
    out[k] = x;
  }
  return out;
}

std::vector<double> increments_component(const DecompositionSeries& series, int i) {
  std::vector<double> out;
  out.reserve(series.M.size());
  for (std::size_t k = 1; k < series.M.size(); ++k) out.push_back(series.M[k][i]);
  return out;
}

}  // namespace gwlab
