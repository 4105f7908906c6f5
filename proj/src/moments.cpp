#include "gwlab/moments.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "gwlab/error.hpp"

namespace gwlab {

namespace {

// sum_{j<k} a^j
double geometric_sum(double a, long k) {
  if (a == 1.0) return static_cast<double>(k);
  return (1.0 - std::pow(a, static_cast<double>(k))) / (1.0 - a);
}

// sum_{j<k} c_j with c_j = (a11^j - a22^j) / (a11 - a22), or j a^{j-1} when equal.
double branch_coefficient_sum(double a11, double a22, long k) {
  const double kd = static_cast<double>(k);
  if (a11 != a22) return (geometric_sum(a11, k) - geometric_sum(a22, k)) / (a11 - a22);
  if (a11 == 1.0) return 0.5 * kd * (kd - 1.0);
  const double a = a11;
  // derivative of (1 - a^k) / (1 - a)
  return ((1.0 - std::pow(a, kd)) - kd * std::pow(a, kd - 1.0) * (1.0 - a)) /
         ((1.0 - a) * (1.0 - a));
}

void require_case(const ModelParams& params, CaseKind kind, const char* op) {
  if (params.case_label.kind != kind)
    throw ValidationError(std::string(op) + ": model is " + params.case_label.to_string() +
                          ", expected " + CaseLabel{kind, {}}.to_string());
}

long floor_index(long n, double t) {
  if (n < 1) throw ValidationError("scaling index n must be positive");
  if (!(t >= 0.0)) throw ValidationError("time must be nonnegative");
  return static_cast<long>(std::floor(static_cast<double>(n) * t));
}

}  // namespace

Vec2 mean_closed_form(const ModelParams& params, long k) {
  if (k < 0) throw ValidationError("exact_mean: k must be nonnegative");
  const double kd = static_cast<double>(k);
  const double a11 = params.a11(), a21 = params.a21(), a22 = params.a22();
  const double b1 = params.b[0], b2 = params.b[1];
  switch (params.case_label.kind) {
    case CaseKind::Case1:
      return {b1 * kd, b2 * kd};
    case CaseKind::Case2:
      return {b1 * kd, 0.5 * a21 * b1 * kd * (kd - 1.0) + b2 * kd};
    case CaseKind::Case3: {
      const double s = (1.0 - std::pow(a22, kd)) / (1.0 - a22);
      return {b1 * kd, s * b2};
    }
    case CaseKind::Case4: {
      const double s = (1.0 - std::pow(a22, kd)) / (1.0 - a22);
      return {kd * b1, a21 * b1 / (1.0 - a22) * (kd - s) + s * b2};
    }
    case CaseKind::Case5: {
      const double s = (1.0 - std::pow(a11, kd)) / (1.0 - a11);
      return {b1 * s, a21 * b1 / (1.0 - a11) * (kd - s) + b2 * kd};
    }
    case CaseKind::NotCovered:
      break;
  }
  return {b1 * geometric_sum(a11, k),
          a21 * b1 * branch_coefficient_sum(a11, a22, k) + b2 * geometric_sum(a22, k)};
}

ExactMean exact_mean(const ModelParams& params, long k) {
  if (k < 0) throw ValidationError("exact_mean: k must be nonnegative");
  Vec2 generic{};
  for (long j = 0; j < k; ++j) generic = generic + mean_matrix_power(params.A, j) * params.b;
  return {generic, mean_closed_form(params, k)};
}

std::vector<Vec2> mean_generic_series(const ModelParams& params, long kmax) {
  if (kmax < 0) throw ValidationError("mean_generic_series: kmax must be nonnegative");
  std::vector<Vec2> out(static_cast<std::size_t>(kmax) + 1, Vec2{});
  long double s1 = 0.0L, s2 = 0.0L;
  for (long j = 0; j < kmax; ++j) {
    const Vec2 term = mean_matrix_power(params.A, j) * params.b;
    s1 += term[0];
    s2 += term[1];
    out[static_cast<std::size_t>(j) + 1] = {static_cast<double>(s1), static_cast<double>(s2)};
  }
  return out;
}

Mat2 conditional_variance(Vec2 state, const ModelParams& params) {
  if (state[0] < 0.0 || state[1] < 0.0)
    throw ValidationError("conditional_variance: state must be nonnegative");
  return params.V0 + state[0] * params.V1 + state[1] * params.V2;
}

Mat2 expected_mm(const ModelParams& params, long k) {
  if (k < 1) throw ValidationError("expected_mm: k must be at least 1");
  return conditional_variance(mean_closed_form(params, k - 1), params);
}

Mat2 exact_cov(const ModelParams& params, long k) {
  if (k < 1) throw ValidationError("exact_cov: k must be at least 1");
  Mat2 s{};
  for (long j = 0; j < k; ++j) {
    const Mat2 P = mean_matrix_power(params.A, j);
    s = s + P * expected_mm(params, k - j) * P.transpose();
  }
  return s;
}

std::vector<Mat2> exact_cov_series(const ModelParams& params, long kmax) {
  std::vector<Mat2> out(static_cast<std::size_t>(std::max(kmax, 0L)) + 1, Mat2{});
  for (long k = 1; k <= kmax; ++k) {
    const auto u = static_cast<std::size_t>(k);
    out[u] = params.A * out[u - 1] * params.A.transpose() + expected_mm(params, k);
  }
  return out;
}

Mat2 exact_cross_cov(const ModelParams& params, long k2, long k1) {
  if (k1 < 0 || k2 < k1) throw ValidationError("exact_cross_cov: need 0 <= k1 <= k2");
  if (k1 == 0) return {};
  return mean_matrix_power(params.A, k2 - k1) * exact_cov(params, k1);
}

double cross_time_cov_case3(const ModelParams& params, long n1, long n2, double t1, double t2) {
  require_case(params, CaseKind::Case3, "cross_time_cov_case3");
  const long K1 = floor_index(n1, t1), K2 = floor_index(n2, t2);
  const long m = std::min(K1, K2);
  const double a22 = params.a22();
  const double value = params.V0(0, 1) / static_cast<double>(n1) *
                       std::pow(a22, static_cast<double>(K2 - m)) *
                       (1.0 - std::pow(a22, static_cast<double>(m))) / (1.0 - a22);
  if (std::fabs(value) > cross_time_bound_case3(params, n1) * (1.0 + 1e-12))
    throw Error("cross_time_cov_case3: uniform bound violated");
  return value;
}

double cross_time_bound_case3(const ModelParams& params, long n1) {
  require_case(params, CaseKind::Case3, "cross_time_bound_case3");
  return std::fabs(params.V0(0, 1)) / ((1.0 - params.a22()) * static_cast<double>(n1));
}

double cross_time_cov_case5(const ModelParams& params, long n1, long n2, double t1, double t2) {
  require_case(params, CaseKind::Case5, "cross_time_cov_case5");
  if (params.V2(0, 1) != 0.0) throw Error("cross_time_cov_case5: v2_12 must vanish");
  const long K1 = floor_index(n1, t1), K2 = floor_index(n2, t2);
  const long m = std::min(K1, K2);
  const double a11 = params.a11(), a21 = params.a21(), b1 = params.b[0];
  long double first = 0.0L, second = 0.0L;
  for (long j = 1; j <= m; ++j) {
    const double w = std::pow(a11, static_cast<double>(K1 - j));
    const double mean1 = b1 * (1.0 - std::pow(a11, static_cast<double>(j - 1))) / (1.0 - a11);
    first += w * (1.0 - std::pow(a11, static_cast<double>(K2 - j))) *
             (params.V0(0, 0) + mean1 * params.V1(0, 0));
    second += w * (params.V0(0, 1) + mean1 * params.V1(0, 1));
  }
  const double inv_n2 = 1.0 / static_cast<double>(n2);
  return static_cast<double>(a21 / (1.0 - a11) * inv_n2 * first + inv_n2 * second);
}

std::string to_string(GrowthQuantity q) {
  switch (q) {
    case GrowthQuantity::MeanX1: return "E[X1]";
    case GrowthQuantity::MeanX2: return "E[X2]";
    case GrowthQuantity::AbsM1: return "E[|M1|]";
    case GrowthQuantity::AbsM2: return "E[|M2|]";
    case GrowthQuantity::SecondM1: return "E[M1^2]";
    case GrowthQuantity::SecondM2: return "E[M2^2]";
    case GrowthQuantity::SecondX1: return "E[X1^2]";
    case GrowthQuantity::SecondX2: return "E[X2^2]";
    case GrowthQuantity::FourthM1: return "E[M1^4]";
    case GrowthQuantity::FourthM2: return "E[M2^4]";
    case GrowthQuantity::FourthV1: return "E[V1^4]";
    case GrowthQuantity::FourthV2: return "E[V2^4]";
    case GrowthQuantity::SecondVtilde1: return "E[Vtilde1^2]";
  }
  return "unknown";
}

std::vector<GrowthEntry> growth_exponents(const CaseLabel& label) {
  using Q = GrowthQuantity;
  switch (label.kind) {
    case CaseKind::Case1:
      return {{Q::MeanX1, 1},   {Q::MeanX2, 1},   {Q::AbsM1, 0.5},    {Q::AbsM2, 0.5},
              {Q::SecondM1, 1}, {Q::SecondM2, 1}, {Q::SecondX1, 2},   {Q::SecondX2, 2},
              {Q::FourthM1, 2}, {Q::FourthM2, 2}};
    case CaseKind::Case2:
      return {{Q::MeanX1, 1},  {Q::MeanX2, 2},   {Q::AbsM1, 0.5},
              {Q::AbsM2, 1},   {Q::SecondM1, 1}, {Q::SecondM2, 2}};
    case CaseKind::Case3:
      return {{Q::MeanX1, 1},  {Q::MeanX2, 0},   {Q::AbsM1, 0.5},
              {Q::AbsM2, 0},   {Q::SecondM1, 1}, {Q::SecondM2, 0}};
    case CaseKind::Case4:
      return {{Q::MeanX1, 1},   {Q::MeanX2, 1},   {Q::AbsM1, 0.5},  {Q::AbsM2, 0.5},
              {Q::SecondM1, 1}, {Q::SecondM2, 1}, {Q::SecondX1, 2}, {Q::SecondX2, 2},
              {Q::FourthM1, 2}, {Q::FourthM2, 2}, {Q::FourthV1, 2}, {Q::FourthV2, 2}};
    case CaseKind::Case5:
      return {{Q::MeanX1, 0},   {Q::MeanX2, 1},   {Q::AbsM1, 0},     {Q::AbsM2, 0.5},
              {Q::SecondM1, 0}, {Q::SecondM2, 1}, {Q::SecondX1, 0},  {Q::SecondX2, 2},
              {Q::FourthM1, 0}, {Q::FourthM2, 2}, {Q::SecondVtilde1, 0}};
    case CaseKind::NotCovered:
      break;
  }
  throw ValidationError("growth_exponents: case not covered");
}

std::optional<double> growth_exponent(const CaseLabel& label, GrowthQuantity q) {
  for (const auto& e : growth_exponents(label))
    if (e.quantity == q) return e.exponent;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Brute-force distribution

Vec2 ExactPmf::mean() const {
  long double m1 = 0.0L, m2 = 0.0L;
  for (long x1 = 0; x1 <= N; ++x1)
    for (long x2 = 0; x2 <= N; ++x2) {
      const long double p = at(x1, x2);
      m1 += p * x1;
      m2 += p * x2;
    }
  return {static_cast<double>(m1), static_cast<double>(m2)};
}

Mat2 ExactPmf::covariance() const {
  const Vec2 m = mean();
  long double c11 = 0.0L, c12 = 0.0L, c22 = 0.0L;
  for (long x1 = 0; x1 <= N; ++x1)
    for (long x2 = 0; x2 <= N; ++x2) {
      const long double p = at(x1, x2);
      const long double d1 = x1 - static_cast<long double>(m[0]);
      const long double d2 = x2 - static_cast<long double>(m[1]);
      c11 += p * d1 * d1;
      c12 += p * d1 * d2;
      c22 += p * d2 * d2;
    }
  return {static_cast<double>(c11), static_cast<double>(c12), static_cast<double>(c12),
          static_cast<double>(c22)};
}

namespace {

using Key = std::pair<std::int64_t, std::int64_t>;
using Sparse = std::map<Key, long double>;

class BruteForce {
 public:
  BruteForce(const ModelParams& params, long N, std::size_t budget) : N_(N), budget_(budget) {
    law1_ = support_of(params.offspring_type1, "offspring law of type 1");
    law2_ = support_of(params.offspring_type2, "offspring law of type 2");
    eps_ = support_of(params.immigration, "immigration law");
    powers1_.push_back({{{0, 0}, 1.0L}});
    powers2_.push_back({{{0, 0}, 1.0L}});
    stored_ = 2 + law1_.size() + law2_.size() + eps_.size();
  }

  Sparse convolve(const Sparse& a, const Sparse& b) {
    Sparse out;
    for (const auto& [x, p] : a)
      for (const auto& [y, q] : b) {
        const Key z{x.first + y.first, x.second + y.second};
        if (z.first > N_ || z.second > N_) continue;  // dropped mass never returns
        out[z] += p * q;
      }
    charge(out.size());
    return out;
  }

  const Sparse& power(int type, std::int64_t n) {
    auto& cache = type == 0 ? powers1_ : powers2_;
    const Sparse& base = type == 0 ? law1_ : law2_;
    while (static_cast<std::int64_t>(cache.size()) <= n) {
      Sparse next = convolve(cache.back(), base);
      cache.push_back(std::move(next));
    }
    return cache[static_cast<std::size_t>(n)];
  }

  Sparse step(const Sparse& dist) {
    Sparse out;
    for (const auto& [x, p] : dist) {
      const Sparse off = convolve(convolve(power(0, x.first), power(1, x.second)), eps_);
      for (const auto& [y, q] : off) out[y] += p * q;
    }
    charge(out.size());
    return out;
  }

 private:
  Sparse support_of(const BivariateLaw& law, const char* what) {
    auto s = law.finite_support();
    if (!s) throw ValidationError(std::string("brute_force_pmf: ") + what + " has infinite support");
    Sparse out;
    for (const auto& [x, p] : *s) {
      if (x.type1 > N_ || x.type2 > N_) continue;
      out[{x.type1, x.type2}] += p;
    }
    return out;
  }

  void charge(std::size_t pairs) {
    stored_ += pairs;
    if (stored_ > budget_)
      throw BudgetError("brute_force_pmf: state budget of " + std::to_string(budget_) +
                        " (state, probability) pairs exceeded");
  }

  long N_;
  std::size_t budget_;
  std::size_t stored_ = 0;
  Sparse law1_, law2_, eps_;
  std::vector<Sparse> powers1_, powers2_;
};

}  // namespace

ExactPmf brute_force_pmf(const ModelParams& params, long k, long N, std::size_t budget) {
  if (k < 0) throw ValidationError("brute_force_pmf: k must be nonnegative");
  if (N < 0) throw ValidationError("brute_force_pmf: N must be nonnegative");
  BruteForce bf(params, N, budget);
  Sparse dist{{{0, 0}, 1.0L}};
  for (long j = 0; j < k; ++j) dist = bf.step(dist);

  ExactPmf pmf;
  pmf.N = N;
  pmf.k = k;
  pmf.table.assign(static_cast<std::size_t>((N + 1) * (N + 1)), 0.0);
  long double total = 0.0L;
  for (const auto& [x, p] : dist) {
    pmf.table[static_cast<std::size_t>(x.first * (N + 1) + x.second)] = static_cast<double>(p);
    total += p;
  }
  pmf.leaked = static_cast<double>(std::max(0.0L, 1.0L - total));
  return pmf;
}

}  // namespace gwlab
