#include "gwlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gwlab/commands.hpp"
#include "gwlab/error.hpp"
#include "gwlab/harness.hpp"
#include "gwlab/limits.hpp"
#include "gwlab/model_io.hpp"
#include "gwlab/moments.hpp"
#include "gwlab/stats.hpp"

namespace gwlab {

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "FAILED " << what << "; ";
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

// Block ids keep the criteria on disjoint streams.
constexpr std::uint64_t kBlockMean = 1, kBlockCase2 = 2, kBlockCov = 3, kBlockGrowth = 4;

void mean_oracle(const AcceptanceOptions& o, Outcome& out) {
  const long k = 20;
  const long R = 50000;
  double worst_z = 0.0;
  for (int c = 1; c <= 5; ++c) {
    const ModelParams p = archetype_model(c);
    const auto plan = seed_plan(o.seed, R, StreamPurpose::BranchingPath, kBlockMean * 8 + static_cast<std::uint64_t>(c));
    const auto ends = map_replicates(p, k, plan, o.threads, SamplingMode::Aggregate,
                                     [k](const PathRecord& path) { return path[k].as_real(); });
    const Vec2 target = mean_closed_form(p, k);
    for (int i = 0; i < 2; ++i) {
      std::vector<double> x(ends.size());
      for (std::size_t r = 0; r < ends.size(); ++r) x[r] = ends[r][i];
      const Estimate e = mean_estimate(x);
      const double z = e.se > 0.0 ? std::fabs(e.value - target[i]) / e.se : (e.value == target[i] ? 0.0 : 1e9);
      worst_z = std::fmax(worst_z, z);
      out.require(z <= 3.0, "Case" + std::to_string(c) + " coordinate " + std::to_string(i + 1) + " z=" + fmt(z));
    }
    const auto series = mean_generic_series(p, 10000);
    double worst_rel = 0.0;
    for (long j = 0; j <= 10000; ++j) {
      const Vec2 closed = mean_closed_form(p, j);
      const Vec2 g = series[static_cast<std::size_t>(j)];
      for (int i = 0; i < 2; ++i)
        worst_rel = std::fmax(worst_rel, std::fabs(closed[i] - g[i]) / std::fmax(1.0, std::fabs(g[i])));
    }
    out.require(worst_rel <= 1e-9, "Case" + std::to_string(c) + " generic vs closed rel=" + fmt(worst_rel));
  }
  out.detail << "max |z| " << fmt(worst_z) << " over 5 cases x 2 coordinates (R=50000, k=20)";
}

void brute_force(const AcceptanceOptions&, Outcome& out) {
  const auto B = UnivariateLaw::bernoulli;
  const ModelParams p = build_model(
      BivariateLaw::independent(B(0.6), B(0.5)),
      BivariateLaw::independent(UnivariateLaw::deterministic(0), B(0.7)),
      BivariateLaw::table({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {0.3, 0.2, 0.1, 0.4}));
  double worst = 0.0;
  for (long k = 1; k <= 4; ++k) {
    const ExactPmf pmf = brute_force_pmf(p, k, 64);
    out.require(pmf.leaked == 0.0, "mass left the table at k=" + std::to_string(k));
    const Vec2 m = pmf.mean(), e = exact_mean(p, k).closed_form;
    const Mat2 c = pmf.covariance(), v = exact_cov(p, k);
    for (int i = 0; i < 2; ++i) worst = std::fmax(worst, std::fabs(m[i] - e[i]));
    worst = std::fmax(worst, max_abs_diff(c, v));
  }
  out.require(worst <= 1e-10, "max diff " + fmt(worst));
  out.detail << "max |brute force - formula| " << fmt(worst) << " for k=1..4";
}

void laplace_cross(const AcceptanceOptions&, Outcome& out) {
  const double s1s[] = {0.0, 0.25, 0.5, 1.0, 2.0};
  const double s2s[] = {0.1, 0.25, 0.5, 1.0, 2.0};
  struct Set { double b1, v, a21; };
  const Set sets[] = {{1.0, 1.0, 0.5}, {0.5, 2.0, 1.0}, {2.0, 0.5, 1.5}};
  double worst = 0.0;
  for (const Set& s : sets)
    for (double s1 : s1s)
      for (double s2 : s2s)
        worst = std::fmax(worst, std::fabs(laplace_joint_fosterney(s1, s2, s.b1, s.v, s.a21) -
                                           laplace_joint_case2(s1, s2, 1.0, s.b1, s.v, s.a21)));
  out.require(worst <= 1e-6, "max diff " + fmt(worst));
  out.detail << "max |diff| " << fmt(worst) << " on 75 points";
}

void case2_limit(const AcceptanceOptions& o, Outcome& out) {
  const ModelParams p = archetype_model(2);
  const long n = 500;
  const long R = 50000;
  const auto plan = seed_plan(o.seed, R, StreamPurpose::BranchingPath, kBlockCase2);
  const auto ends = map_replicates(p, n, plan, o.threads, SamplingMode::Aggregate, [n](const PathRecord& path) {
    const Vec2 x = path[n].as_real();
    const double nd = static_cast<double>(n);
    return Vec2{x[0] / nd, x[1] / (nd * nd)};
  });
  const double b1 = p.b[0], v = p.V1(0, 0), a21 = p.a21();
  const Estimate lap = empirical_laplace(ends, {0.5, 0.5});
  const double target = laplace_joint_case2(0.5, 0.5, 1.0, b1, v, a21);
  std::vector<double> x1(ends.size());
  for (std::size_t r = 0; r < ends.size(); ++r) x1[r] = ends[r][0];
  const double ks = ks_distance(x1, [&](double x) { return sbp_marginal_cdf(x, b1, v, 1.0); });
  out.require(std::fabs(lap.value - target) <= 0.02, "laplace");
  out.require(ks <= 0.03, "ks");
  out.detail << "laplace " << fmt(lap.value) << " vs " << fmt(target) << ", KS " << fmt(ks);
}

void stationary(const AcceptanceOptions& o, Outcome& out) {
  const auto G = UnivariateLaw::geometric(2.0 / 3.0);  // mean 0.5
  const auto H = UnivariateLaw::poisson(1.0);
  const long K = 500;
  const long R = 100000;
  const StationaryLaw law = stationary_law(G, H);
  std::vector<std::int64_t> ends(static_cast<std::size_t>(R));
  const auto plan = seed_plan(o.seed, R, StreamPurpose::Auxiliary);
  parallel_for(ends.size(), resolve_threads(o.threads), [&](std::size_t r) {
    RngStream rng = open_stream(plan[r]);
    std::int64_t x = 0;
    for (long k = 0; k < K; ++k) x = G.sample_sum(x, rng, SamplingMode::Aggregate) + H.sample(rng);
    ends[r] = x;
  });
  const double tv = tv_distance(ends, law.pmf);
  const double rel = std::fabs(law.mean_from_pmf - law.mean_theory) / law.mean_theory;
  out.require(tv <= 0.02, "tv");
  out.require(rel <= 1e-6, "mean");
  out.detail << "TV " << fmt(tv) << ", mean " << law.mean_from_pmf << " vs " << law.mean_theory;
}

void covariance_decay(const AcceptanceOptions& o, Outcome& out) {
  const ModelParams p = archetype_model(3);
  const long R = 100000;
  const ExperimentConfig defaults;
  std::uint64_t block = kBlockCov * 8;
  for (const CovariancePoint& pt : defaults.covariance_design) {
    const long K1 = static_cast<long>(std::floor(static_cast<double>(pt.n1) * pt.t1 + 1e-9));
    const long K2 = static_cast<long>(std::floor(static_cast<double>(pt.n2) * pt.t2 + 1e-9));
    const auto pairs = map_replicates(p, std::max(K1, K2), seed_plan(o.seed, R, StreamPurpose::Covariance, block++),
                                      o.threads, SamplingMode::Aggregate, [&](const PathRecord& path) {
                                        return Vec2{static_cast<double>(path[K1].type1) / static_cast<double>(pt.n1),
                                                    static_cast<double>(path[K2].type2)};
                                      });
    std::vector<double> a(pairs.size()), b(pairs.size());
    for (std::size_t r = 0; r < pairs.size(); ++r) {
      a[r] = pairs[r][0];
      b[r] = pairs[r][1];
    }
    const Estimate e = covariance_estimate(a, b);
    const double target = cross_time_cov_case3(p, pt.n1, pt.n2, pt.t1, pt.t2);
    const double bound = cross_time_bound_case3(p, pt.n1);
    const std::string tag = "(" + std::to_string(pt.n1) + "," + std::to_string(pt.n2) + "," + fmt(pt.t1) + "," +
                            fmt(pt.t2) + ")";
    out.require(std::fabs(e.value - target) <= 4.0 * e.se, tag + " estimate");
    out.require(std::fabs(target) <= bound, tag + " bound");
    out.detail << tag << " " << fmt(e.value) << "+-" << fmt(e.se) << " vs " << fmt(target) << " (bound "
               << fmt(bound) << "); ";
  }
}

void ray_collapse(const AcceptanceOptions& o, Outcome& out) {
  const ModelParams p = archetype_model(4);
  const std::vector<double> grid{0.25, 0.5, 0.75, 1.0};
  const long reps = 2000;
  std::vector<double> medians;
  for (long n : {100L, 300L, 1000L}) {
    std::vector<double> per_seed;
    for (std::uint64_t s = 0; s < 5; ++s)
      per_seed.push_back(ray_collapse_statistic(p, n, reps, grid, o.seed + 1000 * (s + 1), o.threads).estimate);
    medians.push_back(median(per_seed));
    out.detail << "n=" << n << ": " << fmt(medians.back()) << "; ";
  }
  for (std::size_t i = 1; i < medians.size(); ++i) out.require(medians[i] < medians[i - 1], "not decreasing");
}

void growth(const AcceptanceOptions& o, Outcome& out) {
  const std::vector<long> ks{25, 50, 100, 200, 400};
  const long R = 4000;
  for (int c : {2, 3}) {
    const ModelParams p = archetype_model(c);
    const auto plan = seed_plan(o.seed, R, StreamPurpose::BranchingPath, kBlockGrowth * 8 + static_cast<std::uint64_t>(c));
    const auto squares = map_replicates(p, ks.back(), plan, o.threads, SamplingMode::Aggregate,
                                        [&](const PathRecord& path) {
                                          std::vector<double> m2(ks.size());
                                          for (std::size_t i = 0; i < ks.size(); ++i) {
                                            const long k = ks[i];
                                            const Vec2 mk = path[k].as_real() - p.A * path[k - 1].as_real() - p.b;
                                            m2[i] = mk[1] * mk[1];
                                          }
                                          return m2;
                                        });
    std::vector<double> mean(ks.size(), 0.0);
    for (const auto& row : squares)
      for (std::size_t i = 0; i < ks.size(); ++i) mean[i] += row[i] / static_cast<double>(R);
    const std::vector<double> kd(ks.begin(), ks.end());
    const double slope = loglog_slope(kd, mean);
    const double expected = *growth_exponent(p.case_label, GrowthQuantity::SecondM2);
    out.require(std::fabs(slope - expected) <= 0.3, "Case" + std::to_string(c) + " slope");
    out.detail << "Case" << c << " slope " << fmt(slope) << " (order " << fmt(expected) << "); ";
  }
}

void determinism(const AcceptanceOptions& o, Outcome& out) {
  struct Job { const char* sub; int case_number; };
  const Job jobs[] = {{"simulate", 2}, {"moments", 3}, {"stationary", 3}, {"limit", 2}, {"experiment", 2}};
  for (const Job& job : jobs) {
    RunConfig cfg;
    cfg.subcommand = job.sub;
    cfg.case_number = job.case_number;
    cfg.seed = o.seed;
    cfg.k = 50;
    cfg.reps = 500;
    cfg.n_list = {50, 100};
    cfg.limit_paths = 500;
    cfg.paths = 5;
    cfg.dt = 1e-2;
    cfg.threads = 1;
    const CommandResult a = run_command(cfg);
    const CommandResult b = run_command(cfg);
    cfg.threads = 8;
    const CommandResult c = run_command(cfg);
    bool same = a.files.size() == b.files.size() && a.files.size() == c.files.size();
    for (std::size_t i = 0; same && i < a.files.size(); ++i)
      same = a.files[i].name == c.files[i].name && a.files[i].content == b.files[i].content &&
             a.files[i].content == c.files[i].content;
    out.require(same, std::string(job.sub) + " differs");
    out.detail << job.sub << (same ? " identical; " : " differs; ");
  }
}

struct Criterion {
  int id;
  const char* name;
  double budget;
  void (*run)(const AcceptanceOptions&, Outcome&);
};

const Criterion kCriteria[kCriterionCount] = {
    {1, "mean_oracle", 60.0, mean_oracle},
    {2, "brute_force_equivalence", 10.0, brute_force},
    {3, "laplace_cross_formula", 5.0, laplace_cross},
    {4, "case2_joint_limit", 300.0, case2_limit},
    {5, "stationary_law", 120.0, stationary},
    {6, "case3_covariance_decay", 180.0, covariance_decay},
    {7, "case4_ray_collapse", 180.0, ray_collapse},
    {8, "growth_exponents", 120.0, growth},
    {9, "determinism", 120.0, determinism},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  for (int id : options.only)
    if (id < 1 || id > kCriterionCount) throw ValidationError("unknown acceptance criterion " + std::to_string(id));
  std::vector<CriterionResult> results;
  for (const Criterion& c : kCriteria) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.id) == options.only.end())
      continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.budget_seconds = c.budget;
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(options, out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "error: " << e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = out.pass;
    r.detail = out.detail.str();
    if (r.seconds > r.budget_seconds) {
      r.pass = false;
      r.detail += " runtime budget exceeded";
    }
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "[%s] %d %s (%.1f s / %.0f s): ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds, r.budget_seconds);
  return head + r.detail;
}

}  // namespace gwlab
