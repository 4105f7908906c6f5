#include "gwlab/harness.hpp"

#include <algorithm>
#include <cmath>

#include "gwlab/decomposition.hpp"
#include "gwlab/error.hpp"
#include "gwlab/limits.hpp"
#include "gwlab/moments.hpp"
#include "gwlab/stats.hpp"

namespace gwlab {

namespace {

long grid_index(long n, double t) { return static_cast<long>(std::floor(static_cast<double>(n) * t)); }

std::string pair_label(Vec2 s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.17g,%.17g)", s[0], s[1]);
  return buf;
}

// Raw per-replicate values at the grid times.
struct GridRecord {
  std::vector<Population> x;      // X_{floor(nt)}
  std::vector<double> progeny;    // sum_{j=1}^{floor(nt)-1} X_{j,1}
};

GridRecord extract_grid(const PathRecord& path, long n, const std::vector<double>& grid) {
  GridRecord r;
  std::vector<long double> cumulative(path.populations.size(), 0.0L);
  for (std::size_t k = 1; k < path.populations.size(); ++k)
    cumulative[k] = cumulative[k - 1] + static_cast<long double>(path.populations[k].type1);
  for (double t : grid) {
    const long K = grid_index(n, t);
    r.x.push_back(path[K]);
    r.progeny.push_back(K >= 2 ? static_cast<double>(cumulative[static_cast<std::size_t>(K - 1)]) : 0.0);
  }
  return r;
}

class ReportBuilder {
 public:
  explicit ReportBuilder(ExperimentReport& rep) : rep_(rep) {}

  void ks_vs_sbp(const std::string& name, double t, long n, const std::vector<double>& sample,
                 double b, double v, bool plot) {
    auto cdf = [=](double x) { return sbp_marginal_cdf(x, b, v, t); };
    auto left = [=](double x) { return sbp_marginal_cdf_left(x, b, v, t); };
    Statistic s;
    s.name = name;
    s.time = t;
    s.n = n;
    s.estimate = ks_distance(sample, cdf, left);
    s.target = 0.0;
    s.tolerance = rep_.config.ks_tolerance;
    s.pass = s.estimate <= *s.tolerance;
    s.sample_size = static_cast<long>(sample.size());
    s.note = "one-sample KS against the Gamma marginal of the limit";
    rep_.statistics.push_back(std::move(s));
    if (plot) ecdf_plot(name, sample, cdf);
  }

  void ks_two_sample(const std::string& name, double t, long n, const std::vector<double>& sample,
                     const std::vector<double>& reference) {
    Statistic s;
    s.name = name;
    s.time = t;
    s.n = n;
    s.estimate = ks_distance_two_sample(sample, reference);
    s.target = 0.0;
    s.tolerance = rep_.config.ks_tolerance +
                  1.63 * std::sqrt(1.0 / static_cast<double>(sample.size()) +
                                   1.0 / static_cast<double>(reference.size()));
    s.pass = s.estimate <= *s.tolerance;
    s.sample_size = static_cast<long>(sample.size());
    s.note = "two-sample KS against simulated limit paths (" + std::to_string(reference.size()) + ")";
    rep_.statistics.push_back(std::move(s));
  }

  void tv_vs_pmf(const std::string& name, double t, long n, const std::vector<std::int64_t>& sample,
                 const std::vector<double>& pmf, bool plot) {
    Statistic s;
    s.name = name;
    s.time = t;
    s.n = n;
    s.estimate = tv_distance(sample, pmf);
    s.target = 0.0;
    s.tolerance = rep_.config.tv_tolerance;
    s.pass = s.estimate <= *s.tolerance;
    s.sample_size = static_cast<long>(sample.size());
    s.note = "total variation against the stationary law";
    rep_.statistics.push_back(std::move(s));
    if (plot) {
      std::vector<double> hist(std::min<std::size_t>(pmf.size(), 31), 0.0);
      for (auto v : sample)
        if (v >= 0 && static_cast<std::size_t>(v) < hist.size()) hist[static_cast<std::size_t>(v)] += 1.0;
      for (std::size_t k = 0; k < hist.size(); ++k)
        rep_.plot.push_back({name, static_cast<double>(k), hist[k] / static_cast<double>(sample.size()), pmf[k]});
    }
  }

  void covariance(const std::string& name, const CovariancePoint& d, const Estimate& est,
                  double target) {
    Statistic s;
    s.name = name;
    s.time = d.t2;
    s.n = d.n2;
    s.estimate = est.value;
    s.se = est.se;
    s.target = target;
    s.tolerance = rep_.config.covariance_se_multiple * est.se;
    s.pass = std::fabs(est.value - target) <= *s.tolerance;
    s.sample_size = rep_.config.reps;
    s.note = design_note(d);
    rep_.statistics.push_back(std::move(s));
  }

  void add(Statistic s) { rep_.statistics.push_back(std::move(s)); }

  static std::string design_note(const CovariancePoint& d) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "n1=%ld n2=%ld t1=%.17g t2=%.17g", d.n1, d.n2, d.t1, d.t2);
    return buf;
  }

 private:
  template <class Cdf>
  void ecdf_plot(const std::string& name, std::vector<double> sample, Cdf cdf) {
    std::sort(sample.begin(), sample.end());
    const std::size_t m = sample.size();
    for (int q = 0; q <= 40; ++q) {
      const std::size_t idx = std::min(m - 1, static_cast<std::size_t>(q) * (m - 1) / 40);
      const double x = sample[idx];
      const auto upto = std::upper_bound(sample.begin(), sample.end(), x) - sample.begin();
      rep_.plot.push_back({name, x, static_cast<double>(upto) / static_cast<double>(m), cdf(x)});
    }
  }

  ExperimentReport& rep_;
};

// Squared Bessel reference values X_t and int_0^t X at the grid times.
struct LimitReference {
  std::vector<std::vector<double>> x;         // [grid][path]
  std::vector<std::vector<double>> integral;  // [grid][path]
};

LimitReference simulate_limit_reference(const SdeConfig& base, const ExperimentConfig& cfg,
                                        int threads) {
  SdeConfig sde = base;
  sde.T = *std::max_element(cfg.grid.begin(), cfg.grid.end());
  sde.dt = cfg.dt;
  const long steps = sde.steps();
  const double h = steps > 0 ? sde.T / static_cast<double>(steps) : 0.0;
  std::vector<std::size_t> at;
  for (double t : cfg.grid) at.push_back(h > 0.0 ? static_cast<std::size_t>(std::llround(t / h)) : 0);

  const auto L = static_cast<std::size_t>(cfg.limit_paths);
  LimitReference ref;
  ref.x.assign(cfg.grid.size(), std::vector<double>(L));
  ref.integral.assign(cfg.grid.size(), std::vector<double>(L));
  const auto plan = seed_plan(cfg.seed, L, StreamPurpose::LimitPath);
  parallel_for(L, threads, [&](std::size_t i) {
    RngStream rng = open_stream(plan[i]);
    const LimitPath p = simulate_sbp(sde, rng);
    for (std::size_t g = 0; g < at.size(); ++g) {
      ref.x[g][i] = p.x1[at[g]];
      ref.integral[g][i] = p.integral[at[g]];
    }
  });
  return ref;
}

}  // namespace

ScalingSpec ScalingSpec::for_case(const CaseLabel& label, long n, std::vector<double> grid) {
  ScalingSpec s;
  s.n = n;
  s.grid = std::move(grid);
  switch (label.kind) {
    case CaseKind::Case1: s.alpha1 = 1; s.alpha2 = 1; break;
    case CaseKind::Case2: s.alpha1 = 1; s.alpha2 = 2; break;
    case CaseKind::Case3: s.alpha1 = 1; s.alpha2 = 0; break;
    case CaseKind::Case4: s.alpha1 = 1; s.alpha2 = 1; break;
    case CaseKind::Case5: s.alpha1 = 0; s.alpha2 = 1; break;
    case CaseKind::NotCovered:
      throw ValidationError("no scaling for " + label.to_string());
  }
  return s;
}

long ScalingSpec::horizon() const {
  long K = 0;
  for (double t : grid) K = std::max(K, grid_index(n, t));
  return K;
}

StepProcessSample step_process(const PathRecord& path, const ScalingSpec& spec) {
  if (spec.n < 1) throw ValidationError("step_process: n must be positive");
  if (path.horizon() < spec.horizon())
    throw ValidationError("step_process: path horizon " + std::to_string(path.horizon()) +
                          " shorter than required " + std::to_string(spec.horizon()));
  const double n = static_cast<double>(spec.n);
  const double s1 = std::pow(n, -spec.alpha1), s2 = std::pow(n, -spec.alpha2);
  StepProcessSample out;
  for (double t : spec.grid) {
    if (t < 0.0) throw ValidationError("step_process: negative time");
    const Population& x = path[grid_index(spec.n, t)];
    out.t.push_back(t);
    out.values.push_back({s1 * static_cast<double>(x.type1), s2 * static_cast<double>(x.type2)});
  }
  return out;
}

std::vector<StreamDescriptor> seed_plan(std::uint64_t master_seed, std::uint64_t count,
                                        StreamPurpose purpose, std::uint64_t block) {
  if (count < 1) throw ValidationError("seed_plan: count must be at least 1");
  if (count > (std::uint64_t{1} << 32) || block >= (std::uint64_t{1} << 16))
    throw ValidationError("seed_plan: count must be <= 2^32 and block < 2^16");
  std::vector<StreamDescriptor> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i)
    out.push_back(make_stream(master_seed, purpose, (block << 32) | i));
  return out;
}

void ExperimentConfig::validate() const {
  if (reps == 0) throw ValidationError("reps must be positive");
  if (reps < 2) throw ValidationError("insufficient replicates: need at least 2");
  if (n_list.empty()) throw ValidationError("n list is empty");
  for (long n : n_list)
    if (n < 1) throw ValidationError("every n must be positive");
  if (grid.empty()) throw ValidationError("time grid is empty");
  for (double t : grid)
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("grid times must be nonnegative");
  if (limit_paths < 2) throw ValidationError("limit_paths must be at least 2");
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  for (const auto& s : laplace_points)
    if (s[0] < 0.0 || s[1] < 0.0) throw ValidationError("laplace points must be nonnegative");
  for (const auto& d : covariance_design)
    if (d.n1 < 1 || d.n2 < 1 || d.t1 < 0.0 || d.t2 < 0.0)
      throw ValidationError("covariance design needs n >= 1 and t >= 0");
}

bool ExperimentReport::all_passed() const {
  for (const auto& s : statistics)
    if (s.pass.has_value() && !*s.pass) return false;
  return true;
}

Statistic ray_collapse_statistic(const ModelParams& params, long n, long reps,
                                 const std::vector<double>& grid, std::uint64_t seed, int threads,
                                 SamplingMode mode) {
  if (params.case_label.kind != CaseKind::Case4)
    throw ValidationError("ray collapse statistic needs a Case4 model");
  if (reps < 2) throw ValidationError("insufficient replicates: need at least 2");
  const ScalingSpec spec = ScalingSpec::for_case(params.case_label, n, grid);
  const double slope = params.a21() / (1.0 - params.a22());
  const auto sup = map_replicates(params, spec.horizon(), seed_plan(seed, static_cast<std::uint64_t>(reps)),
                                  threads, mode, [&](const PathRecord& p) {
                                    double m = 0.0;
                                    for (const auto& v : step_process(p, spec).values)
                                      m = std::fmax(m, std::fabs(v[1] - slope * v[0]));
                                    return m;
                                  });
  const Estimate e = mean_estimate(sup);
  Statistic s;
  s.name = "ray_sup_mean";
  s.n = n;
  s.estimate = e.value;
  s.se = e.se;
  s.sample_size = reps;
  s.note = "mean over replicates of sup over the grid of |X2/n - a21/(1-a22) X1/n|";
  return s;
}

ExperimentReport run_case_experiment(const CaseLabel& requested, const ModelParams& params,
                                     const ExperimentConfig& config) {
  config.validate();
  if (!requested.covered()) throw ValidationError("experiment needs a covered case");
  if (params.case_label.kind != requested.kind)
    throw ValidationError("case mismatch: model is " + params.case_label.to_string() +
                          ", experiment requested " + requested.to_string());

  ExperimentReport rep;
  rep.case_label = params.case_label;
  rep.swapped = params.swapped;
  rep.config = config;
  ReportBuilder out(rep);
  const int threads = resolve_threads(config.threads);
  const auto kind = params.case_label.kind;
  const auto& grid = config.grid;
  const double tmax = *std::max_element(grid.begin(), grid.end());
  const auto R = static_cast<std::uint64_t>(config.reps);
  const double b1 = params.b[0], b2 = params.b[1];
  const double v11 = params.V1(0, 0), v22 = params.V2(1, 1);
  const double a21 = params.a21();

  std::optional<LimitReference> limit_ref;
  if (kind == CaseKind::Case2)
    limit_ref = simulate_limit_reference(limit_sde(params, tmax, config.dt), config, threads);

  std::optional<StationaryLaw> mu;
  if (kind == CaseKind::Case3)
    mu = stationary_law(params.offspring_type2.marginal(1), params.immigration.marginal(1),
                        config.stationary_N, config.stationary_M);
  if (kind == CaseKind::Case5)
    mu = stationary_law(params.offspring_type1.marginal(0), params.immigration.marginal(0),
                        config.stationary_N, config.stationary_M);

  std::vector<double> ray_means;
  for (std::size_t ni = 0; ni < config.n_list.size(); ++ni) {
    const long n = config.n_list[ni];
    const ScalingSpec spec = ScalingSpec::for_case(params.case_label, n, grid);
    const auto plan = seed_plan(config.seed, R, StreamPurpose::BranchingPath, ni);
    const auto records = map_replicates(params, spec.horizon(), plan, threads, config.sampling,
                                        [&](const PathRecord& p) { return extract_grid(p, n, grid); });
    const bool last_n = ni + 1 == config.n_list.size();
    const double nd = static_cast<double>(n);
    const double s1 = std::pow(nd, -spec.alpha1), s2 = std::pow(nd, -spec.alpha2);

    std::vector<double> ray_sup(records.size(), 0.0);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double t = grid[g];
      const bool plot = last_n && t == tmax;
      std::vector<double> y1(records.size()), y2(records.size());
      std::vector<std::int64_t> raw1(records.size()), raw2(records.size());
      for (std::size_t r = 0; r < records.size(); ++r) {
        raw1[r] = records[r].x[g].type1;
        raw2[r] = records[r].x[g].type2;
        y1[r] = s1 * static_cast<double>(raw1[r]);
        y2[r] = s2 * static_cast<double>(raw2[r]);
      }

      switch (kind) {
        case CaseKind::Case1: {
          out.ks_vs_sbp("ks_x1_vs_limit", t, n, y1, b1, v11, plot);
          out.ks_vs_sbp("ks_x2_vs_limit", t, n, y2, b2, v22, plot);
          if (t > 0.0) {
            Statistic s;
            s.name = "corr_x1_x2";
            s.time = t;
            s.n = n;
            s.estimate = correlation(y1, y2);
            s.target = 0.0;
            s.tolerance = 4.0 / std::sqrt(static_cast<double>(R));
            s.pass = std::fabs(s.estimate) <= *s.tolerance;
            s.sample_size = config.reps;
            s.note = "limit coordinates are independent";
            out.add(std::move(s));
          }
          break;
        }
        case CaseKind::Case2: {
          out.ks_vs_sbp("ks_x1_vs_gamma", t, n, y1, b1, v11, plot);
          std::vector<Vec2> joint(records.size());
          for (std::size_t r = 0; r < records.size(); ++r) joint[r] = {y1[r], y2[r]};
          for (const Vec2& s : config.laplace_points) {
            const Estimate e = empirical_laplace(joint, s);
            Statistic st;
            st.name = "laplace_joint" + pair_label(s);
            st.time = t;
            st.n = n;
            st.estimate = e.value;
            st.se = e.se;
            st.target = laplace_joint_case2(s[0], s[1], t, b1, v11, a21);
            st.tolerance = config.laplace_tolerance;
            st.pass = std::fabs(e.value - *st.target) <= *st.tolerance;
            st.sample_size = config.reps;
            out.add(std::move(st));
          }
          if (t > 0.0) {
            std::vector<double> freq(records.size()), prog(records.size());
            for (std::size_t r = 0; r < records.size(); ++r) {
              freq[r] = raw1[r] != 0 ? static_cast<double>(raw2[r]) / static_cast<double>(raw1[r]) / nd : 0.0;
              prog[r] = records[r].progeny[g] / (nd * nd);
            }
            std::vector<double> ref_freq(limit_ref->x[g].size());
            for (std::size_t i = 0; i < ref_freq.size(); ++i)
              ref_freq[i] = limit_ref->x[g][i] > 0.0 ? a21 * limit_ref->integral[g][i] / limit_ref->x[g][i] : 0.0;
            out.ks_two_sample("ks_relative_frequency", t, n, freq, ref_freq);
            out.ks_two_sample("ks_total_progeny", t, n, prog, limit_ref->integral[g]);
          }
          break;
        }
        case CaseKind::Case3: {
          out.ks_vs_sbp("ks_x1_vs_limit", t, n, y1, b1, v11, plot);
          if (t > 0.0) out.tv_vs_pmf("tv_x2_vs_stationary", t, n, raw2, mu->pmf, plot);
          if (config.conjecture_probe && last_n && t == tmax) {
            Statistic s;
            s.name = "conjecture_dcor_x1_x2";
            s.time = t;
            s.n = n;
            s.estimate = distance_correlation(y1, y2);
            s.sample_size = static_cast<long>(std::min<std::size_t>(records.size(), 2000));
            s.note = "no theoretical target: dependence probe for the joint limit";
            out.add(std::move(s));
          }
          break;
        }
        case CaseKind::Case4: {
          out.ks_vs_sbp("ks_x1_vs_limit", t, n, y1, b1, v11, plot);
          const double slope = a21 / (1.0 - params.a22());
          for (std::size_t r = 0; r < records.size(); ++r)
            ray_sup[r] = std::fmax(ray_sup[r], std::fabs(y2[r] - slope * y1[r]));
          break;
        }
        case CaseKind::Case5: {
          const SdeConfig sde = limit_sde(params, t, config.dt);
          out.ks_vs_sbp("ks_x2_vs_limit", t, n, y2, sde.drift, sde.diffusion, plot);
          if (t > 0.0) out.tv_vs_pmf("tv_x1_vs_stationary", t, n, raw1, mu->pmf, plot);
          break;
        }
        case CaseKind::NotCovered:
          break;
      }
    }

    if (kind == CaseKind::Case4) {
      const Estimate e = mean_estimate(ray_sup);
      Statistic s;
      s.name = "ray_sup_mean";
      s.n = n;
      s.estimate = e.value;
      s.se = e.se;
      s.sample_size = config.reps;
      s.note = "mean over replicates of sup over the grid of |X2/n - a21/(1-a22) X1/n|";
      out.add(std::move(s));
      ray_means.push_back(e.value);
    }

    if (kind == CaseKind::Case2 && last_n) {
      // Total progeny identity on the first replicate.
      const PathRecord p = simulate_path(params, spec.horizon(), plan[0], config.sampling);
      const auto series = decompose_second(p, params, DecompositionMethod::DirectSum);
      double worst = 0.0;
      long double cumulative = 0.0L;
      for (long k = 1; k <= p.horizon(); ++k) {
        const double x = series.x1part[static_cast<std::size_t>(k)];
        worst = std::fmax(worst, std::fabs(x - static_cast<double>(cumulative)) / std::fmax(1.0, std::fabs(x)));
        cumulative += static_cast<long double>(p[k].type1);
      }
      Statistic s;
      s.name = "progeny_identity_rel_error";
      s.n = n;
      s.estimate = worst;
      s.target = 0.0;
      s.tolerance = 1e-9;
      s.pass = worst <= 1e-9;
      s.sample_size = 1;
      s.note = "X^(1)_{k,2} equals sum_{j<k} X_{j,1} along one path";
      out.add(std::move(s));
    }
  }

  if (kind == CaseKind::Case4 && ray_means.size() >= 2) {
    bool decreasing = true;
    for (std::size_t i = 1; i < ray_means.size(); ++i) decreasing = decreasing && ray_means[i] < ray_means[i - 1];
    Statistic s;
    s.name = "ray_sup_decreasing";
    s.estimate = ray_means.back() / ray_means.front();
    s.target = 1.0;
    s.tolerance = 0.0;
    s.pass = decreasing;
    s.sample_size = config.reps;
    s.note = "ratio of largest-n to smallest-n value; passes when strictly decreasing along the n list";
    out.add(std::move(s));
  }

  if (kind == CaseKind::Case3 || kind == CaseKind::Case5) {
    for (std::size_t d = 0; d < config.covariance_design.size(); ++d) {
      const CovariancePoint& pt = config.covariance_design[d];
      const long K1 = grid_index(pt.n1, pt.t1), K2 = grid_index(pt.n2, pt.t2);
      const auto plan = seed_plan(config.seed, R, StreamPurpose::Covariance, d);
      const auto pairs = map_replicates(params, std::max(K1, K2), plan, threads, config.sampling,
                                        [&](const PathRecord& p) { return std::pair{p[K1].type1, p[K2].type2}; });
      std::vector<double> x(pairs.size()), y(pairs.size());
      const bool case3 = kind == CaseKind::Case3;
      for (std::size_t r = 0; r < pairs.size(); ++r) {
        x[r] = static_cast<double>(pairs[r].first) / (case3 ? static_cast<double>(pt.n1) : 1.0);
        y[r] = static_cast<double>(pairs[r].second) / (case3 ? 1.0 : static_cast<double>(pt.n2));
      }
      const Estimate est = covariance_estimate(x, y);
      if (case3) {
        out.covariance("cov_case3", pt, est, cross_time_cov_case3(params, pt.n1, pt.n2, pt.t1, pt.t2));
        Statistic s;
        s.name = "cov_case3_bound";
        s.time = pt.t2;
        s.n = pt.n2;
        s.estimate = std::fabs(est.value);
        s.se = est.se;
        s.target = cross_time_bound_case3(params, pt.n1);
        s.tolerance = config.covariance_se_multiple * est.se;
        s.pass = s.estimate <= *s.target + *s.tolerance;
        s.sample_size = config.reps;
        s.note = "upper bound |v0_12| / ((1 - a22) n1); " + ReportBuilder::design_note(pt);
        out.add(std::move(s));
      } else {
        out.covariance("cov_case5", pt, est, cross_time_cov_case5(params, pt.n1, pt.n2, pt.t1, pt.t2));
      }
    }
  }
  return rep;
}

}  // namespace gwlab
