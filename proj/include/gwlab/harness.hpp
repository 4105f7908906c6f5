#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gwlab/linalg.hpp"
#include "gwlab/model.hpp"
#include "gwlab/parallel.hpp"
#include "gwlab/simulate.hpp"

namespace gwlab {

/// Scaled step process t -> (n^{-alpha1} X_{floor(nt),1}, n^{-alpha2} X_{floor(nt),2}).
struct ScalingSpec {
  long n = 1;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  std::vector<double> grid;

  /// Normalizing exponents for a covered case.
  static ScalingSpec for_case(const CaseLabel& label, long n, std::vector<double> grid);
  /// Horizon a path needs to cover the grid.
  long horizon() const;
};

struct StepProcessSample {
  std::vector<double> t;
  std::vector<Vec2> values;
};

StepProcessSample step_process(const PathRecord& path, const ScalingSpec& spec);

/// Streams (seed, purpose, block * 2^32 + index) for index in [0, count).
std::vector<StreamDescriptor> seed_plan(std::uint64_t master_seed, std::uint64_t count,
                                        StreamPurpose purpose = StreamPurpose::BranchingPath,
                                        std::uint64_t block = 0);

/// One point of the covariance design: (n1, n2, t1, t2).
struct CovariancePoint {
  long n1 = 1;
  long n2 = 1;
  double t1 = 1.0;
  double t2 = 1.0;
};

struct ExperimentConfig {
  std::vector<long> n_list{100, 300, 1000};
  long reps = 20000;
  std::vector<double> grid{0.25, 0.5, 1.0};
  std::uint64_t seed = 1;
  long limit_paths = 100000;
  double dt = 1e-3;
  SamplingMode sampling = SamplingMode::Aggregate;
  std::vector<Vec2> laplace_points{{0.5, 0.5}, {1.0, 0.5}, {0.5, 1.0}};
  std::vector<CovariancePoint> covariance_design{{20, 20, 1.0, 1.0}, {20, 20, 1.0, 0.5}, {20, 40, 0.5, 1.0}};
  double ks_tolerance = 0.03;
  double laplace_tolerance = 0.02;
  double tv_tolerance = 0.02;
  double covariance_se_multiple = 4.0;
  bool conjecture_probe = true;
  long stationary_N = 256;
  long stationary_M = 4096;
  int threads = 0;  ///< 0: environment or hardware default; never affects results

  void validate() const;
};

/// One reported number with its target and tolerance; optional fields are null in JSON.
struct Statistic {
  std::string name;
  std::optional<double> time;
  std::optional<long> n;
  double estimate = 0.0;
  std::optional<double> se;
  std::optional<double> target;
  std::optional<double> tolerance;
  std::optional<bool> pass;  ///< empty when there is no theoretical target
  long sample_size = 0;
  std::string note;
};

/// Empirical-versus-target curve point for external plotting.
struct PlotPoint {
  std::string series;
  double x = 0.0;
  double empirical = 0.0;
  double target = 0.0;
};

struct ExperimentReport {
  CaseLabel case_label;
  bool swapped = false;
  ExperimentConfig config;
  std::vector<Statistic> statistics;
  std::vector<PlotPoint> plot;

  /// True when every statistic with a target passed.
  bool all_passed() const;
};

/// Simulate `count` replicates of horizon K and map each path through `extract`.
/// Results are stored by replicate index.
template <class F>
auto map_replicates(const ModelParams& params, long K, const std::vector<StreamDescriptor>& plan,
                    int threads, SamplingMode mode, F&& extract) {
  using R = decltype(extract(std::declval<const PathRecord&>()));
  std::vector<R> out(plan.size());
  parallel_for(plan.size(), resolve_threads(threads), [&](std::size_t i) {
    out[i] = extract(simulate_path(params, K, plan[i], mode));
  });
  return out;
}

/// Runs the comparison of scaled simulations against the limit theory for one case.
/// Throws ValidationError on case mismatch, reps < 2 or an invalid configuration.
ExperimentReport run_case_experiment(const CaseLabel& requested, const ModelParams& params,
                                     const ExperimentConfig& config);

/// Mean over replicates of sup_t |n^{-1} X_{floor(nt),2} - a21/(1-a22) n^{-1} X_{floor(nt),1}|
/// in Case 4.
Statistic ray_collapse_statistic(const ModelParams& params, long n, long reps,
                                 const std::vector<double>& grid, std::uint64_t seed, int threads,
                                 SamplingMode mode = SamplingMode::Aggregate);

}  // namespace gwlab
