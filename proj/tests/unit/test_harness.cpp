#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "gwlab/error.hpp"
#include "gwlab/harness.hpp"
#include "gwlab/stats.hpp"

using namespace gwlab;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n_list = {50};
  c.reps = 1500;
  c.limit_paths = 1500;
  c.dt = 1e-2;
  c.conjecture_probe = false;
  c.threads = 1;
  return c;
}

const Statistic* find_stat(const ExperimentReport& r, const std::string& name, double t) {
  for (const auto& s : r.statistics)
    if (s.name == name && s.time && *s.time == t) return &s;
  return nullptr;
}

}  // namespace

TEST_CASE("scaling exponents per case") {
  const auto s2 = ScalingSpec::for_case(CaseLabel::of(2), 10, {0.25, 1.0});
  CHECK(s2.alpha1 == 1.0);
  CHECK(s2.alpha2 == 2.0);
  CHECK(s2.horizon() == 10);
  CHECK(ScalingSpec::for_case(CaseLabel::of(3), 10, {1.0}).alpha2 == 0.0);
  CHECK(ScalingSpec::for_case(CaseLabel::of(5), 10, {1.0}).alpha1 == 0.0);
  CHECK_THROWS_AS(ScalingSpec::for_case(CaseLabel{CaseKind::NotCovered, "subcritical"}, 10, {1.0}), ValidationError);
}

TEST_CASE("step process of a deterministic path") {
  const auto p = fixtures::deterministic_case2();
  const auto path = simulate_path(p, 10, make_stream(1, StreamPurpose::BranchingPath, 0));
  const auto spec = ScalingSpec::for_case(p.case_label, 10, {0.0, 0.25, 0.5, 1.0});
  const auto s = step_process(path, spec);
  REQUIRE(s.values.size() == 4);
  CHECK(s.values[0] == Vec2{0.0, 0.0});
  CHECK(s.values[1][0] == doctest::Approx(0.2));
  CHECK(s.values[1][1] == doctest::Approx(0.01));
  CHECK(s.values[3][0] == doctest::Approx(1.0));
  CHECK(s.values[3][1] == doctest::Approx(0.45));
  const auto too_long = ScalingSpec::for_case(p.case_label, 20, {1.0});
  CHECK_THROWS_AS(step_process(path, too_long), ValidationError);
}

TEST_CASE("replicate results do not depend on evaluation order or thread count") {
  const auto p = fixtures::poisson_model(1.0, 0.5, 1.0);
  auto plan = seed_plan(4, 64);
  const auto last = [](const PathRecord& r) { return r[r.horizon()]; };
  const auto one = map_replicates(p, 30, plan, 1, SamplingMode::Aggregate, last);
  const auto many = map_replicates(p, 30, plan, 8, SamplingMode::Aggregate, last);
  CHECK(one == many);
  std::reverse(plan.begin(), plan.end());
  auto reversed = map_replicates(p, 30, plan, 3, SamplingMode::Aggregate, last);
  std::reverse(reversed.begin(), reversed.end());
  CHECK(one == reversed);
}

TEST_CASE("experiment configuration validation") {
  const auto p = fixtures::poisson_model(1.0, 0.0, 1.0);
  auto c = small_config();
  c.reps = 0;
  CHECK_THROWS_WITH_AS(run_case_experiment(CaseLabel::of(1), p, c), doctest::Contains("reps must be positive"),
                       ValidationError);
  c.reps = 1;
  CHECK_THROWS_WITH_AS(run_case_experiment(CaseLabel::of(1), p, c), doctest::Contains("insufficient replicates"),
                       ValidationError);
  CHECK_THROWS_AS(run_case_experiment(CaseLabel::of(2), p, small_config()), ValidationError);
  c = small_config();
  c.n_list = {};
  CHECK_THROWS_AS(run_case_experiment(CaseLabel::of(1), p, c), ValidationError);
}

TEST_CASE("Case 1 experiment: marginals match and coordinates decorrelate") {
  const auto p = fixtures::poisson_model(1.0, 0.0, 1.0, 1.0, 2.0);
  const auto r = run_case_experiment(CaseLabel::of(1), p, small_config());
  const auto* corr = find_stat(r, "corr_x1_x2", 1.0);
  REQUIRE(corr != nullptr);
  CHECK(corr->pass.value_or(false));
  CHECK(std::fabs(corr->estimate) <= 4.0 / std::sqrt(1500.0));
  const auto* ks = find_stat(r, "ks_x1_vs_limit", 1.0);
  REQUIRE(ks != nullptr);
  CHECK(ks->target.has_value());
}

TEST_CASE("Case 2 KS distance does not grow with n") {
  const auto p = fixtures::poisson_model(1.0, 0.5, 1.0, 1.0, 1.0);
  std::vector<double> medians;
  for (long n : {20L, 80L, 320L}) {
    std::vector<double> ks;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto c = small_config();
      c.n_list = {n};
      c.grid = {1.0};
      c.seed = seed;
      c.reps = 1000;
      c.limit_paths = 200;
      c.laplace_points = {};
      const auto r = run_case_experiment(CaseLabel::of(2), p, c);
      const auto* s = find_stat(r, "ks_x1_vs_gamma", 1.0);
      REQUIRE(s != nullptr);
      ks.push_back(s->estimate);
    }
    medians.push_back(median(ks));
  }
  for (std::size_t i = 1; i < medians.size(); ++i) {
    CAPTURE(i);
    CHECK(medians[i] <= 1.5 * medians[i - 1]);
  }
}

TEST_CASE("experiment output is identical for 1 and 8 threads") {
  const auto p = fixtures::correlated_poisson_model(1.0, 0.0, 0.5, 0.5, 0.5, 0.5);
  auto c = small_config();
  c.reps = 400;
  c.covariance_design = {{10, 10, 1.0, 1.0}};
  const auto a = run_case_experiment(CaseLabel::of(3), p, c);
  c.threads = 8;
  const auto b = run_case_experiment(CaseLabel::of(3), p, c);
  REQUIRE(a.statistics.size() == b.statistics.size());
  for (std::size_t i = 0; i < a.statistics.size(); ++i) {
    CHECK(a.statistics[i].name == b.statistics[i].name);
    CHECK(a.statistics[i].estimate == b.statistics[i].estimate);
    CHECK(a.statistics[i].se == b.statistics[i].se);
  }
}

TEST_CASE("Case 4 ray statistic shrinks with n") {
  const auto p = fixtures::poisson_model(1.0, 1.0, 0.0);
  const auto small = ray_collapse_statistic(p, 50, 500, {0.25, 0.5, 1.0}, 3, 1);
  const auto large = ray_collapse_statistic(p, 800, 500, {0.25, 0.5, 1.0}, 3, 1);
  CHECK(large.estimate < small.estimate);
  CHECK_THROWS_AS(ray_collapse_statistic(fixtures::poisson_model(1.0, 0.5, 1.0), 50, 10, {1.0}, 3, 1),
                  ValidationError);
}
