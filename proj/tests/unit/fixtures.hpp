#pragma once

#include "gwlab/model.hpp"

namespace fixtures {

using gwlab::BivariateLaw;
using gwlab::ModelParams;
using gwlab::UnivariateLaw;

/// Independent Poisson components with the given mean matrix entries and immigration means.
inline ModelParams poisson_model(double a11, double a21, double a22, double b1 = 1.0, double b2 = 1.0) {
  const auto zero = UnivariateLaw::deterministic(0);
  return gwlab::build_model(BivariateLaw::independent(UnivariateLaw::poisson(a11), UnivariateLaw::poisson(a21)),
                            BivariateLaw::independent(zero, UnivariateLaw::poisson(a22)),
                            BivariateLaw::independent(UnivariateLaw::poisson(b1), UnivariateLaw::poisson(b2)));
}

/// Poisson model with immigration (P0 + P1, P0 + P2), so v0_12 = common.
inline ModelParams correlated_poisson_model(double a11, double a21, double a22, double common, double own1,
                                            double own2) {
  const auto zero = UnivariateLaw::deterministic(0);
  return gwlab::build_model(BivariateLaw::independent(UnivariateLaw::poisson(a11), UnivariateLaw::poisson(a21)),
                            BivariateLaw::independent(zero, UnivariateLaw::poisson(a22)),
                            BivariateLaw::bivariate_poisson(common, own1, own2));
}

/// xi1 = (1, 1), xi2 = (0, 1), eps = (1, 0), all deterministic.
inline ModelParams deterministic_case2() {
  const auto d = UnivariateLaw::deterministic;
  return gwlab::build_model(BivariateLaw::independent(d(1), d(1)), BivariateLaw::independent(d(0), d(1)),
                            BivariateLaw::independent(d(1), d(0)));
}

/// Finite-support model with Bernoulli and small tables, used with the brute-force oracle.
inline ModelParams bernoulli_model() {
  return gwlab::build_model(
      BivariateLaw::table({{0, 0}, {1, 0}, {1, 1}, {2, 1}}, {0.2, 0.4, 0.3, 0.1}),
      BivariateLaw::independent(UnivariateLaw::deterministic(0), UnivariateLaw::bernoulli(0.6)),
      BivariateLaw::table({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {0.3, 0.2, 0.1, 0.4}));
}

}  // namespace fixtures
