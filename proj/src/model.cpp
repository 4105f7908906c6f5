#include "gwlab/model.hpp"

#include <cmath>

#include "gwlab/error.hpp"

namespace gwlab {

namespace {

bool is_one(double a) { return std::fabs(a - 1.0) <= kCriticalityTolerance; }
bool in_unit_interval(double a) { return a >= 0.0 && a < 1.0 - kCriticalityTolerance; }

}  // namespace

std::string CaseLabel::to_string() const {
  if (covered()) return "Case" + std::to_string(number());
  return "NotCovered(" + reason + ")";
}

CaseLabel CaseLabel::of(int number) {
  if (number < 1 || number > 5) throw ValidationError("case number must be in 1..5");
  return {static_cast<CaseKind>(number), {}};
}

CaseLabel classify(const Mat2& A) {
  const double a11 = A(0, 0), a21 = A(1, 0), a22 = A(1, 1);
  const bool positive21 = a21 > kCriticalityTolerance;
  if (is_one(a11) && is_one(a22)) return {positive21 ? CaseKind::Case2 : CaseKind::Case1, {}};
  if (is_one(a11) && in_unit_interval(a22))
    return {positive21 ? CaseKind::Case4 : CaseKind::Case3, {}};
  if (in_unit_interval(a11) && is_one(a22)) return {CaseKind::Case5, {}};

  std::string reason;
  if (a11 > 1.0 + kCriticalityTolerance || a22 > 1.0 + kCriticalityTolerance)
    reason = "supercritical: spectral radius exceeds 1";
  else
    reason = "subcritical: spectral radius below 1";
  return {CaseKind::NotCovered, reason};
}

ModelParams build_model(OffspringLaw xi1, OffspringLaw xi2, ImmigrationLaw eps, bool allow_swap) {
  Vec2 m1 = xi1.mean();
  Vec2 m2 = xi2.mean();
  const bool a12_positive = m2[0] > 0.0;
  const bool a21_positive = m1[1] > 0.0;
  if (a12_positive && a21_positive)
    throw ValidationError(
        "irreducible mean matrix: both off-diagonal means are positive, the process is not "
        "decomposable");

  ModelParams p;
  if (a12_positive) {
    if (!allow_swap)
      throw ValidationError(
          "type-2 parents have type-1 offspring (a_{1,2} > 0); enable swapping to relabel types");
    OffspringLaw new1 = xi2.swapped();
    OffspringLaw new2 = xi1.swapped();
    xi1 = std::move(new1);
    xi2 = std::move(new2);
    eps = eps.swapped();
    p.swapped = true;
    m1 = xi1.mean();
    m2 = xi2.mean();
  }

  // Decomposability must hold almost surely, not only in mean.
  if (xi2.marginal(0).mean() != 0.0 || !xi2.marginal(0).is_zero())
    throw ValidationError("type-2 parent law puts mass on type-1 offspring");

  p.offspring_type1 = std::move(xi1);
  p.offspring_type2 = std::move(xi2);
  p.immigration = std::move(eps);
  p.A = Mat2(m1[0], m2[0], m1[1], m2[1]);
  p.b = p.immigration.mean();
  p.V0 = p.immigration.covariance();
  p.V1 = p.offspring_type1.covariance();
  p.V2 = p.offspring_type2.covariance();
  p.case_label = classify(p.A);
  return p;
}

Mat2 mean_matrix_power(const Mat2& A, long l) {
  if (l < 0) throw ValidationError("mean_matrix_power: negative exponent");
  if (l == 0) return Mat2::identity();
  const double a11 = A(0, 0), a21 = A(1, 0), a22 = A(1, 1);
  const double p11 = std::pow(a11, static_cast<double>(l));
  const double p22 = std::pow(a22, static_cast<double>(l));
  double lower;
  if (a11 == a22)
    lower = a21 * static_cast<double>(l) * std::pow(a11, static_cast<double>(l - 1));
  else
    lower = a21 * (p11 - p22) / (a11 - a22);
  return {p11, 0.0, lower, p22};
}

}  // namespace gwlab
