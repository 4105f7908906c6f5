#pragma once

#include <string>

#include "gwlab/laws.hpp"
#include "gwlab/linalg.hpp"

namespace gwlab {

/// Tolerance for deciding a_{i,i} == 1 and a_{2,1} == 0.
inline constexpr double kCriticalityTolerance = 1e-9;

enum class CaseKind { Case1 = 1, Case2 = 2, Case3 = 3, Case4 = 4, Case5 = 5, NotCovered = 0 };

/// Which row of the five-case table a mean matrix falls in.
struct CaseLabel {
  CaseKind kind = CaseKind::NotCovered;
  std::string reason;  // set only for NotCovered

  bool covered() const { return kind != CaseKind::NotCovered; }
  int number() const { return static_cast<int>(kind); }
  std::string to_string() const;

  static CaseLabel of(int number);

  friend bool operator==(const CaseLabel& a, const CaseLabel& b) { return a.kind == b.kind; }
};

/// Classify a lower-triangular mean matrix with nonnegative entries.
CaseLabel classify(const Mat2& A);

struct ModelParams {
  OffspringLaw offspring_type1;
  OffspringLaw offspring_type2;
  ImmigrationLaw immigration;

  Mat2 A;   ///< column i is E xi_i
  Vec2 b;   ///< E epsilon
  Mat2 V0;  ///< Var epsilon
  Mat2 V1;  ///< Var xi_1
  Mat2 V2;  ///< Var xi_2
  CaseLabel case_label;
  bool swapped = false;  ///< coordinates were exchanged to make a_{1,2} = 0

  double a11() const { return A(0, 0); }
  double a21() const { return A(1, 0); }
  double a22() const { return A(1, 1); }
};

/// Validate the laws, derive moments and classify.
///
/// If only the (1,2) mean entry is positive and `allow_swap` is set the two types are
/// exchanged first. Configurations outside the table come back as NotCovered; an
/// irreducible mean matrix, or a_{1,2} > 0 without `allow_swap`, is rejected.
ModelParams build_model(OffspringLaw xi1, OffspringLaw xi2, ImmigrationLaw eps,
                        bool allow_swap = true);

/// A^l for lower-triangular A, by the closed form.
Mat2 mean_matrix_power(const Mat2& A, long l);

}  // namespace gwlab
