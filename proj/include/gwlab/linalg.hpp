#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace gwlab {

/// Real 2-vector, coordinates indexed 0 (type 1) and 1 (type 2).
struct Vec2 {
  std::array<double, 2> v{0.0, 0.0};

  constexpr Vec2() = default;
  constexpr Vec2(double a, double b) : v{a, b} {}

  constexpr double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  constexpr double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a[0] + b[0], a[1] + b[1]}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a[0] - b[0], a[1] - b[1]}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a[0], s * a[1]}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

/// Real 2x2 matrix; m[i][j] is the (i+1, j+1) entry.
struct Mat2 {
  std::array<std::array<double, 2>, 2> m{{{0.0, 0.0}, {0.0, 0.0}}};

  constexpr Mat2() = default;
  constexpr Mat2(double m11, double m12, double m21, double m22) : m{{{m11, m12}, {m21, m22}}} {}

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  constexpr double operator()(int i, int j) const {
    return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  constexpr double& operator()(int i, int j) {
    return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

  constexpr Mat2 transpose() const { return {m[0][0], m[1][0], m[0][1], m[1][1]}; }

  friend constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a(0, 0) + b(0, 0), a(0, 1) + b(0, 1), a(1, 0) + b(1, 0), a(1, 1) + b(1, 1)};
  }
  friend constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a(0, 0) - b(0, 0), a(0, 1) - b(0, 1), a(1, 0) - b(1, 0), a(1, 1) - b(1, 1)};
  }
  friend constexpr Mat2 operator*(double s, const Mat2& a) {
    return {s * a(0, 0), s * a(0, 1), s * a(1, 0), s * a(1, 1)};
  }
  friend constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
  }
  friend constexpr Vec2 operator*(const Mat2& a, Vec2 x) {
    return {a(0, 0) * x[0] + a(0, 1) * x[1], a(1, 0) * x[0] + a(1, 1) * x[1]};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

/// Largest absolute entry difference.
inline double max_abs_diff(const Mat2& a, const Mat2& b) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d = std::fmax(d, std::fabs(a(i, j) - b(i, j)));
  return d;
}

/// Smallest eigenvalue of a symmetric 2x2 matrix (uses the symmetrized off-diagonal).
inline double min_symmetric_eigenvalue(const Mat2& a) {
  const double off = 0.5 * (a(0, 1) + a(1, 0));
  const double mean = 0.5 * (a(0, 0) + a(1, 1));
  const double half_gap = 0.5 * (a(0, 0) - a(1, 1));
  return mean - std::hypot(half_gap, off);
}

/// Nonnegative integer population vector (X_{k,1}, X_{k,2}).
struct Population {
  std::int64_t type1 = 0;
  std::int64_t type2 = 0;

  constexpr std::int64_t operator[](int i) const { return i == 0 ? type1 : type2; }
  constexpr Vec2 as_real() const {
    return {static_cast<double>(type1), static_cast<double>(type2)};
  }
  friend constexpr bool operator==(const Population&, const Population&) = default;
};

}  // namespace gwlab
