#ifndef P4P_QUADRATICS_H_
#define P4P_QUADRATICS_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>

#include "p4p/coords.h"

namespace p4p {

// Coefficients (X_{i,0}, X_{i,1}, X_{i,2}) of Q_i(x) = X_{i,2} x^2 +
// X_{i,1} x + X_{i,0}, whose roots include z_i^2 for the rotated-frame depth
// z_i. A row is only meaningful up to a common scale factor.
template <typename T>
using CoeffRow = std::array<T, 3>;

template <typename T>
struct BasicQuadraticCoeffs {
  std::array<CoeffRow<T>, 4> rows{};
};

using QuadraticCoeffs = BasicQuadraticCoeffs<double>;

// Row 0 coefficients. Production evaluation path: the polynomials are grouped
// by their (b, d) monomial and each group's (a, c) cofactor is written as a
// product of short linear forms, nested Horner-style in b and d. The
// monomial list in data/q_coefficients.txt is the reference these must match.
template <typename T>
CoeffRow<T> EvalXRow0(const BasicCoordVector<T>& co) {
  const T a0 = co.a[0], a1 = co.a[1], a2 = co.a[2];
  const T b0 = co.b[0], b1 = co.b[1], b2 = co.b[2];
  const T c0 = co.c[0], c1 = co.c[1], c2 = co.c[2];
  const T d0 = co.d[0], d1 = co.d[1], d2 = co.d[2];
  (void)c2;

  const T e = a0 - a1;
  const T s = a2 - c0 - c1;
  const T u = e - a2;
  const T v = a2 + c0 - c1;
  const T w = e + c0 - c1;
  const T p = a0 + a1 - a2;
  const T q = e + a2;
  const T r = a2 - c0 + c1;
  const T g = a0 + a0 - a2 + c0 - c1;
  const T h = a0 + a1 - c0 - c1;
  const T c01 = c0 - c1;

  const T x0 =
      b1 * (b2 * (s * u * u - d2 * u * v * w) + d0 * d1 * p * v * v) +
      T(2) * b2 * d2 * c0 * u * q +
      d0 * (d0 * (T(2) * a1 * r * v * d2 - T(4) * a1 * a2 * s) - T(4) * a2 * c0 * p * d1);

  const T x1 =
      b0 * (b1 * (b2 * (T(2) * w * (e - a2 - a2 - c0 + c1) * d2 + T(4) * u * s) -
                  T(4) * p * v * d0 * d1) -
            T(2) * b2 * d2 * q * (u - c0 - c0) +
            d0 * (d0 * (T(4) * (a1 + a2) * s - T(2) * r * (a1 + a1 + v) * d2) +
                  T(4) * (a2 + c0) * p * d1)) +
      b1 * (T(-2) * b2 * d2 * u * (q - c1 - c1) +
            d1 * (T(4) * (a2 - c1) * p * d0 + d1 * (T(2) * v * g * d2 - T(4) * (a0 - a2) * s))) +
      b2 * d2 * d2 * (T(4) * (e * e - a2 * (c0 + c1)) - T(2) * (e - c01) * w * d2) +
      d2 * (T(8) * a1 * c1 * d0 * d0 - T(8) * a0 * c0 * d1 * d1 +
            d0 * d1 * (T(4) * (a2 * (a0 + a1) - c01 * c01) * d2 - T(8) * a2 * h));

  const T x2 =
      T(4) *
      (b0 * b0 * (b1 * (b2 * (w * d2 + s) + p * d0 * d1) - q * b2 * d2 +
                  d0 * (d0 * (r * d2 - s) - p * d1)) +
       b0 * (b1 * (-(q - c1 - c1) * b2 * d2 - p * d0 * d1 - d1 * d1 * (g * d2 + s)) +
             b2 * d2 * d2 * ((e + e + a2 + c0 + c1) - w * d2) +
             d2 * (T(-2) * c1 * d0 * d0 + T(2) * a0 * d1 * d1 +
                   d0 * d1 * (T(2) * h - (a0 + a1 + a2 - c0 - c0 + c1 + c1) * d2))) +
       d2 * (T(2) * (a0 - c1) * b1 * d1 * d1 - T(2) * c1 * b2 * d2 * d2 +
             d2 * (T(4) * c1 * d0 * d1 + T(2) * a0 * d1 * d1 * (d2 - T(2)))));

  return {x0, x1, x2};
}

// Row 3 coefficients; same evaluation scheme as EvalXRow0.
template <typename T>
CoeffRow<T> EvalXRow3(const BasicCoordVector<T>& co) {
  const T a1 = co.a[1], a2 = co.a[2];
  const T b0 = co.b[0], b1 = co.b[1], b2 = co.b[2];
  const T c0 = co.c[0], c1 = co.c[1], c2 = co.c[2];
  const T d1 = co.d[1], d2 = co.d[2];

  const T s1 = a1 - c0 - c2;
  const T s2 = a2 - c0 - c1;
  const T t1 = a1 - c0 + c2;
  const T t2 = a2 - c0 + c1;
  const T u = a1 - a2 + c1 - c2;
  const T v1 = a1 + c0 - c2;
  const T v2 = a2 + c0 - c1;
  const T w = a1 - a2 - c1 + c2;
  const T m1 = a1 + a1 - a2 - c0 + c1;  // 2a1 - a2 - c0 + c1
  const T m2 = a1 - a2 - a2 + c0 - c2;  // a1 - 2a2 + c0 - c2
  const T a2c1 = a2 - c1;
  const T a1c2 = a1 - c2;

  const T x0 = b0 * (b1 * s2 * (b2 * s1 * u + d1 * t1 * s2) - b2 * d2 * s1 * s1 * t2) +
               d1 * d1 * (T(4) * c0 * c2 * t2 * d2 - T(2) * c2 * s2 * v2 * b1) +
               d2 * d2 * (T(2) * c1 * s1 * v1 * b2 - T(4) * c0 * c1 * t1 * d1);

  const T x1 =
      b0 * (b1 * (T(2) * u * (s1 + s2) * b2 + T(4) * t1 * s2 * d1 - T(2) * s2 * m1) +
            b2 * (T(-4) * s1 * t2 * d2 - T(2) * s1 * m2) - T(4) * (a2 - c0) * t1 * d1 +
            T(4) * (a1 - c0) * t2 * d2) +
      b1 * (T(-2) * u * (a1 + a2 - c1 - c2) * b2 +
            d1 * (T(2) * v2 * (s2 - c2 - c2) * d1 + T(4) * (c0 * (a1 + c2) - a2c1 * a2c1))) +
      b2 * d2 * (T(-2) * v1 * (s1 - c1 - c1) * d2 + T(4) * (a1c2 * a1c2 - c0 * (a2 + c1))) +
      d1 * (d1 * (T(8) * a2 * c2 - T(4) * (c0 + c2) * t2 * d2) +
            d2 * (T(4) * (c0 + c1) * t1 * d2 - T(8) * c0 * w)) -
      T(8) * a1 * c1 * d2 * d2;

  const T x2 =
      T(4) * (b0 * (b1 * (u * b2 + t1 * d1 - m1) - b2 * (t2 * d2 + m2) - t1 * d1 + t2 * d2 +
                    T(2) * (a1 - a2)) +
              b1 * (-u * b2 + d1 * (v2 * d1 - (a1 + a2 + a2 + c0 - c1 - c1 + c2)) + T(2) * a1) +
              b2 * (d2 * ((a1 + a1 + a2 + c0 + c1 - c2 - c2) - v1 * d2) - T(2) * a2) +
              d1 * (d1 * (t2 * d2 - T(2) * a2) + d2 * (T(2) * w - t1 * d2) + T(4) * a2) +
              T(2) * a1 * d2 * (d2 - T(2)));

  return {x0, x1, x2};
}

// Swaps indices i and j (both in 0..2) in a, b, c and d simultaneously.
template <typename T>
BasicCoordVector<T> SwapIndices(const BasicCoordVector<T>& co, int i, int j) {
  BasicCoordVector<T> out = co;
  std::swap(out.a[i], out.a[j]);
  std::swap(out.b[i], out.b[j]);
  std::swap(out.c[i], out.c[j]);
  std::swap(out.d[i], out.d[j]);
  return out;
}

// Rows 1 and 2 are row 0 evaluated on the coordinates with indices 0<->1
// and 0<->2 exchanged.
template <typename T>
BasicQuadraticCoeffs<T> EvalAllX(const BasicCoordVector<T>& co) {
  BasicQuadraticCoeffs<T> out;
  out.rows[0] = EvalXRow0(co);
  out.rows[1] = EvalXRow0(SwapIndices(co, 0, 1));
  out.rows[2] = EvalXRow0(SwapIndices(co, 0, 2));
  out.rows[3] = EvalXRow3(co);
  return out;
}

template <typename T>
T EvaluateQuadratic(const CoeffRow<T>& row, T x) {
  return (row[2] * x + row[1]) * x + row[0];
}

enum class RootStatus {
  kTwoReal,         // two distinct real roots
  kDouble,          // one root of multiplicity two (possibly noise-clamped)
  kNone,            // discriminant clearly negative, or an all-zero row
  kLinearFallback,  // leading coefficient negligible; single root -X0/X1
};

std::string_view RootStatusName(RootStatus status);

// Real roots of a quadratic row in descending order. Negative roots are
// reported as-is; since x = z^2, callers treat them as inadmissible.
template <typename T>
struct BasicRootPair {
  std::array<T, 2> roots{};
  int count = 0;
  RootStatus status = RootStatus::kNone;

  bool IsNegative(int k) const { return roots[k] < T(0); }
};

using RootPair = BasicRootPair<double>;

inline constexpr double kLinearFallbackTolerance = 1e-12;
inline constexpr double kDiscriminantTolerance = 1e-9;

template <typename T>
BasicRootPair<T> SolveRow(const CoeffRow<T>& row) {
  BasicRootPair<T> out;
  const T scale = std::max({std::abs(row[0]), std::abs(row[1]), std::abs(row[2])});
  if (!(scale > T(0)) || !std::isfinite(scale)) return out;
  const T x0 = row[0] / scale;
  const T x1 = row[1] / scale;
  const T x2 = row[2] / scale;

  if (std::abs(x2) < T(kLinearFallbackTolerance) * std::max(std::abs(x1), std::abs(x0))) {
    if (x1 == T(0)) return out;
    out.roots[0] = -x0 / x1;
    out.count = 1;
    out.status = RootStatus::kLinearFallback;
    return out;
  }

  T disc = x1 * x1 - T(4) * x2 * x0;
  if (disc < -T(kDiscriminantTolerance) * x1 * x1) return out;
  if (disc <= T(0)) {
    out.roots[0] = -x1 / (T(2) * x2);
    out.count = 1;
    out.status = RootStatus::kDouble;
    return out;
  }
  // q carries the sign of x1 so the subtraction below never cancels.
  const T q = T(-0.5) * (x1 + std::copysign(std::sqrt(disc), x1));
  const T r0 = q / x2;
  const T r1 = x0 / q;
  out.roots = {std::max(r0, r1), std::min(r0, r1)};
  out.count = 2;
  out.status = RootStatus::kTwoReal;
  return out;
}

}  // namespace p4p

#endif  // P4P_QUADRATICS_H_
