#ifndef P4P_COORDS_H_
#define P4P_COORDS_H_

#include <array>
#include <cmath>
#include <span>

#include "p4p/error.h"
#include "p4p/geometry.h"

namespace p4p {

// The twelve rigid- and projective-invariant coordinates of a matched
// quadruple. Index i in {0,1,2} pairs with j = (i+1)%3, k = (i+2)%3:
//
//   a_i = |P_j - P_k|^2                 c_i = |P_i - P_3|^2
//   b_i = (L_i.L_i)(L_3.L_3) / (L_i.L_3)^2
//   d_i = (L_j.L_k)(L_3.L_3) / ((L_j.L_3)(L_k.L_3))
//
// where P are the scene points and L the lines through the canvas points.
template <typename T>
struct BasicCoordVector {
  std::array<T, 3> a{};
  std::array<T, 3> b{};
  std::array<T, 3> c{};
  std::array<T, 3> d{};

  // Variable order a0 a1 a2 b0 b1 b2 c0 c1 c2 d0 d1 d2.
  std::array<T, 12> Flatten() const {
    return {a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2], d[0], d[1], d[2]};
  }
};

using CoordVector = BasicCoordVector<double>;

// The invariant coordinates erase the signs s_i = sign(L_i . L_3), which are
// needed to pick square roots; they travel alongside as +1 / -1 values.
template <typename T>
struct BasicAugmentedCoords {
  BasicCoordVector<T> coords;
  std::array<T, 3> signs{T(1), T(1), T(1)};
};

using AugmentedCoords = BasicAugmentedCoords<double>;

struct DistanceCoords {
  std::array<double, 3> c{};
  std::array<double, 3> a{};
};

struct DotCoords {
  std::array<double, 3> b{};
  std::array<double, 3> d{};
  std::array<double, 3> signs{1.0, 1.0, 1.0};
};

// Relative threshold below which a line counts as orthogonal to the anchor:
// |L_i . L_3| <= kAnchorTolerance * |L_i| |L_3|.
inline constexpr double kAnchorTolerance = 1e-12;

DistanceCoords SquaredDistanceCoords(std::span<const Point3, 4> points);

// Canonical form on arbitrary nonzero line representatives. Throws Error
// (kOrthogonalToAnchor, index i) when line i is orthogonal to line 3.
DotCoords LineDotCoords(std::span<const Eigen::Vector3d, 4> lines);

// Lifts each canvas point to (u, v, 1) and evaluates LineDotCoords.
DotCoords CanvasDotCoords(std::span<const CanvasPoint, 4> points);

AugmentedCoords ComputeCoords(std::span<const Point3, 4> points,
                              std::span<const CanvasPoint, 4> canvas);

// Cayley-Menger determinant of four coplanar canvas points expressed through
// (b, d) in the frame where the anchor sits on the optical axis. Vanishes for
// every (b, d) that comes from actual canvas points.
double PlanarCayleyMenger(const std::array<double, 3>& b, const std::array<double, 3>& d);

// Cayley-Menger determinant of four points given their squared distances;
// equals 288 V^2 for a tetrahedron of volume V.
double TetrahedronCayleyMenger(const std::array<double, 3>& a, const std::array<double, 3>& c);

// True iff (a, c) are the squared distances of some four points in R^3:
// nonnegative, every face satisfies the (non-strict) triangle inequality,
// and the tetrahedral Cayley-Menger determinant is nonnegative up to
// -1e-9 of its natural scale.
bool IsRealizable(const std::array<double, 3>& a, const std::array<double, 3>& c);

namespace internal {

// Non-throwing coordinate kernel used by the scalar and batch solvers. On
// kOrthogonalToAnchor, *bad_index receives the offending line.
template <typename T>
ErrorCode TryComputeCoords(std::span<const Point3, 4> points,
                           std::span<const CanvasPoint, 4> canvas,
                           BasicAugmentedCoords<T>* out, int* bad_index = nullptr) {
  std::array<std::array<T, 3>, 4> P;
  std::array<std::array<T, 3>, 4> L;
  for (int i = 0; i < 4; ++i) {
    P[i] = {T(points[i].x()), T(points[i].y()), T(points[i].z())};
    L[i] = {T(canvas[i].x()), T(canvas[i].y()), T(1)};
  }
  const auto dot = [](const std::array<T, 3>& u, const std::array<T, 3>& v) {
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  };
  const auto dist2 = [](const std::array<T, 3>& u, const std::array<T, 3>& v) {
    const T x = u[0] - v[0], y = u[1] - v[1], z = u[2] - v[2];
    return x * x + y * y + z * z;
  };

  const T n3 = dot(L[3], L[3]);
  std::array<T, 4> proj;
  for (int i = 0; i < 4; ++i) {
    proj[i] = dot(L[i], L[3]);
    const T bound = T(kAnchorTolerance) * std::sqrt(dot(L[i], L[i]) * n3);
    if (!(std::abs(proj[i]) > bound)) {
      if (bad_index != nullptr) *bad_index = i;
      return ErrorCode::kOrthogonalToAnchor;
    }
  }

  auto& co = out->coords;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    co.a[i] = dist2(P[j], P[k]);
    co.c[i] = dist2(P[i], P[3]);
    co.b[i] = dot(L[i], L[i]) * n3 / (proj[i] * proj[i]);
    co.d[i] = dot(L[j], L[k]) * n3 / (proj[j] * proj[k]);
    out->signs[i] = proj[i] > T(0) ? T(1) : T(-1);
  }
  return ErrorCode::kOk;
}

}  // namespace internal

}  // namespace p4p

#endif  // P4P_COORDS_H_
