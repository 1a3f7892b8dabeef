#include "p4p/coords.h"

#include <Eigen/LU>

#include <algorithm>
#include <string>

namespace p4p {

DistanceCoords SquaredDistanceCoords(std::span<const Point3, 4> points) {
  DistanceCoords out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    out.a[i] = (points[j] - points[k]).squaredNorm();
    out.c[i] = (points[i] - points[3]).squaredNorm();
  }
  return out;
}

DotCoords LineDotCoords(std::span<const Eigen::Vector3d, 4> lines) {
  const Eigen::Vector3d& anchor = lines[3];
  const double n3 = anchor.squaredNorm();
  std::array<double, 4> proj;
  for (int i = 0; i < 4; ++i) {
    proj[i] = lines[i].dot(anchor);
    if (!(std::abs(proj[i]) > kAnchorTolerance * lines[i].norm() * anchor.norm())) {
      throw Error(ErrorCode::kOrthogonalToAnchor,
                  "line " + std::to_string(i) + " is orthogonal to the anchor line", i);
    }
  }
  DotCoords out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    out.b[i] = lines[i].squaredNorm() * n3 / (proj[i] * proj[i]);
    out.d[i] = lines[j].dot(lines[k]) * n3 / (proj[j] * proj[k]);
    out.signs[i] = proj[i] > 0.0 ? 1.0 : -1.0;
  }
  return out;
}

DotCoords CanvasDotCoords(std::span<const CanvasPoint, 4> points) {
  const std::array<Eigen::Vector3d, 4> lines = {Lift(points[0]), Lift(points[1]),
                                                Lift(points[2]), Lift(points[3])};
  return LineDotCoords(lines);
}

AugmentedCoords ComputeCoords(std::span<const Point3, 4> points,
                              std::span<const CanvasPoint, 4> canvas) {
  const DistanceCoords dist = SquaredDistanceCoords(points);
  const DotCoords dots = CanvasDotCoords(canvas);
  AugmentedCoords out;
  out.coords.a = dist.a;
  out.coords.c = dist.c;
  out.coords.b = dots.b;
  out.coords.d = dots.d;
  out.signs = dots.signs;
  return out;
}

namespace {

// Bordered 5x5 Cayley-Menger matrix from a symmetric table of squared
// distances between four points.
double CayleyMenger4(const Eigen::Matrix4d& dist2) {
  Eigen::Matrix<double, 5, 5> m;
  m.topLeftCorner<4, 4>() = dist2;
  m.block<4, 1>(0, 4).setOnes();
  m.block<1, 4>(4, 0).setOnes();
  m(4, 4) = 0.0;
  return m.determinant();
}

// 16 * area^2 of a triangle with squared side lengths x, y, z.
double TriangleCayleyMenger(double x, double y, double z) {
  return 2.0 * (x * y + y * z + z * x) - (x * x + y * y + z * z);
}

}  // namespace

double PlanarCayleyMenger(const std::array<double, 3>& b, const std::array<double, 3>& d) {
  // In the anchor-on-axis frame p_3 = (0,0,1), p_i.p_i = b_i, p_j.p_k = d_i
  // and p_i.p_3 = 1, so |p_i - p_j|^2 = b_i + b_j - 2 d_k.
  Eigen::Matrix4d dist2;
  dist2 << 0.0, b[0] + b[1] - 2 * d[2], b[0] + b[2] - 2 * d[1], b[0] - 1,  //
      b[0] + b[1] - 2 * d[2], 0.0, b[1] + b[2] - 2 * d[0], b[1] - 1,       //
      b[0] + b[2] - 2 * d[1], b[1] + b[2] - 2 * d[0], 0.0, b[2] - 1,       //
      b[0] - 1, b[1] - 1, b[2] - 1, 0.0;
  return CayleyMenger4(dist2);
}

double TetrahedronCayleyMenger(const std::array<double, 3>& a, const std::array<double, 3>& c) {
  // |P0P1|^2 = a2, |P0P2|^2 = a1, |P1P2|^2 = a0, |PiP3|^2 = c_i.
  Eigen::Matrix4d dist2;
  dist2 << 0.0, a[2], a[1], c[0],  //
      a[2], 0.0, a[0], c[1],       //
      a[1], a[0], 0.0, c[2],       //
      c[0], c[1], c[2], 0.0;
  return CayleyMenger4(dist2);
}

bool IsRealizable(const std::array<double, 3>& a, const std::array<double, 3>& c) {
  double scale = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(c[i]) || a[i] < 0.0 || c[i] < 0.0) return false;
    scale = std::max({scale, a[i], c[i]});
  }
  const double tol = 1e-9;
  const std::array<std::array<double, 3>, 4> faces = {{
      {a[0], a[1], a[2]},  // P0 P1 P2
      {a[2], c[0], c[1]},  // P0 P1 P3
      {a[1], c[0], c[2]},  // P0 P2 P3
      {a[0], c[1], c[2]},  // P1 P2 P3
  }};
  for (const auto& f : faces) {
    if (TriangleCayleyMenger(f[0], f[1], f[2]) < -tol * scale * scale) return false;
  }
  return TetrahedronCayleyMenger(a, c) >= -tol * scale * scale * scale;
}

}  // namespace p4p
