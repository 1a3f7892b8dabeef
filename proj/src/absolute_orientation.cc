#include "p4p/absolute_orientation.h"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "p4p/error.h"

namespace p4p {

namespace {

// Relative spread below which the source points are treated as lying on a
// line (second principal variance over the first).
constexpr double kCollinearTolerance = 1e-18;

}  // namespace

Eigen::Matrix4d HornMatrix(const Eigen::Matrix3d& s) {
  const double sxx = s(0, 0), sxy = s(0, 1), sxz = s(0, 2);
  const double syx = s(1, 0), syy = s(1, 1), syz = s(1, 2);
  const double szx = s(2, 0), szy = s(2, 1), szz = s(2, 2);
  Eigen::Matrix4d n;
  n << sxx + syy + szz, syz - szy, szx - sxz, sxy - syx,  //
      syz - szy, sxx - syy - szz, sxy + syx, szx + sxz,   //
      szx - sxz, sxy + syx, -sxx + syy - szz, syz + szy,  //
      sxy - syx, szx + sxz, syz + szy, -sxx - syy + szz;
  return n;
}

AlignmentResult HornAlign(std::span<const Point3> source, std::span<const Point3> target) {
  if (source.size() != target.size()) {
    throw Error(ErrorCode::kInvalidArgument, "source and target sizes differ");
  }
  const std::size_t n = source.size();
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "alignment needs at least three pairs");

  Point3 source_mean = Point3::Zero();
  Point3 target_mean = Point3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    source_mean += source[i];
    target_mean += target[i];
  }
  source_mean /= static_cast<double>(n);
  target_mean /= static_cast<double>(n);

  Eigen::Matrix3d cross = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Point3 sc = source[i] - source_mean;
    cross += sc * (target[i] - target_mean).transpose();
    scatter += sc * sc.transpose();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> spread;
  spread.computeDirect(scatter, Eigen::EigenvaluesOnly);
  const Eigen::Vector3d var = spread.eigenvalues();  // ascending
  if (!(var(2) > 0.0) || var(1) <= kCollinearTolerance * var(2)) {
    throw Error(ErrorCode::kDegenerateAlignment, "source points are coincident or collinear");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(HornMatrix(cross));
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kDegenerateAlignment, "eigen decomposition failed");
  }
  const Eigen::Vector4d q = eig.eigenvectors().col(3);
  const Eigen::Quaterniond rotation(q(0), q(1), q(2), q(3));

  AlignmentResult out;
  out.pose = Pose(rotation, Point3::Zero());
  const Point3 t = target_mean - out.pose.rotation() * source_mean;
  out.pose = Pose(out.pose.rotation(), t);

  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += (ApplyPose(out.pose, source[i]) - target[i]).squaredNorm();
  }
  out.rms = std::sqrt(sum / static_cast<double>(n));
  return out;
}

}  // namespace p4p
