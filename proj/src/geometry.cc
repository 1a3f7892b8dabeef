#include "p4p/geometry.h"

#include <algorithm>
#include <cmath>

#include "p4p/error.h"

namespace p4p {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk:
      return "Ok";
    case ErrorCode::kDegenerateProjection:
      return "DegenerateProjection";
    case ErrorCode::kOrthogonalToAnchor:
      return "OrthogonalToAnchor";
    case ErrorCode::kNoCandidates:
      return "NoCandidates";
    case ErrorCode::kDegenerateInput:
      return "DegenerateInput";
    case ErrorCode::kDegenerateAlignment:
      return "DegenerateAlignment";
    case ErrorCode::kTooFewPoints:
      return "TooFewPoints";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

Eigen::Quaterniond Canonicalize(Eigen::Quaterniond q) {
  const double norm = q.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kInvalidArgument, "rotation quaternion must be finite and nonzero");
  }
  q.coeffs() /= norm;
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  return q;
}

}  // namespace

Pose::Pose(const Eigen::Quaterniond& rotation, const Point3& translation)
    : rotation_(Canonicalize(rotation)), translation_(translation) {}

Pose::Pose(const Eigen::Matrix3d& rotation, const Point3& translation)
    : rotation_(Canonicalize(Eigen::Quaterniond(rotation))), translation_(translation) {}

Pose Pose::Inverse() const {
  const Eigen::Quaterniond inv = rotation_.conjugate();
  return Pose(inv, -(inv * translation_));
}

Pose operator*(const Pose& lhs, const Pose& rhs) {
  return Pose(lhs.rotation() * rhs.rotation(),
              lhs.rotation() * rhs.translation() + lhs.translation());
}

Point3 ApplyPose(const Pose& pose, const Point3& point) {
  return pose.rotation() * point + pose.translation();
}

CanvasPoint Project(const Point3& point) {
  if (!(std::abs(point.z()) >= kMinProjectionDepth)) {
    throw Error(ErrorCode::kDegenerateProjection, "point lies on the camera plane");
  }
  return {point.x() / point.z(), point.y() / point.z()};
}

double RotationAngleDeg(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
  // |<a, b>| = cos(theta / 2) for unit quaternions; the atan2 form keeps
  // precision for tiny angles where acos would flatten out.
  const Eigen::Quaterniond rel = a * b.conjugate();
  const double s = rel.vec().norm();
  const double c = std::abs(rel.w());
  const double half = std::atan2(s, c);
  return std::clamp(2.0 * half * 180.0 / M_PI, 0.0, 180.0);
}

PoseError PoseErrors(const Pose& estimate, const Pose& truth) {
  return {RotationAngleDeg(estimate.rotation(), truth.rotation()),
          (estimate.translation() - truth.translation()).norm()};
}

}  // namespace p4p
