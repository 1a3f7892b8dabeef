#ifndef P4P_GEOMETRY_H_
#define P4P_GEOMETRY_H_

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <span>
#include <vector>

namespace p4p {

// A point in scene (world or camera) coordinates.
using Point3 = Eigen::Vector3d;

// A point on the calibrated canvas, which sits on the z = 1 plane of the
// camera frame. Lifted to 3D it is the ray direction (u, v, 1).
using CanvasPoint = Eigen::Vector2d;

inline Eigen::Vector3d Lift(const CanvasPoint& p) { return {p.x(), p.y(), 1.0}; }

// Rigid transformation x -> R x + t. The rotation is kept as a unit
// quaternion with w >= 0 so that equal rotations compare equal.
class Pose {
 public:
  Pose() : rotation_(Eigen::Quaterniond::Identity()), translation_(Point3::Zero()) {}
  Pose(const Eigen::Quaterniond& rotation, const Point3& translation);
  Pose(const Eigen::Matrix3d& rotation, const Point3& translation);

  static Pose Identity() { return Pose(); }

  const Eigen::Quaterniond& rotation() const { return rotation_; }
  const Point3& translation() const { return translation_; }
  Eigen::Matrix3d RotationMatrix() const { return rotation_.toRotationMatrix(); }

  Pose Inverse() const;

 private:
  Eigen::Quaterniond rotation_;
  Point3 translation_;
};

// (lhs * rhs)(x) = lhs(rhs(x)).
Pose operator*(const Pose& lhs, const Pose& rhs);

struct Correspondence {
  Point3 world;
  CanvasPoint image;
};

using CorrespondenceSet = std::vector<Correspondence>;

// Projections closer than this to the camera plane are rejected.
inline constexpr double kMinProjectionDepth = 1e-12;

Point3 ApplyPose(const Pose& pose, const Point3& point);

// Central projection onto the z = 1 canvas. Throws Error with
// kDegenerateProjection when |z| < kMinProjectionDepth.
CanvasPoint Project(const Point3& point);

struct PoseError {
  double rotation_deg = 0.0;  // angle of estimate * truth^-1, in [0, 180]
  double translation = 0.0;   // |t_estimate - t_truth|
};

PoseError PoseErrors(const Pose& estimate, const Pose& truth);

// Angle between two rotations in degrees, in [0, 180].
double RotationAngleDeg(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b);

}  // namespace p4p

#endif  // P4P_GEOMETRY_H_
