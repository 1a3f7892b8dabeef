#ifndef P4P_ABSOLUTE_ORIENTATION_H_
#define P4P_ABSOLUTE_ORIENTATION_H_

#include <span>

#include "p4p/geometry.h"

namespace p4p {

struct AlignmentResult {
  Pose pose;
  double rms = 0.0;  // sqrt(mean |R source_i + t - target_i|^2)
};

// Closed-form least-squares rigid alignment of matched point sets using the
// unit-quaternion formulation: the optimal rotation is the eigenvector of
// the largest eigenvalue of a 4x4 symmetric matrix built from the
// cross-covariance. No scale is estimated.
//
// Throws Error(kInvalidArgument) for mismatched sizes or fewer than three
// pairs, and Error(kDegenerateAlignment) when the source points are
// coincident or collinear.
AlignmentResult HornAlign(std::span<const Point3> source, std::span<const Point3> target);

// The 4x4 matrix whose dominant eigenvector is the rotation (w, x, y, z),
// from the cross-covariance S = sum (s_i - s_mean)(t_i - t_mean)^T.
Eigen::Matrix4d HornMatrix(const Eigen::Matrix3d& cross_covariance);

}  // namespace p4p

#endif  // P4P_ABSOLUTE_ORIENTATION_H_
