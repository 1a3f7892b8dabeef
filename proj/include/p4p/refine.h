#ifndef P4P_REFINE_H_
#define P4P_REFINE_H_

#include <Eigen/Core>

#include <span>
#include <vector>

#include "p4p/geometry.h"

namespace p4p {

struct LMConfig {
  int max_iters = 50;
  double initial_lambda = 1e-3;
  double lambda_up = 2.0;
  double lambda_down = 3.0;
  double gradient_tol = 1e-12;
  double step_tol = 1e-12;
};

// Throws Error(kInvalidArgument) unless every field is positive and both
// lambda factors exceed one.
void ValidateLMConfig(const LMConfig& config);

// Camera-frame depth below which a point is considered behind the camera.
// Such a point contributes the residual (kBehindCameraWeight * (1 - z), 0)
// instead of its reprojection offset.
inline constexpr double kMinRefineDepth = 1e-9;
inline constexpr double kBehindCameraWeight = 1e3;

// Sum over correspondences of |project(pose * world) - image|^2.
double ReprojectionError(const Pose& pose, std::span<const Correspondence> corr);

// Stacked 2n residual vector and its 2n x 6 Jacobian with respect to the
// increment (omega, delta_t) applied by PerturbPose.
void ReprojectionJacobian(const Pose& pose, std::span<const Correspondence> corr,
                          Eigen::VectorXd* residual, Eigen::MatrixXd* jacobian);

// R <- exp([omega]x) R, t <- t + delta_t. The rotation increment acts on
// the left, i.e. in the camera frame.
Pose PerturbPose(const Pose& pose, const Eigen::Matrix<double, 6, 1>& delta);

struct RefineResult {
  Pose pose;
  double initial_error = 0.0;
  double final_error = 0.0;
  int iterations = 0;
  int accepted_steps = 0;
  // Set when the damped normal equations could not be solved even at the
  // largest damping; pose is then the best one found.
  bool singular = false;
  std::vector<double> accepted_errors;  // error after each accepted step
};

// Levenberg-Marquardt with Marquardt diagonal scaling and gain-ratio driven
// damping: lambda shrinks by lambda_down after a very good step (ratio
// above 0.75) and grows by lambda_up after a poor (below 0.25) or rejected
// one. Only steps that strictly lower the error are accepted.
// Throws Error(kTooFewPoints) for fewer than three correspondences.
RefineResult LmRefine(const Pose& initial, std::span<const Correspondence> corr,
                      const LMConfig& config = {});

}  // namespace p4p

#endif  // P4P_REFINE_H_
