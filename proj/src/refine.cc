#include "p4p/refine.h"

#include <Eigen/Cholesky>

#include <cmath>

#include "p4p/error.h"

namespace p4p {

namespace {

constexpr double kMaxLambda = 1e16;

Eigen::Matrix3d Skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(),  //
      v.z(), 0.0, -v.x(),   //
      -v.y(), v.x(), 0.0;
  return m;
}

Eigen::Vector2d PointResidual(const Point3& cam, const CanvasPoint& image) {
  if (cam.z() < kMinRefineDepth) return {kBehindCameraWeight * (1.0 - cam.z()), 0.0};
  return Eigen::Vector2d(cam.x() / cam.z(), cam.y() / cam.z()) - image;
}

}  // namespace

void ValidateLMConfig(const LMConfig& c) {
  const bool ok = c.max_iters > 0 && c.initial_lambda > 0.0 && c.lambda_up > 1.0 &&
                  c.lambda_down > 1.0 && c.gradient_tol > 0.0 && c.step_tol > 0.0;
  if (!ok) throw Error(ErrorCode::kInvalidArgument, "invalid LM configuration");
}

double ReprojectionError(const Pose& pose, std::span<const Correspondence> corr) {
  double sum = 0.0;
  for (const Correspondence& c : corr) {
    sum += PointResidual(ApplyPose(pose, c.world), c.image).squaredNorm();
  }
  return sum;
}

void ReprojectionJacobian(const Pose& pose, std::span<const Correspondence> corr,
                          Eigen::VectorXd* residual, Eigen::MatrixXd* jacobian) {
  const std::size_t n = corr.size();
  residual->resize(2 * n);
  jacobian->resize(2 * n, 6);
  for (std::size_t i = 0; i < n; ++i) {
    const Point3 rotated = pose.rotation() * corr[i].world;
    const Point3 cam = rotated + pose.translation();
    residual->segment<2>(2 * i) = PointResidual(cam, corr[i].image);

    // d cam / d(omega, delta_t) = [-[R P]x | I].
    Eigen::Matrix<double, 3, 6> dcam;
    dcam.leftCols<3>() = -Skew(rotated);
    dcam.rightCols<3>().setIdentity();

    Eigen::Matrix<double, 2, 3> dres;
    if (cam.z() < kMinRefineDepth) {
      dres << 0.0, 0.0, -kBehindCameraWeight, 0.0, 0.0, 0.0;
    } else {
      const double iz = 1.0 / cam.z();
      dres << iz, 0.0, -cam.x() * iz * iz,  //
          0.0, iz, -cam.y() * iz * iz;
    }
    jacobian->block<2, 6>(2 * i, 0) = dres * dcam;
  }
}

Pose PerturbPose(const Pose& pose, const Eigen::Matrix<double, 6, 1>& delta) {
  const Eigen::Vector3d omega = delta.head<3>();
  const double angle = omega.norm();
  Eigen::Quaterniond dq = Eigen::Quaterniond::Identity();
  if (angle > 0.0) dq = Eigen::Quaterniond(Eigen::AngleAxisd(angle, omega / angle));
  return Pose(dq * pose.rotation(), pose.translation() + delta.tail<3>());
}

RefineResult LmRefine(const Pose& initial, std::span<const Correspondence> corr,
                      const LMConfig& config) {
  ValidateLMConfig(config);
  if (corr.size() < 3) {
    throw Error(ErrorCode::kTooFewPoints, "refinement needs at least three correspondences");
  }

  RefineResult out;
  out.pose = initial;
  out.initial_error = ReprojectionError(initial, corr);
  out.final_error = out.initial_error;
  double lambda = config.initial_lambda;

  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  for (int iter = 0; iter < config.max_iters; ++iter) {
    if (out.final_error == 0.0) break;
    ReprojectionJacobian(out.pose, corr, &r, &J);
    const Eigen::Matrix<double, 6, 6> A = J.transpose() * J;
    const Eigen::Matrix<double, 6, 1> g = J.transpose() * r;
    if (!g.allFinite()) {
      out.singular = true;
      break;
    }
    if (g.lpNorm<Eigen::Infinity>() < config.gradient_tol) break;
    ++out.iterations;

    Eigen::Matrix<double, 6, 1> diag = A.diagonal();
    const double floor = 1e-12 * diag.maxCoeff();
    if (!(floor > 0.0)) {
      out.singular = true;
      break;
    }
    diag = diag.cwiseMax(floor);

    bool accepted = false;
    bool converged = false;
    bool factored = false;
    while (lambda <= kMaxLambda) {
      Eigen::Matrix<double, 6, 6> damped = A;
      damped.diagonal() += lambda * diag;
      const Eigen::LDLT<Eigen::Matrix<double, 6, 6>> ldlt(damped);
      if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) {
        lambda *= config.lambda_up;
        continue;
      }
      factored = true;
      const Eigen::Matrix<double, 6, 1> step = -ldlt.solve(g);
      const double scale = out.pose.translation().norm() + 1.0;
      if (step.norm() < config.step_tol * scale) {
        converged = true;
        break;
      }
      const Pose candidate = PerturbPose(out.pose, step);
      const double err = ReprojectionError(candidate, corr);
      // Gain ratio against the Gauss-Newton model |r + J step|^2.
      const double predicted = -(2.0 * step.dot(g) + step.dot(A * step));
      if (err < out.final_error) {
        const double rho = predicted > 0.0 ? (out.final_error - err) / predicted : 0.0;
        if (rho > 0.75) {
          lambda /= config.lambda_down;
        } else if (rho < 0.25) {
          lambda *= config.lambda_up;
        }
        out.pose = candidate;
        out.final_error = err;
        out.accepted_errors.push_back(err);
        ++out.accepted_steps;
        accepted = true;
        break;
      }
      lambda *= config.lambda_up;
    }
    if (converged) break;
    if (!accepted) {
      // Either no damping made the system solvable, or no step lowers the
      // error any more; only the former is a failure.
      out.singular = !factored;
      break;
    }
  }
  return out;
}

}  // namespace p4p
