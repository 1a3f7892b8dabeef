#ifndef P4P_P4P_SOLVER_H_
#define P4P_P4P_SOLVER_H_

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "p4p/coords.h"
#include "p4p/error.h"
#include "p4p/geometry.h"

namespace p4p {

// Depths of the four points along their rays in the rotated frame, where
// the anchor ray (index 3) is the optical axis and its canvas point sits at
// distance 1. z[3] > 0 by convention.
struct DepthQuadruple {
  std::array<double, 4> z{};
  double residual = 0.0;
};

struct P4PSolution {
  // Depths with respect to the original z = 1 canvas: the camera-frame
  // points are z_orig[i] * (u_i, v_i, 1).
  std::array<double, 4> z_orig{};
  double residual = 0.0;
  DepthQuadruple rotated;
};

// Arithmetic used by the reduction kernel (coordinates, coefficients, roots
// and residuals). kSingle evaluates in float and exists to reproduce
// single-precision reference measurements; depth rescaling is always double.
enum class Precision { kDouble, kSingle };

// Sum of squares of the six incidence equations
//   b_j z_j^2 + b_k z_k^2 - 2 d_i z_j z_k - a_i   (i = 0, 1, 2)
//   z_3^2 + b_i z_i^2 - 2 z_i z_3 - c_i
// in raw squared-scene units.
double Residual(const CoordVector& coords, const std::array<double, 4>& z);

// Every admissible root combination (at most 16), each with its residual,
// in enumeration order. Throws Error(kNoCandidates) when some row has no
// admissible root.
std::vector<DepthQuadruple> CandidateDepths(const AugmentedCoords& coords);

// Minimal-residual candidate; ties go to the larger z3, then to the
// lexicographically smaller z.
DepthQuadruple BestDepths(const AugmentedCoords& coords);

// z_orig_i = |p_3| / (p_i . p_3) * z_i on the lifted canvas points.
P4PSolution RescaleDepths(const DepthQuadruple& depths, std::span<const CanvasPoint, 4> canvas);

// Full four-point reduction. Throws Error with kDegenerateInput (repeated
// scene points), kOrthogonalToAnchor or kNoCandidates.
P4PSolution SolveP4P(std::span<const Point3, 4> world, std::span<const CanvasPoint, 4> canvas,
                     Precision precision = Precision::kDouble);

struct P4PProblem {
  std::array<Point3, 4> world;
  std::array<CanvasPoint, 4> image;
};

struct P4PBatchResult {
  std::optional<P4PSolution> solution;
  ErrorCode error = ErrorCode::kOk;
};

// Elementwise SolveP4P, processed in fixed-size chunks with the coefficient
// polynomials evaluated as one branch-free loop per chunk. Failures are
// reported per element and never abort the batch.
std::vector<P4PBatchResult> SolveP4PBatch(std::span<const P4PProblem> problems,
                                          Precision precision = Precision::kDouble);

}  // namespace p4p

#endif  // P4P_P4P_SOLVER_H_
