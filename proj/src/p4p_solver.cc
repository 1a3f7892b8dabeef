#include "p4p/p4p_solver.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "p4p/quadratics.h"

namespace p4p {

namespace {

// Roots x = z^2 in [-kRootClampTolerance * max(1, |root|), 0) are treated
// as noise around zero.
constexpr double kRootClampTolerance = 1e-9;

// Scene points closer than this fraction of the quadruple's extent count as
// repeated.
constexpr double kRepeatedPointTolerance = 1e-12;

constexpr int kMaxCandidates = 16;

template <typename T>
T ResidualT(const BasicCoordVector<T>& co, const std::array<T, 4>& z) {
  T sum(0);
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    const T ea = co.b[j] * z[j] * z[j] + co.b[k] * z[k] * z[k] - T(2) * co.d[i] * z[j] * z[k] -
                 co.a[i];
    const T ec = z[3] * z[3] + co.b[i] * z[i] * z[i] - T(2) * z[i] * z[3] - co.c[i];
    sum += ea * ea + ec * ec;
  }
  return sum;
}

template <typename T>
struct CandidateList {
  std::array<std::array<T, 4>, kMaxCandidates> z;
  std::array<T, kMaxCandidates> residual;
  int count = 0;
};

// Admissible square depths from one row, i.e. nonnegative roots after the
// near-zero clamp. Row 3 additionally needs a strictly positive root since
// z3 > 0 fixes the overall sign.
template <typename T>
int AdmissibleRoots(const CoeffRow<T>& row, bool strictly_positive, std::array<T, 2>* out) {
  const BasicRootPair<T> roots = SolveRow(row);
  int n = 0;
  for (int k = 0; k < roots.count; ++k) {
    const T r = roots.roots[k];
    const T tol = T(kRootClampTolerance) * std::max(T(1), std::abs(r));
    if (r > T(0)) {
      (*out)[n++] = r;
    } else if (r >= -tol && !strictly_positive) {
      (*out)[n++] = T(0);
    }
  }
  return n;
}

template <typename T>
bool Enumerate(const BasicAugmentedCoords<T>& ac, const BasicQuadraticCoeffs<T>& rows,
               CandidateList<T>* out) {
  std::array<std::array<T, 2>, 4> depth;
  std::array<int, 4> counts;
  for (int i = 0; i < 4; ++i) {
    std::array<T, 2> alpha;
    counts[i] = AdmissibleRoots(rows.rows[i], i == 3, &alpha);
    if (counts[i] == 0) return false;
    for (int k = 0; k < counts[i]; ++k) {
      depth[i][k] = std::sqrt(alpha[k]) * (i < 3 ? ac.signs[i] : T(1));
    }
  }
  out->count = 0;
  for (int k0 = 0; k0 < counts[0]; ++k0) {
    for (int k1 = 0; k1 < counts[1]; ++k1) {
      for (int k2 = 0; k2 < counts[2]; ++k2) {
        for (int k3 = 0; k3 < counts[3]; ++k3) {
          const std::array<T, 4> z = {depth[0][k0], depth[1][k1], depth[2][k2], depth[3][k3]};
          out->z[out->count] = z;
          out->residual[out->count] = ResidualT(ac.coords, z);
          ++out->count;
        }
      }
    }
  }
  return true;
}

template <typename T>
bool Better(T res_a, const std::array<T, 4>& za, T res_b, const std::array<T, 4>& zb) {
  if (res_a != res_b) return res_a < res_b;
  if (za[3] != zb[3]) return za[3] > zb[3];
  return std::lexicographical_compare(za.begin(), za.end(), zb.begin(), zb.end());
}

template <typename T>
ErrorCode PickBest(const BasicAugmentedCoords<T>& ac, const BasicQuadraticCoeffs<T>& rows,
                   DepthQuadruple* out) {
  CandidateList<T> list;
  if (!Enumerate(ac, rows, &list)) return ErrorCode::kNoCandidates;
  int best = -1;
  for (int c = 0; c < list.count; ++c) {
    if (!std::isfinite(list.residual[c])) continue;
    if (best < 0 || Better(list.residual[c], list.z[c], list.residual[best], list.z[best])) {
      best = c;
    }
  }
  if (best < 0) return ErrorCode::kNoCandidates;
  for (int i = 0; i < 4; ++i) out->z[i] = static_cast<double>(list.z[best][i]);
  out->residual = static_cast<double>(list.residual[best]);
  return ErrorCode::kOk;
}

bool HasRepeatedPoints(std::span<const Point3, 4> world) {
  double extent = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) extent = std::max(extent, (world[i] - world[j]).squaredNorm());
  }
  const double tol = kRepeatedPointTolerance * kRepeatedPointTolerance * extent;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (!((world[i] - world[j]).squaredNorm() > tol)) return true;
    }
  }
  return false;
}

// Rescaling never fails here because the coordinate stage already rejected
// lines orthogonal to the anchor.
P4PSolution RescaleUnchecked(const DepthQuadruple& depths, std::span<const CanvasPoint, 4> canvas) {
  const Eigen::Vector3d anchor = Lift(canvas[3]);
  const double n3 = anchor.norm();
  P4PSolution out;
  out.rotated = depths;
  out.residual = depths.residual;
  for (int i = 0; i < 4; ++i) out.z_orig[i] = n3 / Lift(canvas[i]).dot(anchor) * depths.z[i];
  return out;
}

template <typename T>
ErrorCode SolveOne(std::span<const Point3, 4> world, std::span<const CanvasPoint, 4> canvas,
                   P4PSolution* out, int* bad_index) {
  if (HasRepeatedPoints(world)) return ErrorCode::kDegenerateInput;
  BasicAugmentedCoords<T> ac;
  const ErrorCode code = internal::TryComputeCoords<T>(world, canvas, &ac, bad_index);
  if (code != ErrorCode::kOk) return code;
  DepthQuadruple depths;
  const ErrorCode picked = PickBest(ac, EvalAllX(ac.coords), &depths);
  if (picked != ErrorCode::kOk) return picked;
  *out = RescaleUnchecked(depths, canvas);
  return ErrorCode::kOk;
}

[[noreturn]] void ThrowFor(ErrorCode code, int index) {
  switch (code) {
    case ErrorCode::kDegenerateInput:
      throw Error(code, "repeated scene points");
    case ErrorCode::kOrthogonalToAnchor:
      throw Error(code, "canvas point " + std::to_string(index) + " is orthogonal to the anchor",
                  index);
    case ErrorCode::kNoCandidates:
      throw Error(code, "no admissible depth candidates");
    default:
      throw Error(code, std::string(ErrorCodeName(code)));
  }
}

template <typename T>
void SolveBatchT(std::span<const P4PProblem> problems, std::vector<P4PBatchResult>* results) {
  constexpr std::size_t kChunk = 64;
  std::array<BasicAugmentedCoords<T>, kChunk> coords;
  std::array<BasicQuadraticCoeffs<T>, kChunk> rows;
  std::array<ErrorCode, kChunk> status;

  for (std::size_t base = 0; base < problems.size(); base += kChunk) {
    const std::size_t n = std::min(kChunk, problems.size() - base);
    // Stage 1: invariant coordinates. Failed lanes keep zero coordinates so
    // the polynomial stage below stays branch-free.
    for (std::size_t l = 0; l < n; ++l) {
      const P4PProblem& pr = problems[base + l];
      coords[l] = BasicAugmentedCoords<T>{};
      status[l] = HasRepeatedPoints(pr.world)
                      ? ErrorCode::kDegenerateInput
                      : internal::TryComputeCoords<T>(pr.world, pr.image, &coords[l]);
      if (status[l] != ErrorCode::kOk) coords[l] = BasicAugmentedCoords<T>{};
    }
    // Stage 2: coefficient polynomials.
    for (std::size_t l = 0; l < n; ++l) rows[l] = EvalAllX(coords[l].coords);
    // Stage 3: roots, candidates and rescaling.
    for (std::size_t l = 0; l < n; ++l) {
      P4PBatchResult& res = (*results)[base + l];
      res.error = status[l];
      if (status[l] != ErrorCode::kOk) continue;
      DepthQuadruple depths;
      res.error = PickBest(coords[l], rows[l], &depths);
      if (res.error == ErrorCode::kOk) {
        res.solution = RescaleUnchecked(depths, problems[base + l].image);
      }
    }
  }
}

}  // namespace

double Residual(const CoordVector& coords, const std::array<double, 4>& z) {
  return ResidualT(coords, z);
}

std::vector<DepthQuadruple> CandidateDepths(const AugmentedCoords& coords) {
  CandidateList<double> list;
  if (!Enumerate(coords, EvalAllX(coords.coords), &list)) {
    throw Error(ErrorCode::kNoCandidates, "no admissible depth candidates");
  }
  std::vector<DepthQuadruple> out(list.count);
  for (int c = 0; c < list.count; ++c) out[c] = {list.z[c], list.residual[c]};
  return out;
}

DepthQuadruple BestDepths(const AugmentedCoords& coords) {
  DepthQuadruple out;
  const ErrorCode code = PickBest(coords, EvalAllX(coords.coords), &out);
  if (code != ErrorCode::kOk) ThrowFor(code, -1);
  return out;
}

P4PSolution RescaleDepths(const DepthQuadruple& depths, std::span<const CanvasPoint, 4> canvas) {
  const Eigen::Vector3d anchor = Lift(canvas[3]);
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d line = Lift(canvas[i]);
    if (!(std::abs(line.dot(anchor)) > kAnchorTolerance * line.norm() * anchor.norm())) {
      ThrowFor(ErrorCode::kOrthogonalToAnchor, i);
    }
  }
  return RescaleUnchecked(depths, canvas);
}

P4PSolution SolveP4P(std::span<const Point3, 4> world, std::span<const CanvasPoint, 4> canvas,
                     Precision precision) {
  P4PSolution out;
  int bad_index = -1;
  const ErrorCode code = precision == Precision::kSingle
                             ? SolveOne<float>(world, canvas, &out, &bad_index)
                             : SolveOne<double>(world, canvas, &out, &bad_index);
  if (code != ErrorCode::kOk) ThrowFor(code, bad_index);
  return out;
}

std::vector<P4PBatchResult> SolveP4PBatch(std::span<const P4PProblem> problems,
                                          Precision precision) {
  std::vector<P4PBatchResult> results(problems.size());
  if (precision == Precision::kSingle) {
    SolveBatchT<float>(problems, &results);
  } else {
    SolveBatchT<double>(problems, &results);
  }
  return results;
}

}  // namespace p4p
