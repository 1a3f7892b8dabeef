#ifndef P4P_SYNTH_H_
#define P4P_SYNTH_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "p4p/geometry.h"
#include "p4p/p4p_solver.h"

namespace p4p {

using Rng = std::mt19937_64;

enum class ScenarioKind {
  kGeneral,         // points uniform on the unit sphere
  kPlanar,          // points on the unit circle in the z = 0 plane
  kThreeCollinear,  // (-1,0,0), (1,0,0), one point between them, rest on the sphere
};

std::string_view ScenarioKindName(ScenarioKind kind);
std::optional<ScenarioKind> ParseScenarioKind(std::string_view name);

// Distance along the optical axis between the camera and the centre of the
// unposed point cloud.
inline constexpr double kCameraDistance = 2.5;

// Uniform on the unit sphere surface.
Eigen::Vector3d SampleUnitSphere(Rng& rng);

// Uniform on SO(3).
Eigen::Quaterniond SampleRotation(Rng& rng);

struct Scenario {
  std::vector<Point3> world;        // clean world points
  std::vector<Point3> noisy_world;  // world points with noise, the solver input
  std::vector<CanvasPoint> canvas;  // projections of the clean points
  Pose truth;                       // world -> camera
  double noise = 0.0;
  ScenarioKind kind = ScenarioKind::kGeneral;
  int replaced_index = -1;  // mismatch scenarios: the corrupted correspondence

  CorrespondenceSet Correspondences() const;
};

// Model points X are drawn per kind, then placed in the world as
// W = R X + t with R uniform on SO(3) and t on the unit sphere, and noise
// times a unit-sphere sample is added to W. The camera sees X shifted by
// kCameraDistance along its optical axis, so the truth pose maps W to
// R^T (W - t) + (0, 0, kCameraDistance). Draws whose canvas points are
// degenerate for the solver are resampled (at most 100 times).
// Throws Error(kInvalidArgument) for negative noise or n < 4.
Scenario GenScenario(ScenarioKind kind, double noise, Rng& rng, int n = 4);

// GenScenario followed by replacing one uniformly chosen world point with a
// fresh draw from the same distribution, keeping the original canvas point.
Scenario GenMismatchScenario(ScenarioKind kind, double noise, Rng& rng, int n = 4);

// Deterministic per-trial seed derived from a master seed.
std::uint64_t TrialSeed(std::uint64_t master, std::uint64_t trial);

struct SweepConfig {
  std::vector<ScenarioKind> kinds = {ScenarioKind::kGeneral};
  std::vector<double> noises = {0.0};
  int trials = 1000;
  std::vector<double> thresholds = {0.05, 0.1, 1.0};
  std::uint64_t seed = 1;
  Precision precision = Precision::kDouble;
  bool mismatch = false;
};

struct SweepRow {
  ScenarioKind kind = ScenarioKind::kGeneral;
  double noise = 0.0;
  double threshold = 0.0;
  int trials = 0;
  int successes = 0;  // trials with residual <= threshold
  double rot_mean_deg = 0.0;
  double rot_std_deg = 0.0;
  double trans_mean_milli = 0.0;
  double trans_std_milli = 0.0;
};

// One four-point trial: residual of the reduction (+inf when it fails) and
// the pose error of the Horn alignment on the noisy points.
struct TrialOutcome {
  double residual = 0.0;
  PoseError error;
};

TrialOutcome RunTrial(const Scenario& scenario, Precision precision);

// For every kind and noise level, runs `trials` four-point trials (trial k
// uses TrialSeed(seed, k), so noise levels share geometry) and tabulates each
// threshold. Errors are measured against the clean truth pose; statistics
// are population mean and standard deviation over accepted trials. trials
// == 0 yields an empty table.
std::vector<SweepRow> RunSweep(const SweepConfig& config);

inline constexpr std::string_view kSweepCsvHeader =
    "kind,noise,threshold,trials,successes,rot_mean_deg,rot_std_deg,trans_mean_milli,"
    "trans_std_milli";

void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace p4p

#endif  // P4P_SYNTH_H_
