#ifndef P4P_PIPELINE_H_
#define P4P_PIPELINE_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "p4p/geometry.h"
#include "p4p/p4p_solver.h"
#include "p4p/refine.h"

namespace p4p {

inline constexpr std::uint64_t kDefaultSeed = 20240521;

struct PipelineConfig {
  // Number of four-point seeds; 0 means min(C(n,4), 8n).
  int num_seeds = 0;
  double residual_threshold = 0.1;
  // Divide each seed residual by ((sum a + sum c) / 6)^2 before
  // thresholding, making the threshold independent of scene scale.
  bool normalize_residual = false;
  // Relative depth agreement |z1 - z2| / max(z1, z2) required to unite.
  double depth_agreement_tol = 0.01;
  int max_candidates_for_horn = 8;
  // Canvas distance at which a correspondence counts as an inlier.
  double inlier_tolerance = 0.01;
  Precision precision = Precision::kDouble;
  LMConfig lm;
  std::uint64_t seed = kDefaultSeed;
};

// Throws Error(kInvalidArgument) on a nonsensical configuration.
void ValidatePipelineConfig(const PipelineConfig& config);

struct Seed {
  std::array<int, 4> indices{};  // sorted, distinct
  std::optional<P4PSolution> solution;
  ErrorCode error = ErrorCode::kOk;
  // Residual used for thresholding (normalized if configured); +inf when
  // the reduction failed.
  double score = 0.0;
  bool accepted = false;
};

struct DepthStats {
  double sum = 0.0;
  double min = 0.0;
  double max = 0.0;
  int count = 0;

  double mean() const { return sum / count; }
  void Add(double z);
  void Merge(const DepthStats& other);
};

struct UnitedSet {
  std::vector<int> members;           // sorted correspondence indices
  std::map<int, DepthStats> depths;   // z_orig estimates per member
  std::vector<int> seeds;             // positions in the seed list
  double cumulative_residual = 0.0;
};

std::uint64_t BinomialFour(std::uint64_t n);

// Distinct sorted 4-subsets of {0..n-1}. When C(n,4) does not exceed the
// requested count, all subsets in lexicographic order; otherwise random
// draws from a generator seeded with config.seed.
// Throws Error(kTooFewPoints) when n < 4.
std::vector<std::array<int, 4>> SampleSeeds(int n, const PipelineConfig& config);

// Batched reduction over the seeds, with threshold acceptance.
std::vector<Seed> SolveSeeds(std::span<const Correspondence> corr,
                             std::span<const std::array<int, 4>> seeds,
                             const PipelineConfig& config);

// Greedy agglomeration of accepted seeds in ascending score order. A seed
// joins the largest existing set with which it shares at least three
// indices whose depths all agree; otherwise it starts a new set. Sets that
// end up sharing three agreeing members are then merged until stable.
std::vector<UnitedSet> UniteSeeds(std::span<const Seed> seeds, const PipelineConfig& config);

struct PoseCandidate {
  std::vector<int> members;
  Pose horn_pose;
  double horn_rms = 0.0;
  Pose pose;  // after refinement on the members
  RefineResult refine;
  std::vector<int> inliers;
  double inlier_error = 0.0;  // reprojection error summed over inliers
};

struct PipelineTimings {
  double sample_s = 0.0;
  double solve_s = 0.0;
  double unite_s = 0.0;
  double pose_s = 0.0;
};

struct PipelineReport {
  std::vector<Seed> seeds;
  std::vector<UnitedSet> sets;
  std::vector<PoseCandidate> candidates;
  int accepted_seeds = 0;
  int horn_calls = 0;
  PipelineTimings timings;
};

enum class PnPStatus { kSolved, kNoViableSeeds };

struct PnPResult {
  PnPStatus status = PnPStatus::kNoViableSeeds;
  Pose pose;
  std::vector<int> inliers;
  double reprojection_error = 0.0;  // over the inliers
  double min_residual = 0.0;        // smallest seed score, +inf if none solved
  PipelineReport report;
};

// Seeds, uniting, Horn alignment and refinement of the best united sets,
// and selection by inlier count then inlier reprojection error.
// Throws Error(kTooFewPoints) for fewer than four correspondences and
// Error(kInvalidArgument) for non-finite input.
PnPResult SolvePnP(std::span<const Correspondence> corr, const PipelineConfig& config = {});

}  // namespace p4p

#endif  // P4P_PIPELINE_H_
