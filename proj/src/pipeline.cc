#include "p4p/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "p4p/absolute_orientation.h"
#include "p4p/coords.h"
#include "p4p/error.h"

namespace p4p {

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool Agrees(double z1, double z2, double tol) {
  return std::abs(z1 - z2) <= tol * std::max(std::abs(z1), std::abs(z2));
}

// Shared members of a sorted member list and a seed, or of two sets.
std::vector<int> Intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> Union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool CanMerge(const UnitedSet& a, const UnitedSet& b, double tol) {
  const std::vector<int> shared = Intersect(a.members, b.members);
  if (shared.size() < 3) return false;
  for (int idx : shared) {
    if (!Agrees(a.depths.at(idx).mean(), b.depths.at(idx).mean(), tol)) return false;
  }
  return true;
}

void MergeInto(UnitedSet* dst, const UnitedSet& src) {
  dst->members = Union(dst->members, src.members);
  for (const auto& [idx, stats] : src.depths) dst->depths[idx].Merge(stats);
  dst->seeds.insert(dst->seeds.end(), src.seeds.begin(), src.seeds.end());
  dst->cumulative_residual += src.cumulative_residual;
}

bool IsFinite(const Correspondence& c) { return c.world.allFinite() && c.image.allFinite(); }

}  // namespace

void DepthStats::Add(double z) {
  if (count == 0) {
    min = max = z;
  } else {
    min = std::min(min, z);
    max = std::max(max, z);
  }
  sum += z;
  ++count;
}

void DepthStats::Merge(const DepthStats& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  sum += other.sum;
  count += other.count;
  min = std::min(min, other.min);
  max = std::max(max, other.max);
}

void ValidatePipelineConfig(const PipelineConfig& c) {
  const bool ok = c.num_seeds >= 0 && c.residual_threshold >= 0.0 &&
                  c.depth_agreement_tol > 0.0 && c.max_candidates_for_horn > 0 &&
                  c.inlier_tolerance > 0.0;
  if (!ok) throw Error(ErrorCode::kInvalidArgument, "invalid pipeline configuration");
  ValidateLMConfig(c.lm);
}

std::uint64_t BinomialFour(std::uint64_t n) {
  if (n < 4) return 0;
  // Staged so each division is exact.
  std::uint64_t r = n * (n - 1) / 2;
  r = r * (n - 2) / 3;
  return r * (n - 3) / 4;
}

std::vector<std::array<int, 4>> SampleSeeds(int n, const PipelineConfig& config) {
  if (n < 4) throw Error(ErrorCode::kTooFewPoints, "need at least four correspondences");
  const std::uint64_t total = BinomialFour(static_cast<std::uint64_t>(n));
  const std::uint64_t wanted =
      config.num_seeds > 0 ? static_cast<std::uint64_t>(config.num_seeds)
                           : std::min<std::uint64_t>(total, 8 * static_cast<std::uint64_t>(n));

  std::vector<std::array<int, 4>> out;
  if (total <= wanted) {
    out.reserve(total);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
          for (int l = k + 1; l < n; ++l) out.push_back({i, j, k, l});
    return out;
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::set<std::array<int, 4>> seen;
  out.reserve(wanted);
  while (out.size() < wanted) {
    std::array<int, 4> s;
    for (int m = 0; m < 4; ++m) {
      int v;
      do {
        v = pick(rng);
      } while (std::find(s.begin(), s.begin() + m, v) != s.begin() + m);
      s[m] = v;
    }
    std::sort(s.begin(), s.end());
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

std::vector<Seed> SolveSeeds(std::span<const Correspondence> corr,
                             std::span<const std::array<int, 4>> seeds,
                             const PipelineConfig& config) {
  std::vector<P4PProblem> problems(seeds.size());
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    for (int m = 0; m < 4; ++m) {
      problems[s].world[m] = corr[seeds[s][m]].world;
      problems[s].image[m] = corr[seeds[s][m]].image;
    }
  }
  const std::vector<P4PBatchResult> solved = SolveP4PBatch(problems, config.precision);

  std::vector<Seed> out(seeds.size());
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    Seed& seed = out[s];
    seed.indices = seeds[s];
    seed.error = solved[s].error;
    seed.solution = solved[s].solution;
    seed.score = std::numeric_limits<double>::infinity();
    if (!seed.solution) continue;
    seed.score = seed.solution->residual;
    if (config.normalize_residual) {
      const DistanceCoords dist = SquaredDistanceCoords(problems[s].world);
      double total = 0.0;
      for (int i = 0; i < 3; ++i) total += dist.a[i] + dist.c[i];
      seed.score /= (total / 6.0) * (total / 6.0);
    }
    const auto& z = seed.solution->z_orig;
    const bool in_front = std::all_of(z.begin(), z.end(), [](double v) { return v > 0.0; });
    seed.accepted = in_front && seed.score <= config.residual_threshold;
  }
  return out;
}

std::vector<UnitedSet> UniteSeeds(std::span<const Seed> seeds, const PipelineConfig& config) {
  std::vector<int> order;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    if (seeds[s].accepted && seeds[s].solution) order.push_back(static_cast<int>(s));
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return seeds[x].score < seeds[y].score; });

  const double tol = config.depth_agreement_tol;
  std::vector<UnitedSet> sets;
  for (int s : order) {
    const Seed& seed = seeds[s];
    const std::vector<int> idx(seed.indices.begin(), seed.indices.end());
    int target = -1;
    for (std::size_t k = 0; k < sets.size(); ++k) {
      const std::vector<int> shared = Intersect(sets[k].members, idx);
      if (shared.size() < 3) continue;
      bool agree = true;
      for (int m = 0; m < 4 && agree; ++m) {
        const auto it = sets[k].depths.find(seed.indices[m]);
        if (it != sets[k].depths.end()) {
          agree = Agrees(seed.solution->z_orig[m], it->second.mean(), tol);
        }
      }
      if (!agree) continue;
      if (target < 0 || sets[k].members.size() > sets[target].members.size() ||
          (sets[k].members.size() == sets[target].members.size() &&
           sets[k].cumulative_residual < sets[target].cumulative_residual)) {
        target = static_cast<int>(k);
      }
    }
    if (target < 0) {
      sets.emplace_back();
      target = static_cast<int>(sets.size()) - 1;
    }
    UnitedSet& set = sets[target];
    set.members = Union(set.members, idx);
    for (int m = 0; m < 4; ++m) set.depths[seed.indices[m]].Add(seed.solution->z_orig[m]);
    set.seeds.push_back(s);
    set.cumulative_residual += seed.score;
  }

  // Sets started before their linking seeds arrived can describe the same
  // consistent structure; fold them together.
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t a = 0; a < sets.size() && !merged; ++a) {
      for (std::size_t b = a + 1; b < sets.size() && !merged; ++b) {
        if (CanMerge(sets[a], sets[b], tol)) {
          MergeInto(&sets[a], sets[b]);
          sets.erase(sets.begin() + static_cast<std::ptrdiff_t>(b));
          merged = true;
        }
      }
    }
  }

  std::stable_sort(sets.begin(), sets.end(), [](const UnitedSet& x, const UnitedSet& y) {
    if (x.members.size() != y.members.size()) return x.members.size() > y.members.size();
    return x.cumulative_residual < y.cumulative_residual;
  });
  return sets;
}

PnPResult SolvePnP(std::span<const Correspondence> corr, const PipelineConfig& config) {
  ValidatePipelineConfig(config);
  if (corr.size() < 4) throw Error(ErrorCode::kTooFewPoints, "need at least four correspondences");
  if (!std::all_of(corr.begin(), corr.end(), IsFinite)) {
    throw Error(ErrorCode::kInvalidArgument, "correspondences must be finite");
  }

  PnPResult result;
  PipelineReport& report = result.report;

  auto start = Clock::now();
  const std::vector<std::array<int, 4>> seeds = SampleSeeds(static_cast<int>(corr.size()), config);
  report.timings.sample_s = SecondsSince(start);

  start = Clock::now();
  report.seeds = SolveSeeds(corr, seeds, config);
  report.timings.solve_s = SecondsSince(start);

  result.min_residual = std::numeric_limits<double>::infinity();
  for (const Seed& s : report.seeds) {
    result.min_residual = std::min(result.min_residual, s.score);
    report.accepted_seeds += s.accepted ? 1 : 0;
  }

  start = Clock::now();
  report.sets = UniteSeeds(report.seeds, config);
  report.timings.unite_s = SecondsSince(start);

  start = Clock::now();
  const std::size_t limit =
      std::min(report.sets.size(), static_cast<std::size_t>(config.max_candidates_for_horn));
  for (std::size_t k = 0; k < limit; ++k) {
    const UnitedSet& set = report.sets[k];
    std::vector<Point3> source;
    std::vector<Point3> target;
    CorrespondenceSet members;
    for (int idx : set.members) {
      source.push_back(corr[idx].world);
      target.push_back(set.depths.at(idx).mean() * Lift(corr[idx].image));
      members.push_back(corr[idx]);
    }
    PoseCandidate cand;
    cand.members = set.members;
    try {
      ++report.horn_calls;
      const AlignmentResult aligned = HornAlign(source, target);
      cand.horn_pose = aligned.pose;
      cand.horn_rms = aligned.rms;
    } catch (const Error&) {
      continue;
    }
    cand.refine = LmRefine(cand.horn_pose, members, config.lm);
    cand.pose = cand.refine.pose;
    CorrespondenceSet inliers;
    for (std::size_t i = 0; i < corr.size(); ++i) {
      const Point3 cam = ApplyPose(cand.pose, corr[i].world);
      if (cam.z() < kMinRefineDepth) continue;
      const CanvasPoint proj(cam.x() / cam.z(), cam.y() / cam.z());
      if ((proj - corr[i].image).norm() <= config.inlier_tolerance) {
        cand.inliers.push_back(static_cast<int>(i));
        inliers.push_back(corr[i]);
      }
    }
    cand.inlier_error = ReprojectionError(cand.pose, inliers);
    report.candidates.push_back(std::move(cand));
  }
  report.timings.pose_s = SecondsSince(start);

  const PoseCandidate* best = nullptr;
  for (const PoseCandidate& c : report.candidates) {
    if (best == nullptr || c.inliers.size() > best->inliers.size() ||
        (c.inliers.size() == best->inliers.size() && c.inlier_error < best->inlier_error)) {
      best = &c;
    }
  }
  if (best != nullptr) {
    result.status = PnPStatus::kSolved;
    result.pose = best->pose;
    result.inliers = best->inliers;
    result.reprojection_error = best->inlier_error;
  }
  return result;
}

}  // namespace p4p
