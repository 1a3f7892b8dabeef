#include "p4p/bench.h"

#include <algorithm>
#include <chrono>
#include <vector>

#include "p4p/absolute_orientation.h"
#include "p4p/error.h"
#include "p4p/synth.h"

namespace p4p {

namespace {

using Clock = std::chrono::steady_clock;

// Keeps the timed work observable so it cannot be optimized away.
volatile double g_sink = 0.0;

double AlignAll(std::span<const P4PProblem> problems, std::span<const P4PBatchResult> results) {
  double acc = 0.0;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    if (!results[i].solution) continue;
    std::array<Point3, 4> target;
    for (int m = 0; m < 4; ++m) {
      target[m] = results[i].solution->z_orig[m] * Lift(problems[i].image[m]);
    }
    try {
      acc += HornAlign(problems[i].world, target).rms;
    } catch (const Error&) {
    }
  }
  return acc;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

BenchResult RunBench(const BenchConfig& config) {
  if (config.batch_size <= 0 || config.repeats <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "batch size and repeats must be positive");
  }
  std::vector<P4PProblem> problems(config.batch_size);
  for (int i = 0; i < config.batch_size; ++i) {
    Rng rng(TrialSeed(config.seed, static_cast<std::uint64_t>(i)));
    const Scenario s = GenScenario(ScenarioKind::kGeneral, 0.0, rng);
    for (int m = 0; m < 4; ++m) {
      problems[i].world[m] = s.noisy_world[m];
      problems[i].image[m] = s.canvas[m];
    }
  }

  BenchResult out;
  out.batch_size = config.batch_size;
  out.repeats = config.repeats;

  // Untimed pass to warm caches and the allocator.
  {
    const std::vector<P4PBatchResult> warm = SolveP4PBatch(problems, config.precision);
    g_sink = g_sink + AlignAll(problems, warm);
    for (const P4PBatchResult& res : warm) out.solved += res.solution ? 1 : 0;
  }

  std::vector<double> reduction_s;
  std::vector<double> combined_s;
  for (int r = 0; r < config.repeats; ++r) {
    auto start = Clock::now();
    const std::vector<P4PBatchResult> alone = SolveP4PBatch(problems, config.precision);
    reduction_s.push_back(std::chrono::duration<double>(Clock::now() - start).count());
    g_sink = g_sink + (alone.empty() || !alone[0].solution ? 0.0 : alone[0].solution->residual);

    start = Clock::now();
    const std::vector<P4PBatchResult> solved = SolveP4PBatch(problems, config.precision);
    g_sink = g_sink + AlignAll(problems, solved);
    combined_s.push_back(std::chrono::duration<double>(Clock::now() - start).count());
  }
  const double per = 1e6 / config.batch_size;
  out.reduction_us = Median(reduction_s) * per;
  out.reduction_horn_us = Median(combined_s) * per;
  return out;
}

}  // namespace p4p
