#include "p4p/synth.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "p4p/absolute_orientation.h"
#include "p4p/coords.h"
#include "p4p/error.h"

namespace p4p {

namespace {

constexpr int kMaxResamples = 100;

// Model-frame point for slot i of a scenario.
Point3 SampleModelPoint(ScenarioKind kind, int slot, Rng& rng) {
  switch (kind) {
    case ScenarioKind::kGeneral:
      return SampleUnitSphere(rng);
    case ScenarioKind::kPlanar: {
      std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
      const double th = angle(rng);
      return {std::cos(th), std::sin(th), 0.0};
    }
    case ScenarioKind::kThreeCollinear: {
      if (slot == 0) return {-1.0, 0.0, 0.0};
      if (slot == 1) return {1.0, 0.0, 0.0};
      if (slot == 2) {
        // A normal draw clamped to [-1, 1] lands on an endpoint whenever it
        // clamps, and those draws are resampled as coincident points anyway,
        // so sample the truncated normal directly.
        std::normal_distribution<double> normal(0.0, 1.0);
        double x;
        do {
          x = normal(rng);
        } while (!(std::abs(x) < 1.0));
        return {x, 0.0, 0.0};
      }
      return SampleUnitSphere(rng);
    }
  }
  return SampleUnitSphere(rng);
}

bool IsDegenerate(const Scenario& s) {
  const std::size_t n = s.world.size();
  double extent = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      extent = std::max(extent, (s.noisy_world[i] - s.noisy_world[j]).squaredNorm());
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((s.noisy_world[i] - s.noisy_world[j]).squaredNorm() <= 1e-18 * extent) return true;
    }
  }
  // The solver anchors on the fourth point.
  const std::span<const Point3, 4> world(s.noisy_world.data(), 4);
  const std::span<const CanvasPoint, 4> canvas(s.canvas.data(), 4);
  AugmentedCoords unused;
  return internal::TryComputeCoords<double>(world, canvas, &unused) != ErrorCode::kOk;
}

Scenario GenerateOnce(ScenarioKind kind, double noise, Rng& rng, int n) {
  std::vector<Point3> model(n);
  for (int i = 0; i < n; ++i) model[i] = SampleModelPoint(kind, i, rng);
  const Eigen::Quaterniond rotation = SampleRotation(rng);
  const Point3 offset = SampleUnitSphere(rng);
  const Pose placement(rotation, offset);

  Scenario s;
  s.kind = kind;
  s.noise = noise;
  s.truth = Pose(Eigen::Quaterniond::Identity(), Point3(0.0, 0.0, kCameraDistance)) *
            placement.Inverse();
  s.world.resize(n);
  s.noisy_world.resize(n);
  s.canvas.resize(n);
  for (int i = 0; i < n; ++i) {
    s.world[i] = ApplyPose(placement, model[i]);
    s.noisy_world[i] = s.world[i] + noise * SampleUnitSphere(rng);
    s.canvas[i] = Project(model[i] + Point3(0.0, 0.0, kCameraDistance));
  }
  return s;
}

double Mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

double StdDev(const std::vector<double>& v, double mean) {
  double sum = 0.0;
  for (double x : v) sum += (x - mean) * (x - mean);
  return v.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(v.size()));
}

}  // namespace

std::string_view ScenarioKindName(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kGeneral:
      return "general";
    case ScenarioKind::kPlanar:
      return "planar";
    case ScenarioKind::kThreeCollinear:
      return "collinear";
  }
  return "unknown";
}

std::optional<ScenarioKind> ParseScenarioKind(std::string_view name) {
  for (ScenarioKind k :
       {ScenarioKind::kGeneral, ScenarioKind::kPlanar, ScenarioKind::kThreeCollinear}) {
    if (name == ScenarioKindName(k)) return k;
  }
  return std::nullopt;
}

Eigen::Vector3d SampleUnitSphere(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  while (true) {
    const Eigen::Vector3d v(normal(rng), normal(rng), normal(rng));
    const double norm = v.norm();
    if (norm > 1e-12) return v / norm;
  }
}

Eigen::Quaterniond SampleRotation(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  while (true) {
    Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
    const double norm = q.norm();
    if (norm > 1e-12) {
      q.coeffs() /= norm;
      return q;
    }
  }
}

CorrespondenceSet Scenario::Correspondences() const {
  CorrespondenceSet out(noisy_world.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {noisy_world[i], canvas[i]};
  return out;
}

Scenario GenScenario(ScenarioKind kind, double noise, Rng& rng, int n) {
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw Error(ErrorCode::kInvalidArgument, "noise must be finite and nonnegative");
  }
  if (n < 4) throw Error(ErrorCode::kInvalidArgument, "scenarios need at least four points");
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    Scenario s = GenerateOnce(kind, noise, rng, n);
    if (!IsDegenerate(s)) return s;
  }
  throw Error(ErrorCode::kDegenerateInput, "could not draw a non-degenerate scenario");
}

Scenario GenMismatchScenario(ScenarioKind kind, double noise, Rng& rng, int n) {
  Scenario s = GenScenario(kind, noise, rng, n);
  const Pose placement =
      (Pose(Eigen::Quaterniond::Identity(), Point3(0.0, 0.0, kCameraDistance)).Inverse() *
       s.truth)
          .Inverse();
  std::uniform_int_distribution<int> pick(0, n - 1);
  const int idx = pick(rng);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    Scenario m = s;
    m.replaced_index = idx;
    m.world[idx] = ApplyPose(placement, SampleModelPoint(kind, idx, rng));
    m.noisy_world[idx] = m.world[idx] + noise * SampleUnitSphere(rng);
    if (!IsDegenerate(m)) return m;
  }
  throw Error(ErrorCode::kDegenerateInput, "could not draw a non-degenerate replacement");
}

std::uint64_t TrialSeed(std::uint64_t master, std::uint64_t trial) {
  // splitmix64 finalizer over a combination of both inputs.
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TrialOutcome RunTrial(const Scenario& scenario, Precision precision) {
  TrialOutcome out;
  out.residual = std::numeric_limits<double>::infinity();
  const std::span<const Point3, 4> world(scenario.noisy_world.data(), 4);
  const std::span<const CanvasPoint, 4> canvas(scenario.canvas.data(), 4);
  try {
    const P4PSolution sol = SolveP4P(world, canvas, precision);
    std::array<Point3, 4> target;
    for (int i = 0; i < 4; ++i) target[i] = sol.z_orig[i] * Lift(canvas[i]);
    const AlignmentResult aligned = HornAlign(world, target);
    out.residual = sol.residual;
    out.error = PoseErrors(aligned.pose, scenario.truth);
  } catch (const Error&) {
    // Counts as a rejection at every finite threshold.
  }
  return out;
}

std::vector<SweepRow> RunSweep(const SweepConfig& config) {
  std::vector<SweepRow> rows;
  if (config.trials <= 0) return rows;
  for (ScenarioKind kind : config.kinds) {
    for (double noise : config.noises) {
      std::vector<TrialOutcome> outcomes(config.trials);
      for (int t = 0; t < config.trials; ++t) {
        Rng rng(TrialSeed(config.seed, static_cast<std::uint64_t>(t)));
        const Scenario s = config.mismatch ? GenMismatchScenario(kind, noise, rng)
                                           : GenScenario(kind, noise, rng);
        outcomes[t] = RunTrial(s, config.precision);
      }
      for (double threshold : config.thresholds) {
        std::vector<double> rot;
        std::vector<double> trans;
        for (const TrialOutcome& o : outcomes) {
          if (!(o.residual <= threshold)) continue;
          rot.push_back(o.error.rotation_deg);
          trans.push_back(1000.0 * o.error.translation);
        }
        SweepRow row;
        row.kind = kind;
        row.noise = noise;
        row.threshold = threshold;
        row.trials = config.trials;
        row.successes = static_cast<int>(rot.size());
        row.rot_mean_deg = Mean(rot);
        row.rot_std_deg = StdDev(rot, row.rot_mean_deg);
        row.trans_mean_milli = Mean(trans);
        row.trans_std_milli = StdDev(trans, row.trans_mean_milli);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  const auto flags = out.flags();
  const auto precision = out.precision();
  out.precision(8);
  for (const SweepRow& r : rows) {
    out << ScenarioKindName(r.kind) << ',' << r.noise << ',' << r.threshold << ',' << r.trials
        << ',' << r.successes << ',' << r.rot_mean_deg << ',' << r.rot_std_deg << ','
        << r.trans_mean_milli << ',' << r.trans_std_milli << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace p4p
