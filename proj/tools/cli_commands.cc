#include "cli_commands.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "p4p/bench.h"
#include "p4p/error.h"
#include "p4p/synth.h"

namespace p4p::cli {

namespace {

using nlohmann::json;

json NumberOrNull(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Precision ParsePrecision(const std::string& name) {
  if (name == "double") return Precision::kDouble;
  if (name == "single") return Precision::kSingle;
  throw CLI::ValidationError("--precision", "expected 'double' or 'single'");
}

std::vector<ScenarioKind> ParseKinds(const std::vector<std::string>& names) {
  std::vector<ScenarioKind> kinds;
  for (const std::string& name : names) {
    if (name == "all") {
      kinds = {ScenarioKind::kGeneral, ScenarioKind::kPlanar, ScenarioKind::kThreeCollinear};
      continue;
    }
    const auto kind = ParseScenarioKind(name);
    if (!kind) throw CLI::ValidationError("--kind", "unknown kind '" + name + "'");
    kinds.push_back(*kind);
  }
  return kinds;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SolveArgs {
  std::string input;
  PipelineConfig config;
  std::string precision = "double";
};

int RunSolve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  CorrespondenceSet corr;
  try {
    corr = ParseProblem(ReadFile(args.input));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  PipelineConfig config = args.config;
  config.precision = ParsePrecision(args.precision);
  PnPResult result;
  try {
    result = SolvePnP(corr, config);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  out << SolveResultToJson(result) << '\n';
  return result.status == PnPStatus::kSolved ? kExitOk : kExitRejected;
}

struct ExperimentArgs {
  std::vector<std::string> kinds = {"general"};
  std::vector<double> noises = {0.0};
  int trials = 1000;
  std::vector<double> thresholds = {0.05, 0.1, 1.0};
  std::uint64_t seed = kDefaultSeed;
  std::string out_path;
  std::string precision = "double";
  bool mismatch = false;
};

int RunExperiment(const ExperimentArgs& args, std::ostream& out, std::ostream& err) {
  SweepConfig sweep;
  sweep.kinds = ParseKinds(args.kinds);
  sweep.noises = args.noises;
  sweep.trials = args.trials;
  sweep.thresholds = args.thresholds;
  sweep.seed = args.seed;
  sweep.precision = ParsePrecision(args.precision);
  sweep.mismatch = args.mismatch;
  for (double n : sweep.noises) {
    if (!(n >= 0.0) || !std::isfinite(n)) {
      err << "error: noise levels must be finite and nonnegative\n";
      return kExitBadInput;
    }
  }
  const std::vector<SweepRow> rows = RunSweep(sweep);
  if (args.out_path.empty()) {
    WriteSweepCsv(out, rows);
    return kExitOk;
  }
  std::ofstream file(args.out_path);
  if (!file) {
    err << "error: cannot write " << args.out_path << '\n';
    return kExitBadInput;
  }
  WriteSweepCsv(file, rows);
  return kExitOk;
}

struct BenchArgs {
  int batch = 10000;
  int repeats = 5;
  std::uint64_t seed = kDefaultSeed;
  std::string precision = "double";
};

int RunBenchCommand(const BenchArgs& args, std::ostream& out) {
  BenchConfig config;
  config.batch_size = args.batch;
  config.repeats = args.repeats;
  config.seed = args.seed;
  config.precision = ParsePrecision(args.precision);
  const BenchResult r = RunBench(config);
  out << "batch_size,repeats,solved,reduction_us,reduction_horn_us,ratio\n"
      << r.batch_size << ',' << r.repeats << ',' << r.solved << ',' << r.reduction_us << ','
      << r.reduction_horn_us << ',' << r.ratio() << '\n';
  return kExitOk;
}

struct RejectArgs {
  std::string kind = "general";
  double noise = 0.0;
  int trials = 10000;
  std::vector<double> thresholds = {0.05, 0.1, 1.0};
  std::uint64_t seed = kDefaultSeed;
  std::string precision = "double";
};

int RunReject(const RejectArgs& args, std::ostream& out) {
  SweepConfig sweep;
  sweep.kinds = ParseKinds({args.kind});
  sweep.noises = {args.noise};
  sweep.trials = args.trials;
  sweep.thresholds = args.thresholds;
  sweep.seed = args.seed;
  sweep.precision = ParsePrecision(args.precision);
  sweep.mismatch = true;
  out << "kind,noise,threshold,trials,rejected,rejection_rate\n";
  for (const SweepRow& row : RunSweep(sweep)) {
    const int rejected = row.trials - row.successes;
    out << ScenarioKindName(row.kind) << ',' << row.noise << ',' << row.threshold << ','
        << row.trials << ',' << rejected << ','
        << static_cast<double>(rejected) / row.trials << '\n';
  }
  return kExitOk;
}

void AddPipelineOptions(CLI::App* cmd, SolveArgs* args) {
  PipelineConfig& c = args->config;
  cmd->add_option("--threshold", c.residual_threshold, "Seed residual acceptance threshold")
      ->capture_default_str();
  cmd->add_flag("--normalize-residual", c.normalize_residual,
                "Divide seed residuals by ((sum a + sum c)/6)^2");
  cmd->add_option("--seeds", c.num_seeds, "Number of seeds (0: min(C(n,4), 8n))")
      ->capture_default_str();
  cmd->add_option("--depth-tol", c.depth_agreement_tol, "Relative depth agreement for uniting")
      ->capture_default_str();
  cmd->add_option("--max-candidates", c.max_candidates_for_horn,
                  "United sets promoted to pose candidates")
      ->capture_default_str();
  cmd->add_option("--inlier-tol", c.inlier_tolerance, "Inlier reprojection distance (canvas)")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Seed for subset sampling")->capture_default_str();
  cmd->add_option("--precision", args->precision, "Reduction arithmetic: double or single")
      ->capture_default_str();
}

}  // namespace

CorrespondenceSet ParseProblem(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("points3d") || !doc.contains("points2d")) {
    throw Error(ErrorCode::kInvalidArgument, "expected an object with points3d and points2d");
  }
  const json& p3 = doc["points3d"];
  const json& p2 = doc["points2d"];
  if (!p3.is_array() || !p2.is_array() || p3.size() != p2.size()) {
    throw Error(ErrorCode::kInvalidArgument, "points3d and points2d must be arrays of equal length");
  }
  if (p3.size() < 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "need at least 4 correspondences, got " + std::to_string(p3.size()));
  }
  const auto read = [](const json& v, std::size_t dim, double* dst) {
    if (!v.is_array() || v.size() != dim) return false;
    for (std::size_t k = 0; k < dim; ++k) {
      if (!v[k].is_number()) return false;
      dst[k] = v[k].get<double>();
      if (!std::isfinite(dst[k])) return false;
    }
    return true;
  };
  CorrespondenceSet corr(p3.size());
  for (std::size_t i = 0; i < p3.size(); ++i) {
    if (!read(p3[i], 3, corr[i].world.data()) || !read(p2[i], 2, corr[i].image.data())) {
      throw Error(ErrorCode::kInvalidArgument,
                  "correspondence " + std::to_string(i) + " is not a finite 3D/2D pair");
    }
  }
  return corr;
}

std::string ProblemToJson(const CorrespondenceSet& corr) {
  json p3 = json::array();
  json p2 = json::array();
  for (const Correspondence& c : corr) {
    p3.push_back({c.world.x(), c.world.y(), c.world.z()});
    p2.push_back({c.image.x(), c.image.y()});
  }
  return json{{"points3d", p3}, {"points2d", p2}}.dump();
}

std::string SolveResultToJson(const PnPResult& result) {
  if (result.status != PnPStatus::kSolved) {
    return json{{"rejected", true}, {"min_residual", NumberOrNull(result.min_residual)}}.dump();
  }
  const Eigen::Quaterniond& q = result.pose.rotation();
  const Point3& t = result.pose.translation();
  json doc;
  doc["rotation_quat"] = {q.w(), q.x(), q.y(), q.z()};
  doc["translation"] = {t.x(), t.y(), t.z()};
  doc["inliers"] = result.inliers;
  doc["reprojection_error"] = result.reprojection_error;
  return doc.dump();
}

int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perspective-n-point solver and benchmark tool"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Estimate a camera pose from a problem file");
  solve_cmd->add_option("input", solve.input, "Problem JSON file")->required();
  AddPipelineOptions(solve_cmd, &solve);

  ExperimentArgs exp;
  CLI::App* exp_cmd = app.add_subcommand("experiment", "Run a synthetic four-point sweep");
  exp_cmd->add_option("--kind", exp.kinds, "general, planar, collinear or all")
      ->delimiter(',')
      ->capture_default_str();
  exp_cmd->add_option("--noise", exp.noises, "Noise levels in scene units")
      ->delimiter(',')
      ->capture_default_str();
  exp_cmd->add_option("--trials", exp.trials, "Trials per kind and noise level")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  exp_cmd->add_option("--thresholds", exp.thresholds, "Residual thresholds")
      ->delimiter(',')
      ->capture_default_str();
  exp_cmd->add_option("--seed", exp.seed, "Master seed")->capture_default_str();
  exp_cmd->add_option("--out", exp.out_path, "CSV output path (default stdout)");
  exp_cmd->add_option("--precision", exp.precision, "double or single")->capture_default_str();
  exp_cmd->add_flag("--mismatch", exp.mismatch, "Corrupt one correspondence per trial");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Time the batched reduction and alignment");
  bench_cmd->add_option("--batch", bench.batch, "Configurations per batch")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--repeats", bench.repeats, "Timed repetitions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Seed for the synthetic batch")
      ->capture_default_str();
  bench_cmd->add_option("--precision", bench.precision, "double or single")
      ->capture_default_str();

  RejectArgs reject;
  CLI::App* reject_cmd = app.add_subcommand("reject", "Measure rejection of mismatched quadruples");
  reject_cmd->add_option("--kind", reject.kind, "general, planar or collinear")
      ->capture_default_str();
  reject_cmd->add_option("--noise", reject.noise, "Noise in scene units")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  reject_cmd->add_option("--trials", reject.trials, "Number of trials")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  reject_cmd->add_option("--threshold,--thresholds", reject.thresholds, "Residual thresholds")
      ->delimiter(',')
      ->capture_default_str();
  reject_cmd->add_option("--seed", reject.seed, "Master seed")->capture_default_str();
  reject_cmd->add_option("--precision", reject.precision, "double or single")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (*solve_cmd) return RunSolve(solve, out, err);
    if (*exp_cmd) return RunExperiment(exp, out, err);
    if (*bench_cmd) return RunBenchCommand(bench, out);
    if (*reject_cmd) return RunReject(reject, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return kExitBadInput;
}

}  // namespace p4p::cli
