#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_commands.h"
#include "p4p/error.h"
#include "support.h"

namespace p4p {
namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "p4p");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::Main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string WriteTemp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

TEST_CASE("Problem JSON round-trip") {
  CorrespondenceSet corr;
  const auto world = testing::FixtureWorld();
  const auto canvas = testing::FixtureCanvas();
  for (int i = 0; i < 4; ++i) corr.push_back({world[i], canvas[i]});
  const CorrespondenceSet back = cli::ParseProblem(cli::ProblemToJson(corr));
  REQUIRE(back.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(back[i].world == corr[i].world);
    CHECK(back[i].image == corr[i].image);
  }
  CHECK_THROWS_AS(cli::ParseProblem("{"), Error);
  CHECK_THROWS_AS(cli::ParseProblem(R"({"points3d": [[0,0,0]], "points2d": []})"), Error);
  CHECK_THROWS_AS(cli::ParseProblem(R"({"points3d": [[0,0]], "points2d": [[0,0]]})"), Error);
}

TEST_CASE("solve on the fixture") {
  CorrespondenceSet corr;
  const auto world = testing::FixtureWorld();
  const auto canvas = testing::FixtureCanvas();
  for (int i = 0; i < 4; ++i) corr.push_back({world[i], canvas[i]});
  const std::string path = WriteTemp("p4p_cli_fixture.json", cli::ProblemToJson(corr));
  const Run r = Invoke({"solve", path});
  REQUIRE(r.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  const auto q = doc["rotation_quat"].get<std::vector<double>>();
  const auto t = doc["translation"].get<std::vector<double>>();
  const Pose pose(Eigen::Quaterniond(q[0], q[1], q[2], q[3]), Point3(t[0], t[1], t[2]));
  for (int i = 0; i < 4; ++i) {
    CHECK((Project(ApplyPose(pose, world[i])) - canvas[i]).norm() <= 1e-12);
  }
  CHECK(doc["inliers"].size() == 4);
}

TEST_CASE("solve input errors and rejection") {
  const std::string three = WriteTemp(
      "p4p_cli_three.json",
      R"({"points3d": [[0,0,0],[1,0,0],[0,1,0]], "points2d": [[0,0],[1,0],[0,1]]})");
  CHECK(Invoke({"solve", three}).code == cli::kExitBadInput);
  CHECK(Invoke({"solve", "/nonexistent/p4p.json"}).code == cli::kExitBadInput);

  Rng rng(5);
  CorrespondenceSet junk;
  for (int i = 0; i < 6; ++i) {
    junk.push_back({testing::UniformPoint(rng, -1, 1),
                    CanvasPoint(testing::UniformPoint(rng, -0.5, 0.5).head<2>())});
  }
  const std::string path = WriteTemp("p4p_cli_junk.json", cli::ProblemToJson(junk));
  const Run r = Invoke({"solve", path, "--threshold", "0"});
  CHECK(r.code == cli::kExitRejected);
  CHECK(nlohmann::json::parse(r.out)["rejected"] == true);
}

TEST_CASE("experiment") {
  Run r = Invoke({"experiment", "--trials", "0"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out == std::string(kSweepCsvHeader) + "\n");

  const std::vector<std::string> args = {"experiment", "--kind",  "all",  "--noise", "0",
                                         "0.01",       "--trials", "50", "--seed",  "3"};
  r = Invoke(args);
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out == Invoke(args).out);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1 + 3 * 2 * 3);

  CHECK(Invoke({"experiment", "--kind", "spherical"}).code == cli::kExitBadInput);
  CHECK(Invoke({"experiment", "--noise", "-1", "--trials", "1"}).code == cli::kExitBadInput);
  CHECK(Invoke({"experiment", "--bogus"}).code == cli::kExitBadInput);
  CHECK(Invoke({"experiment", "--precision", "half"}).code == cli::kExitBadInput);
}

TEST_CASE("bench and reject") {
  Run r = Invoke({"bench", "--batch", "1", "--repeats", "1"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.rfind("batch_size,repeats,solved,reduction_us,reduction_horn_us,ratio\n", 0) == 0);
  CHECK(Invoke({"bench", "--batch", "0"}).code == cli::kExitBadInput);

  r = Invoke({"reject", "--trials", "20", "--threshold", "inf"});
  CHECK(r.code == cli::kExitOk);
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == "kind,noise,threshold,trials,rejected,rejection_rate");
  CHECK(row.find(",20,0,0") != std::string::npos);
}

}  // namespace
}  // namespace p4p
