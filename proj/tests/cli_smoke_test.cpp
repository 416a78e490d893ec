#include <doctest.h>

#include <json.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mskel/mesh_io.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return MSKEL_CLI_PATH; }

fs::path work_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mskel_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Runs the tool, returns its exit code, captures combined output.
int run_cli(const std::string& args, const fs::path& capture) {
  const std::string cmd =
      std::string(cli_path()) + " " + args + " > " + capture.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

int run_cli(const std::string& args) {
  const fs::path dir = fs::temp_directory_path() / "mskel_cli_tests";
  fs::create_directories(dir);
  return run_cli(args, dir / "out.txt");
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::string kTinySphere = "--shape sphere:r=1,subdiv=2 --box 4000 --k 8 --n 16 --seed 1";

}  // namespace

TEST_CASE("help exits zero, a missing subcommand does not") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("skeletonize --help") == 0);
  CHECK(run_cli("") == 5);
  CHECK(run_cli("frobnicate") == 5);
  CHECK(run_cli("skeletonize --no-such-flag 1") == 5);
}

TEST_CASE("skeletonize writes the default artifacts") {
  const fs::path dir = work_dir("skel");
  const int code = run_cli("skeletonize " + kTinySphere + " --out " + dir.string(),
                           dir / "log.txt");
  CHECK(code == 0);
  CHECK(fs::exists(dir / "skeleton.ply"));
  CHECK(fs::exists(dir / "residual_histogram.csv"));
  CHECK(fs::exists(dir / "metadata.json"));
  CHECK_FALSE(fs::exists(dir / "lfs_heatmap.ply"));

  const nlohmann::json meta = nlohmann::json::parse(slurp(dir / "metadata.json"));
  CHECK(meta.at("config").at("n") == 16);
  CHECK(meta.at("skeleton").at("count") == 16);

  const mskel::PointCloud cloud =
      mskel::load_point_cloud((dir / "skeleton.ply").string());
  CHECK(cloud.points.size() == 16);
  CHECK(cloud.channel("radius") != nullptr);
  CHECK(cloud.channel("residual") != nullptr);
}

TEST_CASE("bad configuration maps to exit 5") {
  CHECK(run_cli("skeletonize --shape nonsense") == 5);
  CHECK(run_cli("skeletonize --shape sphere:r=0") == 5);
  CHECK(run_cli("skeletonize --shape sphere --box 10 --n 100") == 5);
  CHECK(run_cli("skeletonize " + kTinySphere + " --emit skeleton_ply,bogus_token") == 5);
  CHECK(run_cli("skeletonize --shape sphere --input also_a_mesh.ply --box 100 --n 10") == 5);
}

TEST_CASE("unreadable or unparsable inputs map to exit 2") {
  CHECK(run_cli("skeletonize --input /nonexistent/mesh.ply") == 2);
  const fs::path dir = work_dir("parse");
  const fs::path junk = dir / "junk.ply";
  std::ofstream(junk) << "not a ply\n";
  CHECK(run_cli("skeletonize --input " + junk.string()) == 2);
}

TEST_CASE("an open mesh maps to exit 3") {
  const fs::path dir = work_dir("open");
  const fs::path open_path = dir / "open.ply";
  mskel::save_mesh(testutil::open_cube_mesh(), open_path.string());
  CHECK(run_cli("skeletonize --input " + open_path.string() + " --box 100 --n 10") == 3);
}

TEST_CASE("a lattice that misses the solid maps to exit 4") {
  const fs::path dir = work_dir("miss");
  CHECK(run_cli("skeletonize --shape torus:R=1,r=0.04,res=16x8 --grid 2 --n 1 --k 1") == 4);
}

TEST_CASE("config file values apply under flag precedence") {
  const fs::path dir = work_dir("config");
  const fs::path cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"shape": "sphere:r=1,subdiv=2", "box": 4000, "k": 8,
                            "n": 32, "seed": 1, "out": ")"
                     << dir.string() << R"("})";
  CHECK(run_cli("skeletonize --config " + cfg.string() + " --n 16") == 0);
  const nlohmann::json meta = nlohmann::json::parse(slurp(dir / "metadata.json"));
  CHECK(meta.at("config").at("n") == 16);     // flag wins
  CHECK(meta.at("config").at("box_count") == 4000);  // config supplies the rest

  const fs::path broken = dir / "broken.json";
  std::ofstream(broken) << "{ not json";
  CHECK(run_cli("skeletonize --config " + broken.string()) == 5);
  const fs::path unknown_key = dir / "unknown.json";
  std::ofstream(unknown_key) << R"({"shape": "sphere", "volume": 3})";
  CHECK(run_cli("skeletonize --config " + unknown_key.string()) == 5);
}

TEST_CASE("eval reports the documented toy metrics") {
  const fs::path dir = work_dir("eval");
  mskel::PointCloud a, b;
  a.points = {{0, 0, 0}};
  b.points = {{1, 0, 0}};
  mskel::save_point_cloud(a, (dir / "a.ply").string());
  mskel::save_point_cloud(b, (dir / "b.ply").string());

  const fs::path log = dir / "log.txt";
  const int code = run_cli("eval " + (dir / "a.ply").string() + " " + (dir / "b.ply").string() +
                               " --out " + dir.string(),
                           log);
  CHECK(code == 0);
  const nlohmann::json out = nlohmann::json::parse(slurp(log));
  CHECK(out.at("chamfer") == 2.0);
  CHECK(out.at("hausdorff") == 1.0);
  const nlohmann::json file = nlohmann::json::parse(slurp(dir / "metrics.json"));
  CHECK(file == out);

  CHECK(run_cli("eval " + (dir / "a.ply").string()) == 5);  // missing positional
  CHECK(run_cli("eval /missing1.ply /missing2.ply") == 2);
}

TEST_CASE("sample emits the heatmap and the weighted subset") {
  const fs::path dir = work_dir("sample");
  const int code =
      run_cli("sample " + kTinySphere + " --m 12 --out " + dir.string(), dir / "log.txt");
  CHECK(code == 0);
  CHECK(fs::exists(dir / "lfs_heatmap.ply"));
  CHECK(fs::exists(dir / "metadata.json"));
  const mskel::PointCloud picked =
      mskel::load_point_cloud((dir / "sampled.ply").string());
  CHECK(picked.points.size() == 12);
  const mskel::PointCloud heat =
      mskel::load_point_cloud((dir / "lfs_heatmap.ply").string());
  CHECK(heat.channel("lfs") != nullptr);
  CHECK(heat.channel("weight") != nullptr);
  CHECK(heat.points.size() == 162);  // subdiv-2 icosphere vertex count
}

TEST_CASE("bench tabulates stage timings over repetitions") {
  const fs::path dir = work_dir("bench");
  const int code = run_cli("bench " + kTinySphere + " --reps 2 --out " + dir.string(),
                           dir / "log.txt");
  CHECK(code == 0);
  const std::string csv = slurp(dir / "timings.csv");
  CHECK(csv.rfind("# machine:", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 8);  // comment + header + six stage rows
}

TEST_CASE("outputs are byte-identical across thread counts") {
  const fs::path one = work_dir("threads_one");
  const fs::path four = work_dir("threads_four");
  CHECK(run_cli("skeletonize " + kTinySphere + " --threads 1 --out " + one.string()) == 0);
  CHECK(run_cli("skeletonize " + kTinySphere + " --threads 4 --out " + four.string()) == 0);
  CHECK(slurp(one / "skeleton.ply") == slurp(four / "skeleton.ply"));
  CHECK(slurp(one / "residual_histogram.csv") == slurp(four / "residual_histogram.csv"));
}
