#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mskel/errors.hpp"
#include "mskel/mesh_io.hpp"
#include "mskel/metrics.hpp"
#include "mskel/pipeline.hpp"

namespace {

// Exit codes promised to callers; everything unexpected maps to 1.
constexpr int kExitParse = 2;
constexpr int kExitNotWatertight = 3;
constexpr int kExitNoInnerPoints = 4;
constexpr int kExitInvalidConfig = 5;

void apply_emit_tokens(const std::vector<std::string>& tokens, mskel::EmitFlags& emit) {
  emit = {false, false, false, false, false};
  for (const std::string& token : tokens) {
    if (token == "skeleton_ply")
      emit.skeleton_ply = true;
    else if (token == "residual_histogram_csv")
      emit.residual_histogram_csv = true;
    else if (token == "metrics_json")
      emit.metrics_json = true;
    else if (token == "lfs_heatmap_ply")
      emit.lfs_heatmap_ply = true;
    else if (token == "timings_csv")
      emit.timings_csv = true;
    else
      throw mskel::InvalidConfig("unknown emit token '" + token + "'");
  }
}

void apply_json_config(const std::string& path, mskel::PipelineConfig& config) {
  std::ifstream file(path);
  if (!file) throw mskel::InvalidConfig("cannot read config file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(file);
  } catch (const nlohmann::json::parse_error& e) {
    throw mskel::InvalidConfig(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw mskel::InvalidConfig("config file must hold a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "input")
        config.input_path = value.get<std::string>();
      else if (key == "shape")
        config.shape_spec = value.get<std::string>();
      else if (key == "box")
        config.box_count = value.get<std::uint64_t>();
      else if (key == "grid")
        config.grid_resolution = value.get<int>();
      else if (key == "k")
        config.k = value.get<int>();
      else if (key == "n")
        config.n = value.get<std::uint64_t>();
      else if (key == "m")
        config.m = value.get<std::uint64_t>();
      else if (key == "seed")
        config.seed = value.get<std::uint64_t>();
      else if (key == "sharpness")
        config.sharpness = value.get<double>();
      else if (key == "threads")
        config.threads = value.get<int>();
      else if (key == "out")
        config.out_dir = value.get<std::string>();
      else if (key == "emit")
        apply_emit_tokens(value.get<std::vector<std::string>>(), config.emit);
      else
        throw mskel::InvalidConfig("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::type_error& e) {
    throw mskel::InvalidConfig(std::string("bad config value type: ") + e.what());
  }
}

// One bundle of flags shared by skeletonize/sample/bench; build() applies the
// precedence flags > config file > defaults.
struct CommonCli {
  CLI::App* sub = nullptr;
  std::string input, shape, config_path, out, points_path;
  std::uint64_t box = 0, n = 0, m = 0, seed = 0;
  int grid = 0, k = 0, threads = 0;
  double sharpness = 1.0;
  std::vector<std::string> emit;

  void attach(CLI::App* s, bool with_sampling) {
    sub = s;
    s->add_option("--input", input, "watertight mesh file (.obj or .ply)");
    s->add_option("--shape", shape,
                  "analytic shape spec, e.g. sphere:r=1,subdiv=4 or torus:R=1,r=0.3,res=200x50");
    s->add_option("--box", box, "uniform random draws in the bounding box (default 10000000)");
    s->add_option("--grid", grid, "per-axis lattice resolution; overrides --box");
    s->add_option("--k", k, "neighborhood size of the structuring element (default 20)");
    s->add_option("--n", n, "number of skeletal spheres to keep (default 1024)");
    if (with_sampling) {
      s->add_option("--m", m, "surface subset size to draw");
      s->add_option("--points", points_path, "surface points PLY (default: mesh vertices)");
    }
    s->add_option("--seed", seed, "RNG seed (default 0)");
    s->add_option("--sharpness", sharpness, "LFS weight exponent (default 1)");
    s->add_option("--threads", threads, "worker threads, 0 = all cores");
    s->add_option("--out", out, "output directory (default .)");
    s->add_option("--config", config_path, "JSON config file; flags take precedence");
    s->add_option("--emit", emit,
                  "comma list of skeleton_ply,residual_histogram_csv,metrics_json,"
                  "lfs_heatmap_ply,timings_csv")
        ->delimiter(',');
  }

  mskel::PipelineConfig build(const mskel::EmitFlags& default_emit) const {
    mskel::PipelineConfig config;
    config.emit = default_emit;
    config.out_dir = ".";
    if (sub->count("--config")) apply_json_config(config_path, config);
    if (sub->count("--input")) config.input_path = input;
    if (sub->count("--shape")) config.shape_spec = shape;
    if (sub->count("--box")) config.box_count = box;
    if (sub->count("--grid")) config.grid_resolution = grid;
    if (sub->count("--k")) config.k = k;
    if (sub->count("--n")) config.n = n;
    if (sub->get_option_no_throw("--m") && sub->count("--m")) config.m = m;
    if (sub->count("--seed")) config.seed = seed;
    if (sub->count("--sharpness")) config.sharpness = sharpness;
    if (sub->count("--threads")) config.threads = threads;
    if (sub->count("--out")) config.out_dir = out;
    if (sub->count("--emit")) apply_emit_tokens(emit, config.emit);
    return config;
  }
};

void print_summary(const mskel::PipelineResult& result) {
  const mskel::StageTimings& t = result.timings;
  std::cout << "inner points: " << result.samples.size() << "\n"
            << "skeleton: " << result.skeleton.spheres.size() << " spheres\n";
  std::printf(
      "timings (s): setup %.3f  sampling %.3f  occupancy %.3f  udf %.3f  knn %.3f  "
      "dilation %.3f  selection %.3f  total %.3f\n",
      t.setup, t.sampling, t.occupancy, t.udf, t.knn, t.dilation, t.selection, t.total());
}

int run_skeletonize_cmd(const CommonCli& cli) {
  mskel::PipelineConfig config = cli.build(mskel::EmitFlags{});
  mskel::PipelineResult result = mskel::skeletonize_to_dir(config);
  print_summary(result);
  std::cout << "artifacts in " << config.out_dir << "\n";
  return 0;
}

int run_sample_cmd(const CommonCli& cli) {
  mskel::EmitFlags defaults{false, false, true, true, false};
  mskel::PipelineConfig config = cli.build(defaults);
  mskel::PipelineResult result = mskel::run_skeletonize(config);

  std::vector<mskel::Vec3> surface;
  const std::vector<mskel::Vec3>* surface_ptr = nullptr;
  if (cli.sub->count("--points")) {
    surface = mskel::load_point_cloud(cli.points_path).points;
    surface_ptr = &surface;
  }
  mskel::SampleResult sampled = mskel::run_sample(config, result, surface_ptr);

  std::filesystem::create_directories(config.out_dir);
  auto in_dir = [&](const std::string& name) {
    return (std::filesystem::path(config.out_dir) / name).string();
  };
  if (config.emit.lfs_heatmap_ply)
    mskel::write_lfs_heatmap_ply(sampled.surface_points, sampled.prior,
                                 in_dir("lfs_heatmap.ply"));
  if (config.emit.metrics_json)
    mskel::write_metadata_json(config, result, in_dir("metadata.json"));
  if (config.emit.skeleton_ply)
    mskel::write_skeleton_ply(result.skeleton, in_dir("skeleton.ply"));
  if (config.emit.residual_histogram_csv)
    mskel::write_residual_histogram_csv(result.skeleton, in_dir("residual_histogram.csv"));
  if (!sampled.picked.empty())
    mskel::write_sampled_ply(sampled.surface_points, sampled.picked, in_dir("sampled.ply"));

  print_summary(result);
  std::cout << "surface points: " << sampled.surface_points.size() << "\n";
  if (!sampled.picked.empty()) std::cout << "sampled subset: " << sampled.picked.size() << "\n";
  std::cout << "artifacts in " << config.out_dir << "\n";
  return 0;
}

int run_eval_cmd(const std::string& pred_path, const std::string& target_path,
                 const std::string& out_dir, int threads) {
  std::vector<mskel::Vec3> pred = mskel::load_point_cloud(pred_path).points;
  std::vector<mskel::Vec3> target = mskel::load_point_cloud(target_path).points;
  nlohmann::json metrics = {{"chamfer", mskel::chamfer(pred, target, threads)},
                            {"hausdorff", mskel::hausdorff(pred, target, threads)}};
  std::cout << metrics.dump(2) << "\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream file(std::filesystem::path(out_dir) / "metrics.json", std::ios::binary);
    if (!file) throw mskel::Error("cannot write metrics.json in " + out_dir);
    file << metrics.dump(2) << "\n";
  }
  return 0;
}

int run_bench_cmd(const CommonCli& cli, int repetitions) {
  mskel::EmitFlags defaults{false, false, false, false, true};
  mskel::PipelineConfig config = cli.build(defaults);
  if (repetitions < 1) throw mskel::InvalidConfig("repetitions must be positive");

  std::vector<mskel::StageTimings> runs;
  for (int rep = 0; rep < repetitions; ++rep) {
    mskel::PipelineResult result = mskel::run_skeletonize(config);
    std::printf("rep %d: total %.3f s\n", rep + 1, result.timings.total());
    runs.push_back(result.timings);
  }
  std::filesystem::create_directories(config.out_dir);
  std::string path = (std::filesystem::path(config.out_dir) / "timings.csv").string();
  mskel::write_timings_csv(runs, path);
  std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"morphological skeleton extraction for watertight triangle meshes"};
  app.require_subcommand(1);

  CLI::App* skeletonize = app.add_subcommand(
      "skeletonize", "extract skeletal spheres from a mesh or analytic shape");
  CommonCli skeletonize_cli;
  skeletonize_cli.attach(skeletonize, false);

  CLI::App* sample =
      app.add_subcommand("sample", "LFS prior weights and a weighted surface subset");
  CommonCli sample_cli;
  sample_cli.attach(sample, true);

  CLI::App* eval = app.add_subcommand("eval", "chamfer/hausdorff between two point clouds");
  std::string pred_path, target_path, eval_out;
  int eval_threads = 0;
  eval->add_option("pred", pred_path, "predicted point cloud (PLY)")->required();
  eval->add_option("target", target_path, "target point cloud (PLY)")->required();
  eval->add_option("--out", eval_out, "directory for metrics.json");
  eval->add_option("--threads", eval_threads, "worker threads, 0 = all cores");

  CLI::App* bench = app.add_subcommand("bench", "repeat the pipeline and tabulate stage times");
  CommonCli bench_cli;
  bench_cli.attach(bench, false);
  int repetitions = 3;
  bench->add_option("--reps", repetitions, "repetitions (default 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidConfig;
  }

  try {
    if (skeletonize->parsed()) return run_skeletonize_cmd(skeletonize_cli);
    if (sample->parsed()) return run_sample_cmd(sample_cli);
    if (eval->parsed()) return run_eval_cmd(pred_path, target_path, eval_out, eval_threads);
    if (bench->parsed()) return run_bench_cmd(bench_cli, repetitions);
  } catch (const mskel::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const mskel::EmptyMesh& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const mskel::NotWatertight& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotWatertight;
  } catch (const mskel::NoInnerPoints& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoInnerPoints;
  } catch (const mskel::InvalidConfig& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const mskel::SubsetTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const mskel::UnsupportedResolution& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const mskel::TooFewPoints& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
