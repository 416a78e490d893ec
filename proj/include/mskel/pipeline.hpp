#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mskel/lfs.hpp"
#include "mskel/mesh.hpp"
#include "mskel/morphology.hpp"
#include "mskel/occupancy.hpp"

namespace mskel {

struct EmitFlags {
  bool skeleton_ply = true;
  bool residual_histogram_csv = true;
  bool metrics_json = true;  // run metadata
  bool lfs_heatmap_ply = false;
  bool timings_csv = false;
};

struct PipelineConfig {
  std::string input_path;  // mesh file; exactly one of input_path / shape_spec
  std::string shape_spec;  // analytic shape description
  std::uint64_t box_count = 10'000'000;
  int grid_resolution = 0;  // > 0 switches to cell-centered lattice sampling
  int k = 20;
  std::uint64_t n = 1024;
  std::uint64_t m = 0;  // surface subset size for the sample command
  std::uint64_t seed = 0;
  double sharpness = 1.0;
  int threads = 0;  // 0 = all cores
  std::string out_dir;
  EmitFlags emit;
};

// Throws InvalidConfig on out-of-range or contradictory settings.
void validate_config(const PipelineConfig& config);

struct StageTimings {
  double setup = 0.0;  // mesh load/validation + BVH build
  double sampling = 0.0;
  double occupancy = 0.0;
  double udf = 0.0;
  double knn = 0.0;
  double dilation = 0.0;
  double selection = 0.0;
  double total() const {
    return setup + sampling + occupancy + udf + knn + dilation + selection;
  }
};

struct PipelineResult {
  TriangleMesh mesh;
  WatertightReport watertight;
  VolumeSamples samples;          // udf populated
  std::vector<double> residuals;  // aligned with samples
  Skeleton skeleton;
  StageTimings timings;
};

// Loads or generates the input mesh, validates it, and requires closedness.
// Throws NotWatertight with edge diagnostics otherwise.
TriangleMesh load_input_mesh(const PipelineConfig& config, WatertightReport* report = nullptr);

// Full pass: sample, occupancy-filter, distance field, k-NN graph, dilation
// residual, subset selection. Output is independent of the thread count.
PipelineResult run_skeletonize(const PipelineConfig& config);

struct SampleResult {
  std::vector<Vec3> surface_points;
  SamplingPrior prior;
  std::vector<std::size_t> picked;  // empty when config.m == 0
};

// LFS prior over surface points (mesh vertices unless overridden) and, for
// m > 0, a weighted subset of size m.
SampleResult run_sample(const PipelineConfig& config, const PipelineResult& skeletonized,
                        const std::vector<Vec3>* surface_points = nullptr);

// Artifact writers. All emit deterministic bytes for a fixed input.
void write_skeleton_ply(const Skeleton& skeleton, const std::string& path);
void write_residual_histogram_csv(const Skeleton& skeleton, const std::string& path);
void write_metadata_json(const PipelineConfig& config, const PipelineResult& result,
                         const std::string& path);
void write_lfs_heatmap_ply(const std::vector<Vec3>& points, const SamplingPrior& prior,
                           const std::string& path);
void write_sampled_ply(const std::vector<Vec3>& points, const std::vector<std::size_t>& picked,
                       const std::string& path);
void write_timings_csv(const std::vector<StageTimings>& runs, const std::string& path);

// Runs the pipeline and writes whatever config.emit enables into
// config.out_dir (creating it if needed).
PipelineResult skeletonize_to_dir(const PipelineConfig& config);

}  // namespace mskel
