#include "mskel/pipeline.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "mskel/bvh.hpp"
#include "mskel/distance.hpp"
#include "mskel/errors.hpp"
#include "mskel/kdtree.hpp"
#include "mskel/mesh_io.hpp"
#include "mskel/shapes.hpp"

namespace mskel {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

constexpr int kHistogramBins = 64;

}  // namespace

void validate_config(const PipelineConfig& config) {
  if (config.input_path.empty() == config.shape_spec.empty())
    throw InvalidConfig("exactly one of input mesh and shape must be given");
  if (config.k < 1) throw InvalidConfig("k must be at least 1");
  if (config.n < 1) throw InvalidConfig("n must be at least 1");
  if (config.grid_resolution < 0)
    throw InvalidConfig("grid resolution must be positive");
  if (config.grid_resolution == 0 && config.box_count < config.n)
    throw InvalidConfig("box_count must be at least n");
  if (!(config.sharpness > 0.0)) throw InvalidConfig("sharpness must be positive");
  if (config.threads < 0) throw InvalidConfig("threads must be nonnegative");
}

TriangleMesh load_input_mesh(const PipelineConfig& config, WatertightReport* report) {
  TriangleMesh mesh;
  if (!config.shape_spec.empty()) {
    mesh = parse_shape_spec(config.shape_spec)->generate_mesh();
    validate_mesh(mesh);
  } else {
    mesh = load_mesh(config.input_path);
  }
  WatertightReport wt = is_watertight(mesh);
  if (report) *report = wt;
  if (!wt.closed)
    throw NotWatertight("mesh is not closed: " + std::to_string(wt.boundary_edge_count) +
                        " boundary edges, " + std::to_string(wt.non_manifold_edge_count) +
                        " non-manifold edges, " +
                        std::to_string(wt.inconsistent_winding_edge_count) +
                        " inconsistently wound edges");
  return mesh;
}

PipelineResult run_skeletonize(const PipelineConfig& config) {
  validate_config(config);
  PipelineResult result;

  auto t0 = Clock::now();
  result.mesh = load_input_mesh(config, &result.watertight);
  TriangleBvh bvh(result.mesh);
  result.timings.setup = seconds_since(t0);

  SampleTimings sample_timings;
  if (config.grid_resolution > 0)
    result.samples = sample_inner_points_grid(result.mesh, bvh, config.grid_resolution,
                                              config.seed, config.threads, &sample_timings);
  else
    result.samples = sample_inner_points_random(result.mesh, bvh, config.box_count,
                                                config.seed, config.threads, &sample_timings);
  result.timings.sampling = sample_timings.sampling_seconds;
  result.timings.occupancy = sample_timings.occupancy_seconds;

  auto t1 = Clock::now();
  result.samples.udf = udf_batch(bvh, result.samples.points, config.threads);
  result.timings.udf = seconds_since(t1);

  auto t2 = Clock::now();
  PointKdTree tree(result.samples.points);
  KnnGraph graph = build_knn_graph(tree, config.k, config.threads);
  result.timings.knn = seconds_since(t2);

  auto t3 = Clock::now();
  std::vector<double> dilated = dilate(result.samples.udf, graph, config.threads);
  result.residuals = dilation_residual(result.samples.udf, dilated);
  result.timings.dilation = seconds_since(t3);

  auto t4 = Clock::now();
  result.skeleton = select_skeleton(result.samples, result.residuals, config.n);
  result.skeleton.params.k = config.k;
  result.timings.selection = seconds_since(t4);
  return result;
}

SampleResult run_sample(const PipelineConfig& config, const PipelineResult& skeletonized,
                        const std::vector<Vec3>* surface_points) {
  SampleResult out;
  out.surface_points = surface_points ? *surface_points : skeletonized.mesh.vertices;
  std::vector<double> lfs =
      local_feature_size(out.surface_points, skeletonized.skeleton, config.threads);
  out.prior = prior_weights(lfs, config.sharpness);
  if (config.m > 0)
    out.picked = weighted_sample(out.surface_points, out.prior,
                                 static_cast<std::size_t>(config.m), config.seed);
  return out;
}

void write_skeleton_ply(const Skeleton& skeleton, const std::string& path) {
  PointCloud cloud;
  std::vector<double> radius, residual;
  cloud.points.reserve(skeleton.spheres.size());
  for (const SkeletalSphere& s : skeleton.spheres) {
    cloud.points.push_back(s.center);
    radius.push_back(s.radius);
    residual.push_back(s.residual);
  }
  cloud.channels = {{"radius", std::move(radius)}, {"residual", std::move(residual)}};
  save_point_cloud(cloud, path);
}

void write_residual_histogram_csv(const Skeleton& skeleton, const std::string& path) {
  double max_residual = 0.0;
  for (const SkeletalSphere& s : skeleton.spheres)
    max_residual = std::max(max_residual, s.residual);

  std::array<std::uint64_t, kHistogramBins> counts{};
  for (const SkeletalSphere& s : skeleton.spheres) {
    int bin = 0;
    if (max_residual > 0.0)
      bin = std::min(kHistogramBins - 1,
                     static_cast<int>(s.residual / max_residual * kHistogramBins));
    counts[static_cast<std::size_t>(bin)]++;
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path);
  const double width = max_residual / kHistogramBins;
  file << "bin,lower,upper,count\r\n";
  for (int b = 0; b < kHistogramBins; ++b)
    file << b << ',' << fmt_double(b * width) << ',' << fmt_double((b + 1) * width) << ','
         << counts[static_cast<std::size_t>(b)] << "\r\n";
}

void write_metadata_json(const PipelineConfig& config, const PipelineResult& result,
                         const std::string& path) {
  nlohmann::json meta;
  meta["config"] = {{"input", config.input_path},
                    {"shape", config.shape_spec},
                    {"box_count", config.box_count},
                    {"grid_resolution", config.grid_resolution},
                    {"k", config.k},
                    {"n", config.n},
                    {"m", config.m},
                    {"seed", config.seed},
                    {"sharpness", config.sharpness},
                    {"threads", config.threads},
                    {"out_dir", config.out_dir},
                    {"emit",
                     {{"skeleton_ply", config.emit.skeleton_ply},
                      {"residual_histogram_csv", config.emit.residual_histogram_csv},
                      {"metrics_json", config.emit.metrics_json},
                      {"lfs_heatmap_ply", config.emit.lfs_heatmap_ply},
                      {"timings_csv", config.emit.timings_csv}}}};
  meta["mesh"] = {{"vertices", result.mesh.vertex_count()},
                  {"triangles", result.mesh.triangle_count()},
                  {"degenerate_dropped", result.mesh.degenerate_dropped}};
  meta["watertight"] = {
      {"closed", result.watertight.closed},
      {"boundary_edges", result.watertight.boundary_edge_count},
      {"non_manifold_edges", result.watertight.non_manifold_edge_count},
      {"inconsistent_winding_edges", result.watertight.inconsistent_winding_edge_count}};
  meta["inner_points"] = result.samples.size();

  double mean_radius = 0.0, max_radius = 0.0, mean_residual = 0.0, max_residual = 0.0;
  std::size_t exact = 0;
  for (const SkeletalSphere& s : result.skeleton.spheres) {
    mean_radius += s.radius;
    max_radius = std::max(max_radius, s.radius);
    mean_residual += s.residual;
    max_residual = std::max(max_residual, s.residual);
    if (s.residual < kResidualExactTol) ++exact;
  }
  if (!result.skeleton.spheres.empty()) {
    mean_radius /= static_cast<double>(result.skeleton.spheres.size());
    mean_residual /= static_cast<double>(result.skeleton.spheres.size());
  }
  meta["skeleton"] = {{"count", result.skeleton.spheres.size()},
                      {"mean_radius", mean_radius},
                      {"max_radius", max_radius},
                      {"mean_residual", mean_residual},
                      {"max_residual", max_residual},
                      {"exact_local_maxima", exact}};
  meta["timings_seconds"] = {{"setup", result.timings.setup},
                             {"sampling", result.timings.sampling},
                             {"occupancy", result.timings.occupancy},
                             {"udf", result.timings.udf},
                             {"knn", result.timings.knn},
                             {"dilation", result.timings.dilation},
                             {"selection", result.timings.selection},
                             {"total", result.timings.total()}};

  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path);
  file << meta.dump(2) << '\n';
}

void write_lfs_heatmap_ply(const std::vector<Vec3>& points, const SamplingPrior& prior,
                           const std::string& path) {
  if (prior.lfs.size() != points.size() || prior.weight.size() != points.size())
    throw LengthMismatch("prior does not match point count");
  PointCloud cloud;
  cloud.points = points;
  cloud.channels = {{"lfs", prior.lfs}, {"weight", prior.weight}};
  save_point_cloud(cloud, path);
}

void write_sampled_ply(const std::vector<Vec3>& points, const std::vector<std::size_t>& picked,
                       const std::string& path) {
  PointCloud cloud;
  cloud.points.reserve(picked.size());
  for (std::size_t index : picked) cloud.points.push_back(points.at(index));
  save_point_cloud(cloud, path);
}

void write_timings_csv(const std::vector<StageTimings>& runs, const std::string& path) {
  if (runs.empty()) throw EmptySet("no timing runs to write");
  auto stat_row = [&](const std::string& stage, auto member) {
    std::vector<double> values;
    values.reserve(runs.size());
    for (const StageTimings& t : runs) values.push_back(t.*member);
    std::sort(values.begin(), values.end());
    double median = values.size() % 2
                        ? values[values.size() / 2]
                        : 0.5 * (values[values.size() / 2 - 1] + values[values.size() / 2]);
    return stage + ',' + fmt_double(values.front()) + ',' + fmt_double(median) + ',' +
           fmt_double(values.back());
  };

  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path);
  file << "# machine: " << std::thread::hardware_concurrency() << " hardware threads\r\n";
  file << "stage,min_seconds,median_seconds,max_seconds\r\n";
  file << stat_row("sampling", &StageTimings::sampling) << "\r\n";
  file << stat_row("occupancy", &StageTimings::occupancy) << "\r\n";
  file << stat_row("udf", &StageTimings::udf) << "\r\n";
  file << stat_row("knn", &StageTimings::knn) << "\r\n";
  file << stat_row("dilation", &StageTimings::dilation) << "\r\n";
  file << stat_row("selection", &StageTimings::selection) << "\r\n";
}

PipelineResult skeletonize_to_dir(const PipelineConfig& config) {
  PipelineResult result = run_skeletonize(config);
  if (config.out_dir.empty()) return result;
  std::filesystem::create_directories(config.out_dir);
  auto in_dir = [&](const std::string& name) {
    return (std::filesystem::path(config.out_dir) / name).string();
  };
  if (config.emit.skeleton_ply) write_skeleton_ply(result.skeleton, in_dir("skeleton.ply"));
  if (config.emit.residual_histogram_csv)
    write_residual_histogram_csv(result.skeleton, in_dir("residual_histogram.csv"));
  if (config.emit.metrics_json)
    write_metadata_json(config, result, in_dir("metadata.json"));
  if (config.emit.lfs_heatmap_ply) {
    SampleResult sampled = run_sample(config, result);
    write_lfs_heatmap_ply(sampled.surface_points, sampled.prior, in_dir("lfs_heatmap.ply"));
  }
  if (config.emit.timings_csv) write_timings_csv({result.timings}, in_dir("timings.csv"));
  return result;
}

}  // namespace mskel
