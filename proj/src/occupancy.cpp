#include "mskel/occupancy.hpp"

#include <chrono>

#include "mskel/errors.hpp"
#include "mskel/parallel.hpp"
#include "mskel/rng.hpp"

namespace mskel {

namespace {

constexpr int kMaxRetries = 8;
constexpr int kVoteTarget = 3;

// Candidates are produced and filtered in bounded chunks so a 10M-point run
// does not materialize the whole draw sequence.
constexpr std::size_t kChunkSize = 1 << 20;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int occupancy(const TriangleBvh& bvh, const Vec3& p, std::uint64_t seed) {
  Rng rng = Rng::for_point(seed, p);
  RayCrossings first = bvh.count_ray_crossings(p, rng.next_unit_vector());
  if (!first.degenerate) return first.count & 1;

  // Grazing cast: gather a few clean casts along fresh directions and let
  // them vote.
  int votes[2] = {0, 0};
  for (int retry = 0; retry < kMaxRetries && votes[0] + votes[1] < kVoteTarget; ++retry) {
    RayCrossings cast = bvh.count_ray_crossings(p, rng.next_unit_vector());
    if (!cast.degenerate) ++votes[cast.count & 1];
  }
  if (votes[0] + votes[1] == 0 || votes[0] == votes[1])
    throw DegenerateOccupancy("all ray casts degenerate near point");
  return votes[1] > votes[0] ? 1 : 0;
}

VolumeSamples filter_inner_points(const TriangleBvh& bvh,
                                  const std::vector<Vec3>& candidates,
                                  std::uint64_t seed, int threads) {
  std::vector<std::uint8_t> keep(candidates.size(), 0);
  parallel_for(candidates.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      keep[i] = static_cast<std::uint8_t>(occupancy(bvh, candidates[i], seed));
  });
  VolumeSamples samples;
  samples.seed = seed;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (keep[i]) samples.points.push_back(candidates[i]);
  return samples;
}

Vec3 random_box_point(const Aabb& box, std::uint64_t seed, std::uint64_t index) {
  Rng rng = Rng::for_index(seed, index);
  Vec3 e = box.extent();
  return {box.lo.x + rng.next_double() * e.x,
          box.lo.y + rng.next_double() * e.y,
          box.lo.z + rng.next_double() * e.z};
}

VolumeSamples sample_inner_points_random(const TriangleMesh& mesh, const TriangleBvh& bvh,
                                         std::uint64_t box_count, std::uint64_t seed,
                                         int threads, SampleTimings* timings) {
  if (box_count < 1) throw InvalidConfig("box_count must be positive");
  const Aabb box = bounding_box(mesh, 0.0);

  VolumeSamples samples;
  samples.source = VolumeSamples::Source::kUniformRandom;
  samples.box_count = box_count;
  samples.seed = seed;

  SampleTimings local;
  std::vector<Vec3> chunk;
  std::vector<std::uint8_t> keep;
  for (std::uint64_t chunk_begin = 0; chunk_begin < box_count; chunk_begin += kChunkSize) {
    std::size_t n = static_cast<std::size_t>(
        std::min<std::uint64_t>(kChunkSize, box_count - chunk_begin));
    chunk.resize(n);
    keep.assign(n, 0);

    auto t0 = std::chrono::steady_clock::now();
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i)
        chunk[i] = random_box_point(box, seed, chunk_begin + i);
    });
    local.sampling_seconds += seconds_since(t0);

    auto t1 = std::chrono::steady_clock::now();
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i)
        keep[i] = static_cast<std::uint8_t>(occupancy(bvh, chunk[i], seed));
    });
    for (std::size_t i = 0; i < n; ++i)
      if (keep[i]) samples.points.push_back(chunk[i]);
    local.occupancy_seconds += seconds_since(t1);
  }
  if (timings) *timings = local;
  if (samples.points.empty())
    throw NoInnerPoints("no inner points among " + std::to_string(box_count) + " draws");
  return samples;
}

VolumeSamples sample_inner_points_grid(const TriangleMesh& mesh, const TriangleBvh& bvh,
                                       int resolution, std::uint64_t seed, int threads,
                                       SampleTimings* timings) {
  if (resolution < 2) throw InvalidConfig("grid resolution must be at least 2");
  const Aabb box = bounding_box(mesh, 0.0);
  const Vec3 step = box.extent() / static_cast<double>(resolution);

  auto t0 = std::chrono::steady_clock::now();
  const std::size_t res = static_cast<std::size_t>(resolution);
  const std::size_t total = res * res * res;
  std::vector<Vec3> lattice(total);
  for (std::size_t ix = 0; ix < res; ++ix)
    for (std::size_t iy = 0; iy < res; ++iy)
      for (std::size_t iz = 0; iz < res; ++iz)
        lattice[(ix * res + iy) * res + iz] =
            Vec3{box.lo.x + (static_cast<double>(ix) + 0.5) * step.x,
                 box.lo.y + (static_cast<double>(iy) + 0.5) * step.y,
                 box.lo.z + (static_cast<double>(iz) + 0.5) * step.z};
  double gen_seconds = seconds_since(t0);

  auto t1 = std::chrono::steady_clock::now();
  VolumeSamples samples = filter_inner_points(bvh, lattice, seed, threads);
  samples.source = VolumeSamples::Source::kGrid;
  samples.grid_resolution = resolution;
  if (timings) {
    timings->sampling_seconds = gen_seconds;
    timings->occupancy_seconds = seconds_since(t1);
  }
  if (samples.points.empty())
    throw NoInnerPoints("no lattice points inside the mesh at resolution " +
                        std::to_string(resolution));
  return samples;
}

}  // namespace mskel
