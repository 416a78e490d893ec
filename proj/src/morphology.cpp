#include "mskel/morphology.hpp"

#include <algorithm>
#include <numeric>

#include "mskel/errors.hpp"
#include "mskel/parallel.hpp"

namespace mskel {

std::vector<double> dilate(const std::vector<double>& field, const KnnGraph& graph,
                           int threads) {
  if (field.size() != graph.point_count)
    throw LengthMismatch("field length does not match graph point count");
  const std::size_t row = static_cast<std::size_t>(graph.k) + 1;
  std::vector<double> out(field.size());
  parallel_for(field.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint32_t* neighbors = graph.flat.data() + i * row;
      double m = field[neighbors[0]];
      for (std::size_t s = 1; s < row; ++s) m = std::max(m, field[neighbors[s]]);
      out[i] = m;
    }
  });
  return out;
}

std::vector<double> dilation_residual(const std::vector<double>& field,
                                      const std::vector<double>& dilated) {
  if (field.size() != dilated.size())
    throw LengthMismatch("field and dilated field differ in length");
  std::vector<double> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) out[i] = dilated[i] - field[i];
  return out;
}

Skeleton select_skeleton(const VolumeSamples& samples, const std::vector<double>& residuals,
                         std::size_t n) {
  if (samples.udf.size() != samples.size())
    throw LengthMismatch("samples carry no distance values");
  if (residuals.size() != samples.size())
    throw LengthMismatch("residual field does not match sample count");
  if (n > samples.size())
    throw SubsetTooLarge("requested " + std::to_string(n) + " spheres from " +
                         std::to_string(samples.size()) + " samples");

  std::vector<std::uint32_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0u);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                    [&](std::uint32_t a, std::uint32_t b) {
                      if (residuals[a] != residuals[b]) return residuals[a] < residuals[b];
                      return a < b;
                    });

  Skeleton skeleton;
  skeleton.params.n = n;
  skeleton.params.seed = samples.seed;
  skeleton.params.box_count = samples.box_count;
  skeleton.params.grid_resolution = samples.grid_resolution;
  skeleton.spheres.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t src = order[i];
    skeleton.spheres.push_back(
        {samples.points[src], samples.udf[src], residuals[src], src});
  }
  return skeleton;
}

std::vector<bool> maximal_ball_oracle(const VolumeSamples& samples) {
  if (samples.udf.size() != samples.size())
    throw LengthMismatch("samples carry no distance values");
  const std::size_t count = samples.size();
  std::vector<bool> maximal(count, true);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      if (j == i) continue;
      double d = distance(samples.points[i], samples.points[j]);
      if (d + samples.udf[i] <= samples.udf[j] + 1e-12) {
        maximal[i] = false;
        break;
      }
    }
  }
  return maximal;
}

}  // namespace mskel
