#pragma once

#include <vector>

#include "mskel/vec.hpp"

namespace mskel {

// Sum of the two directed mean nearest-neighbor distances (L2, non-squared).
double chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b, int threads = 0);

// Max of the two directed max nearest-neighbor distances.
double hausdorff(const std::vector<Vec3>& a, const std::vector<Vec3>& b, int threads = 0);

}  // namespace mskel
