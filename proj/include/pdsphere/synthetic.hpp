#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdsphere/embedding.hpp"
#include "pdsphere/persistence.hpp"

namespace pdsphere {

struct LabeledCloud {
  std::string id;
  std::string label;
  PointCloud cloud;
};

// Class "circle": one noisy circle. Class "two_circles": two disjoint noisy
// circles. Class "noise": uniform points in a square.
struct SyntheticParams {
  int classes = 3;
  int per_class = 30;
  std::uint64_t seed = 7;
  int min_points = 20;
  int max_points = 40;
  double noise = 0.05;
};

std::vector<LabeledCloud> synthetic_benchmark(const SyntheticParams& params);

// n random off-diagonal points inside [0,1]^2, marked as normalized.
PersistenceDiagram random_diagram(std::size_t n, std::uint64_t seed);

}  // namespace pdsphere
