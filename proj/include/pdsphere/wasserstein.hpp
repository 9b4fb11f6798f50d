#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "pdsphere/persistence.hpp"

namespace pdsphere {

struct Matching {
  static constexpr std::size_t kDiagonal = std::numeric_limits<std::size_t>::max();

  // (index in X or kDiagonal, index in Y or kDiagonal). X points come first
  // in index order, followed by the Y points sent to the diagonal.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  // Assignment objective: sum of L1 distances for q = 1, sum of squared L2
  // distances for q = 2.
  double cost = 0.0;
};

struct WassersteinResult {
  double distance = 0.0;
  Matching matching;
};

// Minimum-cost perfect assignment for a square cost matrix (Hungarian method
// with potentials, O(n^3)). Returns the column assigned to each row.
std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost);

// L_q Wasserstein distance (q in {1, 2}) with diagonal augmentation. Both
// diagrams must be free of essential bars.
WassersteinResult wasserstein(const PersistenceDiagram& x, const PersistenceDiagram& y, int q);

// Exhaustive oracle for |X| + |Y| <= 8.
double brute_force_wasserstein(const PersistenceDiagram& x, const PersistenceDiagram& y, int q);

// Objective of a given matching, summed in the canonical pair order.
double matching_cost(const PersistenceDiagram& x, const PersistenceDiagram& y,
                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs, int q);

// Point-wise interpolation along an optimal L2 matching. Points that land on
// the diagonal are dropped.
PersistenceDiagram alexandrov_geodesic(const PersistenceDiagram& x, const PersistenceDiagram& y,
                                       double s);

}  // namespace pdsphere
