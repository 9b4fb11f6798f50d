#pragma once

// Shared generators and independent oracles for the test suites.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "pdsphere/density.hpp"
#include "pdsphere/embedding.hpp"
#include "pdsphere/persistence.hpp"

namespace pdsphere::testing {

inline PointCloud random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t dim = 2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> coords(n * dim);
  for (auto& c : coords) c = u(rng);
  return PointCloud(dim, std::move(coords));
}

inline PersistenceDiagram random_normalized_diagram(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PersistenceDiagram pd;
  pd.homology_dim = 1;
  pd.scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    if (a == b) continue;
    pd.pairs.push_back({std::min(a, b), std::max(a, b)});
  }
  return pd;
}

// Random smooth positive density: mixture of a few Gaussian bumps with
// random centres and widths, sampled on the K x K grid.
inline SqrtDensity random_density(std::mt19937_64& rng, int k = 64) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> bumps(1, 4);
  PersistenceDiagram pd;
  pd.scale = 1.0;
  const int n = bumps(rng);
  for (int i = 0; i < n; ++i) {
    const double b = 0.8 * u(rng);
    pd.pairs.push_back({b, b + (1.0 - b) * (0.05 + 0.95 * u(rng))});
  }
  const double sigma = 0.05 + 0.15 * u(rng);
  return sqrt_transform(kde(pd, sigma, k));
}

// Rank over Z/2 of a dense 0/1 matrix (rows x cols), Gaussian elimination.
inline int rank_mod2(std::vector<std::vector<int>> m) {
  int rank = 0;
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (m[r][c]) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[pivot], m[rank]);
    for (int r = 0; r < rows; ++r) {
      if (r != rank && m[r][c]) {
        for (int cc = c; cc < cols; ++cc) m[r][cc] ^= m[rank][cc];
      }
    }
    ++rank;
  }
  return rank;
}

// Betti numbers (b0, b1) of the Rips complex at scale r, by brute force:
// b0 = V - rank d1, b1 = E - rank d1 - rank d2.
inline std::pair<int, int> rips_betti(const PointCloud& cloud, double r) {
  const int n = static_cast<int>(cloud.size());
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (cloud.distance(i, j) <= r) edges.emplace_back(i, j);
  auto edge_index = [&](int a, int b) {
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e] == std::make_pair(a, b)) return static_cast<int>(e);
    return -1;
  };
  std::vector<std::vector<int>> d1(n, std::vector<int>(edges.size(), 0));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    d1[edges[e].first][e] = 1;
    d1[edges[e].second][e] = 1;
  }
  std::vector<std::vector<int>> d2_cols;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const int a = edge_index(i, j), b = edge_index(i, k), c = edge_index(j, k);
        if (a < 0 || b < 0 || c < 0) continue;
        std::vector<int> col(edges.size(), 0);
        col[a] = col[b] = col[c] = 1;
        d2_cols.push_back(col);
      }
  std::vector<std::vector<int>> d2(edges.size(), std::vector<int>(d2_cols.size(), 0));
  for (std::size_t t = 0; t < d2_cols.size(); ++t)
    for (std::size_t e = 0; e < edges.size(); ++e) d2[e][t] = d2_cols[t][e];
  const int r1 = edges.empty() ? 0 : rank_mod2(d1);
  const int r2 = d2_cols.empty() ? 0 : rank_mod2(d2);
  return {n - r1, static_cast<int>(edges.size()) - r1 - r2};
}

// Number of bars alive at scale r (born <= r, dying after r).
inline int bars_alive(const PersistenceDiagram& pd, double r) {
  int count = 0;
  for (const auto& p : pd.pairs) count += (p.birth <= r && r < p.death) ? 1 : 0;
  for (double b : pd.essential) count += b <= r ? 1 : 0;
  return count;
}

}  // namespace pdsphere::testing
