#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pdsphere/error.hpp"
#include "pdsphere/persistence.hpp"
#include "test_util.hpp"

namespace {

using namespace pdsphere;
using pdsphere::testing::random_cloud;

PointCloud unit_square() { return PointCloud::from_points({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

std::vector<PersistencePair> sorted(std::vector<PersistencePair> v) {
  std::sort(v.begin(), v.end());
  return v;
}

int count_dim(const Filtration& f, int dim) {
  return static_cast<int>(std::count_if(f.simplices.begin(), f.simplices.end(),
                                        [dim](const Simplex& s) { return s.dim == dim; }));
}

TEST(BuildRips, TwoPoints) {
  const auto cloud = PointCloud::from_points({{0.0, 0.0}, {0.4, 0.0}});
  const auto f = build_rips(cloud, 1.0, false);
  ASSERT_EQ(f.simplices.size(), 3u);
  EXPECT_EQ(f.simplices[0].dim, 0);
  EXPECT_EQ(f.simplices[1].dim, 0);
  EXPECT_EQ(f.simplices[0].birth, 0.0);
  EXPECT_EQ(f.simplices[2].dim, 1);
  EXPECT_DOUBLE_EQ(f.simplices[2].birth, 0.4);

  const auto temporal = build_rips(cloud, 1.0, true);
  ASSERT_EQ(temporal.simplices.size(), 3u);
  EXPECT_EQ(temporal.simplices[2].birth, 0.0);
}

TEST(BuildRips, TemporalEdgesIgnoreMaxScale) {
  const auto cloud = PointCloud::from_points({{0.0}, {5.0}, {10.0}});
  const auto f = build_rips(cloud, 1.0, true);
  EXPECT_EQ(count_dim(f, 1), 2);
  EXPECT_EQ(count_dim(f, 2), 0);
  EXPECT_EQ(count_dim(build_rips(cloud, 1.0, false), 1), 0);
}

TEST(BuildRips, UnitSquare) {
  const auto f = build_rips(unit_square(), 3.0, false);
  int sides = 0, diagonals = 0, triangles = 0;
  for (const auto& s : f.simplices) {
    if (s.dim == 1 && s.birth == 1.0) ++sides;
    if (s.dim == 1 && s.birth == std::sqrt(2.0)) ++diagonals;
    if (s.dim == 2) {
      EXPECT_EQ(s.birth, std::sqrt(2.0));
      ++triangles;
    }
  }
  EXPECT_EQ(sides, 4);
  EXPECT_EQ(diagonals, 2);
  EXPECT_EQ(triangles, 4);
}

TEST(BuildRips, Errors) {
  EXPECT_THROW(build_rips(PointCloud(2, {}), 1.0, false), ParameterError);
  EXPECT_THROW(build_rips(unit_square(), 0.0, false), ParameterError);
  EXPECT_THROW(h0_unionfind(PointCloud(2, {}), false), ParameterError);
}

TEST(BuildRips, FiltrationInvariantsHoldOnRandomClouds) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto cloud = random_cloud(rng, 4 + trial % 12, 1 + trial % 3);
    const auto f = build_rips(cloud, 0.2 + 0.05 * trial, trial % 2 == 0);
    EXPECT_NO_THROW(validate_filtration(f));
  }
}

TEST(ComputePersistence, TwoPoints) {
  const auto cloud = PointCloud::from_points({{0.0, 0.0}, {0.0, 0.7}});
  const auto d = compute_persistence(build_rips(cloud, 1.0, false));
  ASSERT_EQ(d.h0.pairs.size(), 1u);
  EXPECT_EQ(d.h0.pairs[0].birth, 0.0);
  EXPECT_DOUBLE_EQ(d.h0.pairs[0].death, 0.7);
  ASSERT_EQ(d.h0.essential.size(), 1u);
  EXPECT_EQ(d.h0.essential[0], 0.0);
  EXPECT_TRUE(d.h1.empty());
}

TEST(ComputePersistence, UnitSquareCycle) {
  const auto d = compute_persistence(build_rips(unit_square(), 3.0, false));
  ASSERT_EQ(d.h1.pairs.size(), 1u);
  EXPECT_EQ(d.h1.pairs[0].birth, 1.0);
  EXPECT_EQ(d.h1.pairs[0].death, std::sqrt(2.0));
  EXPECT_TRUE(d.h1.essential.empty());
}

TEST(ComputePersistence, TruncatedScaleLeavesEssentialCycle) {
  const auto d = compute_persistence(build_rips(unit_square(), 1.2, false));
  EXPECT_TRUE(d.h1.pairs.empty());
  ASSERT_EQ(d.h1.essential.size(), 1u);
  EXPECT_EQ(d.h1.essential[0], 1.0);
}

TEST(ComputePersistence, ConnectedCloudHasOneEssentialComponent) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial);
    const auto d = compute_persistence(build_rips(random_cloud(rng, n), 10.0, false));
    EXPECT_EQ(d.h0.essential.size(), 1u);
    EXPECT_EQ(d.h0.pairs.size(), n - 1);
    for (const auto& p : d.h0.pairs) EXPECT_EQ(p.birth, 0.0);
  }
}

TEST(ComputePersistence, MalformedFiltrations) {
  auto f = build_rips(unit_square(), 3.0, false);
  auto missing = f;
  missing.simplices.erase(std::find_if(missing.simplices.begin(), missing.simplices.end(),
                                       [](const Simplex& s) { return s.dim == 1; }));
  EXPECT_THROW(compute_persistence(missing), StructuralError);

  auto unsorted = f;
  std::reverse(unsorted.simplices.begin(), unsorted.simplices.end());
  EXPECT_THROW(compute_persistence(unsorted), StructuralError);

  Filtration early;
  early.simplices = {{{0, 0, 0}, 0, 0.5}, {{1, 0, 0}, 0, 0.5}, {{0, 1, 0}, 1, 0.5}};
  EXPECT_NO_THROW(compute_persistence(early));
  early.simplices[1].birth = 0.6;  // vertex after its coface
  std::swap(early.simplices[1], early.simplices[2]);
  EXPECT_THROW(compute_persistence(early), StructuralError);
}

// Independent oracle: Betti numbers from Z/2 ranks of the boundary matrices
// of the complex frozen at a scale must match the bars alive at that scale.
TEST(ComputePersistence, MatchesRankBettiNumbers) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> scale(0.05, 0.9);
  for (int trial = 0; trial < 40; ++trial) {
    const auto cloud = random_cloud(rng, 5 + trial % 6);
    const auto d = compute_persistence(build_rips(cloud, 2.0, false));
    for (int s = 0; s < 5; ++s) {
      const double r = scale(rng);
      const auto [b0, b1] = pdsphere::testing::rips_betti(cloud, r);
      EXPECT_EQ(pdsphere::testing::bars_alive(d.h0, r), b0) << "trial " << trial << " r " << r;
      EXPECT_EQ(pdsphere::testing::bars_alive(d.h1, r), b1) << "trial " << trial << " r " << r;
    }
  }
}

TEST(H0UnionFind, Examples) {
  const auto line = PointCloud::from_points({{0.0}, {1.0}, {2.0}});
  const auto pd = h0_unionfind(line, false);
  EXPECT_EQ(sorted(pd.pairs), (std::vector<PersistencePair>{{0, 1}, {0, 1}}));
  EXPECT_EQ(pd.essential.size(), 1u);

  const auto single = h0_unionfind(PointCloud::from_points({{4.0, 2.0}}), false);
  EXPECT_TRUE(single.pairs.empty());
  EXPECT_EQ(single.essential, std::vector<double>{0.0});
}

TEST(H0UnionFind, AgreesWithReduction) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::size_t> size(1, 25);
  for (int trial = 0; trial < 100; ++trial) {
    const bool temporal = trial % 3 == 0;
    const auto cloud = random_cloud(rng, size(rng), 1 + trial % 3);
    const auto reduced = compute_persistence(build_rips(cloud, 10.0, temporal)).h0;
    const auto fast = h0_unionfind(cloud, temporal);
    EXPECT_EQ(sorted(fast.pairs), sorted(reduced.pairs));
    EXPECT_EQ(fast.essential.size(), reduced.essential.size());
  }
}

TEST(Persistence, PermutationInvariance) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cloud = random_cloud(rng, 12);
    std::vector<std::size_t> order(cloud.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<double> coords;
    for (auto i : order) coords.insert(coords.end(), cloud[i].begin(), cloud[i].end());
    const PointCloud permuted(cloud.dim(), coords);
    const auto a = compute_persistence(build_rips(cloud, 2.0, false));
    const auto b = compute_persistence(build_rips(permuted, 2.0, false));
    EXPECT_EQ(sorted(a.h0.pairs), sorted(b.h0.pairs));
    EXPECT_EQ(sorted(a.h1.pairs), sorted(b.h1.pairs));
    EXPECT_EQ(a.h1.essential.size(), b.h1.essential.size());
  }
}

// Moving every point by at most eps shifts every edge length by at most
// 2 eps, hence every sorted H0 death as well.
TEST(Persistence, H0StabilityUnderPerturbation) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss;
  const double eps = 0.01;
  for (int trial = 0; trial < 30; ++trial) {
    const auto cloud = random_cloud(rng, 15);
    std::vector<double> coords = cloud.coords();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const double gx = gauss(rng), gy = gauss(rng);
      const double len = std::hypot(gx, gy);
      const double step = eps * std::uniform_real_distribution<double>(0, 1)(rng);
      coords[2 * i] += step * gx / len;
      coords[2 * i + 1] += step * gy / len;
    }
    const PointCloud moved(2, coords);
    auto deaths = [&](const PointCloud& c) {
      std::vector<double> d;
      for (const auto& p : compute_persistence(build_rips(c, 10.0, false)).h0.pairs) d.push_back(p.death);
      d.resize(c.size() - 1, 0.0);
      std::sort(d.begin(), d.end());
      return d;
    };
    const auto a = deaths(cloud);
    const auto b = deaths(moved);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LE(std::abs(a[i] - b[i]), 2 * eps + 1e-12);
  }
}

TEST(NormalizeDiagram, Examples) {
  PersistenceDiagram pd;
  pd.pairs = {{1.0, std::sqrt(2.0)}};
  const auto n = normalize_diagram(pd, 2.0);
  ASSERT_EQ(n.pairs.size(), 1u);
  EXPECT_EQ(n.pairs[0].birth, 0.5);
  EXPECT_NEAR(n.pairs[0].death, 0.7071, 1e-4);
  EXPECT_EQ(n.scale, 2.0);

  EXPECT_TRUE(normalize_diagram(PersistenceDiagram{}, 3.0).empty());

  PersistenceDiagram with_essential;
  with_essential.pairs = {{0.0, 3.0}};
  with_essential.essential = {0.5};
  const auto capped = normalize_diagram(with_essential, 4.0);
  EXPECT_EQ(capped.pairs, (std::vector<PersistencePair>{{0.0, 0.75}, {0.125, 1.0}}));
  EXPECT_TRUE(capped.essential.empty());
  EXPECT_NO_THROW(validate_diagram(capped));
}

TEST(NormalizeDiagram, Errors) {
  PersistenceDiagram pd;
  pd.pairs = {{0.0, 3.0}};
  EXPECT_THROW(normalize_diagram(pd, 2.0), RangeError);
  EXPECT_THROW(normalize_diagram(pd, 0.0), ParameterError);
  pd.essential = {5.0};
  EXPECT_THROW(normalize_diagram(pd, 4.0), RangeError);
}

TEST(NormalizeDiagram, EssentialBornAtScaleIsDropped) {
  PersistenceDiagram pd;
  pd.essential = {2.0};
  EXPECT_TRUE(normalize_diagram(pd, 2.0).empty());
}

TEST(GlobalScale, UsesLargestFiniteCoordinate) {
  PersistenceDiagram a, b;
  a.pairs = {{0.0, 1.5}};
  b.pairs = {{0.2, 0.9}};
  b.essential = {2.5};
  const std::vector<PersistenceDiagram> set = {a, b};
  EXPECT_EQ(global_scale(std::span<const PersistenceDiagram>(set)), 2.5);
  const std::vector<PersistenceDiagram> zeros = {PersistenceDiagram{{}, {}, {0.0}, {}}};
  EXPECT_EQ(global_scale(std::span<const PersistenceDiagram>(zeros)), 1.0);
}

TEST(SelectHomology, CombinesDimensions) {
  DiagramPair d;
  d.h0.pairs = {{0.0, 0.5}};
  d.h1.homology_dim = 1;
  d.h1.pairs = {{0.2, 0.4}};
  const auto all = select_homology(d, HomologySelection::kAll);
  EXPECT_EQ(all.homology_dim, kMixedDimensions);
  EXPECT_EQ(all.pairs.size(), 2u);
  EXPECT_EQ(select_homology(d, HomologySelection::kH1).pairs.size(), 1u);
  EXPECT_EQ(parse_homology_selection("all"), HomologySelection::kAll);
  EXPECT_THROW(parse_homology_selection("2"), ParameterError);
}

}  // namespace
