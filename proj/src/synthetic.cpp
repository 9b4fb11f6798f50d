#include "pdsphere/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "pdsphere/error.hpp"

namespace pdsphere {
namespace {

constexpr const char* kClassNames[] = {"circle", "two_circles", "noise"};

void noisy_circle(std::mt19937_64& rng, int count, double cx, double cy, double radius,
                  double noise, std::vector<double>& coords) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> jitter(0.0, noise);
  for (int i = 0; i < count; ++i) {
    const double t = angle(rng);
    coords.push_back(cx + radius * std::cos(t) + jitter(rng));
    coords.push_back(cy + radius * std::sin(t) + jitter(rng));
  }
}

}  // namespace

std::vector<LabeledCloud> synthetic_benchmark(const SyntheticParams& params) {
  if (params.classes < 1 || params.classes > 3) throw ParameterError("classes must be 1, 2 or 3");
  if (params.per_class < 1) throw ParameterError("per_class must be positive");
  if (params.min_points < 4 || params.max_points < params.min_points) {
    throw ParameterError("point count range must satisfy 4 <= min <= max");
  }
  if (!(params.noise >= 0.0)) throw ParameterError("noise must be non-negative");

  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<int> count(params.min_points, params.max_points);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  std::vector<LabeledCloud> out;
  for (int c = 0; c < params.classes; ++c) {
    for (int i = 0; i < params.per_class; ++i) {
      const int n = count(rng);
      std::vector<double> coords;
      coords.reserve(static_cast<std::size_t>(2 * n));
      switch (c) {
        case 0:
          noisy_circle(rng, n, 0.0, 0.0, 1.0, params.noise, coords);
          break;
        case 1:
          noisy_circle(rng, n / 2, -1.2, 0.0, 0.5, params.noise, coords);
          noisy_circle(rng, n - n / 2, 1.2, 0.0, 0.5, params.noise, coords);
          break;
        default:
          for (int k = 0; k < 2 * n; ++k) coords.push_back(unit(rng));
          break;
      }
      char id[64];
      std::snprintf(id, sizeof id, "%s_%03d", kClassNames[c], i);
      out.push_back({id, kClassNames[c], PointCloud(2, std::move(coords))});
    }
  }
  return out;
}

PersistenceDiagram random_diagram(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> birth(0.0, 0.95);
  std::uniform_real_distribution<double> fraction(0.02, 1.0);
  PersistenceDiagram pd;
  pd.homology_dim = 1;
  pd.scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = birth(rng);
    pd.pairs.push_back({b, b + (1.0 - b) * fraction(rng)});
  }
  return pd;
}

}  // namespace pdsphere
