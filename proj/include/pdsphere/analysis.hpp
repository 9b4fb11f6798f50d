#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdsphere/density.hpp"
#include "pdsphere/persistence.hpp"
#include "pdsphere/sphere.hpp"

namespace pdsphere {

enum class Metric { kHilbert, kW1, kW2 };

Metric parse_metric(const std::string& text);
const char* to_string(Metric metric) noexcept;

struct DistanceMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;  // symmetric, zero diagonal
  Metric metric = Metric::kHilbert;
};

struct PersistenceParams {
  double max_scale = std::numeric_limits<double>::infinity();
  bool temporal_links = false;
};

// H0 and H1 of a cloud through the Rips reduction.
DiagramPair diagrams_of(const PointCloud& cloud, const PersistenceParams& params);

// Normalizes every diagram with one shared scale (dataset-global maximum
// unless given) and keeps the selected homology.
struct NormalizedSet {
  std::vector<PersistenceDiagram> diagrams;
  double scale = 1.0;
};
NormalizedSet normalize_all(std::span<const DiagramPair> diagrams, HomologySelection selection,
                            std::optional<double> scale = std::nullopt);

std::vector<SqrtDensity> densify_all(std::span<const PersistenceDiagram> diagrams,
                                     const DensityParams& params);

// Hilbert-sphere distances. All densities must share K, sigma and scale.
DistanceMatrix distance_matrix(std::span<const SqrtDensity> densities,
                               std::vector<std::string> labels);

// Any metric over normalized diagrams; hilbert densifies with params first.
DistanceMatrix distance_matrix(std::span<const PersistenceDiagram> diagrams,
                               std::vector<std::string> labels, Metric metric,
                               const DensityParams& params = {});

// Rows are queries, columns references.
Eigen::MatrixXd cross_distances(std::span<const SqrtDensity> queries,
                                std::span<const SqrtDensity> references);
Eigen::MatrixXd cross_distances(std::span<const PersistenceDiagram> queries,
                                std::span<const PersistenceDiagram> references, Metric metric);

// Element-wise mean of matrices over the same labels (per-channel
// aggregation).
DistanceMatrix aggregate_mean(std::span<const DistanceMatrix> matrices);

// Majority vote among the k nearest references. Ties go to the smallest
// summed neighbour distance, then to the lexicographically first label.
std::vector<std::string> knn_classify(const Eigen::MatrixXd& query_to_reference,
                                      std::span<const std::string> reference_labels, int k);

// Each item classified against all others.
std::vector<std::string> knn_leave_one_out(const DistanceMatrix& matrix,
                                           std::span<const std::string> labels, int k);

double accuracy(std::span<const std::string> predicted, std::span<const std::string> truth);

struct PgaFeatures {
  PgaModel model;
  Eigen::MatrixXd coords;  // one row per input density
};
PgaFeatures pga_features(std::span<const SqrtDensity> set, std::size_t components);

struct RegressionResult {
  Eigen::VectorXd predictions;
  double pearson_r = 0.0;
  bool ridge_used = false;
};

// Leave-one-out ordinary least squares with intercept. Rank-deficient folds
// fall back to ridge with lambda = 1e-8 * trace(A^T A) / p.
RegressionResult loo_regression(const Eigen::MatrixXd& features, const Eigen::VectorXd& scores);

// NaN when either input has zero variance.
double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct BenchParams {
  int n_points = 30;
  int grid = 64;
  double sigma = 0.05;
  int trials = 100;
  std::uint64_t seed = 1;
};

struct MetricTiming {
  double mean_seconds = 0.0;
  double stddev_seconds = 0.0;
  int repetitions = 1;  // evaluations averaged inside each timed sample
};

struct BenchReport {
  BenchParams params;
  std::size_t pairs = 0;
  MetricTiming hilbert;
  MetricTiming w1;
};

// Per-pair distance cost on seeded random diagrams. Densities are built
// before timing starts.
BenchReport benchmark(const BenchParams& params);

}  // namespace pdsphere
