#include "pdsphere/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

#include "pdsphere/error.hpp"
#include "pdsphere/synthetic.hpp"
#include "pdsphere/wasserstein.hpp"

namespace pdsphere {
namespace {

// Runs body(i, j) for every i < j, spread over the available cores. Each
// pair writes only its own matrix entries.
template <typename Body>
void for_each_pair(std::size_t n, Body body) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, pairs.size() / 64));
  if (workers <= 1) {
    for (const auto& [i, j] : pairs) body(i, j);
    return;
  }
  std::vector<std::jthread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t p = w; p < pairs.size(); p += workers) body(pairs[p].first, pairs[p].second);
    });
  }
}

void check_hilbert_compatible(std::span<const SqrtDensity> densities) {
  for (const auto& d : densities) {
    const auto& ref = densities.front();
    if (d.resolution() != ref.resolution() || d.sigma() != ref.sigma() ||
        d.scale() != ref.scale()) {
      throw ConfigurationError(
          "hilbert distances need densities with a common grid, sigma and normalization scale");
    }
  }
}

double diagram_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, Metric metric) {
  switch (metric) {
    case Metric::kW1: return wasserstein(a, b, 1).distance;
    case Metric::kW2: return wasserstein(a, b, 2).distance;
    case Metric::kHilbert: break;
  }
  throw ParameterError("hilbert distances are computed on densities");
}

struct Neighbour {
  double distance;
  std::size_t index;
};

std::string vote(std::vector<Neighbour>& neighbours, std::span<const std::string> labels, int k) {
  std::partial_sort(neighbours.begin(), neighbours.begin() + k, neighbours.end(),
                    [](const Neighbour& a, const Neighbour& b) {
                      return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
                    });
  std::map<std::string, std::pair<int, double>> tally;  // label -> (votes, summed distance)
  for (int r = 0; r < k; ++r) {
    auto& t = tally[labels[neighbours[static_cast<std::size_t>(r)].index]];
    t.first += 1;
    t.second += neighbours[static_cast<std::size_t>(r)].distance;
  }
  // std::map iterates labels in order, so strict comparisons keep the first.
  auto best = tally.begin();
  for (auto it = tally.begin(); it != tally.end(); ++it) {
    if (it->second.first > best->second.first ||
        (it->second.first == best->second.first && it->second.second < best->second.second)) {
      best = it;
    }
  }
  return best->first;
}

}  // namespace

Metric parse_metric(const std::string& text) {
  if (text == "hilbert") return Metric::kHilbert;
  if (text == "w1") return Metric::kW1;
  if (text == "w2") return Metric::kW2;
  throw ParameterError("metric must be hilbert, w1 or w2 (got '" + text + "')");
}

const char* to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::kHilbert: return "hilbert";
    case Metric::kW1: return "w1";
    case Metric::kW2: return "w2";
  }
  return "?";
}

DiagramPair diagrams_of(const PointCloud& cloud, const PersistenceParams& params) {
  return compute_persistence(build_rips(cloud, params.max_scale, params.temporal_links));
}

NormalizedSet normalize_all(std::span<const DiagramPair> diagrams, HomologySelection selection,
                            std::optional<double> scale) {
  NormalizedSet out;
  out.scale = scale.value_or(global_scale(diagrams));
  out.diagrams.reserve(diagrams.size());
  for (const auto& d : diagrams) {
    DiagramPair normalized{normalize_diagram(d.h0, out.scale), normalize_diagram(d.h1, out.scale)};
    out.diagrams.push_back(select_homology(normalized, selection));
  }
  return out;
}

std::vector<SqrtDensity> densify_all(std::span<const PersistenceDiagram> diagrams,
                                     const DensityParams& params) {
  std::vector<SqrtDensity> out;
  out.reserve(diagrams.size());
  for (std::size_t i = 0; i < diagrams.size(); ++i) {
    try {
      out.push_back(densify(diagrams[i], params));
    } catch (const EmptyDiagramError&) {
      throw EmptyDiagramError("diagram " + std::to_string(i) + " is empty");
    }
  }
  return out;
}

DistanceMatrix distance_matrix(std::span<const SqrtDensity> densities,
                               std::vector<std::string> labels) {
  const std::size_t n = densities.size();
  if (n < 2) throw ParameterError("distance matrix needs at least two items");
  if (labels.size() != n) throw ShapeError("label count does not match item count");
  check_hilbert_compatible(densities);
  DistanceMatrix out{std::move(labels), Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)), Metric::kHilbert};
  for_each_pair(n, [&](std::size_t i, std::size_t j) {
    const double d = distance(densities[i], densities[j]);
    out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
    out.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d;
  });
  return out;
}

DistanceMatrix distance_matrix(std::span<const PersistenceDiagram> diagrams,
                               std::vector<std::string> labels, Metric metric,
                               const DensityParams& params) {
  const std::size_t n = diagrams.size();
  if (n < 2) throw ParameterError("distance matrix needs at least two items");
  if (labels.size() != n) throw ShapeError("label count does not match item count");
  if (metric == Metric::kHilbert) {
    const auto densities = densify_all(diagrams, params);
    return distance_matrix(std::span<const SqrtDensity>(densities), std::move(labels));
  }
  DistanceMatrix out{std::move(labels), Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)), metric};
  for_each_pair(n, [&](std::size_t i, std::size_t j) {
    const double d = diagram_distance(diagrams[i], diagrams[j], metric);
    out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
    out.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d;
  });
  return out;
}

Eigen::MatrixXd cross_distances(std::span<const SqrtDensity> queries,
                                std::span<const SqrtDensity> references) {
  std::vector<SqrtDensity> all(queries.begin(), queries.end());
  all.insert(all.end(), references.begin(), references.end());
  if (!all.empty()) check_hilbert_compatible(all);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(queries.size()), static_cast<Eigen::Index>(references.size()));
  for (std::size_t i = 0; i < queries.size(); ++i) {
    for (std::size_t j = 0; j < references.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = distance(queries[i], references[j]);
    }
  }
  return out;
}

Eigen::MatrixXd cross_distances(std::span<const PersistenceDiagram> queries,
                                std::span<const PersistenceDiagram> references, Metric metric) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(queries.size()), static_cast<Eigen::Index>(references.size()));
  for (std::size_t i = 0; i < queries.size(); ++i) {
    for (std::size_t j = 0; j < references.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          diagram_distance(queries[i], references[j], metric);
    }
  }
  return out;
}

DistanceMatrix aggregate_mean(std::span<const DistanceMatrix> matrices) {
  if (matrices.empty()) throw ParameterError("nothing to aggregate");
  DistanceMatrix out = matrices.front();
  for (std::size_t c = 1; c < matrices.size(); ++c) {
    if (matrices[c].labels != out.labels || matrices[c].metric != out.metric) {
      throw ConfigurationError("aggregated matrices must share labels and metric");
    }
    out.values += matrices[c].values;
  }
  out.values /= static_cast<double>(matrices.size());
  return out;
}

std::vector<std::string> knn_classify(const Eigen::MatrixXd& query_to_reference,
                                      std::span<const std::string> reference_labels, int k) {
  const auto refs = static_cast<std::size_t>(query_to_reference.cols());
  if (refs == 0) throw ParameterError("k-NN needs a non-empty training set");
  if (reference_labels.size() != refs) throw ShapeError("label count does not match references");
  if (k < 1 || static_cast<std::size_t>(k) > refs) {
    throw ParameterError("k must lie in [1, training size]");
  }
  std::vector<std::string> out;
  std::vector<Neighbour> neighbours(refs);
  for (Eigen::Index q = 0; q < query_to_reference.rows(); ++q) {
    for (std::size_t j = 0; j < refs; ++j) {
      neighbours[j] = {query_to_reference(q, static_cast<Eigen::Index>(j)), j};
    }
    out.push_back(vote(neighbours, reference_labels, k));
  }
  return out;
}

std::vector<std::string> knn_leave_one_out(const DistanceMatrix& matrix,
                                           std::span<const std::string> labels, int k) {
  const auto n = static_cast<std::size_t>(matrix.values.rows());
  if (labels.size() != n) throw ShapeError("label count does not match matrix size");
  if (n < 2) throw ParameterError("leave-one-out needs at least two items");
  if (k < 1 || static_cast<std::size_t>(k) > n - 1) throw ParameterError("k must lie in [1, N-1]");
  std::vector<std::string> out;
  std::vector<Neighbour> neighbours;
  for (std::size_t i = 0; i < n; ++i) {
    neighbours.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) neighbours.push_back({matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), j});
    }
    out.push_back(vote(neighbours, labels, k));
  }
  return out;
}

double accuracy(std::span<const std::string> predicted, std::span<const std::string> truth) {
  if (predicted.size() != truth.size() || truth.empty()) {
    throw ShapeError("accuracy needs equally sized, non-empty label lists");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

PgaFeatures pga_features(std::span<const SqrtDensity> set, std::size_t components) {
  PgaFeatures out{pga(set, components), {}};
  out.coords.resize(static_cast<Eigen::Index>(set.size()), static_cast<Eigen::Index>(components));
  for (std::size_t i = 0; i < set.size(); ++i) {
    out.coords.row(static_cast<Eigen::Index>(i)) = project_coords(out.model, set[i]).transpose();
  }
  return out;
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() < 2) throw ShapeError("pearson needs equal sizes >= 2");
  const Eigen::ArrayXd da = a.array() - a.mean();
  const Eigen::ArrayXd db = b.array() - b.mean();
  const double sa = std::sqrt((da * da).sum());
  const double sb = std::sqrt((db * db).sum());
  if (sa == 0.0 || sb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (da * db).sum() / (sa * sb);
}

RegressionResult loo_regression(const Eigen::MatrixXd& features, const Eigen::VectorXd& scores) {
  const Eigen::Index n = features.rows();
  if (n != scores.size()) throw ShapeError("feature rows must match score count");
  if (n < 3) throw ParameterError("leave-one-out regression needs at least 3 samples");
  const Eigen::Index p = features.cols() + 1;

  Eigen::MatrixXd design(n, p);
  design.col(0).setOnes();
  design.rightCols(features.cols()) = features;

  RegressionResult out;
  out.predictions.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::MatrixXd a(n - 1, p);
    Eigen::VectorXd y(n - 1);
    for (Eigen::Index r = 0, row = 0; r < n; ++r) {
      if (r == i) continue;
      a.row(row) = design.row(r);
      y[row++] = scores[r];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::VectorXd beta;
    if (qr.rank() == p) {
      beta = qr.solve(y);
    } else {
      const Eigen::MatrixXd ata = a.transpose() * a;
      const double lambda = 1e-8 * std::max(ata.trace(), 1e-300) / static_cast<double>(p);
      beta = (ata + lambda * Eigen::MatrixXd::Identity(p, p)).ldlt().solve(a.transpose() * y);
      out.ridge_used = true;
    }
    out.predictions[i] = design.row(i).dot(beta);
  }
  out.pearson_r = pearson(out.predictions, scores);
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

// Mean and sample standard deviation of per-evaluation times.
MetricTiming summarize(const std::vector<double>& samples, int repetitions) {
  MetricTiming t;
  t.repetitions = repetitions;
  const double n = static_cast<double>(samples.size());
  t.mean_seconds = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double s : samples) ss += (s - t.mean_seconds) * (s - t.mean_seconds);
  t.stddev_seconds = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return t;
}

// Chooses how many evaluations to batch per timed sample so each sample
// spans at least ~2 milliseconds, long enough that scheduler hiccups
// average out over the run.
template <typename Fn>
int calibrate(Fn fn) {
  constexpr double kTarget = 2e-3;
  int reps = 1;
  for (;;) {
    const auto start = Clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (elapsed >= kTarget || reps >= (1 << 20)) return reps;
    reps *= 2;
  }
}

}  // namespace

BenchReport benchmark(const BenchParams& params) {
  if (params.trials < 10) throw ParameterError("benchmark needs at least 10 trials");
  if (params.n_points < 1) throw ParameterError("benchmark needs at least one point per diagram");

  const auto trials = static_cast<std::size_t>(params.trials);
  std::vector<PersistenceDiagram> diagrams;
  diagrams.reserve(2 * trials);
  for (std::size_t i = 0; i < 2 * trials; ++i) {
    diagrams.push_back(random_diagram(static_cast<std::size_t>(params.n_points), params.seed * 1000003u + i));
  }
  const DensityParams dp{params.grid, params.sigma};
  const auto densities = densify_all(diagrams, dp);

  volatile double sink = 0.0;
  const int hilbert_reps = calibrate([&] { sink = sink + distance(densities[0], densities[1]); });
  const int w1_reps = calibrate([&] { sink = sink + wasserstein(diagrams[0], diagrams[1], 1).distance; });

  std::vector<double> hilbert_samples;
  std::vector<double> w1_samples;
  for (std::size_t p = 0; p < trials; ++p) {
    const auto& da = diagrams[2 * p];
    const auto& db = diagrams[2 * p + 1];
    const auto& pa = densities[2 * p];
    const auto& pb = densities[2 * p + 1];

    auto start = Clock::now();
    for (int r = 0; r < w1_reps; ++r) sink = sink + wasserstein(da, db, 1).distance;
    w1_samples.push_back(std::chrono::duration<double>(Clock::now() - start).count() / w1_reps);

    start = Clock::now();
    for (int r = 0; r < hilbert_reps; ++r) sink = sink + distance(pa, pb);
    hilbert_samples.push_back(std::chrono::duration<double>(Clock::now() - start).count() / hilbert_reps);
  }

  BenchReport report;
  report.params = params;
  report.pairs = trials;
  report.hilbert = summarize(hilbert_samples, hilbert_reps);
  report.w1 = summarize(w1_samples, w1_reps);
  return report;
}

}  // namespace pdsphere
