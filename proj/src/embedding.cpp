#include "pdsphere/embedding.hpp"

#include <cmath>
#include <string>

#include "pdsphere/error.hpp"

namespace pdsphere {

TimeSeries::TimeSeries(std::vector<double> samples, std::string name)
    : samples_(std::move(samples)), name_(std::move(name)) {
  if (samples_.empty()) throw LengthError("time series is empty");
  for (std::size_t t = 0; t < samples_.size(); ++t) {
    if (!std::isfinite(samples_[t])) {
      throw ParameterError("time series sample " + std::to_string(t) + " is not finite");
    }
  }
}

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw ParameterError("point cloud dimension must be positive");
  if (coords_.size() % dim_ != 0) {
    throw ShapeError("coordinate count is not a multiple of the point dimension");
  }
  for (double c : coords_) {
    if (!std::isfinite(c)) throw ParameterError("point cloud has a non-finite coordinate");
  }
}

PointCloud PointCloud::from_points(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw ParameterError("cannot infer dimension of an empty point list");
  const std::size_t dim = points.front().size();
  std::vector<double> coords;
  coords.reserve(points.size() * dim);
  for (const auto& p : points) {
    if (p.size() != dim) throw ShapeError("points have inconsistent dimensions");
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return PointCloud(dim, std::move(coords));
}

double PointCloud::distance(std::size_t i, std::size_t j) const {
  const double* a = coords_.data() + i * dim_;
  const double* b = coords_.data() + j * dim_;
  double sum = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double PointCloud::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) best = std::max(best, distance(i, j));
  }
  return best;
}

PointCloud delay_embed(const TimeSeries& series, std::size_t m, std::size_t tau) {
  if (m == 0) throw ParameterError("embedding dimension m must be positive");
  if (tau == 0) throw ParameterError("embedding delay tau must be positive");
  const std::size_t span = (m - 1) * tau;
  if (series.size() < span + 1) {
    throw LengthError("series of length " + std::to_string(series.size()) +
                      " is too short for m=" + std::to_string(m) +
                      ", tau=" + std::to_string(tau) + " (needs " +
                      std::to_string(span + 1) + ")");
  }
  const std::size_t count = series.size() - span;
  std::vector<double> coords;
  coords.reserve(count * m);
  for (std::size_t t = 0; t < count; ++t) {
    for (std::size_t j = 0; j < m; ++j) coords.push_back(series[t + j * tau]);
  }
  return PointCloud(m, std::move(coords));
}

std::vector<PointCloud> delay_embed_channels(std::span<const TimeSeries> channels,
                                             std::size_t m, std::size_t tau) {
  std::vector<PointCloud> clouds;
  clouds.reserve(channels.size());
  for (const auto& ch : channels) clouds.push_back(delay_embed(ch, m, tau));
  return clouds;
}

}  // namespace pdsphere
