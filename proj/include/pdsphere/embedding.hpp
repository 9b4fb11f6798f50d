#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pdsphere {

// Scalar time series. Non-empty, all samples finite.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> samples, std::string name = {});

  std::size_t size() const noexcept { return samples_.size(); }
  double operator[](std::size_t t) const { return samples_[t]; }
  const std::vector<double>& samples() const noexcept { return samples_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::vector<double> samples_;
  std::string name_;
};

// Ordered set of points in R^dim, stored row-major. Point order is the
// temporal index when the cloud comes from a delay embedding.
class PointCloud {
 public:
  PointCloud(std::size_t dim, std::vector<double> coords);
  static PointCloud from_points(const std::vector<std::vector<double>>& points);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return coords_.size() / dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  const std::vector<double>& coords() const noexcept { return coords_; }

  // Euclidean distance between points i and j.
  double distance(std::size_t i, std::size_t j) const;
  double diameter() const;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

// Method of delays: point t is [x(t), x(t+tau), ..., x(t+(m-1)tau)].
// Requires m, tau >= 1 and series.size() >= (m-1)*tau + 1.
PointCloud delay_embed(const TimeSeries& series, std::size_t m, std::size_t tau);

// Independent per-channel embedding of a multichannel recording.
std::vector<PointCloud> delay_embed_channels(std::span<const TimeSeries> channels,
                                             std::size_t m, std::size_t tau);

}  // namespace pdsphere
