#pragma once

#include <Eigen/Dense>
#include <optional>

#include "pdsphere/persistence.hpp"

namespace pdsphere {

// K x K grid over [0,1]^2. Row index is the death (y) cell, column index the
// birth (x) cell; cell (row j, col i) is centred at ((i+1/2)/K, (j+1/2)/K).
using Grid = Eigen::MatrixXd;

inline constexpr double kNormTolerance = 1e-9;

// Midpoint-rule integral of a.b over [0,1]^2 with weight 1/K^2.
double grid_inner(const Grid& a, const Grid& b);

// Discrete pdf: non-negative cells summing to 1.
class PersistencePdf {
 public:
  PersistencePdf(Grid grid, double sigma, std::optional<double> scale = std::nullopt);

  const Grid& grid() const noexcept { return grid_; }
  Eigen::Index resolution() const noexcept { return grid_.rows(); }
  double sigma() const noexcept { return sigma_; }
  std::optional<double> scale() const noexcept { return scale_; }

 private:
  Grid grid_;
  double sigma_;
  std::optional<double> scale_;
};

// Square-root density: non-negative cells with unit discrete norm, i.e. a
// point on the unit Hilbert sphere.
class SqrtDensity {
 public:
  SqrtDensity(Grid grid, double sigma, std::optional<double> scale = std::nullopt);

  // Rescales a non-negative, non-zero grid to unit norm.
  static SqrtDensity normalized(Grid grid, double sigma,
                                std::optional<double> scale = std::nullopt);

  const Grid& grid() const noexcept { return grid_; }
  Eigen::Index resolution() const noexcept { return grid_.rows(); }
  double sigma() const noexcept { return sigma_; }
  std::optional<double> scale() const noexcept { return scale_; }

 private:
  Grid grid_;
  double sigma_;
  std::optional<double> scale_;
};

struct DensityParams {
  int grid = 64;
  double sigma = 0.05;
};

// Equal-weight Gaussian KDE evaluated at cell centres, renormalized to sum 1.
PersistencePdf kde(const PersistenceDiagram& diagram, double sigma, int grid);

SqrtDensity sqrt_transform(const PersistencePdf& pdf);

// Inverse of sqrt_transform: p = psi^2 / K^2, renormalized.
PersistencePdf to_pdf(const SqrtDensity& psi);

inline SqrtDensity densify(const PersistenceDiagram& diagram, const DensityParams& params) {
  return sqrt_transform(kde(diagram, params.sigma, params.grid));
}

}  // namespace pdsphere
