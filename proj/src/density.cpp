#include "pdsphere/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdsphere/error.hpp"

namespace pdsphere {
namespace {

void check_square(const Grid& grid) {
  if (grid.rows() != grid.cols()) throw ShapeError("density grid must be square");
  if (grid.rows() < 2) throw ParameterError("density grid resolution must be at least 2");
}

void check_nonnegative(const Grid& grid, const char* what) {
  if (!grid.allFinite()) throw ParameterError(std::string(what) + " has non-finite cells");
  if ((grid.array() < 0.0).any()) throw RangeError(std::string(what) + " has negative cells");
}

}  // namespace

double grid_inner(const Grid& a, const Grid& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("grid resolutions differ (" + std::to_string(a.rows()) + " vs " +
                     std::to_string(b.rows()) + ")");
  }
  const double weight = 1.0 / static_cast<double>(a.size());
  return a.cwiseProduct(b).sum() * weight;
}

PersistencePdf::PersistencePdf(Grid grid, double sigma, std::optional<double> scale)
    : grid_(std::move(grid)), sigma_(sigma), scale_(scale) {
  check_square(grid_);
  check_nonnegative(grid_, "pdf");
  const double total = grid_.sum();
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw RangeError("pdf cells sum to " + std::to_string(total) + ", expected 1");
  }
}

SqrtDensity::SqrtDensity(Grid grid, double sigma, std::optional<double> scale)
    : grid_(std::move(grid)), sigma_(sigma), scale_(scale) {
  check_square(grid_);
  check_nonnegative(grid_, "square-root density");
  const double norm2 = grid_inner(grid_, grid_);
  if (std::abs(norm2 - 1.0) > kNormTolerance) {
    throw RangeError("square-root density has squared norm " + std::to_string(norm2));
  }
}

SqrtDensity SqrtDensity::normalized(Grid grid, double sigma, std::optional<double> scale) {
  check_square(grid);
  check_nonnegative(grid, "square-root density");
  const double norm = std::sqrt(grid_inner(grid, grid));
  if (!(norm > 0.0)) throw RangeError("cannot normalize an all-zero grid");
  grid /= norm;
  return SqrtDensity(std::move(grid), sigma, scale);
}

PersistencePdf kde(const PersistenceDiagram& diagram, double sigma, int grid) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("sigma must be positive");
  if (grid < 2) throw ParameterError("grid resolution K must be at least 2");
  if (!diagram.essential.empty()) {
    throw ParameterError("diagram has essential bars; normalize it before density estimation");
  }
  if (diagram.pairs.empty()) throw EmptyDiagramError("cannot estimate a density from an empty diagram");
  for (const auto& p : diagram.pairs) {
    if (!(p.birth >= 0.0 && p.birth <= 1.0 && p.death >= 0.0 && p.death <= 1.0)) {
      throw RangeError("diagram coordinates must lie in [0,1]; normalize first");
    }
  }

  const Eigen::Index k = grid;
  Eigen::VectorXd centers(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    centers[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(k);
  }
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);

  // The isotropic kernel factorises, so each point is an outer product.
  // Accumulating in sorted order makes the grid bitwise independent of the
  // order the points were listed in.
  auto points = diagram.pairs;
  std::sort(points.begin(), points.end());
  Grid out = Grid::Zero(k, k);
  Eigen::VectorXd gx(k);
  Eigen::VectorXd gy(k);
  for (const auto& p : points) {
    gx = (-(centers.array() - p.birth).square() * inv_two_var).exp();
    gy = (-(centers.array() - p.death).square() * inv_two_var).exp();
    out.noalias() += gy * gx.transpose();
  }
  const double total = out.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ParameterError("kernel mass underflows on the grid; increase sigma or K");
  }
  out /= total;
  return PersistencePdf(std::move(out), sigma, diagram.scale);
}

SqrtDensity sqrt_transform(const PersistencePdf& pdf) {
  return SqrtDensity::normalized(pdf.grid().cwiseSqrt(), pdf.sigma(), pdf.scale());
}

PersistencePdf to_pdf(const SqrtDensity& psi) {
  Grid p = psi.grid().cwiseProduct(psi.grid());
  p /= p.sum();
  return PersistencePdf(std::move(p), psi.sigma(), psi.scale());
}

}  // namespace pdsphere
