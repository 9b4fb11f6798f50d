#include "pdsphere/sphere.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>

#include "pdsphere/error.hpp"

namespace pdsphere {
namespace {

std::atomic<std::uint64_t> g_wide_clamps{0};
std::atomic<std::uint64_t> g_orthogonal_logs{0};

constexpr double kTangencyTolerance = 1e-8;

void check_same_resolution(const Grid& a, const Grid& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("grid resolutions differ (" + std::to_string(a.rows()) + " vs " +
                     std::to_string(b.rows()) + ")");
  }
}

double clamped_arccos(double c) {
  if (std::abs(c) > 1.0 + 1e-12) g_wide_clamps.fetch_add(1, std::memory_order_relaxed);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace

SphereDiagnostics sphere_diagnostics() {
  return {g_wide_clamps.load(), g_orthogonal_logs.load()};
}

TangentVector::TangentVector(SqrtDensity base, Grid values)
    : base_(std::move(base)), values_(std::move(values)) {
  check_same_resolution(base_.grid(), values_);
  if (!values_.allFinite()) throw ParameterError("tangent vector has non-finite cells");
  const double along = inner(base_.grid(), values_);
  if (std::abs(along) > kTangencyTolerance * std::max(1.0, norm())) {
    throw RangeError("vector is not tangent to its base (<base, v> = " + std::to_string(along) +
                     ")");
  }
}

TangentVector TangentVector::project(SqrtDensity base, Grid values) {
  check_same_resolution(base.grid(), values);
  values -= inner(base.grid(), values) * base.grid();
  return TangentVector(std::move(base), std::move(values));
}

TangentVector TangentVector::zero(SqrtDensity base) {
  Grid values = Grid::Zero(base.resolution(), base.resolution());
  return TangentVector(std::move(base), std::move(values));
}

double TangentVector::norm() const { return std::sqrt(inner(values_, values_)); }

TangentVector TangentVector::scaled(double factor) const {
  return TangentVector(base_, values_ * factor);
}

double distance(const SqrtDensity& a, const SqrtDensity& b) {
  return clamped_arccos(inner(a.grid(), b.grid()));
}

ExpMapResult exp_map(const SqrtDensity& psi, const TangentVector& v) {
  check_same_resolution(psi.grid(), v.values());
  if (v.base().grid() != psi.grid()) {
    throw ParameterError("tangent vector is based at a different point");
  }
  const double n = v.norm();
  if (!(n < std::numbers::pi)) {
    throw ParameterError("tangent vector norm " + std::to_string(n) +
                         " exceeds the injectivity radius pi");
  }
  if (n == 0.0) return {psi, 0.0};

  Grid out = std::cos(n) * psi.grid() + (std::sin(n) / n) * v.values();
  const double weight = 1.0 / static_cast<double>(out.size());
  const double clamped = out.cwiseMin(0.0).squaredNorm() * weight;
  out = out.cwiseMax(0.0);
  return {SqrtDensity::normalized(std::move(out), psi.sigma(), psi.scale()), clamped};
}

TangentVector log_map(const SqrtDensity& from, const SqrtDensity& to) {
  check_same_resolution(from.grid(), to.grid());
  if (from.grid() == to.grid()) return TangentVector::zero(from);

  const double c = inner(from.grid(), to.grid());
  Grid u = to.grid() - c * from.grid();
  u -= inner(from.grid(), u) * from.grid();
  const double un = std::sqrt(inner(u, u));
  if (un == 0.0) return TangentVector::zero(from);
  if (c <= 0.0) g_orthogonal_logs.fetch_add(1, std::memory_order_relaxed);
  const double theta = clamped_arccos(c);
  return TangentVector(from, u * (theta / un));
}

SqrtDensity geodesic(const SqrtDensity& a, const SqrtDensity& b, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw ParameterError("geodesic parameter s must lie in [0,1]");
  if (s == 0.0) return a;
  return exp_map(a, log_map(a, b).scaled(s)).point;
}

SqrtDensity extrinsic_mean(std::span<const SqrtDensity> set) {
  if (set.empty()) throw ParameterError("cannot average an empty set");
  Grid sum = set.front().grid();
  for (std::size_t i = 1; i < set.size(); ++i) {
    check_same_resolution(sum, set[i].grid());
    sum += set[i].grid();
  }
  sum /= static_cast<double>(set.size());
  if (sum.isZero(0.0)) throw RangeError("Euclidean mean is the zero grid");
  return SqrtDensity::normalized(std::move(sum), set.front().sigma(), set.front().scale());
}

namespace {

// Removes components along the mean and the accepted directions, then
// normalizes. Returns false when too little is left.
bool orthonormalize(Grid& g, const SqrtDensity& mean, const std::vector<TangentVector>& accepted,
                    double min_norm) {
  for (int pass = 0; pass < 2; ++pass) {
    g -= inner(mean.grid(), g) * mean.grid();
    for (const auto& c : accepted) g -= inner(c.values(), g) * c.values();
  }
  const double n = std::sqrt(inner(g, g));
  if (!(n > min_norm)) return false;
  g /= n;
  return true;
}

}  // namespace

PgaModel pga(std::span<const SqrtDensity> set, std::size_t components) {
  const std::size_t n = set.size();
  if (n < 2) throw ParameterError("PGA needs at least two densities");
  const Eigen::Index k = set.front().resolution();
  const auto cells = static_cast<std::size_t>(k * k);
  if (components < 1 || components > std::min(n - 1, cells)) {
    throw ParameterError("PGA component count must lie in [1, min(N-1, K^2)] = [1, " +
                         std::to_string(std::min(n - 1, cells)) + "]");
  }

  SqrtDensity mean = extrinsic_mean(set);
  Eigen::MatrixXd lifts(static_cast<Eigen::Index>(cells), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = log_map(mean, set[i]);
    lifts.col(static_cast<Eigen::Index>(i)) = v.values().reshaped();
  }
  const Eigen::VectorXd centre = lifts.rowwise().mean();
  lifts.colwise() -= centre;

  const double weight = 1.0 / static_cast<double>(cells);
  const Eigen::MatrixXd gram = (lifts.transpose() * lifts) * weight;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) throw RangeError("PGA eigendecomposition failed");

  const double top = std::max(eig.eigenvalues().maxCoeff(), 0.0);
  const double degenerate = 1e-12 * std::max(top, 1e-300) + 1e-300;
  PgaModel model{mean, {}, {}};
  std::size_t next_basis_cell = 0;
  for (std::size_t r = 0; r < components; ++r) {
    const Eigen::Index idx = static_cast<Eigen::Index>(n - 1 - r);
    const double lambda = std::max(eig.eigenvalues()[idx], 0.0);
    Grid g;
    bool ok = false;
    if (lambda > degenerate && lambda > 1e-24) {
      g = (lifts * eig.eigenvectors().col(idx)).reshaped(k, k);
      ok = orthonormalize(g, mean, model.components, 1e-6 * std::sqrt(lambda));
    }
    // No variance left: complete the basis with deterministic unit cells.
    while (!ok) {
      if (next_basis_cell >= cells) throw RangeError("could not complete the PGA basis");
      g = Grid::Zero(k, k);
      g.reshaped()[static_cast<Eigen::Index>(next_basis_cell++)] = static_cast<double>(k);
      ok = orthonormalize(g, mean, model.components, 0.5);
    }
    model.components.emplace_back(mean, std::move(g));
    model.variances.push_back(lambda / static_cast<double>(n - 1));
  }
  return model;
}

Eigen::VectorXd project_coords(const PgaModel& model, const SqrtDensity& psi) {
  check_same_resolution(model.mean.grid(), psi.grid());
  const auto v = log_map(model.mean, psi);
  Eigen::VectorXd coords(static_cast<Eigen::Index>(model.components.size()));
  for (std::size_t c = 0; c < model.components.size(); ++c) {
    coords[static_cast<Eigen::Index>(c)] = inner(v.values(), model.components[c].values());
  }
  return coords;
}

ExpMapResult reconstruct(const PgaModel& model, const Eigen::VectorXd& coords) {
  if (static_cast<std::size_t>(coords.size()) > model.components.size()) {
    throw ShapeError("more coordinates than PGA components");
  }
  Grid v = Grid::Zero(model.mean.resolution(), model.mean.resolution());
  for (Eigen::Index c = 0; c < coords.size(); ++c) {
    v += coords[c] * model.components[static_cast<std::size_t>(c)].values();
  }
  return exp_map(model.mean, TangentVector::project(model.mean, std::move(v)));
}

}  // namespace pdsphere
