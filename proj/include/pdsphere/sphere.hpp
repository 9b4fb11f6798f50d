#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "pdsphere/density.hpp"

namespace pdsphere {

// Element of the tangent space at base. Construction checks
// |<base, values>| <= 1e-8 * max(1, |values|).
class TangentVector {
 public:
  TangentVector(SqrtDensity base, Grid values);

  // Removes the component of values along base.
  static TangentVector project(SqrtDensity base, Grid values);
  static TangentVector zero(SqrtDensity base);

  const SqrtDensity& base() const noexcept { return base_; }
  const Grid& values() const noexcept { return values_; }
  double norm() const;

  TangentVector scaled(double factor) const;

 private:
  SqrtDensity base_;
  Grid values_;
};

struct ExpMapResult {
  SqrtDensity point;
  // Squared discrete norm of the negative cells zeroed before renormalizing.
  double clamped_mass = 0.0;
};

struct PgaModel {
  SqrtDensity mean;
  std::vector<TangentVector> components;  // orthonormal, tangent at mean
  std::vector<double> variances;          // nonincreasing
};

// Counters for numerically delicate cases; monotone over the process lifetime.
struct SphereDiagnostics {
  std::uint64_t wide_arccos_clamps = 0;  // |<a,b>| exceeded 1 by more than 1e-12
  std::uint64_t orthogonal_log_maps = 0;  // log map between orthogonal points
};
SphereDiagnostics sphere_diagnostics();

inline double inner(const Grid& a, const Grid& b) { return grid_inner(a, b); }

// Geodesic (great-circle) distance in radians, within [0, pi/2] for
// non-negative densities.
double distance(const SqrtDensity& a, const SqrtDensity& b);

// Requires v.base() == psi and |v| < pi. Cells pushed negative are clamped
// to zero and the result renormalized.
ExpMapResult exp_map(const SqrtDensity& psi, const TangentVector& v);

// Inverse of exp_map: the tangent vector at from pointing to `to` with norm
// distance(from, to).
TangentVector log_map(const SqrtDensity& from, const SqrtDensity& to);

// Constant-speed geodesic; s = 0 gives a, s = 1 gives b.
SqrtDensity geodesic(const SqrtDensity& a, const SqrtDensity& b, double s);

// Euclidean average projected back onto the sphere.
SqrtDensity extrinsic_mean(std::span<const SqrtDensity> set);

// Principal geodesic analysis: PCA of the lifts log_map(mean, psi_i), solved
// through the N x N Gram matrix.
PgaModel pga(std::span<const SqrtDensity> set, std::size_t components);

Eigen::VectorXd project_coords(const PgaModel& model, const SqrtDensity& psi);

// exp_map(mean, sum_k coords_k * component_k).
ExpMapResult reconstruct(const PgaModel& model, const Eigen::VectorXd& coords);

}  // namespace pdsphere
