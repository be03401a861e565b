#pragma once

#include <span>
#include <string>
#include <vector>

#include "uukin/grid.hpp"

namespace uukin {

/// Isotropic one-particle distribution f(eps) sampled at the nodes of a radial grid.
class DistributionIso {
 public:
  DistributionIso() = default;
  DistributionIso(GridPtr grid, std::vector<double> values);
  /// f == 0 on the grid.
  static DistributionIso zeros(GridPtr grid);

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  double max() const;
  bool nonnegative() const;
  /// Linear-in-eps interpolation, f(eps_0) below the first node, 0 beyond eps_max.
  double at(double eps) const { return grid_->interpolate(values_, eps); }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Energy profile Theta(u) of the Bose-like initial family.
///   Exponential:     Theta(u) = exp(-u)
///   ExponentialPoly: Theta(u) = exp(-u) (1 + A u),  A >= 0
struct ThetaProfile {
  enum class Kind { Exponential, ExponentialPoly };
  Kind kind = Kind::Exponential;
  double poly_a = 0.0;

  double operator()(double u) const;
  bool monotone() const { return kind == Kind::Exponential || poly_a <= 1.0; }

  static ThetaProfile from_string(const std::string& id, double poly_a = 0.0);
  std::string id() const;
};

/// f0(eps) = z Theta(eps) / (1 - z Theta(eps)). Throws DomainError for z <= 0 and
/// for "condensed initial data" (z Theta >= 1 somewhere on the grid).
DistributionIso initial_bose(double z, const ThetaProfile& theta, GridPtr grid);

}  // namespace uukin
