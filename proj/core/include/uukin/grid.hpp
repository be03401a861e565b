#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace uukin {

enum class GridSpacing { Uniform, Geometric };

std::string to_string(GridSpacing s);
GridSpacing grid_spacing_from_string(const std::string& s);

/// Radial grid in dimensionless energy eps = p^2. Nodes are strictly
/// increasing, eps_0 >= 0, and the integration domain is [0, eps_max]
/// (the interval [0, eps_0] is lumped into the first node).
class RadialGrid {
 public:
  static std::shared_ptr<const RadialGrid> geometric(std::size_t n, double eps_min, double eps_max);
  static std::shared_ptr<const RadialGrid> uniform(std::size_t n, double eps_min, double eps_max);
  /// Arbitrary strictly increasing nodes.
  static std::shared_ptr<const RadialGrid> from_nodes(std::vector<double> nodes);

  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double eps_min() const { return nodes_.front(); }
  double eps_max() const { return nodes_.back(); }
  GridSpacing spacing() const { return spacing_; }

  /// Quadrature weights for integrals over [0, eps_max]. order 2 is the
  /// trapezoid rule, order 4 composite non-uniform Simpson.
  std::span<const double> weights(int order = 2) const;

  /// Largest l with nodes[l] <= eps, clamped to [0, size()-2].
  std::size_t locate(double eps) const;

  /// Linear-in-eps interpolation of node values: values[0] below eps_0, 0 above eps_max.
  double interpolate(std::span<const double> values, double eps) const;

 private:
  RadialGrid(std::vector<double> nodes, GridSpacing spacing);

  std::vector<double> nodes_;
  GridSpacing spacing_;
  std::vector<double> trapezoid_;
  std::vector<double> simpson_;
  double log_ratio_ = 0.0;  // geometric only
};

using GridPtr = std::shared_ptr<const RadialGrid>;

}  // namespace uukin
