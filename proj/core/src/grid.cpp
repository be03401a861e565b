#include "uukin/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uukin/error.hpp"

namespace uukin {

std::string to_string(GridSpacing s) { return s == GridSpacing::Uniform ? "uniform" : "geometric"; }

GridSpacing grid_spacing_from_string(const std::string& s) {
  if (s == "uniform") return GridSpacing::Uniform;
  if (s == "geometric") return GridSpacing::Geometric;
  throw DomainError("unknown grid spacing '" + s + "' (expected uniform|geometric)");
}

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> w(n, 0.0);
  w[0] = x[0] + 0.5 * (x[1] - x[0]);
  for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (x[i + 1] - x[i - 1]);
  w[n - 1] = 0.5 * (x[n - 1] - x[n - 2]);
  return w;
}

std::vector<double> simpson_weights(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> w(n, 0.0);
  w[0] = x[0];
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    const double s = h0 + h1;
    w[i] += s / 6.0 * (2.0 - h1 / h0);
    w[i + 1] += s * s * s / (6.0 * h0 * h1);
    w[i + 2] += s / 6.0 * (2.0 - h0 / h1);
  }
  if (i + 1 < n) {
    const double h = x[i + 1] - x[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

}  // namespace

RadialGrid::RadialGrid(std::vector<double> nodes, GridSpacing spacing)
    : nodes_(std::move(nodes)), spacing_(spacing) {
  if (nodes_.size() < 2) throw DomainError("radial grid needs at least 2 nodes");
  if (!(nodes_.front() >= 0.0)) throw DomainError("radial grid must start at eps >= 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) throw DomainError("radial grid nodes must be strictly increasing");
  }
  trapezoid_ = trapezoid_weights(nodes_);
  simpson_ = simpson_weights(nodes_);
  if (spacing_ == GridSpacing::Geometric) {
    log_ratio_ = std::log(nodes_[1] / nodes_[0]);
  }
}

GridPtr RadialGrid::geometric(std::size_t n, double eps_min, double eps_max) {
  if (n < 2) throw DomainError("grid.n must be >= 2");
  if (!(eps_min > 0.0) || !(eps_max > eps_min)) {
    throw DomainError("geometric grid needs 0 < eps_min < eps_max");
  }
  std::vector<double> x(n);
  const double lr = std::log(eps_max / eps_min) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = eps_min * std::exp(lr * static_cast<double>(i));
  x.front() = eps_min;
  x.back() = eps_max;
  return GridPtr(new RadialGrid(std::move(x), GridSpacing::Geometric));
}

GridPtr RadialGrid::uniform(std::size_t n, double eps_min, double eps_max) {
  if (n < 2) throw DomainError("grid.n must be >= 2");
  if (!(eps_min >= 0.0) || !(eps_max > eps_min)) {
    throw DomainError("uniform grid needs 0 <= eps_min < eps_max");
  }
  std::vector<double> x(n);
  const double h = (eps_max - eps_min) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = eps_min + h * static_cast<double>(i);
  x.back() = eps_max;
  return GridPtr(new RadialGrid(std::move(x), GridSpacing::Uniform));
}

GridPtr RadialGrid::from_nodes(std::vector<double> nodes) {
  return GridPtr(new RadialGrid(std::move(nodes), GridSpacing::Uniform));
}

std::span<const double> RadialGrid::weights(int order) const {
  if (order == 2) return trapezoid_;
  if (order == 4) return simpson_;
  std::ostringstream os;
  os << "unsupported quadrature order " << order << " (expected 2 or 4)";
  throw DomainError(os.str());
}

std::size_t RadialGrid::locate(double eps) const {
  const std::size_t last = nodes_.size() - 2;
  if (eps <= nodes_.front()) return 0;
  if (eps >= nodes_[last + 1]) return last;
  std::size_t l;
  if (spacing_ == GridSpacing::Geometric) {
    l = static_cast<std::size_t>(std::log(eps / nodes_.front()) / log_ratio_);
    l = std::min(l, last);
    // log round-off can put us one cell off
    while (l > 0 && nodes_[l] > eps) --l;
    while (l < last && nodes_[l + 1] <= eps) ++l;
  } else {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), eps);
    l = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    l = std::min(l, last);
  }
  return l;
}

double RadialGrid::interpolate(std::span<const double> values, double eps) const {
  if (eps <= nodes_.front()) return values[0];
  if (eps > nodes_.back()) return 0.0;
  const std::size_t l = locate(eps);
  const double t = (eps - nodes_[l]) / (nodes_[l + 1] - nodes_[l]);
  return (1.0 - t) * values[l] + t * values[l + 1];
}

}  // namespace uukin
