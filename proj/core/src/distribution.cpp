#include "uukin/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uukin/error.hpp"

namespace uukin {

DistributionIso::DistributionIso(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw DomainError("distribution requires a grid");
  if (values_.size() != grid_->size()) {
    std::ostringstream os;
    os << "distribution has " << values_.size() << " values for a " << grid_->size() << "-node grid";
    throw DomainError(os.str());
  }
}

DistributionIso DistributionIso::zeros(GridPtr grid) {
  const std::size_t n = grid->size();
  return DistributionIso(std::move(grid), std::vector<double>(n, 0.0));
}

double DistributionIso::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool DistributionIso::nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0 && std::isfinite(v); });
}

double ThetaProfile::operator()(double u) const {
  const double e = std::exp(-u);
  return kind == Kind::Exponential ? e : e * (1.0 + poly_a * u);
}

ThetaProfile ThetaProfile::from_string(const std::string& id, double poly_a) {
  ThetaProfile t;
  if (id == "exp") {
    t.kind = Kind::Exponential;
  } else if (id == "exp_poly") {
    if (!(poly_a >= 0.0)) throw DomainError("theta.a must be >= 0");
    t.kind = Kind::ExponentialPoly;
    t.poly_a = poly_a;
  } else {
    throw DomainError("unknown theta profile '" + id + "' (expected exp|exp_poly)");
  }
  return t;
}

std::string ThetaProfile::id() const { return kind == Kind::Exponential ? "exp" : "exp_poly"; }

DistributionIso initial_bose(double z, const ThetaProfile& theta, GridPtr grid) {
  if (!(z > 0.0)) throw DomainError("fugacity z must be > 0");
  std::vector<double> f(grid->size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double zt = z * theta(grid->node(i));
    if (!(zt < 1.0)) {
      std::ostringstream os;
      os << "condensed initial data: z*Theta = " << zt << " >= 1 at eps = " << grid->node(i);
      throw DomainError(os.str());
    }
    f[i] = zt / (1.0 - zt);
  }
  return DistributionIso(std::move(grid), std::move(f));
}

}  // namespace uukin
