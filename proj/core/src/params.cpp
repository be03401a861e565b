#include "uukin/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "uukin/error.hpp"

namespace uukin {

double PhysicalParams::coupling() const {
  return 4.0 * constants::pi * scattering_length * constants::hbar * constants::hbar / mass;
}

double PhysicalParams::number_density() const {
  return density > 0.0 ? density : 1.0 / (interparticle * interparticle * interparticle);
}

double PhysicalParams::temperature() const {
  if (temp_scale > 0.0) return temp_scale;
  return constants::hbar * constants::hbar /
         (2.0 * mass * constants::k_boltzmann * de_broglie * de_broglie);
}

void PhysicalParams::validate() const {
  auto require_positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "parameter " << name << " must be positive and finite (got " << v << ")";
      throw DomainError(os.str());
    }
  };
  require_positive(mass, "mass");
  require_positive(de_broglie, "de_broglie");
  require_positive(interparticle, "interparticle");
  if (!(scattering_length >= 0.0) || !std::isfinite(scattering_length)) {
    throw DomainError("parameter scattering_length must be >= 0");
  }
  if (density < 0.0 || temp_scale < 0.0) {
    throw DomainError("density and temp_scale must be >= 0 (0 selects the derived value)");
  }
  if (density > 0.0) {
    const double d3 = 1.0 / (interparticle * interparticle * interparticle);
    if (std::abs(density - d3) > 1e-12 * d3) {
      std::ostringstream os;
      os << "density " << density << " inconsistent with interparticle^-3 = " << d3;
      throw DomainError(os.str());
    }
  }
}

NonDimParams nondimensionalize(const PhysicalParams& params) {
  params.validate();
  const double lam = params.de_broglie;
  const double d = params.interparticle;

  NonDimParams out;
  out.epsilon = 8.0 * constants::pi * params.scattering_length * lam * lam / (d * d * d);
  out.length_scale = lam;
  out.momentum_scale = constants::hbar / lam;
  const double ratio = d / (2.0 * constants::pi * lam);
  out.occupancy_c = ratio * ratio * ratio;

  if (out.epsilon == 0.0) {
    out.free_gas = true;
    out.time_scale = std::numeric_limits<double>::infinity();
    out.warnings.emplace_back("scattering_length = 0: free gas, collision time scale is infinite");
  } else {
    out.time_scale = 2.0 * params.mass * lam * lam / (constants::hbar * out.epsilon * out.epsilon);
  }
  if (out.epsilon >= kWeakCouplingWarnThreshold) {
    out.weak_coupling_strained = true;
    std::ostringstream os;
    os << "epsilon = " << out.epsilon << " >= " << kWeakCouplingWarnThreshold
       << ": weak-coupling assumption strained";
    out.warnings.push_back(os.str());
  }
  return out;
}

}  // namespace uukin
