#pragma once

#include <string>
#include <vector>

namespace uukin {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J / K
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

/// Physical inputs for a weakly interacting Bose gas (SI units).
struct PhysicalParams {
  double mass = 0.0;               // kg
  double scattering_length = 0.0;  // m, s-wave
  double de_broglie = 0.0;         // lambda, m
  double interparticle = 0.0;      // d, m
  double density = 0.0;            // m^-3; 0 means "derive as d^-3"
  double temp_scale = 0.0;         // K; 0 means "derive from lambda"

  /// Contact coupling g = 4 pi a hbar^2 / m.
  double coupling() const;
  /// n, either as given or d^-3.
  double number_density() const;
  /// Temperature scale, either as given or hbar^2 / (2 m k_B lambda^2).
  double temperature() const;

  /// Throws DomainError when a length or the mass is nonpositive, a < 0,
  /// or a given density disagrees with d^-3 beyond 1e-12 relative.
  void validate() const;
};

/// Derived small parameter and scale factors of the dimensionless problem.
struct NonDimParams {
  double epsilon = 0.0;         // 8 pi a lambda^2 / d^3
  double time_scale = 0.0;      // 2 m lambda^2 / (hbar eps^2), s (inf when eps == 0)
  double length_scale = 0.0;    // lambda, m
  double momentum_scale = 0.0;  // hbar / lambda, kg m / s
  double occupancy_c = 0.0;     // (d / (2 pi lambda))^3
  bool free_gas = false;        // eps == 0: no collisions, kinetics degenerate
  bool weak_coupling_strained = false;  // eps >= 0.3
  std::vector<std::string> warnings;

  double to_physical_momentum(double p_dimensionless) const { return p_dimensionless * momentum_scale; }
  double to_dimensionless_momentum(double p_physical) const { return p_physical / momentum_scale; }
  double to_physical_time(double t_dimensionless) const { return t_dimensionless * time_scale; }
  double to_physical_length(double x_dimensionless) const { return x_dimensionless * length_scale; }
};

inline constexpr double kWeakCouplingWarnThreshold = 0.3;

NonDimParams nondimensionalize(const PhysicalParams& params);

}  // namespace uukin
