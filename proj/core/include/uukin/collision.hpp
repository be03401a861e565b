#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uukin/distribution.hpp"

namespace uukin {

/// How f is evaluated at the off-grid fourth energy eps4 = eps1 + eps2 - eps3.
enum class Interpolation {
  Linear,    ///< linear in eps
  Entropic,  ///< linear in psi = ln(1 + c/f); exact for Bose-Einstein profiles
};

std::string to_string(Interpolation i);
Interpolation interpolation_from_string(const std::string& s);

struct CollisionConfig {
  double occupancy_c = 1.0;
  int quadrature_order = 2;
  Interpolation interpolation = Interpolation::Entropic;
  /// true: conservative weak-form discretization (exact discrete N and E balance).
  /// false: direct pointwise quadrature of the reduced integral at every node.
  bool symmetrize = true;
  /// Keep only the c^2 (f3 f4 - f1 f2) part of q: classical Boltzmann limit.
  bool classical = false;

  void validate() const;
};

struct MomentReport {
  double number = 0.0;   // N = 2 pi int f sqrt(eps) deps
  double energy = 0.0;   // E = 2 pi int f eps^{3/2} deps
  double entropy = 0.0;  // s = 2 pi int [(c+f)ln(c+f) - f ln f - c ln c] sqrt(eps) deps
};

/// Gain-minus-loss occupancy factor
///   q = f3 f4 (c + f1)(c + f2) - f1 f2 (c + f3)(c + f4).
/// Written in the factored form so that on-shell equilibrium quadruples cancel
/// to round-off.
inline double q_factor(double f1, double f2, double f3, double f4, double c) {
  return f3 * f4 * (c + f1) * (c + f2) - f1 * f2 * (c + f3) * (c + f4);
}

inline double q_factor_classical(double f1, double f2, double f3, double f4, double c) {
  return c * c * (f3 * f4 - f1 * f2);
}

/// df/dt at every node together with the discrete number and energy
/// functionals of that rate (sum_i w_i 2 pi eps_i^{k} sqrt(eps_i) rate_i).
struct CollisionRate {
  std::vector<double> rate;
  double number_rate = 0.0;
  double energy_rate = 0.0;
};

/// Isotropic Uehling-Uhlenbeck collision operator
///   df/dt(eps1) = 4 pi^3 / sqrt(eps1) * int int deps2 deps3 min(p1,p2,p3,p4) q,
/// eps4 = eps1 + eps2 - eps3 >= 0, p = sqrt(eps).
/// Throws DomainError for negative or non-finite f, or a grid starting at eps = 0.
CollisionRate collision_rhs_iso(const DistributionIso& f, const CollisionConfig& cfg);

/// f at an arbitrary energy with the given rule: f_0 below eps_0, 0 beyond eps_max.
double interpolate_f(const DistributionIso& f, double eps, Interpolation rule, double c);

MomentReport moments(const DistributionIso& f, double occupancy_c = 1.0, int quadrature_order = 2);

/// Entropy functional paired with a rate: ds/dt = sum_i w_i 2 pi sqrt(eps_i) ln((c+f_i)/f_i) rate_i.
double entropy_production(const DistributionIso& f, const std::vector<double>& rate, double occupancy_c = 1.0,
                          int quadrature_order = 2);

/// Bose-Einstein equilibrium f = c / (exp((eps - mu)/theta) - 1). Requires theta > 0, mu < 0, c > 0.
DistributionIso equilibrium(double theta, double mu, double c, GridPtr grid);

/// Monte-Carlo estimate of the full 9-D collision integral at momentum |p1|.
/// The momentum delta fixes p4, the energy delta fixes the relative-momentum
/// magnitude in the centre-of-mass frame; p2 and the scattering direction are
/// sampled. Each sample draws from a counter-based stream (seed, index), so the
/// estimate is independent of the worker count.
struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
};

struct MonteCarloOptions {
  double occupancy_c = 1.0;
  bool classical = false;
  /// Scale of the exponential proposal for eps2; <= 0 picks E/N of f.
  double proposal_scale = 0.0;
  /// Rule used to read f between nodes; beyond eps_max f is 0, below eps_0 it is f_0.
  Interpolation interpolation = Interpolation::Entropic;
};

MonteCarloEstimate collision_mc(const DistributionIso& f, double p1, std::uint64_t n_samples,
                                std::uint64_t seed, const MonteCarloOptions& opts = {});

}  // namespace uukin
