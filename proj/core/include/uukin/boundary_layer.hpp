#pragma once

#include <complex>
#include <vector>

#include "uukin/dynamics.hpp"
#include "uukin/params.hpp"

namespace uukin {

inline constexpr double kReferenceBeta = 1.069;

/// Exponents of the boundary-layer rescaling, all from one beta:
///   (T - t) = -eps^{time} tau, x = eps^{-space} X, p = eps^{momentum} P, F_k = eps^{k amplitude} H_k.
struct BoundaryLayerScales {
  double beta = kReferenceBeta;
  double time_exponent = 0.0;       // 2 / (2 beta + 1)
  double space_exponent = 0.0;      // 2 beta / (2 beta + 1), x factor is eps^{-space}
  double momentum_exponent = 0.0;   // 2 beta / (2 beta + 1)
  double amplitude_exponent = 0.0;  // (2 beta - 1) / (2 beta + 1)
  double physical_time_exponent = 0.0;  // 4 beta / (2 beta + 1)
  /// |time + physical_time - 2|, 0 up to one rounding.
  double identity_residual = 0.0;

  /// Physical layer scales. "reduced" uses the base a lambda^2 / d^3, "exact" uses eps = 8 pi a lambda^2 / d^3.
  double base_reduced = 0.0, base_exact = 0.0;
  double t_bl = 0.0, p_bl = 0.0, x_bl = 0.0;                    // s, kg m/s, m
  double t_bl_exact = 0.0, p_bl_exact = 0.0, x_bl_exact = 0.0;  // same, exact-eps variant
  /// p_bl x_bl / hbar (1 up to rounding) and the exponent sum of p and x (exactly 0).
  double px_over_hbar = 0.0;
  double px_exponent_sum = 0.0;
};

BoundaryLayerScales scale_exponents(double beta = kReferenceBeta);
BoundaryLayerScales physical_scales(const PhysicalParams& params, double beta = kReferenceBeta);

double correlation_onset_exponent(double beta = kReferenceBeta);
/// Nondimensional (T - t) at which interference sets in: eps^{2/(2 beta + 1)}.
double correlation_onset_time(double eps, double beta = kReferenceBeta);

struct CorrelationMagnitude {
  double ratio = 0.0;                // (T - t)^{2 beta - 1}
  double exponent = 0.0;             // 2 beta - 1
  double f1_squared_exponent = 0.0;  // 2 (beta - 1/2)
  bool exponents_equal = false;
};
CorrelationMagnitude correlation_magnitude(double t_minus_t, double beta = kReferenceBeta);

// ---------------------------------------------------------------- truncated hierarchy

/// Periodic 1-D separation grid, coordinate of index j is dx * (j < n/2 ? j : j - n) (FFT order).
struct BLGrid {
  std::size_t n = 0;
  double dx = 0.0;

  double coord(std::size_t j) const;
  double length() const { return dx * static_cast<double>(n); }
  std::size_t wrap(long long j) const;
  void validate() const;
};

/// Translation-invariant state: H1(X, Y) = h1(X - Y) and the cumulant
/// G2(x1, x2; y1, y2) = g2(x1 - y1, x2 - y1, y2 - y1), g2 index (u n + v) n + w.
struct HierarchyState {
  BLGrid grid;
  std::vector<std::complex<double>> h1;
  std::vector<std::complex<double>> g2;
  double tau = 0.0;

  HierarchyState() = default;
  explicit HierarchyState(const BLGrid& g, double tau0 = 0.0);
  std::size_t index(std::size_t u, std::size_t v, std::size_t w) const { return (u * grid.n + v) * grid.n + w; }
  double density() const { return h1.empty() ? 0.0 : h1[0].real(); }
  double g2_sup() const;
  /// max |G2(x1,x2;y1,y2) - G2(x2,x1;y2,y1)|
  double exchange_asymmetry() const;
};

struct AsymptoticOptions {
  /// tau0 must be <= this.
  double tau_threshold = -1.0;
  std::size_t n = 32;
  /// Box length in the similarity variable zeta = (X - Y)(-tau0)^beta; dx = box / (n (-tau0)^beta).
  double similarity_box = 0.0;  // 0 -> 4 pi / (half-width of Phi) from the profile
};

/// H1(zeta, tau0) = (-tau0)^{beta - 1/2} Psi(zeta (-tau0)^beta), G2 = 0.
HierarchyState asymptotic_data(const SelfSimilarProfile& profile, double tau0, double beta,
                               const AsymptoticOptions& opts = {});
HierarchyState asymptotic_data(const SelfSimilarProfile& profile, double tau0, double beta, const BLGrid& grid,
                               double tau_threshold = -1.0);

/// Self-similar profile from an analytic Phi on [xi_lo, xi_hi] (geometric nodes), with Psi tabulated.
SelfSimilarProfile analytic_profile(double (*phi)(double), double xi_lo, double xi_hi, std::size_t n = 400,
                                    std::size_t n_zeta = 256);

struct HierarchyRate {
  std::vector<std::complex<double>> dh1;
  std::vector<std::complex<double>> dg2;
};

/// d/dtau of (h1, g2) for the k <= 2 truncation with the cumulant closure G3 = 0.
/// `include_transport` = false drops the Laplacian term of the G2 equation.
HierarchyRate bl_rhs_truncated(const HierarchyState& state, bool include_transport = true);
/// Only the nonlocal part: A2 with the closure minus the time derivative of the factorized part of H2.
HierarchyRate bl_rhs_coupling(const HierarchyState& state);

/// Fourier symbol of the G2 transport operator on the grid, indexed like g2.
std::vector<double> transport_symbol(const BLGrid& grid);

struct HierarchyRunOptions {
  double dtau = 1e-3;
  std::size_t steps = 10;
};

struct HierarchyRun {
  std::vector<HierarchyState> states;  // initial and after every step
  double max_density_drift = 0.0;      // max |h1(0, tau) - h1(0, tau0)|
};

/// Integrating-factor Heun: exact exponential for the transport symbol, Heun for the coupling.
HierarchyRun evolve_hierarchy(const HierarchyState& s0, const HierarchyRunOptions& opts = {});

struct GrowthRate {
  double tau0 = 0.0;
  double rate = 0.0;       // sup |G2(tau0 + dtau)| / dtau from the evolution
  double source = 0.0;     // sup |dG2/dtau| at tau0
};

struct MatchingStudy {
  std::vector<GrowthRate> rows;
  double measured_slope = 0.0;   // d log rate / d log(-tau0)
  double predicted_slope = 0.0;  // 3 (beta - 1/2)
  double relative_error = 0.0;
};

MatchingStudy matching_study(const SelfSimilarProfile& profile, double beta, const std::vector<double>& tau0_list,
                             const AsymptoticOptions& opts = {}, const HierarchyRunOptions& run = {1e-4, 4});

// ---------------------------------------------------------------- phase space

struct WignerForm {
  std::vector<double> p;                   // momentum nodes 2 pi k / L in FFT order
  std::vector<std::complex<double>> phi1;  // (1/2pi) int e^{-i zeta P} h1(zeta) dzeta
  std::vector<std::complex<double>> phi2;  // 3-D transform of g2, (1/2pi)^3 dx^3 sum e^{-i k.r} g2
  BLGrid grid;
  double tau = 0.0;
};

WignerForm wigner_form(const HierarchyState& state);
HierarchyState wigner_inverse(const WignerForm& form);

}  // namespace uukin
