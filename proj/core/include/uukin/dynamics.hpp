#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "uukin/collision.hpp"
#include "uukin/distribution.hpp"

namespace uukin {

/// Embedded Dormand-Prince 5(4) with PI step control.
struct StepControl {
  double rtol = 1e-8;
  double atol = 1e-12;
  double dt_initial = 1e-4;
  double dt_max = 0.1;
  /// Blow-up declaration thresholds.
  double dt_floor = 1e-12;
  double growth_ceiling = 1e6;  // max f >= growth_ceiling * initial max f
  /// Store every n-th accepted step (the last step is always stored).
  std::size_t snapshot_every = 1;
  std::size_t max_steps = 2000000;
  /// Resume state: previous error norm of the PI controller and the max f the
  /// growth ceiling refers to (0 -> max of the initial data).
  double resume_err_prev = 1.0;
  double reference_max = 0.0;

  void validate() const;
};

struct Snapshot {
  double t = 0.0;
  DistributionIso f;
  MomentReport moments;
  /// Controller state after this snapshot: next trial step and last error norm.
  double dt_next = 0.0;
  double err_prev = 1.0;
};

enum class Termination { Completed, BlowUp, StiffnessFailure, StepLimit };
std::string to_string(Termination t);

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<double> step_sizes;  // accepted dt, one per accepted step
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double clipped_mass = 0.0;  // particle number removed by clipping f at 0
  /// Most negative per-step entropy change seen over accepted steps.
  double min_entropy_increment = 0.0;
  Termination termination = Termination::Completed;
  std::string diagnostic;

  bool blowup() const { return termination == Termination::BlowUp; }
  const Snapshot& last() const { return snapshots.back(); }
};

using SnapshotObserver = std::function<void(const Snapshot&)>;

/// Integrates df/dt = C[f] from (t0, f0) to t_end. Snapshots at t0 and at the
/// configured cadence are stored and also handed to `observer` when set.
Trajectory evolve(const DistributionIso& f0, double t_end, const StepControl& control,
                  const CollisionConfig& collision = {}, double t0 = 0.0,
                  const SnapshotObserver& observer = {});

/// Least-squares Bose-Einstein fit (theta, mu) of a distribution, on ln(1 + c/f) = (eps - mu)/theta.
struct EquilibriumFit {
  double theta = 0.0;
  double mu = 0.0;
  double residual = 0.0;  // sup |f - f_fit| / max f
};
EquilibriumFit fit_equilibrium(const DistributionIso& f, double occupancy_c = 1.0);

// ---------------------------------------------------------------- self-similar analysis

struct BlowupEstimate {
  bool detected = false;
  double T = 0.0;
  double T_low = 0.0, T_high = 0.0;  // jackknife interval (+-1 standard error)
  double alpha = 0.0;                 // amplitude exponent from the same fit
  std::size_t window_begin = 0, window_end = 0;  // sample indices used
  double residual = 0.0;
};

struct BlowupOptions {
  /// Trailing window: last `window_fraction` of the log-growth of max f.
  double window_fraction = 0.5;
  std::size_t min_samples = 10;
  /// Growth factor of max f below which no blow-up is reported.
  double min_growth = 10.0;
};

/// Time series variant used by tests on synthetic data.
BlowupEstimate detect_blowup(const std::vector<double>& t, const std::vector<double>& fmax,
                             const BlowupOptions& opts = {});
BlowupEstimate detect_blowup(const Trajectory& traj, const BlowupOptions& opts = {});

enum class ScaleDefinition { MedianEnergy, HalfMaxWidth };

struct FitWindow {
  /// Window in log10(T - t): samples with lo <= log10(T-t) <= hi are used.
  double log_lo = -std::numeric_limits<double>::infinity();
  double log_hi = std::numeric_limits<double>::infinity();
};

struct FitOptions {
  ScaleDefinition scale = ScaleDefinition::MedianEnergy;
  /// Core = {f >= kappa * max f}.
  double core_fraction = 0.5;
  std::size_t min_samples = 10;
  /// When unset the window is chosen automatically: samples whose max f is at
  /// least `auto_growth` times the initial max and whose core lies inside the grid.
  std::optional<FitWindow> window;
  double auto_growth = 100.0;
};

struct SelfSimilarFit {
  double T = 0.0;
  double beta = 0.0;
  double beta_error = 0.0;
  double alpha = 0.0;
  double alpha_error = 0.0;
  double consistency_gap = 0.0;  // |alpha - (2 beta + 1/2)|
  FitWindow window;
  std::size_t samples = 0;
  double beta_residual = 0.0;   // rms of the log-log fits
  double alpha_residual = 0.0;
  /// Local (sliding) exponents for diagnostics: log10(T - t) and beta/alpha estimates.
  std::vector<double> local_log_tau, local_beta, local_alpha;
};

struct ScaleSeries {
  std::vector<double> t, pstar, fmax;
};

/// Characteristic momentum p*(t) of the growing core and max f, per snapshot.
ScaleSeries scale_series(const Trajectory& traj, const FitOptions& opts = {});

SelfSimilarFit fit_selfsimilar(const ScaleSeries& series, double T, const FitOptions& opts = {});
SelfSimilarFit fit_selfsimilar(const Trajectory& traj, double T, const FitOptions& opts = {});

struct SelfSimilarProfile {
  std::vector<double> xi;                 // common xi nodes (momentum / (T - t)^beta)
  std::vector<std::vector<double>> phi;   // Phi_t(xi) per snapshot in the window
  std::vector<double> times;
  std::vector<double> collapse;           // sup-norm distance between successive Phi_t
  double collapse_metric = 0.0;           // last entry of `collapse`
  /// Last rescaled profile and its 1-D cosine transform Psi(zeta) = 2 int Phi(Z) cos(zeta Z) dZ.
  std::vector<double> phi_final;
  std::vector<double> zeta, psi;

  /// Phi at arbitrary xi (linear interpolation; power-law extrapolation beyond the last node).
  double phi_at(double xi_value) const;
  double psi_at(double zeta_value) const;
};

struct ProfileOptions {
  std::size_t n_xi = 200;
  double xi_min = 0.0;   // 0 -> automatic from the data
  double xi_max = 0.0;
  std::optional<FitWindow> window;
  std::size_t n_zeta = 256;
  double zeta_max = 0.0;  // 0 -> automatic
};

SelfSimilarProfile extract_profile(const Trajectory& traj, double T, double beta, const ProfileOptions& opts = {});

}  // namespace uukin
