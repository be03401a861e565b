#include "uukin/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "uukin/error.hpp"
#include "uukin/params.hpp"

namespace uukin {

void StepControl::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) throw DomainError("dynamics: rtol and atol must be > 0");
  if (!(dt_initial > 0.0) || !(dt_max > 0.0)) throw DomainError("dynamics: dt_initial and dt_max must be > 0");
  if (!(dt_floor > 0.0)) throw DomainError("dynamics: dt_floor must be > 0");
  if (!(growth_ceiling > 1.0)) throw DomainError("dynamics: growth_ceiling must be > 1");
  if (snapshot_every == 0) throw DomainError("dynamics: snapshot_every must be >= 1");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::BlowUp: return "blowup";
    case Termination::StiffnessFailure: return "stiffness_failure";
    case Termination::StepLimit: return "step_limit";
  }
  return "unknown";
}

namespace {

// Dormand-Prince 5(4)
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

class Rhs {
 public:
  Rhs(GridPtr grid, const CollisionConfig& cfg) : grid_(std::move(grid)), cfg_(cfg), work_(grid_->size()) {}

  // stage values can dip below 0; the operator sees them clipped
  void operator()(const std::vector<double>& y, std::vector<double>& out) {
    for (std::size_t i = 0; i < y.size(); ++i) work_[i] = std::max(0.0, y[i]);
    DistributionIso f(grid_, work_);
    out = collision_rhs_iso(f, cfg_).rate;
  }

 private:
  GridPtr grid_;
  CollisionConfig cfg_;
  std::vector<double> work_;
};

}  // namespace

Trajectory evolve(const DistributionIso& f0, double t_end, const StepControl& control,
                  const CollisionConfig& collision, double t0, const SnapshotObserver& observer) {
  control.validate();
  collision.validate();
  if (!f0.nonnegative()) throw DomainError("evolve: initial distribution must be finite and >= 0");
  if (!(t_end > t0)) throw DomainError("evolve: t_end must exceed the start time");

  const GridPtr grid = f0.grid_ptr();
  const std::size_t n = grid->size();
  const double c = collision.occupancy_c;
  const auto x = grid->nodes();
  const auto w = grid->weights(collision.quadrature_order);

  Trajectory traj;
  double dt = 0.0;
  double err_prev = control.resume_err_prev;
  auto store = [&](double t, const std::vector<double>& y, const MomentReport& m) {
    Snapshot s{t, DistributionIso(grid, y), m, dt, err_prev};
    if (observer) observer(s);
    traj.snapshots.push_back(std::move(s));
  };

  std::vector<double> y(f0.values().begin(), f0.values().end());
  MomentReport m_now = moments(f0, c, collision.quadrature_order);
  store(t0, y, m_now);
  const double fmax0 = control.reference_max > 0.0 ? control.reference_max : std::max(f0.max(), 1e-300);

  Rhs rhs(grid, collision);
  std::array<std::vector<double>, 7> k;
  for (auto& v : k) v.resize(n);
  std::vector<double> tmp(n), ynew(n);
  rhs(y, k[0]);

  double t = t0;
  dt = std::min({control.dt_initial, control.dt_max, t_end - t0});
  bool stored_last = true;
  std::size_t since_store = 0;

  auto stage = [&](std::initializer_list<std::pair<int, double>> terms) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = y[i];
      for (const auto& [idx, coef] : terms) s += dt * coef * k[idx][i];
      tmp[i] = s;
    }
  };

  while (t < t_end) {
    if (traj.accepted >= control.max_steps) {
      traj.termination = Termination::StepLimit;
      traj.diagnostic = "step limit reached";
      break;
    }
    if (dt < control.dt_floor) {
      const double growth = *std::max_element(y.begin(), y.end()) / fmax0;
      std::ostringstream os;
      os << "step size " << dt << " below floor " << control.dt_floor << " at t = " << t << " (max f grew x"
         << growth << ")";
      traj.diagnostic = os.str();
      traj.termination = growth >= 10.0 ? Termination::BlowUp : Termination::StiffnessFailure;
      break;
    }
    const bool last_step = t + dt >= t_end;
    if (last_step) dt = t_end - t;

    stage({{0, a21}});
    rhs(tmp, k[1]);
    stage({{0, a31}, {1, a32}});
    rhs(tmp, k[2]);
    stage({{0, a41}, {1, a42}, {2, a43}});
    rhs(tmp, k[3]);
    stage({{0, a51}, {1, a52}, {2, a53}, {3, a54}});
    rhs(tmp, k[4]);
    stage({{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}});
    rhs(tmp, k[5]);
    for (std::size_t i = 0; i < n; ++i) {
      ynew[i] = y[i] + dt * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] + b6 * k[5][i]);
    }
    rhs(ynew, k[6]);

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = dt * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);
      const double scale = control.atol + control.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
      const double r = std::fabs(e) / scale;
      if (!std::isfinite(r)) finite = false;
      err = std::max(err, r);
    }
    if (!finite) {
      dt *= 0.2;
      ++traj.rejected;
      continue;
    }

    if (err > 1.0) {
      ++traj.rejected;
      dt *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }

    // accepted
    t = last_step ? t_end : t + dt;
    traj.step_sizes.push_back(dt);
    ++traj.accepted;
    double clipped = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (ynew[i] < 0.0) {
        clipped -= w[i] * 2.0 * constants::pi * std::sqrt(x[i]) * ynew[i];
        ynew[i] = 0.0;
      }
    }
    traj.clipped_mass += clipped;
    y.swap(ynew);
    if (clipped > 0.0) {
      rhs(y, k[0]);
    } else {
      k[0].swap(k[6]);
    }

    const MomentReport m_next = moments(DistributionIso(grid, y), c, collision.quadrature_order);
    traj.min_entropy_increment = std::min(traj.min_entropy_increment, m_next.entropy - m_now.entropy);
    m_now = m_next;

    ++since_store;
    stored_last = false;
    const double fmax = *std::max_element(y.begin(), y.end());
    const bool blew_up = fmax >= control.growth_ceiling * fmax0;

    const double e_safe = std::max(err, 1e-10);
    double fac = 0.9 * std::pow(e_safe, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
    fac = std::clamp(fac, 0.2, 5.0);
    err_prev = std::max(err, 1e-4);
    dt = std::min(dt * fac, control.dt_max);

    if (since_store >= control.snapshot_every || t >= t_end || blew_up) {
      store(t, y, m_now);
      since_store = 0;
      stored_last = true;
    }
    if (blew_up) {
      std::ostringstream os;
      os << "max f reached " << fmax << " (x" << fmax / fmax0 << " initial) at t = " << t;
      traj.diagnostic = os.str();
      traj.termination = Termination::BlowUp;
      break;
    }
  }
  if (!stored_last) store(t, y, m_now);
  return traj;
}

EquilibriumFit fit_equilibrium(const DistributionIso& f, double occupancy_c) {
  const RadialGrid& grid = f.grid();
  const auto wq = grid.weights(2);
  const double fmax = f.max();
  if (!(fmax > 0.0)) throw DomainError("fit_equilibrium: f is identically zero");
  // weighted least squares of psi = ln(1 + c/f) against eps, weights = particle content
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (f[i] <= 1e-10 * fmax) continue;
    const double xi = grid.node(i);
    const double yi = std::log1p(occupancy_c / f[i]);
    const double wi = wq[i] * std::sqrt(xi) * f[i];
    sw += wi;
    sx += wi * xi;
    sy += wi * yi;
    sxx += wi * xi * xi;
    sxy += wi * xi * yi;
  }
  const double det = sw * sxx - sx * sx;
  if (!(det > 0.0)) throw DomainError("fit_equilibrium: not enough support");
  const double slope = (sw * sxy - sx * sy) / det;
  const double icpt = (sy - slope * sx) / sw;
  EquilibriumFit out;
  out.theta = 1.0 / slope;
  out.mu = -icpt * out.theta;
  double r = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double fit = occupancy_c / std::expm1((grid.node(i) - out.mu) / out.theta);
    r = std::max(r, std::fabs(f[i] - fit));
  }
  out.residual = r / fmax;
  return out;
}

}  // namespace uukin
