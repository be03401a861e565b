#include <algorithm>
#include <cmath>
#include <sstream>

#include "uukin/collision.hpp"
#include "uukin/error.hpp"
#include "uukin/lattice.hpp"
#include "uukin/parallel.hpp"

namespace uukin {

void LatticeHistory::check_covers(double t) const {
  if (snapshots.empty()) throw ResolutionError("lattice history is empty");
  const double tol = 1e-12 * std::max(1.0, std::fabs(t));
  if (std::fabs(snapshots.front().t) > tol) throw ResolutionError("lattice history must start at t = 0");
  if (snapshots.back().t < t - tol) {
    std::ostringstream os;
    os << "lattice history ends at t = " << snapshots.back().t << ", before requested t = " << t;
    throw ResolutionError(os.str());
  }
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    const double gap = snapshots[i].t - snapshots[i - 1].t;
    if (!(gap > 0.0)) throw ResolutionError("lattice history times must be strictly increasing");
    if (max_gap > 0.0 && snapshots[i - 1].t < t && gap > max_gap * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "lattice history gap " << gap << " at t = " << snapshots[i - 1].t << " exceeds max_gap " << max_gap;
      throw ResolutionError(os.str());
    }
  }
}

namespace {

// Per-snapshot q sums grouped by (xi1, energy mismatch level).
class LevelSums {
 public:
  explicit LevelSums(const Lattice3& lat) : tab_(lat), levels_(2 * tab_.max_mismatch + 1) {}

  const QuadrupleTable& table() const { return tab_; }
  int levels() const { return levels_; }
  int offset() const { return tab_.max_mismatch; }

  std::vector<double> compute(const DistributionLattice& f, double c) const {
    const std::size_t n = tab_.lattice.size();
    std::vector<double> s(n * levels_, 0.0);
    for (std::size_t r = 0; r < tab_.size(); ++r) {
      const double q = q_factor(f[tab_.xi1[r]], f[tab_.xi2[r]], f[tab_.eta1[r]], f[tab_.eta2[r]], c);
      s[tab_.xi1[r] * levels_ + (tab_.mismatch[r] + offset())] += q;
    }
    return s;
  }

 private:
  QuadrupleTable tab_;
  int levels_;
};

// (4/eps^2) dp^6 sum_L Re sum_m exp(-i w_L (t - t_{m+1})) (w0 S_m + w1 S_{m+1})
std::vector<double> memory_sum(const LevelSums& ls, const std::vector<double>& times,
                               const std::vector<const std::vector<double>*>& sums, double eps) {
  const Lattice3& lat = ls.table().lattice;
  const std::size_t n = lat.size();
  const int nl = ls.levels();
  const double dp2 = lat.spacing() * lat.spacing();
  const double pref = 4.0 / (eps * eps) * std::pow(lat.spacing(), 6);
  const double t = times.back();
  std::vector<double> out(n, 0.0);
  if (times.size() < 2) return out;
  std::vector<cplx> acc(n * nl, cplx(0.0, 0.0));
  for (int L = 0; L < nl; ++L) {
    const double omega = dp2 * (L - ls.offset()) / (eps * eps);
    for (std::size_t m = 0; m + 1 < times.size(); ++m) {
      const double h = times[m + 1] - times[m];
      cplx w0, w1;
      filon_weights(omega, h, w0, w1);
      const cplx rot = std::exp(cplx(0.0, -omega * (t - times[m + 1])));
      const cplx a0 = rot * w0, a1 = rot * w1;
      const std::vector<double>& s0 = *sums[m];
      const std::vector<double>& s1 = *sums[m + 1];
      for (std::size_t p = 0; p < n; ++p) acc[p * nl + L] += a0 * s0[p * nl + L] + a1 * s1[p * nl + L];
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    double s = 0.0;
    for (int L = 0; L < nl; ++L) s += acc[p * nl + L].real();
    out[p] = pref * s;
  }
  return out;
}

}  // namespace

cplx phi_closed_form(const LatticeHistory& history, const Quadruple& quad, double t, double eps, double c) {
  if (!(eps > 0.0)) throw DomainError("phi_closed_form: eps must be > 0");
  if (t <= 0.0) return cplx(0.0, 0.0);
  history.check_covers(t);
  const Lattice3& lat = history.snapshots.front().lattice;
  if (!lat.contains(quad.eta2)) return cplx(0.0, 0.0);
  int mm = 0;
  for (int a = 0; a < 3; ++a) {
    if (quad.xi1[a] + quad.xi2[a] != quad.eta1[a] + quad.eta2[a]) return cplx(0.0, 0.0);
    mm += quad.xi1[a] * quad.xi1[a] + quad.xi2[a] * quad.xi2[a] - quad.eta1[a] * quad.eta1[a] -
          quad.eta2[a] * quad.eta2[a];
  }
  const double omega = lat.spacing() * lat.spacing() * mm / (eps * eps);
  auto q_at = [&](const DistributionLattice& f) { return 0.5 * w_factor(f, quad, c); };
  cplx acc(0.0, 0.0);
  const auto& hs = history.snapshots;
  for (std::size_t m = 0; m + 1 < hs.size() && hs[m].t < t; ++m) {
    const double t1 = std::min(hs[m + 1].t, t);
    const double h = t1 - hs[m].t;
    const double q0 = q_at(hs[m]);
    double q1 = q_at(hs[m + 1]);
    if (t1 < hs[m + 1].t) q1 = q0 + (q1 - q0) * h / (hs[m + 1].t - hs[m].t);
    cplx w0, w1;
    filon_weights(omega, h, w0, w1);
    acc += std::exp(cplx(0.0, -omega * (t - t1))) * (w0 * q0 + w1 * q1);
  }
  return cplx(0.0, -2.0 / eps) * acc;
}

std::vector<double> rhs_memory(const LatticeHistory& history, double t, double eps, double c) {
  if (!(eps > 0.0)) throw DomainError("rhs_memory: eps must be > 0");
  const Lattice3& lat = history.snapshots.empty() ? Lattice3() : history.snapshots.front().lattice;
  if (t <= 0.0) {
    history.check_covers(0.0);
    return std::vector<double>(lat.size(), 0.0);
  }
  history.check_covers(t);
  const LevelSums ls(lat);
  std::vector<double> times;
  std::vector<std::vector<double>> store;
  const auto& hs = history.snapshots;
  for (std::size_t m = 0; m < hs.size() && hs[m].t <= t; ++m) {
    times.push_back(hs[m].t);
    store.push_back(ls.compute(hs[m], c));
  }
  if (times.back() < t) {
    // q is linear between snapshots, so are its level sums
    const std::size_t m = times.size() - 1;
    const std::vector<double> next = ls.compute(hs[m + 1], c);
    const double a = (t - hs[m].t) / (hs[m + 1].t - hs[m].t);
    std::vector<double> s(next.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = (1.0 - a) * store[m][i] + a * next[i];
    times.push_back(t);
    store.push_back(std::move(s));
  }
  std::vector<const std::vector<double>*> ptr;
  for (const auto& s : store) ptr.push_back(&s);
  return memory_sum(ls, times, ptr, eps);
}

// ---------------------------------------------------------------- integrators

namespace {

std::size_t step_count(double t_start, double t_end, double dt) {
  if (!(t_end > t_start) || !(dt > 0.0)) throw DomainError("lattice run needs t_end > start time and dt > 0");
  return static_cast<std::size_t>(std::ceil((t_end - t_start) / dt - 1e-9));
}

void check_initial(const DistributionLattice& f0) {
  if (!f0.nonnegative()) throw DomainError("lattice initial data must be finite and >= 0");
}

std::vector<double> axpy(const std::vector<double>& y, double a, const std::vector<double>& x) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * x[i];
  return out;
}

std::vector<double> heun_combine(const std::vector<double>& y, double h, const std::vector<double>& k0,
                                 const std::vector<double>& k1) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + 0.5 * h * (k0[i] + k1[i]);
  return out;
}

}  // namespace

LatticeRun run_coupled(const DistributionLattice& f0, double t_end, double eps, double c,
                       const LatticeRunOptions& opts) {
  if (!(eps > 0.0)) throw DomainError("run_coupled: eps must be > 0");
  const Lattice3& lat = f0.lattice;
  opts.budget.check(lat.side());
  check_initial(f0);
  const double t0 = f0.t;
  const std::size_t steps = step_count(t0, t_end, opts.dt);
  const double h = (t_end - t0) / steps;
  const QuadrupleTable tab(lat);
  const int nl = 2 * tab.max_mismatch + 1;
  const double dp2 = lat.spacing() * lat.spacing();

  // per-level propagator and exponential weights
  std::vector<cplx> rot(nl), w0(nl), w1(nl);
  for (int L = 0; L < nl; ++L) {
    const double omega = dp2 * (L - tab.max_mismatch) / (eps * eps);
    rot[L] = std::exp(cplx(0.0, -omega * h));
    filon_weights(omega, h, w0[L], w1[L]);
  }
  const cplx src(0.0, -2.0 / eps);

  auto q_of = [&](const std::vector<double>& f) {
    std::vector<double> q(tab.size());
    for (std::size_t r = 0; r < tab.size(); ++r) {
      q[r] = q_factor(f[tab.xi1[r]], f[tab.xi2[r]], f[tab.eta1[r]], f[tab.eta2[r]], c);
    }
    return q;
  };
  auto advance = [&](const PairCorrelation& from, const std::vector<double>& q0, const std::vector<double>& q1,
                     PairCorrelation& to) {
    const auto& a = from.data();
    auto& b = to.data();
    for (std::size_t r = 0; r < tab.size(); ++r) {
      const int L = tab.mismatch[r] + tab.max_mismatch;
      const std::size_t e = tab.entry[r];
      b[e] = rot[L] * a[e] + src * (w0[L] * q0[r] + w1[L] * q1[r]);
    }
  };

  LatticeRun run;
  PairCorrelation phi(lat, opts.budget), trial(lat, opts.budget);
  if (opts.phi0) {
    if (opts.phi0->lattice().side() != lat.side() || opts.phi0->size() != phi.size()) {
      throw DomainError("run_coupled: resume correlation does not match the lattice");
    }
    phi.data() = opts.phi0->data();
  } else if (t0 != 0.0) {
    throw DomainError("run_coupled: resuming at t > 0 needs the pair correlation");
  }
  phi.eps = trial.eps = eps;
  phi.t = t0;
  std::vector<double> f = f0.values;
  std::vector<double> q = q_of(f);
  run.trajectory.push_back(DistributionLattice(lat, f, t0));
  double res = 0.0;
  std::vector<double> k0 = df_from_phi(phi, eps, &res);
  for (std::size_t n = 0; n < steps; ++n) {
    const std::vector<double> fp = axpy(f, h, k0);
    const std::vector<double> qp = q_of(fp);
    advance(phi, q, qp, trial);
    const std::vector<double> k1 = df_from_phi(trial, eps, &res);
    run.max_imag_residual = std::max(run.max_imag_residual, res);
    f = heun_combine(f, h, k0, k1);
    const std::vector<double> qn = q_of(f);
    advance(phi, q, qn, trial);
    std::swap(phi.data(), trial.data());
    q = qn;
    const double t = t0 + h * (n + 1);
    phi.t = t;
    k0 = df_from_phi(phi, eps, &res);
    run.max_imag_residual = std::max(run.max_imag_residual, res);
    run.trajectory.push_back(DistributionLattice(lat, f, t));
  }
  // phi(xi1, xi2; eta1, eta2) = conj phi(eta1, eta2; xi1, xi2)
  const auto& d = phi.data();
  const std::size_t nn = lat.size();
  double scale = 0.0, worst = 0.0;
  for (std::size_t r = 0; r < tab.size(); ++r) {
    const std::size_t partner = (static_cast<std::size_t>(tab.eta1[r]) * nn + tab.eta2[r]) * nn + tab.xi1[r];
    worst = std::max(worst, std::abs(d[tab.entry[r]] - std::conj(d[partner])));
    scale = std::max(scale, std::abs(d[tab.entry[r]]));
  }
  run.max_conjugation_error = scale > 0.0 ? worst / scale : worst;
  run.final_phi = std::move(phi);
  return run;
}

LatticeRun run_memory(const DistributionLattice& f0, double t_end, double eps, double c,
                      const LatticeRunOptions& opts) {
  if (!(eps > 0.0)) throw DomainError("run_memory: eps must be > 0");
  const Lattice3& lat = f0.lattice;
  check_initial(f0);
  const double t0 = f0.t;
  const std::size_t steps = step_count(t0, t_end, opts.dt);
  const double h = (t_end - t0) / steps;
  const LevelSums ls(lat);

  LatticeRun run;
  std::vector<double> times;
  std::vector<std::vector<double>> sums;
  if (opts.history && !opts.history->snapshots.empty()) {
    opts.history->check_covers(t0);
    for (const auto& s : opts.history->snapshots) {
      if (s.t >= t0 - 1e-12 * std::max(1.0, t0)) break;
      times.push_back(s.t);
      sums.push_back(ls.compute(s, c));
    }
  } else if (t0 != 0.0) {
    throw DomainError("run_memory: resuming at t > 0 needs the stored history");
  }
  times.push_back(t0);
  sums.push_back(ls.compute(f0, c));
  std::vector<double> f = f0.values;
  run.trajectory.push_back(DistributionLattice(lat, f, t0));
  auto eval = [&](const std::vector<double>& t_list, const std::vector<std::vector<double>>& s_list,
                  const std::vector<double>* extra) {
    std::vector<const std::vector<double>*> ptr;
    for (const auto& s : s_list) ptr.push_back(&s);
    if (extra) ptr.push_back(extra);
    return memory_sum(ls, t_list, ptr, eps);
  };
  std::vector<double> k0 = eval(times, sums, nullptr);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = t0 + h * (n + 1);
    const std::vector<double> fp = axpy(f, h, k0);
    const std::vector<double> sp = ls.compute(DistributionLattice(lat, fp), c);
    times.push_back(t);
    const std::vector<double> k1 = eval(times, sums, &sp);
    f = heun_combine(f, h, k0, k1);
    sums.push_back(ls.compute(DistributionLattice(lat, f), c));
    k0 = eval(times, sums, nullptr);
    run.trajectory.push_back(DistributionLattice(lat, f, t));
  }
  return run;
}

LatticeRun run_markov(const DistributionLattice& f0, double t_end, double c, const LatticeRunOptions& opts) {
  check_initial(f0);
  const Lattice3& lat = f0.lattice;
  const double t0 = f0.t;
  const std::size_t steps = step_count(t0, t_end, opts.dt);
  const double h = (t_end - t0) / steps;
  LatticeRun run;
  std::vector<double> f = f0.values;
  run.trajectory.push_back(DistributionLattice(lat, f, t0));
  for (std::size_t n = 0; n < steps; ++n) {
    const std::vector<double> k0 = rhs_markov(DistributionLattice(lat, f), c);
    const std::vector<double> fp = axpy(f, h, k0);
    const std::vector<double> k1 = rhs_markov(DistributionLattice(lat, fp), c);
    f = heun_combine(f, h, k0, k1);
    run.trajectory.push_back(DistributionLattice(lat, f, t0 + h * (n + 1)));
  }
  return run;
}

MarkovLimitStudy markovian_limit_study(const DistributionLattice& f0, const std::vector<double>& eps_list,
                                       double t_end, double c, const LatticeRunOptions& opts) {
  if (eps_list.empty()) throw DomainError("markovian_limit_study: empty eps list");
  const LatticeRun markov = run_markov(f0, t_end, c, opts);
  const auto& fm = markov.trajectory.back().values;
  double fm_max = 0.0;
  for (double v : fm) fm_max = std::max(fm_max, std::fabs(v));
  for (const auto& s : markov.trajectory) {
    if (!s.nonnegative()) {
      throw NumericalError("markovian_limit_study: kinetic solution left the admissible set; shorten the window");
    }
  }
  MarkovLimitStudy out;
  for (double eps : eps_list) {
    const LatticeRun mem = run_memory(f0, t_end, eps, c, opts);
    const auto& f = mem.trajectory.back().values;
    double e = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!std::isfinite(f[i])) throw NumericalError("markovian_limit_study: memory solution diverged");
      e = std::max(e, std::fabs(f[i] - fm[i]));
    }
    out.rows.push_back({eps, e, fm_max > 0.0 ? e / fm_max : e});
  }
  out.monotone = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (!(out.rows[i].sup_error < out.rows[i - 1].sup_error)) out.monotone = false;
  }
  return out;
}

}  // namespace uukin
