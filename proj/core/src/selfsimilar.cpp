#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "uukin/dynamics.hpp"
#include "uukin/error.hpp"
#include "uukin/params.hpp"

namespace uukin {

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, rss = 0.0, slope_se = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit out;
  out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  out.intercept = my - out.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (out.intercept + out.slope * x[i]);
    out.rss += r * r;
  }
  if (n > 2 && sxx > 0.0) out.slope_se = std::sqrt(out.rss / (n - 2) / sxx);
  return out;
}

// log f_max = -alpha log(T - t) + b, best T for fixed samples
struct PowerFit {
  double T = 0.0, alpha = 0.0, rss = 0.0;
};

PowerFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y) {
  const double t_last = t.back();
  const double span = std::max(t_last - t.front(), 1e-300);
  std::vector<double> x(t.size());
  auto rss_at = [&](double log_delta) {
    const double T = t_last + std::exp(log_delta);
    for (std::size_t i = 0; i < t.size(); ++i) x[i] = std::log(T - t[i]);
    return fit_line(x, y).rss;
  };
  const double lo = std::log(span * 1e-12), hi = std::log(span * 10.0);
  const int n_scan = 240;
  int best = 0;
  double best_rss = std::numeric_limits<double>::infinity();
  for (int s = 0; s <= n_scan; ++s) {
    const double r = rss_at(lo + (hi - lo) * s / n_scan);
    if (r < best_rss) {
      best_rss = r;
      best = s;
    }
  }
  double a = lo + (hi - lo) * std::max(best - 1, 0) / n_scan;
  double b = lo + (hi - lo) * std::min(best + 1, n_scan) / n_scan;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c1 = b - g * (b - a), c2 = a + g * (b - a);
  double r1 = rss_at(c1), r2 = rss_at(c2);
  for (int it = 0; it < 100 && b - a > 1e-12; ++it) {
    if (r1 < r2) {
      b = c2;
      c2 = c1;
      r2 = r1;
      c1 = b - g * (b - a);
      r1 = rss_at(c1);
    } else {
      a = c1;
      c1 = c2;
      r1 = r2;
      c2 = a + g * (b - a);
      r2 = rss_at(c2);
    }
  }
  PowerFit out;
  out.T = t_last + std::exp(0.5 * (a + b));
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = std::log(out.T - t[i]);
  const LineFit lf = fit_line(x, y);
  out.alpha = -lf.slope;
  out.rss = lf.rss;
  return out;
}

// T from the zero of the linear fit of f_max^{-1/alpha} against t
double linear_blowup_time(const std::vector<double>& t, const std::vector<double>& logf, double alpha) {
  std::vector<double> z(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) z[i] = std::exp(-logf[i] / alpha);
  const LineFit lf = fit_line(t, z);
  if (!(lf.slope < 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return -lf.intercept / lf.slope;
}

struct BlowupCore {
  double T, alpha, rss;
};

BlowupCore blowup_core(const std::vector<double>& t, const std::vector<double>& logf) {
  const PowerFit pf = fit_power_law(t, logf);
  double T = linear_blowup_time(t, logf, pf.alpha);
  if (!std::isfinite(T) || T <= t.back()) T = pf.T;
  return {T, pf.alpha, pf.rss};
}

// log-log interpolation of f at eps (linear where f vanishes)
double loglog_at(const DistributionIso& f, double eps) {
  const RadialGrid& g = f.grid();
  if (eps <= g.eps_min()) return f[0];
  if (eps >= g.eps_max()) return f[g.size() - 1];
  const std::size_t l = g.locate(eps);
  const double a = f[l], b = f[l + 1];
  const double x0 = g.node(l), x1 = g.node(l + 1);
  if (a > 0.0 && b > 0.0 && x0 > 0.0) {
    const double t = std::log(eps / x0) / std::log(x1 / x0);
    return std::exp((1.0 - t) * std::log(a) + t * std::log(b));
  }
  const double t = (eps - x0) / (x1 - x0);
  return (1.0 - t) * a + t * b;
}

struct CoreScale {
  double eps_edge = 0.0;    // where f crosses kappa * max f
  double eps_median = 0.0;  // half of the core's particles lie below
};

CoreScale core_scale(const DistributionIso& f, double kappa) {
  const RadialGrid& g = f.grid();
  const std::size_t n = g.size();
  const double fmax = f.max();
  const double thr = kappa * fmax;
  CoreScale out;
  std::size_t m = 0;
  while (m < n && f[m] >= thr) ++m;
  if (m == 0) {
    out.eps_edge = out.eps_median = g.eps_min();
    return out;
  }
  if (m == n) {
    out.eps_edge = g.eps_max();
  } else {
    const double a = f[m - 1], b = f[m], x0 = g.node(m - 1), x1 = g.node(m);
    const double t = (b > 0.0) ? std::log(a / thr) / std::log(a / b) : (a - thr) / (a - b);
    out.eps_edge = x0 > 0.0 && b > 0.0 ? x0 * std::pow(x1 / x0, t) : x0 + t * (x1 - x0);
  }
  // cumulative particle number, 2 pi sqrt(eps) f, piecewise on the nodes up to the edge
  std::vector<double> ex{0.0}, cum{0.0};
  double acc = 2.0 * constants::pi * (2.0 / 3.0) * std::pow(g.node(0), 1.5) * f[0];
  ex.push_back(g.node(0));
  cum.push_back(acc);
  auto integrand = [&](double e, double fv) { return 2.0 * constants::pi * std::sqrt(e) * fv; };
  for (std::size_t i = 1; i < n && g.node(i - 1) < out.eps_edge; ++i) {
    const double lo = g.node(i - 1);
    const double hi = std::min(g.node(i), out.eps_edge);
    const double fhi = hi < g.node(i) ? loglog_at(f, hi) : f[i];
    acc += 0.5 * (hi - lo) * (integrand(lo, f[i - 1]) + integrand(hi, fhi));
    ex.push_back(hi);
    cum.push_back(acc);
  }
  const double half = 0.5 * acc;
  std::size_t k = 1;
  while (k + 1 < cum.size() && cum[k] < half) ++k;
  const double t = cum[k] > cum[k - 1] ? (half - cum[k - 1]) / (cum[k] - cum[k - 1]) : 0.0;
  if (k == 1) {
    // first cell has f ~ const, N ~ eps^{3/2}
    out.eps_median = ex[1] * std::pow(std::clamp(half / cum[1], 0.0, 1.0), 2.0 / 3.0);
  } else {
    out.eps_median = ex[k - 1] + t * (ex[k] - ex[k - 1]);
  }
  return out;
}

}  // namespace

BlowupEstimate detect_blowup(const std::vector<double>& t, const std::vector<double>& fmax,
                             const BlowupOptions& opts) {
  if (t.size() != fmax.size()) throw DomainError("detect_blowup: t and f_max differ in length");
  BlowupEstimate out;
  const std::size_t n = t.size();
  if (n < opts.min_samples) return out;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(t[i] > t[i - 1])) throw DomainError("detect_blowup: times must be strictly increasing");
  }
  for (double v : fmax)
    if (!(v > 0.0)) return out;
  const double f_first = *std::min_element(fmax.begin(), fmax.end());
  if (!(fmax.back() >= opts.min_growth * f_first)) return out;

  const double y_last = std::log(fmax.back()), y_first = std::log(f_first);
  const double y_cut = y_last - opts.window_fraction * (y_last - y_first);
  std::size_t begin = n;
  while (begin > 0 && std::log(fmax[begin - 1]) >= y_cut) --begin;
  if (n - begin < opts.min_samples) begin = n - opts.min_samples;

  std::vector<double> tw(t.begin() + begin, t.end()), yw;
  for (std::size_t i = begin; i < n; ++i) yw.push_back(std::log(fmax[i]));
  const BlowupCore core = blowup_core(tw, yw);

  // leave-one-out jackknife
  const std::size_t m = tw.size();
  std::vector<double> Ts;
  for (std::size_t drop = 0; drop < m; ++drop) {
    std::vector<double> tj, yj;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == drop) continue;
      tj.push_back(tw[i]);
      yj.push_back(yw[i]);
    }
    Ts.push_back(blowup_core(tj, yj).T);
  }
  const double mean = std::accumulate(Ts.begin(), Ts.end(), 0.0) / m;
  double var = 0.0;
  for (double v : Ts) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var * (m - 1.0) / m);

  out.detected = true;
  out.T = core.T;
  out.T_low = core.T - se;
  out.T_high = core.T + se;
  out.alpha = core.alpha;
  out.window_begin = begin;
  out.window_end = n;
  out.residual = std::sqrt(core.rss / m);
  return out;
}

BlowupEstimate detect_blowup(const Trajectory& traj, const BlowupOptions& opts) {
  std::vector<double> t, fm;
  for (const auto& s : traj.snapshots) {
    if (!t.empty() && !(s.t > t.back())) continue;
    t.push_back(s.t);
    fm.push_back(s.f.max());
  }
  return detect_blowup(t, fm, opts);
}

ScaleSeries scale_series(const Trajectory& traj, const FitOptions& opts) {
  if (!(opts.core_fraction > 0.0 && opts.core_fraction < 1.0)) {
    throw DomainError("fit: core_fraction must lie in (0, 1)");
  }
  ScaleSeries out;
  for (const auto& s : traj.snapshots) {
    if (!out.t.empty() && !(s.t > out.t.back())) continue;
    const CoreScale cs = core_scale(s.f, opts.core_fraction);
    const double e = opts.scale == ScaleDefinition::MedianEnergy ? cs.eps_median : cs.eps_edge;
    out.t.push_back(s.t);
    out.pstar.push_back(std::sqrt(e));
    out.fmax.push_back(s.f.max());
  }
  return out;
}

SelfSimilarFit fit_selfsimilar(const ScaleSeries& series, double T, const FitOptions& opts) {
  const std::size_t n = series.t.size();
  FitWindow win;
  if (opts.window) win = *opts.window;
  std::vector<double> x, lp, lf;
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = T - series.t[i];
    if (!(tau > 0.0)) continue;
    const double l10 = std::log10(tau);
    if (l10 < win.log_lo || l10 > win.log_hi) continue;
    if (!(series.pstar[i] > 0.0) || !(series.fmax[i] > 0.0)) continue;
    x.push_back(std::log(tau));
    lp.push_back(std::log(series.pstar[i]));
    lf.push_back(std::log(series.fmax[i]));
  }
  if (x.size() < opts.min_samples) {
    std::ostringstream os;
    os << "fit window [" << win.log_lo << ", " << win.log_hi << "] in log10(T-t) holds " << x.size()
       << " samples, need >= " << opts.min_samples;
    throw DomainError(os.str());
  }
  const LineFit fb = fit_line(x, lp);
  const LineFit fa = fit_line(x, lf);
  SelfSimilarFit out;
  out.T = T;
  out.beta = fb.slope;
  out.beta_error = fb.slope_se;
  out.alpha = -fa.slope;
  out.alpha_error = fa.slope_se;
  out.consistency_gap = std::fabs(out.alpha - (2.0 * out.beta + 0.5));
  out.samples = x.size();
  out.beta_residual = std::sqrt(fb.rss / x.size());
  out.alpha_residual = std::sqrt(fa.rss / x.size());
  out.window.log_lo = *std::min_element(x.begin(), x.end()) / std::log(10.0);
  out.window.log_hi = *std::max_element(x.begin(), x.end()) / std::log(10.0);

  const std::size_t span = std::max<std::size_t>(5, x.size() / 6);
  for (std::size_t s = 0; s + span <= x.size(); s += std::max<std::size_t>(1, span / 2)) {
    std::vector<double> xs(x.begin() + s, x.begin() + s + span);
    std::vector<double> ps(lp.begin() + s, lp.begin() + s + span);
    std::vector<double> fs(lf.begin() + s, lf.begin() + s + span);
    out.local_log_tau.push_back(std::accumulate(xs.begin(), xs.end(), 0.0) / span / std::log(10.0));
    out.local_beta.push_back(fit_line(xs, ps).slope);
    out.local_alpha.push_back(-fit_line(xs, fs).slope);
  }
  return out;
}

namespace {

// samples that are past the initial transient and still resolved by the grid
FitWindow auto_window(const Trajectory& traj, double T, const FitOptions& opts) {
  const double fmax0 = traj.snapshots.front().f.max();
  const double eps0 = traj.snapshots.front().f.grid().eps_min();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : traj.snapshots) {
    const double tau = T - s.t;
    if (!(tau > 0.0)) continue;
    if (s.f.max() < opts.auto_growth * fmax0) continue;
    const CoreScale cs = core_scale(s.f, opts.core_fraction);
    if (cs.eps_median < 100.0 * eps0) continue;
    lo = std::min(lo, std::log10(tau));
    hi = std::max(hi, std::log10(tau));
  }
  if (!(hi >= lo)) throw DomainError("fit window is empty: no snapshot is both grown and resolved");
  return {lo, hi};
}

}  // namespace

SelfSimilarFit fit_selfsimilar(const Trajectory& traj, double T, const FitOptions& opts) {
  if (traj.snapshots.empty()) throw DomainError("fit_selfsimilar: empty trajectory");
  FitOptions o = opts;
  if (!o.window) o.window = auto_window(traj, T, opts);
  return fit_selfsimilar(scale_series(traj, o), T, o);
}

// ---------------------------------------------------------------- profile

namespace {

// 2 int_a^b phi(Z) cos(zeta Z) dZ for piecewise linear phi
double cosine_segment(double a, double b, double fa, double fb, double zeta) {
  const double h = b - a;
  if (std::fabs(zeta) * h < 1e-4) {
    return h * (fa * std::cos(zeta * a) + fb * std::cos(zeta * b));
  }
  const double s = (fb - fa) / h;
  const double sa = std::sin(zeta * a), sb = std::sin(zeta * b);
  const double ca = std::cos(zeta * a), cb = std::cos(zeta * b);
  const double val = fa * (sb - sa) / zeta + s * (h * sb / zeta + (cb - ca) / (zeta * zeta));
  return 2.0 * val;
}

}  // namespace

double SelfSimilarProfile::phi_at(double v) const {
  if (xi.empty()) return 0.0;
  if (v <= xi.front()) return phi_final.front();
  const std::size_t n = xi.size();
  if (v >= xi.back()) {
    const double a = phi_final[n - 2], b = phi_final[n - 1];
    if (a > 0.0 && b > 0.0) {
      const double gamma = std::log(a / b) / std::log(xi[n - 1] / xi[n - 2]);
      return b * std::pow(v / xi.back(), -gamma);
    }
    return 0.0;
  }
  const std::size_t l = static_cast<std::size_t>(std::upper_bound(xi.begin(), xi.end(), v) - xi.begin()) - 1;
  const double t = (v - xi[l]) / (xi[l + 1] - xi[l]);
  return (1.0 - t) * phi_final[l] + t * phi_final[l + 1];
}

double SelfSimilarProfile::psi_at(double zeta_value) const {
  if (xi.empty()) return 0.0;
  const double z = zeta_value;
  // flat part on [0, xi_0]
  double total = std::fabs(z) * xi.front() < 1e-8 ? 2.0 * phi_final.front() * xi.front()
                                                   : 2.0 * phi_final.front() * std::sin(z * xi.front()) / z;
  for (std::size_t i = 0; i + 1 < xi.size(); ++i) {
    total += cosine_segment(xi[i], xi[i + 1], phi_final[i], phi_final[i + 1], z);
  }
  // power-law tail out to 1e3 xi_max on a geometric grid
  const double x_end = xi.back() * 1e3;
  const std::size_t n_tail = 600;
  const double r = std::pow(x_end / xi.back(), 1.0 / n_tail);
  double a = xi.back(), fa = phi_final.back();
  for (std::size_t i = 0; i < n_tail; ++i) {
    const double b = a * r;
    const double fb = phi_at(b);
    total += cosine_segment(a, b, fa, fb, z);
    a = b;
    fa = fb;
  }
  return total;
}

SelfSimilarProfile extract_profile(const Trajectory& traj, double T, double beta, const ProfileOptions& opts) {
  if (traj.snapshots.empty()) throw DomainError("extract_profile: empty trajectory");
  if (!(beta > 0.0)) throw DomainError("extract_profile: beta must be > 0");
  FitWindow win;
  if (opts.window) {
    win = *opts.window;
  } else {
    win = auto_window(traj, T, FitOptions{});
  }
  const double alpha = 2.0 * beta + 0.5;

  // pick snapshots about 8 per decade of (T - t)
  std::vector<const Snapshot*> picked;
  double next_l10 = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.snapshots) {
    const double tau = T - s.t;
    if (!(tau > 0.0)) continue;
    const double l10 = std::log10(tau);
    if (l10 < win.log_lo || l10 > win.log_hi) continue;
    if (l10 <= next_l10) {
      picked.push_back(&s);
      next_l10 = l10 - 0.125;
    }
  }
  if (picked.size() < 2) throw DomainError("extract_profile: asymptotic window holds fewer than 2 snapshots");

  const RadialGrid& g = picked.front()->f.grid();
  double xi_lo = opts.xi_min, xi_hi = opts.xi_max;
  if (!(xi_lo > 0.0) || !(xi_hi > xi_lo)) {
    xi_lo = 0.0;
    xi_hi = std::numeric_limits<double>::infinity();
    double xi_med = 0.0;
    for (const Snapshot* s : picked) {
      const double sc = std::pow(T - s->t, beta);
      xi_lo = std::max(xi_lo, std::sqrt(g.eps_min()) / sc);
      xi_hi = std::min(xi_hi, std::sqrt(g.eps_max()) / sc);
      xi_med = std::sqrt(core_scale(s->f, 0.5).eps_median) / sc;
    }
    xi_hi = std::min(xi_hi, 1e3 * xi_med);
    xi_lo = std::min(xi_lo, 1e-2 * xi_med);
  }
  if (!(xi_hi > xi_lo)) throw ResolutionError("extract_profile: snapshots share no common xi range");

  SelfSimilarProfile out;
  const std::size_t nx = std::max<std::size_t>(opts.n_xi, 4);
  out.xi.resize(nx);
  for (std::size_t i = 0; i < nx; ++i) out.xi[i] = xi_lo * std::pow(xi_hi / xi_lo, double(i) / (nx - 1));
  for (const Snapshot* s : picked) {
    const double tau = T - s->t;
    const double amp = std::pow(tau, alpha);
    const double sc2 = std::pow(tau, 2.0 * beta);
    std::vector<double> phi(nx);
    for (std::size_t i = 0; i < nx; ++i) phi[i] = amp * loglog_at(s->f, out.xi[i] * out.xi[i] * sc2);
    out.phi.push_back(std::move(phi));
    out.times.push_back(s->t);
  }
  for (std::size_t k = 1; k < out.phi.size(); ++k) {
    double d = 0.0;
    for (std::size_t i = 0; i < nx; ++i) d = std::max(d, std::fabs(out.phi[k][i] - out.phi[k - 1][i]));
    out.collapse.push_back(d);
  }
  out.collapse_metric = out.collapse.empty() ? 0.0 : out.collapse.back();
  out.phi_final = out.phi.back();

  // zeta range: a few oscillations across the half-width of Phi
  double half_xi = out.xi.back();
  for (std::size_t i = 0; i < nx; ++i) {
    if (out.phi_final[i] < 0.5 * out.phi_final.front()) {
      half_xi = out.xi[i];
      break;
    }
  }
  const double zmax = opts.zeta_max > 0.0 ? opts.zeta_max : 20.0 / half_xi;
  const std::size_t nz = std::max<std::size_t>(opts.n_zeta, 2);
  out.zeta.resize(nz);
  out.psi.resize(nz);
  for (std::size_t i = 0; i < nz; ++i) {
    out.zeta[i] = zmax * double(i) / (nz - 1);
    out.psi[i] = out.psi_at(out.zeta[i]);
  }
  return out;
}

}  // namespace uukin
