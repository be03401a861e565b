#include "uukin/boundary_layer.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uukin/error.hpp"
#include "uukin/parallel.hpp"

namespace uukin {

using constants::pi;
using cplx = std::complex<double>;

// ---------------------------------------------------------------- scales

double correlation_onset_exponent(double beta) {
  if (!(beta > 0.0)) throw DomainError("beta must be > 0");
  return 2.0 / (2.0 * beta + 1.0);
}

double correlation_onset_time(double eps, double beta) {
  if (!(eps > 0.0)) throw DomainError("correlation_onset_time: eps must be > 0");
  return std::pow(eps, correlation_onset_exponent(beta));
}

BoundaryLayerScales scale_exponents(double beta) {
  if (!(beta > 0.0)) throw DomainError("beta must be > 0");
  BoundaryLayerScales s;
  const double d = 2.0 * beta + 1.0;
  s.beta = beta;
  s.time_exponent = 2.0 / d;
  s.space_exponent = 2.0 * beta / d;
  s.momentum_exponent = 2.0 * beta / d;
  s.amplitude_exponent = (2.0 * beta - 1.0) / d;
  s.physical_time_exponent = 4.0 * beta / d;
  s.identity_residual = std::fabs(s.time_exponent + s.physical_time_exponent - 2.0);
  s.px_exponent_sum = s.momentum_exponent + (-s.space_exponent);
  return s;
}

BoundaryLayerScales physical_scales(const PhysicalParams& params, double beta) {
  params.validate();
  BoundaryLayerScales s = scale_exponents(beta);
  const double lam = params.de_broglie;
  const double a = params.scattering_length;
  const double d = params.interparticle;
  if (!(a > 0.0)) throw DomainError("physical_scales: scattering length must be > 0");
  const double hbar = constants::hbar;
  const double t0 = 2.0 * params.mass * lam * lam / hbar;
  const double p0 = hbar / lam;
  s.base_reduced = a * lam * lam / (d * d * d);
  s.base_exact = 8.0 * pi * s.base_reduced;
  auto fill = [&](double base, double& t, double& p, double& x) {
    t = t0 * std::pow(base, -s.physical_time_exponent);
    p = p0 * std::pow(base, s.momentum_exponent);
    x = lam * std::pow(base, -s.space_exponent);
  };
  fill(s.base_reduced, s.t_bl, s.p_bl, s.x_bl);
  fill(s.base_exact, s.t_bl_exact, s.p_bl_exact, s.x_bl_exact);
  s.px_over_hbar = s.p_bl * s.x_bl / hbar;
  return s;
}

CorrelationMagnitude correlation_magnitude(double t_minus_t, double beta) {
  if (!(t_minus_t > 0.0)) throw DomainError("correlation_magnitude: T - t must be > 0");
  if (!(beta > 0.0)) throw DomainError("beta must be > 0");
  CorrelationMagnitude m;
  m.exponent = 2.0 * beta - 1.0;
  m.f1_squared_exponent = 2.0 * (beta - 0.5);
  m.ratio = std::pow(t_minus_t, m.exponent);
  m.exponents_equal = std::fabs(m.exponent - m.f1_squared_exponent) <= 1e-15 * std::max(1.0, std::fabs(m.exponent));
  return m;
}

// ---------------------------------------------------------------- grid and state

double BLGrid::coord(std::size_t j) const {
  const long long jj = static_cast<long long>(j);
  const long long nn = static_cast<long long>(n);
  return dx * static_cast<double>(jj <= nn / 2 ? jj : jj - nn);
}

std::size_t BLGrid::wrap(long long j) const {
  const long long nn = static_cast<long long>(n);
  long long r = j % nn;
  if (r < 0) r += nn;
  return static_cast<std::size_t>(r);
}

void BLGrid::validate() const {
  if (n < 3 || n % 2 == 0) throw DomainError("boundary-layer grid size must be odd and >= 3");
  if (!(dx > 0.0)) throw DomainError("boundary-layer grid spacing must be > 0");
  if (static_cast<double>(n) * n * n * sizeof(cplx) > 2e9) throw CapacityError("boundary-layer grid too large");
}

HierarchyState::HierarchyState(const BLGrid& g, double tau0) : grid(g), tau(tau0) {
  grid.validate();
  h1.assign(grid.n, cplx(0.0, 0.0));
  g2.assign(grid.n * grid.n * grid.n, cplx(0.0, 0.0));
}

double HierarchyState::g2_sup() const {
  double s = 0.0;
  for (const cplx& v : g2) s = std::max(s, std::abs(v));
  return s;
}

double HierarchyState::exchange_asymmetry() const {
  // G2(x2, x1; y2, y1) with y1 = 0: g2(v - w, u - w, -w)
  const std::size_t n = grid.n;
  double s = 0.0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t w = 0; w < n; ++w) {
        const long long U = u, V = v, W = w;
        const cplx a = g2[index(u, v, w)];
        const cplx b = g2[index(grid.wrap(V - W), grid.wrap(U - W), grid.wrap(-W))];
        s = std::max(s, std::abs(a - b));
      }
  return s;
}

// ---------------------------------------------------------------- profiles and matched data

namespace {

double half_width_xi(const SelfSimilarProfile& p) {
  for (std::size_t i = 0; i < p.xi.size(); ++i) {
    if (p.phi_final[i] < 0.5 * p.phi_final.front()) return p.xi[i];
  }
  return p.xi.back();
}

}  // namespace

SelfSimilarProfile analytic_profile(double (*phi)(double), double xi_lo, double xi_hi, std::size_t n,
                                    std::size_t n_zeta) {
  if (!(xi_lo > 0.0) || !(xi_hi > xi_lo) || n < 4) throw DomainError("analytic_profile: bad xi range");
  SelfSimilarProfile out;
  out.xi.resize(n);
  out.phi_final.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.xi[i] = xi_lo * std::pow(xi_hi / xi_lo, double(i) / (n - 1));
    out.phi_final[i] = phi(out.xi[i]);
  }
  out.phi.push_back(out.phi_final);
  out.times.push_back(0.0);
  const double zmax = 20.0 / half_width_xi(out);
  const std::size_t nz = std::max<std::size_t>(n_zeta, 2);
  out.zeta.resize(nz);
  out.psi.resize(nz);
  for (std::size_t i = 0; i < nz; ++i) {
    out.zeta[i] = zmax * double(i) / (nz - 1);
    out.psi[i] = out.psi_at(out.zeta[i]);
  }
  return out;
}

HierarchyState asymptotic_data(const SelfSimilarProfile& profile, double tau0, double beta, const BLGrid& grid,
                               double tau_threshold) {
  if (!(tau0 <= tau_threshold)) {
    std::ostringstream os;
    os << "asymptotic_data: tau0 = " << tau0 << " is not below the threshold " << tau_threshold;
    throw DomainError(os.str());
  }
  if (!(beta > 0.0)) throw DomainError("asymptotic_data: beta must be > 0");
  if (profile.xi.empty() || profile.zeta.empty()) throw DomainError("asymptotic_data: empty profile");
  HierarchyState s(grid, tau0);
  const double amp = std::pow(-tau0, beta - 0.5);
  const double scale = std::pow(-tau0, beta);
  const double reach = 0.5 * grid.length() * scale;
  if (reach > profile.zeta.back() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "asymptotic_data: rescaled separation reaches " << reach << " but the profile covers zeta <= "
       << profile.zeta.back();
    throw ResolutionError(os.str());
  }
  for (std::size_t j = 0; j < grid.n; ++j) {
    s.h1[j] = cplx(amp * profile.psi_at(std::fabs(grid.coord(j)) * scale), 0.0);
  }
  return s;
}

HierarchyState asymptotic_data(const SelfSimilarProfile& profile, double tau0, double beta,
                               const AsymptoticOptions& opts) {
  if (profile.xi.empty() || profile.zeta.empty()) throw DomainError("asymptotic_data: empty profile");
  if (!(tau0 < 0.0)) throw DomainError("asymptotic_data: tau0 must be < 0");
  double box = opts.similarity_box;
  if (!(box > 0.0)) box = std::min(2.0 * profile.zeta.back(), 24.0 / half_width_xi(profile));
  BLGrid g;
  g.n = opts.n;
  g.dx = box / (static_cast<double>(opts.n) * std::pow(-tau0, beta));
  return asymptotic_data(profile, tau0, beta, g, opts.tau_threshold);
}

// ---------------------------------------------------------------- right-hand side

namespace {

struct Fields {
  const BLGrid& g;
  const std::vector<cplx>& h;
  const std::vector<cplx>& G;

  cplx H(long long a, long long b) const { return h[g.wrap(a - b)]; }
  cplx Gc(long long x1, long long x2, long long y1, long long y2) const {
    const std::size_t n = g.n;
    return G[(g.wrap(x1 - y1) * n + g.wrap(x2 - y1)) * n + g.wrap(y2 - y1)];
  }
  // three-point function with the cumulant G3 discarded
  cplx H3(const long long* a, const long long* b) const {
    static constexpr int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    cplx s(0.0, 0.0);
    for (const auto& p : perm) s += H(a[p[0]], b[0]) * H(a[p[1]], b[1]) * H(a[p[2]], b[2]);
    static constexpr int rest[3][2] = {{1, 2}, {0, 2}, {0, 1}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        s += H(a[i], b[j]) * Gc(a[rest[i][0]], a[rest[i][1]], b[rest[j][0]], b[rest[j][1]]);
      }
    return s;
  }
  // i dh1/dtau
  cplx r(long long z) const { return Gc(z, z, 0, z) - Gc(z, 0, 0, 0); }
};

void check_finite(const std::vector<cplx>& v, double tau, const char* what) {
  for (const cplx& x : v) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
      std::ostringstream os;
      os << "boundary-layer closure produced a non-finite " << what << " at tau = " << tau;
      throw NumericalError(os.str());
    }
  }
}

class Fft3 {
 public:
  explicit Fft3(std::size_t n) : n_(n) {
    buf_ = fftw_alloc_complex(n * n * n);
    const int nn = static_cast<int>(n);
    fwd_ = fftw_plan_dft_3d(nn, nn, nn, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_3d(nn, nn, nn, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft3() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }
  Fft3(const Fft3&) = delete;
  Fft3& operator=(const Fft3&) = delete;

  cplx* data() { return reinterpret_cast<cplx*>(buf_); }
  void forward() { fftw_execute(fwd_); }
  void backward() { fftw_execute(bwd_); }
  std::size_t size() const { return n_ * n_ * n_; }

 private:
  std::size_t n_;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

// g -> F^{-1}[mult * F[g]]
void apply_symbol(Fft3& fft, std::vector<cplx>& g, const std::vector<cplx>& mult) {
  cplx* d = fft.data();
  std::copy(g.begin(), g.end(), d);
  fft.forward();
  const double inv = 1.0 / static_cast<double>(fft.size());
  for (std::size_t i = 0; i < fft.size(); ++i) d[i] *= mult[i] * inv;
  fft.backward();
  std::copy(d, d + fft.size(), g.begin());
}

}  // namespace

std::vector<double> transport_symbol(const BLGrid& grid) {
  grid.validate();
  const std::size_t n = grid.n;
  std::vector<double> k(n);
  for (std::size_t j = 0; j < n; ++j) k[j] = 2.0 * pi * grid.coord(j) / (grid.dx * grid.dx * n);
  std::vector<double> s(n * n * n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t w = 0; w < n; ++w) {
        // the y1 derivative sees the total wavenumber, folded back onto the grid
        const double t = k[(u + v + w) % n];
        s[(u * n + v) * n + w] = -k[u] * k[u] - k[v] * k[v] + t * t + k[w] * k[w];
      }
  return s;
}

HierarchyRate bl_rhs_coupling(const HierarchyState& state) {
  const BLGrid& g = state.grid;
  const std::size_t n = g.n;
  const Fields F{g, state.h1, state.g2};
  HierarchyRate out;
  out.dh1.resize(n);
  std::vector<cplx> r(n);
  for (std::size_t j = 0; j < n; ++j) {
    r[j] = F.r(static_cast<long long>(j));
    out.dh1[j] = cplx(0.0, -1.0) * r[j];
  }
  auto R = [&](long long z) { return r[g.wrap(z)]; };
  auto H = [&](long long z) { return state.h1[g.wrap(z)]; };
  out.dg2.assign(n * n * n, cplx(0.0, 0.0));
  parallel_chunks(n, [&](std::size_t uu) {
    const long long u = static_cast<long long>(uu);
    for (std::size_t vv = 0; vv < n; ++vv) {
      const long long v = static_cast<long long>(vv);
      for (std::size_t ww = 0; ww < n; ++ww) {
        const long long w = static_cast<long long>(ww);
        // x1 = u, x2 = v, y1 = 0, y2 = w
        const long long a1[3] = {u, v, u}, b1[3] = {0, w, u};
        const long long a2[3] = {u, v, 0}, b2[3] = {0, w, 0};
        const long long a3[3] = {u, v, v}, b3[3] = {0, w, v};
        const long long a4[3] = {u, v, w}, b4[3] = {0, w, w};
        const cplx a2sum = F.H3(a1, b1) - F.H3(a2, b2) + F.H3(a3, b3) - F.H3(a4, b4);
        const cplx dprod = R(u) * H(v - w) + H(u) * R(v - w) + R(u - w) * H(v) + H(u - w) * R(v);
        out.dg2[(uu * n + vv) * n + ww] = cplx(0.0, -1.0) * (a2sum - dprod);
      }
    }
  });
  check_finite(out.dg2, state.tau, "G2 rate");
  return out;
}

HierarchyRate bl_rhs_truncated(const HierarchyState& state, bool include_transport) {
  HierarchyRate out = bl_rhs_coupling(state);
  if (!include_transport) return out;
  const std::size_t n = state.grid.n;
  const auto sym = transport_symbol(state.grid);
  std::vector<cplx> mult(sym.size());
  for (std::size_t i = 0; i < sym.size(); ++i) mult[i] = cplx(0.0, sym[i]);
  std::vector<cplx> lg = state.g2;
  Fft3 fft(n);
  apply_symbol(fft, lg, mult);
  for (std::size_t i = 0; i < lg.size(); ++i) out.dg2[i] += lg[i];
  return out;
}

HierarchyRun evolve_hierarchy(const HierarchyState& s0, const HierarchyRunOptions& opts) {
  if (!(opts.dtau > 0.0)) throw DomainError("evolve_hierarchy: dtau must be > 0");
  s0.grid.validate();
  const std::size_t n = s0.grid.n;
  const double h = opts.dtau;
  const auto sym = transport_symbol(s0.grid);
  std::vector<cplx> phase(sym.size());
  for (std::size_t i = 0; i < sym.size(); ++i) phase[i] = std::exp(cplx(0.0, sym[i] * h));
  Fft3 fft(n);

  HierarchyRun run;
  run.states.push_back(s0);
  const double rho0 = s0.density();
  HierarchyState cur = s0;
  for (std::size_t step = 0; step < opts.steps; ++step) {
    const HierarchyRate k1 = bl_rhs_coupling(cur);
    HierarchyState pred = cur;
    for (std::size_t j = 0; j < n; ++j) pred.h1[j] += h * k1.dh1[j];
    for (std::size_t i = 0; i < pred.g2.size(); ++i) pred.g2[i] += h * k1.dg2[i];
    apply_symbol(fft, pred.g2, phase);
    pred.tau = cur.tau + h;
    const HierarchyRate k2 = bl_rhs_coupling(pred);

    HierarchyState next = cur;
    for (std::size_t j = 0; j < n; ++j) next.h1[j] += 0.5 * h * (k1.dh1[j] + k2.dh1[j]);
    for (std::size_t i = 0; i < next.g2.size(); ++i) next.g2[i] += 0.5 * h * k1.dg2[i];
    apply_symbol(fft, next.g2, phase);
    for (std::size_t i = 0; i < next.g2.size(); ++i) next.g2[i] += 0.5 * h * k2.dg2[i];
    next.tau = cur.tau + h;
    check_finite(next.g2, next.tau, "G2");
    check_finite(next.h1, next.tau, "H1");
    run.max_density_drift = std::max(run.max_density_drift, std::abs(next.h1[0] - cplx(rho0, 0.0)));
    run.states.push_back(next);
    cur = std::move(next);
  }
  return run;
}

MatchingStudy matching_study(const SelfSimilarProfile& profile, double beta, const std::vector<double>& tau0_list,
                             const AsymptoticOptions& opts, const HierarchyRunOptions& run) {
  if (tau0_list.size() < 2) throw DomainError("matching_study needs at least two tau0 values");
  MatchingStudy out;
  out.predicted_slope = 3.0 * (beta - 0.5);
  std::vector<double> x, y;
  for (double tau0 : tau0_list) {
    const HierarchyState s = asymptotic_data(profile, tau0, beta, opts);
    GrowthRate row;
    row.tau0 = tau0;
    const HierarchyRate rate = bl_rhs_truncated(s);
    for (const cplx& v : rate.dg2) row.source = std::max(row.source, std::abs(v));
    // step shrinks with the grid so the transport phase per step is the same for every tau0
    HierarchyRunOptions ro = run;
    ro.dtau = run.dtau * std::pow(-tau0, -2.0 * beta);
    const HierarchyRun r = evolve_hierarchy(s, ro);
    row.rate = r.states.back().g2_sup() / (ro.dtau * static_cast<double>(ro.steps));
    out.rows.push_back(row);
    x.push_back(std::log(-tau0));
    y.push_back(std::log(row.rate));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  out.measured_slope = sxy / sxx;
  out.relative_error = std::fabs(out.measured_slope - out.predicted_slope) / std::fabs(out.predicted_slope);
  return out;
}

// ---------------------------------------------------------------- phase space

WignerForm wigner_form(const HierarchyState& state) {
  const BLGrid& g = state.grid;
  g.validate();
  const std::size_t n = g.n;
  WignerForm w;
  w.grid = g;
  w.tau = state.tau;
  w.p.resize(n);
  for (std::size_t j = 0; j < n; ++j) w.p[j] = 2.0 * pi * g.coord(j) / (g.dx * g.dx * n);

  w.phi1 = state.h1;
  fftw_plan p1 = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(w.phi1.data()),
                                  reinterpret_cast<fftw_complex*>(w.phi1.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(p1);
  fftw_destroy_plan(p1);
  const double c1 = g.dx / (2.0 * pi);
  for (cplx& v : w.phi1) v *= c1;

  Fft3 fft(n);
  std::copy(state.g2.begin(), state.g2.end(), fft.data());
  fft.forward();
  const double c3 = c1 * c1 * c1;
  w.phi2.assign(fft.data(), fft.data() + fft.size());
  for (cplx& v : w.phi2) v *= c3;
  return w;
}

HierarchyState wigner_inverse(const WignerForm& form) {
  const BLGrid& g = form.grid;
  const std::size_t n = g.n;
  HierarchyState s(g, form.tau);
  s.h1 = form.phi1;
  fftw_plan p1 = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(s.h1.data()),
                                  reinterpret_cast<fftw_complex*>(s.h1.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(p1);
  fftw_destroy_plan(p1);
  const double c1 = 2.0 * pi / (g.dx * n);
  for (cplx& v : s.h1) v *= c1;

  Fft3 fft(n);
  std::copy(form.phi2.begin(), form.phi2.end(), fft.data());
  fft.backward();
  const double c3 = c1 * c1 * c1;
  std::copy(fft.data(), fft.data() + fft.size(), s.g2.begin());
  for (cplx& v : s.g2) v *= c3;
  return s;
}

}  // namespace uukin
