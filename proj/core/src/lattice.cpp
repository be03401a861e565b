#include "uukin/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uukin/collision.hpp"
#include "uukin/error.hpp"
#include "uukin/params.hpp"
#include "uukin/parallel.hpp"

namespace uukin {

Lattice3::Lattice3(int m, double dp) : m_(m), h_((m - 1) / 2), dp_(dp) {
  if (m < 1 || m % 2 == 0) throw DomainError("lattice side M must be odd and >= 1");
  if (!(dp > 0.0)) throw DomainError("lattice spacing dp must be > 0");
  n_ = static_cast<std::size_t>(m) * m * m;
}

DistributionLattice::DistributionLattice(const Lattice3& lat, std::vector<double> v, double time)
    : lattice(lat), values(std::move(v)), t(time) {
  if (values.size() != lattice.size()) throw DomainError("lattice distribution size does not match the lattice");
}

bool DistributionLattice::nonnegative() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return v >= 0.0 && std::isfinite(v); });
}

double DistributionLattice::number() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double DistributionLattice::energy() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += lattice.energy(i) * values[i];
  return s;
}

double pair_correlation_bytes(int m) {
  const double n3 = static_cast<double>(m) * m * m;
  return n3 * n3 * n3 * sizeof(cplx);
}

void LatticeBudget::check(int m) const {
  const double need = pair_correlation_bytes(m);
  if (need > max_bytes) {
    std::ostringstream os;
    os << "pair correlation on an M=" << m << " lattice needs " << need / (1024.0 * 1024.0)
       << " MiB, budget is " << max_bytes / (1024.0 * 1024.0) << " MiB (raise lattice.memory_budget_mb)";
    throw CapacityError(os.str());
  }
}

PairCorrelation::PairCorrelation(const Lattice3& lat, const LatticeBudget& budget) : lat_(lat) {
  budget.check(lat.side());
  data_.assign(lat.size() * lat.size() * lat.size(), cplx(0.0, 0.0));
}

double w_factor(const DistributionLattice& f, const Quadruple& quad, double c) {
  const Lattice3& lat = f.lattice;
  for (int a = 0; a < 3; ++a) {
    if (quad.xi1[a] + quad.xi2[a] != quad.eta1[a] + quad.eta2[a]) return 0.0;
  }
  if (!lat.contains(quad.xi1) || !lat.contains(quad.xi2) || !lat.contains(quad.eta1) || !lat.contains(quad.eta2)) {
    return 0.0;
  }
  return 2.0 * q_factor(f[lat.index(quad.xi1)], f[lat.index(quad.xi2)], f[lat.index(quad.eta1)],
                        f[lat.index(quad.eta2)], c);
}

QuadrupleTable::QuadrupleTable(const Lattice3& lat) : lattice(lat) {
  const std::size_t n = lat.size();
  if (n > 65535) throw CapacityError("lattice too large for the quadruple table");
  for (std::size_t a = 0; a < n; ++a) {
    const Index3 va = lat.vec(a);
    for (std::size_t b = 0; b < n; ++b) {
      const Index3 vb = lat.vec(b);
      for (std::size_t c = 0; c < n; ++c) {
        const Index3 vc = lat.vec(c);
        const Index3 vd{va[0] + vb[0] - vc[0], va[1] + vb[1] - vc[1], va[2] + vb[2] - vc[2]};
        if (!lat.contains(vd)) continue;
        const std::size_t d = lat.index(vd);
        entry.push_back(static_cast<std::uint32_t>((a * n + b) * n + c));
        xi1.push_back(static_cast<std::uint16_t>(a));
        xi2.push_back(static_cast<std::uint16_t>(b));
        eta1.push_back(static_cast<std::uint16_t>(c));
        eta2.push_back(static_cast<std::uint16_t>(d));
        const int mm = lat.level(a) + lat.level(b) - lat.level(c) - lat.level(d);
        mismatch.push_back(static_cast<std::int16_t>(mm));
        max_mismatch = std::max(max_mismatch, std::abs(mm));
      }
    }
  }
}

namespace {

// rows of the table grouped by xi1 (the table is built in xi1-major order)
std::vector<std::size_t> row_starts(const QuadrupleTable& tab) {
  const std::size_t n = tab.lattice.size();
  std::vector<std::size_t> starts(n + 1, tab.size());
  std::size_t r = 0;
  for (std::size_t p = 0; p < n; ++p) {
    while (r < tab.size() && tab.xi1[r] < p) ++r;
    starts[p] = r;
  }
  return starts;
}

}  // namespace

std::vector<double> df_from_phi(const PairCorrelation& phi, double eps, double* imag_residual) {
  const Lattice3& lat = phi.lattice();
  const std::size_t n = lat.size();
  const double dp = lat.spacing();
  const double pref = std::pow(dp, 6) / eps;
  // per-xi1 partial sums, reduced in xi1 order
  std::vector<cplx> gain_part(n * n, cplx(0.0, 0.0));
  std::vector<cplx> loss(n, cplx(0.0, 0.0));
  const auto& d = phi.data();
  parallel_chunks(n, [&](std::size_t a) {
    cplx* gain = gain_part.data() + a * n;
    cplx l(0.0, 0.0);
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t base = (a * n + b) * n;
      for (std::size_t c = 0; c < n; ++c) {
        const cplx v = d[base + c];
        gain[c] += v;
        l += v;
      }
    }
    loss[a] = l;
  });
  std::vector<cplx> gain(n, cplx(0.0, 0.0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t c = 0; c < n; ++c) gain[c] += gain_part[a * n + c];

  std::vector<double> out(n);
  double max_re = 0.0, max_im = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const cplx v = cplx(0.0, -pref) * (gain[p] - loss[p]);
    out[p] = v.real();
    max_re = std::max(max_re, std::fabs(v.real()));
    max_im = std::max(max_im, std::fabs(v.imag()));
  }
  if (imag_residual) *imag_residual = max_re > 0.0 ? max_im / max_re : max_im;
  return out;
}

CoupledRate rhs_coupled(const DistributionLattice& f, const PairCorrelation& phi, double eps, double c) {
  if (!(eps > 0.0)) throw DomainError("rhs_coupled: eps must be > 0");
  if (phi.lattice().side() != f.lattice.side()) throw DomainError("rhs_coupled: lattice mismatch");
  const Lattice3& lat = f.lattice;
  const QuadrupleTable tab(lat);
  CoupledRate out;
  out.df = df_from_phi(phi, eps, &out.imag_residual);
  out.dphi = PairCorrelation(lat, LatticeBudget{pair_correlation_bytes(lat.side()) + 1.0});
  const double dp2 = lat.spacing() * lat.spacing();
  auto& dd = out.dphi.data();
  const auto& pd = phi.data();
  for (std::size_t r = 0; r < tab.size(); ++r) {
    const double q = q_factor(f[tab.xi1[r]], f[tab.xi2[r]], f[tab.eta1[r]], f[tab.eta2[r]], c);
    const double omega = dp2 * tab.mismatch[r] / (eps * eps);
    const std::size_t e = tab.entry[r];
    dd[e] = cplx(0.0, -omega) * pd[e] + cplx(0.0, -2.0 * q / eps);
  }
  return out;
}

void filon_weights(double omega, double h, cplx& w0, cplx& w1) {
  // x = -i omega h; phi1 = (e^x - 1)/x, psi2 = ((x - 1) e^x + 1)/x^2
  const cplx x(0.0, -omega * h);
  cplx phi1, psi2;
  if (std::abs(x) < 0.5) {
    cplx term(1.0, 0.0);
    phi1 = cplx(0.0, 0.0);
    psi2 = cplx(0.0, 0.0);
    double fact = 1.0;  // k!
    for (int k = 0; k < 30; ++k) {
      phi1 += term / (fact * (k + 1));
      psi2 += term / (fact * (k + 2));
      term *= x;
      fact *= (k + 1);
    }
  } else {
    const cplx ex = std::exp(x);
    phi1 = (ex - 1.0) / x;
    psi2 = ((x - 1.0) * ex + 1.0) / (x * x);
  }
  w0 = h * psi2;
  w1 = h * (phi1 - psi2);
}

std::vector<double> rhs_markov(const DistributionLattice& f, double c) {
  const Lattice3& lat = f.lattice;
  const QuadrupleTable tab(lat);
  const auto starts = row_starts(tab);
  const std::size_t n = lat.size();
  const double pref = 4.0 * constants::pi * std::pow(lat.spacing(), 4);
  std::vector<double> out(n, 0.0);
  parallel_chunks(n, [&](std::size_t p) {
    double s = 0.0;
    for (std::size_t r = starts[p]; r < starts[p + 1]; ++r) {
      if (tab.mismatch[r] != 0) continue;
      s += q_factor(f[tab.xi1[r]], f[tab.xi2[r]], f[tab.eta1[r]], f[tab.eta2[r]], c);
    }
    out[p] = pref * s;
  });
  return out;
}

DistributionLattice lattice_equilibrium(const Lattice3& lat, double theta, double mu, double c) {
  if (!(theta > 0.0) || !(mu < 0.0) || !(c > 0.0)) {
    throw DomainError("lattice_equilibrium needs theta > 0, mu < 0, c > 0");
  }
  std::vector<double> v(lat.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c / std::expm1((lat.energy(i) - mu) / theta);
  return DistributionLattice(lat, std::move(v));
}

DistributionLattice lattice_random_initial(const Lattice3& lat, double amplitude, double theta, double jitter,
                                           std::uint64_t seed) {
  if (!(amplitude >= 0.0) || !(theta > 0.0) || !(jitter >= 0.0 && jitter < 1.0)) {
    throw DomainError("lattice_random_initial needs amplitude >= 0, theta > 0, 0 <= jitter < 1");
  }
  std::vector<double> v(lat.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + (i + 1) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    const double u = 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
    v[i] = amplitude * std::exp(-lat.energy(i) / theta) * (1.0 + jitter * u);
  }
  return DistributionLattice(lat, std::move(v));
}

}  // namespace uukin
