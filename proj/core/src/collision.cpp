#include "uukin/collision.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uukin/error.hpp"
#include "uukin/params.hpp"
#include "uukin/parallel.hpp"

namespace uukin {

using constants::pi;

std::string to_string(Interpolation i) { return i == Interpolation::Linear ? "linear" : "entropic"; }

Interpolation interpolation_from_string(const std::string& s) {
  if (s == "linear") return Interpolation::Linear;
  if (s == "entropic") return Interpolation::Entropic;
  throw DomainError("unknown interpolation rule '" + s + "' (expected linear|entropic)");
}

void CollisionConfig::validate() const {
  if (!(occupancy_c > 0.0)) throw DomainError("collision.c must be > 0");
  if (quadrature_order < 2) throw DomainError("collision.quadrature_order must be >= 2");
  if (quadrature_order != 2 && quadrature_order != 4) {
    throw DomainError("collision.quadrature_order must be 2 or 4");
  }
}

namespace {

void require_valid_input(const DistributionIso& f) {
  if (f.grid().eps_min() <= 0.0) {
    throw DomainError("collision operator needs a grid with eps_0 > 0");
  }
  const auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0) || !std::isfinite(v[i])) {
      std::ostringstream os;
      os << "collision operator received f[" << i << "] = " << v[i] << " (must be finite and >= 0)";
      throw DomainError(os.str());
    }
  }
}

// psi = ln(1 + c/f), capped so that f == 0 maps to a finite value (f(psi_cap) ~ 1e-304 c)
constexpr double kPsiCap = 700.0;

inline double psi_of(double f, double c) { return f > 0.0 ? std::min(std::log1p(c / f), kPsiCap) : kPsiCap; }

/// Interpolates f between nodes l and l+1 at fraction t.
inline double interp_cell(double fl, double fr, double t, double c, Interpolation rule) {
  if (rule == Interpolation::Entropic) {
    return c / std::expm1((1.0 - t) * psi_of(fl, c) + t * psi_of(fr, c));
  }
  return (1.0 - t) * fl + t * fr;
}

// Conservative weak form. Using the permutation symmetry of the integrand,
//   d/dt sum_m phi_m n_m = 8 pi^4 int_{eps3 <= min(eps1, eps2)} sqrt(eps3) q (phi1 + phi2 - phi3 - phi4)
// where n = 2 pi sqrt(eps) f and eps4 = eps1 + eps2 - eps3 is the largest of the
// four energies. Each grid triple moves Gamma particles from (3, 4) into (1, 2);
// the off-grid eps4 is split onto its two neighbours with weights that preserve
// both particle number and energy.
CollisionRate symmetric_rate(const DistributionIso& dist, const CollisionConfig& cfg) {
  const RadialGrid& grid = dist.grid();
  const std::size_t n = grid.size();
  const auto x = grid.nodes();
  const auto w = grid.weights(cfg.quadrature_order);
  const auto f = dist.values();
  const double c = cfg.occupancy_c;
  const double eps_max = grid.eps_max();
  const double prefactor = 8.0 * pi * pi * pi * pi;
  const bool entropic = cfg.interpolation == Interpolation::Entropic;

  std::vector<double> wk(n), psi(n), inv_h(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    wk[k] = w[k] * std::sqrt(x[k]);
    psi[k] = psi_of(f[k], c);
    if (k + 1 < n) inv_h[k] = 1.0 / (x[k + 1] - x[k]);
  }

  // One accumulation row per outer index i, reduced in index order afterwards,
  // so the result does not depend on how rows are spread over workers.
  std::vector<double> rows(n * n, 0.0);
  parallel_chunks(n, [&](std::size_t i) {
    double* acc = rows.data() + i * n;
    std::vector<std::size_t> cell(i);
    std::vector<double> frac(i), gamma(i);
    const double fi = f[i];
    for (std::size_t j = i; j < n; ++j) {
      const double fj = f[j];
      const double pair_weight = (i == j ? 1.0 : 2.0) * w[i] * w[j] * prefactor;
      const double e12 = x[i] + x[j];
      // eps4 = e12 - eps_k falls with k; skip the k whose eps4 leaves the grid
      std::size_t k0 = 0;
      while (k0 < i && e12 - x[k0] > eps_max) ++k0;
      if (k0 == i) continue;
      std::size_t l = grid.locate(e12 - x[k0]);
      // k == i gives the trivial quadruple (i, j; i, j) with q == 0.
      for (std::size_t k = k0; k < i; ++k) {
        const double e4 = e12 - x[k];
        while (l > 0 && x[l] > e4) --l;
        cell[k] = l;
        frac[k] = (e4 - x[l]) * inv_h[l];
      }
      // q = f4 A - B with A, B independent of f4
      const double gi = c + fi, gj = c + fj, fij = fi * fj;
      for (std::size_t k = k0; k < i; ++k) {
        const std::size_t lk = cell[k];
        const double t = frac[k];
        double f4;
        if (entropic) {
          f4 = c / std::expm1((1.0 - t) * psi[lk] + t * psi[lk + 1]);
        } else {
          f4 = (1.0 - t) * f[lk] + t * f[lk + 1];
        }
        const double fk = f[k];
        double q;
        if (cfg.classical) {
          q = c * c * (fk * f4 - fij);
        } else {
          q = f4 * (fk * gi * gj - fij * (c + fk)) - c * fij * (c + fk);
        }
        gamma[k] = pair_weight * wk[k] * q;
      }
      double gsum = 0.0;
      for (std::size_t k = k0; k < i; ++k) {
        const double g = gamma[k];
        const double t = frac[k];
        gsum += g;
        acc[k] -= g;
        acc[cell[k]] -= (1.0 - t) * g;
        acc[cell[k] + 1] -= t * g;
      }
      acc[i] += gsum;
      acc[j] += gsum;
    }
  });

  std::vector<double> dn(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = rows.data() + i * n;
    for (std::size_t m = 0; m < n; ++m) dn[m] += row[m];
  }

  CollisionRate out;
  out.rate.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    out.rate[m] = dn[m] / (w[m] * 2.0 * pi * std::sqrt(x[m]));
    out.number_rate += dn[m];
    out.energy_rate += dn[m] * x[m];
  }
  return out;
}

// Direct quadrature of the reduced integral at each node (not conservative).
CollisionRate pointwise_rate(const DistributionIso& dist, const CollisionConfig& cfg) {
  const RadialGrid& grid = dist.grid();
  const std::size_t n = grid.size();
  const auto x = grid.nodes();
  const auto w = grid.weights(cfg.quadrature_order);
  const auto f = dist.values();
  const double c = cfg.occupancy_c;
  const double eps_max = grid.eps_max();

  std::vector<double> sq(n);
  for (std::size_t k = 0; k < n; ++k) sq[k] = std::sqrt(x[k]);

  std::vector<double> rate(n, 0.0);
  parallel_chunks(n, [&](std::size_t i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double e12 = x[i] + x[j];
      for (std::size_t k = 0; k < n; ++k) {
        const double e4 = e12 - x[k];
        if (e4 < 0.0) break;
        if (e4 > eps_max) continue;
        double f4;
        if (e4 <= x[0]) {
          f4 = f[0];
        } else {
          const std::size_t l = grid.locate(e4);
          const double t = (e4 - x[l]) / (x[l + 1] - x[l]);
          f4 = interp_cell(f[l], f[l + 1], t, c, cfg.interpolation);
        }
        const double kernel = std::min({sq[i], sq[j], sq[k], std::sqrt(e4)});
        const double q = cfg.classical ? q_factor_classical(f[i], f[j], f[k], f4, c) : q_factor(f[i], f[j], f[k], f4, c);
        sum += w[j] * w[k] * kernel * q;
      }
    }
    rate[i] = 4.0 * pi * pi * pi / sq[i] * sum;
  });

  CollisionRate out;
  out.rate = std::move(rate);
  for (std::size_t m = 0; m < n; ++m) {
    const double dn = w[m] * 2.0 * pi * sq[m] * out.rate[m];
    out.number_rate += dn;
    out.energy_rate += dn * x[m];
  }
  return out;
}

}  // namespace

double interpolate_f(const DistributionIso& f, double eps, Interpolation rule, double c) {
  const RadialGrid& grid = f.grid();
  if (eps <= grid.eps_min()) return f[0];
  if (eps > grid.eps_max()) return 0.0;
  const std::size_t l = grid.locate(eps);
  const double t = (eps - grid.node(l)) / (grid.node(l + 1) - grid.node(l));
  return interp_cell(f[l], f[l + 1], t, c, rule);
}

CollisionRate collision_rhs_iso(const DistributionIso& f, const CollisionConfig& cfg) {
  cfg.validate();
  require_valid_input(f);
  return cfg.symmetrize ? symmetric_rate(f, cfg) : pointwise_rate(f, cfg);
}

MomentReport moments(const DistributionIso& f, double occupancy_c, int quadrature_order) {
  const RadialGrid& grid = f.grid();
  const auto x = grid.nodes();
  const auto w = grid.weights(quadrature_order);
  const double c = occupancy_c;
  const double c_log_c = c * std::log(c);
  MomentReport m;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double fi = f[i];
    const double base = w[i] * 2.0 * pi * std::sqrt(x[i]);
    m.number += base * fi;
    m.energy += base * x[i] * fi;
    const double flogf = fi > 0.0 ? fi * std::log(fi) : 0.0;
    m.entropy += base * ((c + fi) * std::log(c + fi) - flogf - c_log_c);
  }
  return m;
}

double entropy_production(const DistributionIso& f, const std::vector<double>& rate, double occupancy_c,
                          int quadrature_order) {
  const RadialGrid& grid = f.grid();
  const auto x = grid.nodes();
  const auto w = grid.weights(quadrature_order);
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double fi = std::max(f[i], 1e-300);
    total += w[i] * 2.0 * pi * std::sqrt(x[i]) * std::log1p(occupancy_c / fi) * rate[i];
  }
  return total;
}

DistributionIso equilibrium(double theta, double mu, double c, GridPtr grid) {
  if (!(theta > 0.0)) throw DomainError("equilibrium: theta must be > 0");
  if (!(mu < 0.0)) throw DomainError("equilibrium: mu must be < 0 (mu >= 0 is not normalizable)");
  if (!(c > 0.0)) throw DomainError("equilibrium: c must be > 0");
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c / std::expm1((grid->node(i) - mu) / theta);
  return DistributionIso(std::move(grid), std::move(v));
}

}  // namespace uukin
