#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace uukin {

using cplx = std::complex<double>;
using Index3 = std::array<int, 3>;

/// Cubic momentum lattice p = dp * (i, j, k), i, j, k in [-h, h], M = 2h + 1 odd.
class Lattice3 {
 public:
  Lattice3() = default;
  Lattice3(int m, double dp);

  int side() const { return m_; }
  int half() const { return h_; }
  double spacing() const { return dp_; }
  std::size_t size() const { return n_; }

  bool contains(const Index3& v) const {
    return v[0] >= -h_ && v[0] <= h_ && v[1] >= -h_ && v[1] <= h_ && v[2] >= -h_ && v[2] <= h_;
  }
  std::size_t index(const Index3& v) const {
    return (static_cast<std::size_t>(v[0] + h_) * m_ + (v[1] + h_)) * m_ + (v[2] + h_);
  }
  Index3 vec(std::size_t idx) const {
    const int c = static_cast<int>(idx % m_);
    const int b = static_cast<int>((idx / m_) % m_);
    const int a = static_cast<int>(idx / (static_cast<std::size_t>(m_) * m_));
    return {a - h_, b - h_, c - h_};
  }
  /// |i|^2 as an integer; eps(p) = dp^2 * level.
  int level(std::size_t idx) const {
    const Index3 v = vec(idx);
    return v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  }
  double energy(std::size_t idx) const { return dp_ * dp_ * level(idx); }

 private:
  int m_ = 0, h_ = 0;
  double dp_ = 0.0;
  std::size_t n_ = 0;
};

struct DistributionLattice {
  Lattice3 lattice;
  std::vector<double> values;
  double t = 0.0;

  DistributionLattice() = default;
  DistributionLattice(const Lattice3& lat, std::vector<double> v, double time = 0.0);
  double operator[](std::size_t i) const { return values[i]; }
  bool nonnegative() const;
  double number() const;  // sum_p f
  double energy() const;  // sum_p eps(p) f
};

/// Bytes needed for a PairCorrelation on an M-lattice (M^9 complex values).
double pair_correlation_bytes(int m);

struct LatticeBudget {
  /// Default gate: M = 5 (31 MB) fits, M = 7 (646 MB) needs an explicit larger budget.
  double max_bytes = 512.0 * 1024.0 * 1024.0;
  void check(int m) const;  // throws CapacityError before any allocation
};

/// phi(xi1, xi2; eta1) with eta2 = xi1 + xi2 - eta1 implied; entries whose eta2
/// falls off the lattice are kept at 0 and never read.
class PairCorrelation {
 public:
  PairCorrelation() = default;
  PairCorrelation(const Lattice3& lat, const LatticeBudget& budget = {});

  const Lattice3& lattice() const { return lat_; }
  std::size_t size() const { return data_.size(); }
  std::size_t index(std::size_t xi1, std::size_t xi2, std::size_t eta1) const {
    return (xi1 * lat_.size() + xi2) * lat_.size() + eta1;
  }
  cplx& operator()(std::size_t xi1, std::size_t xi2, std::size_t eta1) { return data_[index(xi1, xi2, eta1)]; }
  cplx operator()(std::size_t xi1, std::size_t xi2, std::size_t eta1) const { return data_[index(xi1, xi2, eta1)]; }
  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  double t = 0.0;
  double eps = 0.0;

 private:
  Lattice3 lat_;
  std::vector<cplx> data_;
};

struct Quadruple {
  Index3 xi1, xi2, eta1, eta2;
};

/// 2 q[f] when xi1 + xi2 == eta1 + eta2 on the lattice, 0 otherwise.
double w_factor(const DistributionLattice& f, const Quadruple& quad, double c);

/// Precomputed list of momentum-closing quadruples (xi1, xi2; eta1, eta2) with all four on the lattice,
/// stored by PairCorrelation entry index, and the integer energy mismatch
/// level(xi1) + level(xi2) - level(eta1) - level(eta2).
struct QuadrupleTable {
  Lattice3 lattice;
  std::vector<std::uint32_t> entry;  // PairCorrelation index
  std::vector<std::uint16_t> xi1, xi2, eta1, eta2;
  std::vector<std::int16_t> mismatch;
  int max_mismatch = 0;

  explicit QuadrupleTable(const Lattice3& lat);
  std::size_t size() const { return entry.size(); }
};

struct CoupledRate {
  std::vector<double> df;    // real part of df/dt
  double imag_residual = 0;  // max |Im df/dt| / max |df/dt|
  PairCorrelation dphi;
};

/// Right-hand side of the closed f/g2 system on the lattice:
///   df/dt(p) = -(i/eps) dp^6 [ sum phi(xi1, xi2; p, .) - sum phi(p, xi2; eta1, .) ]
///   dphi/dt  = -i (Delta_eps / eps^2) phi - (i/eps) w
CoupledRate rhs_coupled(const DistributionLattice& f, const PairCorrelation& phi, double eps, double c);

/// Only the f-part of rhs_coupled, and its imaginary residual.
std::vector<double> df_from_phi(const PairCorrelation& phi, double eps, double* imag_residual = nullptr);

/// Exponential-integrator weights for int_0^h exp(-i omega (h - s)) q(s) ds with q linear on
/// [0, h] (q(0) = q0, q(h) = q1): result = w0 q0 + w1 q1.
void filon_weights(double omega, double h, cplx& w0, cplx& w1);

struct LatticeHistory {
  std::vector<DistributionLattice> snapshots;  // increasing t, first at t = 0
  /// Maximum gap between stored snapshots allowed by history readers.
  double max_gap = 0.0;  // 0 -> no check
  void check_covers(double t) const;
};

/// phi at a single quadruple from the stored history (piecewise-linear q between snapshots):
///   -(2i/eps) int_0^t exp(-i Delta_eps (t - s) / eps^2) q[f](s) ds
cplx phi_closed_form(const LatticeHistory& history, const Quadruple& quad, double t, double eps, double c);

/// df/dt of the non-Markovian equation evaluated from the stored history
///   (4/eps^2) dp^6 int_0^t ds sum_{p3, p4} cos(Delta_eps (t - s)/eps^2) q[f](s).
std::vector<double> rhs_memory(const LatticeHistory& history, double t, double eps, double c);

/// Lattice kinetic limit: 4 pi dp^4 sum over energy-conserving quadruples of q.
std::vector<double> rhs_markov(const DistributionLattice& f, double c);

// ---------------------------------------------------------------- integrators

struct LatticeRunOptions {
  double dt = 0.01;
  LatticeBudget budget;
  /// Resume state. The run starts at f0.t; the coupled route reads phi from `phi0`
  /// and the memory route reads the history [0, f0.t] from `history` (both optional at t = 0).
  const PairCorrelation* phi0 = nullptr;
  const LatticeHistory* history = nullptr;
};

struct LatticeRun {
  std::vector<DistributionLattice> trajectory;  // every step
  double max_imag_residual = 0.0;
  double max_conjugation_error = 0.0;  // coupled route only
  PairCorrelation final_phi;           // coupled route only
};

/// Heun predictor-corrector with an exponential step for phi (coupled f/phi system).
LatticeRun run_coupled(const DistributionLattice& f0, double t_end, double eps, double c,
                       const LatticeRunOptions& opts = {});
/// Same time grid and quadrature as run_coupled, but the memory integral is summed from the history.
LatticeRun run_memory(const DistributionLattice& f0, double t_end, double eps, double c,
                      const LatticeRunOptions& opts = {});
/// Heun integration of the lattice kinetic limit.
LatticeRun run_markov(const DistributionLattice& f0, double t_end, double c, const LatticeRunOptions& opts = {});

struct MarkovLimitRow {
  double eps = 0.0;
  double sup_error = 0.0;   // sup_p |f_memory(t_end) - f_markov(t_end)|
  double rel_error = 0.0;   // sup_error / sup_p f_markov(t_end)
};

struct MarkovLimitStudy {
  std::vector<MarkovLimitRow> rows;
  bool monotone = false;  // strictly decreasing sup_error along eps_list order
};

MarkovLimitStudy markovian_limit_study(const DistributionLattice& f0, const std::vector<double>& eps_list,
                                       double t_end, double c, const LatticeRunOptions& opts = {});

/// Seeded non-equilibrium lattice data: f = amplitude exp(-eps/theta) (1 + jitter u), u uniform in [-1, 1).
DistributionLattice lattice_random_initial(const Lattice3& lat, double amplitude, double theta, double jitter,
                                           std::uint64_t seed);
DistributionLattice lattice_equilibrium(const Lattice3& lat, double theta, double mu, double c);

}  // namespace uukin
