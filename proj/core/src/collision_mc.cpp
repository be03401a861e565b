#include <array>
#include <cmath>
#include <sstream>

#include "uukin/collision.hpp"
#include "uukin/error.hpp"
#include "uukin/params.hpp"
#include "uukin/parallel.hpp"

namespace uukin {

using constants::pi;

namespace {

constexpr std::uint64_t kChunk = 8192;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// uniform in (0, 1], a pure function of (seed, sample, dim)
inline double uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t dim) {
  const std::uint64_t h = splitmix64(splitmix64(seed) ^ splitmix64(sample * 8 + dim));
  return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

inline std::array<double, 3> direction(double u, double v) {
  const double ct = 2.0 * u - 1.0;
  const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  const double ph = 2.0 * pi * v;
  return {st * std::cos(ph), st * std::sin(ph), ct};
}

inline double norm2(const std::array<double, 3>& a) { return a[0] * a[0] + a[1] * a[1] + a[2] * a[2]; }

}  // namespace

MonteCarloEstimate collision_mc(const DistributionIso& f, double p1, std::uint64_t n_samples, std::uint64_t seed,
                                const MonteCarloOptions& opts) {
  if (n_samples < 1000) throw DomainError("collision_mc needs n_samples >= 1000");
  if (!(opts.occupancy_c > 0.0)) throw DomainError("collision_mc: c must be > 0");
  const RadialGrid& grid = f.grid();
  const double eps1 = p1 * p1;
  if (!(p1 >= 0.0) || eps1 > grid.eps_max()) {
    std::ostringstream os;
    os << "collision_mc: p1 = " << p1 << " outside grid support [0, " << std::sqrt(grid.eps_max()) << "]";
    throw DomainError(os.str());
  }
  if (!f.nonnegative()) throw DomainError("collision_mc received negative or non-finite f");

  double scale = opts.proposal_scale;
  if (!(scale > 0.0)) {
    const MomentReport m = moments(f, opts.occupancy_c);
    scale = m.number > 0.0 ? m.energy / m.number : 1.0;
  }
  const double c = opts.occupancy_c;
  const Interpolation rule = opts.interpolation;
  const double f1 = interpolate_f(f, eps1, rule, c);
  const double pref = 4.0 * pi * pi * pi;

  const std::uint64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<double> sums(n_chunks, 0.0), sq(n_chunks, 0.0);
  parallel_chunks(n_chunks, [&](std::size_t chunk) {
    const std::uint64_t begin = chunk * kChunk;
    const std::uint64_t end = std::min<std::uint64_t>(n_samples, begin + kChunk);
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t n = begin; n < end; ++n) {
      const double eps2 = -scale * std::log(uniform(seed, n, 0));
      const double q2 = std::sqrt(eps2);
      const auto d2 = direction(uniform(seed, n, 1), uniform(seed, n, 2));
      const auto om = direction(uniform(seed, n, 3), uniform(seed, n, 4));
      const std::array<double, 3> v2{q2 * d2[0], q2 * d2[1], q2 * d2[2]};
      const std::array<double, 3> g{-v2[0], -v2[1], p1 - v2[2]};
      const double k0 = 0.5 * std::sqrt(norm2(g));
      std::array<double, 3> v3, v4;
      for (int a = 0; a < 3; ++a) {
        const double centre = 0.5 * ((a == 2 ? p1 : 0.0) + v2[a]);
        v3[a] = centre + k0 * om[a];
        v4[a] = centre - k0 * om[a];
      }
      const double f2 = interpolate_f(f, eps2, rule, c);
      const double f3 = interpolate_f(f, norm2(v3), rule, c);
      const double f4 = interpolate_f(f, norm2(v4), rule, c);
      const double q = opts.classical ? q_factor_classical(f1, f2, f3, f4, c) : q_factor(f1, f2, f3, f4, c);
      const double x = pref * 2.0 * k0 * q2 * scale * std::exp(eps2 / scale) * q;
      s += x;
      s2 += x * x;
    }
    sums[chunk] = s;
    sq[chunk] = s2;
  });

  double s = 0.0, s2 = 0.0;
  for (std::uint64_t i = 0; i < n_chunks; ++i) {
    s += sums[i];
    s2 += sq[i];
  }
  const double n = static_cast<double>(n_samples);
  MonteCarloEstimate out;
  out.samples = n_samples;
  out.estimate = s / n;
  const double var = std::max(0.0, (s2 / n - out.estimate * out.estimate) * n / (n - 1.0));
  out.standard_error = std::sqrt(var / n);
  return out;
}

}  // namespace uukin
